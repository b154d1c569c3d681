"""Record splitting, term extraction and ranked vocabularies.

Terms are maximal runs of letters, separated by whitespace, punctuation and
symbols. A term survives only if it is made entirely of ASCII letters; any
run carrying a digit or an accented letter is dropped whole. Terms are
lowercased and single-character terms are kept. No stemming or stop-word
removal is done.
"""

from __future__ import annotations

import functools
import re
import sys
import unicodedata
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class DecodeError(ValueError):
    """Input bytes could not be decoded in the declared encoding."""

    def __init__(self, offset: int, encoding: str, reason: str = ""):
        self.offset = offset
        self.encoding = encoding
        msg = f"cannot decode byte at offset {offset} as {encoding}"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)


class EmptyInputError(ValueError):
    pass


class EmptyVocabularyError(ValueError):
    pass


@dataclass(frozen=True)
class Record:
    record_id: str
    raw_text: str
    separator: str = ""
    source: str | None = None


@dataclass
class RecordSet:
    """Ordered records split from one or more raw inputs.

    ``preamble`` and each record's ``separator`` hold the text that is not
    part of any record (delimiter lines, blank segments), so that
    :meth:`to_text` rebuilds the input exactly.
    """

    records: list[Record]
    preamble: str = ""
    encoding: str = "latin-1"

    def __post_init__(self):
        seen = set()
        for rec in self.records:
            if not rec.record_id:
                raise ValueError("record ids must be non-empty")
            if rec.record_id in seen:
                raise ValueError(f"duplicate record id {rec.record_id!r}")
            seen.add(rec.record_id)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def ids(self) -> list[str]:
        return [r.record_id for r in self.records]

    @property
    def texts(self) -> list[str]:
        return [r.raw_text for r in self.records]

    def to_text(self) -> str:
        return self.preamble + "".join(r.raw_text + r.separator for r in self.records)

    def to_bytes(self) -> bytes:
        return self.to_text().encode(self.encoding)

    def concat(self, other: "RecordSet") -> "RecordSet":
        if other.preamble:
            raise ValueError("cannot concatenate a record set with a preamble")
        return RecordSet(self.records + other.records, self.preamble, self.encoding)


@dataclass(frozen=True)
class DelimiterRule:
    """Either a literal delimiter line or a fixed number of lines per record."""

    marker: str | None = None
    count: int | None = None

    def __post_init__(self):
        if (self.marker is None) == (self.count is None):
            raise ValueError("give exactly one of marker or count")
        if self.count is not None and self.count < 1:
            raise ValueError("line count must be >= 1")

    @classmethod
    def parse(cls, spec: str) -> "DelimiterRule":
        """``count:N`` or ``literal:TEXT``; anything else is a literal marker."""
        if spec.startswith("count:"):
            return cls(count=int(spec[len("count:"):]))
        if spec.startswith("literal:"):
            return cls(marker=spec[len("literal:"):])
        return cls(marker=spec)


MEAL_MASTER = DelimiterRule(marker="-----")


def _decode(raw: bytes, encoding: str) -> str:
    try:
        return raw.decode(encoding)
    except UnicodeDecodeError as exc:
        raise DecodeError(exc.start, encoding, exc.reason) from None


def split_records(
    raw: bytes,
    delimiter: DelimiterRule | str = MEAL_MASTER,
    encoding: str = "latin-1",
    prefix: str = "r",
    source: str | None = None,
) -> RecordSet:
    """Split a byte stream into records.

    With a literal marker, a line whose content (line ending excluded) equals
    the marker closes the current record. Segments holding only whitespace
    are not records; their text is folded into the neighbouring separator.
    With a line count, every ``count`` lines form one record.

    Record ids are ``prefix`` followed by a zero-padded ordinal.
    """
    if isinstance(delimiter, str):
        delimiter = DelimiterRule.parse(delimiter)
    text = _decode(raw, encoding)
    lines = text.splitlines(keepends=True)

    # (body, separator) pairs; the separator may be empty
    segments: list[tuple[str, str]] = []
    if delimiter.count is not None:
        n = delimiter.count
        for i in range(0, len(lines), n):
            segments.append(("".join(lines[i:i + n]), ""))
    else:
        body: list[str] = []
        for line in lines:
            if line.rstrip("\r\n") == delimiter.marker:
                segments.append(("".join(body), line))
                body = []
            else:
                body.append(line)
        if body:
            segments.append(("".join(body), ""))

    preamble = ""
    records: list[Record] = []
    for body, sep in segments:
        if body.strip():
            rid = f"{prefix}{len(records) + 1:06d}"
            records.append(Record(rid, body, sep, source))
        elif records:
            last = records[-1]
            records[-1] = Record(last.record_id, last.raw_text,
                                 last.separator + body + sep, last.source)
        else:
            preamble += body + sep
    if not records:
        raise EmptyInputError("input contains no records")
    return RecordSet(records, preamble, encoding)


@dataclass(frozen=True)
class TokenStream:
    record_id: str
    tokens: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.tokens)


_ASCII_WORD = re.compile(r"[A-Za-z]+\Z")


@functools.lru_cache(maxsize=None)
def _run_pattern() -> re.Pattern:
    # a run is letters, digits and combining marks; \w minus "_" covers the
    # first two, marks are collected once from the Unicode tables
    spans = []
    start = prev = None
    for cp in range(sys.maxunicode + 1):
        if unicodedata.category(chr(cp))[0] != "M":
            continue
        if prev is not None and cp == prev + 1:
            prev = cp
            continue
        if start is not None:
            spans.append((start, prev))
        start = prev = cp
    spans.append((start, prev))
    marks = "".join(f"\\U{a:08x}-\\U{b:08x}" for a, b in spans)
    return re.compile(f"(?:[^\\W_]|[{marks}])+")


def tokenize(text: str) -> list[str]:
    """Extract lowercase ASCII-letter terms from ``text``.

    >>> tokenize("Add zzzucchini, peppers and onion.")
    ['add', 'zzzucchini', 'peppers', 'and', 'onion']
    >>> tokenize("1/4 c  Olive oil")
    ['c', 'olive', 'oil']
    """
    if text.isascii():
        runs = re.findall(r"[A-Za-z0-9]+", text)
    else:
        runs = _run_pattern().findall(text)
    return [w.lower() for w in runs if _ASCII_WORD.match(w)]


def tokenize_records(records: RecordSet | Iterable[Record]) -> list[TokenStream]:
    return [TokenStream(r.record_id, tuple(tokenize(r.raw_text))) for r in records]


@dataclass(frozen=True)
class VocabEntry:
    term: str
    frequency: int
    rank: int


@dataclass
class Vocabulary:
    entries: list[VocabEntry]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        self._index = {e.term: i for i, e in enumerate(self.entries)}
        if len(self._index) != len(self.entries):
            raise ValueError("vocabulary terms must be unique")

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __contains__(self, term: str) -> bool:
        return term in self._index

    def __getitem__(self, term: str) -> VocabEntry:
        return self.entries[self._index[term]]

    @property
    def terms(self) -> list[str]:
        return [e.term for e in self.entries]

    @property
    def frequencies(self) -> list[int]:
        return [e.frequency for e in self.entries]

    def index(self, term: str) -> int:
        return self._index[term]

    @property
    def total(self) -> int:
        return sum(e.frequency for e in self.entries)


def _ranked(counts: Iterable[tuple[str, int]]) -> Vocabulary:
    # ties: lexicographic ascending
    ordered = sorted(counts, key=lambda kv: (-kv[1], kv[0]))
    return Vocabulary([VocabEntry(t, f, i + 1) for i, (t, f) in enumerate(ordered)])


def build_vocabulary(streams: Iterable[TokenStream | Sequence[str]]) -> Vocabulary:
    counts: Counter[str] = Counter()
    for s in streams:
        counts.update(s.tokens if isinstance(s, TokenStream) else s)
    if not counts:
        raise EmptyVocabularyError("no terms found in any stream")
    return _ranked(counts.items())


def top_terms(vocab: Vocabulary, k: int) -> Vocabulary:
    if not 1 <= k <= len(vocab):
        raise IndexError(f"k={k} outside 1..{len(vocab)}")
    return Vocabulary([VocabEntry(e.term, e.frequency, i + 1)
                       for i, e in enumerate(vocab.entries[:k])])


def filter_terms(vocab: Vocabulary, min_length: int = 1) -> Vocabulary:
    """Keep terms with at least ``min_length`` characters, re-ranked."""
    kept = [(e.term, e.frequency) for e in vocab if len(e.term) >= min_length]
    if not kept:
        raise EmptyVocabularyError(f"no terms of length >= {min_length}")
    return _ranked(kept)


def restrict(vocab: Vocabulary, terms: Iterable[str]) -> Vocabulary:
    """Sub-vocabulary on a chosen term list (e.g. an ingredient set)."""
    kept = [(t, vocab[t].frequency) for t in dict.fromkeys(terms) if t in vocab]
    if not kept:
        raise EmptyVocabularyError("none of the requested terms are in the vocabulary")
    return _ranked(kept)
