"""Sparse records-by-terms contingency tables."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO

import numpy as np
from scipy import sparse

from .corpus import RecordSet, TokenStream, Vocabulary, tokenize


class EmptyTableError(ValueError):
    pass


@dataclass(frozen=True)
class RowGrouping:
    groups: list[tuple[str, list[int]]]

    def validate(self, n_rows: int) -> None:
        seen: set[int] = set()
        labels: set[str] = set()
        for label, members in self.groups:
            if not members:
                raise ValueError(f"group {label!r} is empty")
            if label in labels:
                raise ValueError(f"duplicate group label {label!r}")
            labels.add(label)
            for i in members:
                if not 0 <= i < n_rows:
                    raise IndexError(f"row index {i} out of range in group {label!r}")
                if i in seen:
                    raise ValueError(f"row {i} appears in more than one group")
                seen.add(i)

    @classmethod
    def consecutive(cls, n_rows: int, size: int, prefix: str = "g") -> "RowGrouping":
        """Blocks ``0..size-1``, ``size..2*size-1``, ...; ``n_rows`` must divide."""
        if size < 1 or n_rows % size:
            raise ValueError(f"{n_rows} rows cannot be split into groups of {size}")
        return cls([(f"{prefix}{g + 1}", list(range(g * size, (g + 1) * size)))
                    for g in range(n_rows // size)])


@dataclass
class ContingencyTable:
    """Non-negative integer counts with row and column labels.

    ``counts`` is kept as CSR. ``dropped_rows`` lists records excluded at
    build time because none of their tokens were in the vocabulary.
    """

    counts: sparse.csr_matrix
    row_labels: list[str]
    col_labels: list[str]
    dropped_rows: list[str] = field(default_factory=list)

    def __post_init__(self):
        counts = sparse.csr_matrix(self.counts)
        if counts.dtype.kind not in "iu":
            if not np.all(np.mod(counts.data, 1) == 0):
                raise ValueError("counts must be integers")
            counts = counts.astype(np.int64)
        counts.sum_duplicates()
        counts.eliminate_zeros()
        counts.sort_indices()
        if counts.nnz and counts.data.min() < 0:
            raise ValueError("counts must be non-negative")
        self.counts = counts
        self.row_labels = list(self.row_labels)
        self.col_labels = list(self.col_labels)
        if counts.shape != (len(self.row_labels), len(self.col_labels)):
            raise ValueError(
                f"shape {counts.shape} does not match "
                f"{len(self.row_labels)} x {len(self.col_labels)} labels")
        if len(set(self.row_labels)) != len(self.row_labels):
            raise ValueError("row labels must be unique")
        if len(set(self.col_labels)) != len(self.col_labels):
            raise ValueError("column labels must be unique")

    @classmethod
    def from_dense(cls, array, row_labels=None, col_labels=None) -> "ContingencyTable":
        a = np.asarray(array)
        if a.ndim != 2:
            raise ValueError("expected a 2-d array")
        if row_labels is None:
            row_labels = [f"r{i + 1}" for i in range(a.shape[0])]
        if col_labels is None:
            col_labels = [f"c{j + 1}" for j in range(a.shape[1])]
        if a.size and a.min() < 0:
            raise ValueError("counts must be non-negative")
        return cls(sparse.csr_matrix(a), row_labels, col_labels)

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape

    @property
    def grand_total(self) -> int:
        return int(self.counts.sum())

    @property
    def row_totals(self) -> np.ndarray:
        return np.asarray(self.counts.sum(axis=1)).ravel()

    @property
    def col_totals(self) -> np.ndarray:
        return np.asarray(self.counts.sum(axis=0)).ravel()

    @property
    def empty_rows(self) -> list[str]:
        return [self.row_labels[i] for i in np.flatnonzero(self.row_totals == 0)]

    @property
    def empty_cols(self) -> list[str]:
        return [self.col_labels[j] for j in np.flatnonzero(self.col_totals == 0)]

    def toarray(self) -> np.ndarray:
        return self.counts.toarray()

    def take_rows(self, idx: Sequence[int]) -> "ContingencyTable":
        idx = list(idx)
        return ContingencyTable(self.counts[idx], [self.row_labels[i] for i in idx],
                                self.col_labels, list(self.dropped_rows))

    def take_cols(self, idx: Sequence[int]) -> "ContingencyTable":
        idx = list(idx)
        return ContingencyTable(self.counts[:, idx], self.row_labels,
                                [self.col_labels[j] for j in idx], list(self.dropped_rows))

    def reindex_cols(self, labels: Sequence[str]) -> "ContingencyTable":
        """Reorder columns to ``labels``; missing labels become zero columns."""
        pos = {c: j for j, c in enumerate(self.col_labels)}
        extra = set(self.col_labels) - set(labels)
        if extra:
            raise KeyError(f"columns not in target label set: {sorted(extra)[:5]}")
        src = [pos.get(c, -1) for c in labels]
        coo = self.counts.tocoo()
        remap = np.full(len(self.col_labels), -1)
        for new, old in enumerate(src):
            if old >= 0:
                remap[old] = new
        m = sparse.csr_matrix((coo.data, (coo.row, remap[coo.col])),
                              shape=(self.shape[0], len(labels)))
        return ContingencyTable(m, self.row_labels, list(labels), list(self.dropped_rows))

    def __eq__(self, other) -> bool:
        if not isinstance(other, ContingencyTable):
            return NotImplemented
        return (self.row_labels == other.row_labels
                and self.col_labels == other.col_labels
                and self.shape == other.shape
                and (self.counts != other.counts).nnz == 0)


def build_table(
    records: RecordSet | Iterable[TokenStream],
    vocab: Vocabulary,
) -> ContingencyTable:
    """Count occurrences of each vocabulary term in each record.

    Records in which no vocabulary term occurs are left out of the table and
    listed in ``dropped_rows``.
    """
    if len(vocab) == 0:
        raise ValueError("vocabulary is empty")
    if isinstance(records, RecordSet):
        streams = [(r.record_id, tokenize(r.raw_text)) for r in records]
    else:
        streams = [(s.record_id, s.tokens) for s in records]
    if not streams:
        raise EmptyTableError("no records")

    rows, cols = [], []
    kept, dropped = [], []
    for rid, tokens in streams:
        js = [vocab.index(t) for t in tokens if t in vocab]
        if not js:
            dropped.append(rid)
            continue
        rows.extend([len(kept)] * len(js))
        cols.extend(js)
        kept.append(rid)
    if not kept:
        raise EmptyTableError("no record contains any vocabulary term")
    m = sparse.csr_matrix((np.ones(len(rows), dtype=np.int64), (rows, cols)),
                          shape=(len(kept), len(vocab)))
    return ContingencyTable(m, kept, vocab.terms, dropped)


def aggregate_rows(table: ContingencyTable, grouping: RowGrouping) -> ContingencyTable:
    """Sum member rows into one row per group (concatenation of records)."""
    n = table.shape[0]
    grouping.validate(n)
    rows, cols = [], []
    for g, (_, members) in enumerate(grouping.groups):
        rows.extend([g] * len(members))
        cols.extend(members)
    indicator = sparse.csr_matrix((np.ones(len(rows), dtype=np.int64), (rows, cols)),
                                  shape=(len(grouping.groups), n))
    return ContingencyTable(indicator @ table.counts,
                            [label for label, _ in grouping.groups], table.col_labels)


def order_rows_by_scores(table: ContingencyTable, scores: Sequence[float]) -> ContingencyTable:
    """Permute rows by non-decreasing score; ties keep their current order."""
    scores = np.asarray(scores, dtype=float)
    if scores.shape != (table.shape[0],):
        raise ValueError(f"{scores.size} scores for {table.shape[0]} rows")
    return table.take_rows(np.argsort(scores, kind="stable"))


def transpose(table: ContingencyTable) -> ContingencyTable:
    return ContingencyTable(table.counts.T.tocsr(), table.col_labels, table.row_labels)


# -- text serialization ------------------------------------------------------
#
#   #rows <n> #cols <m> #total <N>
#   #rowlabels<TAB>label<TAB>label...      (optional, keeps order and empty rows)
#   #collabels<TAB>label<TAB>label...      (optional)
#   row_label<TAB>col_label<TAB>count      one line per nonzero, row-major

def write_table(table: ContingencyTable, fh: TextIO) -> None:
    for label in table.row_labels + table.col_labels:
        if "\t" in label or "\n" in label:
            raise ValueError(f"label {label!r} contains a tab or newline")
    n, m = table.shape
    fh.write(f"#rows {n} #cols {m} #total {table.grand_total}\n")
    fh.write("#rowlabels\t" + "\t".join(table.row_labels) + "\n")
    fh.write("#collabels\t" + "\t".join(table.col_labels) + "\n")
    c = table.counts
    for i in range(n):
        lo, hi = c.indptr[i], c.indptr[i + 1]
        r = table.row_labels[i]
        for j, v in zip(c.indices[lo:hi], c.data[lo:hi]):
            fh.write(f"{r}\t{table.col_labels[j]}\t{v}\n")


def read_table(fh: TextIO) -> ContingencyTable:
    header = fh.readline().split()
    if len(header) != 6 or header[0::2] != ["#rows", "#cols", "#total"]:
        raise ValueError(f"bad table header: {' '.join(header)!r}")
    n, m, total = (int(x) for x in header[1::2])
    row_labels: list[str] | None = None
    col_labels: list[str] | None = None
    triples = []
    for line in fh:
        line = line.rstrip("\n")
        if not line:
            continue
        if line.startswith("#rowlabels"):
            row_labels = line.split("\t")[1:] if n else []
            continue
        if line.startswith("#collabels"):
            col_labels = line.split("\t")[1:] if m else []
            continue
        r, c, v = line.split("\t")
        triples.append((r, c, int(v)))
    if row_labels is None:
        row_labels = list(dict.fromkeys(r for r, _, _ in triples))
    if col_labels is None:
        col_labels = list(dict.fromkeys(c for _, c, _ in triples))
    if (len(row_labels), len(col_labels)) != (n, m):
        raise ValueError(f"header says {n} x {m}, found {len(row_labels)} x {len(col_labels)}")
    ri = {r: i for i, r in enumerate(row_labels)}
    ci = {c: j for j, c in enumerate(col_labels)}
    data = np.array([v for _, _, v in triples], dtype=np.int64)
    rows = np.array([ri[r] for r, _, _ in triples], dtype=np.int64)
    cols = np.array([ci[c] for _, c, _ in triples], dtype=np.int64)
    table = ContingencyTable(sparse.csr_matrix((data, (rows, cols)), shape=(n, m)),
                             row_labels, col_labels)
    if table.grand_total != total:
        raise ValueError(f"header total {total} != sum of cells {table.grand_total}")
    return table
