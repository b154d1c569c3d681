"""Plain-text artifact formats shared by the pipeline and the command line."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .ca import EigenRow
from .corpus import Record, RecordSet, VocabEntry, Vocabulary
from .matrix import ContingencyTable, read_table, write_table


def write_records(rs: RecordSet, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps({"meta": {"encoding": rs.encoding, "preamble": rs.preamble}})
                 + "\n")
        for r in rs:
            fh.write(json.dumps({"id": r.record_id, "text": r.raw_text,
                                 "sep": r.separator, "source": r.source}) + "\n")


def read_records(path) -> RecordSet:
    records, meta = [], {}
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            obj = json.loads(line)
            if "meta" in obj:
                meta = obj["meta"]
                continue
            records.append(Record(obj["id"], obj["text"], obj.get("sep", ""),
                                  obj.get("source")))
    return RecordSet(records, meta.get("preamble", ""), meta.get("encoding", "latin-1"))


def write_vocab(vocab: Vocabulary, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for e in vocab:
            fh.write(f"{e.term}\t{e.frequency}\t{e.rank}\n")


def read_vocab(path) -> Vocabulary:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                term, freq, rank = line.rstrip("\n").split("\t")
                entries.append(VocabEntry(term, int(freq), int(rank)))
    return Vocabulary(entries)


def save_table(table: ContingencyTable, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        write_table(table, fh)


def load_table(path) -> ContingencyTable:
    with open(path, encoding="utf-8") as fh:
        return read_table(fh)


def _num(x: float) -> str:
    return repr(float(x))


def write_coords(labels: Sequence[str], coords: np.ndarray, path) -> None:
    """``label<TAB>F1<TAB>F2...``; unprojectable rows are written as ``nan``."""
    k = coords.shape[1] if coords.ndim == 2 else 0
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\t".join(["label"] + [f"F{i + 1}" for i in range(k)]) + "\n")
        for label, row in zip(labels, coords):
            fh.write("\t".join([label] + [_num(v) for v in row]) + "\n")


def write_eigen(rows: Iterable[EigenRow], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("k\teigenvalue\tpercent\tcumulative\n")
        for r in rows:
            fh.write(f"{r.k}\t{_num(r.eigenvalue)}\t{_num(r.percent)}\t{_num(r.cumulative)}\n")


def write_json(obj, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_pairs(path) -> list[tuple[str, ...]]:
    """Two tab-separated labels per line; ``#`` starts a comment."""
    out = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            a, b = line.split("\t")[:2]
            out.append((a.strip(), b.strip()))
    return out


def read_groups(path, row_labels: Sequence[str]) -> list[tuple[str, list[int]]]:
    """``group_label<TAB>row_label`` lines to index groups, in first-seen order."""
    pos = {label: i for i, label in enumerate(row_labels)}
    groups: dict[str, list[int]] = {}
    for g, r in read_pairs(path):
        if r not in pos:
            raise KeyError(f"unknown row label {r!r} in groups file")
        groups.setdefault(g, []).append(pos[r])
    return list(groups.items())
