"""End-to-end run driven by a JSON configuration, with a hashed manifest."""

from __future__ import annotations

import dataclasses
import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from threadpoolctl import threadpool_limits

from . import __version__, ca, corpus, experiments, files, matrix, neighbors, powerlaw
from .export_query import export_xml, records_from_model

log = logging.getLogger(__name__)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class PipelineError(RuntimeError):
    def __init__(self, stage: str, message: str, exit_code: int = EXIT_DATA):
        self.stage = stage
        self.exit_code = exit_code
        super().__init__(f"[{stage}] {message}")


@dataclass
class PipelineConfig:
    inputs: list[str]
    delimiter: str = "-----"
    encoding: str = "latin-1"
    vocab_size: int = 100
    min_term_length: int = 1
    terms: list[str] | None = None
    group_size: int = 10
    ordering: str = "given"
    linkage: str = "ward"
    knn_k: int = 3
    powerlaw_range: tuple[int, int] | None = None
    export: bool = True
    seed: int = 0
    threads: int = 1

    def __post_init__(self):
        if isinstance(self.inputs, str):
            self.inputs = [self.inputs]
        if self.vocab_size < 1:
            raise ValueError("vocab_size must be >= 1")
        if self.powerlaw_range is not None:
            self.powerlaw_range = tuple(self.powerlaw_range)

    @classmethod
    def from_file(cls, path, **overrides) -> "PipelineConfig":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        base = Path(path).resolve().parent
        inputs = data.get("inputs", data.get("input"))
        if inputs is None:
            raise ValueError("config has no 'inputs'")
        if isinstance(inputs, str):
            inputs = [inputs]
        data["inputs"] = [str((base / p)) if not Path(p).is_absolute() else p for p in inputs]
        data.pop("input", None)
        data.update({k: v for k, v in overrides.items() if v is not None})
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        return cls(**data)

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["inputs"] = [Path(p).name for p in self.inputs]
        return d


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def record_name(text: str) -> str:
    """First non-blank line with whitespace collapsed."""
    for line in text.splitlines():
        if line.strip():
            return " ".join(line.split())
    return ""


def run_pipeline(config: PipelineConfig, outdir) -> dict:
    """Run every stage and write artifacts plus ``manifest.json`` to ``outdir``.

    Stages: ingest, vocab, matrix, fit, powerlaw, experiment, neighbors,
    export. The manifest is written only after all stages succeed.
    """
    out = Path(outdir)
    stale = out / "manifest.json"
    if stale.exists():
        stale.unlink()
    with threadpool_limits(limits=config.threads):
        produced = _run(config, out)
    manifest = {
        "package": "factorspace",
        "version": __version__,
        "threads": config.threads,
        "seed": config.seed,
        "config": config.to_dict(),
        "files": {name: _sha256(out / name) for name in produced},
    }
    files.write_json(manifest, out / "manifest.json")
    return manifest


def _run(cfg: PipelineConfig, out: Path) -> list[str]:
    produced: list[str] = []

    def emit(name: str) -> Path:
        produced.append(name)
        return out / name

    stage = "ingest"
    try:
        missing = [p for p in cfg.inputs if not Path(p).is_file()]
        if missing:
            raise PipelineError(stage, f"input not found: {missing[0]}")
        out.mkdir(parents=True, exist_ok=True)
        rs = None
        for p in cfg.inputs:
            part = corpus.split_records(Path(p).read_bytes(), cfg.delimiter, cfg.encoding,
                                        prefix=f"{Path(p).stem}:" if len(cfg.inputs) > 1 else "r",
                                        source=Path(p).name)
            rs = part if rs is None else rs.concat(part)
        files.write_records(rs, emit("records.jsonl"))
        log.info("ingested %d records", len(rs))

        stage = "vocab"
        streams = corpus.tokenize_records(rs)
        full_vocab = corpus.build_vocabulary(streams)
        files.write_vocab(full_vocab, emit("vocab.tsv"))

        stage = "powerlaw"
        rf = powerlaw.rank_frequency(full_vocab)
        plfit = powerlaw.fit_loglog(rf, cfg.powerlaw_range)
        files.write_json({"slope": plfit.slope, "intercept": plfit.intercept,
                          "alpha": plfit.alpha, "r_squared": plfit.r_squared,
                          "fit_range": list(plfit.fit_range), "n_points": plfit.n_points},
                         emit("fit.json"))
        pts = powerlaw.loglog_points(rf)
        with open(emit("loglog.csv"), "w", newline="\n") as fh:
            fh.write("ln_rank,ln_freq\n")
            for x, y in pts:
                fh.write(f"{x!r},{y!r}\n")

        stage = "matrix"
        vocab = full_vocab
        if cfg.min_term_length > 1:
            vocab = corpus.filter_terms(vocab, cfg.min_term_length)
        if cfg.terms:
            vocab = corpus.restrict(vocab, cfg.terms)
        vocab = corpus.top_terms(vocab, min(cfg.vocab_size, len(vocab)))
        table = matrix.build_table(streams, vocab)
        files.save_table(table, emit("table.tsv"))
        with open(emit("dropped_rows.txt"), "w", newline="\n") as fh:
            fh.writelines(f"{r}\n" for r in table.dropped_rows)

        stage = "fit"
        try:
            model = ca.fit(table)
        except ca.DegenerateTableError as exc:
            raise PipelineError(stage, str(exc), EXIT_NUMERIC) from None
        if model.rank == 0:
            raise PipelineError(stage, "table has no inertia (rank 0)", EXIT_NUMERIC)
        ca.save_model(model, emit("model.bin"))
        files.write_eigen(ca.eigen_report(model), emit("eig.tsv"))
        files.write_coords(model.row_labels, model.row_coords, emit("row_coords.tsv"))
        files.write_coords(model.col_labels, model.col_coords, emit("col_coords.tsv"))
        with open(emit("scatter.csv"), "w", newline="\n") as fh:
            fh.write("label,x,y,mass,ctr1,ctr2\n")
            for row in ca.plane_table(model, "cols"):
                fh.write(",".join([row[0]] + [repr(v) for v in row[1:]]) + "\n")
        con = ca.contributions(model)
        files.write_json({"strongest_cols": con.col_argmax, "strongest_rows": con.row_argmax},
                         emit("contributions.json"))

        stage = "experiment"
        n = table.shape[0]
        usable = n - n % cfg.group_size
        if usable < 2 * cfg.group_size:
            raise PipelineError(stage, f"{n} rows are too few for groups of {cfg.group_size}")
        keep = np.arange(n)
        if usable < n:
            rng = np.random.default_rng(cfg.seed)
            keep = np.sort(rng.choice(n, size=usable, replace=False))
        reports = experiments.run_aggregation_protocol(table.take_rows(keep), cfg.group_size,
                                                       cfg.ordering)
        files.write_json([r.to_dict() for r in reports], emit("experiment.json"))

        stage = "neighbors"
        pairs = neighbors.reciprocal_pairs(model)
        with open(emit("rnn.tsv"), "w", newline="\n") as fh:
            fh.writelines(f"{a}\t{b}\n" for a, b in pairs)
        with open(emit("knn.tsv"), "w", newline="\n") as fh:
            k = min(cfg.knn_k, len(model.row_labels) - 1)
            for label in model.row_labels:
                for rank, (m, d) in enumerate(neighbors.nearest(model, label, k).matches, 1):
                    fh.write(f"{label}\t{rank}\t{m}\t{d!r}\n")
        dendro = neighbors.nn_chain_cluster(model, cfg.linkage)
        files.write_json(dendro.to_dict(), emit("dendro.json"))

        if cfg.export:
            stage = "export"
            texts = {r.record_id: r.raw_text for r in rs}
            recs = records_from_model(model, {k: record_name(v) for k, v in texts.items()},
                                      texts)
            with open(emit("corpus.xml"), "wb") as fh:
                export_xml(recs, fh)
    except PipelineError:
        raise
    except (ValueError, KeyError, IndexError, OSError) as exc:
        raise PipelineError(stage, f"{type(exc).__name__}: {exc}") from exc
    return produced
