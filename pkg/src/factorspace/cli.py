"""Command-line entry point.

Exit codes: 0 success, 1 usage, 2 data error, 3 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import ca, corpus, experiments, files, matrix, neighbors, powerlaw
from .export_query import (BoundingBox, bbox_query, center_box, export_xml, parse_xml,
                           records_from_model)
from .pipeline import (EXIT_DATA, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, PipelineConfig,
                       PipelineError, record_name, run_pipeline)


def _plane(spec: str) -> tuple[int, int]:
    a, b = (int(x) for x in spec.split(","))
    return a, b


def _range(spec: str) -> tuple[int, int]:
    lo, hi = (int(x) for x in spec.split(":"))
    return lo, hi


def cmd_ingest(args) -> int:
    rs = None
    for p in args.input:
        part = corpus.split_records(Path(p).read_bytes(), args.delimiter, args.encoding,
                                    prefix=f"{Path(p).stem}:" if len(args.input) > 1 else "r",
                                    source=Path(p).name)
        rs = part if rs is None else rs.concat(part)
    files.write_records(rs, args.out)
    print(f"{len(rs)} records")
    return EXIT_OK


def cmd_vocab(args) -> int:
    rs = files.read_records(args.records)
    vocab = corpus.build_vocabulary(corpus.tokenize_records(rs))
    if args.min_length > 1:
        vocab = corpus.filter_terms(vocab, args.min_length)
    files.write_vocab(vocab, args.out)
    print(f"{len(vocab)} terms, {vocab.total} tokens")
    return EXIT_OK


def cmd_matrix(args) -> int:
    if args.action == "aggregate":
        if not (args.table and args.groups):
            raise SystemExit("matrix aggregate needs --table and --groups")
        table = files.load_table(args.table)
        grouping = matrix.RowGrouping(files.read_groups(args.groups, table.row_labels))
        files.save_table(matrix.aggregate_rows(table, grouping), args.out)
        return EXIT_OK
    if not (args.records and args.vocab):
        raise SystemExit("matrix needs --records and --vocab")
    vocab = files.read_vocab(args.vocab)
    if args.terms:
        vocab = corpus.restrict(vocab, Path(args.terms).read_text().split())
    if args.top_k:
        vocab = corpus.top_terms(vocab, args.top_k)
    table = matrix.build_table(files.read_records(args.records), vocab)
    files.save_table(table, args.out)
    print(f"{table.shape[0]} x {table.shape[1]}, total {table.grand_total}, "
          f"{len(table.dropped_rows)} records without any term")
    for rid in table.dropped_rows:
        print(f"dropped\t{rid}", file=sys.stderr)
    return EXIT_OK


def cmd_ca(args) -> int:
    if args.action == "fit":
        model = ca.fit(files.load_table(args.table))
        ca.save_model(model, args.out)
        report = ca.eigen_report(model)
        if args.report:
            files.write_eigen(report, args.report)
        for r in report[:10]:
            print(f"{r.k}\t{r.eigenvalue:.6g}\t{r.percent:.2f}%\t{r.cumulative:.2f}%")
        if model.rank == 0:
            print("table has no inertia", file=sys.stderr)
            return EXIT_NUMERIC
        return EXIT_OK
    model = ca.load_model(args.model)
    if args.action == "project":
        sup = files.load_table(args.sup)
        proj = (ca.project_supplementary_rows(model, sup) if args.side == "rows"
                else ca.project_supplementary_cols(model, sup))
        files.write_coords(proj.labels, proj.coords, args.out)
        for label, msg in proj.errors.items():
            print(f"{label}: {msg}", file=sys.stderr)
        return EXIT_OK
    # plot
    with open(args.out, "w", newline="\n") as fh:
        fh.write("label,x,y,mass,ctr1,ctr2\n")
        for row in ca.plane_table(model, args.side, _plane(args.plane)):
            fh.write(",".join([row[0]] + [repr(v) for v in row[1:]]) + "\n")
    return EXIT_OK


def cmd_powerlaw(args) -> int:
    rf = powerlaw.rank_frequency(files.read_vocab(args.vocab))
    fit = powerlaw.fit_loglog(rf, _range(args.range) if args.range else None)
    files.write_json({"slope": fit.slope, "intercept": fit.intercept, "alpha": fit.alpha,
                      "r_squared": fit.r_squared, "fit_range": list(fit.fit_range),
                      "n_points": fit.n_points}, args.out)
    if args.points:
        with open(args.points, "w", newline="\n") as fh:
            fh.write("ln_rank,ln_freq\n")
            for x, y in powerlaw.loglog_points(rf):
                fh.write(f"{x!r},{y!r}\n")
    print(f"slope {fit.slope:.4f} over ranks {fit.fit_range[0]}:{fit.fit_range[1]}, "
          f"R^2 {fit.r_squared:.4f}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    table = files.load_table(args.table)
    reports = experiments.run_aggregation_protocol(table, args.group_size, args.ordering)
    files.write_json([r.to_dict() for r in reports], args.out)
    for r in reports:
        print(f"{r.scenario.value}\t{r.ssd:.8g}")
    return EXIT_OK


def cmd_neighbors(args) -> int:
    model = ca.load_model(args.model)
    if args.action == "knn":
        res = neighbors.nearest(model, args.label, args.k, args.side)
        for label, d in res.matches:
            print(f"{label}\t{d!r}")
    elif args.action == "rnn":
        for a, b in neighbors.reciprocal_pairs(model, args.side):
            print(f"{a}\t{b}")
    elif args.action == "cluster":
        dendro = neighbors.nn_chain_cluster(model, args.linkage, args.side)
        files.write_json(dendro.to_dict(), args.out)
    else:
        pairs = files.read_pairs(args.pairs) if args.pairs else neighbors.SINGULAR_PLURAL
        side = args.side if args.side_given else "cols"
        report = neighbors.pair_links(model, pairs, _plane(args.plane), side)
        with open(args.out, "w", newline="\n") as fh:
            fh.write("a,b,distance\n")
            for a, b, d in report.pairs:
                fh.write(f"{a},{b},{d!r}\n")
        for a, b, msg in report.errors:
            print(f"{a}/{b}: {msg}", file=sys.stderr)
        if report.pairs:
            print(f"{len(report.pairs)} pairs, mean {report.mean:.6g}, max {report.max:.6g}")
    return EXIT_OK


def cmd_export(args) -> int:
    model = ca.load_model(args.model)
    texts = {r.record_id: r.raw_text for r in files.read_records(args.records)}
    names = {k: record_name(v) for k, v in texts.items()}
    with open(args.out, "wb") as fh:
        n = export_xml(records_from_model(model, names, texts), fh)
    print(f"{n} documents")
    return EXIT_OK


def cmd_query(args) -> int:
    with open(args.xml, "rb") as fh:
        recs = parse_xml(fh)
    if args.action == "bbox":
        box = BoundingBox.parse(args.box)
    else:
        model = args.model or Path(args.xml).with_name("model.bin")
        box = center_box(ca.load_model(model), args.label, args.dx, args.dy)
        print(f"box {box.x_min!r},{box.x_max!r},{box.y_min!r},{box.y_max!r}", file=sys.stderr)
    for rid in bbox_query(recs, box):
        print(rid)
    return EXIT_OK


def _overrides(items: list[str]) -> dict:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep:
            raise SystemExit(f"--set expects KEY=VALUE, got {item!r}")
        try:
            out[key] = json.loads(value)
        except json.JSONDecodeError:
            out[key] = value
    return out


def cmd_run(args) -> int:
    cfg = PipelineConfig.from_file(args.config, threads=args.threads, seed=args.seed,
                                   **_overrides(args.set))
    manifest = run_pipeline(cfg, args.out)
    print(f"{len(manifest['files'])} files written to {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="factorspace", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("ingest", help="split raw files into records.jsonl")
    s.add_argument("--input", action="append", required=True)
    s.add_argument("--delimiter", default="-----", help="literal line marker or count:N")
    s.add_argument("--encoding", default="latin-1")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("vocab", help="ranked term frequencies to vocab.tsv")
    s.add_argument("--records", required=True)
    s.add_argument("--min-length", type=int, default=1)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_vocab)

    s = sub.add_parser("matrix", help="build (default) or aggregate a contingency table")
    s.add_argument("action", nargs="?", choices=["build", "aggregate"], default="build")
    s.add_argument("--records")
    s.add_argument("--vocab")
    s.add_argument("--top-k", type=int)
    s.add_argument("--terms", help="whitespace-separated term list restricting the columns")
    s.add_argument("--table")
    s.add_argument("--groups", help="group_label<TAB>row_label per line")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_matrix)

    s = sub.add_parser("ca", help="fit, project or export a factor plane")
    s.add_argument("action", choices=["fit", "project", "plot"])
    s.add_argument("--table")
    s.add_argument("--model")
    s.add_argument("--sup")
    s.add_argument("--side", choices=["rows", "cols"], default="rows")
    s.add_argument("--plane", default="1,2")
    s.add_argument("--report")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_ca)

    s = sub.add_parser("powerlaw", help="log-log rank-frequency fit")
    s.add_argument("--vocab", required=True)
    s.add_argument("--range", help="LO:HI ranks")
    s.add_argument("--out", required=True)
    s.add_argument("--points")
    s.set_defaults(func=cmd_powerlaw)

    s = sub.add_parser("experiment", help="aggregation/projection comparison")
    s.add_argument("kind", choices=["aggregation"])
    s.add_argument("--table", required=True)
    s.add_argument("--group-size", type=int, default=100)
    s.add_argument("--ordering", choices=["given", "factor1"], default="given")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_experiment)

    s = sub.add_parser("neighbors", help="k-NN, reciprocal NN, clustering, pair links")
    s.add_argument("action", choices=["knn", "rnn", "cluster", "pairs"])
    s.add_argument("--model", required=True)
    s.add_argument("--label")
    s.add_argument("--k", type=int, default=1)
    s.add_argument("--side", choices=["rows", "cols"])
    s.add_argument("--linkage", choices=["ward", "average"], default="ward")
    s.add_argument("--pairs")
    s.add_argument("--plane", default="1,2")
    s.add_argument("--out")
    s.set_defaults(func=cmd_neighbors)

    s = sub.add_parser("export", help="search-index XML")
    s.add_argument("format", choices=["xml"])
    s.add_argument("--model", required=True)
    s.add_argument("--records", required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_export)

    s = sub.add_parser("query", help="bounding-box query over an exported XML file")
    s.add_argument("action", choices=["bbox", "around"])
    s.add_argument("--xml", required=True)
    s.add_argument("--box", help="XMIN,XMAX,YMIN,YMAX")
    s.add_argument("--model", help="defaults to model.bin beside the XML file")
    s.add_argument("--label")
    s.add_argument("--dx", type=float, default=0.1)
    s.add_argument("--dy", type=float, default=0.1)
    s.set_defaults(func=cmd_query)

    s = sub.add_parser("run", help="whole pipeline from a JSON config")
    s.add_argument("--config", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--threads", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config key; VALUE is parsed as JSON when possible")
    s.set_defaults(func=cmd_run)
    return p


_REQUIRED = {
    ("ca", "fit"): ["table"], ("ca", "project"): ["model", "sup"], ("ca", "plot"): ["model"],
    ("neighbors", "knn"): ["label"], ("neighbors", "cluster"): ["out"],
    ("neighbors", "pairs"): ["out"], ("query", "bbox"): ["box"], ("query", "around"): ["label"],
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    action = getattr(args, "action", None)
    missing = [o for o in _REQUIRED.get((args.command, action), [])
               if getattr(args, o, None) is None]
    if missing:
        print(f"{args.command} {action}: missing --{', --'.join(missing)}", file=sys.stderr)
        return EXIT_USAGE
    if args.command == "neighbors":
        args.side_given = args.side is not None
        args.side = args.side or "rows"
    try:
        return args.func(args)
    except SystemExit as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except PipelineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except ca.DegenerateTableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, KeyError, IndexError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
