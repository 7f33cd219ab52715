"""Command-line interface: preprocess, run, report, render, serve.

`run` executes a grid config headlessly and leaves a self-describing results
directory (report JSON/CSV, curves, SVGs, label files, the preprocessed
matrix); `render` re-renders any plot from such a directory; `serve` starts
the HTTP service backing the browser studio.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .exprdata import PreprocessConfig, load_matrix, preprocess, save_matrix
from .render import render_heatmap, render_index_curves, render_profile
from .runner import IndexCurve, grid_spec_from_json, report_json_text, run_grid

__all__ = ["main"]


def _add_preprocess_flags(p):
    p.add_argument("--data", required=True, help="input CSV/TSV matrix")
    p.add_argument("--class-column", type=int, default=None,
                   help="1-based column holding true class labels")
    p.add_argument("--top-n", type=int, default=None,
                   help="keep only the N highest-variance genes")
    p.add_argument("--normalize", action="store_true",
                   help="z-score each row to mean 0, std 1")


def _load(args):
    matrix = load_matrix(args.data, class_column=args.class_column)
    cfg = PreprocessConfig(
        top_n=args.top_n if args.top_n is not None else "all",
        normalize=args.normalize,
        class_column=args.class_column,
    )
    return preprocess(matrix, cfg)


def cmd_preprocess(args) -> int:
    matrix = _load(args)
    save_matrix(matrix, args.out)
    print(f"wrote {matrix.n_genes}x{matrix.n_conditions} matrix to {args.out}")
    return 0


def cmd_run(args) -> int:
    with open(args.config) as fh:
        spec_json = json.load(fh)
    spec_json["output_dir"] = args.out
    spec = grid_spec_from_json(spec_json)
    matrix = _load(args)
    os.makedirs(args.out, exist_ok=True)
    result = run_grid(matrix, spec)

    include_timings = not args.no_timings
    with open(os.path.join(args.out, "report.json"), "w") as fh:
        fh.write(report_json_text(result.report, include_timings=include_timings))
    with open(os.path.join(args.out, "report.csv"), "w") as fh:
        fh.write(result.report.to_csv())
    with open(os.path.join(args.out, "curves.json"), "w") as fh:
        json.dump([c.to_json() for c in result.curves], fh, sort_keys=True, indent=2)
    with open(os.path.join(args.out, "best_labels.json"), "w") as fh:
        json.dump(
            {alg: [int(v) for v in labels] for alg, labels in result.best_labels.items()},
            fh, sort_keys=True, indent=2,
        )
    save_matrix(matrix, os.path.join(args.out, "preprocessed.csv"))

    if result.curves:
        with open(os.path.join(args.out, "index_curves.svg"), "w") as fh:
            fh.write(render_index_curves(result.curves))
    for alg, labels in result.best_labels.items():
        with open(os.path.join(args.out, f"heatmap_{alg}.svg"), "w") as fh:
            fh.write(render_heatmap(matrix, labels))
        with open(os.path.join(args.out, f"profile_{alg}.svg"), "w") as fh:
            fh.write(render_profile(matrix, labels))

    for alg, reason in result.report.failed.items():
        print(f"warning: {alg} failed: {reason}", file=sys.stderr)
    print(f"report written to {os.path.join(args.out, 'report.json')}")
    return 0


def cmd_report(args) -> int:
    path = os.path.join(args.run, "report.csv" if args.format == "csv" else "report.json")
    with open(path) as fh:
        sys.stdout.write(fh.read())
    return 0


def cmd_render(args) -> int:
    run_dir = args.run
    n_conditions = None
    matrix = load_matrix(os.path.join(run_dir, "preprocessed.csv"))
    if args.kind == "index_curve":
        with open(os.path.join(run_dir, "curves.json")) as fh:
            curves = [
                IndexCurve(c["algorithm"], c["index"],
                           [(k, v) for k, v in c["points"]])
                for c in json.load(fh)
            ]
        if args.algorithm:
            curves = [c for c in curves if c.algorithm == args.algorithm]
        if not curves:
            raise ValueError("no matching curves in run directory")
        sys.stdout.write(render_index_curves(curves))
        return 0
    with open(os.path.join(run_dir, "best_labels.json")) as fh:
        best = json.load(fh)
    if args.algorithm not in best:
        raise ValueError(f"no labels for algorithm {args.algorithm!r} in {run_dir}")
    labels = np.asarray(best[args.algorithm], dtype=int)
    if args.kind == "heatmap":
        sys.stdout.write(render_heatmap(matrix, labels))
    elif args.kind == "profile":
        sys.stdout.write(render_profile(matrix, labels))
    else:
        raise ValueError(f"unknown render kind {args.kind!r}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    uvicorn.run(create_app(output_dir=args.out), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="exprclust")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="load, select top genes, normalize, save")
    _add_preprocess_flags(p)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("run", help="execute a grid config headlessly")
    _add_preprocess_flags(p)
    p.add_argument("--config", required=True, help="grid spec JSON file")
    p.add_argument("--out", required=True, help="results directory")
    p.add_argument("--no-timings", action="store_true",
                   help="strip wall times and file paths from report.json")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("report", help="print the report from a results directory")
    p.add_argument("--run", required=True, help="results directory")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("render", help="render a plot from a results directory to stdout")
    p.add_argument("--kind", required=True, choices=("heatmap", "profile", "index_curve"))
    p.add_argument("--run", required=True, help="results directory")
    p.add_argument("--algorithm", default=None)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--out", default=None, help="directory for persisted label files")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
