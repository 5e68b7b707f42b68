"""Command line entry point: ``eode run``, ``eode bench`` and ``eode convert``.

Exit codes: 0 success (including sweeps with per-dataset failures),
1 configuration error, 2 data error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .data import DataError
from .harness import ConfigError, RunConfig, bench, convert, format_table, run, write_report

EXIT_OK, EXIT_CONFIG, EXIT_DATA = 0, 1, 2

_RUN_FLAGS = {
    "test_fraction": float,
    "population": int,
    "iterations": int,
    "threshold": float,
    "fs_alpha": float,
    "fs_beta": float,
    "ens_alpha": float,
    "ens_beta": float,
    "cv_folds": int,
    "knn_k": int,
    "seed": int,
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _add_run_options(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
    p.add_argument("--mode", help="eode (default), wel, or single:<kind>")
    p.add_argument("--out", help="output directory")
    for name, typ in _RUN_FLAGS.items():
        p.add_argument("--" + name.replace("_", "-"), dest=name, type=typ)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="eode", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_run = sub.add_parser("run", help="train and evaluate on one or more CSV datasets")
    p_run.add_argument("datasets", nargs="+")
    _add_run_options(p_run)

    p_bench = sub.add_parser("bench", help="run every CSV dataset in a directory")
    p_bench.add_argument("directory")
    _add_run_options(p_bench)

    p_conv = sub.add_parser("convert", help="convert a fixture (.npz, .mat, delimited text) to CSV")
    p_conv.add_argument("source")
    p_conv.add_argument("dest")
    p_conv.add_argument("--layout", choices=("samples", "features"), default="samples")
    p_conv.add_argument("--delimiter")
    p_conv.add_argument("--label-column")
    p_conv.add_argument("--x-key", default="X")
    p_conv.add_argument("--y-key", default="y")
    return parser


def _config_from_args(args, datasets) -> RunConfig:
    overrides = {name: getattr(args, name) for name in _RUN_FLAGS}
    overrides.update(mode=args.mode, out=args.out)
    if args.config:
        config = RunConfig.from_file(args.config, **overrides)
    else:
        config = RunConfig(**{k: v for k, v in overrides.items() if v is not None})
    config.datasets = list(datasets)
    return config.validate()


def _cmd_run(args) -> int:
    config = _config_from_args(args, args.datasets)
    missing = [p for p in config.datasets if not Path(p).is_file()]
    if missing:
        raise DataError(f"dataset not found: {', '.join(missing)}")
    reports = []
    for path in config.datasets:
        report = run(RunConfig(**{**vars(config), "out": None}), path)
        reports.append(report)
        if config.out:
            out = Path(config.out)
            write_report(report, out if len(config.datasets) == 1 else out / Path(path).stem)
        print(format_table(report.summary_rows()))
    return EXIT_OK


def _cmd_bench(args) -> int:
    config = _config_from_args(args, [])
    summary = bench(args.directory, config)
    print(summary.table())
    if summary.errors:
        print(f"warning: {len(summary.errors)} dataset(s) failed", file=sys.stderr)
    return EXIT_OK


def _cmd_convert(args) -> int:
    ds = convert(args.source, args.dest, layout=args.layout, delimiter=args.delimiter,
                 label_column=args.label_column, x_key=args.x_key, y_key=args.y_key)
    print(json.dumps({"dest": args.dest, "n": ds.n, "dim": ds.dim, "c": ds.class_count}))
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = {"run": _cmd_run, "bench": _cmd_bench, "convert": _cmd_convert}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
