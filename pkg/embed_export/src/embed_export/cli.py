"""Command line for the embedding exporter: export and verify."""

from __future__ import annotations

import argparse
import sys

from .data import DataError
from .export import ExportJob, ModelError, export, verify
from .nlqe import FormatError


def cmd_export(args) -> int:
    job = ExportJob(
        examples_path=args.examples,
        tables_path=args.tables,
        output_path=args.output,
        model_id=args.model,
        layer=args.layer,
        pooling=args.pooling,
        limit=args.limit,
    )
    try:
        stats = export(job)
    except (OSError, DataError, ModelError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(f"wrote {stats.n_written} records (dim {stats.dim}) to {args.output}")
    if stats.n_skipped_unknown_table:
        print(f"skipped {stats.n_skipped_unknown_table} examples with unknown tables")
    print(f"alignment fallbacks: {stats.n_fallbacks}")
    return 0


def cmd_verify(args) -> int:
    try:
        problems = verify(args.output, args.examples, args.tables, args.limit)
    except (OSError, DataError, FormatError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    if problems:
        for p in problems:
            print(f"mismatch: {p}", file=sys.stderr)
        return 1
    print(f"{args.output}: all checks passed")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embed-export",
        description="Precompute contextual embeddings in the NLQE v1 format",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("export", help="run the encoder and write an embedding file")
    p.add_argument("--examples", required=True)
    p.add_argument("--tables", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--model", required=True, help="local path or model identifier")
    p.add_argument("--layer", type=int, default=-1, help="hidden-state layer index")
    p.add_argument("--pooling", default="mean", choices=["mean"])
    p.add_argument("--limit", type=int, help="export only the first N examples")
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("verify", help="cross-check an embedding file against its corpus")
    p.add_argument("--output", required=True)
    p.add_argument("--examples", required=True)
    p.add_argument("--tables", required=True)
    p.add_argument("--limit", type=int)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
