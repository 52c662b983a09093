"""CLI: export contextual embeddings for an annotated dataset."""

from __future__ import annotations

import argparse
import sys

from .export import ExportConfig, export_dataset
from .formats import ExportError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crossdep-export",
        description="Run a pretrained language model over a dataset and write "
        "per-sentence subword embeddings with word alignment.",
    )
    parser.add_argument("--model", required=True,
                        help="model name or local checkpoint directory")
    parser.add_argument("--data", required=True, help="annotated dataset file")
    parser.add_argument("--out", required=True, help="embedding file to write")
    parser.add_argument("--layer", type=int, default=-1,
                        help="hidden-state layer (-1 = final, default)")
    parser.add_argument("--batch", type=int, default=16, help="batch size")
    parser.add_argument("--device", default="cpu", help="torch device hint")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = ExportConfig(
        model=args.model, layer=args.layer, batch_size=args.batch, device=args.device
    )
    try:
        n = export_dataset(args.data, args.out, cfg)
    except ExportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {n} embedding records to {args.out}")
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
