"""Command line entry point: render one figure from a run directory."""

import argparse
import sys

from .io import SchemaError
from .render import KINDS, FigureSpec, render


def _parse_steps(text: str) -> tuple:
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise ValueError(
            f"--steps expects comma-separated integers, got {text!r}"
        ) from exc


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="allosym-figures", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    p_render = sub.add_parser("render", help="render one figure kind to an image")
    p_render.add_argument("--run", required=True, help="run directory to read")
    p_render.add_argument("--kind", required=True, choices=KINDS)
    p_render.add_argument(
        "--steps", default=None,
        help="comma-separated snapshot steps (default: all in the run)",
    )
    p_render.add_argument(
        "--out", default=None,
        help="output image path (default: <kind>.png in the working directory)",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        steps = _parse_steps(args.steps) if args.steps is not None else None
        spec = FigureSpec(
            run_dir=args.run, kind=args.kind, steps=steps, out_path=args.out
        )
        print(render(spec))
        return 0
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
