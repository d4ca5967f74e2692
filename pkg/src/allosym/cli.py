"""Command line entry points.

Subcommands: ``run`` (one seeded run to an artifact directory), ``sweep``
(independent seeds in parallel processes), ``validate-config``, and
``dump-defaults``. The ALLOSYM_OUT_DIR environment variable overrides
any configured output directory.
"""

import argparse
import dataclasses
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .config import RunConfig, dumps_config, load_config
from .experiment import run_and_write


def _load(path: str) -> RunConfig:
    if not os.path.isfile(path):
        raise FileNotFoundError(f"config file not found: {path}")
    return load_config(path)


def _cmd_run(args) -> int:
    cfg = _load(args.config)
    if args.seed is not None:
        cfg = dataclasses.replace(cfg, seed=args.seed)
    if args.out is not None:
        cfg = dataclasses.replace(cfg, out_dir=args.out)
    cfg.validate()
    out_dir = run_and_write(cfg)
    print(out_dir)
    return 0


def _parse_seed_range(text: str) -> range:
    lo, sep, hi = text.partition("..")
    if sep != ".." or not lo.isdigit() or not hi.isdigit():
        raise ValueError(f"expected a..b with a <= b, got {text!r}")
    lo_i, hi_i = int(lo), int(hi)
    if lo_i > hi_i:
        raise ValueError(f"expected a..b with a <= b, got {text!r}")
    return range(lo_i, hi_i + 1)


def _sweep_one(payload) -> str:
    cfg_dict, seed, out_dir = payload
    cfg = RunConfig(**cfg_dict)
    cfg = dataclasses.replace(cfg, seed=seed, out_dir=out_dir)
    return run_and_write(cfg)


def _cmd_sweep(args) -> int:
    cfg = _load(args.config)
    seeds = _parse_seed_range(args.seeds)
    base = args.out if args.out is not None else cfg.out_dir
    jobs = args.jobs or min(len(seeds), os.cpu_count() or 1)
    payloads = [
        (cfg.to_dict(), seed, os.path.join(base, f"seed{seed:03d}")) for seed in seeds
    ]
    if jobs == 1:
        for payload in payloads:
            print(_sweep_one(payload))
        return 0
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for out_dir in pool.map(_sweep_one, payloads):
            print(out_dir)
    return 0


def _cmd_validate(args) -> int:
    cfg = _load(args.config)
    cfg.validate()
    print("ok")
    return 0


def _cmd_dump_defaults(_args) -> int:
    sys.stdout.write(dumps_config(RunConfig()))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="allosym", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute one run and write artifacts")
    p_run.add_argument("--config", required=True, help="YAML config path")
    p_run.add_argument("--seed", type=int, default=None, help="override the config seed")
    p_run.add_argument("--out", default=None, help="override the output directory")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run an inclusive seed range in parallel")
    p_sweep.add_argument("--config", required=True, help="YAML config path")
    p_sweep.add_argument("--seeds", required=True, help="inclusive range, e.g. 0..9")
    p_sweep.add_argument("--out", default=None, help="base directory for seedNNN subdirs")
    p_sweep.add_argument("--jobs", type=int, default=None, help="worker processes")
    p_sweep.set_defaults(func=_cmd_sweep)

    p_val = sub.add_parser("validate-config", help="check a config file and exit")
    p_val.add_argument("--config", required=True, help="YAML config path")
    p_val.set_defaults(func=_cmd_validate)

    p_dump = sub.add_parser("dump-defaults", help="print the full default config")
    p_dump.set_defaults(func=_cmd_dump_defaults)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
