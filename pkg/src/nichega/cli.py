"""Command-line harness.

    nichega run <config>             every (algorithm, seed) cell + core reports
    nichega compare <config>         as run, plus dispersion and runtime tables
    nichega crowding-study <config>  repeat over the population/generation ladder
    nichega synth <spec> -o <dir>    write a synthetic dataset as CSV
"""
from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys
from pathlib import Path

import yaml

from .config import DataConfig, ExperimentConfig
from .dataset import DataError, generate_synthetic, save_dataset
from .experiment import crowding_study, run_experiment
from .niching import ConfigError

WORKERS_ENV = "NICHEGA_WORKERS"


def _default_workers() -> int | None:
    value = os.environ.get(WORKERS_ENV)
    return int(value) if value else None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nichega", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("run", "compare", "crowding-study"):
        p = sub.add_parser(name)
        p.add_argument("config", type=Path)
        p.add_argument("--out", type=Path, help="output directory (overrides config)")
        p.add_argument("--workers", type=int, default=_default_workers(),
                       help=f"concurrent cells (default: config, or ${WORKERS_ENV})")
        p.add_argument("--seed-override", type=int, nargs="+", metavar="SEED",
                       help="replace the configured seed list")
    p = sub.add_parser("synth")
    p.add_argument("spec", type=Path, help="YAML synthetic spec (or a config with data.synthetic)")
    p.add_argument("-o", "--out", type=Path, required=True)
    return parser


def _synth(args) -> int:
    doc = yaml.safe_load(args.spec.read_text())
    if isinstance(doc, dict) and "data" in doc:
        doc = doc["data"]
    if isinstance(doc, dict) and "synthetic" not in doc:
        doc = {"synthetic": doc}
    data = DataConfig.from_dict(doc)
    if data.kind != "synthetic":
        raise ConfigError("synth: expected a synthetic spec")
    dataset = generate_synthetic(data.synthetic_spec())
    save_dataset(dataset, args.out)
    print(f"wrote {dataset.X.shape[0]}x{dataset.n_variables} dataset to {args.out}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "synth":
            return _synth(args)
        cfg = ExperimentConfig.load(args.config)
        if args.seed_override:
            cfg = dataclasses.replace(cfg, seeds=list(args.seed_override))
        outdir = args.out or (cfg.base_dir / cfg.output)
        if args.command == "crowding-study":
            crowding_study(cfg, outdir, args.workers)
        else:
            run_experiment(cfg, outdir, args.workers, extended=args.command == "compare")
    except (ConfigError, DataError, OSError) as exc:
        print(f"nichega: error: {exc}", file=sys.stderr)
        return 2
    print(f"results written to {outdir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
