"""Command-line entry point: ``complexaction <subcommand> --config <name|path>``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from complexaction.config import ConfigError, build_config, load_config, parse_value, shipped_configs
from complexaction.runs import (
    UncoveredRegionError,
    run_compare,
    run_interfere,
    run_propagate,
    run_reference,
)


def _load(args) -> "RunConfig":  # noqa: F821
    cfg = load_config(args.config)
    if args.set:
        flat = dict(cfg.flat)
        for item in args.set:
            key, sep, val = item.partition("=")
            if not sep:
                raise ConfigError(item, "override must look like key=value")
            flat[key.strip()] = parse_value(val)
        cfg = build_config(flat, cfg.name)
    if args.dt is not None:
        cfg = cfg.with_dt(args.dt)
    return cfg


def _out_dir(args, cfg) -> Path:
    out = Path(args.out) if args.out else Path(cfg.output_dir) / cfg.name
    out.mkdir(parents=True, exist_ok=True)
    return out


def _emit(summary: dict):
    print(json.dumps(summary, indent=2, sort_keys=True, default=float))


def cmd_propagate(args):
    cfg = _load(args)
    _emit(run_propagate(cfg, _out_dir(args, cfg), threads=args.threads))


def cmd_reference(args):
    cfg = _load(args)
    _emit(run_reference(cfg, _out_dir(args, cfg)))


def cmd_interfere(args):
    cfg = _load(args)
    _emit(run_interfere(cfg, _out_dir(args, cfg), threads=args.threads))


def cmd_compare(args):
    cfg = _load(args)
    _emit(run_compare(cfg, _out_dir(args, cfg), threads=args.threads, sweep=args.seed_sweep))


def cmd_validate(args):
    from complexaction.validation import run_all

    results = run_all()
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} checks passed")
    return 0 if passed == len(results) else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="complexaction", description="Complex-action trajectory propagation experiments.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, run_opts=True):
        sp = sub.add_parser(name, help=help_)
        if run_opts:
            sp.add_argument("--config", required=True,
                            help=f"config file path or shipped name ({', '.join(shipped_configs())})")
            sp.add_argument("--out", help="output directory (default: <output.dir>/<config name>)")
            sp.add_argument("--threads", type=int, default=1, help="worker threads for trajectory fans")
            sp.add_argument("--dt", type=float, help="override the integration and root-search time step")
            sp.add_argument("--seed-sweep", choices=("forward", "backward"), default="forward",
                            help="direction of root-search continuation across the target grid")
            sp.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a config entry")
        sp.set_defaults(func=fn)

    add("propagate", cmd_propagate, "integrate a trajectory fan and write trajectories.csv / final.csv")
    add("reference", cmd_reference, "run the split-operator reference and write reference.csv")
    add("interfere", cmd_interfere, "split a real-classical fan into branches and write branches.csv")
    add("compare", cmd_compare, "compare the trajectory method with the reference; write compare.csv and metrics.json")
    add("validate", cmd_validate, "run the acceptance checks", run_opts=False)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        print("error: --threads must be >= 1", file=sys.stderr)
        return 2
    try:
        rc = args.func(args)
    except (ConfigError, FileNotFoundError, UncoveredRegionError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return rc or 0


if __name__ == "__main__":
    sys.exit(main())
