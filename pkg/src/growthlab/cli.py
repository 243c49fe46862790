"""Command-line entry point: ``growthlab run|preset|list|validate``."""

from __future__ import annotations

import argparse
import os
import sys

from .config import parse_config_text, read_config
from .errors import ConfigError
from .params import validate_params
from .presets import PRESETS, list_presets, preset_text
from .scenarios import EXIT_INVALID, EXIT_OK, fmt, run_config

DEFAULT_ROOT = "growthlab-out"


def output_root() -> str:
    return os.environ.get("GROWTHLAB_OUT") or DEFAULT_ROOT


def _resolve(out: str | None, subdir: str) -> str:
    if out:
        return out
    return os.path.join(output_root(), subdir)


def _cmd_run(args) -> int:
    try:
        cfg = read_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    out = _resolve(args.out, cfg.output_dir or cfg.name)
    status = run_config(cfg, out)
    if status == EXIT_OK:
        print(out)
    return status


def _cmd_preset(args) -> int:
    if args.name not in PRESETS:
        print(f"unknown preset {args.name!r}; try `growthlab list`", file=sys.stderr)
        return EXIT_INVALID
    cfg = parse_config_text(preset_text(args.name), default_name=args.name)
    out = _resolve(args.out, args.name)
    status = run_config(cfg, out)
    if status == EXIT_OK:
        print(out)
    return status


def _cmd_list(args) -> int:
    for name, desc in list_presets():
        print(f"{name}\t{desc}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    try:
        cfg = read_config(args.config)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    report = validate_params(cfg.params)
    for v in report.violated_conditions:
        print(f"violated: {v.name} (value {fmt(v.value)}, bound {fmt(v.bound)}) {v.detail}".rstrip())
    for v in report.flags:
        print(f"flag: {v.name} (value {fmt(v.value)}, bound {fmt(v.bound)}) {v.detail}".rstrip())
    print("valid" if report.valid else "invalid")
    return EXIT_OK if report.valid else EXIT_INVALID


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="growthlab", description="Data-economy growth model laboratory")
    sub = ap.add_subparsers(dest="command", required=True)
    r = sub.add_parser("run", help="run a scenario config file")
    r.add_argument("config")
    r.add_argument("--out", help="output directory (overrides the config and GROWTHLAB_OUT)")
    r.set_defaults(func=_cmd_run)
    pr = sub.add_parser("preset", help="run a built-in scenario")
    pr.add_argument("name")
    pr.add_argument("--out", help="output directory")
    pr.set_defaults(func=_cmd_preset)
    sub.add_parser("list", help="list built-in scenarios").set_defaults(func=_cmd_list)
    v = sub.add_parser("validate", help="check a config and its parameters")
    v.add_argument("config")
    v.set_defaults(func=_cmd_validate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
