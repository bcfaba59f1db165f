#!/usr/bin/env python3
"""Run every shipped experiment config and collect the result tables.

Usage: python3 scripts/reproduce_paper.py [--out build/tables] [--only fig1b ...]
"""

import argparse
import sys
from pathlib import Path

import yaml

from wgss.cli import main as wgss_main

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"


def run_all(out_dir: Path, only=None) -> int:
    configs = sorted(CONFIG_DIR.glob("*.yaml"))
    if only:
        configs = [c for c in configs if c.stem in only]
    if not configs:
        print("no matching configs", file=sys.stderr)
        return 1
    for cfg in configs:
        command = yaml.safe_load(cfg.read_text())["command"]
        print(f"== {cfg.stem} ({command}) ==", file=sys.stderr)
        rc = wgss_main([command, "--config", str(cfg), "--out", str(out_dir)])
        if rc != 0:
            print(f"{cfg.stem} failed with exit code {rc}", file=sys.stderr)
            return rc
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--out", type=Path, default=Path("build/tables"))
    ap.add_argument("--only", nargs="*", default=None,
                    help="config stems to run (default: all)")
    args = ap.parse_args()
    sys.exit(run_all(args.out, args.only))
