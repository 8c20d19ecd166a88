#!/usr/bin/env python
"""Run the verification sweep over all algebras with q^n up to a bound.

Example:
    python scripts/run_sweep.py --max-order 500 --json --cache-dir .sweep-cache
"""
import sys

from garlands.cli import main

if __name__ == "__main__":
    sys.exit(main(["sweep", *sys.argv[1:]]))
