#!/usr/bin/env python
"""Emit the negative-Pell table (solvability, fundamental solutions, criterion flags).

Example:
    python scripts/pell_table.py --d-max 1000
"""
import sys

from garlands.cli import main

if __name__ == "__main__":
    sys.exit(main(["sweep", "--pell", *sys.argv[1:]]))
