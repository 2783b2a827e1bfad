#!/usr/bin/env python3

"""
Shifted Yangian Toolkit
-----------------------
Description: Exact computations with representations of shifted Yangians:
standard factorization, q-characters, Jordan–Hölder classes, Baxter operators,
R-matrices and truncation checks.

Usage: python shifted_yangian.py <subcommand> [options]
"""

import sys

from src.shifted_yangian.app import main

if __name__ == "__main__":
    sys.exit(main())
