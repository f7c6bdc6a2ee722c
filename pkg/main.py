#!/usr/bin/env python3
"""
Main entry point for fincat-herm
Runs one CLI command: validate, fixedpoints, herm, pi0u, indefinite, equiv,
triangles, corollary, biequivalence, gen or report
"""

import sys
import os

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(__file__), 'src'))

from src.cli import run


def main():
    """Run the command line and exit with its status (0 pass, 1 check failed, 2 bad input)."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
