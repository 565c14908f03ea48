#!/usr/bin/env python3
"""
Lattice Sumsets
Main entry point for the exact sumset toolkit.
"""

import logging
import sys

from lattice_sumsets.cli import run

# Logs go to stderr; stdout carries only results.
logging.basicConfig(
    level=logging.WARNING,
    format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
    stream=sys.stderr
)


if __name__ == "__main__":
    sys.exit(run(sys.argv[1:]))
