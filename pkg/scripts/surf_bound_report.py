#!/usr/bin/env python3
"""Print the security-loss report for the SURF parameter set.

Thin wrapper over `cbfdh bound --preset surf`; keeps a copy-pasteable
record of the five loss terms, the negligibility checks, and the
oracle-swap-term discrepancy note in one place.
"""

import sys

from cbfdh.cli import main

if __name__ == "__main__":
    sys.exit(main(["bound", "--preset", "surf", *sys.argv[1:]]))
