"""Entrypoint: ``python -m orbitk.main <command> ...``."""

import sys

from orbitk.cli import main

if __name__ == "__main__":
    sys.exit(main())
