#!/usr/bin/env python3
"""Run a bound sweep from the command line.

Examples:
    python scripts/run_sweep.py --preset gaussian-smoke --format csv
    python scripts/run_sweep.py --theorem mass-half --dist two-point \
        --P-grid 1,10,100 --c2-grid 4,16 --format json --out report.json
"""

import sys

from fadingdirt.cli import main

if __name__ == "__main__":
    raise SystemExit(main(["sweep"] + sys.argv[1:]))
