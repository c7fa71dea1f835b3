#!/usr/bin/env python3
"""Check the published gap claims on the canonical grids and emit the
claim-surface table (violations are reported, never fatal).

Examples:
    python scripts/verify_claims.py --preset all --grid smoke --format csv
    python scripts/verify_claims.py --preset strong --grid full --out strong.csv
"""

import sys

from fadingdirt.cli import main

if __name__ == "__main__":
    raise SystemExit(main(["verify"] + sys.argv[1:]))
