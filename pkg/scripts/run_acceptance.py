#!/usr/bin/env python3
"""Run the acceptance checks and print one line per check.

    python3 scripts/run_acceptance.py            # all twelve
    python3 scripts/run_acceptance.py 1 8 9      # a subset
"""

import sys

from heisengrowth.acceptance import run_all

if __name__ == "__main__":
    only = [int(x) for x in sys.argv[1:]] or None
    results = run_all(only=only, echo=print)
    failed = [r.number for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} passed" + (f"; failed: {failed}" if failed else ""))
    sys.exit(1 if failed else 0)
