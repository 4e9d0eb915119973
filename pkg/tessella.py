#!/usr/bin/env python3
"""
tessella
========
Command-line entry point. See `python tessella.py --help`.

Examples:
    python tessella.py count -p 4 -q 5 -k 10 --mode direct
    python tessella.py enumerate -p 4 -q 5 --mode full --out records.json
    python tessella.py analyse records.json --quotients --cycles vertex
    python tessella.py render -p 4 -q 5 --record 0 --emphasis 1,2 --dual -o emphasis.svg
    python tessella.py csl -p 3 -q 8 --centre face --angle 180 --points centres
    python tessella.py table1 --convention best
"""

import sys

from cli.main import main

if __name__ == "__main__":
    sys.exit(main())
