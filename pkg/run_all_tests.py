#!/usr/bin/env python3
"""
Runs the tessella sprint tests (`test_sprint*.py`).

Usage:
    python run_all_tests.py          # every sprint
    python run_all_tests.py 3 5      # sprints 3 and 5 only

Exits 0 when every selected test passes, 1 otherwise.
"""

import os
import sys
import unittest

from loguru import logger


def _discover_tests(start_dir: str, sprints):
    """Sprint test modules in start_dir; all of them, or only the listed sprint numbers."""
    loader = unittest.TestLoader()
    if not sprints:
        return loader.discover(start_dir=start_dir, pattern='test_sprint*.py', top_level_dir=start_dir)
    suite = unittest.TestSuite()
    for n in sprints:
        suite.addTests(loader.discover(start_dir=start_dir, pattern=f'test_sprint{n}.py', top_level_dir=start_dir))
    return suite


def main():
    root_dir = os.path.abspath(os.path.dirname(__file__))
    sprints = [int(a) for a in sys.argv[1:]]

    # keep library warnings (e.g. truncated patches) out of the test report
    logger.remove()
    logger.add(sys.stderr, level="ERROR")

    runner = unittest.TextTestRunner(verbosity=2)
    result = runner.run(_discover_tests(root_dir, sprints))

    sys.exit(0 if result.wasSuccessful() else 1)


if __name__ == '__main__':
    main()
