import argparse
import re
import sys
import unittest

from harness.decorators import number, slow
from harness.json_test_runner import JSONTestRunner


def iter_cases(suite):
    for item in suite:
        if isinstance(item, unittest.TestSuite):
            yield from iter_cases(item)
        else:
            yield item


def filter_suite(suite, section: str, include_slow: bool) -> unittest.TestSuite:
    kept = unittest.TestSuite()
    for case in iter_cases(suite):
        if "FailedTest" in str(type(case)):
            kept.addTest(case)
            continue
        func = getattr(case, case._testMethodName)
        if slow.value_of(func) is True and not include_slow:
            continue
        if section and not re.match(rf"^{re.escape(section)}\.", number.value_of(func) or ""):
            continue
        kept.addTest(case)
    return kept


if __name__ == "__main__":

    p = argparse.ArgumentParser()
    p.add_argument(
        "section",
        help=(
            "The section you'd like to run. "
            "Leave blank for all sections.\n\n"
            "Example: run_tests.py 3\n"
            "Runs the tests with @number('3.x')."
        ),
        default="",
        nargs="?",
    )
    p.add_argument(
        "-s",
        "--slow",
        help="Also run the long acceptance tests marked @slow().",
        action="store_true",
    )
    p.add_argument(
        "-j",
        "--json",
        help="Print results as JSON.",
        action="store_true",
    )
    args = p.parse_args()

    suite = filter_suite(unittest.defaultTestLoader.discover("tests", top_level_dir="."), args.section, args.slow)
    if args.json:
        outcome = JSONTestRunner(stream=sys.stdout).run(suite)
    else:
        outcome = unittest.TextTestRunner().run(suite)
    sys.exit(0 if outcome.wasSuccessful() else 1)
