#!/usr/bin/env python3
"""Discover and run the test suite; exit 0 only if every test passes."""

import argparse
import os
import sys
import unittest

project_root = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
sys.path.insert(0, project_root)


def build_suite(names):
    loader = unittest.TestLoader()
    if names:
        return loader.loadTestsFromNames(names)
    return loader.discover(os.path.dirname(__file__), pattern='test_*.py', top_level_dir=project_root)


def run_tests(names=None, failfast: bool = False, verbosity: int = 2) -> int:
    """Run the named tests (all of them by default) and print a summary."""
    runner = unittest.TextTestRunner(verbosity=verbosity, failfast=failfast)
    result = runner.run(build_suite(names))

    print("\n" + "=" * 70)
    print(f"Tests run: {result.testsRun}")
    print(f"Failures: {len(result.failures)}")
    print(f"Errors: {len(result.errors)}")
    print(f"Skipped: {len(result.skipped)}")
    if result.wasSuccessful():
        print("\n✓ All tests passed!")
    else:
        for test, _ in result.failures + result.errors:
            print(f"✗ {test.id()}")
    print("=" * 70)

    return 0 if result.wasSuccessful() else 1


def main() -> int:
    parser = argparse.ArgumentParser(
        description='Run the beamformer test suite.',
        epilog='Examples:\n'
               '  python tests/run_tests.py\n'
               '  python tests/run_tests.py tests.test_solver\n'
               '  python tests/run_tests.py tests.test_decomposition.TestRankOneDecompose.test_random_instances',
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument('names', nargs='*', help='Dotted test module, class or method names')
    parser.add_argument('--failfast', '-f', action='store_true', help='Stop at the first failure')
    parser.add_argument('--quiet', '-q', action='store_true', help='One character per test')
    args = parser.parse_args()
    return run_tests(args.names, failfast=args.failfast, verbosity=1 if args.quiet else 2)


if __name__ == '__main__':
    sys.exit(main())
