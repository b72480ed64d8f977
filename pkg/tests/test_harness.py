#!/usr/bin/env python3
"""
Unit tests for the axiom harness
"""

import time
import unittest
from pathlib import Path
from unittest.mock import patch

# Add src to path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core import harness, surgery
from src.core.bisim import Partition
from src.core.generators import make_rng
from src.core.harness import (
    ACK_CODE_BOUND,
    SUITES,
    HarnessContext,
    HarnessReport,
    SuiteResult,
    run_harness,
)

SMALL = dict(rank=2, samples=10, dag_count=10, dag_max_nodes=15)
QUICK_SUITES = ['Pairing', 'Union', 'Round trip', 'Kuratowski pairs', 'Surgery agreement']


class TestSuiteResult(unittest.TestCase):
    """Test cases for result rendering"""

    def test_render(self):
        self.assertEqual(SuiteResult('Union', True, 12).render(), 'PASS Union (12 checks)')
        self.assertEqual(SuiteResult('Union', False, 3, 'union({})').render(),
                         'FAIL Union (3 checks) union({})')

    def test_report_exit_code(self):
        report = HarnessReport(0, 2, 10, [SuiteResult('A', True, 1), SuiteResult('B', False, 1, 'x')])
        self.assertFalse(report.passed)
        self.assertEqual(report.exit_code, 1)
        self.assertEqual(report.render(), 'PASS A (1 checks)\nFAIL B (1 checks) x\n')


class TestRunHarness(unittest.TestCase):
    """Test cases for run_harness"""

    def test_suite_names(self):
        self.assertEqual(len(SUITES), 23)
        for name in ['Extensionality', 'Pairing', 'Delta0-Separation', 'Infinity',
                     'Bisimulation oracle', 'Category laws', 'Well-foundedness']:
            self.assertIn(name, SUITES)

    def test_all_suites_pass(self):
        report = run_harness(seed=0, **SMALL)
        self.assertEqual(len(report.results), len(SUITES))
        for result in report.results:
            with self.subTest(suite=result.suite):
                self.assertTrue(result.passed, result.render())
                self.assertGreater(result.checked, 0)
        self.assertEqual(report.exit_code, 0)

    def test_lines_sorted_by_suite(self):
        report = run_harness(seed=3, suites=list(reversed(QUICK_SUITES)), **SMALL)
        self.assertEqual([r.suite for r in report.results], sorted(QUICK_SUITES))

    def test_same_seed_same_report(self):
        first = run_harness(seed=11, suites=QUICK_SUITES, **SMALL).render()
        second = run_harness(seed=11, suites=QUICK_SUITES, **SMALL).render()
        self.assertEqual(first, second)

    def test_suite_streams_independent_of_selection(self):
        alone = run_harness(seed=5, suites=['Union'], **SMALL)
        together = run_harness(seed=5, suites=QUICK_SUITES, **SMALL)
        union = [r for r in together.results if r.suite == 'Union'][0]
        self.assertEqual(alone.results[0], union)

    def test_parallel_matches_serial(self):
        serial = run_harness(seed=7, suites=QUICK_SUITES, **SMALL)
        parallel = run_harness(seed=7, suites=QUICK_SUITES, parallel=True, max_workers=3, **SMALL)
        self.assertEqual(serial.render(), parallel.render())

    def test_unknown_suite(self):
        with self.assertRaises(ValueError):
            run_harness(suites=['Replacement'], **SMALL)

    def test_non_extensional_pair_is_caught(self):
        report = run_harness(seed=0, suites=['Pairing'],
                             surgery_overrides={'pair_apg': surgery.pair_graph}, **SMALL)
        result = report.results[0]
        self.assertFalse(result.passed)
        self.assertEqual(result.detail, 'pair({},{}) has 2 root members')
        self.assertTrue(report.render().startswith('FAIL Pairing ('))
        self.assertEqual(report.exit_code, 1)

    def test_broken_union_is_caught(self):
        report = run_harness(seed=0, suites=['Union'],
                             surgery_overrides={'union': lambda x: x}, **SMALL)
        self.assertFalse(report.passed)

    def test_to_dataframe(self):
        frame = run_harness(seed=1, suites=QUICK_SUITES[:2], **SMALL).to_dataframe()
        self.assertEqual(list(frame.columns), ['suite', 'status', 'checked', 'detail'])
        self.assertEqual(list(frame['suite']), ['Pairing', 'Union'])
        self.assertEqual(set(frame['status']), {'PASS'})

    def test_ackermann_covers_sixteen_bit_codes(self):
        self.assertEqual(ACK_CODE_BOUND, 1 << 16)
        result = run_harness(seed=0, suites=['Ackermann coding'], **SMALL).results[0]
        self.assertTrue(result.passed, result.render())
        self.assertGreaterEqual(result.checked, 1 << 16)

    def test_oracle_sees_every_construction(self):
        ctx = HarnessContext(rank=2, samples=3, rng=make_rng(0))
        names = {description.split('(')[0] for description, _ in harness._construction_graphs(ctx)}
        for name in ['pair', 'kpair', 'prod', 'exp', 'mvexp', 'union', 'tc', 'succ', 'pow', 'omega']:
            self.assertIn(name, names)

    def test_oracle_checks_construction_graphs(self):
        def discrete(graph):
            return Partition.from_keys(graph, range(graph.node_count))

        with patch.object(harness, 'max_bisim_refine', discrete):
            report = run_harness(seed=0, rank=2, samples=2, dag_count=0, dag_max_nodes=10,
                                 suites=['Bisimulation oracle'])
        self.assertFalse(report.passed)
        self.assertEqual(report.results[0].detail, 'pair({},{})')

    def test_acceptance_settings(self):
        started = time.perf_counter()
        report = run_harness(seed=0, rank=4, samples=500)
        elapsed = time.perf_counter() - started
        for result in report.results:
            with self.subTest(suite=result.suite):
                self.assertTrue(result.passed, result.render())
        self.assertLess(elapsed, 60)


if __name__ == '__main__':
    unittest.main()
