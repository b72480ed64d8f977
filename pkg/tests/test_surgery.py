#!/usr/bin/env python3
"""
Unit tests for the graph surgeries

Shapes of the glued graphs, and agreement with the direct constructions.
"""

import unittest
from itertools import product as cartesian
from pathlib import Path

from hypothesis import given, settings
from hypothesis import strategies as st

# Add src to path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core import setops, surgery
from src.core.bisim import is_extensional
from src.core.canon import atom, canonicalize, make_set
from src.core.errors import AtomArgument
from src.core.generators import make_rng, random_hfset
from src.core.graph_core import members
from src.core.logic import enumerate_rank, parse_formula

EMPTY = make_set(())
BINARY = ['pair', 'kpair', 'product', 'func_space', 'mv_func_space']
UNARY = ['union', 'powerset', 'tc', 'successor']


class TestGluedGraphs(unittest.TestCase):
    """Test cases for the unquotiented graphs"""

    def test_empty(self):
        apg = surgery.empty_graph()
        self.assertEqual(apg.node_count, 1)
        self.assertIs(surgery.empty(), EMPTY)

    def test_pair_graph_before_quotient(self):
        apg = surgery.pair_graph(EMPTY, EMPTY)
        self.assertEqual(apg.node_count, 3)
        self.assertEqual(len(members(apg)), 2)
        self.assertFalse(is_extensional(apg))
        self.assertEqual(surgery.pair_apg(EMPTY, EMPTY).node_count, 2)

    def test_vn_graphs(self):
        self.assertEqual(surgery.vn_graph(2).graph.edge_count, 3)
        self.assertEqual(surgery.vn_graph(3).graph.edge_count, 6)
        self.assertTrue(is_extensional(surgery.vn_graph(4)))
        with self.assertRaises(ValueError):
            surgery.vn_graph(-1)

    def test_omega_upto_is_vn(self):
        self.assertIs(surgery.omega_upto(4), setops.vn(4))

    def test_product_graph_layout(self):
        # X//* + Y//* + |X| + |X||Y| + |X||Y| + 1
        x, y = setops.vn(2), setops.vn(1)
        apg = surgery.product_graph(x, y)
        self.assertEqual(apg.node_count, 2 + 1 + 2 + 2 + 2 + 1)
        self.assertEqual(len(members(apg)), 2)

    def test_product_with_empty_factor(self):
        self.assertEqual(surgery.product_graph(setops.vn(2), EMPTY).node_count, 1)
        self.assertIs(surgery.product(setops.vn(2), EMPTY), EMPTY)

    def test_powerset_graph_layout(self):
        apg = surgery.powerset_graph(setops.vn(2))
        self.assertEqual(apg.node_count, 2 + 4 + 1)
        self.assertEqual(len(members(apg)), 4)

    def test_tc_graph_root_over_everything(self):
        apg = surgery.tc_graph(setops.vn(3))
        self.assertEqual(len(members(apg)), apg.node_count - 1)

    def test_func_space_graph_one_node_per_function(self):
        apg = surgery.func_space_graph(setops.vn(2), setops.vn(3))
        self.assertEqual(len(members(apg)), 9)
        self.assertEqual(len(surgery.func_space(setops.vn(2), setops.vn(3))), 9)

    def test_mv_func_space(self):
        self.assertEqual(len(surgery.mv_func_space(setops.vn(2), setops.vn(2))), 9)

    def test_atom_arguments_rejected(self):
        for operation in ['union', 'powerset', 'tc']:
            with self.subTest(operation=operation):
                with self.assertRaises(AtomArgument):
                    surgery.SURGERIES[operation](atom('a'))
        with self.assertRaises(AtomArgument):
            surgery.product(atom('a'), EMPTY)

    def test_pair_accepts_atoms(self):
        self.assertIs(surgery.pair(atom('a'), EMPTY), make_set([atom('a'), EMPTY]))

    def test_registry(self):
        self.assertIs(surgery.SURGERIES['powerset'], surgery.powerset)
        self.assertEqual(surgery.powerset.__name__, 'powerset')
        self.assertEqual(surgery.powerset_apg.__name__, 'powerset_apg')


class TestSchemaSurgeries(unittest.TestCase):
    """Test cases for separation, replacement and quotient-set surgeries"""

    def test_subset_by_surgery(self):
        result = surgery.subset_by_surgery(setops.vn(4), lambda a: len(a) >= 2)
        self.assertIs(result, make_set([setops.vn(2), setops.vn(3)]))

    def test_subset_drops_unselected_branches(self):
        apg = surgery.subset_by_surgery_graph(setops.vn(4), lambda a: len(a) == 1)
        # {} and {{}} below a fresh root
        self.assertEqual(apg.node_count, 3)

    def test_separation(self):
        formula = parse_formula("all z in x. z in p")
        result = surgery.separation(setops.vn(4), formula, 'x', {'p': setops.vn(2)})
        self.assertIs(result, setops.vn(3))

    def test_separation_of_atom(self):
        with self.assertRaises(AtomArgument):
            surgery.separation(atom('a'), parse_formula("true"), 'x')

    def test_replacement_image(self):
        result = surgery.replacement_image(setops.vn(3), setops.powerset)
        self.assertIs(result, setops.replacement_image(setops.vn(3), setops.powerset))

    def test_quotient_set(self):
        key = len
        x = make_set([setops.vn(1), make_set([setops.vn(1)]), setops.vn(2)])
        self.assertIs(surgery.quotient_set(x, key), setops.quotient_set(x, key))
        self.assertEqual(len(surgery.quotient_set(x, key)), 2)


class TestPathAgreement(unittest.TestCase):
    """Surgery results equal the direct constructions"""

    def test_exhaustive_rank_three(self):
        universe = enumerate_rank(3)
        for name in UNARY:
            for x in universe:
                with self.subTest(operation=name, x=x):
                    self.assertIs(surgery.SURGERIES[name](x), setops.DIRECT[name](x))
        for name in BINARY:
            for x, y in cartesian(universe, repeat=2):
                with self.subTest(operation=name, x=x, y=y):
                    self.assertIs(surgery.SURGERIES[name](x, y), setops.DIRECT[name](x, y))

    @settings(max_examples=100, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_random_inputs(self, seed):
        rng = make_rng(seed)
        x = random_hfset(rng, max_rank=4, max_width=3, atom_names=('a', 'b'))
        y = random_hfset(rng, max_rank=3, max_width=2, atom_names=('a',))
        for name in ['pair', 'kpair']:
            self.assertIs(surgery.SURGERIES[name](x, y), setops.DIRECT[name](x, y))
        if x.is_set:
            for name in UNARY:
                self.assertIs(surgery.SURGERIES[name](x), setops.DIRECT[name](x))
            if y.is_set:
                self.assertIs(surgery.product(x, y), setops.product(x, y))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_quotients_are_canonical(self, seed):
        x = random_hfset(make_rng(seed), max_rank=4)
        apg = surgery.powerset_apg(x)
        self.assertTrue(is_extensional(apg))
        self.assertIs(canonicalize(apg), setops.powerset(x))


if __name__ == '__main__':
    unittest.main()
