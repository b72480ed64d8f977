#!/usr/bin/env python3
"""
Unit tests for canonical sets

Interning, ordering, rendering, APG conversion and Ackermann coding.
"""

import pickle
import unittest
from pathlib import Path

from hypothesis import given, settings
from hypothesis import strategies as st

# Add src to path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.canon import (
    ack_decode,
    ack_encode,
    atom,
    canonicalize,
    compare,
    hereditary_members,
    intern_store_size,
    is_hereditarily_acyclic,
    is_transitive,
    make_set,
    parse_braces,
    render,
    to_apg,
    to_apg_with_values,
)
from src.core.bisim import is_extensional, unfold_to_tree
from src.core.errors import AtomNotEncodable, GraphFormatError, NegativeCode
from src.core.generators import make_rng, random_apg, random_hfset
from src.core.graph_core import RawGraph, validate
from src.core.logic import enumerate_rank

EMPTY = make_set(())
ONE = make_set([EMPTY])
TWO = make_set([EMPTY, ONE])


class TestInterning(unittest.TestCase):
    """Test cases for make_set and atom"""

    def test_equal_sets_are_identical(self):
        self.assertIs(make_set([ONE, EMPTY]), TWO)
        self.assertIs(make_set([EMPTY, EMPTY]), ONE)
        self.assertIs(atom('a'), atom('a'))

    def test_atom_differs_from_empty_set(self):
        self.assertIsNot(atom('a'), EMPTY)
        self.assertTrue(atom('a').is_atom)
        self.assertEqual(len(atom('a')), 0)

    def test_invalid_atom_name(self):
        with self.assertRaises(GraphFormatError):
            atom('')
        with self.assertRaises(GraphFormatError):
            atom('a b')

    def test_store_grows_only_for_new_sets(self):
        before = intern_store_size()
        make_set([EMPTY, ONE])
        self.assertEqual(intern_store_size(), before)

    def test_pickle_keeps_identity(self):
        self.assertIs(pickle.loads(pickle.dumps(TWO)), TWO)
        self.assertIs(pickle.loads(pickle.dumps(atom('q'))), atom('q'))

    def test_rank_and_purity(self):
        self.assertEqual(EMPTY.rank, 0)
        self.assertEqual(TWO.rank, 2)
        self.assertTrue(TWO.pure)
        self.assertFalse(make_set([atom('a')]).pure)

    def test_membership(self):
        self.assertIn(EMPTY, TWO)
        self.assertNotIn(TWO, TWO)


class TestOrderAndRendering(unittest.TestCase):
    """Test cases for compare, render and parse_braces"""

    def test_atoms_before_sets(self):
        self.assertEqual(compare(atom('z'), EMPTY), -1)
        self.assertEqual(compare(atom('a'), atom('b')), -1)
        self.assertEqual(compare(TWO, TWO), 0)

    def test_smaller_sets_first(self):
        self.assertEqual(compare(ONE, TWO), -1)
        self.assertEqual(compare(TWO, ONE), 1)

    def test_render(self):
        self.assertEqual(render(EMPTY), '{}')
        self.assertEqual(render(TWO), '{{},{{}}}')
        self.assertEqual(render(make_set([EMPTY, atom('x')])), '{@x,{}}')

    def test_parse_braces(self):
        self.assertIs(parse_braces('{ {} , {{}} }'), TWO)
        self.assertIs(parse_braces('{{{}},{}}'), TWO)
        self.assertIs(parse_braces('@a'), atom('a'))

    def test_parse_errors(self):
        for text in ['', '{', '{}}', '{,}', 'x', '{@}']:
            with self.subTest(text=text):
                with self.assertRaises(GraphFormatError):
                    parse_braces(text)

    def test_deep_nesting(self):
        depth = 2500
        value = EMPTY
        for _ in range(depth):
            value = make_set([value])
        text = render(value)
        self.assertEqual(text, "{" * (depth + 1) + "}" * (depth + 1))
        self.assertIs(parse_braces(text), value)
        self.assertEqual(compare(value, make_set([value])), -1)

    def test_canonicalize_deep_siblings(self):
        # two chains of depth 1500 and 1501 hanging from one root
        short, long = 1500, 1501
        children = [[]] + [[i] for i in range(short)]
        children += [[]] + [[short + 1 + i] for i in range(long)]
        children.append([short, short + 1 + long])
        apg = validate(RawGraph.from_adjacency(children), len(children) - 1)

        expected = [EMPTY]
        for _ in range(long):
            expected.append(make_set([expected[-1]]))
        self.assertIs(canonicalize(apg), make_set([expected[short], expected[long]]))

    @settings(max_examples=200, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_parse_inverts_render(self, seed):
        value = random_hfset(make_rng(seed), max_rank=5, atom_names=('a', 'b'))
        self.assertIs(parse_braces(render(value)), value)


class TestStructure(unittest.TestCase):
    """Test cases for hereditary structure"""

    def test_hereditary_members(self):
        self.assertEqual(hereditary_members(TWO), frozenset({EMPTY, ONE}))
        self.assertEqual(hereditary_members(EMPTY), frozenset())

    def test_transitive(self):
        self.assertTrue(is_transitive(TWO))
        self.assertFalse(is_transitive(make_set([ONE])))

    def test_acyclic(self):
        self.assertTrue(is_hereditarily_acyclic(TWO))


class TestApgConversion(unittest.TestCase):
    """Test cases for canonicalize and to_apg"""

    def test_to_apg_vn2(self):
        apg = to_apg(TWO)
        self.assertEqual(apg.node_count, 3)
        self.assertEqual(apg.graph.edge_count, 3)
        self.assertEqual(apg.root, 2)

    def test_to_apg_vn3_edges(self):
        vn3 = make_set([EMPTY, ONE, TWO])
        self.assertEqual(to_apg(vn3).graph.edge_count, 6)

    def test_to_apg_values(self):
        apg, values = to_apg_with_values(TWO)
        self.assertEqual(values, [EMPTY, ONE, TWO])
        self.assertTrue(is_extensional(apg))

    def test_atom_apg(self):
        apg = to_apg(atom('a'))
        self.assertEqual(apg.node_count, 1)
        self.assertEqual(apg.label(0), 'a')
        self.assertIs(canonicalize(apg), atom('a'))

    def test_canonicalize_redundant_graph(self):
        apg = validate(RawGraph(4, [(0, 3), (1, 2), (2, 3)]), 3)
        self.assertIs(canonicalize(apg), TWO)

    def test_round_trip_rank_four(self):
        universe = enumerate_rank(4)
        self.assertEqual(len(universe), 16)
        for value in universe:
            self.assertIs(canonicalize(to_apg(value)), value)

    @settings(max_examples=150, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_round_trip_random(self, seed):
        value = random_hfset(make_rng(seed), max_rank=6, atom_names=('a',))
        self.assertIs(canonicalize(to_apg(value)), value)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_unfolding_denotes_same_set(self, seed):
        value = random_hfset(make_rng(seed), max_rank=5)
        self.assertIs(canonicalize(unfold_to_tree(to_apg(value))), value)

    @settings(max_examples=80, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_to_apg_is_minimal(self, seed):
        value = canonicalize(random_apg(make_rng(seed), max_nodes=25))
        apg = to_apg(value)
        self.assertTrue(is_extensional(apg))
        self.assertEqual(apg.node_count, len(hereditary_members(value)) + 1)


class TestAckermann(unittest.TestCase):
    """Test cases for ack_encode and ack_decode"""

    def test_von_neumann_codes(self):
        vn = [EMPTY]
        for _ in range(4):
            vn.append(make_set(list(vn[-1].members) + [vn[-1]]))
        self.assertEqual([ack_encode(v) for v in vn], [0, 1, 3, 11, 2059])

    def test_decode(self):
        self.assertIs(ack_decode(0), EMPTY)
        self.assertIs(ack_decode(3), TWO)
        self.assertEqual(render(ack_decode(2)), '{{{}}}')

    def test_inverse_below_two_to_the_sixteen(self):
        for code in range(1 << 16):
            self.assertEqual(ack_encode(ack_decode(code)), code)

    def test_encode_then_decode_on_rank_four(self):
        for value in enumerate_rank(4):
            self.assertIs(ack_decode(ack_encode(value)), value)

    def test_atoms_not_encodable(self):
        with self.assertRaises(AtomNotEncodable):
            ack_encode(make_set([atom('a')]))

    def test_negative_code(self):
        with self.assertRaises(NegativeCode):
            ack_decode(-1)


if __name__ == '__main__':
    unittest.main()
