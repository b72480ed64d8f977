#!/usr/bin/env python3
"""
Unit tests for formulas

Parsing, printing, free variables and evaluation.
"""

import unittest
from pathlib import Path

from hypothesis import given, settings
from hypothesis import strategies as st

# Add src to path
import sys
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.core.canon import atom, make_set
from src.core.errors import (
    AtomBoundInQuantifier,
    FormulaSyntaxError,
    RankTooLarge,
    ScopeError,
    UnboundVariable,
)
from src.core.generators import make_rng, random_formula, random_hfset
from src.core.logic import (
    And,
    Bottom,
    Eq,
    ExistsIn,
    ExistsRank,
    ForallIn,
    Implies,
    IsSet,
    Mem,
    Not,
    Or,
    Top,
    enumerate_rank,
    evaluate,
    is_delta0,
    member_predicate,
    parse_formula,
    render_formula,
)
from src.core.setops import vn

EMPTY = make_set(())


class TestParsing(unittest.TestCase):
    """Test cases for parse_formula"""

    def test_atomic(self):
        self.assertEqual(parse_formula("x = y"), Eq('x', 'y'))
        self.assertEqual(parse_formula("x in y"), Mem('x', 'y'))
        self.assertEqual(parse_formula("isset x"), IsSet('x'))
        self.assertEqual(parse_formula("true"), Top())
        self.assertEqual(parse_formula("false"), Bottom())

    def test_precedence(self):
        self.assertEqual(
            parse_formula("not a in b and c in d or true"),
            Or(And(Not(Mem('a', 'b')), Mem('c', 'd')), Top()),
        )

    def test_implication_is_right_associative(self):
        self.assertEqual(
            parse_formula("true -> false -> true"),
            Implies(Top(), Implies(Bottom(), Top())),
        )

    def test_quantifier_body_extends_right(self):
        self.assertEqual(
            parse_formula("some z in x. z in y and true"),
            ExistsIn('z', 'x', And(Mem('z', 'y'), Top())),
        )

    def test_rank_quantifier(self):
        self.assertEqual(
            parse_formula("all v rank 3. (v = v)"),
            parse_formula("all v rank 3. v = v"),
        )
        self.assertIsInstance(parse_formula("some v rank 2. true"), ExistsRank)

    def test_syntax_error_positions(self):
        cases = [("x in", 4), ("x = y z", 6), ("x # y", 2), ("some z x. true", 7), ("(true", 5)]
        for text, position in cases:
            with self.subTest(text=text):
                with self.assertRaises(FormulaSyntaxError) as caught:
                    parse_formula(text)
                self.assertEqual(caught.exception.position, position)

    def test_keyword_is_not_a_variable(self):
        with self.assertRaises(FormulaSyntaxError):
            parse_formula("in = x")

    def test_scope(self):
        self.assertEqual(parse_formula("some z in x. z in x", free={'x'}),
                         ExistsIn('z', 'x', Mem('z', 'x')))
        with self.assertRaises(ScopeError) as caught:
            parse_formula("x in y", free={'x'})
        self.assertEqual(caught.exception.variable, 'y')

    def test_binder_goes_out_of_scope(self):
        with self.assertRaises(ScopeError):
            parse_formula("(some z in x. true) and z in x", free={'x'})

    def test_render(self):
        formula = ForallIn('z', 'x', Implies(Mem('z', 'y'), Not(Eq('z', 'x'))))
        self.assertEqual(render_formula(formula), "(all z in x. (z in y -> not z = x))")
        self.assertEqual(str(formula), render_formula(formula))

    @settings(max_examples=200, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1), st.integers(min_value=0, max_value=4))
    def test_parse_inverts_render(self, seed, depth):
        formula = random_formula(make_rng(seed), ['x', 'y'], depth)
        self.assertEqual(parse_formula(render_formula(formula), free={'x', 'y'}), formula)


class TestStructure(unittest.TestCase):
    """Test cases for free variables and the Delta-0 check"""

    def test_free_variables(self):
        formula = parse_formula("some z in x. z in y or w = z")
        self.assertEqual(formula.free_variables(), frozenset({'x', 'y', 'w'}))
        self.assertEqual(parse_formula("all v rank 2. v = v").free_variables(), frozenset())

    def test_is_delta0(self):
        self.assertTrue(is_delta0(parse_formula("all z in x. not z in z")))
        self.assertFalse(is_delta0(parse_formula("x in x and some v rank 1. true")))


class TestEvaluation(unittest.TestCase):
    """Test cases for evaluate"""

    def test_membership_and_equality(self):
        env = {'x': EMPTY, 'y': vn(1)}
        self.assertTrue(evaluate(parse_formula("x in y"), env))
        self.assertFalse(evaluate(parse_formula("y in x"), env))
        self.assertTrue(evaluate(parse_formula("x = x and not x = y"), env))

    def test_atoms(self):
        env = {'x': atom('a'), 'y': atom('a'), 's': EMPTY}
        self.assertFalse(evaluate(parse_formula("x in y"), env))
        self.assertTrue(evaluate(parse_formula("x = y"), env))
        self.assertFalse(evaluate(parse_formula("isset x"), env))
        self.assertTrue(evaluate(parse_formula("isset s"), env))

    def test_bounded_quantifiers(self):
        env = {'x': vn(3), 'y': vn(2)}
        self.assertTrue(evaluate(parse_formula("all z in y. z in x"), env))
        self.assertFalse(evaluate(parse_formula("all z in x. z in y"), env))
        self.assertTrue(evaluate(parse_formula("some z in x. not z in y"), env))
        self.assertFalse(evaluate(parse_formula("some z in s. true"), {'s': EMPTY}))

    def test_rank_quantifiers(self):
        self.assertTrue(evaluate(parse_formula("some v rank 2. some w in v. true"), {}))
        self.assertFalse(evaluate(parse_formula("all v rank 2. some w in v. true"), {}))
        with self.assertRaises(RankTooLarge):
            evaluate(parse_formula("some v rank 6. true"), {})
        with self.assertRaises(RankTooLarge):
            evaluate(parse_formula("some v rank 3. true"), {}, max_rank=2)

    def test_errors(self):
        with self.assertRaises(UnboundVariable) as caught:
            evaluate(parse_formula("x in q"), {'x': EMPTY})
        self.assertEqual(caught.exception.name, 'q')
        with self.assertRaises(AtomBoundInQuantifier):
            evaluate(parse_formula("some z in x. true"), {'x': atom('a')})

    def test_short_circuit(self):
        self.assertTrue(evaluate(parse_formula("true or x in y"), {}))
        self.assertFalse(evaluate(parse_formula("false and x in y"), {}))
        self.assertTrue(evaluate(parse_formula("false -> x in y"), {}))

    def test_enumerate_rank(self):
        self.assertEqual([len(enumerate_rank(k)) for k in range(5)], [0, 1, 2, 4, 16])
        self.assertEqual(enumerate_rank(3), sorted(enumerate_rank(3)))
        with self.assertRaises(RankTooLarge):
            enumerate_rank(6)

    def test_member_predicate(self):
        holds = member_predicate(parse_formula("x in p"), 'x', {'p': vn(2)})
        self.assertTrue(holds(vn(1)))
        self.assertFalse(holds(vn(2)))

    def test_member_predicate_checks_env_upfront(self):
        with self.assertRaises(UnboundVariable) as caught:
            member_predicate(parse_formula("x in q or x in p"), 'x')
        self.assertEqual(caught.exception.name, 'p')

    @settings(max_examples=150, deadline=None)
    @given(st.integers(min_value=0, max_value=2 ** 32 - 1))
    def test_random_delta0_formulas_evaluate(self, seed):
        rng = make_rng(seed)
        formula = random_formula(rng, ['x', 'y'], depth=3)
        env = {'x': random_hfset(rng, max_rank=3), 'y': random_hfset(rng, max_rank=3)}
        self.assertTrue(is_delta0(formula))
        self.assertEqual(evaluate(Not(formula), env), not evaluate(formula, env))


if __name__ == '__main__':
    unittest.main()
