"""
Formulas over hereditarily finite sets

Abstract syntax for bounded (Delta-0) formulas plus rank-bounded quantifiers,
a parser for the ASCII grammar, and a classical evaluator in which `=` is
canonical equality and `in` is membership of canonical sets.

Grammar, loosest binding first:

    formula  := disj ['->' formula]
    disj     := conj ('or' conj)*
    conj     := unary ('and' unary)*
    unary    := 'not' unary | quant | primary
    quant    := ('some' | 'all') VAR ('in' VAR | 'rank' NAT) '.' formula
    primary  := 'true' | 'false' | 'isset' VAR | VAR '=' VAR | VAR 'in' VAR
              | '(' formula ')'
"""

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from src.core.canon import HfSet, make_set
from src.core.errors import (
    AtomBoundInQuantifier,
    FormulaSyntaxError,
    RankTooLarge,
    ScopeError,
    UnboundVariable,
)
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

DEFAULT_MAX_RANK = 5

Env = Mapping[str, HfSet]


class Formula:
    """Base class of formula nodes"""

    def free_variables(self) -> FrozenSet[str]:
        raise NotImplementedError

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True)
class Eq(Formula):
    left: str
    right: str

    def free_variables(self):
        return frozenset((self.left, self.right))


@dataclass(frozen=True)
class Mem(Formula):
    element: str
    container: str

    def free_variables(self):
        return frozenset((self.element, self.container))


@dataclass(frozen=True)
class IsSet(Formula):
    """Sethood: the value is a set rather than an atom"""
    var: str

    def free_variables(self):
        return frozenset((self.var,))


@dataclass(frozen=True)
class Top(Formula):
    def free_variables(self):
        return frozenset()


@dataclass(frozen=True)
class Bottom(Formula):
    def free_variables(self):
        return frozenset()


@dataclass(frozen=True)
class Not(Formula):
    body: Formula

    def free_variables(self):
        return self.body.free_variables()


@dataclass(frozen=True)
class _Binary(Formula):
    left: Formula
    right: Formula

    def free_variables(self):
        return self.left.free_variables() | self.right.free_variables()


@dataclass(frozen=True)
class And(_Binary):
    pass


@dataclass(frozen=True)
class Or(_Binary):
    pass


@dataclass(frozen=True)
class Implies(_Binary):
    pass


@dataclass(frozen=True)
class _Bounded(Formula):
    var: str
    bound: str
    body: Formula

    def free_variables(self):
        return (self.body.free_variables() - {self.var}) | {self.bound}


@dataclass(frozen=True)
class ExistsIn(_Bounded):
    pass


@dataclass(frozen=True)
class ForallIn(_Bounded):
    pass


@dataclass(frozen=True)
class _Ranked(Formula):
    var: str
    rank: int
    body: Formula

    def free_variables(self):
        return self.body.free_variables() - {self.var}


@dataclass(frozen=True)
class ExistsRank(_Ranked):
    pass


@dataclass(frozen=True)
class ForallRank(_Ranked):
    pass


def is_delta0(formula: Formula) -> bool:
    """True when every quantifier is bounded by membership"""
    if isinstance(formula, _Ranked):
        return False
    if isinstance(formula, _Bounded):
        return is_delta0(formula.body)
    if isinstance(formula, _Binary):
        return is_delta0(formula.left) and is_delta0(formula.right)
    if isinstance(formula, Not):
        return is_delta0(formula.body)
    return True


def render_formula(formula: Formula) -> str:
    """ASCII rendering accepted back by parse_formula"""
    if isinstance(formula, Eq):
        return f"{formula.left} = {formula.right}"
    if isinstance(formula, Mem):
        return f"{formula.element} in {formula.container}"
    if isinstance(formula, IsSet):
        return f"isset {formula.var}"
    if isinstance(formula, Top):
        return "true"
    if isinstance(formula, Bottom):
        return "false"
    if isinstance(formula, Not):
        return f"not {render_formula(formula.body)}"
    if isinstance(formula, _Binary):
        word = {And: 'and', Or: 'or', Implies: '->'}[type(formula)]
        return f"({render_formula(formula.left)} {word} {render_formula(formula.right)})"
    if isinstance(formula, _Bounded):
        word = 'some' if isinstance(formula, ExistsIn) else 'all'
        return f"({word} {formula.var} in {formula.bound}. {render_formula(formula.body)})"
    if isinstance(formula, _Ranked):
        word = 'some' if isinstance(formula, ExistsRank) else 'all'
        return f"({word} {formula.var} rank {formula.rank}. {render_formula(formula.body)})"
    raise TypeError(f"not a formula: {formula!r}")


# Parsing

KEYWORDS = frozenset({'in', 'and', 'or', 'not', 'true', 'false', 'isset', 'some', 'all', 'rank'})

_TOKEN = re.compile(r'\s*(?:(->)|([=().])|([a-z][a-z0-9_]*)|([0-9]+))')


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    """Tokens as (kind, text, position); kinds: sym, word, nat, end"""
    tokens = []
    position = 0
    while True:
        while position < len(text) and text[position].isspace():
            position += 1
        if position >= len(text):
            break
        match = _TOKEN.match(text, position)
        if not match:
            raise FormulaSyntaxError(f"unexpected character {text[position]!r}", position)
        start = match.start(match.lastindex)
        if match.group(1) or match.group(2):
            tokens.append(('sym', match.group(match.lastindex), start))
        elif match.group(3):
            tokens.append(('word', match.group(3), start))
        else:
            tokens.append(('nat', match.group(4), start))
        position = match.end()
    tokens.append(('end', '', len(text)))
    return tokens


class _FormulaParser:
    def __init__(self, text: str, free: Optional[Iterable[str]]):
        self.tokens = _tokenize(text)
        self.index = 0
        self.free = None if free is None else frozenset(free)
        self.bound: List[str] = []

    @property
    def current(self) -> Tuple[str, str, int]:
        return self.tokens[self.index]

    def advance(self) -> Tuple[str, str, int]:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def accept(self, text: str) -> bool:
        kind, value, _ = self.current
        if kind in ('sym', 'word') and value == text:
            self.index += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            _, value, position = self.current
            raise FormulaSyntaxError(f"expected '{text}', found '{value or 'end of input'}'", position)

    def variable(self) -> str:
        kind, value, position = self.advance()
        if kind != 'word' or value in KEYWORDS:
            raise FormulaSyntaxError(f"expected a variable, found '{value or 'end of input'}'", position)
        if value not in self.bound and self.free is not None and value not in self.free:
            raise ScopeError(value)
        return value

    def binder(self) -> str:
        kind, value, position = self.advance()
        if kind != 'word' or value in KEYWORDS:
            raise FormulaSyntaxError(f"expected a variable, found '{value or 'end of input'}'", position)
        return value

    def parse(self) -> Formula:
        formula = self.formula()
        kind, value, position = self.current
        if kind != 'end':
            raise FormulaSyntaxError(f"unexpected '{value}'", position)
        return formula

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.accept('->'):
            return Implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.accept('or'):
            left = Or(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        while self.accept('and'):
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        if self.accept('not'):
            return Not(self.unary())
        kind, value, _ = self.current
        if kind == 'word' and value in ('some', 'all'):
            return self.quantifier()
        return self.primary()

    def quantifier(self) -> Formula:
        _, word, _ = self.advance()
        var = self.binder()
        if self.accept('in'):
            bound = self.variable()
            self.expect('.')
            body = self.scoped(var)
            return (ExistsIn if word == 'some' else ForallIn)(var, bound, body)
        if self.accept('rank'):
            kind, value, position = self.advance()
            if kind != 'nat':
                raise FormulaSyntaxError(f"expected a rank, found '{value or 'end of input'}'", position)
            self.expect('.')
            body = self.scoped(var)
            return (ExistsRank if word == 'some' else ForallRank)(var, int(value), body)
        _, value, position = self.current
        raise FormulaSyntaxError(f"expected 'in' or 'rank', found '{value or 'end of input'}'", position)

    def scoped(self, var: str) -> Formula:
        self.bound.append(var)
        try:
            return self.formula()
        finally:
            self.bound.pop()

    def primary(self) -> Formula:
        if self.accept('true'):
            return Top()
        if self.accept('false'):
            return Bottom()
        if self.accept('isset'):
            return IsSet(self.variable())
        if self.accept('('):
            inner = self.formula()
            self.expect(')')
            return inner
        left = self.variable()
        if self.accept('='):
            return Eq(left, self.variable())
        if self.accept('in'):
            return Mem(left, self.variable())
        _, value, position = self.current
        raise FormulaSyntaxError(f"expected '=' or 'in', found '{value or 'end of input'}'", position)


def parse_formula(text: str, free: Optional[Iterable[str]] = None) -> Formula:
    """
    Parse a formula

    Args:
        text: Formula text
        free: Variables allowed free; None accepts any unbound variable as free

    Raises:
        FormulaSyntaxError: with the offending position
        ScopeError: a variable is neither bound nor allowed free
    """
    formula = _FormulaParser(text, free).parse()
    logger.debug(f"parsed formula {render_formula(formula)}")
    return formula


# Evaluation

@lru_cache(maxsize=None)
def _iterated_powerset(k: int) -> Tuple[HfSet, ...]:
    level: List[HfSet] = []
    for _ in range(k):
        level = [
            make_set(level[i] for i in range(len(level)) if (mask >> i) & 1)
            for mask in range(1 << len(level))
        ]
    return tuple(sorted(level))


def enumerate_rank(k: int, max_rank: int = DEFAULT_MAX_RANK) -> List[HfSet]:
    """
    All pure sets in the k-th iterated powerset of the empty set, sorted

    Sizes are 0, 1, 2, 4, 16, 65536 for k = 0..5.

    Raises:
        RankTooLarge: k exceeds max_rank
    """
    if k > max_rank:
        raise RankTooLarge(k, max_rank)
    return list(_iterated_powerset(k))


def _lookup(env: Env, name: str) -> HfSet:
    try:
        return env[name]
    except KeyError:
        raise UnboundVariable(name) from None


def evaluate(formula: Formula, env: Env, max_rank: int = DEFAULT_MAX_RANK) -> bool:
    """
    Classical truth value of a formula under an assignment

    Bounded quantifiers range over the members of the bound's value; rank
    quantifiers over enumerate_rank(rank).

    Raises:
        UnboundVariable, AtomBoundInQuantifier, RankTooLarge
    """
    if isinstance(formula, Eq):
        return _lookup(env, formula.left) is _lookup(env, formula.right)
    if isinstance(formula, Mem):
        container = _lookup(env, formula.container)
        element = _lookup(env, formula.element)
        return container.is_set and element in container
    if isinstance(formula, IsSet):
        return _lookup(env, formula.var).is_set
    if isinstance(formula, Top):
        return True
    if isinstance(formula, Bottom):
        return False
    if isinstance(formula, Not):
        return not evaluate(formula.body, env, max_rank)
    if isinstance(formula, And):
        return evaluate(formula.left, env, max_rank) and evaluate(formula.right, env, max_rank)
    if isinstance(formula, Or):
        return evaluate(formula.left, env, max_rank) or evaluate(formula.right, env, max_rank)
    if isinstance(formula, Implies):
        return (not evaluate(formula.left, env, max_rank)) or evaluate(formula.right, env, max_rank)

    if isinstance(formula, _Bounded):
        bound = _lookup(env, formula.bound)
        if bound.is_atom:
            raise AtomBoundInQuantifier(formula.bound, bound)
        domain = bound.members
    elif isinstance(formula, _Ranked):
        domain = enumerate_rank(formula.rank, max_rank)
    else:
        raise TypeError(f"not a formula: {formula!r}")

    inner: Dict[str, HfSet] = dict(env)
    existential = isinstance(formula, (ExistsIn, ExistsRank))
    for value in domain:
        inner[formula.var] = value
        if evaluate(formula.body, inner, max_rank) == existential:
            return existential
    return not existential


def member_predicate(formula: Formula, variable: str, env: Optional[Env] = None,
                     max_rank: int = DEFAULT_MAX_RANK):
    """
    The test `value -> evaluate(formula, env[variable := value])`

    Free variables other than `variable` must be covered by env; that is
    checked here, before any member is tried.

    Raises:
        UnboundVariable: the first uncovered free variable, alphabetically
    """
    base = dict(env or {})
    missing = sorted(formula.free_variables() - {variable} - base.keys())
    if missing:
        raise UnboundVariable(missing[0])

    def holds(value: HfSet) -> bool:
        return evaluate(formula, {**base, variable: value}, max_rank)

    return holds
