"""
Set expressions

The small expression language behind the command line:

    expr := '{' [expr (',' expr)*] '}'          set literal
          | '@' NAME                             atom
          | NAT                                  natural
          | '"' formula '"'                      formula text (sep only)
          | OP '(' expr (',' expr)* ')'          operation
          | 'let' NAME '=' expr 'in' expr        binding
          | NAME                                 bound variable

Operations: pair kpair union prod exp mvexp pow tc succ vn omega sep image
choice ack unack. `sep(e, v, "formula")` separates e by the formula in v;
`image(e, op)` maps a unary operation over the members of e.
"""

import re
from dataclasses import dataclass
from typing import Dict, List, Mapping, Optional, Tuple, Union

from src.core.canon import HfSet, ack_decode, ack_encode, atom, make_set
from src.core.errors import ExprSyntaxError, ExprTypeError
from src.core.logic import DEFAULT_MAX_RANK, parse_formula
from src.core.setops import SetConstructor
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

Value = Union[HfSet, int]

ARITY = {
    'pair': 2, 'kpair': 2, 'union': 1, 'prod': 2, 'exp': 2, 'mvexp': 2,
    'pow': 1, 'tc': 1, 'succ': 1, 'vn': 1, 'omega': 1, 'sep': 3,
    'image': 2, 'choice': 1, 'ack': 1, 'unack': 1,
}

# expression operation -> SetConstructor operation
CONSTRUCTIONS = {
    'pair': 'pair', 'kpair': 'kpair', 'union': 'union', 'prod': 'product',
    'exp': 'func_space', 'mvexp': 'mv_func_space', 'pow': 'powerset', 'tc': 'tc',
    'succ': 'successor', 'vn': 'vn', 'omega': 'omega_upto', 'sep': 'separation',
    'image': 'replacement_image', 'choice': 'choice_function',
}

# unary operations usable as the function of image(...)
IMAGE_FUNCTIONS = ('pow', 'union', 'tc', 'succ', 'choice')

NATURAL_ARGUMENTS = ('vn', 'omega', 'unack')

KEYWORDS = frozenset({'let', 'in'})


class SetExpr:
    """Base class of expression nodes"""

    def __str__(self):
        return render_expr(self)


@dataclass(frozen=True)
class SetLiteral(SetExpr):
    items: Tuple[SetExpr, ...]


@dataclass(frozen=True)
class AtomLiteral(SetExpr):
    name: str


@dataclass(frozen=True)
class NatLiteral(SetExpr):
    value: int


@dataclass(frozen=True)
class FormulaLiteral(SetExpr):
    text: str


@dataclass(frozen=True)
class VarRef(SetExpr):
    name: str


@dataclass(frozen=True)
class Apply(SetExpr):
    op: str
    args: Tuple[SetExpr, ...]


@dataclass(frozen=True)
class Let(SetExpr):
    name: str
    value: SetExpr
    body: SetExpr


def render_expr(expr: SetExpr) -> str:
    """Text accepted back by parse_expr"""
    if isinstance(expr, SetLiteral):
        return '{' + ','.join(render_expr(e) for e in expr.items) + '}'
    if isinstance(expr, AtomLiteral):
        return '@' + expr.name
    if isinstance(expr, NatLiteral):
        return str(expr.value)
    if isinstance(expr, FormulaLiteral):
        return '"' + expr.text.replace('\\', '\\\\').replace('"', '\\"') + '"'
    if isinstance(expr, VarRef):
        return expr.name
    if isinstance(expr, Apply):
        return f"{expr.op}(" + ','.join(render_expr(e) for e in expr.args) + ')'
    if isinstance(expr, Let):
        return f"let {expr.name} = {render_expr(expr.value)} in {render_expr(expr.body)}"
    raise TypeError(f"not an expression: {expr!r}")


# Parsing

_TOKEN = re.compile(
    r'(?P<nat>[0-9]+)'
    r'|(?P<name>[A-Za-z_][A-Za-z0-9_]*)'
    r'|@(?P<atom>[A-Za-z0-9_][A-Za-z0-9_.\-]*)'
    r'|"(?P<text>(?:[^"\\]|\\.)*)"'
    r'|(?P<sym>[{}(),=])'
)


def _tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    position = 0
    while True:
        while position < len(text) and text[position].isspace():
            position += 1
        if position >= len(text):
            break
        match = _TOKEN.match(text, position)
        if not match:
            raise ExprSyntaxError(f"unexpected character {text[position]!r}", position)
        kind = match.lastgroup
        value = match.group(kind)
        if kind == 'text':
            value = re.sub(r'\\(.)', r'\1', value)
        tokens.append((kind, value, position))
        position = match.end()
    tokens.append(('end', '', len(text)))
    return tokens


class _ExprParser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.index = 0

    @property
    def current(self) -> Tuple[str, str, int]:
        return self.tokens[self.index]

    def fail(self, expected: str):
        _, value, position = self.current
        raise ExprSyntaxError(f"expected {expected}, found '{value or 'end of input'}'", position)

    def accept(self, kind: str, value: Optional[str] = None) -> bool:
        k, v, _ = self.current
        if k == kind and (value is None or v == value):
            self.index += 1
            return True
        return False

    def expect_symbol(self, symbol: str):
        if not self.accept('sym', symbol):
            self.fail(f"'{symbol}'")

    def parse(self) -> SetExpr:
        expr = self.expr()
        if self.current[0] != 'end':
            self.fail('end of input')
        return expr

    def expr(self) -> SetExpr:
        kind, value, position = self.current
        if kind == 'sym' and value == '{':
            self.index += 1
            items = []
            if not self.accept('sym', '}'):
                items.append(self.expr())
                while self.accept('sym', ','):
                    items.append(self.expr())
                self.expect_symbol('}')
            return SetLiteral(tuple(items))
        if kind == 'atom':
            self.index += 1
            return AtomLiteral(value)
        if kind == 'nat':
            self.index += 1
            return NatLiteral(int(value))
        if kind == 'text':
            self.index += 1
            return FormulaLiteral(value)
        if kind == 'name':
            self.index += 1
            if value == 'let':
                return self.binding()
            if value in KEYWORDS:
                raise ExprSyntaxError(f"unexpected keyword '{value}'", position)
            if self.accept('sym', '('):
                return self.application(value, position)
            return VarRef(value)
        self.fail('an expression')

    def binding(self) -> SetExpr:
        kind, name, position = self.current
        if kind != 'name' or name in KEYWORDS:
            self.fail('a variable name')
        self.index += 1
        self.expect_symbol('=')
        value = self.expr()
        if not self.accept('name', 'in'):
            self.fail("'in'")
        return Let(name, value, self.expr())

    def application(self, op: str, position: int) -> SetExpr:
        if op not in ARITY:
            raise ExprSyntaxError(f"unknown operation '{op}'", position)
        args = [self.expr()]
        while self.accept('sym', ','):
            args.append(self.expr())
        self.expect_symbol(')')
        if len(args) != ARITY[op]:
            raise ExprSyntaxError(f"{op} takes {ARITY[op]} arguments, got {len(args)}", position)
        return Apply(op, tuple(args))


def parse_expr(text: str) -> SetExpr:
    """
    Parse an expression

    Raises:
        ExprSyntaxError: with the offending position
    """
    return _ExprParser(text).parse()


# Evaluation

class ExprEvaluator:
    """Evaluates expressions through a SetConstructor"""

    def __init__(self, constructor: Optional[SetConstructor] = None,
                 max_rank: int = DEFAULT_MAX_RANK):
        self.constructor = constructor or SetConstructor('both')
        self.max_rank = max_rank
        self.logger = setup_logger(__name__)

    def evaluate(self, expr: SetExpr, env: Optional[Mapping[str, Value]] = None) -> Value:
        return self._eval(expr, dict(env or {}))

    def _eval(self, expr: SetExpr, env: Dict[str, Value]) -> Value:
        if isinstance(expr, SetLiteral):
            return make_set(self._set(e, env, 'set literal') for e in expr.items)
        if isinstance(expr, AtomLiteral):
            return atom(expr.name)
        if isinstance(expr, NatLiteral):
            return expr.value
        if isinstance(expr, FormulaLiteral):
            raise ExprTypeError("a formula is only allowed as the last argument of sep")
        if isinstance(expr, VarRef):
            if expr.name not in env:
                raise ExprTypeError(f"unbound name '{expr.name}'")
            return env[expr.name]
        if isinstance(expr, Let):
            inner = dict(env)
            inner[expr.name] = self._eval(expr.value, env)
            return self._eval(expr.body, inner)
        if isinstance(expr, Apply):
            return self._apply(expr, env)
        raise TypeError(f"not an expression: {expr!r}")

    def _set(self, expr: SetExpr, env: Dict[str, Value], where: str) -> HfSet:
        value = self._eval(expr, env)
        if not isinstance(value, HfSet):
            raise ExprTypeError(f"{where} expects a set, got the natural {value}")
        return value

    def _natural(self, expr: SetExpr, env: Dict[str, Value], where: str) -> int:
        value = self._eval(expr, env)
        if not isinstance(value, int):
            raise ExprTypeError(f"{where} expects a natural, got a set")
        return value

    def _apply(self, expr: Apply, env: Dict[str, Value]) -> Value:
        op, args = expr.op, expr.args
        self.logger.debug(f"evaluating {op}")

        if op == 'ack':
            return ack_encode(self._set(args[0], env, op))
        if op == 'unack':
            return ack_decode(self._natural(args[0], env, op))
        if op in NATURAL_ARGUMENTS:
            return self.constructor.construct(CONSTRUCTIONS[op], self._natural(args[0], env, op))
        if op == 'sep':
            return self._separation(args, env)
        if op == 'image':
            return self._image(args, env)

        values = [self._set(a, env, op) for a in args]
        return self.constructor.construct(CONSTRUCTIONS[op], *values)

    def _separation(self, args: Tuple[SetExpr, ...], env: Dict[str, Value]) -> HfSet:
        source = self._set(args[0], env, 'sep')
        variable, text = args[1], args[2]
        if not isinstance(variable, VarRef):
            raise ExprTypeError("sep expects a variable name as its second argument")
        if not isinstance(text, FormulaLiteral):
            raise ExprTypeError("sep expects a quoted formula as its third argument")
        sets = {name: v for name, v in env.items() if isinstance(v, HfSet)}
        formula = parse_formula(text.text, free=set(sets) | {variable.name})
        return self.constructor.construct(
            'separation', source, formula, variable.name, sets, max_rank=self.max_rank
        )

    def _image(self, args: Tuple[SetExpr, ...], env: Dict[str, Value]) -> HfSet:
        source = self._set(args[0], env, 'image')
        function = args[1]
        if not isinstance(function, VarRef) or function.name not in IMAGE_FUNCTIONS:
            raise ExprTypeError(f"image expects one of {', '.join(IMAGE_FUNCTIONS)} as its function")
        operation = CONSTRUCTIONS[function.name]
        return self.constructor.construct(
            'replacement_image', source, lambda a: self.constructor.construct(operation, a)
        )


def eval_expr(expr: Union[SetExpr, str], constructor: Optional[SetConstructor] = None,
              max_rank: int = DEFAULT_MAX_RANK) -> Value:
    """Evaluate an expression (or its text); the value is a canonical set or a natural"""
    if isinstance(expr, str):
        expr = parse_expr(expr)
    return ExprEvaluator(constructor, max_rank).evaluate(expr)
