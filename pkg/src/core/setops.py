"""
Material set operations

Direct recursions on canonical sets (the comprehension-style oracle for the
graph surgeries in `src.core.surgery`), Kuratowski pairs and material
relations, and SetConstructor, which runs a construction along either path or
both and insists that they agree.
"""

from dataclasses import dataclass
from functools import lru_cache
from itertools import product as cartesian
from typing import Any, Callable, Dict, Hashable, List, Mapping, Optional, Tuple, Union

from src.core import surgery
from src.core.canon import HfSet, canonicalize, hereditary_members, is_transitive, make_set
from src.core.errors import (
    AtomArgument,
    AtomMemberFound,
    EmptyMemberFound,
    PartialFunction,
    PathDisagreement,
)
from src.core.graph_core import WfApg
from src.core.logic import DEFAULT_MAX_RANK, Env, Formula, member_predicate
from src.utils.logger import setup_logger

logger = setup_logger(__name__)


def _require_set(operation: str, value: HfSet) -> HfSet:
    if value.is_atom:
        raise AtomArgument(operation, value)
    return value


def _subsets(items) -> List[Tuple[HfSet, ...]]:
    items = list(items)
    return [
        tuple(v for i, v in enumerate(items) if (mask >> i) & 1)
        for mask in range(1 << len(items))
    ]


# Basic sets

def empty() -> HfSet:
    return make_set(())


def singleton(x: HfSet) -> HfSet:
    return make_set((x,))


def pair(x: HfSet, y: HfSet) -> HfSet:
    return make_set((x, y))


def union(x: HfSet) -> HfSet:
    """Members of members; atom members contribute nothing"""
    _require_set('union', x)
    return make_set(inner for member in x for inner in member.members)


def successor(x: HfSet) -> HfSet:
    """x u {x}"""
    _require_set('successor', x)
    return make_set(x.members + (x,))


@lru_cache(maxsize=None)
def vn(n: int) -> HfSet:
    """The von Neumann numeral n"""
    if n < 0:
        raise ValueError(f"numerals are naturals, got {n}")
    value = empty()
    for _ in range(n):
        value = successor(value)
    return value


def omega_upto(k: int) -> HfSet:
    """{vn(0), ..., vn(k-1)}: omega cut at k"""
    return make_set(vn(i) for i in range(k))


def is_ordinal(x: HfSet) -> bool:
    """A transitive set of transitive sets; in the finite case exactly the numerals"""
    if x.is_atom or not x.pure:
        return False
    return is_transitive(x) and all(is_transitive(m) for m in x)


def tc(x: HfSet) -> HfSet:
    """Transitive closure: every hereditary member, atoms included"""
    _require_set('tc', x)
    return make_set(hereditary_members(x))


def powerset(x: HfSet) -> HfSet:
    _require_set('powerset', x)
    return make_set(make_set(s) for s in _subsets(x))


# Kuratowski pairs and relations

def kpair(x: HfSet, y: HfSet) -> HfSet:
    """{{x}, {x, y}}"""
    return make_set((singleton(x), pair(x, y)))


def unpair(z: HfSet) -> Optional[Tuple[HfSet, HfSet]]:
    """The components of a Kuratowski pair, or None when z is not one"""
    if z.is_atom or not all(m.is_set for m in z):
        return None
    if len(z) == 1:
        (only,) = z.members
        if len(only) == 1:
            return only.members[0], only.members[0]
        return None
    if len(z) == 2:
        # canonical order puts the one-member set first
        small, large = z.members
        if len(small) == 1 and len(large) == 2 and small.members[0] in large:
            first = small.members[0]
            second = large.members[1] if large.members[0] is first else large.members[0]
            return first, second
    return None


def is_kuratowski_pair(z: HfSet) -> bool:
    return unpair(z) is not None


def product(x: HfSet, y: HfSet) -> HfSet:
    _require_set('product', x)
    _require_set('product', y)
    return make_set(kpair(a, b) for a in x for b in y)


def relation_pairs(r: HfSet) -> List[Tuple[HfSet, HfSet]]:
    """The pairs of a material relation; members that are not pairs are skipped"""
    _require_set('relation_pairs', r)
    return [p for p in (unpair(m) for m in r) if p is not None]


def is_relation(r: HfSet) -> bool:
    return r.is_set and all(is_kuratowski_pair(m) for m in r)


def relation_domain(r: HfSet) -> HfSet:
    return make_set(a for a, _ in relation_pairs(r))


def is_entire(r: HfSet, x: HfSet) -> bool:
    """Every member of x is related to something"""
    return is_relation(r) and all(a in relation_domain(r) for a in x)


def is_material_function(f: HfSet, x: HfSet, y: Optional[HfSet] = None) -> bool:
    """
    True if f is a set of Kuratowski pairs relating each member of x to
    exactly one value (in y, when y is given) and nothing else
    """
    if not is_relation(f) or x.is_atom:
        return False
    images: Dict[HfSet, int] = {}
    for a, b in relation_pairs(f):
        if a not in x or (y is not None and b not in y):
            return False
        images[a] = images.get(a, 0) + 1
    return all(images.get(a) == 1 for a in x)


def apply_function(f: HfSet, a: HfSet) -> HfSet:
    """
    The value of the material function f at a (the least one if f relates a
    to several)

    Raises:
        PartialFunction: f says nothing about a
    """
    values = [b for first, b in relation_pairs(f) if first is a]
    if not values:
        raise PartialFunction(a)
    return min(values)


def func_space(x: HfSet, y: HfSet) -> HfSet:
    """All total functions from x to y, as sets of Kuratowski pairs"""
    _require_set('func_space', x)
    _require_set('func_space', y)
    sources = x.members
    return make_set(
        make_set(kpair(a, b) for a, b in zip(sources, targets))
        for targets in cartesian(y.members, repeat=len(sources))
    )


def mv_func_space(x: HfSet, y: HfSet) -> HfSet:
    """All entire relations from x to y"""
    _require_set('mv_func_space', x)
    _require_set('mv_func_space', y)
    sources = x.members
    groups = [s for s in _subsets(y) if s]
    return make_set(
        make_set(kpair(a, b) for a, group in zip(sources, choice) for b in group)
        for choice in cartesian(groups, repeat=len(sources))
    )


# Schemas

@dataclass(frozen=True)
class MaterialFn:
    """A finite function on canonical sets with an explicit domain"""
    domain: HfSet
    table: Mapping[HfSet, HfSet]

    def __post_init__(self):
        _require_set('MaterialFn', self.domain)
        for a in self.domain:
            if a not in self.table:
                raise PartialFunction(a)

    @classmethod
    def from_graph(cls, f: HfSet) -> 'MaterialFn':
        """Read a material function (set of Kuratowski pairs)"""
        table = {}
        for a, b in relation_pairs(f):
            table.setdefault(a, b)
        return cls(make_set(table), table)

    def __call__(self, a: HfSet) -> HfSet:
        if a not in self.domain:
            raise PartialFunction(a)
        return self.table[a]

    def as_graph(self) -> HfSet:
        return make_set(kpair(a, self.table[a]) for a in self.domain)


Mapper = Union[MaterialFn, Callable[[HfSet], HfSet]]


def subset(x: HfSet, predicate: Callable[[HfSet], bool]) -> HfSet:
    """The members of x passing the predicate"""
    _require_set('separation', x)
    return make_set(a for a in x if predicate(a))


def separation(x: HfSet, formula: Formula, variable: str, env: Optional[Env] = None,
               max_rank: int = DEFAULT_MAX_RANK) -> HfSet:
    """
    {a in x : formula holds with variable := a}

    Raises:
        AtomArgument: x is an atom
        UnboundVariable: a free variable other than `variable` is missing from env
    """
    _require_set('separation', x)
    return subset(x, member_predicate(formula, variable, env, max_rank))


def replacement_image(x: HfSet, f: Mapper) -> HfSet:
    """{f(a) : a in x}; a MaterialFn raises PartialFunction outside its domain"""
    _require_set('replacement', x)
    return make_set(f(a) for a in x)


def choice_function(x: HfSet) -> HfSet:
    """
    Material choice function picking the least member of each member of x

    Raises:
        AtomMemberFound, EmptyMemberFound
    """
    _require_set('choice_function', x)
    picks = []
    for z in x:
        if z.is_atom:
            raise AtomMemberFound(z)
        if not z.members:
            raise EmptyMemberFound(z)
        picks.append(kpair(z, z.members[0]))
    return make_set(picks)


def quotient_set(x: HfSet, key: Callable[[HfSet], Hashable]) -> HfSet:
    """The classes of x's members under equal `key`"""
    _require_set('quotient_set', x)
    classes: Dict[Hashable, List[HfSet]] = {}
    for a in x:
        classes.setdefault(key(a), []).append(a)
    return make_set(make_set(group) for group in classes.values())


def mostowski(apg: WfApg) -> HfSet:
    """The transitive set isomorphic to a well-founded APG's extensional quotient"""
    return canonicalize(apg)


# Two-path dispatch

DIRECT: Dict[str, Callable[..., HfSet]] = {
    'empty': empty,
    'pair': pair,
    'union': union,
    'kpair': kpair,
    'product': product,
    'func_space': func_space,
    'mv_func_space': mv_func_space,
    'powerset': powerset,
    'tc': tc,
    'vn': vn,
    'omega_upto': omega_upto,
    'successor': successor,
    'subset': subset,
    'separation': separation,
    'replacement_image': replacement_image,
    'quotient_set': quotient_set,
    'choice_function': choice_function,
    'mostowski': mostowski,
}

SURGERY: Dict[str, Callable[..., HfSet]] = {
    name: surgery.SURGERIES[name] for name in DIRECT if name in surgery.SURGERIES
}
SURGERY['subset'] = surgery.subset_by_surgery


class SetConstructor:
    """Runs set constructions by graph surgery, directly, or both"""

    METHODS = ('both', 'surgery', 'direct')

    def __init__(self, method: str = 'both'):
        if method not in self.METHODS:
            raise ValueError(f"method must be one of {self.METHODS}, got '{method}'")
        self.method = method
        self.logger = setup_logger(__name__)

    @property
    def available_operations(self) -> Dict[str, Tuple[str, ...]]:
        """Operation name -> the paths that implement it"""
        return {
            name: ('surgery', 'direct') if name in SURGERY else ('direct',)
            for name in DIRECT
        }

    def construct(self, operation: str, *args: Any, **kwargs: Any) -> HfSet:
        """
        Build a set

        Operations with a single implementation run it whatever the method.

        Raises:
            ValueError: unknown operation
            PathDisagreement: method 'both' and the two results differ
        """
        if operation not in DIRECT:
            raise ValueError(f"unknown operation '{operation}'")

        if operation not in SURGERY or self.method == 'direct':
            return self._construct_directly(operation, *args, **kwargs)
        if self.method == 'surgery':
            return self._construct_with_surgery(operation, *args, **kwargs)

        by_surgery = self._construct_with_surgery(operation, *args, **kwargs)
        direct = self._construct_directly(operation, *args, **kwargs)
        if by_surgery is not direct:
            self.logger.error(f"{operation}: paths disagree")
            raise PathDisagreement(operation, by_surgery, direct)
        return direct

    def _construct_with_surgery(self, operation: str, *args, **kwargs) -> HfSet:
        self.logger.debug(f"{operation} by surgery")
        return SURGERY[operation](*args, **kwargs)

    def _construct_directly(self, operation: str, *args, **kwargs) -> HfSet:
        self.logger.debug(f"{operation} directly")
        return DIRECT[operation](*args, **kwargs)
