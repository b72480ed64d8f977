"""
Canonical hereditarily finite sets

HfSet values are interned: structurally equal values are the same object, so
equality is identity. Every value is either an atom or a set whose members are
kept strictly ascending in the canonical order

    atoms < sets; atoms by name; sets by member count, then member-wise.

The order only makes output deterministic; it carries no set-theoretic meaning.
"""

import re
import threading
from functools import cmp_to_key, lru_cache
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple, Union

from src.core.bisim import ext_quotient
from src.core.errors import AtomNotEncodable, GraphFormatError, NegativeCode
from src.core.graph_core import RawGraph, WfApg, topological_order
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

ATOM_NAME = re.compile(r'[A-Za-z0-9_][A-Za-z0-9_.\-]*')


class HfSet:
    """Interned hereditarily finite set (or atom); build with `make_set` / `atom`"""

    __slots__ = ('atom_name', 'members', 'uid', 'rank', 'pure', '_member_set', '_ack')

    def __init__(self, atom_name: Optional[str], members: Tuple['HfSet', ...], uid: int):
        self.atom_name = atom_name
        self.members = members
        self.uid = uid
        if atom_name is not None:
            self.rank = 0
            self.pure = False
        else:
            self.rank = 1 + max(m.rank for m in members) if members else 0
            self.pure = all(m.pure for m in members)
        self._member_set: Optional[FrozenSet['HfSet']] = None
        self._ack: Optional[int] = None

    @property
    def is_atom(self) -> bool:
        return self.atom_name is not None

    @property
    def is_set(self) -> bool:
        return self.atom_name is None

    def member_set(self) -> FrozenSet['HfSet']:
        if self._member_set is None:
            self._member_set = frozenset(self.members)
        return self._member_set

    def __contains__(self, item) -> bool:
        return item in self.member_set()

    def __iter__(self) -> Iterator['HfSet']:
        return iter(self.members)

    def __len__(self) -> int:
        return len(self.members)

    def __lt__(self, other: 'HfSet') -> bool:
        return compare(self, other) < 0

    def __le__(self, other: 'HfSet') -> bool:
        return compare(self, other) <= 0

    def __gt__(self, other: 'HfSet') -> bool:
        return compare(self, other) > 0

    def __ge__(self, other: 'HfSet') -> bool:
        return compare(self, other) >= 0

    def __repr__(self) -> str:
        return render(self)

    def __reduce__(self):
        if self.is_atom:
            return (atom, (self.atom_name,))
        return (make_set, (self.members,))


class _InternStore:
    """Get-or-insert table; insertions are serialised by one lock"""

    def __init__(self):
        self._table: Dict[tuple, HfSet] = {}
        self._lock = threading.Lock()

    def get(self, key: tuple, atom_name: Optional[str], members: Tuple[HfSet, ...]) -> HfSet:
        found = self._table.get(key)
        if found is not None:
            return found
        with self._lock:
            found = self._table.get(key)
            if found is None:
                found = HfSet(atom_name, members, len(self._table))
                self._table[key] = found
            return found

    def __len__(self):
        return len(self._table)


_store = _InternStore()


def atom(name: str) -> HfSet:
    """The atom with the given name"""
    if not isinstance(name, str) or not ATOM_NAME.fullmatch(name):
        raise GraphFormatError(f"invalid atom name {name!r}")
    return _store.get(('@', name), name, ())


def make_set(members: Iterable[HfSet]) -> HfSet:
    """The set with exactly the given members (duplicates collapse)"""
    unique = sorted(set(members), key=_canonical_key)
    return _store.get(tuple(m.uid for m in unique), None, tuple(unique))


def intern_store_size() -> int:
    return len(_store)


def compare(x: HfSet, y: HfSet) -> int:
    """
    Canonical total order: -1, 0 or 1

    Members are stored ascending and interned, so two sets of the same size
    are ordered by their first pair of distinct members; the walk follows
    that pair downwards instead of recursing.
    """
    while x is not y:
        if x.is_atom or y.is_atom:
            if x.is_atom and y.is_atom:
                return -1 if x.atom_name < y.atom_name else 1
            return -1 if x.is_atom else 1
        if len(x.members) != len(y.members):
            return -1 if len(x.members) < len(y.members) else 1
        x, y = next((a, b) for a, b in zip(x.members, y.members) if a is not b)
    return 0


_canonical_key = cmp_to_key(compare)


# Rendering

def render(value: HfSet) -> str:
    """Braces rendering: `{c1,c2,...}` in canonical order, atoms as `@name`"""
    parts: List[str] = []
    stack: List[Union[HfSet, str]] = [value]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
        elif item.is_atom:
            parts.append('@' + item.atom_name)
        else:
            parts.append('{')
            stack.append('}')
            for index in range(len(item.members) - 1, -1, -1):
                stack.append(item.members[index])
                if index:
                    stack.append(',')
    return ''.join(parts)


def parse_braces(text: str) -> HfSet:
    """Inverse of `render`; whitespace between tokens is ignored"""
    source = text.strip()
    position = 0
    # members collected so far for each open brace
    open_sets: List[List[HfSet]] = []

    def skip():
        nonlocal position
        while position < len(source) and source[position].isspace():
            position += 1

    while True:
        skip()
        if position >= len(source):
            raise GraphFormatError(f"unexpected end of set text at {position}")
        char = source[position]
        if char == '@':
            match = ATOM_NAME.match(source, position + 1)
            if not match:
                raise GraphFormatError(f"bad atom name at {position}")
            position = match.end()
            value = atom(match.group(0))
        elif char == '{':
            position += 1
            skip()
            if position < len(source) and source[position] == '}':
                position += 1
                value = make_set(())
            else:
                open_sets.append([])
                continue
        else:
            raise GraphFormatError(f"expected '{{' at {position}")

        # attach the finished value, closing every brace that ends here
        while open_sets:
            open_sets[-1].append(value)
            skip()
            if position < len(source) and source[position] == ',':
                position += 1
                break
            if position < len(source) and source[position] == '}':
                position += 1
                value = make_set(open_sets.pop())
                continue
            raise GraphFormatError(f"expected ',' or '}}' at {position}")
        else:
            break

    skip()
    if position != len(source):
        raise GraphFormatError(f"trailing text at {position}")
    return value


# Structure

def hereditary_members(value: HfSet) -> FrozenSet[HfSet]:
    """Members, members of members, and so on (not including the value)"""
    seen = set()
    stack = list(value.members)
    while stack:
        current = stack.pop()
        if current in seen:
            continue
        seen.add(current)
        stack.extend(current.members)
    return frozenset(seen)


def is_transitive(value: HfSet) -> bool:
    return all(inner in value for member in value.members for inner in member.members)


def is_hereditarily_acyclic(value: HfSet) -> bool:
    """No set hereditarily contains itself below `value`"""
    return all(v not in hereditary_members(v) for v in hereditary_members(value) | {value})


# APG conversion

def canonicalize(apg: WfApg) -> HfSet:
    """
    Canonical set presented by an APG

    The APG is quotiented first, then values are interned bottom-up in a
    topological order of the quotient.
    """
    quotient, _ = ext_quotient(apg)
    graph = quotient.graph
    values: List[Optional[HfSet]] = [None] * graph.node_count
    for node in topological_order(graph):
        name = graph.labels.get(node)
        if name is not None:
            values[node] = atom(name)
        else:
            values[node] = make_set(values[c] for c in graph.children[node])
    return values[quotient.root]


def to_apg_with_values(value: HfSet) -> Tuple[WfApg, List[HfSet]]:
    """to_apg, also returning the set each node presents"""
    nodes = sorted(hereditary_members(value), key=_canonical_key)
    index = {member: i for i, member in enumerate(nodes)}
    root = len(nodes)
    index[value] = root
    nodes.append(value)

    children = [[index[m] for m in node.members] for node in nodes]
    labels = {i: node.atom_name for i, node in enumerate(nodes) if node.is_atom}
    return WfApg(RawGraph.from_adjacency(children, labels), root), nodes


def to_apg(value: HfSet) -> WfApg:
    """
    Minimal APG of a set: one node per hereditary member, in canonical order,
    then the root
    """
    return to_apg_with_values(value)[0]


# Ackermann coding

def ack_encode(value: HfSet) -> int:
    """ack(S) = sum of 2**ack(t) over members t; pure sets only"""
    if not value.pure:
        raise AtomNotEncodable(value)
    if value._ack is None:
        code = 0
        for member in value.members:
            code |= 1 << ack_encode(member)
        value._ack = code
    return value._ack


@lru_cache(maxsize=None)
def ack_decode(code: int) -> HfSet:
    """Inverse of ack_encode"""
    if code < 0:
        raise NegativeCode(code)
    members = []
    position = 0
    while code:
        if code & 1:
            members.append(ack_decode(position))
        code >>= 1
        position += 1
    return make_set(members)
