"""
Graph Core

Raw graphs, validation into well-founded accessible pointed graphs (APGs),
subgraph extraction and the finite well-foundedness diagnostics.

A node x is a child of y (written x < y) when the edge (x, y) is present.
Node identities are dense indices 0..n-1; children and parents are kept as
sorted adjacency tuples so either direction is walked without searching.
"""

import operator
import re
import sys
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

from src.core.errors import (
    CycleFound,
    EmptySubset,
    GraphFormatError,
    Inaccessible,
    LabeledNonLeaf,
    RootOutOfRange,
)
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

Edge = Tuple[int, int]

# Largest graph the exhaustive subset diagnostics will enumerate
MAX_EXHAUSTIVE_NODES = 12


class RawGraph:
    """
    Finite node set with a child relation and optional atom labels

    The edges form a set: passing the same (child, parent) pair twice gives
    one edge.
    """

    __slots__ = ('node_count', 'children', 'parents', 'labels', '_edges')

    def __init__(self, node_count: int, edges: Iterable[Edge] = (),
                 labels: Optional[Mapping[int, str]] = None):
        if not isinstance(node_count, int) or node_count < 0:
            raise GraphFormatError(f"node count must be a natural number, got {node_count!r}")

        child_sets: List[set] = [set() for _ in range(node_count)]
        for child, parent in edges:
            if not (0 <= child < node_count and 0 <= parent < node_count):
                raise GraphFormatError(f"edge ({child}, {parent}) leaves 0..{node_count - 1}")
            child_sets[parent].add(child)

        clean_labels: Dict[int, str] = {}
        for node, name in (labels or {}).items():
            if not 0 <= node < node_count:
                raise GraphFormatError(f"atom label on missing node {node}")
            if not isinstance(name, str) or not name:
                raise GraphFormatError(f"atom name for node {node} must be a non-empty string")
            clean_labels[node] = sys.intern(name)

        self._assign([sorted(s) for s in child_sets], clean_labels)

    @classmethod
    def from_adjacency(cls, children: Sequence[Sequence[int]],
                       labels: Optional[Mapping[int, str]] = None) -> 'RawGraph':
        """Build from per-node child lists already known to be in range and duplicate-free"""
        graph = cls.__new__(cls)
        graph._assign([sorted(c) for c in children], dict(labels or {}))
        return graph

    def _assign(self, children: List[List[int]], labels: Dict[int, str]):
        self.node_count = len(children)
        parents: List[List[int]] = [[] for _ in range(self.node_count)]
        for parent, kids in enumerate(children):
            for child in kids:
                parents[child].append(parent)
        self.children: Tuple[Tuple[int, ...], ...] = tuple(tuple(c) for c in children)
        self.parents: Tuple[Tuple[int, ...], ...] = tuple(tuple(p) for p in parents)
        self.labels: Dict[int, str] = labels
        self._edges = None

    @property
    def edges(self) -> Tuple[Edge, ...]:
        """All (child, parent) pairs, sorted"""
        if self._edges is None:
            self._edges = tuple(sorted(
                (child, parent)
                for parent, kids in enumerate(self.children)
                for child in kids
            ))
        return self._edges

    @property
    def edge_count(self) -> int:
        return sum(len(kids) for kids in self.children)

    def label(self, node: int) -> Optional[str]:
        return self.labels.get(node)

    def __eq__(self, other):
        if not isinstance(other, RawGraph):
            return NotImplemented
        return (self.children == other.children and self.labels == other.labels)

    def __hash__(self):
        return hash((self.children, tuple(sorted(self.labels.items()))))

    def __repr__(self):
        return f"RawGraph(nodes={self.node_count}, edges={self.edge_count}, atoms={len(self.labels)})"


class WfApg:
    """Validated well-founded accessible pointed graph

    Instances come from `validate` (or from constructions that preserve
    acyclicity and accessibility by construction).
    """

    __slots__ = ('graph', 'root')

    def __init__(self, graph: RawGraph, root: int):
        self.graph = graph
        self.root = root

    @property
    def node_count(self) -> int:
        return self.graph.node_count

    def children(self, node: int) -> Tuple[int, ...]:
        return self.graph.children[node]

    def parents(self, node: int) -> Tuple[int, ...]:
        return self.graph.parents[node]

    def label(self, node: int) -> Optional[str]:
        return self.graph.labels.get(node)

    def __eq__(self, other):
        if not isinstance(other, WfApg):
            return NotImplemented
        return self.root == other.root and self.graph == other.graph

    def __hash__(self):
        return hash((self.root, self.graph))

    def __repr__(self):
        return f"WfApg(root={self.root}, nodes={self.node_count}, edges={self.graph.edge_count})"


@dataclass(frozen=True)
class NodeSubset:
    """A finite set of nodes of one raw graph"""
    graph: RawGraph
    members: FrozenSet[int]

    def __post_init__(self):
        for node in self.members:
            if not 0 <= node < self.graph.node_count:
                raise GraphFormatError(f"subset member {node} is not a node")

    def __len__(self):
        return len(self.members)

    def __contains__(self, node):
        return node in self.members


# Structure queries

def find_cycle(raw: RawGraph) -> Optional[List[int]]:
    """
    Return a directed cycle as [n0, n1, ..., n0] with each node a child of the next,
    or None when the graph is acyclic.
    """
    WHITE, GREY, BLACK = 0, 1, 2
    color = [WHITE] * raw.node_count

    for start in range(raw.node_count):
        if color[start] != WHITE:
            continue
        color[start] = GREY
        stack = [(start, iter(raw.parents[start]))]
        on_path = [start]
        while stack:
            node, upward = stack[-1]
            descended = False
            for nxt in upward:
                if color[nxt] == WHITE:
                    color[nxt] = GREY
                    stack.append((nxt, iter(raw.parents[nxt])))
                    on_path.append(nxt)
                    descended = True
                    break
                if color[nxt] == GREY:
                    return on_path[on_path.index(nxt):] + [nxt]
            if not descended:
                color[node] = BLACK
                stack.pop()
                on_path.pop()
    return None


def is_acyclic(raw: RawGraph) -> bool:
    return find_cycle(raw) is None


def topological_order(raw: RawGraph) -> List[int]:
    """
    Order the nodes so every child precedes its parents

    Raises:
        CycleFound: the graph is not acyclic
    """
    pending = [len(kids) for kids in raw.children]
    queue = deque(node for node in range(raw.node_count) if pending[node] == 0)
    order: List[int] = []
    parents = raw.parents

    while queue:
        node = queue.popleft()
        order.append(node)
        for parent in parents[node]:
            pending[parent] -= 1
            if pending[parent] == 0:
                queue.append(parent)

    if len(order) != raw.node_count:
        raise CycleFound(find_cycle(raw) or [])
    return order


def reachable_below(raw: RawGraph, node: int) -> List[bool]:
    """Mark every node admitting a path (of length >= 0) to `node`"""
    seen = [False] * raw.node_count
    seen[node] = True
    stack = [node]
    children = raw.children
    while stack:
        current = stack.pop()
        for child in children[current]:
            if not seen[child]:
                seen[child] = True
                stack.append(child)
    return seen


def _as_index(root, node_count: int) -> int:
    try:
        root = operator.index(root)
    except TypeError:
        raise RootOutOfRange(root, node_count)
    if not 0 <= root < node_count:
        raise RootOutOfRange(root, node_count)
    return root


def validate(raw: RawGraph, root: int) -> WfApg:
    """
    Validate a raw graph as a well-founded accessible pointed graph

    Args:
        raw: Graph to check
        root: Designated root node

    Returns:
        The validated WfApg

    Raises:
        RootOutOfRange, LabeledNonLeaf, CycleFound, Inaccessible
    """
    root = _as_index(root, raw.node_count)

    for node in sorted(raw.labels):
        if raw.children[node]:
            raise LabeledNonLeaf(node)

    cycle = find_cycle(raw)
    if cycle is not None:
        raise CycleFound(cycle)

    seen = reachable_below(raw, root)
    missing = [node for node, ok in enumerate(seen) if not ok]
    if missing:
        raise Inaccessible(missing)

    logger.debug(f"validated APG with {raw.node_count} nodes rooted at {root}")
    return WfApg(raw, root)


def induced_subgraph(raw: RawGraph, keep: Sequence[int]) -> Tuple[RawGraph, Dict[int, int]]:
    """
    Full subgraph on `keep` (ascending), renumbered densely in that order

    Returns:
        The subgraph and the old-to-new index map
    """
    renumber = {old: new for new, old in enumerate(keep)}
    children = [
        [renumber[c] for c in raw.children[old] if c in renumber]
        for old in keep
    ]
    labels = {renumber[old]: name for old, name in raw.labels.items() if old in renumber}
    return RawGraph.from_adjacency(children, labels), renumber


def subgraph_at_with_map(apg: WfApg, node: int) -> Tuple[WfApg, List[int]]:
    """Like subgraph_at, also returning the original index of every new node"""
    seen = reachable_below(apg.graph, node)
    keep = [n for n, ok in enumerate(seen) if ok]
    sub, renumber = induced_subgraph(apg.graph, keep)
    return WfApg(sub, renumber[node]), keep


def subgraph_at(apg: WfApg, node: int) -> WfApg:
    """The APG X/x: every node with a path to `node`, rooted at `node`"""
    if not 0 <= node < apg.node_count:
        raise RootOutOfRange(node, apg.node_count)
    return subgraph_at_with_map(apg, node)[0]


def strict_part(apg: WfApg) -> NodeSubset:
    """Nodes admitting a path of positive length to the root"""
    seen = [False] * apg.node_count
    stack = list(apg.children(apg.root))
    for child in stack:
        seen[child] = True
    while stack:
        current = stack.pop()
        for child in apg.children(current):
            if not seen[child]:
                seen[child] = True
                stack.append(child)
    return NodeSubset(apg.graph, frozenset(n for n, ok in enumerate(seen) if ok))


def members(apg: WfApg) -> List[int]:
    """The children of the root, ascending"""
    return list(apg.children(apg.root))


def height(apg: WfApg) -> int:
    """Length of the longest path ending at the root"""
    depth = [0] * apg.node_count
    for node in topological_order(apg.graph):
        kids = apg.children(node)
        if kids:
            depth[node] = 1 + max(depth[c] for c in kids)
    return depth[apg.root]


def restrict_accessible(raw: RawGraph, root: int) -> WfApg:
    """Drop nodes with no path to the root, then validate what remains"""
    root = _as_index(root, raw.node_count)
    seen = reachable_below(raw, root)
    keep = [n for n, ok in enumerate(seen) if ok]
    dropped = raw.node_count - len(keep)
    if dropped:
        logger.info(f"dropping {dropped} inaccessible nodes")
    sub, renumber = induced_subgraph(raw, keep)
    return validate(sub, renumber[root])


# Well-foundedness diagnostics

def has_minimal_element(subset: NodeSubset) -> Optional[int]:
    """
    Find a node of the subset with no child inside the subset

    Returns:
        The smallest such node, or None when every member has a child in the subset

    Raises:
        EmptySubset
    """
    if not subset.members:
        raise EmptySubset()
    inside = subset.members
    for node in sorted(inside):
        if not any(child in inside for child in subset.graph.children[node]):
            return node
    return None


def is_inductive(subset: NodeSubset) -> bool:
    """True if every node whose children all lie in the subset lies in it too"""
    inside = subset.members
    for node in range(subset.graph.node_count):
        if node not in inside and all(c in inside for c in subset.graph.children[node]):
            return False
    return True


def _child_masks(raw: RawGraph) -> List[int]:
    if raw.node_count > MAX_EXHAUSTIVE_NODES:
        raise GraphFormatError(
            f"exhaustive subset checks are limited to {MAX_EXHAUSTIVE_NODES} nodes"
        )
    masks = []
    for kids in raw.children:
        mask = 0
        for child in kids:
            mask |= 1 << child
        masks.append(mask)
    return masks


def every_subset_has_minimal(raw: RawGraph) -> bool:
    """Brute force over all nonempty subsets of a graph with at most 12 nodes"""
    masks = _child_masks(raw)
    nodes = range(raw.node_count)
    for subset in range(1, 1 << raw.node_count):
        if not any((subset >> x) & 1 and not (masks[x] & subset) for x in nodes):
            return False
    return True


def is_well_founded_by_induction(raw: RawGraph) -> bool:
    """Every inductive subset is the whole node set (graphs with at most 12 nodes)"""
    masks = _child_masks(raw)
    full = (1 << raw.node_count) - 1
    nodes = range(raw.node_count)
    for subset in range(full):
        closed = all(
            (subset >> x) & 1 or (masks[x] & ~subset)
            for x in nodes
        )
        if closed:
            return False
    return True


# Building graphs

def disjoint_union(apgs: Sequence[WfApg]) -> Tuple[RawGraph, List[int]]:
    """Place the graphs side by side; returns the union and each graph's index offset"""
    children: List[List[int]] = []
    labels: Dict[int, str] = {}
    offsets: List[int] = []
    for apg in apgs:
        offset = len(children)
        offsets.append(offset)
        for kids in apg.graph.children:
            children.append([c + offset for c in kids])
        for node, name in apg.graph.labels.items():
            labels[node + offset] = name
    return RawGraph.from_adjacency(children, labels), offsets


class GraphBuilder:
    """Incremental graph construction used by the set-forming surgeries"""

    def __init__(self):
        self._children: List[set] = []
        self._labels: Dict[int, str] = {}

    @property
    def node_count(self) -> int:
        return len(self._children)

    def add_node(self, label: Optional[str] = None) -> int:
        self._children.append(set())
        node = len(self._children) - 1
        if label is not None:
            self._labels[node] = label
        return node

    def add_edge(self, child: int, parent: int):
        self._children[parent].add(child)

    def embed(self, apg: WfApg, nodes: Optional[Iterable[int]] = None) -> Dict[int, int]:
        """
        Copy the full subgraph on `nodes` (default: all nodes) of an APG

        Returns:
            Map from the APG's node indices to the new indices
        """
        keep = sorted(nodes) if nodes is not None else range(apg.node_count)
        placed = {old: self.add_node(apg.label(old)) for old in keep}
        for old, new in placed.items():
            for child in apg.children(old):
                if child in placed:
                    self._children[new].add(placed[child])
        return placed

    def build_raw(self) -> RawGraph:
        return RawGraph.from_adjacency(self._children, self._labels)

    def build(self, root: int) -> WfApg:
        return validate(self.build_raw(), root)


# Text format

_HEADER = re.compile(r'apg\s+([0-9]+)\s+([0-9]+)')
_EDGE = re.compile(r'edge\s+([0-9]+)\s+([0-9]+)')
_ATOM = re.compile(r'atom\s+([0-9]+)\s+(\S+)')


def parse_graph_text(text: str) -> Tuple[RawGraph, int]:
    """
    Parse the line-based graph format

        apg <node_count> <root>
        edge <child> <parent>      (zero or more)
        atom <node> <atom-name>    (zero or more, after the edges)

    '#' starts a comment. Returns the raw graph and its root; validation is
    left to the caller. A repeated edge line is a format error.
    """
    header = None
    edges: List[Edge] = []
    seen_edges = set()
    labels: Dict[int, str] = {}

    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split('#', 1)[0].strip()
        if not content:
            continue
        if header is None:
            match = _HEADER.fullmatch(content)
            if not match:
                raise GraphFormatError("expected 'apg <node_count> <root>'", number)
            header = (int(match.group(1)), int(match.group(2)))
            continue
        match = _EDGE.fullmatch(content)
        if match:
            if labels:
                raise GraphFormatError("edge lines must precede atom lines", number)
            edge = (int(match.group(1)), int(match.group(2)))
            if edge in seen_edges:
                raise GraphFormatError(f"edge {edge[0]} {edge[1]} listed twice", number)
            seen_edges.add(edge)
            edges.append(edge)
            continue
        match = _ATOM.fullmatch(content)
        if match:
            node = int(match.group(1))
            if node in labels:
                raise GraphFormatError(f"node {node} labeled twice", number)
            labels[node] = match.group(2)
            continue
        raise GraphFormatError(f"unrecognised line '{content}'", number)

    if header is None:
        raise GraphFormatError("missing 'apg' header")

    node_count, root = header
    try:
        raw = RawGraph(node_count, edges, labels)
    except GraphFormatError as e:
        raise GraphFormatError(str(e)) from e
    return raw, root


def format_graph_text(apg: WfApg) -> str:
    """Render an APG in the line-based graph format, edges and atoms sorted"""
    lines = [f"apg {apg.node_count} {apg.root}"]
    lines.extend(f"edge {child} {parent}" for child, parent in apg.graph.edges)
    lines.extend(f"atom {node} {apg.graph.labels[node]}" for node in sorted(apg.graph.labels))
    return "\n".join(lines) + "\n"
