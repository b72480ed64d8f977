"""
Bisimulation

Maximal bisimulations (a naive greatest-fixpoint oracle and the production
refinement pass), simulation and bisimulation checking, extensional quotients,
isomorphism of extensional APGs and tree unfolding.

Partitions are normalised so that every block is named by the smallest node
index it contains; two runs over the same graph therefore print identically.
"""

from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Hashable, List, Optional, Sequence, Tuple

from src.core.errors import (
    CycleFound,
    DepthLimitExceeded,
    GraphFormatError,
    NotExtensional,
    UnfoldTooLarge,
)
from src.core.graph_core import (
    RawGraph,
    WfApg,
    disjoint_union,
    height,
    subgraph_at_with_map,
    topological_order,
)
from src.utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class Partition:
    """Equivalence classes over the nodes of one graph"""
    graph: RawGraph
    block_of: Tuple[int, ...]

    @classmethod
    def from_keys(cls, graph: RawGraph, keys: Sequence[Hashable]) -> 'Partition':
        """Group nodes with equal keys; each block is named by its smallest node"""
        first: Dict[Hashable, int] = {}
        block_of = tuple(first.setdefault(key, node) for node, key in enumerate(keys))
        return cls(graph, block_of)

    def blocks(self) -> List[List[int]]:
        grouped: Dict[int, List[int]] = {}
        for node, block in enumerate(self.block_of):
            grouped.setdefault(block, []).append(node)
        return [grouped[b] for b in sorted(grouped)]

    @property
    def block_count(self) -> int:
        return len(set(self.block_of))

    def same_block(self, a: int, b: int) -> bool:
        return self.block_of[a] == self.block_of[b]

    def is_identity(self) -> bool:
        return all(block == node for node, block in enumerate(self.block_of))

    def respects_labels(self) -> bool:
        labels = self.graph.labels
        return all(labels.get(node) == labels.get(block)
                   for node, block in enumerate(self.block_of))

    def render(self) -> str:
        """One `block <id>: <nodes>` line per block"""
        return "\n".join(
            f"block {nodes[0]}: {' '.join(str(n) for n in nodes)}"
            for nodes in self.blocks()
        )


@dataclass(frozen=True)
class SimMap:
    """A total node map between two APGs, candidate simulation"""
    source: WfApg
    target: WfApg
    mapping: Tuple[int, ...]

    def __post_init__(self):
        if len(self.mapping) != self.source.node_count:
            raise GraphFormatError(
                f"map covers {len(self.mapping)} of {self.source.node_count} source nodes"
            )
        if self.mapping and not (0 <= min(self.mapping) and max(self.mapping) < self.target.node_count):
            raise GraphFormatError("map sends a node outside the target")

    def __call__(self, node: int) -> int:
        return self.mapping[node]

    def is_injective(self) -> bool:
        return len(set(self.mapping)) == len(self.mapping)

    def is_surjective(self) -> bool:
        return len(set(self.mapping)) == self.target.node_count

    def is_bijective(self) -> bool:
        return self.is_injective() and self.is_surjective()


@dataclass(frozen=True)
class Relation:
    """A finite set of node pairs between two APGs"""
    left: WfApg
    right: WfApg
    pairs: FrozenSet[Tuple[int, int]]

    def __post_init__(self):
        for a, b in self.pairs:
            if not (0 <= a < self.left.node_count and 0 <= b < self.right.node_count):
                raise GraphFormatError(f"pair ({a}, {b}) is outside the relation's graphs")


@dataclass(frozen=True)
class SimulationCheck:
    ok: bool
    clause: Optional[str] = None
    counterexample: Optional[Tuple[int, int]] = None

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class BisimulationCheck:
    ok: bool
    bi_entire: bool
    clause: Optional[str] = None
    counterexample: Optional[Tuple[int, int]] = None

    def __bool__(self):
        return self.ok


# Checking

def is_simulation(f: SimMap) -> SimulationCheck:
    """
    Check the forward, lifting and label clauses of a simulation

    Counterexamples: forward (child, parent); lifting (source node, unlifted
    target child); label (source node, image).
    """
    source, target, mapping = f.source, f.target, f.mapping
    nodes = range(source.node_count)

    for node in nodes:
        target_kids = target.children(mapping[node])
        for child in source.children(node):
            if mapping[child] not in target_kids:
                return SimulationCheck(False, 'forward', (child, node))

    for node in nodes:
        images_of_kids = {mapping[child] for child in source.children(node)}
        for target_child in target.children(mapping[node]):
            if target_child not in images_of_kids:
                return SimulationCheck(False, 'lifting', (node, target_child))

    for node in nodes:
        image = mapping[node]
        source_label, target_label = source.label(node), target.label(image)
        if (source_label is not None or target_label is not None) and source_label != target_label:
            return SimulationCheck(False, 'label', (node, image))
    return SimulationCheck(True)


def is_bisimulation(r: Relation) -> BisimulationCheck:
    """
    Check that both projections out of the relation graph are simulations

    The relation graph has the pairs as nodes, with (a', b') a child of (a, b)
    when a' < a and b' < b. The forward clause of each projection holds by
    construction, so only lifting and labels are checked. Bi-entirety is
    reported separately.
    """
    left, right, pairs = r.left, r.right, r.pairs
    related: Dict[int, set] = {}
    for a, b in pairs:
        related.setdefault(a, set()).add(b)

    counterexample = None
    clause = None
    for a, b in sorted(pairs):
        if left.label(a) != right.label(b):
            clause, counterexample = 'label', (a, b)
            break
        right_kids = right.children(b)
        left_kids = left.children(a)
        lost = next(
            (ac for ac in left_kids if not related.get(ac, set()).intersection(right_kids)),
            None,
        )
        if lost is not None:
            clause, counterexample = 'left lifting', (a, b)
            break
        lost = next(
            (bc for bc in right_kids if not any(bc in related.get(ac, ()) for ac in left_kids)),
            None,
        )
        if lost is not None:
            clause, counterexample = 'right lifting', (a, b)
            break

    bi_entire = (
        len(related) == left.node_count
        and len({b for _, b in pairs}) == right.node_count
    )
    return BisimulationCheck(counterexample is None, bi_entire, clause, counterexample)


def relation_from_partition(apg: WfApg, partition: Partition) -> Relation:
    """The equivalence relation of a partition, as a relation on the APG itself"""
    pairs = frozenset(
        (a, b)
        for block in partition.blocks()
        for a in block
        for b in block
    )
    return Relation(apg, apg, pairs)


def partition_from_relation(graph: RawGraph, pairs) -> Partition:
    """Blocks of the equivalence relation generated by the pairs (union-find)"""
    parent = list(range(graph.node_count))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in pairs:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    return Partition.from_keys(graph, [find(x) for x in range(graph.node_count)])


# Maximal bisimulation

def _label_keys(graph: RawGraph) -> List[Hashable]:
    labels = graph.labels
    return [('@', labels[x]) if x in labels else ('-',) for x in range(graph.node_count)]


def max_bisim_naive(graph: RawGraph) -> Partition:
    """
    Greatest fixpoint by repeated splitting

    Starts from the label partition and re-splits every block by the set of
    blocks its members' children fall into, until no block splits.
    """
    partition = Partition.from_keys(graph, _label_keys(graph))
    children = graph.children
    rounds = 0
    while True:
        rounds += 1
        block = partition.block_of
        signatures = [
            (block[x], frozenset(block[c] for c in children[x]))
            for x in range(graph.node_count)
        ]
        refined = Partition.from_keys(graph, signatures)
        if refined.block_count == partition.block_count:
            logger.debug(f"naive bisimulation stable after {rounds} rounds")
            return refined
        partition = refined


def max_bisim_refine(graph: RawGraph) -> Partition:
    """
    Maximal bisimulation by partition refinement

    On acyclic graphs one bottom-up pass in topological order suffices: once
    every child's block is final, a node's block is fixed by its label and the
    set of its children's blocks. Cyclic graphs fall back to splitter-driven
    refinement.
    """
    try:
        order = topological_order(graph)
    except CycleFound:
        return _refine_with_splitters(graph)

    labels = graph.labels
    children = graph.children
    block = [0] * graph.node_count
    ids: Dict[Hashable, int] = {}
    for x in order:
        key = (labels.get(x), frozenset([block[c] for c in children[x]]))
        block[x] = ids.setdefault(key, len(ids))
    return Partition.from_keys(graph, block)


def _refine_with_splitters(graph: RawGraph) -> Partition:
    """
    Splitter worklist refinement for graphs with cycles

    Every block created by a split is queued as a splitter; a block B is split
    by splitter S into the nodes with a child in S and the rest.
    """
    initial = Partition.from_keys(graph, _label_keys(graph))
    block_of = list(initial.block_of)
    blocks: Dict[int, set] = {}
    for node, b in enumerate(block_of):
        blocks.setdefault(b, set()).add(node)

    next_id = graph.node_count
    work = deque(sorted(blocks))
    queued = set(work)
    parents = graph.parents

    while work:
        splitter = work.popleft()
        queued.discard(splitter)
        touched: Dict[int, set] = {}
        for x in blocks[splitter]:
            for p in parents[x]:
                touched.setdefault(block_of[p], set()).add(p)

        for b, hit in touched.items():
            if len(hit) == len(blocks[b]):
                continue
            blocks[b] -= hit
            blocks[next_id] = hit
            for node in hit:
                block_of[node] = next_id
            for queued_block in (b, next_id):
                if queued_block not in queued:
                    queued.add(queued_block)
                    work.append(queued_block)
            next_id += 1

    return Partition.from_keys(graph, block_of)


# Quotients

def quotient_by(apg: WfApg, partition: Partition) -> Tuple[WfApg, SimMap]:
    """
    Quotient of an APG by a bisimulation equivalence

    Blocks become nodes in the order of their names; each block takes the
    children of its named node, which is sound because bisimilar nodes have
    the same set of child blocks.
    """
    block_of = partition.block_of
    names = sorted(set(block_of))
    index = {name: i for i, name in enumerate(names)}
    quotient_of = [index[b] for b in block_of]

    children = [
        {quotient_of[c] for c in apg.graph.children[name]}
        for name in names
    ]
    labels = {index[name]: apg.graph.labels[name] for name in names if name in apg.graph.labels}
    quotient = WfApg(RawGraph.from_adjacency(children, labels), quotient_of[apg.root])
    return quotient, SimMap(apg, quotient, tuple(quotient_of))


def ext_quotient(apg: WfApg, algorithm: str = 'refine') -> Tuple[WfApg, SimMap]:
    """
    Extensional quotient by the maximal bisimulation

    Args:
        apg: Valid APG, atoms allowed
        algorithm: 'refine' (production) or 'naive' (oracle)

    Returns:
        The extensional well-founded APG and the surjective quotient simulation
    """
    if algorithm == 'naive':
        partition = max_bisim_naive(apg.graph)
    else:
        partition = max_bisim_refine(apg.graph)
    quotient, simulation = quotient_by(apg, partition)
    logger.debug(f"quotient {apg.node_count} -> {quotient.node_count} nodes")
    return quotient, simulation


def is_extensional(apg: WfApg) -> bool:
    """True iff the maximal bisimulation is the identity"""
    identity = max_bisim_refine(apg.graph).is_identity()
    keys = {(apg.label(x), apg.children(x)) for x in range(apg.node_count)}
    assert identity == (len(keys) == apg.node_count), "extensionality criteria disagree"
    return identity


def iso(x: WfApg, y: WfApg) -> Optional[SimMap]:
    """
    The isomorphism between two extensional APGs, if one exists

    Computed from one refinement run on the disjoint union: the graphs are
    isomorphic iff the roots share a block, and then the blocks pair the nodes.

    Raises:
        NotExtensional: naming the offending side
    """
    if not is_extensional(x):
        raise NotExtensional('left')
    if not is_extensional(y):
        raise NotExtensional('right')
    if x.node_count != y.node_count:
        return None

    union, (left_offset, right_offset) = disjoint_union([x, y])
    block_of = max_bisim_refine(union).block_of
    if block_of[x.root + left_offset] != block_of[y.root + right_offset]:
        return None

    partner = {block_of[right_offset + j]: j for j in range(y.node_count)}
    mapping = []
    for i in range(x.node_count):
        j = partner.get(block_of[left_offset + i])
        if j is None:
            return None
        mapping.append(j)
    return SimMap(x, y, tuple(mapping))


def inclusion_map(apg: WfApg, node: int) -> SimMap:
    """The inclusion of the initial segment X/x into X"""
    sub, original = subgraph_at_with_map(apg, node)
    return SimMap(sub, apg, tuple(original))


def unfold_to_tree(apg: WfApg, depth_limit: Optional[int] = None,
                   max_nodes: Optional[int] = None) -> WfApg:
    """
    Unfold an APG into the tree of its paths to the root

    Tree nodes are numbered breadth-first from the root (node 0). Size is
    exponential in the worst case; `max_nodes` bounds it.

    Raises:
        DepthLimitExceeded: depth_limit is below the longest path
        UnfoldTooLarge: the tree would exceed max_nodes
    """
    longest = height(apg)
    if depth_limit is not None and depth_limit < longest:
        raise DepthLimitExceeded(depth_limit, longest)

    origin = [apg.root]
    children: List[List[int]] = [[]]
    labels: Dict[int, str] = {}
    if apg.label(apg.root) is not None:
        labels[0] = apg.label(apg.root)

    queue = deque([0])
    while queue:
        tree_node = queue.popleft()
        for child in apg.children(origin[tree_node]):
            new = len(origin)
            if max_nodes is not None and new >= max_nodes:
                raise UnfoldTooLarge(max_nodes)
            origin.append(child)
            children.append([])
            children[tree_node].append(new)
            if apg.label(child) is not None:
                labels[new] = apg.label(child)
            queue.append(new)

    logger.debug(f"unfolded {apg.node_count} nodes into a {len(origin)}-node tree")
    return WfApg(RawGraph.from_adjacency(children, labels), 0)
