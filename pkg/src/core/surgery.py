"""
Graph surgeries

Every set-forming construction built the structural way: take the minimal
APGs of the arguments, glue new nodes onto them, and quotient. Each
construction comes in three forms

    <op>_graph(...)  the graph exactly as glued (accessible, not yet quotiented)
    <op>_apg(...)    its extensional quotient
    <op>(...)        the canonical set it presents

`X//*` below is the strict part of an APG X (every node with a path of
positive length to the root) and `|X|` its members.
"""

from functools import wraps
from itertools import product as cartesian
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from src.core.bisim import ext_quotient
from src.core.canon import HfSet, canonicalize, to_apg, to_apg_with_values
from src.core.errors import AtomArgument
from src.core.graph_core import (
    GraphBuilder,
    WfApg,
    members,
    restrict_accessible,
    strict_part,
)
from src.core.logic import DEFAULT_MAX_RANK, Env, Formula, member_predicate
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

SURGERIES: Dict[str, Callable[..., HfSet]] = {}


def _surgery(graph_fn: Callable[..., WfApg]):
    """Derive the `_apg` and canonical forms of a `<op>_graph` construction"""
    name = graph_fn.__name__[:-len('_graph')]

    @wraps(graph_fn)
    def as_apg(*args, **kwargs) -> WfApg:
        return ext_quotient(graph_fn(*args, **kwargs))[0]

    @wraps(graph_fn)
    def as_set(*args, **kwargs) -> HfSet:
        graph = graph_fn(*args, **kwargs)
        logger.debug(f"{name}: glued {graph.node_count} nodes")
        return canonicalize(graph)

    as_apg.__name__ = f"{name}_apg"
    as_set.__name__ = name
    SURGERIES[name] = as_set
    return as_apg, as_set


def _set_apg(operation: str, value: HfSet) -> Tuple[WfApg, List[HfSet]]:
    if value.is_atom:
        raise AtomArgument(operation, value)
    return to_apg_with_values(value)


def _finish(builder: GraphBuilder, root: int) -> WfApg:
    return restrict_accessible(builder.build_raw(), root)


def _embed_strict(builder: GraphBuilder, apg: WfApg) -> Dict[int, int]:
    return builder.embed(apg, strict_part(apg).members)


def _product_layout(builder: GraphBuilder, x: WfApg, y: WfApg) -> Dict[Tuple[int, int], int]:
    """
    Glue X//* + Y//* + |X| + |X|x|Y| + |X|x|Y| into the builder

    With a' = {a} and (a, b) = {a, b}, the node (a, b)' = {a', (a, b)} is the
    Kuratowski pair of a and b.

    Returns:
        Map from (member of X, member of Y) to its (a, b)' node
    """
    xs = _embed_strict(builder, x)
    ys = _embed_strict(builder, y)
    singletons = {}
    for a in members(x):
        singletons[a] = builder.add_node()
        builder.add_edge(xs[a], singletons[a])

    layout = {}
    for a in members(x):
        for b in members(y):
            plain = builder.add_node()
            builder.add_edge(xs[a], plain)
            builder.add_edge(ys[b], plain)
            primed = builder.add_node()
            builder.add_edge(singletons[a], primed)
            builder.add_edge(plain, primed)
            layout[(a, b)] = primed
    return layout


def empty_graph() -> WfApg:
    """One node and no edges"""
    builder = GraphBuilder()
    return _finish(builder, builder.add_node())


def pair_graph(x: HfSet, y: HfSet) -> WfApg:
    """X + Y + 1 with both old roots below the new one"""
    builder = GraphBuilder()
    roots = []
    for value in (x, y):
        apg = to_apg(value)
        roots.append(builder.embed(apg)[apg.root])
    root = builder.add_node()
    for old_root in roots:
        builder.add_edge(old_root, root)
    return _finish(builder, root)


def union_graph(x: HfSet) -> WfApg:
    """Nodes below members of members, plus a root over the members of members"""
    apg, _ = _set_apg('union', x)
    inner = sorted({c for m in members(apg) for c in apg.children(m)})
    keep = set()
    stack = list(inner)
    while stack:
        node = stack.pop()
        if node not in keep:
            keep.add(node)
            stack.extend(apg.children(node))

    builder = GraphBuilder()
    placed = builder.embed(apg, keep)
    root = builder.add_node()
    for node in inner:
        builder.add_edge(placed[node], root)
    return _finish(builder, root)


def kpair_graph(x: HfSet, y: HfSet) -> WfApg:
    """X + Y + {x} + {x, y} + 1"""
    builder = GraphBuilder()
    ax, ay = to_apg(x), to_apg(y)
    rx = builder.embed(ax)[ax.root]
    ry = builder.embed(ay)[ay.root]
    singleton = builder.add_node()
    builder.add_edge(rx, singleton)
    both = builder.add_node()
    builder.add_edge(rx, both)
    builder.add_edge(ry, both)
    root = builder.add_node()
    builder.add_edge(singleton, root)
    builder.add_edge(both, root)
    return _finish(builder, root)


def product_graph(x: HfSet, y: HfSet) -> WfApg:
    """X//* + Y//* + |X| + |X|x|Y| + |X|x|Y| + 1; quotient depth three"""
    ax, _ = _set_apg('product', x)
    ay, _ = _set_apg('product', y)
    builder = GraphBuilder()
    layout = _product_layout(builder, ax, ay)
    root = builder.add_node()
    for node in layout.values():
        builder.add_edge(node, root)
    return _finish(builder, root)


def _functions_graph(operation: str, x: HfSet, y: HfSet,
                     choices: Callable[[List[int]], Sequence[Tuple[int, ...]]]) -> WfApg:
    """
    (X (x) Y)//* + M + 1 where each m in M is one choice of targets per member of X

    `choices(members of Y)` lists, for one member of X, the admissible target
    groups; the elements of M are all combinations over the members of X.
    """
    ax, _ = _set_apg(operation, x)
    ay, _ = _set_apg(operation, y)
    builder = GraphBuilder()
    layout = _product_layout(builder, ax, ay)
    sources = members(ax)
    options = choices(members(ay))

    root = builder.add_node()
    for assignment in cartesian(options, repeat=len(sources)):
        relation = builder.add_node()
        for a, targets in zip(sources, assignment):
            for b in targets:
                builder.add_edge(layout[(a, b)], relation)
        builder.add_edge(relation, root)
    return _finish(builder, root)


def func_space_graph(x: HfSet, y: HfSet) -> WfApg:
    """One node per function |X| -> |Y|, over the pairs of its graph"""
    return _functions_graph('func_space', x, y, lambda ys: [(b,) for b in ys])


def mv_func_space_graph(x: HfSet, y: HfSet) -> WfApg:
    """One node per entire relation from |X| to |Y|"""
    def nonempty_subsets(ys):
        return [
            tuple(b for i, b in enumerate(ys) if (mask >> i) & 1)
            for mask in range(1, 1 << len(ys))
        ]
    return _functions_graph('mv_func_space', x, y, nonempty_subsets)


def powerset_graph(x: HfSet) -> WfApg:
    """X//* + P|X| + 1 with a below A whenever a is in A"""
    apg, _ = _set_apg('powerset', x)
    builder = GraphBuilder()
    placed = _embed_strict(builder, apg)
    elements = members(apg)
    root = builder.add_node()
    for mask in range(1 << len(elements)):
        subset = builder.add_node()
        for i, a in enumerate(elements):
            if (mask >> i) & 1:
                builder.add_edge(placed[a], subset)
        builder.add_edge(subset, root)
    return _finish(builder, root)


def tc_graph(x: HfSet) -> WfApg:
    """X//* + 1 with every node of X//* below the new root"""
    apg, _ = _set_apg('tc', x)
    builder = GraphBuilder()
    placed = _embed_strict(builder, apg)
    root = builder.add_node()
    for node in placed.values():
        builder.add_edge(node, root)
    return _finish(builder, root)


def vn_graph(n: int) -> WfApg:
    """N_n + 1 ordered by < , every numeral below the root"""
    if n < 0:
        raise ValueError(f"numerals are naturals, got {n}")
    children = [list(range(i)) for i in range(n + 1)]
    builder = GraphBuilder()
    for _ in children:
        builder.add_node()
    for parent, kids in enumerate(children):
        for child in kids:
            builder.add_edge(child, parent)
    return _finish(builder, n)


def omega_upto_graph(k: int) -> WfApg:
    """The first k naturals with a top point; the finite cut of omega"""
    return vn_graph(k)


def successor_graph(x: HfSet) -> WfApg:
    """X + 1 with the members of X and X itself below the new root"""
    apg, _ = _set_apg('successor', x)
    builder = GraphBuilder()
    placed = builder.embed(apg)
    root = builder.add_node()
    for node in members(apg) + [apg.root]:
        builder.add_edge(placed[node], root)
    return _finish(builder, root)


def subset_by_surgery_graph(x: HfSet, predicate: Callable[[HfSet], bool]) -> WfApg:
    """A root over the selected members, plus every node with a path to one"""
    apg, values = _set_apg('separation', x)
    selected = [a for a in members(apg) if predicate(values[a])]
    keep = set()
    stack = list(selected)
    while stack:
        node = stack.pop()
        if node not in keep:
            keep.add(node)
            stack.extend(apg.children(node))

    # a fresh root stands in for the old one, which keeps only the selected members
    builder = GraphBuilder()
    placed = builder.embed(apg, keep)
    root = builder.add_node()
    for a in selected:
        builder.add_edge(placed[a], root)
    return _finish(builder, root)


def separation_graph(x: HfSet, formula: Formula, variable: str, env: Optional[Env] = None,
                     max_rank: int = DEFAULT_MAX_RANK) -> WfApg:
    """Separation by a formula in one designated variable"""
    if x.is_atom:
        raise AtomArgument('separation', x)
    return subset_by_surgery_graph(x, member_predicate(formula, variable, env, max_rank))


def replacement_image_graph(x: HfSet, f: Callable[[HfSet], HfSet]) -> WfApg:
    """B + 1 where B places one copy of f(a) per member a"""
    apg, values = _set_apg('replacement', x)
    builder = GraphBuilder()
    tops = []
    for a in members(apg):
        image = to_apg(f(values[a]))
        tops.append(builder.embed(image)[image.root])
    root = builder.add_node()
    for node in tops:
        builder.add_edge(node, root)
    return _finish(builder, root)


def quotient_set_graph(x: HfSet, key: Callable[[HfSet], Hashable]) -> WfApg:
    """
    (X//*) + Y + 1 for the classes Y of |X| under `key`, with each member below
    its class and every class below the root
    """
    apg, values = _set_apg('quotient_set', x)
    builder = GraphBuilder()
    placed = _embed_strict(builder, apg)
    classes: Dict[Hashable, int] = {}
    for a in members(apg):
        k = key(values[a])
        if k not in classes:
            classes[k] = builder.add_node()
        builder.add_edge(placed[a], classes[k])
    root = builder.add_node()
    for node in classes.values():
        builder.add_edge(node, root)
    return _finish(builder, root)


empty_apg, empty = _surgery(empty_graph)
pair_apg, pair = _surgery(pair_graph)
union_apg, union = _surgery(union_graph)
kpair_apg, kpair = _surgery(kpair_graph)
product_apg, product = _surgery(product_graph)
func_space_apg, func_space = _surgery(func_space_graph)
mv_func_space_apg, mv_func_space = _surgery(mv_func_space_graph)
powerset_apg, powerset = _surgery(powerset_graph)
tc_apg, tc = _surgery(tc_graph)
vn_apg, vn = _surgery(vn_graph)
omega_upto_apg, omega_upto = _surgery(omega_upto_graph)
successor_apg, successor = _surgery(successor_graph)
subset_by_surgery_apg, subset_by_surgery = _surgery(subset_by_surgery_graph)
separation_apg, separation = _surgery(separation_graph)
replacement_image_apg, replacement_image = _surgery(replacement_image_graph)
quotient_set_apg, quotient_set = _surgery(quotient_set_graph)
