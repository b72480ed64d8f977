"""
Axiom harness

Runs the set-theoretic axioms (in their finite forms) and the cross-module
properties as named suites over exhaustive small universes plus seeded random
samples. Each suite yields one report line; lines are ordered by suite name so
the report is byte-identical for equal (seed, rank, samples), however the
suites were scheduled.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Any, Callable, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.core import setops, surgery
from src.core.bisim import (
    ext_quotient,
    inclusion_map,
    is_bisimulation,
    is_extensional,
    is_simulation,
    iso,
    max_bisim_naive,
    max_bisim_refine,
    relation_from_partition,
    unfold_to_tree,
)
from src.core.canon import (
    HfSet,
    ack_decode,
    ack_encode,
    canonicalize,
    is_hereditarily_acyclic,
    is_transitive,
    make_set,
    parse_braces,
    render,
    to_apg,
)
from src.core.errors import ApgSetError
from src.core.fincat import FinObj, check_all_laws
from src.core.generators import make_rng, random_apg, random_dag, random_formula, random_hfset
from src.core.graph_core import (
    RawGraph,
    WfApg,
    every_subset_has_minimal,
    find_cycle,
    has_minimal_element,
    is_well_founded_by_induction,
    members,
    strict_part,
    subgraph_at,
)
from src.core.logic import DEFAULT_MAX_RANK, enumerate_rank, evaluate, is_delta0, parse_formula
from src.utils.logger import setup_logger

logger = setup_logger(__name__)

EXHAUSTIVE_RANK = 3
MAX_WF_NODES = 10

# every code below this is decoded and re-encoded
ACK_CODE_BOUND = 1 << 16


@dataclass
class SuiteResult:
    suite: str
    passed: bool
    checked: int = 0
    detail: str = ''

    @property
    def status(self) -> str:
        return 'PASS' if self.passed else 'FAIL'

    def render(self) -> str:
        line = f"{self.status} {self.suite} ({self.checked} checks)"
        if self.detail:
            line += f" {self.detail}"
        return line


@dataclass
class HarnessReport:
    seed: int
    rank: int
    samples: int
    results: List[SuiteResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def render(self) -> str:
        return "\n".join(r.render() for r in self.results) + "\n"

    def to_dataframe(self) -> pd.DataFrame:
        return pd.DataFrame(
            [
                {'suite': r.suite, 'status': r.status, 'checked': r.checked, 'detail': r.detail}
                for r in self.results
            ],
            columns=['suite', 'status', 'checked', 'detail'],
        )


class _Check:
    """Counts cases for one suite and keeps the first counterexample"""

    def __init__(self, suite: str):
        self.result = SuiteResult(suite, True)

    def case(self, ok: bool, witness: Callable[[], str]):
        self.result.checked += 1
        if not ok and self.result.passed:
            self.result.passed = False
            self.result.detail = witness()


@dataclass
class HarnessContext:
    """Inputs and hooks shared by the suites"""
    rank: int
    samples: int
    rng: np.random.Generator
    max_rank: int = DEFAULT_MAX_RANK
    dag_count: int = 1000
    dag_max_nodes: int = 50
    surgery_overrides: Mapping[str, Callable[..., Any]] = field(default_factory=dict)

    def surgery(self, name: str) -> Callable[..., Any]:
        """A surgery-path function, replaced when an override names it"""
        return self.surgery_overrides.get(name) or getattr(surgery, name)

    @property
    def universe(self) -> List[HfSet]:
        return enumerate_rank(min(self.rank, self.max_rank), self.max_rank)

    @property
    def small(self) -> List[HfSet]:
        return enumerate_rank(min(self.rank, EXHAUSTIVE_RANK), self.max_rank)

    def random_sets(self, count: Optional[int] = None, max_rank: Optional[int] = None,
                    max_width: int = 3) -> List[HfSet]:
        rank = self.rank if max_rank is None else max_rank
        return [random_hfset(self.rng, rank, max_width) for _ in range(count or self.samples)]

    def pairs(self, max_width: int = 3) -> List[tuple]:
        """Exhaustive pairs over the small universe, then random pairs"""
        exhaustive = list(cartesian(self.small, repeat=2))
        randoms = self.random_sets(2 * self.samples, max_width=max_width)
        return exhaustive + list(zip(randoms[::2], randoms[1::2]))


def _call(f, *args) -> str:
    return f"{f}(" + ",".join(render(a) if isinstance(a, HfSet) else str(a) for a in args) + ")"


# Axioms

def suite_extensionality(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Extensionality')
    for x, y in ctx.pairs():
        same = x is y
        check.case(same == (x.member_set() == y.member_set()), lambda: f"{render(x)} vs {render(y)}")
        check.case(same == (iso(to_apg(x), to_apg(y)) is not None), lambda: f"iso {render(x)} {render(y)}")
    return check.result


def suite_pairing(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Pairing')
    pair_apg = ctx.surgery('pair_apg')
    for x, y in ctx.pairs():
        apg = pair_apg(x, y)
        found = [canonicalize(subgraph_at(apg, m)) for m in members(apg)]
        ok = (
            is_extensional(apg)
            and len(found) == len({x, y})
            and set(found) == {x, y}
            and canonicalize(apg) is setops.pair(x, y)
        )
        check.case(ok, lambda: f"{_call('pair', x, y)} has {len(found)} root members")
    return check.result


def suite_union(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Union')
    union = ctx.surgery('union')
    for x in ctx.universe + ctx.random_sets():
        expected = {inner for m in x for inner in m.members}
        check.case(union(x).member_set() == expected, lambda: _call('union', x))
    for a, b in ctx.pairs():
        got = union(setops.pair(a, b))
        check.case(got.member_set() == a.member_set() | b.member_set(),
                   lambda: _call('union', setops.pair(a, b)))
    return check.result


def suite_separation(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Delta0-Separation')
    separation = ctx.surgery('separation')
    fixed = parse_formula("some u in v. true")
    got = separation(setops.vn(4), fixed, 'v')
    check.case(got is make_set(setops.vn(i) for i in (1, 2, 3)), lambda: f"{fixed} over vn(4)")

    for _ in range(ctx.samples):
        x, w = ctx.random_sets(2)
        formula = random_formula(ctx.rng, ['v', 'w'])
        env = {'w': w}
        try:
            got = separation(x, formula, 'v', env)
        except ApgSetError as e:
            check.case(False, lambda: f"{formula}: {e}")
            continue
        expected = make_set(a for a in x if evaluate(formula, {**env, 'v': a}))
        check.case(is_delta0(formula) and got is expected, lambda: f"{formula} over {render(x)}")
    return check.result


def suite_powerset(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Power set')
    powerset = ctx.surgery('powerset')
    for x in ctx.small + ctx.random_sets():
        p = powerset(x)
        check.case(len(p) == 2 ** len(x), lambda: f"|{_call('pow', x)}| = {len(p)}")
        for z in ctx.small + [x]:
            check.case((z in p) == (z.member_set() <= x.member_set()), lambda: f"{render(z)} in {_call('pow', x)}")
    return check.result


def suite_exponentiation(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Exponentiation')
    func_space = ctx.surgery('func_space')
    for x, y in ctx.pairs(max_width=2):
        space = func_space(x, y)
        check.case(all(setops.is_material_function(f, x, y) for f in space), lambda: _call('exp', x, y))
        relations = setops.powerset(setops.product(x, y)) if len(x) * len(y) <= 6 else None
        if relations is not None:
            functions = {r for r in relations if setops.is_material_function(r, x, y)}
            check.case(functions == space.member_set(), lambda: f"functions missing from {_call('exp', x, y)}")
    return check.result


def suite_fullness(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Fullness')
    mv_func_space = ctx.surgery('mv_func_space')
    for x, y in ctx.pairs(max_width=2):
        space = mv_func_space(x, y)
        check.case(all(setops.is_entire(m, x) for m in space), lambda: _call('mvexp', x, y))
        if len(x) * len(y) <= 6:
            for r in setops.powerset(setops.product(x, y)):
                if setops.is_entire(r, x):
                    dominated = any(m.member_set() <= r.member_set() for m in space)
                    check.case(dominated, lambda: f"{render(r)} dominates no member of {_call('mvexp', x, y)}")
    return check.result


def suite_infinity(ctx: HarnessContext) -> SuiteResult:
    """Truncated: omega_upto(k) is closed under successor below k"""
    check = _Check('Infinity')
    omega_upto = ctx.surgery('omega_upto')
    bound = max(ctx.rank, 1) + 4
    for k in range(bound + 1):
        omega = omega_upto(k)
        check.case(len(omega) == k, lambda: _call('omega', k))
        for n in range(k - 1):
            check.case(setops.successor(setops.vn(n)) in omega, lambda: f"succ(vn({n})) in omega({k})")
    for m in range(9):
        for n in range(9):
            check.case((setops.vn(m) in setops.vn(n)) == (m < n), lambda: f"vn({m}) in vn({n})")
    check.case(ack_encode(setops.vn(4)) == 2059, lambda: f"ack(vn(4)) = {ack_encode(setops.vn(4))}")
    return check.result


def suite_choice(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Choice')
    for s in ctx.universe + ctx.random_sets():
        x = make_set(m for m in s if m.is_set and m.members)
        f = setops.choice_function(x)
        check.case(setops.is_material_function(f, x), lambda: _call('choice', x))
        for z in x:
            check.case(setops.apply_function(f, z) in z, lambda: f"{_call('choice', x)} at {render(z)}")
    return check.result


def suite_transitive_closure(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Transitive closure')
    tc = ctx.surgery('tc')
    transitive = [t for t in ctx.universe if is_transitive(t)]
    for x in ctx.universe + ctx.random_sets():
        closure = tc(x)
        check.case(is_transitive(closure) and x.member_set() <= closure.member_set(),
                   lambda: _call('tc', x))
        for t in transitive:
            if x.member_set() <= t.member_set():
                check.case(closure.member_set() <= t.member_set(),
                           lambda: f"{_call('tc', x)} not below {render(t)}")
    return check.result


def suite_foundation(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Foundation')
    self_member = parse_formula("some z in x. z = x")
    for x in ctx.universe + ctx.random_sets():
        check.case(not evaluate(self_member, {'x': x}), lambda: f"{render(x)} contains itself")
        check.case(is_hereditarily_acyclic(x), lambda: render(x))
        apg = to_apg(x)
        part = strict_part(apg)
        if part.members:
            check.case(has_minimal_element(part) is not None, lambda: f"no minimal node below {render(x)}")
    return check.result


def suite_mostowski(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Mostowski')
    for _ in range(ctx.samples):
        apg = random_apg(ctx.rng, min(ctx.dag_max_nodes, 20), atom_probability=0.2)
        value = setops.mostowski(apg)
        quotient, _ = ext_quotient(apg)
        check.case(iso(quotient, to_apg(value)) is not None, lambda: render(value))
    return check.result


# Cross-checks

def _construction_graphs(ctx: HarnessContext) -> Iterator[Tuple[str, WfApg]]:
    """The unquotiented surgery graphs behind the axiom suites, with a description"""
    for x, y in ctx.pairs():
        yield _call('pair', x, y), surgery.pair_graph(x, y)
        yield _call('kpair', x, y), surgery.kpair_graph(x, y)
        yield _call('prod', x, y), surgery.product_graph(x, y)
    for x, y in ctx.pairs(max_width=2):
        yield _call('exp', x, y), surgery.func_space_graph(x, y)
        yield _call('mvexp', x, y), surgery.mv_func_space_graph(x, y)
    for x in ctx.universe + ctx.random_sets():
        yield _call('union', x), surgery.union_graph(x)
        yield _call('tc', x), surgery.tc_graph(x)
        yield _call('succ', x), surgery.successor_graph(x)
    for x in ctx.small + ctx.random_sets():
        yield _call('pow', x), surgery.powerset_graph(x)
    for k in range(max(ctx.rank, 1) + 5):
        yield _call('omega', k), surgery.omega_upto_graph(k)
    for _ in range(ctx.samples):
        x, w = ctx.random_sets(2)
        formula = random_formula(ctx.rng, ['v', 'w'])
        try:
            graph = surgery.separation_graph(x, formula, 'v', {'w': w})
        except ApgSetError:
            continue
        yield f"sep({render(x)}, v, \"{formula}\")", graph
    for _ in range(ctx.samples):
        graph = random_apg(ctx.rng, min(ctx.dag_max_nodes, 20), atom_probability=0.2)
        yield f"mostowski graph with {graph.node_count} nodes", graph


def suite_bisimulation_oracle(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Bisimulation oracle')
    for _ in range(ctx.dag_count):
        raw = random_dag(ctx.rng, ctx.dag_max_nodes, atom_probability=0.1)
        check.case(max_bisim_refine(raw) == max_bisim_naive(raw), lambda: f"dag with {raw.node_count} nodes")
    for description, graph in _construction_graphs(ctx):
        partition = max_bisim_refine(graph.graph)
        check.case(partition == max_bisim_naive(graph.graph), lambda: description)
        check.case(bool(is_bisimulation(relation_from_partition(graph, partition))),
                   lambda: f"maximal partition of {description}")
    return check.result


def suite_simulations(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Simulations')
    for _ in range(ctx.samples):
        apg = random_apg(ctx.rng, min(ctx.dag_max_nodes, 20))
        quotient, projection = ext_quotient(apg)
        check.case(bool(is_simulation(projection)) and projection.is_surjective(),
                   lambda: f"quotient map of {apg.node_count} nodes")
        again, _ = ext_quotient(quotient)
        check.case(iso(again, quotient) is not None, lambda: "quotient not idempotent")
        for node in range(quotient.node_count):
            inclusion = inclusion_map(quotient, node)
            check.case(bool(is_simulation(inclusion)) and inclusion.is_injective(),
                       lambda: f"inclusion at node {node}")
    return check.result


def suite_round_trip(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Round trip')
    for s in ctx.universe + ctx.random_sets(max_rank=6):
        check.case(canonicalize(to_apg(s)) is s, lambda: render(s))
        check.case(parse_braces(render(s)) is s, lambda: render(s))
    return check.result


def suite_ackermann(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Ackermann coding')
    for s in ctx.universe + ctx.random_sets():
        check.case(ack_decode(ack_encode(s)) is s, lambda: render(s))
    for n in range(ACK_CODE_BOUND):
        check.case(ack_encode(ack_decode(n)) == n, lambda: str(n))
    return check.result


def suite_cardinalities(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Cardinalities')
    vn = setops.vn
    for m in range(5):
        check.case(len(ctx.surgery('powerset')(vn(m))) == 2 ** m, lambda: f"|pow(vn({m}))|")
    for m in range(4):
        for n in range(4):
            x, y = vn(m), vn(n)
            check.case(len(ctx.surgery('product')(x, y)) == m * n, lambda: f"|prod(vn({m}),vn({n}))|")
            check.case(len(ctx.surgery('func_space')(x, y)) == n ** m, lambda: f"|exp(vn({m}),vn({n}))|")
            check.case(len(ctx.surgery('mv_func_space')(x, y)) == (2 ** n - 1) ** m,
                       lambda: f"|mvexp(vn({m}),vn({n}))|")
    return check.result


def suite_category_laws(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Category laws')
    objects = [FinObj(s) for s in ctx.small]
    objects += [FinObj(setops.vn(3))] if FinObj(setops.vn(3)) not in objects else []
    formulas = [parse_formula(t) for t in ("x in a", "some u in x. true", "all u in x. u in a")]
    formulas += [random_formula(ctx.rng, ['x', 'a'], depth=2) for _ in range(5)]
    for law in check_all_laws(objects, formulas):
        check.result.checked += law.checked
        if not law.ok and check.result.passed:
            check.result.passed = False
            check.result.detail = law.render()
    return check.result


def suite_surgery_agreement(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Surgery agreement')
    binary = ('pair', 'kpair', 'product', 'func_space', 'mv_func_space')
    unary = ('union', 'powerset', 'tc', 'successor')
    for x, y in ctx.pairs(max_width=2):
        for op in binary:
            got = ctx.surgery(op)(x, y)
            check.case(got is setops.DIRECT[op](x, y), lambda: _call(op, x, y))
        for op in unary:
            got = ctx.surgery(op)(x)
            check.case(got is setops.DIRECT[op](x), lambda: _call(op, x))
    for n in range(9):
        check.case(ctx.surgery('vn')(n) is setops.vn(n), lambda: _call('vn', n))
    return check.result


def suite_tree_unfolding(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Tree unfolding')
    for s in ctx.small + ctx.random_sets(max_width=2):
        tree = unfold_to_tree(to_apg(s))
        is_tree = all(len(tree.parents(n)) == (0 if n == tree.root else 1) for n in range(tree.node_count))
        check.case(is_tree and setops.mostowski(tree) is s, lambda: render(s))
    return check.result


def suite_well_foundedness(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Well-foundedness')
    for _ in range(min(ctx.samples, 100)):
        raw = random_dag(ctx.rng, MAX_WF_NODES)
        check.case(every_subset_has_minimal(raw) and is_well_founded_by_induction(raw),
                   lambda: f"acyclic graph {raw.edges}")
        if raw.edge_count:
            child, parent = raw.edges[int(ctx.rng.integers(0, raw.edge_count))]
            looped = RawGraph(raw.node_count, raw.edges + ((parent, child),), raw.labels)
            check.case(
                find_cycle(looped) is not None
                and not every_subset_has_minimal(looped)
                and not is_well_founded_by_induction(looped),
                lambda: f"cyclic graph {looped.edges}",
            )
    return check.result


def suite_induction(ctx: HarnessContext) -> SuiteResult:
    """Finite induction over the numerals for random formulas in one variable"""
    check = _Check('Induction')
    k = max(ctx.rank, 1) + 2
    for _ in range(min(ctx.samples, 200)):
        formula = random_formula(ctx.rng, ['n'])
        truth = [evaluate(formula, {'n': setops.vn(i)}) for i in range(k + 1)]
        step = truth[0] and all(truth[i + 1] for i in range(k) if truth[i])
        check.case(not step or all(truth), lambda: str(formula))
    return check.result


def suite_kuratowski(ctx: HarnessContext) -> SuiteResult:
    check = _Check('Kuratowski pairs')
    small = ctx.small
    for x, y in cartesian(small, repeat=2):
        z = setops.kpair(x, y)
        check.case(setops.unpair(z) == (x, y), lambda: _call('kpair', x, y))
        for u, v in cartesian(small, repeat=2):
            check.case((z is setops.kpair(u, v)) == (x is u and y is v),
                       lambda: f"{_call('kpair', x, y)} vs {_call('kpair', u, v)}")
    for x, y in ctx.pairs(max_width=2):
        check.case(all(setops.is_kuratowski_pair(p) for p in setops.product(x, y)),
                   lambda: _call('prod', x, y))
    return check.result


SUITES: Dict[str, Callable[[HarnessContext], SuiteResult]] = {
    'Ackermann coding': suite_ackermann,
    'Bisimulation oracle': suite_bisimulation_oracle,
    'Cardinalities': suite_cardinalities,
    'Category laws': suite_category_laws,
    'Choice': suite_choice,
    'Delta0-Separation': suite_separation,
    'Exponentiation': suite_exponentiation,
    'Extensionality': suite_extensionality,
    'Foundation': suite_foundation,
    'Fullness': suite_fullness,
    'Induction': suite_induction,
    'Infinity': suite_infinity,
    'Kuratowski pairs': suite_kuratowski,
    'Mostowski': suite_mostowski,
    'Pairing': suite_pairing,
    'Power set': suite_powerset,
    'Round trip': suite_round_trip,
    'Simulations': suite_simulations,
    'Surgery agreement': suite_surgery_agreement,
    'Transitive closure': suite_transitive_closure,
    'Tree unfolding': suite_tree_unfolding,
    'Union': suite_union,
    'Well-foundedness': suite_well_foundedness,
}


def _run_suite(name: str, ctx: HarnessContext) -> SuiteResult:
    logger.info(f"running suite {name}")
    try:
        result = SUITES[name](ctx)
    except ApgSetError as e:
        result = SuiteResult(name, False, 0, f"{type(e).__name__}: {e}")
    result.suite = name
    if not result.passed:
        logger.warning(f"suite {name} failed: {result.detail}")
    return result


def run_harness(seed: int = 0, rank: int = 4, samples: int = 500,
                suites: Optional[Sequence[str]] = None,
                max_rank: int = DEFAULT_MAX_RANK,
                dag_count: int = 1000, dag_max_nodes: int = 50,
                parallel: bool = False, max_workers: int = 4,
                surgery_overrides: Optional[Mapping[str, Callable[..., Any]]] = None) -> HarnessReport:
    """
    Run the suites and collect one result per suite

    Each suite draws from its own generator, spawned from `seed` in suite-name
    order, so parallel and serial runs give identical reports.

    Args:
        seed: Root seed
        rank: Size of the exhaustive universe, enumerate_rank(rank)
        samples: Random inputs per suite
        suites: Names to run (default: all)
        surgery_overrides: Replacement surgery functions by name (mutation checks)
    """
    names = sorted(SUITES if suites is None else suites)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suites: {unknown}")

    streams = np.random.SeedSequence(seed).spawn(len(SUITES))
    stream_of = dict(zip(sorted(SUITES), streams))

    def context(name: str) -> HarnessContext:
        return HarnessContext(
            rank=rank, samples=samples, rng=make_rng(stream_of[name]), max_rank=max_rank,
            dag_count=dag_count, dag_max_nodes=dag_max_nodes,
            surgery_overrides=dict(surgery_overrides or {}),
        )

    if parallel and len(names) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            results = list(pool.map(lambda n: _run_suite(n, context(n)), names))
    else:
        results = [_run_suite(n, context(n)) for n in names]

    report = HarnessReport(seed, rank, samples, sorted(results, key=lambda r: r.suite))
    logger.info(f"harness finished: {sum(r.passed for r in results)}/{len(results)} suites passed")
    return report
