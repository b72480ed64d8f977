"""
Seeded random inputs

Every random choice in the project is drawn from one numpy Generator made by
make_rng, so a run is reproducible from its seed.
"""

from typing import List, Optional, Sequence, Union

import numpy as np

from src.core.canon import HfSet, atom, make_set
from src.core.graph_core import RawGraph, WfApg, restrict_accessible
from src.core.logic import (
    And,
    Bottom,
    Eq,
    ExistsIn,
    ForallIn,
    Formula,
    Implies,
    IsSet,
    Mem,
    Not,
    Or,
    Top,
)


def make_rng(seed: Union[None, int, np.random.SeedSequence] = 0) -> np.random.Generator:
    """One generator for a run; a SeedSequence child gives an independent stream"""
    return np.random.default_rng(seed)


def random_dag(rng: np.random.Generator, max_nodes: int = 50,
               edge_probability: Optional[float] = None,
               atom_probability: float = 0.0) -> RawGraph:
    """
    A random acyclic graph; edges only run from lower to higher indices

    Childless nodes are labeled with an atom with probability atom_probability.
    """
    n = int(rng.integers(1, max_nodes + 1))
    p = edge_probability if edge_probability is not None else float(rng.uniform(0.05, 0.5))
    children: List[List[int]] = []
    for parent in range(n):
        if parent:
            picks = np.flatnonzero(rng.random(parent) < p)
            children.append([int(c) for c in picks])
        else:
            children.append([])
    labels = {}
    if atom_probability > 0:
        for node, kids in enumerate(children):
            if not kids and rng.random() < atom_probability:
                labels[node] = f"a{int(rng.integers(0, 3))}"
    return RawGraph.from_adjacency(children, labels)


def random_apg(rng: np.random.Generator, max_nodes: int = 50, **kwargs) -> WfApg:
    """A random DAG rooted at its last node, cut down to what the root can see"""
    raw = random_dag(rng, max_nodes, **kwargs)
    return restrict_accessible(raw, raw.node_count - 1)


def random_hfset(rng: np.random.Generator, max_rank: int = 4, max_width: int = 3,
                 atom_names: Sequence[str] = ()) -> HfSet:
    """A random set of rank at most max_rank, each set with at most max_width members"""
    def build(depth: int) -> HfSet:
        if depth == 0:
            if atom_names and rng.random() < 0.5:
                return atom(atom_names[int(rng.integers(0, len(atom_names)))])
            return make_set(())
        width = int(rng.integers(0, max_width + 1))
        return make_set(build(int(rng.integers(0, depth))) for _ in range(width))

    return build(int(rng.integers(0, max_rank + 1)))


def random_formula(rng: np.random.Generator, free: Sequence[str], depth: int = 3) -> Formula:
    """A random Delta-0 formula over the given free variables"""
    counter = [0]

    def build(scope: List[str], level: int) -> Formula:
        def pick() -> str:
            return scope[int(rng.integers(0, len(scope)))]

        choice = int(rng.integers(0, 10 if level > 0 else 5))
        if choice == 0:
            return Top() if rng.random() < 0.5 else Bottom()
        if choice in (1, 2):
            return Mem(pick(), pick())
        if choice == 3:
            return Eq(pick(), pick())
        if choice == 4:
            return IsSet(pick())
        if choice == 5:
            return Not(build(scope, level - 1))
        if choice in (6, 7):
            node = (And, Or, Implies)[int(rng.integers(0, 3))]
            return node(build(scope, level - 1), build(scope, level - 1))
        counter[0] += 1
        var = f"v{counter[0]}"
        quantifier = ExistsIn if choice == 8 else ForallIn
        return quantifier(var, pick(), build(scope + [var], level - 1))

    return build(list(free), depth)
