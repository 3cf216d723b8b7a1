"""Duals of finite sets of oriented trees.

For a core oriented tree ``T`` the dual is built as in Nesetril and Tardif:
vertices are the maps ``f: V(T) -> V(T)`` sending every vertex to one of its
neighbours, with an arc ``f -> g`` iff for every arc ``(u, v)`` of ``T`` we
have ``f(u) != v`` or ``g(v) != u``.  A set of trees gets the product of the
individual duals (``Csp(A) & Csp(B) = Csp(A x B)``).  The result is reduced to
its core and always checked against the brute-force duality oracle before it
is handed out.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product as cartesian
from math import prod

from .homomorphism import (
    DEFAULT_AUT_CAP,
    core_of,
    homomorphic,
    is_rigid,
    square_dismantles_to_diagonal,
)
from .structures import (
    CapExceeded,
    Digraph,
    OrientedForest,
    classify,
    enumerate_digraphs,
    has_directed_cycle,
    product,
)

DEFAULT_SIZE_BUDGET = 1 << 16


@dataclass(frozen=True)
class Certificates:
    acyclic: bool | None
    rigid: bool | None
    square_dismantles: bool | None
    oracle_checked_to: int
    random_trials: int = 0

    def all_true(self) -> bool:
        return bool(self.acyclic and self.rigid and self.square_dismantles)


@dataclass(frozen=True)
class DualResult:
    dual: Digraph
    construction_size: int
    certificates: Certificates

    def to_json(self) -> dict:
        c = self.certificates
        return {
            "dual": self.dual.to_json(),
            "construction_size": self.construction_size,
            "certificates": {
                "acyclic": c.acyclic,
                "rigid": c.rigid,
                "square_dismantles": c.square_dismantles,
                "oracle_checked_to": c.oracle_checked_to,
                "random_trials": c.random_trials,
            },
        }


@dataclass
class ValidationReport:
    passed: bool
    checked: int
    exhaustive_n: int
    random_trials: int
    counterexample: Digraph | None = None
    details: dict = field(default_factory=dict)


def tree_dual(t: Digraph, budget: int = DEFAULT_SIZE_BUDGET) -> Digraph:
    """The (not yet cored) dual of a single oriented tree with at least one arc."""
    nbrs = [sorted({w for u, w in t.edges if u == v} | {u for u, w in t.edges if w == v})
            for v in range(t.n)]
    size = prod(len(nb) for nb in nbrs)
    if size > budget:
        raise CapExceeded(f"dual construction needs {size} vertices (budget {budget})")
    funcs = list(cartesian(*nbrs))
    arcs = sorted(t.edges)
    edges = frozenset(
        (i, j)
        for i, f in enumerate(funcs)
        for j, g in enumerate(funcs)
        if all(f[u] != v or g[v] != u for u, v in arcs)
    )
    return Digraph(len(funcs), edges)


def _check_forest(forest) -> OrientedForest:
    if not isinstance(forest, OrientedForest):
        forest = OrientedForest(tuple(forest))
    if len(forest) == 0:
        raise ValueError("the forbidden set must be non-empty")
    return forest


def forb_member(forest, g: Digraph) -> bool:
    return not any(homomorphic(t, g) for t in forest)


def _random_digraph(rng: random.Random, n: int) -> Digraph:
    # sparse-to-medium densities; dense random digraphs almost always contain a
    # loop and tell nothing about the duality
    p = rng.uniform(0.05, 0.6)
    q = rng.uniform(0.0, 0.1)
    edges = [(u, v) for u in range(n) for v in range(n)
             if rng.random() < (q if u == v else p)]
    return Digraph(n, frozenset(edges))


def validate_dual(forest, d: Digraph, exhaustive_n: int = 3, random_trials: int = 0,
                  random_n: int = 6, seed: int = 0) -> ValidationReport:
    """Check ``G -> D  iff  no T in F maps to G`` on all small and some random ``G``."""
    forest = _check_forest(forest)
    trees = sorted(forest, key=lambda t: t.n)
    checked = 0
    for n in range(exhaustive_n + 1):
        for g in enumerate_digraphs(n, cap=exhaustive_n):
            checked += 1
            if homomorphic(g, d) != forb_member(trees, g):
                return ValidationReport(False, checked, exhaustive_n, random_trials, g)
    rng = random.Random(seed)
    for _ in range(random_trials):
        g = _random_digraph(rng, random_n)
        checked += 1
        if homomorphic(g, d) != forb_member(trees, g):
            return ValidationReport(False, checked, exhaustive_n, random_trials, g)
    return ValidationReport(True, checked, exhaustive_n, random_trials)


def structural_certificates(d: Digraph, aut_cap: int = DEFAULT_AUT_CAP,
                            dismantle_cap: int = 400) -> dict:
    """Acyclicity, rigidity and whether ``D x D`` dismantles onto its diagonal."""
    if d.n > aut_cap:
        raise CapExceeded(f"|V|={d.n} exceeds automorphism cap {aut_cap}")
    if d.n * d.n > dismantle_cap:
        raise CapExceeded(f"|V|^2={d.n * d.n} exceeds dismantling cap {dismantle_cap}")
    return {
        "acyclic": not has_directed_cycle(d),
        "rigid": is_rigid(d, cap=aut_cap),
        "square_dismantles": square_dismantles_to_diagonal(d) is not None,
    }


def build_dual(forest, budget: int = DEFAULT_SIZE_BUDGET, exhaustive_n: int = 3,
               random_trials: int = 200, random_n: int = 6, seed: int = 0,
               aut_cap: int = 16, dismantle_cap: int = 400) -> DualResult:
    forest = _check_forest(forest)
    for t in forest:
        if not classify(t)["is_oriented_tree"]:
            raise ValueError("every member must be an oriented tree")
    if any(t.n == 1 for t in forest):
        # a single vertex maps to every non-empty digraph
        dual, size = Digraph(0), 0
    else:
        cores = [core_of(t) for t in forest]
        raw = [tree_dual(c, budget) for c in cores]
        size = prod(r.n for r in raw)
        factors = [core_of(r) for r in raw]
        dual = factors[0]
        for f in factors[1:]:
            if dual.n * f.n > budget:
                raise CapExceeded(f"product of duals exceeds budget {budget}")
            dual = core_of(product(dual, f))
    report = validate_dual(forest, dual, exhaustive_n, random_trials, random_n, seed)
    if not report.passed:
        raise RuntimeError(f"dual failed validation; counterexample {report.counterexample!r}")
    try:
        cert = structural_certificates(dual, aut_cap=aut_cap, dismantle_cap=dismantle_cap)
    except CapExceeded:
        cert = {"acyclic": not has_directed_cycle(dual), "rigid": None, "square_dismantles": None}
    return DualResult(dual, size, Certificates(oracle_checked_to=exhaustive_n,
                                               random_trials=random_trials, **cert))
