"""Orbit sentences and coloured one-point extension axioms for ``T_l``."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations, product

from ..colored import tournament_order
from ..homomorphism import PPFormula, canonical_orbit_formula
from ..structures import Digraph
from .syntax import (
    Color, Edge, Eq, Not, Implies, conj, disj, exists, forall,
)


def pp_to_formula(phi: PPFormula):
    atoms = [Edge(a, b) for a, b in phi.atoms]
    return exists(phi.quantified_variables, conj(*atoms))


def orbit_sentence(d: Digraph):
    """``forall x (phi_1(x) | ... | phi_k(x))`` over the canonical orbit formulas of a core."""
    parts = [pp_to_formula(canonical_orbit_formula(d, u)) for u in range(d.n)]
    return forall(("x",), disj(*parts))


@dataclass(frozen=True)
class ExtensionAxiom:
    base_colors: tuple
    base_edges: frozenset     # arcs (i, j) between universal vertices
    new_color: int
    new_edges: frozenset      # ("out", i) for x_i -> y, ("in", i) for y -> x_i
    sentence: object


def _canonical(colors, edges) -> tuple:
    m = len(colors)
    best = None
    for p in permutations(range(m)):
        # p[i] is the new position of old vertex i
        c = [None] * m
        for i in range(m):
            c[p[i]] = colors[i]
        e = tuple(sorted((p[i], p[j]) for i, j in edges))
        key = (tuple(c), e)
        if best is None or key < best:
            best = key
    return best


def _base_types(d: Digraph, m: int) -> list:
    """Coloured loopless quantifier-free types on ``m`` distinct vertices, up to isomorphism."""
    seen, out = set(), []
    pairs = [(i, j) for i in range(m) for j in range(m) if i != j]
    for colors in product(range(d.n), repeat=m):
        allowed = [(i, j) for i, j in pairs if d.has_edge(colors[i], colors[j])]
        for k in range(len(allowed) + 1):
            for chosen in combinations(allowed, k):
                key = _canonical(colors, chosen)
                if key not in seen:
                    seen.add(key)
                    out.append(key)
    return out


def extension_axioms(d: Digraph, m: int, max_m: int = 3) -> list:
    """Axioms ``forall x1..xk (distinct & type -> exists y (...))`` for every ``k <= m``.

    Every vertex is loopless, the universal vertices are pairwise distinct and
    ``y`` differs from all of them; arcs between ``y`` and ``x_i`` range over the
    pairs the colours allow.
    """
    tournament_order(d)
    if m < 0 or m > max_m:
        raise ValueError(f"m must lie in 0..{max_m}")
    axioms = []
    for k in range(m + 1):
        xs = [f"x{i + 1}" for i in range(k)]
        for colors, base in _base_types(d, k):
            base_set = frozenset(base)
            guard = [Not(Eq(xs[i], xs[j])) for i, j in combinations(range(k), 2)]
            diagram = []
            for i in range(k):
                diagram += [Color(colors[i], xs[i]), Not(Edge(xs[i], xs[i]))]
            for i in range(k):
                for j in range(k):
                    if i != j:
                        e = Edge(xs[i], xs[j])
                        diagram.append(e if (i, j) in base_set else Not(e))
            for c in range(d.n):
                options = [("out", i) for i in range(k) if d.has_edge(colors[i], c)] + \
                          [("in", i) for i in range(k) if d.has_edge(c, colors[i])]
                for r in range(len(options) + 1):
                    for chosen in combinations(options, r):
                        chosen = frozenset(chosen)
                        body = [Color(c, "y"), Not(Edge("y", "y"))]
                        body += [Not(Eq("y", x)) for x in xs]
                        for i in range(k):
                            e_out, e_in = Edge(xs[i], "y"), Edge("y", xs[i])
                            body.append(e_out if ("out", i) in chosen else Not(e_out))
                            body.append(e_in if ("in", i) in chosen else Not(e_in))
                        claim = exists(("y",), conj(*body))
                        sentence = forall(xs, Implies(conj(*guard, *diagram), claim)) if k else claim
                        axioms.append(ExtensionAxiom(tuple(colors), base_set, c, chosen, sentence))
    return axioms
