"""Exact counts and samplers for labelled D-coloured digraphs.

A D-coloured digraph on ``{0..n-1}`` is a colour map into ``V(D)`` plus, for
every ordered pair whose colours form an edge of ``D``, a free choice of an
arc.  Grouping by the colour-class sizes ``s`` gives

    c_n = sum_s multinomial(n; s) * prod_{(i,j) in E(D)} 2^(s_i s_j)

(a loop at ``i`` contributes ``2^(s_i^2)``).  Weakly connected components of
``D`` contribute independently, so ``c_n`` is the binomial convolution of the
per-component counts; only the components themselves are summed over
compositions.

Randomness comes from :class:`random.Random` (MT19937) seeded with the given
unsigned 64-bit integer; only ``randrange``, ``getrandbits`` and ``shuffle``
are used.
"""

from __future__ import annotations

import bisect
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product as cartesian
from math import comb, factorial

from .density import finite_density, max_oriented_clique, maximal_densest_supports
from .homomorphism import is_hom
from .structures import (
    CapExceeded,
    Digraph,
    has_directed_cycle,
    induced_subgraph,
    is_oriented,
    weak_components,
)

COMPOSITION_BUDGET = 10 ** 7


@dataclass(frozen=True)
class ColoredDigraph:
    graph: Digraph
    color: tuple
    template: Digraph

    def __post_init__(self):
        if len(self.color) != self.graph.n:
            raise ValueError("every vertex needs exactly one colour")
        if not is_hom(self.graph, self.template, self.color):
            raise ValueError("colour map is not a homomorphism to the template")

    @property
    def n(self) -> int:
        return self.graph.n

    def key(self) -> tuple:
        return (self.color, tuple(self.graph.sorted_edges()))

    def to_json(self) -> dict:
        out = self.graph.to_json()
        out["colors"] = list(self.color)
        return out


# ----------------------------------------------------------- compositions

def compositions(n: int, k: int):
    """Weak compositions of ``n`` into ``k`` parts, lexicographically decreasing."""
    if k == 0:
        if n == 0:
            yield ()
        return
    if k == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in compositions(n - first, k - 1):
            yield (first,) + rest


def multinomial(parts) -> int:
    out, left = 1, sum(parts)
    for p in parts:
        out *= comb(left, p)
        left -= p
    return out


def edge_exponent(d: Digraph, s) -> int:
    return sum(s[i] * s[j] for i, j in d.edges)


def summand(d: Digraph, s) -> int:
    return multinomial(s) << edge_exponent(d, s)


def count_compositions(n: int, k: int) -> int:
    return comb(n + k - 1, k - 1) if k else int(n == 0)


def _check_budget(n: int, k: int, budget: int):
    if count_compositions(n, k) > budget:
        raise CapExceeded(f"{count_compositions(n, k)} compositions of {n} into {k} parts "
                          f"exceed budget {budget}")


def count_colored_direct(d: Digraph, n: int, budget: int = COMPOSITION_BUDGET) -> int:
    """``c_n`` by plain composition enumeration over all of ``V(D)``."""
    _check_budget(n, d.n, budget)
    return sum(summand(d, s) for s in compositions(n, d.n))


@lru_cache(maxsize=4096)
def _component_counts(comp: Digraph, n: int, budget: int) -> tuple:
    """``c_m`` of a connected template for ``m = 0..n``."""
    _check_budget(n, comp.n, budget)
    fact = [1]
    for i in range(1, n + 1):
        fact.append(fact[-1] * i)
    edges = sorted(comp.edges)
    out = []
    for m in range(n + 1):
        total = 0
        for s in compositions(m, comp.n):
            den = 1
            for x in s:
                den *= fact[x]
            total += (fact[m] // den) << sum(s[i] * s[j] for i, j in edges)
        out.append(total)
    return tuple(out)


def _components(d: Digraph) -> list:
    return [induced_subgraph(d, c) for c in weak_components(d)]


def _convolve(a, b, n):
    return [sum(comb(m, j) * a[j] * b[m - j] for j in range(m + 1)) for m in range(n + 1)]


def colored_counts(d: Digraph, n: int, budget: int = COMPOSITION_BUDGET) -> list:
    """``[c_0, ..., c_n]`` for the template ``d``."""
    total = [1] + [0] * n
    for comp in _components(d):
        total = _convolve(total, _component_counts(comp, n, budget), n)
    return total


def count_colored(d: Digraph, n: int, budget: int = COMPOSITION_BUDGET) -> int:
    if n < 0:
        raise ValueError("n must be non-negative")
    return colored_counts(d, n, budget)[n]


def count_contained(d: Digraph, n: int, supports, budget: int = COMPOSITION_BUDGET) -> int:
    """Coloured digraphs whose colour classes all lie inside one of ``supports``."""
    sups = [frozenset(s) for s in supports]
    total = 0
    for r in range(1, len(sups) + 1):
        for group in combinations(sups, r):
            inter = frozenset.intersection(*group)
            term = count_colored(induced_subgraph(d, sorted(inter)), n, budget) if inter else int(n == 0)
            total += term if r % 2 else -term
    return total


def count_bad(d: Digraph, n: int, good_supports=None, budget: int = COMPOSITION_BUDGET) -> int:
    """``b_n``: colourings whose used colours are not inside any good support.

    ``good_supports`` defaults to the maximal densest supports of ``d``.
    """
    if good_supports is None:
        good_supports = maximal_densest_supports(d)
    return count_colored(d, n, budget) - count_contained(d, n, good_supports, budget)


def count_bad_direct(d: Digraph, n: int, good_supports, budget: int = COMPOSITION_BUDGET) -> int:
    _check_budget(n, d.n, budget)
    goods = [frozenset(s) for s in good_supports]
    total = 0
    for s in compositions(n, d.n):
        used = frozenset(i for i, x in enumerate(s) if x)
        if not any(used <= g for g in goods):
            total += summand(d, s)
    return total


# ------------------------------------------------------------- tables

@dataclass(frozen=True)
class CountRow:
    n: int
    c_n: int
    b_n: int
    d_n: Fraction
    ratio: Fraction

    def lower_bound_holds(self) -> bool:
        """``c_n >= 2^(n^2 d_n)``; the exponent is an integer."""
        e = self.d_n * self.n * self.n
        assert e.denominator == 1
        return self.c_n >= 1 << e.numerator

    def upper_bound_holds(self, k: int) -> bool:
        """``b_n <= n^k 2^(n^2 d_n (1 - 1/n + 1/n^2))``, compared exactly."""
        n = self.n
        e = self.d_n * (n * n - n + 1)
        p, q = e.numerator, e.denominator
        base = n ** k
        if self.b_n <= base << (p // q):
            return True
        # b^q <= n^(kq) 2^p
        return self.b_n ** q <= (base ** q) << p

    def to_json(self) -> dict:
        return {"n": self.n, "c_n": str(self.c_n), "b_n": str(self.b_n), "d_n": str(self.d_n),
                "ratio": str(self.ratio), "ratio_decimal": float(self.ratio)}


@dataclass(frozen=True)
class CountTable:
    template: Digraph
    good_supports: tuple
    clique: tuple
    rows: tuple


def count_table(d: Digraph, ns, good_supports=None, budget: int = COMPOSITION_BUDGET) -> CountTable:
    ns = sorted(ns)
    if good_supports is None:
        good_supports = maximal_densest_supports(d)
    good_supports = tuple(tuple(sorted(s)) for s in good_supports)
    _, clique = max_oriented_clique(d) if is_oriented(d) else (None, ())
    rows = []
    top = ns[-1] if ns else 0
    cs = colored_counts(d, top, budget)
    inside = [0] * (top + 1)
    sups = [frozenset(s) for s in good_supports]
    for r in range(1, len(sups) + 1):
        for group in combinations(sups, r):
            inter = frozenset.intersection(*group)
            sub = colored_counts(induced_subgraph(d, sorted(inter)), top, budget) if inter else [1] + [0] * top
            for m in range(top + 1):
                inside[m] += sub[m] if r % 2 else -sub[m]
    for n in ns:
        c = cs[n]
        b = c - inside[n]
        dn = finite_density(d, clique, n)[0] if clique and n >= 1 else Fraction(0)
        rows.append(CountRow(n, c, b, dn, Fraction(b, c) if c else Fraction(0)))
    return CountTable(d, good_supports, tuple(clique), tuple(rows))


# -------------------------------------------------------------- samplers

@lru_cache(maxsize=64)
def _cumulative(comp: Digraph, m: int, budget: int):
    _check_budget(m, comp.n, budget)
    comps, cum, acc = [], [], 0
    for s in compositions(m, comp.n):
        acc += summand(comp, s)
        comps.append(s)
        cum.append(acc)
    return comps, cum


def _pick(rng: random.Random, cum: list) -> int:
    return bisect.bisect_right(cum, rng.randrange(cum[-1]))


@lru_cache(maxsize=64)
def _component_tables(d: Digraph, n: int, budget: int):
    comps = weak_components(d)
    subs = [induced_subgraph(d, c) for c in comps]
    if len(subs) == 1:
        return comps, subs, None, None
    tables = [_component_counts(s, n, budget) for s in subs]
    # suffix[i][m]: coloured count of components i.. on m vertices
    suffix = [None] * (len(subs) + 1)
    suffix[len(subs)] = [1] + [0] * n
    for i in range(len(subs) - 1, -1, -1):
        suffix[i] = _convolve(tables[i], suffix[i + 1], n)
    return comps, subs, tables, suffix


def sample_composition(d: Digraph, n: int, rng: random.Random, budget: int = COMPOSITION_BUDGET) -> tuple:
    """Colour-class sizes with probability proportional to their ``c_n`` summand."""
    comps, subs, tables, suffix = _component_tables(d, n, budget)
    sizes, left = [], n
    for i in range(len(subs) if tables else 0):
        weights = [comb(left, m) * tables[i][m] * suffix[i + 1][left - m] for m in range(left + 1)]
        acc, cum = 0, []
        for w in weights:
            acc += w
            cum.append(acc)
        m = _pick(rng, cum)
        sizes.append(m)
        left -= m
    if not tables:
        sizes = [n]
    s = [0] * d.n
    for comp, sub, m in zip(comps, subs, sizes):
        if m == 0:
            continue
        options, cum = _cumulative(sub, m, budget)
        local = options[_pick(rng, cum)]
        for v, x in zip(comp, local):
            s[v] = x
    return tuple(s)


def _random_edges(rng: random.Random, d: Digraph, color) -> Digraph:
    n = len(color)
    edges = []
    for a in range(n):
        out = d.out_mask[color[a]]
        for b in range(n):
            if out >> color[b] & 1 and rng.getrandbits(1):
                edges.append((a, b))
    return Digraph(n, frozenset(edges))


def sample_uniform(d: Digraph, n: int, seed: int, budget: int = COMPOSITION_BUDGET) -> ColoredDigraph:
    """Uniform labelled D-coloured digraph on ``n`` vertices."""
    rng = random.Random(seed)
    s = sample_composition(d, n, rng, budget)
    labels = list(range(n))
    rng.shuffle(labels)
    color = [0] * n
    pos = 0
    for v, size in enumerate(s):
        for a in labels[pos:pos + size]:
            color[a] = v
        pos += size
    color = tuple(color)
    return ColoredDigraph(_random_edges(rng, d, color), color, d)


def tournament_order(t: Digraph) -> list:
    """Vertices of a transitive tournament from source to sink; ValueError otherwise."""
    k = t.n
    if not is_oriented(t) or t.m != k * (k - 1) // 2 or has_directed_cycle(t):
        raise ValueError("template must be a transitive tournament")
    return sorted(range(k), key=lambda v: -bin(t.out_mask[v]).count("1"))


def sample_product(t: Digraph, n: int, seed: int) -> ColoredDigraph:
    """Independent uniform bags, then each permitted arc with probability 1/2."""
    tournament_order(t)
    rng = random.Random(seed)
    color = tuple(rng.randrange(t.n) for _ in range(n))
    return ColoredDigraph(_random_edges(rng, t, color), color, t)


# ----------------------------------------------------------- statistics

def bag_statistics(t: Digraph, n: int, budget: int = COMPOSITION_BUDGET) -> dict:
    """Exact probability that some colour class has fewer than ``n // l`` vertices."""
    tournament_order(t)
    ell = t.n
    _check_budget(n, ell, budget)
    floor = n // ell
    small = total = 0
    for s in compositions(n, ell):
        w = summand(t, s)
        total += w
        if min(s) < floor:
            small += w
    return {"n": n, "ell": ell, "p_small_bag": Fraction(small, total)}


# --------------------------------------------------------- exact laws

def enumerate_colored(d: Digraph, n: int):
    """Every labelled D-coloured digraph on ``n`` vertices (tiny inputs only)."""
    for color in cartesian(range(d.n), repeat=n):
        allowed = [(a, b) for a in range(n) for b in range(n) if (color[a], color[b]) in d.edges]
        for mask in range(1 << len(allowed)):
            edges = frozenset(allowed[j] for j in range(len(allowed)) if mask >> j & 1)
            yield ColoredDigraph(Digraph(n, edges), color, d)


def uniform_law(d: Digraph, n: int) -> dict:
    outcomes = [c.key() for c in enumerate_colored(d, n)]
    return {k: Fraction(1, len(outcomes)) for k in outcomes}


def product_law(t: Digraph, n: int) -> dict:
    """Exact outcome probabilities of :func:`sample_product`."""
    tournament_order(t)
    law = {}
    for c in enumerate_colored(t, n):
        allowed = sum(1 for a in range(n) for b in range(n) if (c.color[a], c.color[b]) in t.edges)
        law[c.key()] = Fraction(1, t.n ** n * 2 ** allowed)
    return law
