"""Exact maximisation of ``sum_{(u,v) in E} x_u x_v`` over the probability simplex.

The objective is ``x^T A x / 2`` with ``A = M + M^T`` for the adjacency matrix
``M`` (a loop gives ``x_u^2``, a double edge counts twice).  A maximiser of
minimal support ``S`` is a strictly positive solution of the bordered system
``A_S x = mu * 1, sum(x) = 1`` and that system is then non-singular (otherwise
the objective is constant along a line inside the face and the support could
shrink).  So the maximum is the largest ``mu / 2`` over all supports whose
bordered system has a unique, strictly positive solution.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .homomorphism import _bits
from .structures import CapExceeded, Digraph, is_oriented

DEFAULT_DENSITY_CAP = 14


@dataclass(frozen=True)
class DensityProfile:
    delta: tuple
    value: Fraction
    support: tuple

    def __post_init__(self):
        if any(x < 0 for x in self.delta) or sum(self.delta, Fraction(0)) != 1:
            raise ValueError("delta must be a probability vector")
        if tuple(v for v, x in enumerate(self.delta) if x > 0) != tuple(self.support):
            raise ValueError("support does not match delta")

    def to_json(self) -> dict:
        return {
            "delta": [str(x) for x in self.delta],
            "value": str(self.value),
            "value_decimal": float(self.value),
            "support": list(self.support),
        }


def objective(d: Digraph, delta) -> Fraction:
    return sum((Fraction(delta[u]) * Fraction(delta[v]) for u, v in d.edges), Fraction(0))


def _solve(a: list, b: list):
    """Exact solve of an integer system (Bareiss elimination); None when singular."""
    n = len(a)
    m = [list(row) + [y] for row, y in zip(a, b)]
    prev = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if m[r][k] != 0), None)
        if piv is None:
            return None
        if piv != k:
            m[k], m[piv] = m[piv], m[k]
        mk = m[k]
        pk = mk[k]
        for i in range(k + 1, n):
            mi = m[i]
            f = mi[k]
            for j in range(k + 1, n + 1):
                mi[j] = (mi[j] * pk - f * mk[j]) // prev
            mi[k] = 0
        prev = pk
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(m[i][n]) - sum((m[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))
        x[i] = s / m[i][i]
    return x


def _rows_of(d: Digraph) -> tuple:
    return d.out_mask


def _drop(rows: tuple, v: int) -> tuple:
    low = (1 << v) - 1
    return tuple(((r >> (v + 1)) << v) | (r & low) for i, r in enumerate(rows) if i != v)


def _interior(rows: tuple):
    """Unique positive stationary point with full support, as (value, delta)."""
    s = len(rows)
    a = [[(rows[i] >> j & 1) + (rows[j] >> i & 1) for j in range(s)] + [-1] for i in range(s)]
    a.append([1] * s + [0])
    sol = _solve(a, [0] * s + [1])
    if sol is None:
        return None
    x, mu = sol[:s], sol[s]
    if any(xi <= 0 for xi in x):
        return None
    return mu / 2, tuple(x)


_memo: dict = {}


def _best(rows: tuple):
    """(value, support, delta-on-support) maximising over all faces; ties go to
    the lexicographically least support."""
    hit = _memo.get(rows)
    if hit is not None:
        return hit
    best = None
    inner = _interior(rows)
    if inner is not None:
        best = (inner[0], tuple(range(len(rows))), inner[1])
    if len(rows) > 1:
        for v in range(len(rows)):
            val, sup, dl = _best(_drop(rows, v))
            sup = tuple(w + (w >= v) for w in sup)
            if best is None or val > best[0] or (val == best[0] and sup < best[1]):
                best = (val, sup, dl)
    if len(_memo) > 2_000_000:
        _memo.clear()
    _memo[rows] = best
    return best


def density(d: Digraph, cap: int = DEFAULT_DENSITY_CAP, require_oriented: bool = False):
    """Exact density and one maximiser."""
    if d.n == 0:
        raise ValueError("density needs at least one vertex")
    if d.n > cap:
        raise CapExceeded(f"|V|={d.n} exceeds exact density cap {cap}")
    if require_oriented and not is_oriented(d):
        raise ValueError("digraph is not oriented")
    value, support, dl = _best(_rows_of(d))
    delta = [Fraction(0)] * d.n
    for v, x in zip(support, dl):
        delta[v] = x
    return value, DensityProfile(tuple(delta), value, tuple(support))


def stationary_points(d: Digraph, cap: int = DEFAULT_DENSITY_CAP) -> list:
    """Every support with a unique positive stationary point: (support, value, delta)."""
    if d.n > cap:
        raise CapExceeded(f"|V|={d.n} exceeds exact density cap {cap}")
    out = []
    for s in range(1, d.n + 1):
        for sub in combinations(range(d.n), s):
            rows = tuple(sum(1 << j for j, w in enumerate(sub) if d.out_mask[u] >> w & 1) for u in sub)
            inner = _interior(rows)
            if inner is not None:
                delta = [Fraction(0)] * d.n
                for v, x in zip(sub, inner[1]):
                    delta[v] = x
                out.append((sub, inner[0], tuple(delta)))
    return out


def densest_supports(d: Digraph, cap: int = DEFAULT_DENSITY_CAP) -> list:
    """All vertex sets that are exactly the support of some density function.

    The maximisers with support inside ``S`` and stationary on all of ``S`` form
    a polytope whose vertices are the basic (minimal-support) maximisers, so
    ``S`` is a support iff those basic maximisers cover ``S``.
    """
    value, _ = density(d, cap)
    basic = []
    for sub, val, delta in stationary_points(d, cap):
        if val != value:
            continue
        grad = [sum(delta[w] for w in _bits(d.out_mask[u])) + sum(delta[w] for w in _bits(d.in_mask[u]))
                for u in range(d.n)]
        tight = sum(1 << u for u in range(d.n) if grad[u] == 2 * value)
        basic.append((sum(1 << v for v in sub), tight))
    found = []
    for mask in range(1, 1 << d.n):
        cover = 0
        for sup, tight in basic:
            if sup & ~mask == 0 and mask & ~tight == 0:
                cover |= sup
        if cover == mask:
            found.append(tuple(_bits(mask)))
    return found


def maximal_densest_supports(d: Digraph, cap: int = DEFAULT_DENSITY_CAP) -> list:
    sups = [frozenset(s) for s in densest_supports(d, cap)]
    return sorted((tuple(sorted(s)) for s in sups if not any(s < t for t in sups)))


# ------------------------------------------------------------- cliques

def _max_clique(adj: list, n: int) -> list:
    best: list = []

    def expand(clique, cand):
        nonlocal best
        if not cand:
            if len(clique) > len(best):
                best = clique
            return
        if len(clique) + bin(cand).count("1") <= len(best):
            return
        pivot = max(_bits(cand), key=lambda v: bin(adj[v] & cand).count("1"))
        for v in list(_bits(cand & ~adj[pivot])):
            expand(clique + [v], cand & adj[v])
            cand &= ~(1 << v)
            if len(clique) + bin(cand).count("1") <= len(best):
                return
        if len(clique) > len(best):
            best = clique

    expand([], (1 << n) - 1)
    return sorted(best)


def max_oriented_clique(d: Digraph):
    """Largest vertex set pairwise joined by exactly one arc, with a witness."""
    if not is_oriented(d):
        raise ValueError("max_oriented_clique needs an oriented graph")
    adj = [d.out_mask[v] | d.in_mask[v] for v in range(d.n)]
    clique = _max_clique(adj, d.n) if d.n else []
    return len(clique), tuple(clique)


def clique_number_brute_force(d: Digraph) -> int:
    und = {frozenset(e) for e in d.edges if e[0] != e[1]}
    for k in range(d.n, 0, -1):
        for sub in combinations(range(d.n), k):
            if all(frozenset(p) in und for p in combinations(sub, 2)):
                return k
    return 0


# ----------------------------------------------------------- blow-ups

@dataclass(frozen=True)
class BlowUpStructure:
    k: int
    classes: tuple
    class_masses: tuple


def blow_up_structure(d: Digraph, profile: DensityProfile) -> BlowUpStructure | None:
    """Split the support of a density function into twin classes of a blown-up clique."""
    if not is_oriented(d):
        raise ValueError("blow-up structure is only defined for oriented graphs")
    delta = profile.delta
    if len(delta) != d.n:
        raise ValueError("profile does not match the digraph")
    value, _ = density(d)
    if objective(d, delta) != value:
        raise ValueError("profile is not a density function of this digraph")
    support = [v for v in range(d.n) if delta[v] > 0]
    adj = [d.out_mask[v] | d.in_mask[v] for v in range(d.n)]
    classes: list = []
    for v in support:
        for cls in classes:
            if not adj[v] >> cls[0] & 1:
                cls.append(v)
                break
        else:
            classes.append([v])
    for i, ci in enumerate(classes):
        if any(adj[u] >> w & 1 for u, w in combinations(ci, 2)):
            return None
        for cj in classes[i + 1:]:
            if any(not adj[u] >> w & 1 for u in ci for w in cj):
                return None
    k = len(classes)
    masses = tuple(sum((delta[v] for v in c), Fraction(0)) for c in classes)
    if any(m != Fraction(1, k) for m in masses):
        return None
    return BlowUpStructure(k, tuple(tuple(c) for c in classes), masses)


# ------------------------------------------------------ finite density

def balanced_composition(n: int, parts: int) -> tuple:
    q, r = divmod(n, parts)
    return tuple(q + 1 if i < r else q for i in range(parts))


def finite_density(d: Digraph, support, n: int):
    """``max sum_{i<j} x_i x_j / n^2`` over compositions of ``n`` into ``|support|`` parts."""
    sup = sorted(set(support))
    if not sup or any(not 0 <= v < d.n for v in sup):
        raise ValueError("support must be a non-empty vertex set")
    if n < 1:
        raise ValueError("n must be positive")
    for u, v in combinations(sup, 2):
        if d.has_edge(u, v) == d.has_edge(v, u):
            raise ValueError("support must induce an orientation of a complete graph")
    if any(d.has_edge(v, v) for v in sup):
        raise ValueError("support must be loopless")
    comp = balanced_composition(n, len(sup))
    pairs = sum(a * b for a, b in combinations(comp, 2))
    return Fraction(pairs, n * n), comp
