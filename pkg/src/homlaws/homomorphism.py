"""Homomorphism search, counting, cores, automorphisms, pp-definitions of orbits
and dismantling.

Domains are bitmasks over target vertices.  A search first makes the domains
arc consistent along every source edge, then backtracks with forward checking;
values are tried in increasing order, so the first witness returned is the
lexicographically least one in search order and results are deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import permutations
from math import prod
from typing import Iterator, Mapping, Sequence

from .structures import CapExceeded, Digraph, induced_subgraph, product, weak_components


@dataclass(frozen=True)
class Hom:
    source: Digraph
    target: Digraph
    map: tuple

    def __post_init__(self):
        if len(self.map) != self.source.n:
            raise ValueError("map must be total on the source")
        if not is_hom(self.source, self.target, self.map):
            raise ValueError("map does not preserve edges")

    def __call__(self, v):
        return self.map[v]

    def compose(self, other: "Hom") -> "Hom":
        """``other`` after ``self``."""
        return Hom(self.source, other.target, tuple(other.map[a] for a in self.map))


def is_hom(g: Digraph, h: Digraph, f: Sequence[int]) -> bool:
    return all((f[u], f[v]) in h.edges for u, v in g.edges)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _order(g: Digraph, verts: Sequence[int]) -> list:
    """Variables ordered so each has as many earlier neighbours as possible."""
    deg = {v: bin(g.out_mask[v] | g.in_mask[v]).count("1") for v in verts}
    left, order, placed = set(verts), [], 0
    while left:
        v = max(left, key=lambda x: (bin((g.out_mask[x] | g.in_mask[x]) & placed).count("1"),
                                     deg[x], -x))
        order.append(v)
        left.discard(v)
        placed |= 1 << v
    return order


def _initial_domains(g: Digraph, h: Digraph, verts, fixed) -> dict | None:
    full = (1 << h.n) - 1
    loops = sum(1 << a for a in range(h.n) if h.out_mask[a] >> a & 1)
    has_out = sum(1 << a for a in range(h.n) if h.out_mask[a])
    has_in = sum(1 << a for a in range(h.n) if h.in_mask[a])
    dom = {}
    for v in verts:
        d = full
        if g.out_mask[v] >> v & 1:
            d &= loops
        if g.out_mask[v]:
            d &= has_out
        if g.in_mask[v]:
            d &= has_in
        if fixed and v in fixed:
            d &= 1 << fixed[v]
        if not d:
            return None
        dom[v] = d
    return dom


def _arc_consistency(g: Digraph, h: Digraph, dom: dict, verts) -> bool:
    vset = set(verts)
    arcs = [(u, w) for u, w in g.edges if u in vset and u != w]
    changed = True
    while changed:
        changed = False
        for u, w in arcs:
            du, dw = dom[u], dom[w]
            nu = 0
            for a in _bits(du):
                if h.out_mask[a] & dw:
                    nu |= 1 << a
            nw = 0
            for b in _bits(dw):
                if h.in_mask[b] & nu:
                    nw |= 1 << b
            if nu != du or nw != dw:
                if not nu or not nw:
                    return False
                dom[u], dom[w] = nu, nw
                changed = True
    return True


def _search(g: Digraph, h: Digraph, verts, fixed=None, injective=False, count=False):
    """Backtracking over the source vertices ``verts`` (a union of components).

    Returns the number of homs when ``count`` else the first assignment dict
    (or None).
    """
    dom0 = _initial_domains(g, h, verts, fixed)
    if dom0 is None or not _arc_consistency(g, h, dom0, verts):
        return 0 if count else None
    order = _order(g, verts)
    pos = {v: i for i, v in enumerate(order)}
    outs = [[w for w in _bits(g.out_mask[v]) if w != v and w in pos and pos[w] > pos[v]]
            for v in order]
    ins = [[w for w in _bits(g.in_mask[v]) if w != v and w in pos and pos[w] > pos[v]]
           for v in order]
    outs = [[pos[w] for w in ws] for ws in outs]
    ins = [[pos[w] for w in ws] for ws in ins]
    k = len(order)
    assign = [0] * k
    hout, hin = h.out_mask, h.in_mask

    def rec(i, dom):
        if i == k:
            return 1
        total = 0
        mask = dom[i]
        while mask:
            low = mask & -mask
            a = low.bit_length() - 1
            mask ^= low
            nd = list(dom)
            ok = True
            oa, ia = hout[a], hin[a]
            for j in outs[i]:
                nd[j] &= oa
                if not nd[j]:
                    ok = False
                    break
            if ok:
                for j in ins[i]:
                    nd[j] &= ia
                    if not nd[j]:
                        ok = False
                        break
            if ok and injective:
                for j in range(i + 1, k):
                    nd[j] &= ~low
                    if not nd[j]:
                        ok = False
                        break
            if not ok:
                continue
            assign[i] = a
            r = rec(i + 1, nd)
            if count:
                total += r
            elif r:
                return 1
        return total

    found = rec(0, [dom0[v] for v in order])
    if count:
        return found
    if not found:
        return None
    return {order[i]: assign[i] for i in range(k)}


def find_hom(g: Digraph, h: Digraph, fixed: Mapping[int, int] | None = None) -> Hom | None:
    """A homomorphism ``g -> h`` (agreeing with ``fixed``), or None."""
    if g.n == 0:
        return Hom(g, h, ())
    result = {}
    for comp in weak_components(g):
        part = _search(g, h, comp, fixed=fixed)
        if part is None:
            return None
        result.update(part)
    return Hom(g, h, tuple(result[v] for v in range(g.n)))


def homomorphic(g: Digraph, h: Digraph) -> bool:
    if g.n == 0:
        return True
    return all(_search(g, h, comp) is not None for comp in weak_components(g))


def count_homs(g: Digraph, h: Digraph, fixed: Mapping[int, int] | None = None) -> int:
    return prod(_search(g, h, comp, fixed=fixed, count=True) for comp in weak_components(g))


def iter_homs(g: Digraph, h: Digraph) -> Iterator[tuple]:
    """All homomorphisms by brute force; only for tiny inputs and tests."""
    from itertools import product as cartesian

    for f in cartesian(range(h.n), repeat=g.n):
        if is_hom(g, h, f):
            yield f


def hom_equivalent(g: Digraph, h: Digraph) -> bool:
    return homomorphic(g, h) and homomorphic(h, g)


# -------------------------------------------------------------------- cores

def core_vertices(g: Digraph) -> list:
    """Vertex set of an induced subgraph of ``g`` that is a core of ``g``.

    Repeatedly looks for an endomorphism avoiding some vertex ``v`` (least
    ``v`` first) and shrinks to its image.
    """
    current = list(range(g.n))
    progress = True
    while progress:
        progress = False
        sub = induced_subgraph(g, current)
        for i in range(sub.n):
            rest = [j for j in range(sub.n) if j != i]
            f = find_hom(sub, induced_subgraph(sub, rest))
            if f is not None:
                image = sorted({rest[a] for a in f.map})
                current = [current[j] for j in image]
                progress = True
                break
    return current


def core_of(g: Digraph) -> Digraph:
    return induced_subgraph(g, core_vertices(g))


def is_core(g: Digraph) -> bool:
    return all(find_hom(g, induced_subgraph(g, [j for j in range(g.n) if j != i])) is None
               for i in range(g.n))


# ------------------------------------------------------ automorphisms / iso

DEFAULT_AUT_CAP = 10


def _degree_key(g: Digraph, v: int):
    return (bin(g.out_mask[v]).count("1"), bin(g.in_mask[v]).count("1"), g.out_mask[v] >> v & 1)


def _isomorphisms(g: Digraph, h: Digraph, first_only: bool):
    if g.n != h.n or g.m != h.m:
        return []
    if g.n == 0:
        return [()]
    # injective + equal edge count => isomorphism; pin degree profiles first
    keys_h = [_degree_key(h, a) for a in range(h.n)]
    if sorted(keys_h) != sorted(_degree_key(g, v) for v in range(g.n)):
        return []
    full = list(range(g.n))
    found = []
    order = _order(g, full)
    pos = {v: i for i, v in enumerate(order)}
    succ = [[pos[w] for w in _bits(g.out_mask[v]) if w != v and pos[w] > pos[v]] for v in order]
    pred = [[pos[w] for w in _bits(g.in_mask[v]) if w != v and pos[w] > pos[v]] for v in order]
    earlier_out = [[pos[w] for w in _bits(g.out_mask[v]) if w != v and pos[w] < pos[v]] for v in order]
    earlier_in = [[pos[w] for w in _bits(g.in_mask[v]) if w != v and pos[w] < pos[v]] for v in order]
    k = len(order)
    assign = [0] * k
    dom0 = [sum(1 << a for a in range(h.n) if keys_h[a] == _degree_key(g, v)) for v in order]

    def rec(i, dom):
        if i == k:
            found.append(tuple(assign[pos[v]] for v in range(g.n)))
            return first_only
        mask = dom[i]
        while mask:
            low = mask & -mask
            a = low.bit_length() - 1
            mask ^= low
            # non-edges must be preserved too, towards already placed vertices
            if any((h.out_mask[a] >> assign[j] & 1) != 1 for j in earlier_out[i]):
                continue
            if any((h.in_mask[a] >> assign[j] & 1) != 1 for j in earlier_in[i]):
                continue
            placed_out = sum(1 for j in range(i) if h.out_mask[a] >> assign[j] & 1)
            if placed_out != len(earlier_out[i]):
                continue
            placed_in = sum(1 for j in range(i) if h.in_mask[a] >> assign[j] & 1)
            if placed_in != len(earlier_in[i]):
                continue
            nd = list(dom)
            ok = True
            for j in succ[i]:
                nd[j] &= h.out_mask[a]
                ok = ok and bool(nd[j])
            for j in pred[i]:
                nd[j] &= h.in_mask[a]
                ok = ok and bool(nd[j])
            for j in range(i + 1, k):
                nd[j] &= ~low
                ok = ok and bool(nd[j])
            if not ok:
                continue
            assign[i] = a
            if rec(i + 1, nd):
                return True
        return False

    rec(0, dom0)
    return found


def are_isomorphic(g: Digraph, h: Digraph) -> bool:
    return bool(_isomorphisms(g, h, first_only=True))


def find_isomorphism(g: Digraph, h: Digraph) -> tuple | None:
    found = _isomorphisms(g, h, first_only=True)
    return found[0] if found else None


def automorphisms(g: Digraph, cap: int = DEFAULT_AUT_CAP) -> list:
    if g.n > cap:
        raise CapExceeded(f"|V|={g.n} exceeds automorphism cap {cap}")
    return [Hom(g, g, f) for f in _isomorphisms(g, g, first_only=False)]


def automorphisms_brute_force(g: Digraph) -> list:
    return [p for p in permutations(range(g.n))
            if all((p[u], p[v]) in g.edges for u, v in g.edges)]


def orbits(g: Digraph, cap: int = DEFAULT_AUT_CAP) -> list:
    auts = automorphisms(g, cap)
    seen, result = set(), []
    for v in range(g.n):
        if v not in seen:
            orb = sorted({a.map[v] for a in auts})
            seen.update(orb)
            result.append(orb)
    return result


def is_rigid(g: Digraph, cap: int = DEFAULT_AUT_CAP) -> bool:
    return len(automorphisms(g, cap)) == 1


# ------------------------------------------------------- pp orbit formulas

@dataclass(frozen=True)
class PPFormula:
    """``exists quantified_variables . AND atoms`` with one free variable."""

    free_variable: str
    quantified_variables: tuple
    atoms: tuple

    def __post_init__(self):
        declared = {self.free_variable, *self.quantified_variables}
        for a, b in self.atoms:
            if a not in declared or b not in declared:
                raise ValueError(f"atom E({a},{b}) uses an undeclared variable")

    def variables(self) -> list:
        return [self.free_variable, *self.quantified_variables]

    def to_sexpr(self) -> str:
        atoms = " ".join(f"(E {a} {b})" for a, b in self.atoms)
        qs = " ".join(self.quantified_variables)
        return f"(pp ({self.free_variable}) (exists ({qs}) (and {atoms})))"

    @classmethod
    def from_sexpr(cls, text: str) -> "PPFormula":
        m = re.fullmatch(r"\s*\(pp \((\w+)\) \(exists \(([\w ]*)\) \(and ?(.*)\)\)\)\s*", text)
        if not m:
            raise ValueError(f"not a pp s-expression: {text!r}")
        atoms = tuple(tuple(p) for p in re.findall(r"\(E (\w+) (\w+)\)", m.group(3)))
        return cls(m.group(1), tuple(m.group(2).split()), atoms)

    def canonical_database(self) -> Digraph:
        index = {v: i for i, v in enumerate(self.variables())}
        return Digraph(len(index), frozenset((index[a], index[b]) for a, b in self.atoms))


def canonical_orbit_formula(d: Digraph, u: int, check_core: bool = True) -> PPFormula:
    """The conjunctive query of ``d`` with vertex ``u`` left free."""
    if not 0 <= u < d.n:
        raise ValueError("vertex out of range")
    if check_core and not is_core(d):
        raise ValueError("orbit formulas are only guaranteed for cores")
    name = {v: ("x" if v == u else f"y{v}") for v in range(d.n)}
    return PPFormula(
        "x",
        tuple(name[v] for v in range(d.n) if v != u),
        tuple((name[a], name[b]) for a, b in sorted(d.edges)),
    )


def evaluate_pp(phi: PPFormula, g: Digraph) -> set:
    """Vertices of ``g`` satisfying ``phi`` (Chandra-Merlin: a hom of the query)."""
    q = phi.canonical_database()
    return {a for a in range(g.n) if find_hom(q, g, fixed={0: a}) is not None}


# -------------------------------------------------------------- dismantling

@dataclass(frozen=True)
class DismantleOrder:
    """Witness that ``A`` dismantles into ``B``.

    ``folds`` are the single-vertex folds as performed, ``(y, z)`` meaning ``y``
    was folded onto ``z`` in the graph still present at that step.
    ``removed`` lists the same vertices with their targets pushed into ``B``.
    """

    folds: tuple
    removed: tuple

    def retraction(self, n: int) -> tuple:
        r = list(range(n))
        for y, z in self.removed:
            r[y] = z
        return tuple(r)


def fold_ok(a: Digraph, alive: int, y: int, z: int) -> bool:
    """Whether ``y -> z``, identity elsewhere, maps ``A[alive]`` into ``A[alive - y]``."""
    yb = 1 << y
    outs = a.out_mask[y] & alive & ~yb
    ins = a.in_mask[y] & alive & ~yb
    if outs & ~a.out_mask[z] or ins & ~a.in_mask[z]:
        return False
    return not (a.out_mask[y] >> y & 1) or bool(a.out_mask[z] >> z & 1)


DEFAULT_DISMANTLE_BUDGET = 100_000


def dismantles_to(a: Digraph, b_vertices, budget: int = DEFAULT_DISMANTLE_BUDGET) -> DismantleOrder | None:
    """Greedy single-vertex folding of ``A`` onto the vertex set ``B``.

    When the greedy pass stalls, backtracks over which foldable vertex to remove
    (at most ``budget`` states; failed states are memoized).
    """
    b = sorted(set(b_vertices))
    if any(not 0 <= v < a.n for v in b):
        raise ValueError("B must be a set of vertices of A")
    bmask = sum(1 << v for v in b)
    full = (1 << a.n) - 1
    dead = set()
    explored = 0

    def foldable(alive):
        for y in _bits(alive & ~bmask):
            for z in _bits(alive & ~(1 << y)):
                if fold_ok(a, alive, y, z):
                    yield y, z
                    break

    def rec(alive, path):
        nonlocal explored
        if alive == bmask:
            return path
        if alive in dead or explored >= budget:
            return None
        explored += 1
        for y, z in foldable(alive):
            res = rec(alive & ~(1 << y), path + [(y, z)])
            if res is not None:
                return res
        dead.add(alive)
        return None

    import sys

    old = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old, a.n + 1000))
    try:
        path = rec(full, [])
    finally:
        sys.setrecursionlimit(old)
    if path is None:
        return None
    final = {}
    for y, z in reversed(path):
        final[y] = final.get(z, z)
    return DismantleOrder(tuple(path), tuple((y, final[y]) for y, _ in path))


def square_dismantles_to_diagonal(d: Digraph, budget: int = DEFAULT_DISMANTLE_BUDGET) -> DismantleOrder | None:
    sq = product(d, d)
    return dismantles_to(sq, [v * d.n + v for v in range(d.n)], budget)
