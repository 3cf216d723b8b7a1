"""Finite digraphs, undirected graphs and the constructions used throughout.

Vertices are always ``0..n-1``.  Digraphs may carry loops and 2-cycles; the
``loopless``/``oriented`` flags of :func:`enumerate_digraphs` restrict that
when a class of interest needs it.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence


class CapExceeded(ValueError):
    """Raised when a request exceeds a configured enumeration/search cap."""


@dataclass(frozen=True)
class Digraph:
    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        edges = frozenset((int(u), int(v)) for u, v in self.edges)
        for u, v in edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u},{v}) out of range for n={self.n}")
        object.__setattr__(self, "edges", edges)

    # adjacency as bitmasks; the hom search works on these
    @cached_property
    def out_mask(self) -> tuple:
        m = [0] * self.n
        for u, v in self.edges:
            m[u] |= 1 << v
        return tuple(m)

    @cached_property
    def in_mask(self) -> tuple:
        m = [0] * self.n
        for u, v in self.edges:
            m[v] |= 1 << u
        return tuple(m)

    def out_neighbours(self, v: int) -> set:
        return {w for w in range(self.n) if self.out_mask[v] >> w & 1}

    def in_neighbours(self, v: int) -> set:
        return {w for w in range(self.n) if self.in_mask[v] >> w & 1}

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    @property
    def m(self) -> int:
        return len(self.edges)

    def sorted_edges(self) -> list:
        return sorted(self.edges)

    def __repr__(self):
        return f"Digraph(n={self.n}, edges={self.sorted_edges()})"

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.sorted_edges()]}

    @classmethod
    def from_json(cls, obj) -> "Digraph":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj["n"]), frozenset(tuple(e) for e in obj.get("edges", [])))

    def to_edge_list(self) -> str:
        lines = [f"{self.n} {self.m}"] + [f"{u} {v}" for u, v in self.sorted_edges()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_edge_list(cls, text: str) -> "Digraph":
        rows = [ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
        if not rows:
            raise ValueError("empty edge list")
        n, m = int(rows[0][0]), int(rows[0][1])
        edges = [(int(a), int(b)) for a, b in rows[1:]]
        if len(edges) != m:
            raise ValueError(f"header announces {m} edges, found {len(edges)}")
        return cls(n, frozenset(edges))

    def to_dot(self, name: str = "D", colors: Sequence[int] | None = None) -> str:
        out = [f"digraph {name} {{"]
        for v in range(self.n):
            label = f'{v}' if colors is None else f'{v}:{colors[v]}'
            out.append(f'  {v} [label="{label}"];')
        for u, v in self.sorted_edges():
            out.append(f"  {u} -> {v};")
        out.append("}")
        return "\n".join(out) + "\n"


@dataclass(frozen=True)
class UGraph:
    n: int
    edges: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        norm = set()
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError("undirected graphs have no loops")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {{{u},{v}}} out of range for n={self.n}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))

    @cached_property
    def adj_mask(self) -> tuple:
        m = [0] * self.n
        for u, v in self.edges:
            m[u] |= 1 << v
            m[v] |= 1 << u
        return tuple(m)

    def as_digraph(self) -> Digraph:
        """The symmetric irreflexive digraph corresponding to this graph."""
        return Digraph(self.n, frozenset(self.edges) | {(v, u) for u, v in self.edges})

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in sorted(self.edges)], "undirected": True}

    @classmethod
    def from_json(cls, obj) -> "UGraph":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(int(obj["n"]), frozenset(tuple(e) for e in obj.get("edges", [])))

    def to_dot(self, name: str = "G") -> str:
        out = [f"graph {name} {{"] + [f"  {v};" for v in range(self.n)]
        out += [f"  {u} -- {v};" for u, v in sorted(self.edges)]
        return "\n".join(out + ["}"]) + "\n"


@dataclass(frozen=True)
class OrientedForest:
    """A finite set of oriented trees (the forbidden set of a tree duality)."""

    trees: tuple

    def __post_init__(self):
        trees = tuple(self.trees)
        for t in trees:
            if not classify(t)["is_oriented_tree"]:
                raise ValueError(f"not an oriented tree: {t!r}")
        object.__setattr__(self, "trees", trees)

    def __iter__(self):
        return iter(self.trees)

    def __len__(self):
        return len(self.trees)

    def to_json(self) -> list:
        return [t.to_json() for t in self.trees]

    @classmethod
    def from_json(cls, obj) -> "OrientedForest":
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(tuple(Digraph.from_json(t) for t in obj))


# ---------------------------------------------------------------- named graphs

def transitive_tournament(k: int) -> Digraph:
    return Digraph(k, frozenset((i, j) for i in range(k) for j in range(i + 1, k)))


def directed_path(k: int) -> Digraph:
    """Path on ``k`` vertices with arcs ``i -> i+1``."""
    return Digraph(k, frozenset((i, i + 1) for i in range(k - 1)))


def directed_cycle(k: int) -> Digraph:
    """Arcs ``(u, v)`` with ``u = v + 1 (mod k)``."""
    return Digraph(k, frozenset(((v + 1) % k, v) for v in range(k)))


def complete_graph(k: int) -> UGraph:
    return UGraph(k, frozenset(itertools.combinations(range(k), 2)))


def cycle_graph(k: int) -> UGraph:
    if k < 3:
        raise ValueError("undirected cycles need at least 3 vertices")
    return UGraph(k, frozenset((i, (i + 1) % k) for i in range(k)))


def mycielskian(g: UGraph) -> UGraph:
    n = g.n
    edges = set(g.edges)
    for u, v in g.edges:
        edges.add((u, n + v))
        edges.add((v, n + u))
    for i in range(n):
        edges.add((n + i, 2 * n))
    return UGraph(2 * n + 1, frozenset(edges))


def grotzsch() -> UGraph:
    return mycielskian(cycle_graph(5))


def symmetric_digraph(g: UGraph) -> Digraph:
    return g.as_digraph()


def make_named(kind: str, k: int = 1):
    if kind == "grotzsch":
        return grotzsch()
    if k < 1:
        raise ValueError("k must be at least 1")
    makers = {
        "transitive_tournament": transitive_tournament,
        "directed_path": directed_path,
        "directed_cycle": directed_cycle,
        "complete": complete_graph,
        "cycle": cycle_graph,
    }
    try:
        return makers[kind](k)
    except KeyError:
        raise ValueError(f"unknown graph kind {kind!r}") from None


# --------------------------------------------------------------- operations

def disjoint_union(*graphs: Digraph) -> Digraph:
    off, edges = 0, set()
    for g in graphs:
        edges.update((u + off, v + off) for u, v in g.edges)
        off += g.n
    return Digraph(off, frozenset(edges))


def product_vertices(g1: Digraph, g2: Digraph) -> list:
    """Vertex ``i`` of ``product(g1, g2)`` is ``product_vertices(g1, g2)[i]``."""
    return [(a, b) for a in range(g1.n) for b in range(g2.n)]


def product(g1: Digraph, g2: Digraph) -> Digraph:
    """Categorical product: ``(a1,a2) -> (b1,b2)`` iff ``a1 -> b1`` and ``a2 -> b2``."""
    n2 = g2.n
    edges = frozenset(
        (a1 * n2 + a2, b1 * n2 + b2) for a1, b1 in g1.edges for a2, b2 in g2.edges
    )
    return Digraph(g1.n * n2, edges)


def blow_up(g: Digraph, mult: Sequence[int]) -> Digraph:
    """Replace vertex ``v`` by ``mult[v]`` twins; copies of ``v`` are numbered consecutively."""
    if len(mult) != g.n:
        raise ValueError("need one multiplicity per vertex")
    if any(m < 1 for m in mult):
        raise ValueError("multiplicities must be positive")
    start = list(itertools.accumulate([0] + list(mult)))
    copies = [range(start[v], start[v + 1]) for v in range(g.n)]
    edges = frozenset(
        (a, b) for u, v in g.edges for a in copies[u] for b in copies[v] if u != v or a == b
    )
    return Digraph(start[-1], edges)


def induced_subgraph(g: Digraph, vertices: Iterable[int]) -> Digraph:
    """Induced subgraph, relabelled in increasing order of the kept vertices."""
    vs = sorted(set(vertices))
    if any(not 0 <= v < g.n for v in vs):
        raise ValueError("vertex subset out of range")
    index = {v: i for i, v in enumerate(vs)}
    return Digraph(len(vs), frozenset((index[u], index[v]) for u, v in g.edges
                                      if u in index and v in index))


def delete_vertex(g: Digraph, v: int) -> Digraph:
    if not 0 <= v < g.n:
        raise ValueError("vertex out of range")
    return induced_subgraph(g, [w for w in range(g.n) if w != v])


def underlying(g: Digraph) -> UGraph:
    return UGraph(g.n, frozenset((u, v) for u, v in g.edges if u != v))


def relabel(g: Digraph, perm: Sequence[int]) -> Digraph:
    """Image of ``g`` under the bijection ``v -> perm[v]``."""
    return Digraph(g.n, frozenset((perm[u], perm[v]) for u, v in g.edges))


def combine(op: str, *args):
    ops = {
        "disjoint_union": disjoint_union,
        "product": product,
        "blow_up": blow_up,
        "induced_subgraph": induced_subgraph,
        "delete_vertex": delete_vertex,
        "underlying": underlying,
    }
    if op not in ops:
        raise ValueError(f"unknown operation {op!r}")
    return ops[op](*args)


# ----------------------------------------------------------- classification

def weak_components(g: Digraph) -> list:
    """Vertex sets of the weakly connected components, in order of least vertex."""
    seen, comps = set(), []
    for s in range(g.n):
        if s in seen:
            continue
        comp, stack = {s}, [s]
        while stack:
            v = stack.pop()
            nb = g.out_mask[v] | g.in_mask[v]
            w = 0
            while nb:
                if nb & 1 and w not in comp:
                    comp.add(w)
                    stack.append(w)
                nb >>= 1
                w += 1
        seen |= comp
        comps.append(sorted(comp))
    return comps


def has_directed_cycle(g: Digraph) -> bool:
    indeg = [bin(g.in_mask[v]).count("1") for v in range(g.n)]
    if any(g.has_edge(v, v) for v in range(g.n)):
        return True
    queue = [v for v in range(g.n) if indeg[v] == 0]
    done = 0
    while queue:
        v = queue.pop()
        done += 1
        for w in g.out_neighbours(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return done < g.n


def is_oriented(g: Digraph) -> bool:
    return all(u != v and (v, u) not in g.edges for u, v in g.edges)


def classify(g: Digraph) -> dict:
    oriented = is_oriented(g)
    tree = oriented and g.n >= 1 and len(g.edges) == g.n - 1 and len(weak_components(g)) == 1
    return {
        "is_oriented": oriented,
        "is_oriented_tree": tree,
        "is_acyclic": not has_directed_cycle(g),
        "is_symmetric_irreflexive": all((v, u) in g.edges and u != v for u, v in g.edges),
    }


# -------------------------------------------------------------- enumeration

DEFAULT_ENUM_CAP = 5
DEFAULT_LOOPLESS_CAP = 6


def _pairs(n: int, loopless: bool, oriented: bool) -> list:
    if oriented:
        return list(itertools.combinations(range(n), 2))
    return [(u, v) for u in range(n) for v in range(n) if not (loopless and u == v)]


def count_digraphs(n: int, loopless: bool = False, oriented: bool = False) -> int:
    if oriented:
        return 3 ** (n * (n - 1) // 2)
    return 2 ** len(_pairs(n, loopless, False))


def enumerate_digraphs(n: int, loopless: bool = False, oriented: bool = False,
                       cap: int | None = None, override: bool = False) -> Iterator[Digraph]:
    """Every labelled digraph on ``0..n-1`` exactly once.

    Order: the candidate pairs are listed row-major (``(u, v)`` by ``u`` then
    ``v``, loops skipped when ``loopless``); digraph number ``i`` contains pair
    ``j`` iff bit ``j`` of ``i`` is set.  With ``oriented`` each unordered pair
    ``u < v`` takes one of three states (absent, ``u->v``, ``v->u``) read as the
    base-3 digits of the running index.
    """
    if cap is None:
        cap = DEFAULT_LOOPLESS_CAP if (loopless or oriented) else DEFAULT_ENUM_CAP
    if n > cap and not override:
        raise CapExceeded(f"n={n} exceeds enumeration cap {cap}")
    pairs = _pairs(n, loopless, oriented)
    if oriented:
        for digits in itertools.product((0, 1, 2), repeat=len(pairs)):
            edges = []
            for (u, v), d in zip(reversed(pairs), digits):
                if d == 1:
                    edges.append((u, v))
                elif d == 2:
                    edges.append((v, u))
            yield Digraph(n, frozenset(edges))
        return
    m = len(pairs)
    for mask in range(1 << m):
        yield Digraph(n, frozenset(pairs[j] for j in range(m) if mask >> j & 1))


def enumerate_ugraphs(n: int, cap: int = 7, override: bool = False) -> Iterator[UGraph]:
    if n > cap and not override:
        raise CapExceeded(f"n={n} exceeds enumeration cap {cap}")
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield UGraph(n, frozenset(pairs[j] for j in range(len(pairs)) if mask >> j & 1))


def all_oriented_trees(max_n: int) -> list:
    """One representative per isomorphism class of oriented trees with 1..max_n vertices."""
    from .homomorphism import are_isomorphic

    reps = []
    for n in range(1, max_n + 1):
        found = []
        pairs = list(itertools.combinations(range(n), 2))
        for chosen in itertools.combinations(pairs, n - 1):
            base = UGraph(n, frozenset(chosen))
            if len(weak_components(base.as_digraph())) != 1:
                continue
            for flips in itertools.product((False, True), repeat=n - 1):
                t = Digraph(n, frozenset((v, u) if f else (u, v) for (u, v), f in zip(chosen, flips)))
                if not any(are_isomorphic(t, r) for r in found):
                    found.append(t)
        reps.extend(found)
    return reps


def load_graph(text: str):
    """Parse JSON (digraph, ``"undirected": true`` for graphs) or the edge-list format."""
    s = text.strip()
    if s.startswith("{"):
        obj = json.loads(s)
        return UGraph.from_json(obj) if obj.get("undirected") else Digraph.from_json(obj)
    return Digraph.from_edge_list(text)
