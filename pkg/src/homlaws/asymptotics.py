"""Classification pipelines for almost-sure theories.

* undirected ``Forb(F)``: the generic ``(k_F - 1)``-partite graph, with
  ``k_F`` the least chromatic number in ``F``;
* ``Forb(F)`` for oriented trees: build the dual ``D``, let ``l`` be its
  largest oriented clique, check that every densest support of ``D`` is a
  ``T_l`` carrying mass ``1/l`` per vertex, and present the theory of
  ``U_{T_l}`` by orbit sentences and extension axioms;
* general ``Csp(D)``: one component per isomorphism type of maximal densest
  support, weighted by how many labelled digraphs it accounts for.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product as cartesian

from .colored import count_colored, sample_uniform, tournament_order
from .density import _bits, _max_clique, density, densest_supports, maximal_densest_supports
from .duality import DualResult, build_dual
from .homomorphism import (
    are_isomorphic,
    automorphisms,
    core_of,
    count_homs,
    homomorphic,
)
from .logic import (
    ClassSpec, FrequencyRow, TensorModel, evaluate_tensor, extension_axioms, orbit_sentence,
    phi_n_exact, to_text, trial_seeds, uses_colors,
)
from .structures import (
    CapExceeded,
    Digraph,
    UGraph,
    complete_graph,
    induced_subgraph,
    is_oriented,
    transitive_tournament,
)

DEFAULT_CHROMATIC_CAP = 16


# --------------------------------------------------------------- descriptors

@dataclass
class TheoryDescriptor:
    """``kind`` is ``generic_k_partite``, ``U_of_T``, ``component``, ``mixture``,
    ``rado`` or ``empty``; ``params`` holds ``k``, ``ell`` or the support."""

    kind: str
    params: dict = field(default_factory=dict)
    presentation: list = field(default_factory=list)
    components: list = field(default_factory=list)   # (TheoryDescriptor, weight, exact)
    notes: list = field(default_factory=list)

    def weights(self) -> list:
        return [w for _, w, _ in self.components]

    def to_json(self) -> dict:
        out = {"kind": self.kind, "params": _jsonable(self.params)}
        if self.presentation:
            out["presentation"] = [to_text(p) for p in self.presentation]
        if self.components:
            out["components"] = [
                {"theory": c.to_json(), "weight": _num(w), "exact": exact}
                for c, w, exact in self.components
            ]
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _num(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    return x


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, Digraph):
        return obj.to_json()
    return _num(obj)


# --------------------------------------------------------------- undirected

def chromatic_number(h: UGraph, cap: int = DEFAULT_CHROMATIC_CAP) -> int:
    if h.n > cap:
        raise CapExceeded(f"|V|={h.n} exceeds chromatic search cap {cap}")
    if h.n == 0:
        return 0
    adj = h.adj_mask
    order = sorted(range(h.n), key=lambda v: -bin(adj[v]).count("1"))

    def colourable(k):
        col = [-1] * h.n

        def rec(i, used):
            if i == len(order):
                return True
            v = order[i]
            banned = {col[w] for w in _bits(adj[v]) if col[w] >= 0}
            # a fresh colour is only tried once (symmetry breaking)
            for c in range(min(used + 1, k)):
                if c not in banned:
                    col[v] = c
                    if rec(i + 1, max(used, c + 1)):
                        return True
            col[v] = -1
            return False

        return rec(0, 0)

    k = 1
    while not colourable(k):
        k += 1
    return k


def clique_number(h: UGraph) -> int:
    return len(_max_clique(list(h.adj_mask), h.n)) if h.n else 0


@dataclass(frozen=True)
class ChromaticInvariants:
    chi: int
    omega: int
    co_chromatic: int

    def to_json(self) -> dict:
        return {"chi": self.chi, "omega": self.omega, "co_chromatic": self.co_chromatic}


def chromatic_invariants(h: UGraph, cap: int = DEFAULT_CHROMATIC_CAP) -> ChromaticInvariants:
    """Chromatic number, clique number and co-chromatic number ``omega + 1``.

    A ``k``-colourable graph sits inside a complete ``k``-partite graph, which
    maps to ``h`` iff ``K_k`` does; so a graph that is ``k``-colourable but not
    ``h``-colourable exists iff ``k > omega(h)``.
    """
    if h.n == 0:
        raise ValueError("need a non-empty graph")
    chi = chromatic_number(h, cap)
    omega = clique_number(h)
    return ChromaticInvariants(chi, omega, omega + 1)


def co_chromatic_witness(h: UGraph, k: int, pool) -> UGraph | None:
    """A graph in ``pool`` that maps to ``K_k`` but not to ``h``."""
    kk = complete_graph(k).as_digraph()
    hd = h.as_digraph()
    for g in pool:
        gd = g.as_digraph()
        if homomorphic(gd, kk) and not homomorphic(gd, hd):
            return g
    return None


def graph_pool(max_n: int) -> list:
    """One graph per isomorphism class with at most ``max_n <= 7`` vertices."""
    import networkx as nx

    if max_n > 7:
        raise CapExceeded("the graph atlas stops at 7 vertices")
    out = []
    for g in nx.graph_atlas_g():
        if 0 < g.number_of_nodes() <= max_n:
            out.append(UGraph(g.number_of_nodes(), frozenset(g.edges())))
    return out


def classify_undirected(forbidden) -> TheoryDescriptor:
    forbidden = list(forbidden)
    if not forbidden:
        return TheoryDescriptor("rado", notes=["no forbidden graph: all finite graphs"])
    if any(h.n == 0 for h in forbidden):
        raise ValueError("forbidden graphs must be non-empty")
    k = min(chromatic_number(h) for h in forbidden)
    if k == 1:
        return TheoryDescriptor("empty", {"k_F": 1}, notes=["only the empty graph avoids an edgeless graph"])
    return TheoryDescriptor("generic_k_partite", {"k": k - 1, "k_F": k})


# ----------------------------------------------------------- oriented trees

def check_blowup(d: Digraph, ell: int) -> dict:
    """Every densest support of ``d`` induces ``T_ell`` and carries ``1/ell`` per vertex."""
    value, _ = density(d)
    expected = Fraction(ell - 1, 2 * ell)
    supports = densest_supports(d)
    t = transitive_tournament(ell)
    ok_value = value == expected
    ok_support = all(len(s) == ell and are_isomorphic(induced_subgraph(d, s), t) for s in supports)
    # with every support a T_ell, each support holds a unique maximiser
    ok_uniform = ok_support and all(
        density(induced_subgraph(d, s))[1].delta == tuple([Fraction(1, ell)] * ell) for s in supports)
    return {"value": value, "supports": supports,
            "passed": bool(ok_value and ok_support and ok_uniform)}


def u_of_t(ell: int, m: int = 2) -> TheoryDescriptor:
    t = transitive_tournament(ell)
    pres = [orbit_sentence(t)] + [a.sentence for a in extension_axioms(t, m)]
    return TheoryDescriptor("U_of_T", {"ell": ell}, presentation=pres)


@dataclass
class TreeClassification:
    dual: DualResult
    ell: int
    theory: TheoryDescriptor
    blowup: dict

    def to_json(self) -> dict:
        return {
            "dual": self.dual.to_json(),
            "ell": self.ell,
            "blowup_check": {"passed": self.blowup.get("passed"),
                             "density": _num(self.blowup.get("value")),
                             "supports": [list(s) for s in self.blowup.get("supports", [])]},
            "theory": self.theory.to_json(),
        }


def classify_oriented_trees(forest, m: int = 2, **dual_options) -> TreeClassification:
    result = build_dual(forest, **dual_options)
    d = result.dual
    if d.n == 0:
        theory = TheoryDescriptor("empty", {"ell": 0}, notes=["a single vertex maps everywhere"])
        return TreeClassification(result, 0, theory, {"passed": True, "supports": []})
    ell = len(_max_clique([d.out_mask[v] | d.in_mask[v] for v in range(d.n)], d.n))
    check = check_blowup(d, ell)
    if not check["passed"]:
        raise RuntimeError(f"densest supports of the dual are not copies of T_{ell}: {check}")
    return TreeClassification(result, ell, u_of_t(ell, m), check)


# ------------------------------------------------------------------ mixtures

def is_transitive_tournament(g: Digraph) -> bool:
    try:
        tournament_order(g)
    except ValueError:
        return False
    return True


def _exponent_form(g: Digraph) -> Digraph:
    # coloured counts only see A = M + M^T, with a loop counted once
    edges = {(u, v) for u, v in g.edges} | {(v, u) for u, v in g.edges}
    return Digraph(g.n, frozenset(edges))


def same_colored_counts(a: Digraph, b: Digraph) -> bool:
    """Sufficient test that two templates have equal coloured counts for all ``n``.

    Each composition summand depends on the template only through the
    multiset of pairs carrying one or two arcs, so an isomorphism between the
    weighted symmetric forms matches summands one to one.
    """
    if a.n != b.n:
        return False
    def form(g):
        pairs = {}
        for u, v in g.edges:
            key = (min(u, v), max(u, v))
            pairs[key] = pairs.get(key, 0) + 1
        return pairs
    fa, fb = form(a), form(b)
    if sorted(fa.values()) != sorted(fb.values()):
        return False
    from itertools import permutations
    for p in permutations(range(a.n)):
        if all(fb.get((min(p[u], p[v]), max(p[u], p[v])), 0) == c for (u, v), c in fa.items()):
            return True
    return False


def _component_theory(sub: Digraph, support) -> tuple:
    core = core_of(sub)
    if is_transitive_tournament(core):
        desc = u_of_t(core.n)
        desc.params["support"] = list(support)
    else:
        desc = TheoryDescriptor("component", {"support": list(support), "core": core})
    return core, desc


def mixture_decomposition(d: Digraph, mode: str = "csp", estimate_ns=(20, 30, 40),
                          allow_estimate: bool = True) -> TheoryDescriptor:
    """Components of the almost-sure behaviour of ``Csp(D)`` with their weights.

    ``mode="colored"`` weighs components inside the class of D-coloured
    digraphs: each maximal densest support accounts for its coloured count.
    ``mode="csp"`` (default) weighs uncoloured members: a generic member
    coloured through a support ``S`` has one homomorphism per embedding of
    ``S`` onto a maximal densest support, so the coloured weight of an
    isomorphism class of ``r`` supports is divided by ``r |Aut(S)|``.
    """
    if mode not in ("csp", "colored"):
        raise ValueError("mode is 'csp' or 'colored'")
    if d.n == 0:
        raise ValueError("empty template")
    supports = maximal_densest_supports(d)
    groups = []   # [core, descriptor, [(support, sub)]]
    for s in supports:
        sub = induced_subgraph(d, s)
        core, desc = _component_theory(sub, s)
        for g in groups:
            if are_isomorphic(g[0], core) and g[1].kind == desc.kind:
                g[2].append((s, sub))
                break
        else:
            groups.append([core, desc, [(s, sub)]])
    subs = [sub for g in groups for _, sub in g[2]]
    symmetric = all(same_colored_counts(subs[0], s) for s in subs[1:])
    notes = []
    if symmetric:
        colored_w = [Fraction(len(g[2]), len(subs)) for g in groups]
        exact = True
    else:
        if not allow_estimate:
            raise ValueError("component weights are not forced by symmetry and estimation is disabled")
        top = max(estimate_ns)
        per = [sum(count_colored(sub, top) for _, sub in g[2]) for g in groups]
        tot = sum(per)
        colored_w = [p / tot for p in per]
        exact = False
        notes.append(f"weights estimated from coloured counts at n={top}")
    if mode == "colored":
        weights = colored_w
    else:
        # every support equal to its core and an oriented clique: generic
        # members are twin-free blow-ups and all homs are embeddings
        clean = all(sub.n == g[0].n and is_oriented(sub) and 2 * sub.m == sub.n * (sub.n - 1)
                    for g in groups for _, sub in g[2])
        raw = [w / (len(g[2]) * len(automorphisms(g[0], cap=max(10, g[0].n))))
               for w, g in zip(colored_w, groups)]
        if exact and not clean:
            exact = False
            notes.append("hom multiplicities assume twin-free clique supports")
        tot = sum(raw)
        weights = [w / tot for w in raw]
        if not exact:
            weights = [float(w) for w in weights]
    comps = [(g[1], w, exact) for g, w in zip(groups, weights)]
    return TheoryDescriptor("mixture", {"mode": mode, "supports": [list(s) for s in supports]},
                            components=comps, notes=notes)


# ---------------------------------------------------------- sentence limits

def sample_k_partite(k: int, n: int, seed: int) -> UGraph:
    """Uniform labelled ``k``-coloured graph with the colours forgotten."""
    c = sample_uniform(transitive_tournament(k), n, seed)
    return UGraph(n, frozenset(c.graph.edges))


def sample_gnp(n: int, seed: int) -> UGraph:
    rng = random.Random(seed)
    return UGraph(n, frozenset((u, v) for u, v in combinations(range(n), 2) if rng.getrandbits(1)))


def component_sampler(desc: TheoryDescriptor, keep_colors: bool = False):
    if desc.kind == "U_of_T":
        t = transitive_tournament(desc.params["ell"])
    elif desc.kind == "component":
        t = desc.params["core"]
    elif desc.kind == "generic_k_partite":
        return lambda n, seed: sample_k_partite(desc.params["k"], n, seed)
    elif desc.kind == "rado":
        return sample_gnp
    else:
        raise ValueError(f"no sampler for {desc.kind}")

    def draw(n, seed):
        c = sample_uniform(t, n, seed)
        return c if keep_colors else c.graph
    return draw


@dataclass
class LimitReport:
    predicted: object          # Fraction, float, or None when undetermined
    exact: bool
    verdicts: list
    finite_evidence: list

    def to_json(self) -> dict:
        return {
            "predicted": "undetermined" if self.predicted is None else _num(self.predicted),
            "exact": self.exact,
            "verdicts": [v if v is not None else "undetermined" for v in self.verdicts],
            "finite_evidence": [r.to_json() for r in self.finite_evidence],
        }


def component_verdict(phi, desc: TheoryDescriptor, schedule=(50, 100, 200), seeds: int = 20,
                      seed: int = 0):
    """0 or 1 when every sample in the schedule agrees, otherwise None."""
    draw = component_sampler(desc, keep_colors=uses_colors(phi))
    seen = set()
    for n in schedule:
        for s in trial_seeds(seed ^ (n * 0x9E3779B97F4A7C15 & (2 ** 64 - 1)), seeds):
            seen.add(evaluate_tensor(phi, TensorModel(draw(n, s))))
            if len(seen) > 1:
                return None
    return int(seen.pop())


def sentence_limit(phi, desc: TheoryDescriptor, evidence_n=(), evidence_class: ClassSpec | None = None,
                   schedule=(50, 100, 200), seeds: int = 20, seed: int = 0) -> LimitReport:
    if desc.kind == "empty":
        raise ValueError("the class is empty from some size on; no limit")
    comps = desc.components if desc.kind == "mixture" else [(desc, Fraction(1), True)]
    verdicts = [component_verdict(phi, c, schedule, seeds, seed) for c, _, _ in comps]
    exact = all(e for _, _, e in comps)
    if any(v is None for v in verdicts):
        predicted = None
    else:
        predicted = sum((w * v for (_, w, _), v in zip(comps, verdicts)), Fraction(0) if exact else 0.0)
    evidence = [phi_n_exact(evidence_class, phi, n) for n in evidence_n] if evidence_class else []
    return LimitReport(predicted, exact, verdicts, evidence)


# ------------------------------------------------------ finite-size shadows

def _bipartite(adj: list, n: int) -> bool:
    side = [-1] * n
    for s in range(n):
        if side[s] >= 0:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for w in _bits(adj[u]):
                if side[w] < 0:
                    side[w] = 1 - side[u]
                    stack.append(w)
                elif side[w] == side[u]:
                    return False
    return True


def triangle_free_counts(n: int, cap: int = 8) -> tuple:
    """Labelled triangle-free graphs on ``n`` vertices and the bipartite ones among them.

    Vertex ``v`` is added with any independent set of ``0..v-1`` as its
    neighbourhood, which yields each triangle-free graph exactly once.
    """
    if n > cap:
        raise CapExceeded(f"n={n} exceeds cap {cap}")
    total = bip = 0

    def rec(adj):
        nonlocal total, bip
        v = len(adj)
        if v == n:
            total += 1
            bip += _bipartite(adj, n)
            return
        for mask in range(1 << v):
            if any(adj[u] & mask for u in _bits(mask)):
                continue
            new = [a | (1 << v if mask >> u & 1 else 0) for u, a in enumerate(adj)]
            rec(new + [mask])

    rec([])
    return total, bip


def bipartite_fraction(n: int) -> Fraction:
    total, bip = triangle_free_counts(n)
    return Fraction(bip, total)


def csp_members(d: Digraph, n: int) -> set:
    """Labelled members of ``Csp(D)`` on ``n`` vertices as edge sets, built from colourings."""
    out = set()
    for color in cartesian(range(d.n), repeat=n):
        allowed = [(a, b) for a in range(n) for b in range(n) if (color[a], color[b]) in d.edges]
        for mask in range(1 << len(allowed)):
            out.add(frozenset(allowed[j] for j in range(len(allowed)) if mask >> j & 1))
    return out


def unique_hom_fraction(d: Digraph, n: int) -> tuple:
    """(members, members with exactly one hom to ``d``, fraction) at size ``n``."""
    members = csp_members(d, n)
    one = sum(1 for e in members if count_homs(Digraph(n, e), d) == 1)
    return len(members), one, (Fraction(one, len(members)) if members else None)


def class_size(cls: ClassSpec, n: int) -> int:
    return sum(1 for _ in cls.members(n))


def co_chromatic_check(graphs, pool) -> list:
    """For each ``h``: (h, witness at k = omega+1 found, no witness for any k <= omega)."""
    prepared = sorted(((chromatic_number(g), g.n, len(g.edges), g.as_digraph()) for g in pool),
                      key=lambda t: t[:3])
    out = []
    for h in graphs:
        w = clique_number(h)
        hd = h.as_digraph()
        up = next((gd for chi, _, _, gd in prepared if chi <= w + 1 and not homomorphic(gd, hd)), None)
        down = not any(chi <= w and not homomorphic(gd, hd) for chi, _, _, gd in prepared)
        out.append((h, up is not None, down))
    return out
