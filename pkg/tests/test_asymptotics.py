from fractions import Fraction
from itertools import combinations, product as cartesian

import networkx as nx
import pytest
from hypothesis import given, strategies as st

from homlaws.asymptotics import (
    TheoryDescriptor, check_blowup, chromatic_invariants, chromatic_number, classify_oriented_trees,
    classify_undirected, clique_number, co_chromatic_check, csp_members, graph_pool,
    mixture_decomposition, same_colored_counts, sentence_limit, triangle_free_counts,
    unique_hom_fraction,
)
from homlaws.colored import count_colored
from homlaws.logic import ClassSpec, Top, evaluate, parse
from homlaws.structures import (
    CapExceeded, Digraph, UGraph, all_oriented_trees, complete_graph, cycle_graph, directed_cycle,
    directed_path, disjoint_union, enumerate_digraphs, enumerate_ugraphs, grotzsch, transitive_tournament,
)
from oracles import brute_count_homs, brute_is_hom

T3_QUERY = parse("exists a b c. E(a,b) & E(b,c) & E(a,c)")


@st.composite
def ugraphs(draw, max_n=7):
    n = draw(st.integers(1, max_n))
    pairs = list(combinations(range(n), 2))
    keep = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return UGraph(n, frozenset(p for p, k in zip(pairs, keep) if k))


def brute_chromatic(h):
    for k in range(1, h.n + 1):
        for col in cartesian(range(k), repeat=h.n):
            if all(col[u] != col[v] for u, v in h.edges):
                return k
    return 0


@given(ugraphs())
def test_invariants_match_oracles(h):
    assert chromatic_number(h) == brute_chromatic(h)
    g = nx.Graph()
    g.add_nodes_from(range(h.n))
    g.add_edges_from(h.edges)
    assert clique_number(h) == max(len(c) for c in nx.find_cliques(g))


def test_paper_values():
    assert chromatic_invariants(complete_graph(4)).to_json() == {"chi": 4, "omega": 4, "co_chromatic": 5}
    assert chromatic_invariants(cycle_graph(5)).to_json() == {"chi": 3, "omega": 2, "co_chromatic": 3}
    assert chromatic_invariants(grotzsch()).to_json() == {"chi": 4, "omega": 2, "co_chromatic": 3}
    for k in range(2, 7):
        assert chromatic_invariants(complete_graph(k)).co_chromatic == k + 1
    for k in (2, 3, 4):
        assert chromatic_invariants(cycle_graph(2 * k + 1)).co_chromatic == 3
    with pytest.raises(CapExceeded):
        chromatic_invariants(UGraph(17))


@pytest.mark.slow
def test_co_chromatic_justification():
    pool = graph_pool(6)
    hs = [h for h in graph_pool(7) if clique_number(h) + 1 <= 6]
    assert all(up and down for _, up, down in co_chromatic_check(hs, pool))


def test_classify_undirected():
    assert classify_undirected([complete_graph(3)]).params["k"] == 2
    assert classify_undirected([complete_graph(4), cycle_graph(5)]).params == {"k": 2, "k_F": 3}
    assert classify_undirected([complete_graph(2)]).params["k"] == 1
    assert classify_undirected([]).kind == "rado"
    assert classify_undirected([UGraph(1)]).kind == "empty"


def test_classify_trees():
    r = classify_oriented_trees([directed_path(3)])
    assert r.ell == 2 and r.theory.kind == "U_of_T"
    psi = r.theory.presentation[0]
    assert evaluate(psi, Digraph(2, frozenset({(0, 1)})))
    r = classify_oriented_trees([directed_path(2)])
    assert r.ell == 1 and r.dual.dual.n == 1
    assert classify_oriented_trees([Digraph(1)]).theory.kind == "empty"


def test_blowup_check_fails_on_non_duals():
    assert not check_blowup(directed_cycle(3), 3)["passed"]
    assert check_blowup(transitive_tournament(3), 3)["passed"]


def test_tree_pipeline_on_small_trees():
    for t in all_oriented_trees(4):
        r = classify_oriented_trees([t], random_trials=20)
        assert r.blowup["passed"]
        if t.n > 1:
            assert r.dual.certificates.all_true()


def test_mixtures():
    c3t3 = disjoint_union(directed_cycle(3), transitive_tournament(3))
    m = mixture_decomposition(c3t3, mode="colored")
    assert m.weights() == [Fraction(1, 2), Fraction(1, 2)]
    m = mixture_decomposition(c3t3)
    assert m.weights() == [Fraction(1, 4), Fraction(3, 4)]
    assert [c.kind for c, _, _ in m.components] == ["component", "U_of_T"]
    single = mixture_decomposition(transitive_tournament(3))
    assert single.weights() == [1] and single.components[0][0].params["ell"] == 3
    arcs = disjoint_union(transitive_tournament(2), transitive_tournament(2))
    for mode in ("csp", "colored"):
        assert mixture_decomposition(arcs, mode=mode).weights() == [1]
    t2 = transitive_tournament(2)
    assert all(count_colored(t2, n) == count_colored(Digraph(2, frozenset({(1, 0)})), n) for n in range(7))
    assert same_colored_counts(directed_cycle(3), transitive_tournament(3))
    assert not same_colored_counts(directed_cycle(3), Digraph(3, frozenset({(0, 1), (1, 0), (1, 2)})))


def test_estimated_weights_are_flagged():
    d = disjoint_union(transitive_tournament(2), Digraph(3, frozenset({(0, 2), (1, 2)})))
    m = mixture_decomposition(d)
    assert not any(e for _, _, e in m.components)
    assert abs(sum(m.weights()) - 1) < 1e-12


def test_csp_class_counts_against_oracle():
    # |Csp(T3)_n| and |Csp(C3)_n| differ from n = 3 on
    t3, c3 = transitive_tournament(3), directed_cycle(3)
    for n, want in ((1, (1, 1)), (2, (3, 3)), (3, (25, 21))):
        got = (len(csp_members(t3, n)), len(csp_members(c3, n)))
        oracle = tuple(sum(1 for g in enumerate_digraphs(n, loopless=True) if brute_is_hom(g, d)) for d in (t3, c3))
        assert got == oracle == want


def test_generic_csp_digraphs_have_aut_many_homs():
    # the reason the uncoloured weights are 1/4 and 3/4
    from homlaws.colored import sample_uniform
    from homlaws.homomorphism import count_homs
    for seed in range(5):
        g = sample_uniform(directed_cycle(3), 30, seed).graph
        assert count_homs(g, directed_cycle(3)) == 3
        h = sample_uniform(transitive_tournament(3), 30, seed).graph
        assert count_homs(h, transitive_tournament(3)) == 1


def test_sentence_limits():
    c3t3 = disjoint_union(directed_cycle(3), transitive_tournament(3))
    short = dict(schedule=(30, 60), seeds=4)
    assert sentence_limit(T3_QUERY, mixture_decomposition(c3t3, mode="colored"), **short).predicted == Fraction(1, 2)
    assert sentence_limit(T3_QUERY, mixture_decomposition(c3t3), **short).predicted == Fraction(3, 4)
    for desc in (mixture_decomposition(c3t3), classify_undirected([complete_graph(3)]),
                 classify_undirected([])):
        assert sentence_limit(Top(), desc, **short).predicted == 1
    loop = parse("exists x. E(x,x)")
    assert sentence_limit(loop, mixture_decomposition(c3t3), **short).predicted == 0
    gen = classify_undirected([complete_graph(3)])
    odd = parse("exists a b c. E(a,b) & E(b,c) & E(c,a)")
    assert sentence_limit(odd, gen, **short).predicted == 0
    report = sentence_limit(T3_QUERY, mixture_decomposition(c3t3), evidence_n=(2, 3),
                            evidence_class=ClassSpec("csp", c3t3), **short)
    assert [r.phi_n for r in report.finite_evidence] == [0, Fraction(6, 27)]


def test_undetermined_verdict():
    # an edge exists in some but not all small samples of the 2-bag model
    phi = parse("exists x y. E(x,y)")
    desc = TheoryDescriptor("U_of_T", {"ell": 2})
    r = sentence_limit(phi, desc, schedule=(2,), seeds=40)
    assert r.predicted is None and r.verdicts == [None]


def triangle_free_oracle(n):
    tf = bip = 0
    for g in enumerate_ugraphs(n):
        adj = {v: set() for v in range(n)}
        for u, v in g.edges:
            adj[u].add(v)
            adj[v].add(u)
        if any(adj[a] & adj[b] for a, b in g.edges):
            continue
        tf += 1
        gx = nx.Graph()
        gx.add_nodes_from(range(n))
        gx.add_edges_from(g.edges)
        bip += nx.is_bipartite(gx)
    return tf, bip


def test_triangle_free_counts():
    for n in range(1, 7):
        assert triangle_free_counts(n) == triangle_free_oracle(n)
    assert triangle_free_counts(7) == (133501, 103237)


def test_unique_hom_fraction():
    t2 = transitive_tournament(2)
    for n in range(1, 5):
        members, one, frac = unique_hom_fraction(t2, n)
        oracle = [g for g in enumerate_digraphs(n, loopless=True) if brute_is_hom(g, t2)]
        assert members == len(oracle)
        assert one == sum(1 for g in oracle if brute_count_homs(g, t2) == 1)
