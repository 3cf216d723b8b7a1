import json

import pytest
from hypothesis import given, strategies as st

from homlaws.structures import (
    CapExceeded, Digraph, OrientedForest, UGraph, all_oriented_trees, blow_up, classify,
    complete_graph, count_digraphs, cycle_graph, delete_vertex, directed_cycle, directed_path,
    disjoint_union, enumerate_digraphs, enumerate_ugraphs, grotzsch, has_directed_cycle,
    induced_subgraph, is_oriented, load_graph, make_named, product, relabel, transitive_tournament,
    weak_components,
)
from conftest import digraphs


def test_named_families():
    assert transitive_tournament(3).edges == {(0, 1), (0, 2), (1, 2)}
    assert directed_path(3).edges == {(0, 1), (1, 2)}
    assert directed_cycle(3).m == 3 and has_directed_cycle(directed_cycle(3))
    assert complete_graph(4).edges == {(a, b) for a in range(4) for b in range(a + 1, 4)}
    assert len(cycle_graph(5).edges) == 5
    g = grotzsch()
    assert (g.n, len(g.edges)) == (11, 20)
    with pytest.raises(ValueError):
        make_named("transitive_tournament", 0)
    with pytest.raises(ValueError):
        make_named("wheel", 3)


def test_validation():
    with pytest.raises(ValueError):
        Digraph(2, frozenset({(0, 2)}))
    with pytest.raises(ValueError):
        UGraph(2, frozenset({(1, 1)}))
    with pytest.raises(ValueError):
        OrientedForest((directed_cycle(3),))
    with pytest.raises(ValueError):
        blow_up(directed_path(2), [1, 0])


def test_enumeration_counts():
    for n in range(4):
        assert sum(1 for _ in enumerate_digraphs(n)) == count_digraphs(n) == 2 ** (n * n)
        assert sum(1 for _ in enumerate_digraphs(n, loopless=True)) == 2 ** (n * n - n)
        assert sum(1 for _ in enumerate_digraphs(n, oriented=True)) == 3 ** (n * (n - 1) // 2)
    assert len({g for g in enumerate_digraphs(3)}) == 512
    assert sum(1 for _ in enumerate_ugraphs(4)) == 64
    with pytest.raises(CapExceeded):
        next(enumerate_digraphs(6))


def test_enumeration_order_is_bitmask_order():
    gs = list(enumerate_digraphs(2, loopless=True))
    assert [sorted(g.edges) for g in gs] == [[], [(0, 1)], [(1, 0)], [(0, 1), (1, 0)]]


def test_oriented_tree_count():
    # isomorphism classes of oriented trees on 1..5 vertices: 1, 1, 3, 8, 27
    trees = all_oriented_trees(5)
    assert [sum(1 for t in trees if t.n == k) for k in range(1, 6)] == [1, 1, 3, 8, 27]
    assert all(classify(t)["is_oriented_tree"] for t in trees)


def test_product_and_blow_up():
    p = product(transitive_tournament(2), transitive_tournament(2))
    assert p.n == 4 and p.edges == {(0, 3)}
    b = blow_up(directed_path(2), [2, 1])
    assert b.edges == {(0, 2), (1, 2)}
    loop = Digraph(1, frozenset({(0, 0)}))
    assert blow_up(loop, [2]).edges == {(0, 0), (1, 1)}


def test_classify_flags():
    c = classify(directed_path(3))
    assert c["is_oriented_tree"] and c["is_acyclic"]
    c = classify(directed_cycle(3))
    assert not c["is_acyclic"] and c["is_oriented"]
    assert not is_oriented(Digraph(2, frozenset({(0, 1), (1, 0)})))


def test_io_roundtrips(tmp_path):
    g = Digraph(3, frozenset({(0, 1), (2, 2)}))
    assert Digraph.from_json(json.loads(json.dumps(g.to_json()))) == g
    assert Digraph.from_edge_list(g.to_edge_list()) == g
    assert load_graph(json.dumps(g.to_json())) == g
    u = cycle_graph(4)
    assert load_graph(json.dumps(u.to_json())) == u
    assert "0 -> 1" in g.to_dot()


@given(digraphs(max_n=5))
def test_json_roundtrip_property(g):
    assert Digraph.from_json(g.to_json()) == g
    assert Digraph.from_edge_list(g.to_edge_list()) == g


@given(digraphs(max_n=5), st.randoms())
def test_relabel_preserves_shape(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = relabel(g, perm)
    assert h.m == g.m and classify(h) == classify(g)
    assert len(weak_components(h)) == len(weak_components(g))


@given(digraphs(max_n=4), digraphs(max_n=4))
def test_union_and_product_sizes(g, h):
    u = disjoint_union(g, h)
    assert (u.n, u.m) == (g.n + h.n, g.m + h.m)
    p = product(g, h)
    assert (p.n, p.m) == (g.n * h.n, g.m * h.m)


@given(digraphs(min_n=1, max_n=5))
def test_induced_and_delete(g):
    h = delete_vertex(g, 0)
    assert h == induced_subgraph(g, range(1, g.n))
    assert h.m == g.m - len({e for e in g.edges if 0 in e})
