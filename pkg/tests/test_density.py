from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from homlaws.density import (
    DensityProfile, balanced_composition, blow_up_structure, clique_number_brute_force, densest_supports,
    density, finite_density, max_oriented_clique, maximal_densest_supports, objective, stationary_points,
)
from homlaws.structures import (
    CapExceeded, Digraph, blow_up, directed_cycle, directed_path, disjoint_union, transitive_tournament,
)
from conftest import digraphs


def test_tournament_values():
    for k in range(2, 7):
        value, prof = density(transitive_tournament(k))
        assert value == Fraction(k - 1, 2 * k)
        assert prof.delta == tuple([Fraction(1, k)] * k)


def test_loops_and_two_cycles():
    assert density(Digraph(1, frozenset({(0, 0)})))[0] == 1
    assert density(Digraph(2, frozenset({(0, 1), (1, 0)})))[0] == Fraction(1, 2)
    assert density(Digraph(3))[0] == 0
    with pytest.raises(ValueError):
        density(Digraph(0))
    with pytest.raises(CapExceeded):
        density(Digraph(15))


def test_supports():
    d = disjoint_union(directed_cycle(3), transitive_tournament(3))
    assert density(d)[0] == Fraction(1, 3)
    assert maximal_densest_supports(d) == [(0, 1, 2), (3, 4, 5)]
    two = disjoint_union(transitive_tournament(2), transitive_tournament(2))
    assert maximal_densest_supports(two) == [(0, 1), (2, 3)]
    bip = Digraph(4, frozenset({(0, 2), (0, 3), (1, 2), (1, 3)}))
    assert (0, 1, 2, 3) in densest_supports(bip)


def _random_simplex(rnd, n):
    w = [rnd.randint(0, 20) for _ in range(n)]
    if sum(w) == 0:
        w[0] = 1
    return [Fraction(x, sum(w)) for x in w]


@given(digraphs(min_n=1, max_n=5), st.randoms(use_true_random=False))
def test_density_is_an_upper_bound_attained(g, rnd):
    value, prof = density(g)
    assert objective(g, prof.delta) == value
    for _ in range(20):
        assert objective(g, _random_simplex(rnd, g.n)) <= value


@given(digraphs(min_n=1, max_n=5))
def test_kkt_conditions(g):
    value, prof = density(g)
    grad = [sum(prof.delta[w] for w in range(g.n) if (u, w) in g.edges)
            + sum(prof.delta[w] for w in range(g.n) if (w, u) in g.edges) for u in range(g.n)]
    for u in range(g.n):
        assert grad[u] <= 2 * value
        if prof.delta[u] > 0:
            assert grad[u] == 2 * value


@given(digraphs(min_n=1, max_n=5, oriented=True))
def test_motzkin_straus(g):
    w = clique_number_brute_force(g)
    assert density(g)[0] == Fraction(w - 1, 2 * w)
    k, witness = max_oriented_clique(g)
    assert k == w
    assert all(g.has_edge(a, b) or g.has_edge(b, a) for a, b in combinations(witness, 2))


@given(digraphs(min_n=1, max_n=4))
def test_supports_are_exact(g):
    value, _ = density(g)
    for s in densest_supports(g):
        # the barycentre of the basic maximisers inside s has support s
        pts = [d for sub, v, d in stationary_points(g) if v == value and set(sub) <= set(s)]
        bary = [sum(p[i] for p in pts) / len(pts) for i in range(g.n)]
        assert tuple(i for i in range(g.n) if bary[i] > 0) == s
        assert objective(g, bary) == value or len(pts) > 1


def test_blow_up_structure():
    t3 = transitive_tournament(3)
    prof = DensityProfile(tuple([Fraction(1, 3)] * 3), Fraction(1, 3), (0, 1, 2))
    b = blow_up_structure(t3, prof)
    assert b.k == 3 and b.class_masses == tuple([Fraction(1, 3)] * 3)
    g = blow_up(transitive_tournament(2), [2, 1])
    prof = DensityProfile((Fraction(1, 4), Fraction(1, 4), Fraction(1, 2)), Fraction(1, 4), (0, 1, 2))
    b = blow_up_structure(g, prof)
    assert b.classes == ((0, 1), (2,)) and b.class_masses == (Fraction(1, 2), Fraction(1, 2))
    bad = DensityProfile((Fraction(1), Fraction(0), Fraction(0)), Fraction(1, 4), (0,))
    with pytest.raises(ValueError):
        blow_up_structure(g, bad)


def test_finite_density():
    t2, t3 = transitive_tournament(2), transitive_tournament(3)
    assert finite_density(t2, (0, 1), 5) == (Fraction(6, 25), (3, 2))
    assert finite_density(t2, (0, 1), 2)[0] == Fraction(1, 4)
    assert finite_density(t3, (0, 1, 2), 6)[0] == Fraction(1, 3)
    with pytest.raises(ValueError):
        finite_density(directed_path(3), (0, 1, 2), 4)


@given(st.integers(1, 40), st.integers(1, 6))
def test_balanced_composition_is_optimal(n, parts):
    comp = balanced_composition(n, parts)
    assert sum(comp) == n and max(comp) - min(comp) <= 1
    best = sum(a * b for a, b in combinations(comp, 2))
    # moving one unit between parts never helps
    for i in range(parts):
        for j in range(parts):
            if i != j and comp[i] > 0:
                c = list(comp)
                c[i] -= 1
                c[j] += 1
                assert sum(a * b for a, b in combinations(c, 2)) <= best
