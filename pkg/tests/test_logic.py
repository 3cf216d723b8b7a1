import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from homlaws.colored import sample_uniform
from homlaws.logic import (
    And, Bot, ClassSpec, Color, Edge, Eq, Exists, Forall, FormulaError, Implies, Not, Or, Top,
    TensorModel, colored_sampler, evaluate, evaluate_tensor, extension_axioms, free_variables,
    orbit_sentence, parse, parse_class, parse_sentence, phi_n_estimate, phi_n_exact, pp_to_formula,
    quantifier_depth, to_text,
)
from homlaws.homomorphism import canonical_orbit_formula
from homlaws.structures import (
    CapExceeded, Digraph, directed_cycle, directed_path, disjoint_union, enumerate_digraphs,
    transitive_tournament,
)
from oracles import brute_is_hom, naive_holds, random_digraph, random_formula

T3_QUERY = "exists a b c. E(a,b) & E(b,c) & E(a,c)"


def test_parser_basics():
    phi = parse("forall x. P0(x) -> exists y. P1(y) & E(x,y)")
    assert phi == Forall(("x",), Implies(Color(0, "x"), Exists(("y",), And((Color(1, "y"), Edge("x", "y"))))))
    assert parse("x != y") == Not(Eq("x", "y"))
    assert parse("a -> b = b -> c = c".replace("a", "x = x")) is not None
    assert parse("!E(x,y) | E(y,x) & true") == Or((Not(Edge("x", "y")), And((Edge("y", "x"), Top()))))
    assert free_variables(parse("exists x. E(x,y)")) == {"y"}
    assert quantifier_depth(parse(T3_QUERY)) == 3
    for bad in ("exists . E(x,y)", "E(x,", "forall x E(x,x)", "x", "E(x,y) )"):
        with pytest.raises(FormulaError):
            parse(bad)
    with pytest.raises(FormulaError):
        parse_sentence("E(x,y)")


def test_implication_is_right_associative():
    assert parse("true -> false -> false") == Implies(Top(), Implies(Bot(), Bot()))


@given(st.integers(0, 2 ** 32), st.integers(1, 4))
def test_print_parse_roundtrip(seed, depth):
    phi = random_formula(random.Random(seed), depth)
    again = parse(to_text(phi))
    for g in enumerate_digraphs(2):
        assert evaluate(phi, g) == evaluate(again, g)
    assert to_text(parse(to_text(again))) == to_text(again)


def test_spec_examples():
    edge = parse("exists x y. E(x,y)")
    assert evaluate(edge, Digraph(3)) is False
    q = parse(T3_QUERY)
    assert evaluate(q, transitive_tournament(3)) is True
    assert evaluate(q, directed_cycle(3)) is False


def test_guards():
    with pytest.raises(FormulaError):
        evaluate(parse("exists x. P0(x)"), transitive_tournament(2))
    with pytest.raises(FormulaError):
        evaluate(parse("E(x,y)"), transitive_tournament(2))
    with pytest.raises(CapExceeded):
        evaluate(parse("exists a b c d e. E(a,b)"), Digraph(100), budget=10 ** 6)
    with pytest.raises(CapExceeded):
        evaluate_tensor(parse("exists a b c. E(a,b) | E(b,c) | E(a,c)"), Digraph(300), budget=10 ** 6)
    assert evaluate(env={"x": 0, "y": 1}, phi=parse("E(x,y)"), m=transitive_tournament(2))


def test_empty_domain():
    empty = Digraph(0)
    assert evaluate(parse("forall x. false"), empty)
    assert not evaluate(parse("exists x. true"), empty)
    assert evaluate_tensor(parse("forall x. false"), empty)
    assert not evaluate_tensor(parse("exists x. true"), empty)


@given(st.integers(0, 2 ** 32))
def test_three_evaluators_agree(seed):
    rng = random.Random(seed)
    phi, g = random_formula(rng, 3), random_digraph(rng, 4)
    assert evaluate(phi, g) == naive_holds(phi, g) == evaluate_tensor(phi, g)


@given(st.integers(0, 2 ** 32))
def test_evaluators_agree_on_coloured_structures(seed):
    rng = random.Random(seed)
    phi = random_formula(rng, 3, colors=2)
    c = sample_uniform(transitive_tournament(2), rng.randint(1, 4), seed)
    assert evaluate(phi, c) == naive_holds(phi, c.graph, c.color) == evaluate_tensor(phi, c)


def test_phi_exact_examples():
    row = phi_n_exact(parse_class("csp:t2"), parse("exists x y. E(x,y)"), 2)
    assert (row.satisfied, row.total, row.phi_n) == (2, 3, Fraction(2, 3))
    for n in range(4):
        assert phi_n_exact(ClassSpec("all"), Top(), n).phi_n == 1
    ugr = phi_n_exact(ClassSpec("ugraphs"), parse("forall x y. E(x,y) -> E(y,x)"), 4)
    assert (ugr.total, ugr.phi_n) == (64, 1)


def test_phi_exact_against_brute_force_oracle():
    d = disjoint_union(directed_cycle(3), transitive_tournament(3))
    q = parse(T3_QUERY)
    members = [g for g in enumerate_digraphs(3) if brute_is_hom(g, d)]
    want = Fraction(sum(naive_holds(q, g) for g in members), len(members))
    row = phi_n_exact(ClassSpec("csp", d), q, 3)
    assert row.phi_n == want == Fraction(6, 27)


def test_undefined_frequency():
    row = phi_n_exact(ClassSpec("csp", Digraph(0)), Top(), 2)
    assert row.undefined and row.phi_n is None
    assert row.to_json()["phi_n"] == "undefined"
    assert phi_n_exact(ClassSpec("csp", Digraph(0)), Top(), 0).phi_n == 1


@given(st.integers(0, 2 ** 32))
def test_complementation(seed):
    rng = random.Random(seed)
    phi = random_formula(rng, 3)
    for cls, n in ((ClassSpec("csp", transitive_tournament(2)), 3), (ClassSpec("all"), 2),
                   (ClassSpec("forb", forbidden=(directed_path(3),), loopless=True), 3)):
        assert phi_n_exact(cls, phi, n).phi_n + phi_n_exact(cls, Not(phi), n).phi_n == 1


def test_class_parsing():
    c = parse_class("forb:p3,p4:loopless")
    assert c.kind == "forb" and c.loopless and len(c.forbidden) == 2
    assert parse_class("csp:c3+t3").template.n == 6
    with pytest.raises(ValueError):
        parse_class("csp")
    with pytest.raises(ValueError):
        parse_class("forb:c3")


def test_forb_and_csp_agree_on_path_dual():
    phi = parse("exists x y z. x != y & x != z & y != z & E(x,y) & E(x,z)")
    for n in range(1, 5):
        a = phi_n_exact(ClassSpec("forb", forbidden=(directed_path(3),)), phi, n)
        b = phi_n_exact(ClassSpec("csp", transitive_tournament(2)), phi, n)
        assert (a.satisfied, a.total) == (b.satisfied, b.total)


def test_estimates():
    draw = colored_sampler(transitive_tournament(2))
    assert phi_n_estimate(draw, Bot(), 10, 50, 1).estimate == 0
    assert phi_n_estimate(draw, Top(), 10, 50, 1).estimate == 1
    a = phi_n_estimate(draw, parse("exists x y. E(x,y)"), 6, 200, 9)
    assert a == phi_n_estimate(draw, parse("exists x y. E(x,y)"), 6, 200, 9)


def test_coloured_edge_estimate():
    # failure needs every permitted pair empty: probability 2^50 / c_50, about 1e-300
    draw = colored_sampler(transitive_tournament(2))
    phi = parse("exists x y. P0(x) & P1(y) & E(x,y)")
    assert phi_n_estimate(draw, phi, 50, 10_000, 2024).estimate >= 0.99


def test_extension_axiom_examples():
    t2 = transitive_tournament(2)
    zero = {to_text(a.sentence) for a in extension_axioms(t2, 0)}
    assert zero == {"exists y. P0(y) & !E(y,y)", "exists y. P1(y) & !E(y,y)"}
    one = extension_axioms(t2, 1)
    wanted = [a for a in one if a.base_colors == (0,) and a.new_color == 1 and a.new_edges == {("out", 0)}]
    assert len(wanted) == 1
    # the one-variable axioms imply the displayed sentence on every colouring
    target = parse("forall x. P0(x) -> exists y. P1(y) & E(x,y)")
    for a in one:
        assert not (a.base_colors == (0,) and a.new_color == 0 and a.new_edges)
    for seed in range(5):
        c = sample_uniform(t2, 30, seed)
        if all(evaluate(a.sentence, c) for a in one):
            assert evaluate(target, c)
    with pytest.raises(ValueError):
        extension_axioms(directed_cycle(3), 1)


def test_extension_axioms_are_not_duplicated():
    for k, m in ((2, 2), (3, 2)):
        axioms = extension_axioms(transitive_tournament(k), m)
        texts = [to_text(a.sentence) for a in axioms]
        assert len(texts) == len(set(texts))


def test_extension_axioms_hold_on_large_samples():
    for k in (2, 3):
        axioms = extension_axioms(transitive_tournament(k), 2)
        for seed in range(3):
            model = TensorModel(sample_uniform(transitive_tournament(k), 150, seed))
            assert all(evaluate_tensor(a.sentence, model) for a in axioms)


def test_orbit_sentences():
    t2 = transitive_tournament(2)
    assert to_text(pp_to_formula(canonical_orbit_formula(t2, 0))) == "exists y1. E(x,y1)"
    psi = orbit_sentence(t2)
    assert evaluate(psi, Digraph(2, frozenset({(0, 1)})))
    assert not evaluate(psi, Digraph(3, frozenset({(0, 1)})))
