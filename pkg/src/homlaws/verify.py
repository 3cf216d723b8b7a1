"""One-shot runner of the oracle and invariant suites.

``quick`` keeps every exhaustive check at ``n <= 4``; ``full`` goes to
``n <= 5`` and adds the statistical suites.  Reports contain no timings, so a
fixed seed gives a byte-identical report.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as cartesian

from . import asymptotics, colored, density, duality, homomorphism, structures
from .logic import ClassSpec, Not, evaluate, evaluate_tensor, parse, phi_n_exact


@dataclass
class SuiteResult:
    name: str
    passed: bool
    checked: int
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked, "detail": self.detail}


@dataclass
class VerifyReport:
    level: str
    seed: int
    suites: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    def to_json(self) -> dict:
        return {"level": self.level, "seed": self.seed, "passed": self.passed,
                "suites": [s.to_json() for s in self.suites]}


def suite_motzkin_straus(max_n: int, density_fn=None) -> SuiteResult:
    density_fn = density_fn or density.density
    checked = 0
    for k in range(2, 7):
        checked += 1
        if density_fn(structures.transitive_tournament(k))[0] != Fraction(k - 1, 2 * k):
            return SuiteResult("motzkin_straus", False, checked, f"T_{k}")
    for n in range(1, max_n + 1):
        for g in structures.enumerate_digraphs(n, oriented=True):
            checked += 1
            w = density.clique_number_brute_force(g)
            if density_fn(g)[0] != Fraction(w - 1, 2 * w):
                return SuiteResult("motzkin_straus", False, checked, repr(g))
    return SuiteResult("motzkin_straus", True, checked)


def suite_homomorphisms(max_n: int) -> SuiteResult:
    graphs = [g for n in range(1, max_n + 1) for g in structures.enumerate_digraphs(n, cap=max_n)]
    rng = random.Random(1)
    pairs = [(rng.choice(graphs), rng.choice(graphs)) for _ in range(400)]
    for i, (g, h) in enumerate(pairs):
        brute = sum(1 for f in cartesian(range(h.n), repeat=g.n) if homomorphism.is_hom(g, h, f))
        if homomorphism.count_homs(g, h) != brute or homomorphism.homomorphic(g, h) != (brute > 0):
            return SuiteResult("homomorphisms", False, i + 1, f"{g!r} -> {h!r}")
    return SuiteResult("homomorphisms", True, len(pairs))


def suite_cores_automorphisms(max_n: int) -> SuiteResult:
    checked = 0
    for g in structures.enumerate_digraphs(min(max_n, 3)):
        checked += 1
        c = homomorphism.core_of(g)
        if not (homomorphism.hom_equivalent(g, c) and homomorphism.is_core(c)):
            return SuiteResult("cores_automorphisms", False, checked, f"core of {g!r}")
        if sorted(a.map for a in homomorphism.automorphisms(g)) != sorted(homomorphism.automorphisms_brute_force(g)):
            return SuiteResult("cores_automorphisms", False, checked, f"Aut of {g!r}")
    return SuiteResult("cores_automorphisms", True, checked)


def suite_duality(max_n: int, seed: int) -> SuiteResult:
    checked = 0
    trees = structures.all_oriented_trees(max_n)
    for t in trees:
        checked += 1
        r = duality.build_dual([t], exhaustive_n=3, random_trials=50, seed=seed)
        if t.n > 1 and not r.certificates.all_true():
            return SuiteResult("duality", False, checked, f"certificates for {t!r}")
    return SuiteResult("duality", True, checked, f"{len(trees)} trees")


def suite_counting(max_template: int, max_n: int) -> SuiteResult:
    checked = 0
    for k in range(1, max_template + 1):
        for d in structures.enumerate_digraphs(k, cap=max_template):
            for n in range(0, max_n + 1):
                checked += 1
                if n <= 2:
                    brute = sum(1 for _ in colored.enumerate_colored(d, n))
                else:
                    # too many structures; sum 2^(permitted pairs) over colour maps
                    brute = sum(2 ** sum(1 for a in col for b in col if (a, b) in d.edges)
                                for col in cartesian(range(d.n), repeat=n))
                if colored.count_colored(d, n) != brute:
                    return SuiteResult("counting", False, checked, f"{d!r}, n={n}")
    return SuiteResult("counting", True, checked)


_SENTENCES = [
    "exists x y. E(x,y)",
    "forall x. exists y. E(x,y) | E(y,x)",
    "exists x. E(x,x)",
    "forall x y. E(x,y) -> !E(y,x)",
    "exists a b c. E(a,b) & E(b,c) & E(a,c)",
    "forall x y z. E(x,y) & E(y,z) -> E(x,z)",
    "exists x y. x != y & !E(x,y) & !E(y,x)",
]


def suite_logic(max_n: int) -> SuiteResult:
    checked = 0
    classes = [ClassSpec("all"), ClassSpec("csp", structures.transitive_tournament(2)),
               ClassSpec("forb", forbidden=(structures.directed_path(3),))]
    for text in _SENTENCES:
        phi = parse(text)
        for cls in classes:
            for n in range(1, min(max_n, 3) + 1):
                checked += 1
                a, b = phi_n_exact(cls, phi, n), phi_n_exact(cls, Not(phi), n)
                if a.phi_n + b.phi_n != 1:
                    return SuiteResult("logic", False, checked, f"complement {text} n={n}")
        for g in structures.enumerate_digraphs(min(max_n, 3)):
            checked += 1
            if evaluate(phi, g) != evaluate_tensor(phi, g):
                return SuiteResult("logic", False, checked, f"{text} on {g!r}")
    return SuiteResult("logic", True, checked)


def suite_chromatic() -> SuiteResult:
    cases = [(structures.complete_graph(k), k + 1) for k in range(2, 7)]
    cases += [(structures.cycle_graph(k), 3) for k in (5, 7, 9)]
    cases.append((structures.grotzsch(), 3))
    for i, (h, want) in enumerate(cases):
        if asymptotics.chromatic_invariants(h).co_chromatic != want:
            return SuiteResult("chromatic", False, i + 1, repr(h))
    return SuiteResult("chromatic", True, len(cases))


def suite_sampler_law(draws: int, seed: int) -> SuiteResult:
    t2 = structures.transitive_tournament(2)
    law = colored.uniform_law(t2, 2)
    counts = dict.fromkeys(law, 0)
    rng = random.Random(seed)
    for _ in range(draws):
        counts[colored.sample_uniform(t2, 2, rng.getrandbits(64)).key()] += 1
    for k, p in law.items():
        sd = (float(p) * (1 - float(p)) / draws) ** 0.5
        if abs(counts[k] / draws - float(p)) > 3 * sd:
            return SuiteResult("sampler_law", False, draws, f"outcome {k}")
    return SuiteResult("sampler_law", True, draws)


def run_verify(level: str = "quick", seed: int = 0, density_fn=None) -> VerifyReport:
    """Run every suite; ``density_fn`` replaces the density solver (negative controls)."""
    if level not in ("quick", "full"):
        raise ValueError("level is 'quick' or 'full'")
    full = level == "full"
    n = 5 if full else 4
    report = VerifyReport(level, seed)
    report.suites.append(suite_motzkin_straus(n, density_fn))
    report.suites.append(suite_homomorphisms(3 if full else 2))
    report.suites.append(suite_cores_automorphisms(n))
    report.suites.append(suite_duality(n, seed))
    report.suites.append(suite_counting(3 if full else 2, n))
    report.suites.append(suite_logic(n))
    report.suites.append(suite_chromatic())
    if full:
        report.suites.append(suite_sampler_law(100_000, seed))
    return report
