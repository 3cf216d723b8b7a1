"""Classes of finite structures and the sentence frequencies ``phi_n``."""

from __future__ import annotations

import math
import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from ..colored import enumerate_colored, sample_uniform
from ..homomorphism import count_homs, homomorphic
from ..structures import (
    Digraph,
    OrientedForest,
    directed_cycle,
    directed_path,
    disjoint_union,
    enumerate_digraphs,
    enumerate_ugraphs,
    transitive_tournament,
)
from .evaluate import DEFAULT_EVAL_BUDGET, evaluate
from .syntax import FormulaError, free_variables, max_color

KINDS = ("csp", "forb", "colored", "all", "ugraphs")


@dataclass(frozen=True)
class ClassSpec:
    kind: str
    template: Digraph | None = None
    forbidden: tuple = ()
    loopless: bool = False

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown class kind {self.kind!r}")
        if self.kind in ("csp", "colored") and self.template is None:
            raise ValueError(f"{self.kind} needs a template")
        if self.kind == "forb" and not self.forbidden:
            raise ValueError("forb needs a non-empty forbidden set")

    def describe(self) -> str:
        extra = ",loopless" if self.loopless else ""
        if self.kind in ("csp", "colored"):
            return f"{self.kind}({self.template!r}{extra})"
        if self.kind == "forb":
            return f"forb({len(self.forbidden)} trees{extra})"
        return self.kind + extra

    def members(self, n: int, cap: int | None = None):
        """Every labelled member on ``n`` vertices, in enumeration order."""
        if self.kind == "ugraphs":
            for g in enumerate_ugraphs(n, cap=7 if cap is None else cap):
                yield g.as_digraph()
            return
        if self.kind == "colored":
            yield from enumerate_colored(self.template, n)
            return
        loopless = self.loopless
        if self.kind == "csp" and not any(u == v for u, v in self.template.edges):
            # a loop can only map onto a loop
            loopless = True
        for g in enumerate_digraphs(n, loopless=loopless, cap=cap):
            if self.kind == "all" or self.contains(g):
                yield g

    def contains(self, g) -> bool:
        if self.kind == "csp":
            return homomorphic(g, self.template)
        if self.kind == "forb":
            return (not self.loopless or all(u != v for u, v in g.edges)) and \
                not any(homomorphic(t, g) for t in self.forbidden)
        if self.kind == "all":
            return not self.loopless or all(u != v for u, v in g.edges)
        raise ValueError(f"membership test not available for {self.kind}")


_NAMED = re.compile(r"([a-z]+)(\d*)$")


def named_digraph(text: str) -> Digraph:
    """``t3``, ``p4`` (directed path on 4 vertices), ``c3`` and joins like ``c3+t3``."""
    parts = []
    for piece in text.lower().split("+"):
        m = _NAMED.match(piece.strip())
        if not m or not m.group(2):
            raise ValueError(f"cannot read digraph name {piece!r}")
        kind, k = m.group(1), int(m.group(2))
        makers = {"t": transitive_tournament, "p": directed_path, "c": directed_cycle}
        if kind not in makers:
            raise ValueError(f"unknown digraph family {kind!r}")
        parts.append(makers[kind](k))
    return parts[0] if len(parts) == 1 else disjoint_union(*parts)


def parse_class(text: str, loader: Callable[[str], object] | None = None) -> ClassSpec:
    """``csp:t2``, ``forb:p3,p4``, ``colored:t2``, ``all``, ``ugraphs``; add ``:loopless``."""
    fields = text.split(":")
    kind = fields[0].lower()
    loopless = "loopless" in fields[1:]
    args = [f for f in fields[1:] if f != "loopless"]

    def graph(arg):
        if loader is not None and (arg.endswith(".json") or "/" in arg):
            return loader(arg)
        return named_digraph(arg)

    if kind in ("csp", "colored"):
        if len(args) != 1:
            raise ValueError(f"{kind} class needs one template")
        return ClassSpec(kind, template=graph(args[0]), loopless=loopless)
    if kind == "forb":
        if len(args) != 1:
            raise ValueError("forb class needs a comma-separated list of trees")
        trees = []
        for a in args[0].split(","):
            g = graph(a)
            trees.extend(g.trees if isinstance(g, OrientedForest) else [g])
        return ClassSpec(kind, forbidden=tuple(OrientedForest(tuple(trees))), loopless=loopless)
    if kind in ("all", "ugraphs"):
        if args:
            raise ValueError(f"{kind} takes no arguments")
        return ClassSpec(kind, loopless=loopless)
    raise ValueError(f"unknown class kind {kind!r}")


@dataclass(frozen=True)
class FrequencyRow:
    n: int
    satisfied: int
    total: int

    def __post_init__(self):
        if not 0 <= self.satisfied <= self.total:
            raise ValueError("need 0 <= satisfied <= total")

    @property
    def undefined(self) -> bool:
        return self.total == 0

    @property
    def phi_n(self) -> Fraction | None:
        return None if self.total == 0 else Fraction(self.satisfied, self.total)

    def to_json(self) -> dict:
        p = self.phi_n
        return {
            "n": self.n,
            "satisfied": str(self.satisfied),
            "total": str(self.total),
            "phi_n": "undefined" if p is None else f"{p.numerator}/{p.denominator}",
            "phi_n_decimal": None if p is None else float(p),
        }


def phi_n_exact(cls: ClassSpec, phi, n: int, budget: int = DEFAULT_EVAL_BUDGET,
                cap: int | None = None) -> FrequencyRow:
    if free_variables(phi):
        raise FormulaError("phi_n needs a sentence")
    if cls.kind == "colored" and max_color(phi) >= cls.template.n:
        raise FormulaError("colour atom outside the template's vertex range")
    sat = total = 0
    for g in cls.members(n, cap):
        total += 1
        if evaluate(phi, g, budget=budget):
            sat += 1
    return FrequencyRow(n, sat, total)


@dataclass(frozen=True)
class Estimate:
    estimate: float
    stderr: float
    trials: int
    seed: int
    weighted: bool = False

    def to_json(self) -> dict:
        return {"estimate": self.estimate, "stderr": self.stderr, "trials": self.trials,
                "seed": self.seed, "weighted": self.weighted}


def trial_seeds(seed: int, trials: int) -> list:
    """Per-trial 64-bit seeds drawn from MT19937 seeded with ``seed``."""
    rng = random.Random(seed)
    return [rng.getrandbits(64) for _ in range(trials)]


def phi_n_estimate(sampler: Callable[[int, int], object], phi, n: int, trials: int, seed: int,
                   weight: Callable[[object], float] | None = None, check=evaluate) -> Estimate:
    """Monte-Carlo ``phi_n``: ``sampler(n, seed)`` draws one structure.

    With ``weight`` the estimate is the self-normalised ratio
    ``sum w [M |= phi] / sum w`` and the error comes from the delta method.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if free_variables(phi):
        raise FormulaError("phi_n needs a sentence")
    hits, ws = [], []
    for s in trial_seeds(seed, trials):
        m = sampler(n, s)
        hits.append(1.0 if check(phi, m) else 0.0)
        ws.append(1.0 if weight is None else float(weight(m)))
    if weight is None:
        p = sum(hits) / trials
        return Estimate(p, math.sqrt(p * (1 - p) / trials), trials, seed)
    wsum = sum(ws)
    p = sum(w * h for w, h in zip(ws, hits)) / wsum
    mean_w = wsum / trials
    var = sum((w * (h - p)) ** 2 for w, h in zip(ws, hits)) / (trials * mean_w ** 2)
    return Estimate(p, math.sqrt(var / trials), trials, seed, weighted=True)


def colored_sampler(d: Digraph, forget: bool = False):
    """Uniform D-coloured sampler, optionally returning only the digraph."""
    def draw(n, seed):
        c = sample_uniform(d, n, seed)
        return c.graph if forget else c
    return draw


def hom_weight(d: Digraph):
    """Importance weight turning uniform coloured draws into uniform ``Csp(D)`` draws."""
    def w(m):
        g = m.graph if hasattr(m, "graph") else m
        return 1.0 / count_homs(g, d)
    return w
