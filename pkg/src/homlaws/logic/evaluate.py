"""Two independent model checkers.

``evaluate`` is the reference: Tarskian recursion over assignments with
short-circuiting, guarded by ``n ** depth``.  ``evaluate_tensor`` computes the
satisfying assignments of every subformula as a boolean numpy array indexed by
its free variables; an existential block over a conjunction becomes one
``einsum`` so that extension axioms can be checked on a few hundred vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from string import ascii_letters

import numpy as np

from ..colored import ColoredDigraph
from ..structures import CapExceeded, Digraph, UGraph
from .syntax import (
    And, Bot, Color, Edge, Eq, Exists, Forall, FormulaError, Implies, Not, Or, Top,
    free_variables, max_color, quantifier_depth,
)

DEFAULT_EVAL_BUDGET = 10 ** 7
DEFAULT_TENSOR_BUDGET = 10 ** 7


@dataclass(frozen=True)
class Model:
    n: int
    out: tuple
    color: tuple | None

    @classmethod
    def of(cls, m) -> "Model":
        if isinstance(m, Model):
            return m
        if isinstance(m, ColoredDigraph):
            return cls(m.n, m.graph.out_mask, m.color)
        if isinstance(m, UGraph):
            m = m.as_digraph()
        if isinstance(m, Digraph):
            return cls(m.n, m.out_mask, None)
        raise TypeError(f"cannot evaluate over {type(m).__name__}")


def _check(phi, model: Model, env_vars=()):
    free = free_variables(phi) - set(env_vars)
    if free:
        raise FormulaError(f"free variables {sorted(free)} have no value")
    if max_color(phi) >= 0 and model.color is None:
        raise FormulaError("colour atoms need a coloured structure")


def evaluate(phi, m, env: dict | None = None, budget: int = DEFAULT_EVAL_BUDGET) -> bool:
    """``M |= phi`` under the assignment ``env``."""
    model = Model.of(m)
    env = dict(env or {})
    _check(phi, model, env)
    cost = model.n ** quantifier_depth(phi)
    if cost > budget:
        raise CapExceeded(f"evaluation needs about {cost} assignments (budget {budget})")
    return _ev(phi, model, env)


def _ev(phi, m: Model, env: dict) -> bool:
    if isinstance(phi, Edge):
        return bool(m.out[env[phi.x]] >> env[phi.y] & 1)
    if isinstance(phi, Eq):
        return env[phi.x] == env[phi.y]
    if isinstance(phi, Color):
        return m.color[env[phi.x]] == phi.v
    if isinstance(phi, Top):
        return True
    if isinstance(phi, Bot):
        return False
    if isinstance(phi, Not):
        return not _ev(phi.body, m, env)
    if isinstance(phi, And):
        return all(_ev(p, m, env) for p in phi.parts)
    if isinstance(phi, Or):
        return any(_ev(p, m, env) for p in phi.parts)
    if isinstance(phi, Implies):
        return not _ev(phi.left, m, env) or _ev(phi.right, m, env)
    if isinstance(phi, (Exists, Forall)):
        want = isinstance(phi, Exists)
        return _quant(phi.variables, phi.body, m, env, want) == want
    raise TypeError(f"not a formula: {phi!r}")


def _quant(variables, body, m: Model, env: dict, want: bool) -> bool:
    # True iff some assignment makes body == want
    if not variables:
        return _ev(body, m, env) == want
    x, rest = variables[0], variables[1:]
    saved = env.get(x, None)
    had = x in env
    try:
        for a in range(m.n):
            env[x] = a
            if _quant(rest, body, m, env, want):
                return True
        return False
    finally:
        if had:
            env[x] = saved
        else:
            env.pop(x, None)


# -------------------------------------------------------------- tensor engine

class _Rel:
    """Boolean array over the sorted tuple ``vars``."""

    __slots__ = ("vars", "arr")

    def __init__(self, variables: tuple, arr: np.ndarray):
        self.vars = variables
        self.arr = arr


def _expand(r: _Rel, target: tuple) -> np.ndarray:
    shape = [r.arr.shape[r.vars.index(v)] if v in r.vars else 1 for v in target]
    return r.arr.reshape(shape)


def _combine(rels, op) -> _Rel:
    target = tuple(sorted(set().union(*(r.vars for r in rels))))
    out = _expand(rels[0], target)
    for r in rels[1:]:
        out = op(out, _expand(r, target))
    return _Rel(target, out)


class _Tensor:
    def __init__(self, m: Model, budget: int):
        self.n = m.n
        self.budget = budget
        adj = np.zeros((m.n, m.n), dtype=bool)
        for u, row in enumerate(m.out):
            if row:
                bits = np.frombuffer(row.to_bytes((m.n + 7) // 8, "little"), dtype=np.uint8)
                adj[u] = np.unpackbits(bits, bitorder="little")[:m.n].astype(bool)
        self.adj = adj
        self.color = None if m.color is None else np.array(m.color)

    def guard(self, k: int):
        if self.n ** k > self.budget:
            raise CapExceeded(f"tensor over {k} variables exceeds budget {self.budget}")

    def rel(self, phi) -> _Rel:
        n = self.n
        if isinstance(phi, Edge):
            if phi.x == phi.y:
                return _Rel((phi.x,), np.diagonal(self.adj).copy())
            return _Rel((phi.x, phi.y), self.adj) if phi.x < phi.y else _Rel((phi.y, phi.x), self.adj.T)
        if isinstance(phi, Eq):
            if phi.x == phi.y:
                return _Rel((), np.array(True))
            return _Rel(tuple(sorted((phi.x, phi.y))), np.eye(n, dtype=bool))
        if isinstance(phi, Color):
            return _Rel((phi.x,), self.color == phi.v)
        if isinstance(phi, Top):
            return _Rel((), np.array(True))
        if isinstance(phi, Bot):
            return _Rel((), np.array(False))
        if isinstance(phi, Not):
            r = self.rel(phi.body)
            return _Rel(r.vars, ~r.arr)
        if isinstance(phi, (And, Or)):
            if not phi.parts:
                return _Rel((), np.array(isinstance(phi, And)))
            rels = [self.rel(p) for p in phi.parts]
            self.guard(len(set().union(*(r.vars for r in rels))))
            return _combine(rels, np.logical_and if isinstance(phi, And) else np.logical_or)
        if isinstance(phi, Implies):
            a, b = self.rel(phi.left), self.rel(phi.right)
            self.guard(len(set(a.vars) | set(b.vars)))
            return _combine([_Rel(a.vars, ~a.arr), b], np.logical_or)
        if isinstance(phi, Exists):
            return self.exists(phi.variables, _conjuncts(phi.body))
        if isinstance(phi, Forall):
            r = self.exists(phi.variables, _conjuncts(Not(phi.body)))
            return _Rel(r.vars, ~r.arr)
        raise TypeError(f"not a formula: {phi!r}")

    def exists(self, variables, parts) -> _Rel:
        bound = set(variables)
        rels = [self.rel(p) for p in parts]
        outside = [r for r in rels if not bound & set(r.vars)]
        inside = [r for r in rels if bound & set(r.vars)]
        if self.n == 0:
            return _Rel((), np.array(False))
        # merge factors over the same variables before contracting
        merged: dict = {}
        for r in inside:
            merged[r.vars] = merged[r.vars] & r.arr if r.vars in merged else r.arr
        if merged:
            keep = sorted(set().union(*merged) - bound)
            self.guard(len(keep))
            letters = {v: ascii_letters[i] for i, v in
                       enumerate(sorted(set().union(*merged)))}
            spec = ",".join("".join(letters[v] for v in vs) for vs in merged)
            spec += "->" + "".join(letters[v] for v in keep)
            ops = [a.astype(np.float64) for a in merged.values()]
            counts = np.einsum(spec, *ops, optimize="greedy") if len(ops) > 1 \
                else np.einsum(spec, ops[0])
            inner = _Rel(tuple(keep), np.asarray(counts) > 0)
        else:
            inner = _Rel((), np.array(True))
        # bound variables absent from every factor range over a non-empty domain
        return _combine([inner] + outside, np.logical_and) if outside else inner


def _conjuncts(phi) -> list:
    """Flatten ``phi`` into a list whose conjunction is equivalent to it."""
    if isinstance(phi, And):
        return [c for p in phi.parts for c in _conjuncts(p)]
    if isinstance(phi, Not):
        b = phi.body
        if isinstance(b, Not):
            return _conjuncts(b.body)
        if isinstance(b, Or):
            return [c for p in b.parts for c in _conjuncts(Not(p))]
        if isinstance(b, Implies):
            return _conjuncts(b.left) + _conjuncts(Not(b.right))
    return [phi]


class TensorModel:
    """A structure prepared once for many ``evaluate_tensor`` calls."""

    def __init__(self, m, budget: int = DEFAULT_TENSOR_BUDGET):
        self.model = Model.of(m)
        self.engine = _Tensor(self.model, budget)


def evaluate_tensor(phi, m, budget: int = DEFAULT_TENSOR_BUDGET) -> bool:
    """Truth value of a sentence, computed with boolean tensors."""
    prepared = m if isinstance(m, TensorModel) else TensorModel(m, budget)
    _check(phi, prepared.model)
    return bool(prepared.engine.rel(phi).arr)
