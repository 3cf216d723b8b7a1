"""First-order formulas over digraphs with optional colour predicates.

Text grammar (loosest binding first)::

    formula  := ("forall" | "exists") var+ "." formula | implies
    implies  := disj ["->" implies]            (right associative)
    disj     := conj ("|" conj)*
    conj     := unary ("&" unary)*
    unary    := "!" unary | "(" formula ")" | quantified | atom
    atom     := "E(" var "," var ")" | var "=" var | var "!=" var
              | "P" digits "(" var ")" | "true" | "false"

A quantifier body extends as far to the right as possible.  Variables are
identifiers other than the keywords; colours are 0-based (``P0``, ``P1``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    x: str
    y: str


@dataclass(frozen=True)
class Eq:
    x: str
    y: str


@dataclass(frozen=True)
class Color:
    v: int
    x: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Not:
    body: object


@dataclass(frozen=True)
class And:
    parts: tuple


@dataclass(frozen=True)
class Or:
    parts: tuple


@dataclass(frozen=True)
class Implies:
    left: object
    right: object


@dataclass(frozen=True)
class Forall:
    variables: tuple
    body: object


@dataclass(frozen=True)
class Exists:
    variables: tuple
    body: object


ATOMS = (Edge, Eq, Color, Top, Bot)


def conj(*parts):
    parts = tuple(parts)
    if not parts:
        return Top()
    return parts[0] if len(parts) == 1 else And(parts)


def disj(*parts):
    parts = tuple(parts)
    if not parts:
        return Bot()
    return parts[0] if len(parts) == 1 else Or(parts)


def exists(variables, body):
    variables = tuple(variables)
    return Exists(variables, body) if variables else body


def forall(variables, body):
    variables = tuple(variables)
    return Forall(variables, body) if variables else body


def free_variables(phi) -> frozenset:
    if isinstance(phi, (Edge, Eq)):
        return frozenset((phi.x, phi.y))
    if isinstance(phi, Color):
        return frozenset((phi.x,))
    if isinstance(phi, (Top, Bot)):
        return frozenset()
    if isinstance(phi, Not):
        return free_variables(phi.body)
    if isinstance(phi, (And, Or)):
        return frozenset().union(*(free_variables(p) for p in phi.parts))
    if isinstance(phi, Implies):
        return free_variables(phi.left) | free_variables(phi.right)
    if isinstance(phi, (Forall, Exists)):
        return free_variables(phi.body) - set(phi.variables)
    raise TypeError(f"not a formula: {phi!r}")


def is_sentence(phi) -> bool:
    return not free_variables(phi)


def uses_colors(phi) -> bool:
    return any(isinstance(a, Color) for a in subformulas(phi))


def max_color(phi) -> int:
    return max((a.v for a in subformulas(phi) if isinstance(a, Color)), default=-1)


def subformulas(phi):
    yield phi
    if isinstance(phi, Not):
        yield from subformulas(phi.body)
    elif isinstance(phi, (And, Or)):
        for p in phi.parts:
            yield from subformulas(p)
    elif isinstance(phi, Implies):
        yield from subformulas(phi.left)
        yield from subformulas(phi.right)
    elif isinstance(phi, (Forall, Exists)):
        yield from subformulas(phi.body)


def quantifier_depth(phi) -> int:
    """Nesting depth counting every bound variable of a block."""
    if isinstance(phi, ATOMS):
        return 0
    if isinstance(phi, Not):
        return quantifier_depth(phi.body)
    if isinstance(phi, (And, Or)):
        return max((quantifier_depth(p) for p in phi.parts), default=0)
    if isinstance(phi, Implies):
        return max(quantifier_depth(phi.left), quantifier_depth(phi.right))
    return len(phi.variables) + quantifier_depth(phi.body)


# ----------------------------------------------------------------- printing

_PREC = {Implies: 1, Or: 2, And: 3}


def to_text(phi) -> str:
    return _show(phi, 0)


def _show(phi, ctx: int) -> str:
    if isinstance(phi, Edge):
        return f"E({phi.x},{phi.y})"
    if isinstance(phi, Eq):
        return f"{phi.x} = {phi.y}"
    if isinstance(phi, Color):
        return f"P{phi.v}({phi.x})"
    if isinstance(phi, Top):
        return "true"
    if isinstance(phi, Bot):
        return "false"
    if isinstance(phi, Not):
        if isinstance(phi.body, Eq):
            return f"{phi.body.x} != {phi.body.y}"
        return "!" + _show(phi.body, 4)
    if isinstance(phi, (Forall, Exists)):
        word = "forall" if isinstance(phi, Forall) else "exists"
        text = f"{word} {' '.join(phi.variables)}. {_show(phi.body, 0)}"
        return text if ctx == 0 else f"({text})"
    prec = _PREC[type(phi)]
    if isinstance(phi, Implies):
        text = f"{_show(phi.left, prec + 1)} -> {_show(phi.right, prec)}"
    else:
        if not phi.parts:
            return "true" if isinstance(phi, And) else "false"
        sep = " & " if isinstance(phi, And) else " | "
        text = sep.join(_show(p, prec + 1) for p in phi.parts)
        if len(phi.parts) == 1:
            text = f"({text})"
    return f"({text})" if ctx > prec else text


# ------------------------------------------------------------------ parsing

_TOKEN = re.compile(r"\s*(->|!=|[()&|!.,=]|[A-Za-z_][A-Za-z0-9_]*)")
KEYWORDS = {"forall", "exists", "true", "false", "E"}


def _tokens(text: str) -> list:
    out, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise FormulaError(f"unexpected character at {pos}: {text[pos:pos + 10]!r}")
        out.append(m.group(1))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, expected=None):
        tok = self.peek()
        if tok is None or (expected is not None and tok != expected):
            raise FormulaError(f"expected {expected or 'a token'}, found {tok!r}")
        self.i += 1
        return tok

    def var(self):
        tok = self.take()
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", tok) or tok in KEYWORDS \
                or re.fullmatch(r"P\d+", tok):
            raise FormulaError(f"bad variable name {tok!r}")
        return tok

    def formula(self):
        if self.peek() in ("forall", "exists"):
            return self.quantified()
        return self.implies()

    def quantified(self):
        word = self.take()
        names = []
        while self.peek() not in (".", None):
            names.append(self.var())
            if self.peek() == ",":
                self.take()
        if not names:
            raise FormulaError(f"{word} needs at least one variable")
        self.take(".")
        body = self.formula()
        return (Forall if word == "forall" else Exists)(tuple(names), body)

    def implies(self):
        left = self.disj()
        if self.peek() == "->":
            self.take()
            return Implies(left, self.formula())
        return left

    def disj(self):
        parts = [self.conj()]
        while self.peek() == "|":
            self.take()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self):
        parts = [self.unary()]
        while self.peek() == "&":
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self):
        tok = self.peek()
        if tok == "!":
            self.take()
            return Not(self.unary())
        if tok == "(":
            self.take()
            inner = self.formula()
            self.take(")")
            return inner
        if tok in ("forall", "exists"):
            return self.quantified()
        if tok == "true":
            self.take()
            return Top()
        if tok == "false":
            self.take()
            return Bot()
        if tok == "E" and self.i + 1 < len(self.toks) and self.toks[self.i + 1] == "(":
            self.take()
            self.take("(")
            x = self.var()
            self.take(",")
            y = self.var()
            self.take(")")
            return Edge(x, y)
        if tok is not None and re.fullmatch(r"P\d+", tok):
            self.take()
            self.take("(")
            x = self.var()
            self.take(")")
            return Color(int(tok[1:]), x)
        x = self.var()
        op = self.take()
        if op == "=":
            return Eq(x, self.var())
        if op == "!=":
            return Not(Eq(x, self.var()))
        raise FormulaError(f"expected '=' or '!=' after {x!r}, found {op!r}")


def parse(text: str):
    p = _Parser(text)
    phi = p.formula()
    if p.peek() is not None:
        raise FormulaError(f"trailing input starting at {p.peek()!r}")
    return phi


def parse_sentence(text: str):
    phi = parse(text)
    free = free_variables(phi)
    if free:
        raise FormulaError(f"not a sentence; free variables {sorted(free)}")
    return phi
