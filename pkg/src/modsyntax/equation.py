"""Half-equations: morphism expressions between module expressions.

A half-equation is typed by :func:`infer_types` and run at a concrete monad
by :func:`eval_mor`. The monad must provide ``unit``, ``bind``,
``construct`` and ``signature`` (see :class:`~modsyntax.term.TermMonad`).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Any

from .errors import ShapeMismatch, TypeMismatch
from .modexpr import (
    FINAL, THETA, Comp, CompTheta, Deriv, Prod, ModExpr, canonical, deriv, gen_value,
    power, underive, value_eq,
)
from .signature import Signature


@dataclass(frozen=True)
class Id:
    m: Any = None


@dataclass(frozen=True)
class Compose:
    g: Any
    f: Any


@dataclass(frozen=True)
class Pair:
    items: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))


@dataclass(frozen=True)
class Proj:
    i: int
    of: Any = None


@dataclass(frozen=True)
class ConOp:
    name: str


@dataclass(frozen=True)
class LiftOp:
    """``op·Θ``: a raw constructor applied inside the outer layer of composites."""

    name: str


@dataclass(frozen=True)
class Eval:
    b: int


@dataclass(frozen=True)
class Rename:
    f: tuple
    q: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(self.f))

    @property
    def target(self) -> int:
        if self.q is not None:
            return self.q
        return max(self.f) + 1 if self.f else 0


@dataclass(frozen=True)
class DerivMor:
    f: Any


@dataclass(frozen=True)
class Join:
    pass


@dataclass(frozen=True)
class JoinDeriv:
    pass


@dataclass(frozen=True)
class ThetaSwap:
    pass


MorExpr = Id | Compose | Pair | Proj | ConOp | LiftOp | Eval | Rename | DerivMor | Join | JoinDeriv | ThetaSwap


def compose(*fs) -> MorExpr:
    """``compose(h, g, f) == Compose(h, Compose(g, f))``."""
    out = fs[-1]
    for g in reversed(fs[:-1]):
        out = Compose(g, out)
    return out


@dataclass(frozen=True)
class Equation:
    name: str
    lhs: Any
    rhs: Any
    dom: Any = field(default=None)

    def types(self, sig: Signature) -> tuple[ModExpr, ModExpr]:
        dl, cl = infer_types(self.lhs, sig, self.dom, "lhs")
        dr, cr = infer_types(self.rhs, sig, dl, "rhs")
        if cl != cr:
            raise TypeMismatch("rhs", cl, cr)
        return dl, cl


# ---------------------------------------------------------------------------
# typing

def _arity_types(sig: Signature, name: str, pos: str):
    ar = sig.arity(name)
    return power(deriv(THETA, a) for a in ar.dom), deriv(THETA, ar.codom), ar


def _expect(pos: str, want, got):
    if want is not None and canonical(want) != canonical(got):
        raise TypeMismatch(pos, canonical(want), canonical(got))


def infer_types(e: MorExpr, sig: Signature, dom: ModExpr | None = None, pos: str = "") -> tuple[ModExpr, ModExpr]:
    """Return canonical ``(domain, codomain)``; ``dom`` is the expected domain, if known.

    ``pos`` is a dotted path used in error messages (children of ``Compose``
    are ``g``/``f``, of ``Pair`` their index).
    """
    d, c = _infer(e, sig, dom, pos)
    return canonical(d), canonical(c)


def _infer(e, sig, dom, pos):
    def at(child):
        return f"{pos}.{child}" if pos else str(child)

    match e:
        case Id(m):
            m = m if m is not None else dom
            if m is None:
                raise TypeMismatch(pos, "a known domain", "untyped id")
            _expect(pos, dom, m)
            return m, m
        case Compose(g, f):
            df, cf = _infer(f, sig, dom, at("f"))
            dg, cg = _infer(g, sig, cf, at("g"))
            return df, cg
        case Pair(items):
            if not items:
                if dom is None:
                    raise TypeMismatch(pos, "a known domain", "empty pair")
                return dom, FINAL
            cods = []
            for i, f in enumerate(items):
                d, c = _infer(f, sig, dom, at(i))
                dom = d if dom is None else dom
                cods.append(c)
            return dom, Prod(tuple(cods))
        case Proj(i, of):
            shape = of if of is not None else dom
            if shape is None:
                raise TypeMismatch(pos, "a known domain", f"untyped proj {i}")
            _expect(pos, dom, shape)
            shape = canonical(shape)
            if not isinstance(shape, Prod) or not 0 <= i < len(shape.items):
                raise TypeMismatch(pos, f"a product with component {i}", shape)
            return shape, shape.items[i]
        case ConOp(name):
            d, c, _ = _arity_types(sig, name, pos)
            _expect(pos, dom, d)
            return d, c
        case LiftOp(name):
            ar = sig.arity(name)
            if not ar.raw:
                raise TypeMismatch(pos, "a raw operation", f"{name} with result degree {ar.codom}")
            d = power(CompTheta(THETA, a) for a in ar.dom)
            _expect(pos, dom, d)
            return d, CompTheta(THETA)
        case Eval(b):
            d = Prod((deriv(THETA, b),) + (THETA,) * b)
            _expect(pos, dom, d)
            return d, THETA
        case Rename():
            d = deriv(THETA, len(e.f))
            _expect(pos, dom, d)
            return d, deriv(THETA, e.target)
        case DerivMor(f):
            inner = None
            if dom is not None:
                inner = underive(dom)
                if inner is None:
                    raise TypeMismatch(pos, "a derived module", canonical(dom))
            d, c = _infer(f, sig, inner, at("d"))
            return Deriv(d), Deriv(c)
        case Join():
            d = CompTheta(THETA)
            _expect(pos, dom, d)
            return d, THETA
        case JoinDeriv():
            d = CompTheta(Deriv(THETA))
            _expect(pos, dom, d)
            return d, Deriv(THETA)
        case ThetaSwap():
            d = CompTheta(THETA, 1)
            _expect(pos, dom, d)
            return d, CompTheta(Deriv(THETA))
    raise TypeError(f"not a morphism expression: {e!r}")


# ---------------------------------------------------------------------------
# evaluation

def _units(M, start: int, count: int, n: int) -> list:
    return [M.unit(start + i, n) for i in range(count)]


def eval_mor(e: MorExpr, M, v, n: int):
    """Run ``e`` at monad ``M`` on a value of its domain at context ``n``."""
    match e:
        case Id():
            return v
        case Compose(g, f):
            return eval_mor(g, M, eval_mor(f, M, v, n), n)
        case Pair(items):
            return tuple(eval_mor(f, M, v, n) for f in items)
        case Proj(i):
            if not isinstance(v, tuple) or i >= len(v):
                raise ShapeMismatch(f"cannot project component {i}")
            return v[i]
        case ConOp(name):
            k = len(M.signature.arity(name).dom)
            args = () if k == 0 else (v,) if k == 1 else tuple(v)
            return M.construct(name, args, n)
        case LiftOp(name):
            dom = M.signature.arity(name).dom
            parts = (v,) if len(dom) == 1 else tuple(v)
            total = sum(p.k for p in parts)
            outers, env, offset = [], [], 0
            for p, a in zip(parts, dom):
                if not isinstance(p, Comp):
                    raise ShapeMismatch("lifted constructor expects composite records")
                images = _units(M, 0, a, total + a) + _units(M, a + offset, p.k, total + a)
                outers.append(M.bind(p.outer, images, total + a))
                env.extend(p.env)
                offset += p.k
            return Comp(total, M.construct(name, outers, total), tuple(env))
        case Eval():
            t, *params = v
            return M.bind(t, list(params) + _units(M, 0, n, n), n)
        case Rename():
            p, q = len(e.f), e.target
            images = [M.unit(j, n + q) for j in e.f] + _units(M, q, n, n + q)
            return M.bind(v, images, n + q)
        case DerivMor(f):
            return eval_mor(f, M, v, n + 1)
        case Join():
            return M.bind(v.outer, list(v.env), n)
        case JoinDeriv():
            return M.bind(v.outer, list(v.env), n + 1)
        case ThetaSwap():
            weakened = [M.bind(x, _units(M, 1, n, n + 1), n + 1) for x in v.env]
            return Comp(v.k + 1, v.outer, (M.unit(0, n + 1),) + tuple(weakened))
    raise TypeError(f"not a morphism expression: {e!r}")


# ---------------------------------------------------------------------------
# satisfaction

@dataclass(frozen=True)
class Counterexample:
    context: int
    sample: int
    value: Any
    lhs: Any
    rhs: Any


@dataclass(frozen=True)
class EquationReport:
    equation: str
    holds: bool
    checked: int
    counterexample: Counterexample | None = None
    skipped: int = 0


CONTEXTS = range(5)


def check_equation(eq: Equation, M, samples: int, seed: int, size: int = 6) -> EquationReport:
    """Sample the domain at contexts ``0..4`` (ascending) and compare both sides.

    Samples whose evaluation runs out of rewriting fuel are counted in
    ``skipped`` rather than treated as counterexamples.
    """
    from .errors import FuelExhausted, Uninhabited

    dom, cod = eq.types(M.signature)
    rng = random.Random(seed)
    checked = skipped = 0
    for n in CONTEXTS:
        count = samples // len(CONTEXTS) + (1 if n < samples % len(CONTEXTS) else 0)
        for i in range(count):
            try:
                v = gen_value(dom, M, n, size, rng)
            except Uninhabited:
                break
            try:
                lhs = eval_mor(eq.lhs, M, v, n)
                rhs = eval_mor(eq.rhs, M, v, n)
            except (FuelExhausted, RecursionError):
                skipped += 1
                continue
            checked += 1
            if not value_eq(cod, lhs, rhs):
                return EquationReport(eq.name, False, checked, Counterexample(n, i, v, lhs, rhs), skipped)
    return EquationReport(eq.name, True, checked, None, skipped)
