"""Module expressions over the term monad and their values.

Values at context ``n``:

* ``Theta``          a term in ``n``
* ``Final``          the empty tuple ``()``
* ``Prod(ms)``       a tuple of values
* ``Deriv(m)``       a value of ``m`` at ``n + 1``
* ``CompTheta(m,d)`` a :class:`Comp` record ``(k, outer, env)``: ``outer`` is a
  term in ``k + d`` whose indices ``>= d`` point into ``env``, a tuple of
  ``k`` values of ``m`` at ``n``. ``d = 0`` is the usual ``Θ·m``; ``d = 1``
  gives ``Θ′·m``.

``Deriv`` distributes over products and composites, so the canonical form of
a module expression only keeps ``Deriv`` directly around ``Theta``; shapes with
the same canonical form have literally the same values.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any

from .errors import ShapeMismatch, Uninhabited
from .signature import Signature
from .term import Con, Substitution, TermMonad, Var, free_bound, lift, substitute


@dataclass(frozen=True)
class Theta:
    def __str__(self) -> str:
        return "T"


@dataclass(frozen=True)
class Final:
    def __str__(self) -> str:
        return "*"


@dataclass(frozen=True)
class Prod:
    items: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "items", tuple(self.items))

    def __str__(self) -> str:
        return "(x" + "".join(" " + str(m) for m in self.items) + ")"


@dataclass(frozen=True)
class Deriv:
    m: Any

    def __str__(self) -> str:
        return f"(d {self.m})"


@dataclass(frozen=True)
class CompTheta:
    m: Any
    outer_deriv: int = 0

    def __str__(self) -> str:
        if self.outer_deriv:
            return f"(comp {self.outer_deriv} {self.m})"
        return f"(comp {self.m})"


ModExpr = Theta | Final | Prod | Deriv | CompTheta

THETA = Theta()
FINAL = Final()


def deriv(m: ModExpr, k: int = 1) -> ModExpr:
    for _ in range(k):
        m = Deriv(m)
    return m


def power(items) -> ModExpr:
    """``M^(a)``: the final module, a single factor, or a product."""
    items = tuple(items)
    if not items:
        return FINAL
    if len(items) == 1:
        return items[0]
    return Prod(items)


def canonical(m: ModExpr) -> ModExpr:
    match m:
        case Theta() | Final():
            return m
        case Prod(items):
            return Prod(tuple(canonical(x) for x in items)) if items else FINAL
        case CompTheta(inner, d):
            return CompTheta(canonical(inner), d)
        case Deriv(inner):
            c = canonical(inner)
            match c:
                case Theta() | Deriv():
                    return Deriv(c)
                case Final():
                    return c
                case Prod(items):
                    return Prod(tuple(canonical(Deriv(x)) for x in items))
                case CompTheta(mm, d):
                    return CompTheta(canonical(Deriv(mm)), d)
    raise TypeError(f"not a module expression: {m!r}")


def underive(m: ModExpr) -> ModExpr | None:
    """A canonical ``x`` with ``canonical(Deriv(x)) == canonical(m)``, if any."""
    match canonical(m):
        case Deriv(inner):
            return inner
        case Final():
            return FINAL
        case Prod(items):
            parts = [underive(x) for x in items]
            return None if any(p is None for p in parts) else Prod(tuple(parts))
        case CompTheta(mm, d):
            inner = underive(mm)
            return None if inner is None else CompTheta(inner, d)
    return None


def same_shape(a: ModExpr, b: ModExpr) -> bool:
    return canonical(a) == canonical(b)


def theta_degree(m: ModExpr) -> int | None:
    """``k`` if ``m`` is ``Θ^(k)``, else ``None``."""
    k = 0
    m = canonical(m)
    while isinstance(m, Deriv):
        m, k = m.m, k + 1
    return k if isinstance(m, Theta) else None


@dataclass(frozen=True)
class Comp:
    k: int
    outer: Any
    env: tuple

    def __post_init__(self):
        object.__setattr__(self, "env", tuple(self.env))


# ---------------------------------------------------------------------------
# shapes

@dataclass(frozen=True)
class TermShape:
    context: int

    def __str__(self) -> str:
        return f"Term in {self.context}"


@dataclass(frozen=True)
class UnitShape:
    def __str__(self) -> str:
        return "unit"


@dataclass(frozen=True)
class TupleShape:
    items: tuple

    def __str__(self) -> str:
        return "(" + ", ".join(map(str, self.items)) + ")"


@dataclass(frozen=True)
class CompShape:
    outer_offset: int
    env: Any

    def __str__(self) -> str:
        outer = "k" if not self.outer_offset else f"k+{self.outer_offset}"
        env = str(self.env)
        if isinstance(self.env, TermShape):
            env = env.replace("Term in", "Terms in")
        return f"{{k, Term in {outer}, k {env}}}"


def value_at(m: ModExpr, n: int):
    match m:
        case Theta():
            return TermShape(n)
        case Final():
            return UnitShape()
        case Prod(items):
            return TupleShape(tuple(value_at(x, n) for x in items)) if items else UnitShape()
        case Deriv(inner):
            return value_at(inner, n + 1)
        case CompTheta(inner, d):
            return CompShape(d, value_at(inner, n))
    raise TypeError(f"not a module expression: {m!r}")


def check_value(m: ModExpr, v, n: int, sig: Signature | None = None) -> bool:
    """Shape check (and scope check when ``sig`` is given)."""
    from .term import check_scope

    match m:
        case Theta():
            if not isinstance(v, (Var, Con)):
                return False
            return check_scope(sig, v, n) if sig is not None else free_bound(v) <= n
        case Final():
            return v == ()
        case Prod(items):
            return (isinstance(v, tuple) and len(v) == len(items)
                    and all(check_value(x, y, n, sig) for x, y in zip(items, v)))
        case Deriv(inner):
            return check_value(inner, v, n + 1, sig)
        case CompTheta(inner, d):
            if not isinstance(v, Comp) or len(v.env) != v.k:
                return False
            ok = check_value(THETA, v.outer, v.k + d, sig)
            return ok and all(check_value(inner, e, n, sig) for e in v.env)
    return False


# ---------------------------------------------------------------------------
# equality

@dataclass(frozen=True)
class Label:
    value: Any


def _labeled(t, offset: int, labels: list, depth: int = 0):
    if type(t) is Var:
        i = t.index - depth - offset
        return t if i < 0 else Label(labels[i])
    return Con(t.op, tuple(_labeled(a, offset, labels, depth + b) for a, b in zip(t.args, t.binders)), t.binders)


def canonical_value(m: ModExpr, v):
    """Canonical representative; composite records become labeled trees."""
    match m:
        case Theta() | Final():
            return v
        case Deriv(inner):
            return canonical_value(inner, v)
        case Prod(items):
            if not isinstance(v, tuple) or len(v) != len(items):
                raise ShapeMismatch(f"expected a {len(items)}-tuple for {m}")
            return tuple(canonical_value(x, y) for x, y in zip(items, v))
        case CompTheta(inner, d):
            if not isinstance(v, Comp):
                raise ShapeMismatch(f"expected a composite record for {m}")
            labels = [canonical_value(inner, e) for e in v.env]
            try:
                return _labeled(v.outer, d, labels)
            except IndexError:
                raise ShapeMismatch("outer term escapes its environment") from None
    raise TypeError(f"not a module expression: {m!r}")


def value_eq(m: ModExpr, a, b) -> bool:
    return canonical_value(m, a) == canonical_value(m, b)


# ---------------------------------------------------------------------------
# module action

def action(m: ModExpr, v, sigma: Substitution, monad=None):
    """Right action of ``sigma : n -> n'`` on a value at ``n``.

    With ``monad`` given, terms are acted on through ``monad.bind`` so the
    action stays inside a quotient.
    """
    match m:
        case Theta():
            if monad is None:
                return substitute(v, sigma)
            return monad.bind(v, sigma.images, sigma.target)
        case Final():
            return ()
        case Prod(items):
            if len(v) != len(items):
                raise ShapeMismatch(f"expected a {len(items)}-tuple for {m}")
            return tuple(action(x, y, sigma, monad) for x, y in zip(items, v))
        case Deriv(inner):
            return action(inner, v, lift(sigma, 1), monad)
        case CompTheta(inner, _):
            return Comp(v.k, v.outer, tuple(action(inner, e, sigma, monad) for e in v.env))
    raise TypeError(f"not a module expression: {m!r}")


# ---------------------------------------------------------------------------
# generation

def gen_value(m: ModExpr, source, n: int, size: int, seed):
    """Random value of ``m`` at ``n``; ``source`` is a signature or a monad with ``gen``."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    monad = TermMonad(source) if isinstance(source, Signature) else source
    match m:
        case Theta():
            return monad.gen(n, size, rng)
        case Final():
            return ()
        case Prod(items):
            return tuple(gen_value(x, monad, n, size, rng) for x in items)
        case Deriv(inner):
            return gen_value(inner, monad, n + 1, size, rng)
        case CompTheta(inner, d):
            k = rng.randint(0, size)
            try:
                outer = monad.gen(k + d, size, rng)
            except Uninhabited:
                k = max(k, 1)
                outer = monad.gen(k + d, size, rng)
            env = tuple(gen_value(inner, monad, n, size, rng) for _ in range(k))
            return Comp(k, outer, env)
    raise TypeError(f"not a module expression: {m!r}")
