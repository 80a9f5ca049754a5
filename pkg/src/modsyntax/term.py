"""Well-scoped de Bruijn terms: the free term monad of an algebraic signature.

A term lives in a context ``n`` (its free variables are ``0 .. n-1``).
Argument ``j`` of a node whose op binds ``aj`` variables lives in context
``n + aj``; the bound variables are the innermost indices ``0 .. aj-1``.

Nodes record the binding depth of each argument (``Con.binders``), so
renaming and substitution never need to consult a signature. Only flattened
(raw) ops are ever stored; :func:`con` elaborates ops with a derived result.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Any, Callable, Mapping, Protocol, Sequence

from .errors import ArityMismatch, MissingOp, OutOfScope, ScopeMismatch, Uninhabited, UnknownOp
from .signature import Signature


@dataclass(frozen=True, slots=True)
class Var:
    index: int

    def __str__(self) -> str:
        return f"v{self.index}"


@dataclass(frozen=True, slots=True)
class Con:
    op: str
    args: tuple = ()
    binders: tuple[int, ...] = ()

    def __str__(self) -> str:
        # explicit stack: runaway terms may be deeper than the recursion limit
        parts, stack = [], [self]
        while stack:
            t = stack.pop()
            if type(t) is str:
                parts.append(t)
            elif type(t) is Var:
                parts.append(f"v{t.index}")
            elif not t.args:
                parts.append(f"({t.op})")
            else:
                parts.append(f"({t.op}")
                stack.append(")")
                for a in reversed(t.args):
                    stack.append(a)
                    stack.append(" ")
        return "".join(parts)


Term = Var | Con


def size(t: Term) -> int:
    if type(t) is Var:
        return 1
    return 1 + sum(size(a) for a in t.args)


_count = size


def free_bound(t: Term, depth: int = 0) -> int:
    """Smallest ``n`` such that every free variable of ``t`` is below ``n``."""
    if type(t) is Var:
        return t.index - depth + 1 if t.index >= depth else 0
    return max((free_bound(a, depth + b) for a, b in zip(t.args, t.binders)), default=0)


def occurs(t: Term, index: int) -> bool:
    if type(t) is Var:
        return t.index == index
    return any(occurs(a, index + b) for a, b in zip(t.args, t.binders))


# ---------------------------------------------------------------------------
# construction and scope

def var(i: int, n: int) -> Var:
    if not 0 <= i < n:
        raise OutOfScope(f"v{i} is not in context {n}")
    return Var(i)


def check_scope(sig: Signature, t: Term, n: int) -> bool:
    if type(t) is Var:
        return 0 <= t.index < n
    ar = sig.flat.op_map.get(t.op)
    if ar is None or len(t.args) != len(ar.dom) or tuple(t.binders) != ar.dom:
        return False
    return all(check_scope(sig, a, n + b) for a, b in zip(t.args, t.binders))


def con(sig: Signature, op: str, args: Sequence[Term], n: int) -> Term:
    """Apply ``op`` to ``args`` in context ``n``.

    For an op with result degree ``t > 0`` the value lives in ``n + t``: the
    arguments are weakened past their own bound variables and the flattened
    op receives ``v(t-1), ..., v0`` as trailing arguments.
    """
    ar = sig.arity(op)
    if len(args) != len(ar.dom):
        raise ArityMismatch(f"{op} expects {len(ar.dom)} arguments, got {len(args)}")
    for j, (a, d) in enumerate(zip(args, ar.dom)):
        if not check_scope(sig, a, n + d):
            raise OutOfScope(f"argument {j} of {op} is not well scoped in context {n + d}")
    t = ar.codom
    if t == 0:
        return Con(op, tuple(args), ar.dom)
    lifted = tuple(shift(a, t, d) for a, d in zip(args, ar.dom))
    extras = tuple(Var(i) for i in range(t - 1, -1, -1))
    return Con(op, lifted + extras, ar.dom + (0,) * t)


# ---------------------------------------------------------------------------
# renaming, weakening, substitution

def shift(t: Term, k: int, cutoff: int = 0) -> Term:
    """Add ``k`` to every variable index ``>= cutoff`` (free ones only)."""
    if k == 0:
        return t
    if type(t) is Var:
        return Var(t.index + k) if t.index >= cutoff else t
    return Con(t.op, tuple(shift(a, k, cutoff + b) for a, b in zip(t.args, t.binders)), t.binders)


def weaken(t: Term, n: int, k: int) -> Term:
    """Move ``t`` from context ``n`` to ``n + k``; the new indices ``0 .. k-1`` stay unused."""
    return shift(t, k)


def _rename(t: Term, f: Sequence[int], depth: int) -> Term:
    if type(t) is Var:
        i = t.index
        return t if i < depth else Var(f[i - depth] + depth)
    return Con(t.op, tuple(_rename(a, f, depth + b) for a, b in zip(t.args, t.binders)), t.binders)


def rename(t: Term, f: Sequence[int], m: int | None = None) -> Term:
    """Relabel free variables along the total map ``f : n -> m``."""
    if m is not None and any(not 0 <= j < m for j in f):
        raise OutOfScope(f"renaming {list(f)} leaves context {m}")
    try:
        return _rename(t, f, 0)
    except IndexError:
        raise OutOfScope(f"term is not in the domain of renaming {list(f)}") from None


@dataclass(frozen=True)
class Substitution:
    """Images of the variables of ``source``, each a term in ``target``."""

    source: int
    target: int
    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.source:
            raise ScopeMismatch(f"{len(self.images)} images for a context of size {self.source}")
        for i, img in enumerate(self.images):
            if free_bound(img) > self.target:
                raise ScopeMismatch(f"image {i} ({img}) is not in context {self.target}")

    @classmethod
    def identity(cls, n: int) -> Substitution:
        return cls(n, n, tuple(Var(i) for i in range(n)))

    @classmethod
    def from_renaming(cls, f: Sequence[int], m: int) -> Substitution:
        return cls(len(f), m, tuple(Var(j) for j in f))


def lift(sigma: Substitution, a: int) -> Substitution:
    """Push ``sigma`` under ``a`` binders: bound variables map to themselves."""
    if a == 0:
        return sigma
    images = tuple(Var(i) for i in range(a)) + tuple(shift(img, a) for img in sigma.images)
    return Substitution(sigma.source + a, sigma.target + a, images)


def _subst(t: Term, images: tuple, depth: int) -> Term:
    if type(t) is Var:
        i = t.index
        if i < depth:
            return t
        img = images[i - depth]
        return shift(img, depth) if depth else img
    return Con(t.op, tuple(_subst(a, images, depth + b) for a, b in zip(t.args, t.binders)), t.binders)


def substitute(t: Term, sigma: Substitution) -> Term:
    try:
        return _subst(t, sigma.images, 0)
    except IndexError:
        raise ScopeMismatch(f"term is not in the source context {sigma.source}") from None


def compose(sigma: Substitution, tau: Substitution) -> Substitution:
    """``i -> substitute(sigma.images[i], tau)``."""
    if sigma.target != tau.source:
        raise ScopeMismatch(f"cannot compose {sigma.source}->{sigma.target} with {tau.source}->{tau.target}")
    return Substitution(sigma.source, tau.target, tuple(substitute(x, tau) for x in sigma.images))


def eval_params(t: Term, params: Sequence[Term], n: int) -> Term:
    """Fill the ``b = len(params)`` outer stars of ``t`` (context ``n + b``)."""
    b = len(params)
    return substitute(t, Substitution(n + b, n, tuple(params) + tuple(Var(i) for i in range(n))))


# ---------------------------------------------------------------------------
# representations and the initiality fold

class Monad(Protocol):
    def unit(self, i: int, n: int) -> Any: ...

    def bind(self, x: Any, images: Sequence[Any], m: int) -> Any: ...

    def equal(self, a: Any, b: Any) -> bool: ...


OpFn = Callable[[list, int], Any]


@dataclass(frozen=True)
class Representation:
    """A carrier monad plus, for every flattened op, ``fn(args, n) -> element``.

    ``args[j]`` is an element in context ``n + aj``.
    """

    monad: Any
    ops: Mapping[str, OpFn]

    def restrict(self, names) -> Representation:
        names = set(names)
        return Representation(self.monad, {k: v for k, v in self.ops.items() if k in names})


def flattened_op(monad, surface: OpFn, ndom: int, codom: int) -> OpFn:
    """Raw interpretation of an op given as ``surface(args, n)`` landing ``codom`` derivatives up.

    The trailing arguments of the flattened op fill the result's stars in
    reverse order, matching the elaboration done by :func:`con`.
    """
    if codom == 0:
        return surface

    def fn(args, n):
        y = surface(list(args[:ndom]), n)
        extras = list(args[ndom:])[::-1]
        return monad.bind(y, extras + [monad.unit(i, n) for i in range(n)], n)

    return fn


def fold(sig: Signature, rep: Representation, t: Term, n: int):
    """The unique representation morphism from free syntax into ``rep``."""
    flat = sig.flat.op_map
    ops = rep.ops
    unit = rep.monad.unit

    def go(t, n):
        if type(t) is Var:
            return unit(t.index, n)
        if t.op not in flat:
            raise UnknownOp(t.op)
        fn = ops.get(t.op)
        if fn is None:
            raise MissingOp(t.op)
        return fn([go(a, n + b) for a, b in zip(t.args, t.binders)], n)

    return go(t, n)


# ---------------------------------------------------------------------------
# free term monad

class TermMonad:
    """The initial representation of ``sig``: terms with substitution."""

    def __init__(self, sig: Signature):
        self.signature = sig

    def unit(self, i: int, n: int) -> Term:
        return var(i, n)

    def bind(self, x: Term, images: Sequence[Term], m: int) -> Term:
        return self.normal(substitute(x, Substitution(len(images), m, tuple(images))))

    def equal(self, a: Term, b: Term) -> bool:
        return a == b

    def normal(self, t: Term) -> Term:
        return t

    def construct(self, op: str, args: Sequence[Term], n: int) -> Term:
        return self.normal(con(self.signature, op, args, n))

    def construct_flat(self, op: str, args: Sequence[Term], n: int) -> Term:
        return self.normal(con(self.signature.flat, op, args, n))

    def lift(self, images: Sequence[Term], m: int, a: int) -> list[Term]:
        return [Var(i) for i in range(a)] + [shift(x, a) for x in images]

    def gen(self, n: int, size: int, rng) -> Term:
        return self.normal(gen_term(self.signature, n, size, rng))

    def representation(self) -> Representation:
        flat = self.signature.flat
        ops = {}
        for name, ar in flat.ops:
            ops[name] = (lambda name, dom: lambda args, n: self.normal(Con(name, tuple(args), dom)))(name, ar.dom)
        return Representation(self, ops)

    def __repr__(self) -> str:
        return f"TermMonad({self.signature.name})"


# ---------------------------------------------------------------------------
# random generation

INF = float("inf")


def _closed_min(flat: Signature) -> float:
    best = INF
    changed = True
    while changed:
        changed = False
        for _, ar in flat.ops:
            s = 1 + sum(1 if d > 0 else best for d in ar.dom)
            if s < best:
                best, changed = s, True
    return int(best) if best < INF else INF


def _rng(seed) -> random.Random:
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def gen_term(sig: Signature, n: int, size: int, seed) -> Term:
    """Random well-scoped term in context ``n`` with at most ``size`` nodes.

    ``seed`` is an int or a ``random.Random`` (which is advanced).
    """
    rng = _rng(seed)
    flat = sig.flat
    ops = [(name, ar.dom) for name, ar in flat.ops]
    cmin = _closed_min(flat)

    def min_in(c: int) -> float:
        return 1 if c > 0 else cmin

    def op_min(dom, c):
        return 1 + sum(min_in(c + d) for d in dom)

    if min_in(n) > size:
        raise Uninhabited(f"no term of size <= {size} in context {n} over {sig.name!r}")

    def go(c: int, budget: int) -> Term:
        fitting = [(name, dom) for name, dom in ops if op_min(dom, c) <= budget]
        if c > 0 and (not fitting or rng.random() < c / (c + budget)):
            return Var(rng.randrange(c))
        name, dom = rng.choice(fitting)
        mins = [min_in(c + d) for d in dom]
        left = budget - 1
        args = []
        for j, d in enumerate(dom):
            reserve = sum(mins[j + 1:])
            hi = left - reserve
            sub = rng.randint(mins[j], hi) if j < len(dom) - 1 else hi
            arg = go(c + d, sub)
            left -= _count(arg)
            args.append(arg)
        return Con(name, tuple(args), dom)

    return go(n, size)


def gen_substitution(sig: Signature, source: int, target: int, size: int, seed) -> Substitution:
    rng = _rng(seed)
    return Substitution(source, target, tuple(gen_term(sig, target, size, rng) for _ in range(source)))
