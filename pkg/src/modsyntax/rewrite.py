"""Second-order rewriting with Miller-pattern metavariables.

Rule patterns are closed: a ``Var`` in a pattern is a variable bound by a
binder *inside* the pattern. A metavariable of depth ``d`` stands for a term
with ``d`` extra stars; ``Meta(M, (a1..ad))`` instantiates those stars with
``a1..ad``. In a left-hand side each ``ai`` must be a distinct bound variable,
which makes matching deterministic: the matched subterm may only mention the
listed bound variables (so ``abs(app(M, %0))`` requires ``M`` not to use
``%0``).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property
from typing import Any

from .errors import FuelExhausted, InvalidRule, Uninhabited
from .signature import Signature
from .term import Con, TermMonad, Var, gen_term, shift


@dataclass(frozen=True)
class Meta:
    name: str
    args: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


@dataclass(frozen=True)
class RewriteRule:
    name: str
    metavars: tuple[tuple[str, int], ...]
    lhs: Any
    rhs: Any
    source: str | None = None  # equation this rule orients; None when derived

    def __post_init__(self):
        object.__setattr__(self, "metavars", tuple((str(a), int(b)) for a, b in self.metavars))


def _metas(p, out: list):
    if type(p) is Meta:
        out.append(p)
        for a in p.args:
            _metas(a, out)
    elif type(p) is Con:
        for a in p.args:
            _metas(a, out)
    return out


def _check_pattern(p, sig: Signature, depth: int, where: str, lhs: bool):
    if type(p) is Var:
        if not 0 <= p.index < depth:
            raise InvalidRule(f"{where}: %{p.index} is not bound at this position")
    elif type(p) is Meta:
        if lhs:
            idx = [a.index for a in p.args if type(a) is Var]
            if len(idx) != len(p.args) or len(set(idx)) != len(idx):
                raise InvalidRule(f"{where}: {p.name} must be applied to distinct bound variables")
        for a in p.args:
            _check_pattern(a, sig, depth, where, lhs)
    elif type(p) is Con:
        ar = sig.flat.op_map.get(p.op)
        if ar is None:
            raise InvalidRule(f"{where}: unknown operation {p.op!r}")
        if len(p.args) != len(ar.dom) or tuple(p.binders) != ar.dom:
            raise InvalidRule(f"{where}: {p.op} expects {len(ar.dom)} arguments")
        for a, b in zip(p.args, p.binders):
            _check_pattern(a, sig, depth + b, where, lhs)
    else:
        raise InvalidRule(f"{where}: not a pattern: {p!r}")


def check_rule(rule: RewriteRule, sig: Signature) -> None:
    where = f"rule {rule.name}"
    if type(rule.lhs) is not Con:
        raise InvalidRule(f"{where}: left-hand side must be headed by a constructor")
    declared = dict(rule.metavars)
    if len(declared) != len(rule.metavars):
        raise InvalidRule(f"{where}: metavariable declared twice")
    _check_pattern(rule.lhs, sig, 0, where, True)
    _check_pattern(rule.rhs, sig, 0, where, False)
    lhs_metas = _metas(rule.lhs, [])
    names = [m.name for m in lhs_metas]
    if len(set(names)) != len(names):
        raise InvalidRule(f"{where}: left-hand side is not linear")
    for m in lhs_metas + _metas(rule.rhs, []):
        if m.name not in declared:
            raise InvalidRule(f"{where}: undeclared metavariable {m.name}")
        if declared[m.name] != len(m.args):
            raise InvalidRule(f"{where}: {m.name} has depth {declared[m.name]}, applied to {len(m.args)}")
    for m in _metas(rule.rhs, []):
        if m.name not in names:
            raise InvalidRule(f"{where}: {m.name} does not occur on the left")


# ---------------------------------------------------------------------------
# matching and instantiation

def _abstract(t, bvars: list[int], depth: int, inner: int = 0):
    """Express ``t`` (under ``depth`` pattern binders) over the stars ``bvars``."""
    if type(t) is Var:
        i = t.index
        if i < inner:
            return t
        j = i - inner
        if j < depth:
            if j not in bvars:
                return None
            return Var(inner + bvars.index(j))
        return Var(inner + len(bvars) + j - depth)
    args = []
    for a, b in zip(t.args, t.binders):
        x = _abstract(a, bvars, depth, inner + b)
        if x is None:
            return None
        args.append(x)
    return Con(t.op, tuple(args), t.binders)


def _match(p, t, depth: int, out: dict) -> bool:
    tp = type(p)
    if tp is Meta:
        val = _abstract(t, [a.index for a in p.args], depth)
        if val is None:
            return False
        out[p.name] = val
        return True
    if tp is Var:
        return type(t) is Var and t.index == p.index
    if type(t) is not Con or t.op != p.op or len(t.args) != len(p.args):
        return False
    return all(_match(pa, ta, depth + b, out) for pa, ta, b in zip(p.args, t.args, p.binders))


def match(lhs, t) -> dict | None:
    """Assignment of metavariables making ``lhs`` instantiate to ``t``, or ``None``.

    Each value lives in the ambient context extended by the metavariable's
    depth, its stars being the innermost indices.
    """
    out: dict = {}
    return out if _match(lhs, t, 0, out) else None


def _apply(val, args: list, depth: int, inner: int = 0):
    if type(val) is Var:
        i = val.index
        if i < inner:
            return val
        j = i - inner
        if j < len(args):
            return shift(args[j], inner)
        return Var(inner + j - len(args) + depth)
    return Con(val.op, tuple(_apply(a, args, depth, inner + b) for a, b in zip(val.args, val.binders)), val.binders)


def instantiate(p, assignment: dict, depth: int = 0):
    tp = type(p)
    if tp is Var:
        return p
    if tp is Meta:
        args = [instantiate(a, assignment, depth) for a in p.args]
        return _apply(assignment[p.name], args, depth)
    return Con(p.op, tuple(instantiate(a, assignment, depth + b) for a, b in zip(p.args, p.binders)), p.binders)


def rewrite_root(rule: RewriteRule, t):
    asg = match(rule.lhs, t)
    return None if asg is None else instantiate(rule.rhs, asg)


# ---------------------------------------------------------------------------
# systems and strategy

@dataclass(frozen=True)
class RewriteSystem:
    signature: Signature
    rules: tuple[RewriteRule, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "rules", tuple(self.rules))
        for r in self.rules:
            check_rule(r, self.signature)

    @cached_property
    def by_head(self) -> dict[str, list[RewriteRule]]:
        index: dict[str, list[RewriteRule]] = {}
        for r in self.rules:
            index.setdefault(r.lhs.op, []).append(r)
        return index


def step(rs: RewriteSystem, t, known: dict | None = None):
    """One leftmost-outermost rewrite (rules tried in list order), or ``None``.

    ``known`` maps ``id`` of subterms already found irreducible to the
    subterm itself (kept alive so ids stay unique); it is filled as a side effect.
    """
    if type(t) is Var:
        return None
    if known is not None and id(t) in known:
        return None
    for rule in rs.by_head.get(t.op, ()):
        r = rewrite_root(rule, t)
        if r is not None:
            return r
    for j, a in enumerate(t.args):
        r = step(rs, a, known)
        if r is not None:
            return Con(t.op, t.args[:j] + (r,) + t.args[j + 1:], t.binders)
    if known is not None:
        known[id(t)] = t
    return None


DEFAULT_FUEL = 10_000
MAX_DEPTH = 300


def _depth(t, memo: dict) -> int:
    if type(t) is Var:
        return 0
    hit = memo.get(id(t))
    if hit is not None:
        return hit[1]
    d = 1 + max((_depth(a, memo) for a in t.args), default=0)
    memo[id(t)] = (t, d)
    return d


def normalize(rs: RewriteSystem, t, fuel: int = DEFAULT_FUEL):
    """Rewrite to normal form, raising ``FuelExhausted`` after ``fuel`` steps.

    A step that would produce a term deeper than ``MAX_DEPTH`` (or twice the
    input depth, if larger) also raises
    ``FuelExhausted`` (carrying the last term within bounds); such growth only
    comes from runaway reductions and would otherwise overflow the stack.
    """
    steps = 0
    known: dict = {}
    depths: dict = {}
    limit = max(MAX_DEPTH, 2 * _depth(t, depths))
    while True:
        nxt = step(rs, t, known)
        if nxt is None:
            return t
        if steps == fuel:
            raise FuelExhausted(t, steps)
        if _depth(nxt, depths) > limit:
            raise FuelExhausted(t, steps)
        t = nxt
        steps += 1


class QuotientMonad(TermMonad):
    """Normal forms of ``rs`` with substitute-then-normalize as multiplication."""

    def __init__(self, rs: RewriteSystem, fuel: int = DEFAULT_FUEL):
        super().__init__(rs.signature)
        self.rules = rs
        self.fuel = fuel

    def normal(self, t):
        return normalize(self.rules, t, self.fuel)

    def gen(self, n: int, size: int, rng, attempts: int = 20):
        for _ in range(attempts):
            t = gen_term(self.signature, n, size, rng)
            try:
                return self.normal(t)
            except FuelExhausted:
                continue
        raise Uninhabited(f"no normalizing sample found in {attempts} attempts")

    def __repr__(self) -> str:
        return f"QuotientMonad({self.signature.name}, {len(self.rules.rules)} rules)"


def quotient_monad(rs: RewriteSystem, fuel: int = DEFAULT_FUEL) -> QuotientMonad:
    return QuotientMonad(rs, fuel)


# ---------------------------------------------------------------------------
# law checking

@dataclass(frozen=True)
class LawFailure:
    law: str
    detail: str


@dataclass(frozen=True)
class LawReport:
    holds: bool
    checked: int
    skipped: int = 0
    failure: LawFailure | None = None


def _lift_images(M, images, m, a):
    if a == 0:
        return list(images)
    weak = [M.unit(a + i, m + a) for i in range(m)]
    return [M.unit(i, m + a) for i in range(a)] + [M.bind(x, weak, m + a) for x in images]


def _contexts_with_closed_terms(sig: Signature) -> int:
    try:
        gen_term(sig, 0, 64, 0)
        return 0
    except Uninhabited:
        return 1


def check_monad_laws(M, sig: Signature | None = None, samples: int = 200, seed: int = 0,
                     size: int = 6) -> LawReport:
    """Sample the three monad laws and constructor linearity under ``M.equal``.

    A sample whose normalization runs out of fuel is skipped and counted.
    """
    sig = sig or M.signature
    rng = random.Random(seed)
    lo = _contexts_with_closed_terms(sig)
    ops = list(sig.ops)
    checked = skipped = 0

    def ctx():
        return rng.randint(lo, 3)

    def fail(law, **info):
        detail = " ".join(f"{k}={_fmt(v)}" for k, v in info.items())
        return LawReport(False, checked, skipped, LawFailure(law, detail))

    for i in range(samples):
        n, m, p = ctx(), ctx(), ctx()
        try:
            t = M.gen(n, size, rng)
            sigma = [M.gen(m, size, rng) for _ in range(n)]
            tau = [M.gen(p, size, rng) for _ in range(m)]
            ts = M.bind(t, sigma, m)
            left = M.bind(ts, tau, p)
            right = M.bind(t, [M.bind(s, tau, p) for s in sigma], p)
            if not M.equal(left, right):
                return fail("associativity", sample=i, t=t, sigma=sigma, tau=tau, lhs=left, rhs=right)
            if not M.equal(M.bind(t, [M.unit(j, n) for j in range(n)], n), t):
                return fail("right-unit", sample=i, t=t)
            for j in range(n):
                if not M.equal(M.bind(M.unit(j, n), sigma, m), sigma[j]):
                    return fail("left-unit", sample=i, index=j, sigma=sigma)
            name, ar = ops[i % len(ops)] if ops else (None, None)
            if name is not None:
                args = [M.gen(n + a, size, rng) for a in ar.dom]
                built = M.construct(name, args, n)
                left = M.bind(built, _lift_images(M, sigma, m, ar.codom), m + ar.codom)
                moved = [M.bind(x, _lift_images(M, sigma, m, a), m + a) for x, a in zip(args, ar.dom)]
                right = M.construct(name, moved, m)
                if not M.equal(left, right):
                    return fail(f"linearity[{name}]", sample=i, args=args, sigma=sigma, lhs=left, rhs=right)
        except (FuelExhausted, RecursionError):
            skipped += 1
            continue
        checked += 1
    return LawReport(True, checked, skipped)


@dataclass(frozen=True)
class SoundnessReport:
    rule: str
    holds: bool
    checked: int
    detail: str = ""


def check_rule_soundness(rule: RewriteRule, eq, sig: Signature, samples: int = 100,
                         seed: int = 0, size: int = 6) -> SoundnessReport:
    """On sampled instances of ``eq`` in free syntax, a root step by ``rule`` turns one side into the other."""
    from .equation import eval_mor
    from .modexpr import gen_value

    M = TermMonad(sig)
    dom, _ = eq.types(sig)
    rng = random.Random(seed)
    checked = 0
    for i in range(samples):
        n = i % 5
        try:
            v = gen_value(dom, M, n, size, rng)
        except Uninhabited:
            continue
        a = eval_mor(eq.lhs, M, v, n)
        b = eval_mor(eq.rhs, M, v, n)
        ok = rewrite_root(rule, a) == b or rewrite_root(rule, b) == a
        if not ok:
            return SoundnessReport(rule.name, False, checked,
                                   f"context={n} lhs={_fmt(a)} rhs={_fmt(b)}")
        checked += 1
    return SoundnessReport(rule.name, True, checked)


def _fmt(v) -> str:
    from .syntax import format_value

    return format_value(v)
