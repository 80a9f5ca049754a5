"""Algebraic signatures with binding: declaration, flattening, restriction, merging.

An arity ``(a1, ..., ak) -> t`` has ``k`` arguments, argument ``j`` binding
``aj`` fresh variables, and a result living ``t`` derivatives up. Only arities
with ``t == 0`` are raw; the others are flattened into raw ones by adding
``t`` plain arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import ArityConflict, DuplicateOp, InvalidInclusion, UnknownOp, ValidationError


@dataclass(frozen=True)
class Arity:
    dom: tuple[int, ...] = ()
    codom: int = 0

    def __post_init__(self):
        object.__setattr__(self, "dom", tuple(self.dom))
        if any(a < 0 for a in self.dom) or self.codom < 0:
            raise ValidationError(f"negative binding depth in arity {self}")

    @property
    def raw(self) -> bool:
        return self.codom == 0

    def flattened(self) -> Arity:
        return Arity(self.dom + (0,) * self.codom, 0)

    def __str__(self) -> str:
        return "(" + " ".join(map(str, self.dom)) + f") {self.codom}"


@dataclass(frozen=True)
class Signature:
    """A named, ordered family of arities.

    ``ops`` is kept as a tuple of pairs so duplicates can be reported by
    :func:`validate` instead of silently collapsing.
    """

    name: str
    ops: tuple[tuple[str, Arity], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple((str(k), v) for k, v in self.ops))

    @classmethod
    def of(cls, name: str, ops: Mapping[str, Arity] | Iterable[tuple[str, Arity]]) -> Signature:
        items = ops.items() if isinstance(ops, Mapping) else ops
        sig = cls(name, tuple(items))
        validate(sig)
        return sig

    @cached_property
    def op_map(self) -> dict[str, Arity]:
        return dict(self.ops)

    def names(self) -> list[str]:
        return [k for k, _ in self.ops]

    def arity(self, op: str) -> Arity:
        try:
            return self.op_map[op]
        except KeyError:
            raise UnknownOp(op) from None

    def __contains__(self, op: str) -> bool:
        return op in self.op_map

    def __len__(self) -> int:
        return len(self.ops)

    @cached_property
    def flat(self) -> Signature:
        return flatten(self)

    @property
    def is_raw(self) -> bool:
        return all(a.raw for _, a in self.ops)


@dataclass(frozen=True)
class SignatureInclusion:
    source: Signature
    target: Signature

    def __post_init__(self):
        for name, ar in self.source.ops:
            if self.target.op_map.get(name) != ar:
                raise InvalidInclusion(
                    f"{name!r} of {self.source.name!r} is not included in {self.target.name!r}"
                )


def validate(sig: Signature) -> None:
    seen = set()
    for name, _ in sig.ops:
        if name in seen:
            raise DuplicateOp(name)
        seen.add(name)


def flatten(sig: Signature) -> Signature:
    return Signature(sig.name, tuple((k, a.flattened()) for k, a in sig.ops))


def restrict(sig: Signature, names: Iterable[str], name: str | None = None) -> Signature:
    """Subsignature on ``names``, keeping the order of ``sig``."""
    wanted = set(names)
    for n in sorted(wanted):
        if n not in sig:
            raise UnknownOp(n)
    ops = tuple((k, a) for k, a in sig.ops if k in wanted)
    return Signature(name or sig.name, ops)


def inclusion(source: Signature, target: Signature) -> SignatureInclusion:
    return SignatureInclusion(source, target)


def pushout(
    base: Signature,
    left: Signature,
    right: Signature,
    il: SignatureInclusion | None = None,
    ir: SignatureInclusion | None = None,
    name: str | None = None,
) -> tuple[Signature, SignatureInclusion, SignatureInclusion]:
    """Amalgamated sum of ``left`` and ``right`` glued along ``base``.

    Ops are identified by name. The result lists the ops of ``left`` first,
    then those of ``right`` not already present.
    """
    il = il or SignatureInclusion(base, left)
    ir = ir or SignatureInclusion(base, right)
    if il.source != base or ir.source != base or il.target != left or ir.target != right:
        raise InvalidInclusion("inclusions do not span the given square")
    merged = dict(left.ops)
    for k, a in right.ops:
        if k in merged and merged[k] != a:
            raise ArityConflict(k, merged[k], a)
        merged.setdefault(k, a)
    sig = Signature(name or f"{left.name}+{right.name}", tuple(merged.items()))
    return sig, SignatureInclusion(left, sig), SignatureInclusion(right, sig)
