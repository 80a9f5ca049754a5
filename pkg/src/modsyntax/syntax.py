"""Concrete s-expression syntax for terms, rule patterns, module and morphism expressions.

Terms are written over *flattened* ops: ``vN`` is a variable, ``(op arg ...)``
a node, so an op with result degree ``t`` takes its ``t`` extra arguments
explicitly. Rule patterns additionally allow ``%i`` (a variable bound inside
the pattern) and ``(M arg ...)`` / ``M`` for declared metavariables.
"""

from __future__ import annotations

import re

from .equation import (
    Compose, ConOp, DerivMor, Eval, Id, Join, JoinDeriv, LiftOp, Pair, Proj, Rename, ThetaSwap,
)
from .errors import ParseError
from .modexpr import FINAL, THETA, Comp, CompTheta, Deriv, Prod
from .rewrite import Meta
from .sexpr import Atom, SList, read_one
from .signature import Signature
from .term import Con, Var

_VAR = re.compile(r"v(0|[1-9][0-9]*)\Z")
_STAR = re.compile(r"%(0|[1-9][0-9]*)\Z")
_NAT = re.compile(r"(0|[1-9][0-9]*)\Z")


def parse_nat(node, what: str = "natural number") -> int:
    if isinstance(node, Atom) and _NAT.match(node.text):
        return int(node.text)
    raise ParseError(f"expected {what}, got {node}", node.loc)


def _node(sig: Signature, op: str, args: list, node):
    ar = sig.flat.op_map.get(op)
    if ar is None:
        raise ParseError(f"unknown operation {op!r}", node.loc)
    if len(args) != len(ar.dom):
        raise ParseError(f"{op} expects {len(ar.dom)} arguments, got {len(args)}", node.loc)
    return Con(op, tuple(args), ar.dom)


# ---------------------------------------------------------------------------
# terms

def term_from_sexpr(sig: Signature, node, n: int | None = None, depth: int = 0):
    """Parse a term; with ``n`` given, variables are scope-checked."""
    if isinstance(node, Atom):
        m = _VAR.match(node.text)
        if not m:
            raise ParseError(f"expected a variable vN or a parenthesized node, got {node.text!r}", node.loc)
        i = int(m.group(1))
        if n is not None and i >= n + depth:
            raise ParseError(f"v{i} is out of scope in context {n + depth}", node.loc)
        return Var(i)
    op = node.head()
    if op is None:
        raise ParseError("expected an operation name", node.loc)
    ar = sig.flat.op_map.get(op)
    if ar is None:
        raise ParseError(f"unknown operation {op!r}", node.loc)
    raw = node.items[1:]
    if len(raw) != len(ar.dom):
        raise ParseError(f"{op} expects {len(ar.dom)} arguments, got {len(raw)}", node.loc)
    args = [term_from_sexpr(sig, a, n, depth + b) for a, b in zip(raw, ar.dom)]
    return Con(op, tuple(args), ar.dom)


def parse_term(sig: Signature, text: str, n: int | None = None):
    return term_from_sexpr(sig, read_one(text), n)


def format_term(t) -> str:
    return str(t)


# ---------------------------------------------------------------------------
# rule patterns

def pattern_from_sexpr(sig: Signature, node, metas: dict[str, int]):
    if isinstance(node, Atom):
        m = _STAR.match(node.text)
        if m:
            return Var(int(m.group(1)))
        if node.text in metas:
            return Meta(node.text, ())
        raise ParseError(f"expected %i, a metavariable or a node, got {node.text!r}", node.loc)
    head = node.head()
    if head is None:
        raise ParseError("expected an operation or metavariable name", node.loc)
    args = [pattern_from_sexpr(sig, a, metas) for a in node.items[1:]]
    if head in metas:
        return Meta(head, tuple(args))
    return _node(sig, head, args, node)


def parse_pattern(sig: Signature, text: str, metas: dict[str, int]):
    return pattern_from_sexpr(sig, read_one(text), metas)


def format_pattern(p) -> str:
    if type(p) is Var:
        return f"%{p.index}"
    if type(p) is Meta:
        if not p.args:
            return p.name
        return f"({p.name} " + " ".join(format_pattern(a) for a in p.args) + ")"
    if not p.args:
        return f"({p.op})"
    return f"({p.op} " + " ".join(format_pattern(a) for a in p.args) + ")"


# ---------------------------------------------------------------------------
# module expressions

def modexpr_from_sexpr(node):
    if isinstance(node, Atom):
        if node.text == "T":
            return THETA
        if node.text == "*":
            return FINAL
        raise ParseError(f"expected a module expression, got {node.text!r}", node.loc)
    head = node.head()
    rest = node.items[1:]
    if head == "x":
        return Prod(tuple(modexpr_from_sexpr(x) for x in rest))
    if head == "d" and len(rest) == 1:
        return Deriv(modexpr_from_sexpr(rest[0]))
    if head == "comp" and len(rest) == 1:
        return CompTheta(modexpr_from_sexpr(rest[0]))
    if head == "comp" and len(rest) == 2:
        return CompTheta(modexpr_from_sexpr(rest[1]), parse_nat(rest[0], "outer derivation degree"))
    raise ParseError(f"malformed module expression {node}", node.loc)


def parse_modexpr(text: str):
    return modexpr_from_sexpr(read_one(text))


def format_modexpr(m) -> str:
    return str(m)


# ---------------------------------------------------------------------------
# morphism expressions

_NULLARY = {"join": Join(), "join'": JoinDeriv(), "swap": ThetaSwap(), "id": Id()}


def morexpr_from_sexpr(node):
    if isinstance(node, Atom):
        if node.text in _NULLARY:
            return _NULLARY[node.text]
        raise ParseError(f"expected a morphism expression, got {node.text!r}", node.loc)
    head = node.head()
    rest = node.items[1:]

    def need(k):
        if len(rest) != k:
            raise ParseError(f"{head} takes {k} argument(s), got {len(rest)}", node.loc)

    def name_of(x):
        if not isinstance(x, Atom):
            raise ParseError("expected an operation name", x.loc)
        return x.text

    if head == ".":
        if len(rest) < 2:
            raise ParseError(". composes at least two morphisms", node.loc)
        out = morexpr_from_sexpr(rest[-1])
        for g in reversed(rest[:-1]):
            out = Compose(morexpr_from_sexpr(g), out)
        return out
    if head == "pair":
        return Pair(tuple(morexpr_from_sexpr(x) for x in rest))
    if head == "id":
        need(1)
        return Id(modexpr_from_sexpr(rest[0]))
    if head == "proj":
        if len(rest) not in (1, 2):
            raise ParseError("proj takes an index and an optional product", node.loc)
        of = modexpr_from_sexpr(rest[1]) if len(rest) == 2 else None
        return Proj(parse_nat(rest[0], "projection index"), of)
    if head == "op":
        need(1)
        return ConOp(name_of(rest[0]))
    if head == "lift":
        need(1)
        return LiftOp(name_of(rest[0]))
    if head == "eval":
        need(1)
        return Eval(parse_nat(rest[0]))
    if head == "rename":
        if len(rest) not in (1, 2) or not isinstance(rest[0], SList):
            raise ParseError("rename takes a list of targets and an optional codomain size", node.loc)
        f = tuple(parse_nat(x) for x in rest[0].items)
        q = parse_nat(rest[1]) if len(rest) == 2 else None
        return Rename(f, q)
    if head == "d":
        need(1)
        return DerivMor(morexpr_from_sexpr(rest[0]))
    raise ParseError(f"malformed morphism expression {node}", node.loc)


def parse_morexpr(text: str):
    return morexpr_from_sexpr(read_one(text))


def format_morexpr(e) -> str:
    match e:
        case Id(None):
            return "id"
        case Id(m):
            return f"(id {m})"
        case Compose(g, f):
            return f"(. {format_morexpr(g)} {format_morexpr(f)})"
        case Pair(items):
            return "(pair" + "".join(" " + format_morexpr(f) for f in items) + ")"
        case Proj(i, None):
            return f"(proj {i})"
        case Proj(i, of):
            return f"(proj {i} {of})"
        case ConOp(name):
            return f"(op {name})"
        case LiftOp(name):
            return f"(lift {name})"
        case Eval(b):
            return f"(eval {b})"
        case Rename(f, None):
            return "(rename (" + " ".join(map(str, f)) + "))"
        case Rename(f, q):
            return "(rename (" + " ".join(map(str, f)) + f") {q})"
        case DerivMor(f):
            return f"(d {format_morexpr(f)})"
        case Join():
            return "join"
        case JoinDeriv():
            return "join'"
        case ThetaSwap():
            return "swap"
    raise TypeError(f"not a morphism expression: {e!r}")


# ---------------------------------------------------------------------------
# values

def format_value(v) -> str:
    if isinstance(v, (Var, Con)):
        return str(v)
    if isinstance(v, Comp):
        env = " ".join(format_value(x) for x in v.env)
        return f"{{k={v.k} outer={v.outer} env=[{env}]}}"
    if isinstance(v, tuple):
        return "<" + " ".join(format_value(x) for x in v) + ">"
    if isinstance(v, list):
        return "[" + " ".join(format_value(x) for x in v) + "]"
    return str(v)

