"""System files: a signature with equations, oriented rules and named terms.

Grammar (one block per top-level s-expression, any order)::

    (names a b ...)
    (signature NAME (OP (D1 ... Dk) T) ... (family OP (D1 ... Dk) T) ...)
    (equation NAME [DOMAIN] LHS RHS)
    (rule NAME (meta (M d) ...) (=> LHS RHS) [(from EQUATION)])
    (term NAME CONTEXT TERM)
    (flags partial-rules)

A ``family`` entry declares one op ``OP_a`` per channel name ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

from .equation import Equation, infer_types
from .errors import (
    ArityConflict, DuplicateOp, EmptyNameSet, InvalidRule, ParseError, SyntaxEngineError,
    TypeMismatch, UnknownOp, ValidationError,
)
from .rewrite import QuotientMonad, RewriteRule, RewriteSystem, check_rule, DEFAULT_FUEL
from .sexpr import Atom, SList, read_all
from .signature import Arity, Signature, pushout, restrict
from .syntax import (
    format_modexpr, format_morexpr, format_pattern, modexpr_from_sexpr, morexpr_from_sexpr,
    parse_nat, pattern_from_sexpr, term_from_sexpr,
)
from .term import TermMonad, check_scope


@dataclass(frozen=True)
class NamedTerm:
    name: str
    context: int
    term: object


@dataclass(frozen=True)
class System:
    signature: Signature
    names: tuple[str, ...] = ()
    families: tuple[tuple[str, Arity], ...] = ()
    equations: tuple[Equation, ...] = ()
    rules: tuple[RewriteRule, ...] = ()
    terms: tuple[NamedTerm, ...] = ()
    partial_rules: bool = False
    doc: str = field(default="", compare=False)

    @property
    def name(self) -> str:
        return self.signature.name

    def equation(self, name: str) -> Equation:
        for eq in self.equations:
            if eq.name == name:
                return eq
        raise KeyError(name)

    def term(self, name: str) -> NamedTerm:
        for t in self.terms:
            if t.name == name:
                return t
        raise KeyError(name)

    def rewrite_system(self) -> RewriteSystem:
        return RewriteSystem(self.signature, self.rules)

    def free_monad(self) -> TermMonad:
        return TermMonad(self.signature)

    def quotient(self, fuel: int = DEFAULT_FUEL) -> QuotientMonad:
        return QuotientMonad(self.rewrite_system(), fuel)


def family_ops(base: str, arity: Arity, names) -> list[tuple[str, Arity]]:
    return [(f"{base}_{a}", arity) for a in names]


def check_system(sys: System) -> None:
    """Type-check equations and validate rules and named terms."""
    sig = sys.signature
    for eq in sys.equations:
        check_equation_types(eq, sig)
    eq_names = {eq.name for eq in sys.equations}
    for r in sys.rules:
        check_rule(r, sig)
        if r.source is not None and r.source not in eq_names:
            raise InvalidRule(f"rule {r.name}: no equation named {r.source!r}")
    for t in sys.terms:
        if not check_scope(sig, t.term, t.context):
            raise ValidationError(f"term {t.name} is not well scoped in context {t.context}")


def check_equation_types(eq: Equation, sig: Signature):
    """Infer both sides; when they disagree the message shows both inferred types."""
    dl, cl = infer_types(eq.lhs, sig, eq.dom, "lhs")
    try:
        dr, cr = infer_types(eq.rhs, sig, dl, "rhs")
    except TypeMismatch as e:
        try:
            dr, cr = infer_types(eq.rhs, sig, None, "rhs")
        except TypeMismatch:
            raise e from None
        raise TypeMismatch("rhs", f"{dl} -> {cl}", f"{dr} -> {cr}") from None
    if cl != cr:
        raise TypeMismatch("rhs", f"{dl} -> {cl}", f"{dr} -> {cr}")
    return dl, cl


# ---------------------------------------------------------------------------
# parsing

def _atom(node, what: str) -> str:
    if not isinstance(node, Atom):
        raise ParseError(f"expected {what}, got {node}", node.loc)
    return node.text


def _arity(node_dom, node_cod) -> Arity:
    if not isinstance(node_dom, SList):
        raise ParseError("expected a list of binding depths", node_dom.loc)
    return Arity(tuple(parse_nat(x, "binding depth") for x in node_dom.items),
                 parse_nat(node_cod, "result degree"))


def _located(err: SyntaxEngineError, loc):
    if err.loc is None:
        err.loc = loc
    return err


def parse_system_text(text: str) -> System:
    blocks = read_all(text)
    kinds: dict[str, list[SList]] = {}
    for b in blocks:
        if not isinstance(b, SList) or b.head() is None:
            raise ParseError("expected a (keyword ...) block", b.loc)
        kinds.setdefault(b.head(), []).append(b)
    known = {"names", "signature", "equation", "rule", "term", "flags"}
    for k, bs in kinds.items():
        if k not in known:
            raise ParseError(f"unknown block {k!r}", bs[0].loc)
    for k in ("names", "signature", "flags"):
        if len(kinds.get(k, [])) > 1:
            raise ParseError(f"more than one {k} block", kinds[k][1].loc)
    if "signature" not in kinds:
        raise ParseError("missing signature block", (1, 1))

    names: tuple[str, ...] = ()
    if "names" in kinds:
        names = tuple(_atom(x, "a channel name") for x in kinds["names"][0].items[1:])
        if not names:
            raise EmptyNameSet(kinds["names"][0].loc)

    sblock = kinds["signature"][0]
    if len(sblock) < 2:
        raise ParseError("signature needs a name", sblock.loc)
    sig_name = _atom(sblock[1], "a signature name")
    ops: list[tuple[str, Arity]] = []
    families: list[tuple[str, Arity]] = []
    seen: set[str] = set()

    def add(name, ar, loc):
        if name in seen:
            raise DuplicateOp(name, loc)
        seen.add(name)
        ops.append((name, ar))

    for entry in sblock.items[2:]:
        if not isinstance(entry, SList) or entry.head() is None:
            raise ParseError("expected (OP (DEPTHS...) DEGREE)", entry.loc)
        if entry.head() == "family":
            if len(entry) != 4:
                raise ParseError("expected (family OP (DEPTHS...) DEGREE)", entry.loc)
            if not names:
                raise _located(EmptyNameSet(), entry.loc)
            base = _atom(entry[1], "a family name")
            ar = _arity(entry[2], entry[3])
            families.append((base, ar))
            for name, a in family_ops(base, ar, names):
                add(name, a, entry.loc)
        else:
            if len(entry) != 3:
                raise ParseError("expected (OP (DEPTHS...) DEGREE)", entry.loc)
            add(entry.head(), _arity(entry[1], entry[2]), entry.loc)
    sig = Signature(sig_name, tuple(ops))

    flags = set()
    if "flags" in kinds:
        flags = {_atom(x, "a flag") for x in kinds["flags"][0].items[1:]}
        unknown = flags - {"partial-rules"}
        if unknown:
            raise ParseError(f"unknown flag {sorted(unknown)[0]!r}", kinds["flags"][0].loc)

    equations = []
    for b in kinds.get("equation", []):
        if len(b) not in (4, 5):
            raise ParseError("expected (equation NAME [DOMAIN] LHS RHS)", b.loc)
        name = _atom(b[1], "an equation name")
        dom = modexpr_from_sexpr(b[2]) if len(b) == 5 else None
        eq = Equation(name, morexpr_from_sexpr(b[-2]), morexpr_from_sexpr(b[-1]), dom)
        try:
            check_equation_types(eq, sig)
        except (TypeMismatch, UnknownOp) as e:
            e.message = f"equation {name}: {e.message}"
            raise _located(e, b.loc)
        equations.append(eq)

    rules = []
    for b in kinds.get("rule", []):
        rules.append(_parse_rule(b, sig))

    terms = []
    for b in kinds.get("term", []):
        if len(b) != 4:
            raise ParseError("expected (term NAME CONTEXT TERM)", b.loc)
        n = parse_nat(b[2], "context size")
        terms.append(NamedTerm(_atom(b[1], "a term name"), n, term_from_sexpr(sig, b[3], n)))

    system = System(sig, names, tuple(families), tuple(equations), tuple(rules), tuple(terms),
                    "partial-rules" in flags)
    for kind, items in (("equation", equations), ("rule", rules), ("term", terms)):
        dup = _first_duplicate([x.name for x in items])
        if dup is not None:
            raise ValidationError(f"duplicate {kind} {dup!r}")
    check_system(system)
    return system


def _first_duplicate(xs):
    seen = set()
    for x in xs:
        if x in seen:
            return x
        seen.add(x)
    return None


def _parse_rule(b: SList, sig: Signature) -> RewriteRule:
    if len(b) not in (4, 5):
        raise ParseError("expected (rule NAME (meta ...) (=> LHS RHS) [(from EQ)])", b.loc)
    name = _atom(b[1], "a rule name")
    mblock = b[2]
    if not isinstance(mblock, SList) or mblock.head() != "meta":
        raise ParseError("expected (meta (M depth) ...)", mblock.loc)
    metas = []
    for m in mblock.items[1:]:
        if not isinstance(m, SList) or len(m) != 2:
            raise ParseError("expected (M depth)", m.loc)
        metas.append((_atom(m[0], "a metavariable name"), parse_nat(m[1], "metavariable depth")))
    arrow = b[3]
    if not isinstance(arrow, SList) or arrow.head() != "=>" or len(arrow) != 3:
        raise ParseError("expected (=> LHS RHS)", arrow.loc)
    md = dict(metas)
    lhs = pattern_from_sexpr(sig, arrow[1], md)
    rhs = pattern_from_sexpr(sig, arrow[2], md)
    source = None
    if len(b) == 5:
        src = b[4]
        if not isinstance(src, SList) or src.head() != "from" or len(src) != 2:
            raise ParseError("expected (from EQUATION)", src.loc)
        source = _atom(src[1], "an equation name")
    rule = RewriteRule(name, tuple(metas), lhs, rhs, source)
    try:
        check_rule(rule, sig)
    except InvalidRule as e:
        raise _located(e, b.loc)
    return rule


def parse_system(path) -> System:
    return parse_system_text(Path(path).read_text())


# ---------------------------------------------------------------------------
# printing

def _arity_text(ar: Arity) -> str:
    return "(" + " ".join(map(str, ar.dom)) + f") {ar.codom}"


def dump_system(sys: System) -> str:
    lines = []
    for line in sys.doc.strip().splitlines():
        lines.append(f"; {line}".rstrip())
    if sys.names:
        lines.append("(names " + " ".join(sys.names) + ")")
    entries = []
    ops = list(sys.signature.ops)
    fam_at = {}
    for base, ar in sys.families:
        expected = family_ops(base, ar, sys.names)
        for i in range(len(ops)):
            if ops[i:i + len(expected)] == expected:
                fam_at[i] = (base, ar, len(expected))
                break
    i = 0
    while i < len(ops):
        if i in fam_at:
            base, ar, k = fam_at[i]
            entries.append(f"(family {base} {_arity_text(ar)})")
            i += k
        else:
            name, ar = ops[i]
            entries.append(f"({name} {_arity_text(ar)})")
            i += 1
    lines.append(f"(signature {sys.signature.name}" + "".join(" " + e for e in entries) + ")")
    if sys.partial_rules:
        lines.append("(flags partial-rules)")
    for eq in sys.equations:
        dom = f" {format_modexpr(eq.dom)}" if eq.dom is not None else ""
        lines.append(f"(equation {eq.name}{dom} {format_morexpr(eq.lhs)} {format_morexpr(eq.rhs)})")
    for r in sys.rules:
        metas = "".join(f" ({m} {d})" for m, d in r.metavars)
        src = f" (from {r.source})" if r.source is not None else ""
        lines.append(f"(rule {r.name} (meta{metas}) (=> {format_pattern(r.lhs)} {format_pattern(r.rhs)}){src})")
    for t in sys.terms:
        lines.append(f"(term {t.name} {t.context} {t.term})")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# merging

def _union(kind: str, xs, ys):
    out = list(xs)
    index = {x.name: x for x in xs}
    for y in ys:
        if y.name in index:
            if index[y.name] != y:
                raise ValidationError(f"{kind} {y.name!r} differs between the merged systems")
            continue
        out.append(y)
    return tuple(out)


def merge_systems(a: System, b: System, shared, name: str | None = None) -> System:
    """Pushout of two systems over their common restriction to ``shared``."""
    shared = list(shared)
    base = restrict(a.signature, shared, name="shared")
    other = restrict(b.signature, shared, name="shared")
    for op, ar in base.ops:
        if other.op_map[op] != ar:
            raise ArityConflict(op, ar, other.op_map[op])
    sig, _, _ = pushout(base, a.signature, b.signature, name=name)
    names = tuple(dict.fromkeys(a.names + b.names))
    families = ()
    if a.names == b.names == names:
        families = tuple(dict.fromkeys(a.families + b.families))
    merged = System(
        sig, names, families,
        _union("equation", a.equations, b.equations),
        _union("rule", a.rules, b.rules),
        _union("term", a.terms, b.terms),
        a.partial_rules or b.partial_rules,
    )
    check_system(merged)
    return merged


def with_doc(sys: System, doc: str) -> System:
    return replace(sys, doc=doc)
