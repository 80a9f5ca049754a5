"""Built-in systems: monoids, lambda calculus (two signatures), HOcore,
explicit substitution on lambda terms, and a fragment of the lambda calculus
with explicit differentiation.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .equation import (
    ConOp, DerivMor, Equation, Eval, Id, Join, JoinDeriv, LiftOp, Pair, Proj, ThetaSwap,
    check_equation, compose,
)
from .errors import EmptyNameSet
from .modexpr import THETA, CompTheta, Deriv, Prod
from .rewrite import RewriteRule
from .signature import Arity, Signature
from .syntax import parse_pattern, parse_term
from .system import NamedTerm, System, family_ops
from .term import Con, Representation, TermMonad, Var, con, eval_params, flattened_op, fold, shift

P0, P1, P2 = Proj(0), Proj(1), Proj(2)
UNIT = Pair(())  # the unique map into the final module


def op(name: str) -> ConOp:
    return ConOp(name)


def rule(sig: Signature, name: str, metas: dict[str, int], lhs: str, rhs: str,
         source: str | None = None) -> RewriteRule:
    return RewriteRule(name, tuple(metas.items()), parse_pattern(sig, lhs, metas),
                       parse_pattern(sig, rhs, metas), source)


# ---------------------------------------------------------------------------
# monoids

MONOID = Signature.of("monoid", {"m": Arity((0, 0)), "e": Arity(())})


def monoid_system() -> System:
    sig = MONOID
    m, e = op("m"), op("e")
    equations = (
        Equation("assoc",
                 compose(m, Pair((P0, compose(m, Pair((P1, P2)))))),
                 compose(m, Pair((compose(m, Pair((P0, P1))), P2))),
                 Prod((THETA, THETA, THETA))),
        Equation("left_unit", compose(m, Pair((compose(e, UNIT), Id()))), Id(THETA), THETA),
        Equation("right_unit", compose(m, Pair((Id(), compose(e, UNIT)))), Id(THETA), THETA),
    )
    xyz = {"X": 0, "Y": 0, "Z": 0}
    rules = (
        rule(sig, "assoc", xyz, "(m (m X Y) Z)", "(m X (m Y Z))", "assoc"),
        rule(sig, "left_unit", {"X": 0}, "(m (e) X)", "X", "left_unit"),
        rule(sig, "right_unit", {"X": 0}, "(m X (e))", "X", "right_unit"),
    )
    doc = ("Monoids: m is the product, e the unit.\n"
           "Rules orient associativity to the right and drop units; normal forms are words.")
    return System(sig, equations=equations, rules=rules, doc=doc)


# ---------------------------------------------------------------------------
# lambda calculus

LC = Signature.of("lc", {"app": Arity((0, 0)), "abs": Arity((1,))})
LC1 = Signature.of("lc1", {"app1": Arity((0,), 1), "abs": Arity((1,))})

CHURCH = {
    "c2": "(abs (abs (app v1 (app v1 v0))))",
    "c3": "(abs (abs (app v1 (app v1 (app v1 v0)))))",
    "plus": "(abs (abs (abs (abs (app (app v3 v1) (app (app v2 v1) v0))))))",
    "times": "(abs (abs (abs (app v2 (app v1 v0)))))",
    "pred": "(abs (abs (abs (app (app (app v2 (abs (abs (app v0 (app v1 v3))))) (abs v1)) (abs v0)))))",
    "omega": "(app (abs (app v0 v0)) (abs (app v0 v0)))",
}


def church(k: int) -> Con:
    body = Var(0)
    for _ in range(k):
        body = Con("app", (Var(1), body), (0, 0))
    return Con("abs", (Con("abs", (body,), (1,)),), (1,))


def _lc_terms() -> tuple[NamedTerm, ...]:
    terms = {name: parse_term(LC, text, 0) for name, text in CHURCH.items()}

    def app(f, *xs):
        for x in xs:
            f = Con("app", (f, x), (0, 0))
        return f

    terms["plus_2_3"] = app(terms["plus"], terms["c2"], terms["c3"])
    terms["times_2_3"] = app(terms["times"], terms["c2"], terms["c3"])
    terms["pred_3"] = app(terms["pred"], terms["c3"])
    return tuple(NamedTerm(k, 0, v) for k, v in terms.items())


@dataclass(frozen=True)
class FlatteningMaps:
    """Conversions between the two lambda-calculus signatures, both given as folds."""

    def to_prime(self, t, n: int):
        target = TermMonad(LC1)

        def app(args, n):
            x, y = args
            return eval_params(con(LC1, "app1", [x], n), [y], n)

        rep = Representation(target, {"app": app, "abs": lambda args, n: con(LC1, "abs", args, n)})
        return fold(LC, rep, t, n)

    def to_sigma(self, t, n: int):
        target = TermMonad(LC)

        def app1(args, n):
            (x,) = args
            return con(LC, "app", [shift(x, 1), Var(0)], n + 1)

        rep = Representation(target, {
            "app1": flattened_op(target, app1, 1, 1),
            "abs": lambda args, n: con(LC, "abs", args, n),
        })
        return fold(LC1, rep, t, n)


def lc_systems() -> tuple[System, System, FlatteningMaps]:
    """The lambda calculus over ``{app, abs}`` and over ``{app1, abs}``."""
    beta_sigma = Equation("beta", compose(op("app"), Pair((compose(op("abs"), P0), P1))), Eval(1),
                          Prod((Deriv(THETA), THETA)))
    sigma_form = System(
        LC,
        equations=(beta_sigma,),
        rules=(
            rule(LC, "beta", {"M": 1, "U": 0}, "(app (abs (M %0)) U)", "(M U)", "beta"),
            rule(LC, "eta", {"M": 0}, "(abs (app M %0))", "M"),
        ),
        terms=_lc_terms(),
        doc="Lambda calculus with binary application; beta and eta oriented as contractions.",
    )
    prime_form = System(
        LC1,
        equations=(
            Equation("beta", compose(op("app1"), op("abs")), Id(Deriv(THETA))),
            Equation("eta", compose(op("abs"), op("app1")), Id(THETA)),
        ),
        rules=(
            rule(LC1, "beta", {"M": 1, "U": 0}, "(app1 (abs (M %0)) U)", "(M U)", "beta"),
            rule(LC1, "eta", {"M": 0}, "(abs (app1 M %0))", "M", "eta"),
        ),
        doc=("Lambda calculus with app1 : T -> (d T), i.e. application to the fresh variable.\n"
             "Terms carry app1 flattened: (app1 x y) applies x to y."),
    )
    return sigma_form, prime_form, FlatteningMaps()


# ---------------------------------------------------------------------------
# HOcore

def hocore_system(names=("a", "b")) -> System:
    names = tuple(names)
    if not names:
        raise EmptyNameSet()
    families = (("recv", Arity((1,))), ("send", Arity((0,))))
    ops = []
    for base, ar in families:
        ops += family_ops(base, ar, names)
    ops += [("parallel", Arity((0, 0))), ("zero", Arity(()))]
    sig = Signature.of("hocore", ops)
    equations, rules = [], []
    for a in names:
        lhs = compose(op("parallel"), Pair((compose(op(f"send_{a}"), P0), compose(op(f"recv_{a}"), P1))))
        rhs = compose(op("parallel"), Pair((compose(op("zero"), UNIT), compose(Eval(1), Pair((P1, P0))))))
        equations.append(Equation(f"comm_{a}", lhs, rhs, Prod((THETA, Deriv(THETA)))))
        rules.append(rule(sig, f"comm_{a}", {"P": 0, "Q": 1},
                          f"(parallel (send_{a} P) (recv_{a} (Q %0)))", "(parallel (zero) (Q P))",
                          f"comm_{a}"))
    doc = ("HOcore: recv_a binds the received process, send_a emits one.\n"
           "Only the communication rule is included; parallel has no structural laws here.")
    return System(sig, names, families, tuple(equations), tuple(rules), doc=doc)


# ---------------------------------------------------------------------------
# explicit substitution, checked on plain lambda terms

def explicit_subst_equations() -> tuple[Equation, Equation]:
    comp = CompTheta(THETA)
    app_eq = Equation(
        "subst_app",
        compose(Join(), LiftOp("app")),
        compose(op("app"), Pair((compose(Join(), P0), compose(Join(), P1)))),
        Prod((comp, comp)),
    )
    abs_eq = Equation(
        "subst_abs",
        compose(Join(), LiftOp("abs")),
        compose(op("abs"), JoinDeriv(), ThetaSwap()),
        CompTheta(THETA, 1),
    )
    return app_eq, abs_eq


def lc_subst_system() -> System:
    doc = ("Substitution (join) interacting with app and abs on lambda terms.\n"
           "Checked by evaluation only; there are no rules.")
    return System(LC, equations=explicit_subst_equations(), doc=doc)


def explicit_subst_check(samples: int = 1000, seed: int = 0, size: int = 6):
    """Both substitution equations in free lambda syntax, with join as substitution."""
    M = TermMonad(LC)
    return tuple(check_equation(eq, M, samples, seed, size) for eq in explicit_subst_equations())


# ---------------------------------------------------------------------------
# lambda calculus with explicit differentiation (partial rule set)

def lced_system(max_k: int = 2) -> System:
    ops = [
        ("app", Arity((0, 0))),
        ("abs", Arity((1,))),
        ("zero", Arity(())),
        ("plus", Arity((0, 0))),
        ("partial", Arity((1, 0), 1)),
    ] + [(f"diff_{k}", Arity((0, 0))) for k in range(1, max_k + 1)]
    sig = Signature.of("lced", ops)
    d_app, d_plus, d_diff = DerivMor(op("app")), DerivMor(op("plus")), DerivMor(op("diff_1"))
    partial = op("partial")
    diff_abs = Equation(
        "diff_abs",
        compose(op("diff_1"), Pair((compose(op("abs"), P0), P1))),
        compose(op("abs"), partial),
        Prod((Deriv(THETA), THETA)),
    )
    partial_app = Equation(
        "partial_app",
        compose(partial, Pair((compose(d_app, Pair((P0, P1))), P2))),
        compose(d_plus, Pair((
            compose(d_app, Pair((compose(partial, Pair((P0, P2))), P1))),
            compose(d_app, Pair((compose(d_diff, Pair((P0, compose(partial, Pair((P1, P2)))))), P1))),
        ))),
        Prod((Deriv(THETA), Deriv(THETA), THETA)),
    )
    rules = (
        rule(sig, "diff_abs", {"T": 1, "U": 0},
             "(diff_1 (abs (T %0)) U)", "(abs (partial (T %0) U %0))", "diff_abs"),
        rule(sig, "partial_app", {"S": 1, "T": 1, "U": 0, "W": 0},
             "(partial (app (S %0) (T %0)) U W)",
             "(plus (app (partial (S %0) U W) (T W)) (app (diff_1 (S W) (partial (T %0) U W)) (T W)))",
             "partial_app"),
    )
    doc = ("Lambda calculus with explicit differentiation, partial rule set.\n"
           "(partial t u) is linear substitution of u in t; (diff_k t u) differentiates t.\n"
           "zero and plus carry no rules.")
    return System(sig, equations=(diff_abs, partial_app), rules=rules, partial_rules=True, doc=doc)


# ---------------------------------------------------------------------------

def builtin_systems() -> dict[str, System]:
    lc, lc1, _ = lc_systems()
    return {
        "monoid": monoid_system(),
        "lc": lc,
        "lc1": lc1,
        "hocore": hocore_system(),
        "lcsubst": lc_subst_system(),
        "lced": lced_system(),
    }


SYSTEMS_DIR = Path(__file__).resolve().parent / "systems"


def shipped_path(name: str) -> Path:
    """Location of the shipped ``.mas`` file for a built-in system."""
    return SYSTEMS_DIR / f"{name}.mas"
