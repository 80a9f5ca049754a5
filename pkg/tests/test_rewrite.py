import random

import pytest

import oracles
from modsyntax.errors import FuelExhausted, InvalidRule, Uninhabited
from modsyntax.rewrite import (
    MAX_DEPTH, RewriteRule, RewriteSystem, check_monad_laws, check_rule,
    check_rule_soundness, instantiate, match, normalize, quotient_monad, step,
)
from modsyntax.stdlib import LC, MONOID, builtin_systems, hocore_system, lc_systems, lced_system, monoid_system
from modsyntax.syntax import parse_pattern, parse_term
from modsyntax.system import parse_system_text
from modsyntax.term import Con, Substitution, Var, check_scope, gen_term, substitute

LCS, LC1S, _ = lc_systems()
BETA_ETA = LCS.rewrite_system()
MONOID_RS = monoid_system().rewrite_system()


def T(text, sig=LC, n=None):
    return parse_term(sig, text, n)


def rule(text_lhs, text_rhs, metas, sig=LC):
    return RewriteRule("r", tuple(metas.items()), parse_pattern(sig, text_lhs, metas),
                       parse_pattern(sig, text_rhs, metas))


@pytest.mark.parametrize("lhs,rhs,metas,why", [
    ("M", "M", {"M": 0}, "constructor"),
    ("(abs (M %0 %0))", "(abs (M %0 %0))", {"M": 2}, "distinct"),
    ("(app M M)", "M", {"M": 0}, "linear"),
    ("(app M U)", "V", {"M": 0, "U": 0, "V": 0}, "V does not occur"),
    ("(abs (M %1))", "(abs (M %0))", {"M": 1}, "not bound"),
    ("(abs (M %0))", "(abs (M %0))", {"M": 0}, "depth 0"),
    ("(app (abs (M %0)) U)", "(M U U)", {"M": 1, "U": 0}, "depth 1"),
])
def test_check_rule_rejects(lhs, rhs, metas, why):
    r = RewriteRule("r", tuple(metas.items()), parse_pattern(LC, lhs, metas), parse_pattern(LC, rhs, metas))
    with pytest.raises(InvalidRule, match=why):
        check_rule(r, LC)


def test_check_rule_accepts_shipped_rules():
    for system in builtin_systems().values():
        for r in system.rules:
            check_rule(r, system.signature)


BETA_LHS = parse_pattern(LC, "(app (abs (M %0)) U)", {"M": 1, "U": 0})
ETA_LHS = parse_pattern(LC, "(abs (app M %0))", {"M": 0})


def test_match_examples():
    asg = match(BETA_LHS, T("(app (abs v0) v1)"))
    assert asg == {"M": Var(0), "U": Var(1)}
    assert instantiate(BETA_LHS, asg) == T("(app (abs v0) v1)")
    assert match(BETA_LHS, T("(abs v0)")) is None
    assert match(ETA_LHS, T("(abs (app v1 v0))")) == {"M": Var(0)}
    assert match(ETA_LHS, T("(abs (app v0 v0))")) is None  # M would capture the bound star


def test_match_then_instantiate_reproduces_random_redexes():
    rng = random.Random(4)
    for _ in range(300):
        n = rng.randint(0, 3)
        body, arg = gen_term(LC, n + 1, 6, rng), gen_term(LC, n, 5, rng) if n else Con("abs", (Var(0),), (1,))
        t = Con("app", (Con("abs", (body,), (1,)), arg), (0, 0))
        asg = match(BETA_LHS, t)
        assert asg is not None and instantiate(BETA_LHS, asg) == t


def test_step_examples():
    assert step(BETA_ETA, T("(app (abs v0) v1)")) == Var(1)
    assert step(BETA_ETA, Var(0)) is None
    assert step(MONOID_RS, T("(m (m v0 v1) v2)", MONOID)) == T("(m v0 (m v1 v2))", MONOID)


def test_step_is_leftmost_outermost():
    t = T("(app (app (abs v0) v0) (app (abs v0) v1))")
    assert step(BETA_ETA, t) == T("(app v0 (app (abs v0) v1))")
    outer = T("(app (abs (app (abs v0) v0)) v1)")
    assert step(BETA_ETA, outer) == T("(app (abs v0) v1)")


def test_normalize_church_plus_two_two():
    plus, c2 = LCS.term("plus").term, LCS.term("c2").term
    t = Con("app", (Con("app", (plus, c2), (0, 0)), c2), (0, 0))
    got = str(normalize(BETA_ETA, t))
    assert got == oracles.church_numeral(4)
    assert got == oracles.beta_normal(str(t))


def test_normalize_monoid_example():
    t = T("(m (m v0 v1) (m (e) v2))", MONOID)
    assert normalize(MONOID_RS, t) == T("(m v0 (m v1 v2))", MONOID)
    assert oracles.word_of(t) == [0, 1, 2]


def test_normal_forms_need_no_fuel():
    nf = T("(abs (app v0 v1))")
    assert normalize(BETA_ETA, nf, fuel=0) == nf


def test_fuel_exhaustion():
    omega = LCS.term("omega").term
    with pytest.raises(FuelExhausted) as e:
        normalize(BETA_ETA, omega, fuel=25)
    assert e.value.steps == 25 and e.value.last == omega
    with pytest.raises(FuelExhausted):
        normalize(BETA_ETA, T("(app (abs v0) v0)", n=1), fuel=0)


def test_runaway_growth_is_reported_as_fuel_exhaustion():
    w3 = T("(abs (app (app v0 v0) v0))")
    t = Con("app", (w3, w3), (0, 0))
    with pytest.raises(FuelExhausted) as e:
        normalize(BETA_ETA, t)
    assert e.value.steps < 10_000
    str(e.value.last)  # still printable


def test_empty_rule_set_gives_free_monad():
    Q = quotient_monad(RewriteSystem(LC, ()))
    rng = random.Random(0)
    for _ in range(50):
        t = gen_term(LC, 2, 8, rng)
        assert Q.normal(t) == t
    assert check_monad_laws(Q, LC, 100, 0).holds


def test_normalize_preserves_scope_and_is_deterministic():
    rng = random.Random(6)
    for _ in range(300):
        n = rng.randint(0, 3)
        try:
            t = gen_term(LC, n, 10, rng)
        except Uninhabited:
            continue
        try:
            a = normalize(BETA_ETA, t)
        except FuelExhausted:
            continue
        assert check_scope(LC, a, n)
        assert normalize(BETA_ETA, t) == a
        assert step(BETA_ETA, a) is None


@pytest.mark.parametrize("system", ["monoid", "lc", "lc1", "hocore"])
def test_substitution_is_stable_under_normalization(system):
    sys_ = builtin_systems()[system]
    rs, sig = sys_.rewrite_system(), sys_.signature
    rng = random.Random(12)
    checked = 0
    for _ in range(200):
        n, m = rng.randint(1, 3), rng.randint(1, 3)
        t = gen_term(sig, n, 7, rng)
        images = [gen_term(sig, m, 4, rng) for _ in range(n)]
        try:
            direct = normalize(rs, substitute(t, Substitution(n, m, images)))
            nf_images = [normalize(rs, x) for x in images]
            staged = normalize(rs, substitute(normalize(rs, t), Substitution(n, m, nf_images)))
        except FuelExhausted:
            continue
        assert direct == staged
        checked += 1
    assert checked > 150


def test_hocore_communication_step():
    h = hocore_system()
    rs, sig = h.rewrite_system(), h.signature
    p = parse_term(sig, "(send_b (zero))", 1)
    q = parse_term(sig, "(parallel v0 v1)", 2)  # v0 is the received process
    t = parse_term(sig, "(parallel (send_a (send_b (zero))) (recv_a (parallel v0 v1)))", 1)
    assert step(rs, t) == parse_term(sig, "(parallel (zero) (parallel (send_b (zero)) v0))", 1)
    assert str(substitute(q, Substitution(2, 1, (p, Var(0))))) == "(parallel (send_b (zero)) v0)"


def test_lced_rules_by_hand():
    s = lced_system()
    rs, sig = s.rewrite_system(), s.signature
    t = parse_term(sig, "(diff_1 (abs (app v0 v1)) v0)", 1)
    assert str(step(rs, t)) == "(abs (partial (app v0 v2) v1 v0))"
    t = parse_term(sig, "(partial (app v0 v1) v0 v0)", 1)
    assert str(step(rs, t)) == (
        "(plus (app (partial v0 v0 v0) v0) (app (diff_1 v0 (partial v1 v0 v0)) v0))")
    assert not any(r.lhs.op in ("plus", "zero") for r in s.rules)


def test_monad_laws_hold_for_free_monads():
    for name, system in builtin_systems().items():
        r = check_monad_laws(system.free_monad(), system.signature, 150, 1)
        assert r.holds and r.skipped == 0, (name, r)


def test_monad_laws_hold_for_shipped_quotients():
    for name in ("monoid", "hocore", "lced", "lc1"):
        system = builtin_systems()[name]
        r = check_monad_laws(system.quotient(), system.signature, 150, 2)
        assert r.holds, (name, r)


def test_monad_laws_catch_overlapping_rules():
    s = parse_system_text("""
        (signature overlap (m (0 0) 0) (c () 0))
        (rule left (meta (X 0) (Y 0) (Z 0)) (=> (m (m X Y) Z) X))
        (rule right (meta (X 0) (Y 0) (Z 0)) (=> (m X (m Y Z)) Z))
    """)
    r = check_monad_laws(s.quotient(), s.signature, 200, 0)
    assert not r.holds and r.failure is not None


def test_rule_soundness_of_shipped_rules():
    for system in builtin_systems().values():
        for r in system.rules:
            if r.source is not None:
                rep = check_rule_soundness(r, system.equation(r.source), system.signature, 100, 0)
                assert rep.holds and rep.checked == 100, rep


def test_rule_soundness_detects_wrong_orientation():
    s = monoid_system()
    wrong = RewriteRule("right_unit", (("X", 0),), parse_pattern(MONOID, "(m X (e))", {"X": 0}),
                        parse_pattern(MONOID, "(e)", {"X": 0}), "right_unit")
    rep = check_rule_soundness(wrong, s.equation("right_unit"), MONOID, 50, 0)
    assert not rep.holds


def test_depth_limit_constant():
    assert MAX_DEPTH >= 100
