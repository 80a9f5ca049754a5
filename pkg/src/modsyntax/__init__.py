"""Signature-generic syntax with variable binding.

Terms over a binding signature form a monad (substitution); module
expressions and half-equations describe equations between operations;
oriented equations give quotient monads by rewriting; signatures combine
by pushout.
"""

from .equation import (
    Compose, ConOp, DerivMor, Equation, EquationReport, Eval, Id, Join, JoinDeriv, LiftOp, Pair,
    Proj, Rename, ThetaSwap, check_equation, eval_mor, infer_types,
)
from .errors import (
    ArityConflict, ArityMismatch, DuplicateOp, EmptyNameSet, FuelExhausted, InvalidInclusion,
    InvalidRule, MissingOp, OutOfScope, ParseError, ScopeMismatch, ShapeMismatch,
    SyntaxEngineError, TypeMismatch, Uninhabited, UnknownOp, ValidationError,
)
from .modexpr import (
    FINAL, THETA, Comp, CompTheta, Deriv, Final, Prod, Theta, action, canonical, check_value,
    gen_value, value_eq,
)
from .rewrite import (
    DEFAULT_FUEL, Meta, QuotientMonad, RewriteRule, RewriteSystem, check_monad_laws,
    check_rule_soundness, match, normalize, quotient_monad, step,
)
from .signature import Arity, Signature, SignatureInclusion, flatten, inclusion, pushout, restrict
from .system import NamedTerm, System, dump_system, merge_systems, parse_system, parse_system_text
from .term import (
    Con, Representation, Substitution, TermMonad, Var, check_scope, con, eval_params,
    flattened_op, fold, gen_substitution, gen_term, rename, substitute,
)

__all__ = [name for name in dir() if not name.startswith("_")]
