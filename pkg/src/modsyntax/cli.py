"""Command-line interface: ``modsyntax {laws,normalize,check,merge,gen} ...``.

Exit codes: 0 success, 1 counterexample (or fuel exhausted, uninhabited
context, merge conflict), 2 usage or input error. Results go to standard
output, diagnostics to standard error; output is a function of the flags.
"""

from __future__ import annotations

import argparse
import contextlib
import random
import sys
from pathlib import Path

from .equation import check_equation
from .errors import ArityConflict, FuelExhausted, SyntaxEngineError, Uninhabited
from .rewrite import DEFAULT_FUEL, check_monad_laws, check_rule_soundness, normalize
from .syntax import format_value, term_from_sexpr
from .sexpr import read_one
from .system import System, dump_system, merge_systems, parse_system
from .term import gen_term

OK, FOUND, USAGE = 0, 1, 2


class _Usage(Exception):
    pass


def _formatter(prog):
    # fixed width keeps usage messages independent of the terminal
    return argparse.HelpFormatter(prog, width=88)


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="modsyntax", description="Syntax with binding: laws, rewriting, merging.",
                                formatter_class=_formatter)
    sub = p.add_subparsers(dest="command", required=True)

    def command(name, help):
        return sub.add_parser(name, help=help, formatter_class=_formatter)

    laws = command("laws", "monad laws, linearity and rule soundness")
    laws.add_argument("path")
    laws.add_argument("--samples", type=int, default=100)
    laws.add_argument("--seed", type=int, default=0)
    laws.add_argument("--fuel", type=int, default=DEFAULT_FUEL)

    norm = command("normalize", "normal form of a term")
    norm.add_argument("path")
    norm.add_argument("--term", required=True, help="a term s-expression or the name of a term block")
    norm.add_argument("--context", type=int, default=None)
    norm.add_argument("--fuel", type=int, default=DEFAULT_FUEL)

    check = command("check", "sample an equation")
    check.add_argument("path")
    check.add_argument("--eq", default=None, help="equation name (default: all)")
    check.add_argument("--samples", type=int, default=200)
    check.add_argument("--seed", type=int, default=0)
    check.add_argument("--quotient", action="store_true")
    check.add_argument("--fuel", type=int, default=DEFAULT_FUEL)

    merge = command("merge", "pushout of two systems over shared ops")
    merge.add_argument("a")
    merge.add_argument("b")
    merge.add_argument("--shared", default="", help="comma-separated op names")
    merge.add_argument("--name", default=None)
    merge.add_argument("-o", "--output", default=None)

    gen = command("gen", "random terms")
    gen.add_argument("path")
    gen.add_argument("--context", type=int, default=0)
    gen.add_argument("--size", type=int, default=6)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--count", type=int, default=1)
    return p


def _load(path: str) -> System:
    try:
        return parse_system(path)
    except OSError as e:
        raise _Usage(f"{path}: cannot read file: {e.strerror}") from None
    except SyntaxEngineError as e:
        sep = ":" if e.loc is not None else ": "
        raise _Usage(f"{path}{sep}{e}") from None


def _nonneg(**flags):
    for k, v in flags.items():
        if v is not None and v < 0:
            raise _Usage(f"--{k} must be non-negative")


def _count(k: int, noun: str) -> str:
    return f"{k} {noun}" if k == 1 else f"{k} {noun}s"


def _verdict(ok: bool, checked: int, skipped: int) -> str:
    extra = f", {skipped} skipped" if skipped else ""
    return f"{'holds' if ok else 'FAILS'} ({checked} checked{extra})"


def cmd_laws(args, out, err) -> int:
    _nonneg(samples=args.samples, fuel=args.fuel)
    sys_ = _load(args.path)
    sig = sys_.signature
    print(f"system {sig.name}: {_count(len(sig.ops), 'op')}, {_count(len(sys_.equations), 'equation')}, "
          f"{_count(len(sys_.rules), 'rule')}", file=out)
    failed = False

    def report(label, r):
        nonlocal failed
        print(f"{label}: {_verdict(r.holds, r.checked, r.skipped)}", file=out)
        if not r.holds:
            failed = True
            print(f"  {r.failure.law}: {r.failure.detail}", file=out)

    report("free monad laws", check_monad_laws(sys_.free_monad(), sig, args.samples, args.seed))
    for rule in sys_.rules:
        if rule.source is None:
            print(f"rule {rule.name}: no source equation", file=out)
            continue
        s = check_rule_soundness(rule, sys_.equation(rule.source), sig, args.samples, args.seed)
        print(f"rule {rule.name} from {rule.source}: {_verdict(s.holds, s.checked, 0)}", file=out)
        if not s.holds:
            failed = True
            print(f"  {s.detail}", file=out)
    if sys_.rules:
        report("quotient monad laws", check_monad_laws(sys_.quotient(args.fuel), sig, args.samples, args.seed))
    return FOUND if failed else OK


def cmd_normalize(args, out, err) -> int:
    _nonneg(context=args.context, fuel=args.fuel)
    sys_ = _load(args.path)
    named = {t.name: t for t in sys_.terms}
    if args.term in named:
        t = named[args.term]
        n = t.context if args.context is None else args.context
        if n != t.context:
            raise _Usage(f"term {args.term} lives in context {t.context}, not {n}")
        term = t.term
    else:
        n = args.context or 0
        try:
            term = term_from_sexpr(sys_.signature, read_one(args.term), n)
        except SyntaxEngineError as e:
            sep = ":" if e.loc is not None else ": "
            raise _Usage(f"--term{sep}{e}") from None
    try:
        print(normalize(sys_.rewrite_system(), term, args.fuel), file=out)
    except FuelExhausted as e:
        print(e.last, file=out)
        print(f"{args.path}: {e}", file=err)
        return FOUND
    return OK


def cmd_check(args, out, err) -> int:
    _nonneg(samples=args.samples, fuel=args.fuel)
    sys_ = _load(args.path)
    if args.eq is None:
        eqs = list(sys_.equations)
    else:
        try:
            eqs = [sys_.equation(args.eq)]
        except KeyError:
            raise _Usage(f"{args.path}: no equation named {args.eq!r}") from None
    M = sys_.quotient(args.fuel) if args.quotient else sys_.free_monad()
    where = "quotient" if args.quotient else "free monad"
    failed = False
    for eq in eqs:
        r = check_equation(eq, M, args.samples, args.seed)
        print(f"equation {eq.name} on {where}: {_verdict(r.holds, r.checked, r.skipped)}", file=out)
        if not r.holds:
            failed = True
            c = r.counterexample
            print(f"  context {c.context}, sample {c.sample}", file=out)
            print(f"  value: {format_value(c.value)}", file=out)
            print(f"  lhs:   {format_value(c.lhs)}", file=out)
            print(f"  rhs:   {format_value(c.rhs)}", file=out)
    return FOUND if failed else OK


def cmd_merge(args, out, err) -> int:
    a, b = _load(args.a), _load(args.b)
    shared = [s for s in args.shared.split(",") if s]
    try:
        merged = merge_systems(a, b, shared, args.name)
    except ArityConflict as e:
        print(f"merge failed: {e}", file=err)
        return FOUND
    except SyntaxEngineError as e:
        raise _Usage(f"merge: {e}") from None
    text = dump_system(merged)
    if args.output is None:
        out.write(text)
    else:
        Path(args.output).write_text(text)
        sig = merged.signature
        print(f"wrote {args.output}: signature {sig.name} with {_count(len(sig.ops), 'op')}, "
              f"{_count(len(merged.equations), 'equation')}, {_count(len(merged.rules), 'rule')}", file=out)
    return OK


def cmd_gen(args, out, err) -> int:
    _nonneg(context=args.context, size=args.size, count=args.count)
    sys_ = _load(args.path)
    rng = random.Random(args.seed)
    try:
        for _ in range(args.count):
            print(gen_term(sys_.signature, args.context, args.size, rng), file=out)
    except Uninhabited as e:
        print(f"{args.path}: {e}", file=err)
        return FOUND
    return OK


COMMANDS = {
    "laws": cmd_laws,
    "normalize": cmd_normalize,
    "check": cmd_check,
    "merge": cmd_merge,
    "gen": cmd_gen,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    out = stdout if stdout is not None else sys.stdout
    err = stderr if stderr is not None else sys.stderr
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = _parser().parse_args(argv)
    except SystemExit as e:
        return USAGE if e.code else OK
    try:
        return COMMANDS[args.command](args, out, err)
    except _Usage as e:
        print(e, file=err)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
