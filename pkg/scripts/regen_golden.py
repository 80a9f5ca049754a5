"""Regenerate the CLI golden transcripts in tests/golden/.

Each transcript records one invocation (run from the repository root) with
its standard output, standard error and exit code. Once reviewed, the files
are frozen: tests/test_cli.py replays them and compares byte for byte.
"""

import io
import os
import shlex
from pathlib import Path

from modsyntax.cli import main

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"
SYS = "src/modsyntax/systems"
IN = "tests/golden/inputs"

CASES = {
    # laws
    "laws_monoid_pass": f"laws {SYS}/monoid.mas --samples 50",
    "laws_lc_pass": f"laws {SYS}/lc.mas --samples 40 --seed 3",
    "laws_nonconfluent_counterexample": f"laws {IN}/nonconfluent.mas --samples 100",
    "laws_unsound_rule_counterexample": f"laws {IN}/unsound.mas --samples 30",
    "laws_duplicate_op_malformed": f"laws {IN}/dup_op.mas",
    "laws_unclosed_paren_malformed": f"laws {IN}/badsyntax.mas",
    # normalize
    "normalize_church_plus_pass": f"normalize {SYS}/lc.mas --term plus_2_3",
    "normalize_monoid_pass": f"normalize {SYS}/monoid.mas --term '(m (m v0 (e)) (m v1 (m (e) v2)))' --context 3",
    "normalize_omega_counterexample": f"normalize {SYS}/lc.mas --term omega --fuel 100",
    "normalize_out_of_scope_malformed": f"normalize {SYS}/monoid.mas --term '(m v0 v3)' --context 2",
    "normalize_unknown_op_malformed": f"normalize {SYS}/lc.mas --term '(lam v0)' --context 1",
    # check
    "check_lc1_quotient_pass": f"check {SYS}/lc1.mas --quotient --samples 100",
    "check_subst_pass": f"check {SYS}/lcsubst.mas --samples 100 --seed 7",
    "check_lc1_free_counterexample": f"check {SYS}/lc1.mas --eq beta --samples 100",
    "check_unknown_equation_malformed": f"check {SYS}/lc1.mas --eq gamma",
    "check_illtyped_malformed": f"check {IN}/illtyped.mas",
    # merge
    "merge_lc_hocore_pass": f"merge {SYS}/lc.mas {SYS}/hocore.mas --name lc_hocore",
    "merge_arity_conflict_counterexample": f"merge {SYS}/lc.mas {IN}/conflict.mas --shared abs",
    "merge_missing_file_malformed": f"merge {SYS}/lc.mas {IN}/absent.mas",
    "merge_unknown_shared_malformed": f"merge {SYS}/lc.mas {SYS}/lc1.mas --shared app",
    # gen
    "gen_lc_pass": f"gen {SYS}/lc.mas --context 1 --size 8 --seed 4 --count 5",
    "gen_hocore_pass": f"gen {SYS}/hocore.mas --size 5 --count 3",
    "gen_uninhabited_counterexample": f"gen {IN}/closedless.mas --context 0",
    "gen_negative_size_malformed": f"gen {SYS}/lc.mas --size -1",
    "gen_bad_flag_malformed": f"gen {SYS}/lc.mas --colour red",
}


def run(command: str) -> str:
    out, err = io.StringIO(), io.StringIO()
    code = main(shlex.split(command), out, err)
    return f"$ modsyntax {command}\n--- stdout\n{out.getvalue()}--- stderr\n{err.getvalue()}--- exit {code}\n"


def main_():
    os.chdir(ROOT)
    for name, command in CASES.items():
        (GOLDEN / f"{name}.txt").write_text(run(command))
        print(name)


if __name__ == "__main__":
    main_()
