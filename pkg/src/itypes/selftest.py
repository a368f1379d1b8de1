"""Stored goldens and randomized property checks, runnable without pytest.

Goldens are CLI invocations whose JSON output and exit code are stored in
``fixtures/goldens.json``; ``python3 -m itypes.selftest --regenerate``
rewrites that file from the current implementation.
"""

from __future__ import annotations

import io
import json
import random
import sys
from pathlib import Path
from typing import Callable, Optional

from itypes.printer import print_term, print_type

FIXTURES = Path(__file__).with_name("fixtures")
GOLDEN_FILE = FIXTURES / "goldens.json"

E_TYPE = "forall X. (forall Y. (Id -> Y)) -> Id"
F_TYPE = "forall X. (forall Y. Y -> Id) -> Id"
T_TYPE = "forall X. ((forall Y. ((Y -> forall Z. (X -> Y -> Z) -> Z) -> X) -> X) -> X) -> X -> X"
T_TERM = r"\x. \y. x (\z. x (\u. z (\v. \w. w (u (\d. <y, v>)) v)))"


def _family_types() -> dict:
    from itypes.inhabitants import build_Binf, build_Bn

    return {"B2": print_type(build_Bn(2)), "B3": print_type(build_Bn(3)), "Binf": print_type(build_Binf())}


def golden_cases() -> list[tuple[str, list, bool]]:
    """(name, argv, slow)"""
    fam = _family_types()
    return [
        ("golden-parse-tuple", ["parse", "--term", "<x, y>"], False),
        ("golden-normalize", ["normalize", "--term", r"(\x. x) y"], False),
        ("golden-normalize-lambda-i-numeral", ["normalize", "--term", "##0 id id", "--mode", "beta"], False),
        ("golden-inhabitants-id", ["inhabit", "--type", "Id"], False),
        ("golden-inhabitants-bool", ["inhabit", "--type", "Bool"], False),
        ("golden-inhabitants-ent", ["inhabit", "--type", "Ent"], False),
        ("golden-classify-id", ["classify", "--type", "Id"], False),
        ("golden-classify-e", ["classify", "--type", E_TYPE], False),
        ("golden-classify-f", ["classify", "--type", F_TYPE], False),
        ("golden-witness-e", ["witness", "--type", E_TYPE, "--term", r"\x. x id"], False),
        ("golden-witness-f", ["witness", "--type", F_TYPE, "--term", r"\x. x id"], False),
        ("golden-polarity-e", ["polarity", "--type", E_TYPE], False),
        ("golden-erase-counterexample", ["erase", "--type", T_TYPE], False),
        ("golden-counterexample-not-typable", ["typecheck", "--term", T_TERM, "--type", T_TYPE], False),
        ("golden-counterexample-simple", ["typecheck", "--simple", "--term", T_TERM, "--type",
                                          "((((Y -> (X -> Y -> Z) -> Z) -> X) -> X) -> X) -> X -> X"], False),
        ("golden-classify-b2", ["classify", "--type", fam["B2"], "--size-bound", "40"], False),
        ("golden-classify-b3", ["classify", "--type", fam["B3"], "--size-bound", "48"], False),
        ("golden-inhabitants-binf", ["inhabit", "--type", fam["Binf"], "--size-bound", "28"], False),
        ("golden-sweep-one-quantifier", ["sweep", "--quantifiers", "1"], False),
        ("golden-sweep-two-quantifiers", ["sweep", "--quantifiers", "2"], True),
    ]


def run_cli(argv: list) -> tuple[int, object]:
    from itypes.cli import run

    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv) + ["--json"], out, err)
    text = out.getvalue().strip()
    return code, json.loads(text) if text else None


def regenerate_goldens(path: Path = GOLDEN_FILE, only: Optional[set] = None) -> None:
    """Rewrite the stored goldens; with ``only``, keep the other entries."""
    old = {}
    if only is not None and path.exists():
        old = {e["name"]: e for e in json.loads(path.read_text())}
    entries = []
    for name, argv, _ in golden_cases():
        if only is not None and name not in only and name in old:
            entries.append(old[name])
            continue
        code, doc = run_cli(argv)
        entries.append({"name": name, "argv": argv, "exit": code, "expect": doc})
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(entries, indent=1, sort_keys=True) + "\n")


def _golden_checks(full: bool, path: Path) -> list[tuple[str, Callable[[], Optional[str]], bool]]:
    try:
        entries = json.loads(path.read_text())
    except (OSError, ValueError) as e:
        msg = f"cannot read {path}: {e}"
        return [("golden-file", lambda: msg, False)]
    slow = {name for name, _, s in golden_cases() if s}
    checks = []
    for entry in entries:
        def check(entry=entry):
            code, doc = run_cli(entry["argv"])
            if code != entry.get("exit"):
                return f"exit code {code}, expected {entry.get('exit')}"
            if doc != entry.get("expect"):
                return "output differs from the stored golden"
            return None
        checks.append((entry.get("name", "golden-unnamed"), check, entry.get("name") in slow))
    return checks


# ---------------------------------------------------------------------------
# Property checks; each returns None on success or a counterexample message
# ---------------------------------------------------------------------------


def check_lambda_i_preservation(rng: random.Random, cases: int) -> Optional[str]:
    from itypes.generators import random_term, to_lambda_I
    from itypes.reduction import beta_reducts, beta_eta_normalize, eta_step
    from itypes.syntax import is_lambda_I

    for _ in range(cases):
        t = to_lambda_I(random_term(rng, rng.randint(2, 10), ("x", "y")))
        if not beta_eta_normalize(t, 300).normal:
            continue
        reducts = list(beta_reducts(t))
        e = eta_step(t)
        if e is not None:
            reducts.append(e)
        for r in reducts:
            if not is_lambda_I(r) or r.free_vars != t.free_vars:
                return f"{print_term(t)} -> {print_term(r)}"
    return None


def check_uv_measure(rng: random.Random, cases: int) -> Optional[str]:
    """N never grows on an unfolding step and drops on every step except the
    atomic one, where the number of constants drops instead."""
    from itypes.generators import random_uv_term
    from itypes.uv import count_uv, measure_N, uv_contract_at, uv_redexes

    for _ in range(cases):
        t = random_uv_term(rng, rng.randint(2, 9))
        for p, kind in uv_redexes(t):
            if kind == "beta":
                continue
            s = uv_contract_at(t, p)
            before, after = (measure_N(t), count_uv(t)), (measure_N(s), count_uv(s))
            if not after < before:
                return f"{print_term(t)} -> {print_term(s)}: {before} -> {after}"
    return None


def check_e_good_preservation(rng: random.Random, cases: int) -> Optional[str]:
    from itypes.generators import random_good_term
    from itypes.uv import is_e_good, uv_contract_at, uv_redexes

    E = ("x", "y")
    for _ in range(cases):
        t = random_good_term(rng, rng.randint(1, 8), E)
        if not is_e_good(t, E):
            return f"generator produced a term that is not good: {print_term(t)}"
        for _ in range(20):
            reds = list(uv_redexes(t))
            if not reds:
                break
            s = uv_contract_at(t, rng.choice(reds)[0])
            if not is_e_good(s, E):
                return f"{print_term(t)} -> {print_term(s)}"
            t = s
    return None


def check_hat_substitution(rng: random.Random, cases: int) -> Optional[str]:
    from itypes.generators import random_uv_term
    from itypes.syntax import subst_term
    from itypes.uv import hat

    for _ in range(cases):
        u = random_uv_term(rng, rng.randint(1, 8))
        v = random_uv_term(rng, rng.randint(1, 5))
        if hat(subst_term(u, v, "x")) != subst_term(hat(u), hat(v), "x"):
            return f"u = {print_term(u)}, v = {print_term(v)}"
    return None


def check_hat_simulation(rng: random.Random, cases: int) -> Optional[str]:
    from itypes.generators import random_uv_term
    from itypes.reduction import beta_reachable
    from itypes.uv import hat, uv_contract_at, uv_redexes

    for _ in range(cases):
        u = random_uv_term(rng, rng.randint(2, 8))
        for p, _ in uv_redexes(u):
            v = uv_contract_at(u, p)
            if not beta_reachable(hat(u), hat(v), max_steps=2):
                return f"{print_term(u)} -> {print_term(v)}"
    return None


def check_subject_reduction(rng: random.Random, cases: int) -> Optional[str]:
    from itypes.derivation import check_derivation
    from itypes.generators import random_term
    from itypes.reduction import beta_reducts
    from itypes.search import SearchBudget, search_F_derivation
    from itypes.simple import infer_simple
    from itypes.syntax import foralls

    budget = SearchBudget(max_instantiation_size=4, max_steps=20_000)
    big = SearchBudget(max_instantiation_size=8, max_steps=40_000)
    for _ in range(cases):
        t = random_term(rng, rng.randint(2, 9))
        r = infer_simple(t)
        if r is None:
            continue
        _, a = r
        a = foralls(sorted(a.free_vars), a)
        d = search_F_derivation(None, t, a, budget)
        if d is None or not d:
            continue
        if not check_derivation(d):
            return f"unchecked derivation for {print_term(t)}"
        for s in beta_reducts(t):
            d2 = search_F_derivation(None, s, a, big)
            if d2 is None:
                return f"{print_term(t)} : {print_type(a)} but not its reduct {print_term(s)}"
    return None


def check_ij_typing(rng: random.Random, cases: int) -> Optional[str]:
    from itypes.generators import random_type
    from itypes.syntax import TVar
    from itypes.witness import check_IJ_typing

    hand = [TVar("X"), TVar("Y")]
    from itypes.parser import parse_type

    hand.append(parse_type("X -> X"))
    for a in hand:
        if not check_IJ_typing(a, "X"):
            return f"A = {print_type(a)}"
    for _ in range(cases):
        a = random_type(rng, rng.randint(0, 6), (), allow_free=True)
        if not check_IJ_typing(a, "X"):
            return f"A = {print_type(a)}"
    return None


PROPERTY_CHECKS = {
    "lambda-i-preservation": check_lambda_i_preservation,
    "uv-measure": check_uv_measure,
    "e-good-preservation": check_e_good_preservation,
    "hat-substitution": check_hat_substitution,
    "hat-simulation": check_hat_simulation,
    "subject-reduction": check_subject_reduction,
    "ij-typing": check_ij_typing,
}


def run_selftest(name_filter: Optional[str] = None, full: bool = False, cases: int = 100,
                 seed: int = 0, golden_path: Path = GOLDEN_FILE) -> tuple[bool, list]:
    """Run the checks whose name contains ``name_filter``; slow goldens only
    with ``full`` or when named by the filter."""
    checks = _golden_checks(full, golden_path)
    for name, fn in PROPERTY_CHECKS.items():
        checks.append((name, lambda fn=fn: fn(random.Random(seed), cases), False))
    results = []
    for name, fn, slow in checks:
        if name_filter and name_filter not in name:
            continue
        if slow and not full and not name_filter:
            continue
        try:
            detail = fn()
        except Exception as e:  # a crash is a failure of that check, not of the run
            detail = f"{type(e).__name__}: {e}"
        results.append((name, detail is None, detail or ""))
    return all(ok for _, ok, _ in results), results


if __name__ == "__main__":
    if "--regenerate" in sys.argv:
        names = {a for a in sys.argv[1:] if not a.startswith("--")}
        regenerate_goldens(only=names or None)
    else:
        ok, res = run_selftest(full="--full" in sys.argv)
        for n, r, d in res:
            print("PASS" if r else "FAIL", n, d)
        sys.exit(0 if ok else 1)
