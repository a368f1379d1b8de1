"""Command-line front end.

Exit codes: 0 on success, 1 on a domain failure (untypable term, failed
golden comparison, not an I-type under ``--expect-itype``), 2 on usage or
input syntax errors.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys
from typing import Optional, Sequence, TextIO

from itypes.derivation import Derivation, check_derivation, classify_forall_elims, to_json, uses_forall_elim
from itypes.parser import ParseError, parse_term, parse_type
from itypes.polarity import erase_quantifiers, is_proper, polarity
from itypes.printer import print_term, print_type
from itypes.reduction import beta_eta_normalize, beta_normalize, eta_normalize, head_reduce
from itypes.search import UNKNOWN, SearchBudget, search_F_derivation
from itypes.simple import check_simple, infer_simple
from itypes.uv import uv_normalize

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _parse_ctx(text: Optional[str]) -> dict:
    """``"x : A; y : B"`` to an ordered dict."""
    out: dict = {}
    if not text:
        return out
    for item in text.split(";"):
        if not item.strip():
            continue
        name, sep, ty = item.partition(":")
        if not sep or not name.strip():
            raise UsageError(f"bad context entry {item.strip()!r}; expected 'x : A'")
        out[name.strip()] = parse_type(ty)
    return out


def _budget(args) -> SearchBudget:
    return SearchBudget(max_instantiation_size=args.inst_size)


def _require(args, *names):
    for n in names:
        if getattr(args, n, None) is None:
            raise UsageError(f"{args.command} needs --{n}")


# ---------------------------------------------------------------------------
# Commands; each returns (exit code, json document, text)
# ---------------------------------------------------------------------------


def cmd_parse(args):
    if (args.term is None) == (args.type is None):
        raise UsageError("parse needs exactly one of --term / --type")
    if args.term is not None:
        t = parse_term(args.term)
        s = print_term(t)
        return EXIT_OK, {"term": s, "size": t.size, "free_vars": sorted(t.free_vars)}, s
    a = parse_type(args.type)
    s = print_type(a)
    return EXIT_OK, {"type": s, "proper": is_proper(a), "free_vars": sorted(a.free_vars)}, s


_NORMALIZERS = {
    "beta": beta_normalize,
    "eta": eta_normalize,
    "beta-eta": beta_eta_normalize,
    "head": head_reduce,
    "uv": uv_normalize,
}


def cmd_normalize(args):
    _require(args, "term")
    out = _NORMALIZERS[args.mode](parse_term(args.term), args.fuel)
    s = print_term(out.result)
    doc = {"mode": args.mode, "result": s, "steps": out.steps, "exhausted": out.exhausted}
    text = s if not out.exhausted else f"{s}\n(fuel exhausted after {out.steps} steps)"
    return (EXIT_FAIL if out.exhausted else EXIT_OK), doc, text


def _derivation_doc(d: Derivation) -> dict:
    return {
        "derivation": to_json(d),
        "size": d.size,
        "checked": check_derivation(d),
        "uses_forall_elim": uses_forall_elim(d),
        "forall_elims": [{"path": list(p), "variant": v} for p, v in classify_forall_elims(d)],
    }


def cmd_typecheck(args):
    _require(args, "term")
    t = parse_term(args.term)
    ctx = _parse_ctx(args.ctx)
    if args.simple:
        if args.type is None:
            r = infer_simple(t)
            if r is None:
                return EXIT_FAIL, {"typable": False}, "not simply typable"
            env, a = r
            doc = {"typable": True, "context": {k: print_type(v) for k, v in env.items()}, "type": print_type(a)}
            env_s = ", ".join(f"{k} : {print_type(v)}" for k, v in env.items())
            return EXIT_OK, doc, f"{env_s} |- {print_term(t)} : {print_type(a)}"
        ok = check_simple(ctx, t, parse_type(args.type))
        return (EXIT_OK if ok else EXIT_FAIL), {"typable": ok}, "typable" if ok else "not typable"
    _require(args, "type")
    r = search_F_derivation(ctx, t, parse_type(args.type), _budget(args))
    if r is UNKNOWN:
        return EXIT_FAIL, {"typable": "unknown"}, "unknown (search budget exhausted)"
    if r is None:
        return EXIT_FAIL, {"typable": False}, "not typable"
    doc = {"typable": True} | _derivation_doc(r)
    return EXIT_OK, doc, str(r)


def cmd_polarity(args):
    _require(args, "type")
    a = parse_type(args.type)
    p = polarity(a)
    doc = {
        "type": print_type(a),
        "proper": is_proper(a),
        "in_pos": p.in_pos,
        "in_neg": p.in_neg,
        "negative_quantifiers": ["".join(q) for q in p.negative_quantifier_paths],
    }
    lines = [f"{k}: {v}" for k, v in doc.items()]
    return EXIT_OK, doc, "\n".join(lines)


def cmd_erase(args):
    _require(args, "type")
    s = print_type(erase_quantifiers(parse_type(args.type)))
    return EXIT_OK, {"erased": s}, s


def cmd_inhabit(args):
    from itypes.inhabitants import enumerate_inhabitants_full

    _require(args, "type")
    inhabitants, truncated = enumerate_inhabitants_full(parse_type(args.type), args.size_bound, _budget(args))
    doc = {
        "bound": args.size_bound,
        "truncated": truncated,
        "inhabitants": [
            {"term": print_term(i.term), "lambda_I": i.is_lambda_I, "size": i.derivation_size}
            for i in inhabitants
        ],
    }
    lines = [f"{print_term(i.term)}    [{'lambda-I' if i.is_lambda_I else 'lambda-K'}, size {i.derivation_size}]"
             for i in inhabitants]
    lines.append(f"{len(inhabitants)} inhabitant(s) up to derivation size {args.size_bound}"
                 + (" (search truncated)" if truncated else ""))
    return EXIT_OK, doc, "\n".join(lines)


def cmd_classify(args):
    from itypes.inhabitants import classify_itype

    _require(args, "type")
    rep = classify_itype(parse_type(args.type), args.size_bound, _budget(args))
    doc = rep.to_json()
    v = doc["verdict"]
    lines = [
        f"type: {doc['type']}",
        f"verdict: {v['kind']}" + (f" (witness {v['witness']})" if "witness" in v else "")
        + (f" (negative quantifier at {v['obstruction'] or 'root'})" if "obstruction" in v else ""),
        f"order: {rep.order}",
        f"demonstrable: {doc['demonstrable']}",
        f"explored bound: {rep.bound}",
    ]
    lines += [f"  {i['term']}    [{'lambda-I' if i['lambda_I'] else 'lambda-K'}]" for i in doc["inhabitants"]]
    code = EXIT_FAIL if args.expect_itype and not rep.is_itype else EXIT_OK
    return code, doc, "\n".join(lines)


def cmd_witness(args):
    from itypes.polarity import drop_vacuous_quantifiers
    from itypes.witness import k_witness

    _require(args, "type", "term")
    D = drop_vacuous_quantifiers(parse_type(args.type))
    tr = k_witness(D, parse_term(args.term), _budget(args))
    if tr is None:
        return EXIT_FAIL, {"witness": None}, "no lambda-K witness found"
    doc = tr.to_json()
    doc["checked"] = all(check_derivation(d) for d in (tr.before, tr.after, tr.final_derivation))
    lines = [
        f"original:  {print_term(tr.original)}",
        f"rewritten: {print_term(tr.rewritten)}",
        f"witness:   {print_term(tr.final)}",
        f"rewritten node: {'/'.join(map(str, tr.used_node)) or 'root'}",
        f"derivations check: {doc['checked']}",
    ]
    return EXIT_OK, doc, "\n".join(lines)


def cmd_sweep(args):
    from itypes.inhabitants import sweep_small_types, sweep_summary

    reports = sweep_small_types(args.quantifiers, args.type_size, args.size_bound, _budget(args))
    doc = sweep_summary(reports) | {"quantifiers": args.quantifiers, "type_size": args.type_size}
    lines = [f"{doc['types']} types classified; I-types found:"]
    for it in doc["itypes"]:
        lines.append(f"  {it['type']}    {it['inhabitants']}    shape: {it['shape']}")
    return EXIT_OK, doc, "\n".join(lines)


def cmd_selftest(args):
    from itypes.selftest import run_selftest

    ok, results = run_selftest(args.filter, full=args.full)
    doc = {"ok": ok, "results": [{"name": n, "ok": r, "detail": d} for n, r, d in results]}
    lines = [f"{'PASS' if r else 'FAIL'} {n}" + (f": {d}" if d and not r else "") for n, r, d in results]
    lines.append("all passed" if ok else "FAILURES")
    return (EXIT_OK if ok else EXIT_FAIL), doc, "\n".join(lines)


COMMANDS = {
    "parse": cmd_parse,
    "normalize": cmd_normalize,
    "typecheck": cmd_typecheck,
    "polarity": cmd_polarity,
    "erase": cmd_erase,
    "inhabit": cmd_inhabit,
    "classify": cmd_classify,
    "witness": cmd_witness,
    "sweep": cmd_sweep,
    "selftest": cmd_selftest,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fuel", type=int, default=10000, help="reduction step limit")
    common.add_argument("--size-bound", type=int, default=24, help="derivation-size bound for enumeration")
    common.add_argument("--inst-size", type=int, default=8, help="max connectives in an instantiation")
    common.add_argument("--json", action="store_true", help="emit one JSON document")
    common.add_argument("--golden", metavar="PATH", help="compare the JSON result with a stored file")

    # the shared flags go after the command name
    p = argparse.ArgumentParser(prog="itypes",
                                description="Lambda-I inhabitants of System F types.")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, help_):
        return sub.add_parser(name, parents=[common], help=help_)

    s = add("parse", "parse and pretty-print a term or a type")
    s.add_argument("--term")
    s.add_argument("--type")
    s = add("normalize", "reduce a term")
    s.add_argument("--term")
    s.add_argument("--mode", choices=sorted(_NORMALIZERS), default="beta-eta")
    s = add("typecheck", "find a System F derivation (or a simple typing with --simple)")
    s.add_argument("--term")
    s.add_argument("--type")
    s.add_argument("--ctx", help="context 'x : A; y : B'")
    s.add_argument("--simple", action="store_true")
    s = add("polarity", "quantifier polarity of a type")
    s.add_argument("--type")
    s = add("erase", "erase the quantifiers of a type")
    s.add_argument("--type")
    s = add("inhabit", "enumerate closed normal inhabitants")
    s.add_argument("--type")
    s = add("classify", "I-type classification")
    s.add_argument("--type")
    s.add_argument("--expect-itype", action="store_true", help="exit 1 unless the verdict is ITypeUpToBound")
    s = add("witness", "build a lambda-K inhabitant from a lambda-I one")
    s.add_argument("--type")
    s.add_argument("--term")
    s = add("sweep", "classify all small types with one or two quantifiers")
    s.add_argument("--quantifiers", type=int, choices=(1, 2), default=1)
    s.add_argument("--type-size", type=int, default=9)
    s = add("selftest", "run stored goldens and property checks")
    s.add_argument("--filter", help="run only the checks whose name contains this string")
    s.add_argument("--full", action="store_true", help="include slow checks")
    return p


def _compare_golden(path: str, doc) -> tuple[bool, str]:
    try:
        with open(path) as f:
            want = json.load(f)
    except (OSError, ValueError) as e:
        return False, f"cannot read golden {path}: {e}"
    if want == json.loads(json.dumps(doc)):
        return True, f"matches golden {path}"
    return False, f"differs from golden {path}"


def run(argv: Sequence[str], out: TextIO = sys.stdout, err: TextIO = sys.stderr) -> int:
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
            args = parser.parse_args(list(argv))
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        code, doc, text = COMMANDS[args.command](args)
    except (UsageError, ParseError) as e:
        print(f"error: {e}", file=err)
        parser.print_usage(err)
        return EXIT_USAGE
    except ValueError as e:
        # a well-formed input outside an operation's domain, e.g. an open type
        print(f"error: {e}", file=err)
        return EXIT_FAIL
    if args.golden:
        ok, msg = _compare_golden(args.golden, doc)
        print(msg, file=err)
        if not ok:
            code = EXIT_FAIL
    if args.json:
        print(json.dumps(doc, sort_keys=True), file=out)
    else:
        print(text, file=out)
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
