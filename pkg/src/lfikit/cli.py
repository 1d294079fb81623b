"""Command-line interface: ``lfikit <command> ...``.

Exit codes: 0 success or verdict true, 1 verdict false, 2 usage error,
3 internal error.  ``--json`` prints one JSON report object; its keys are
``command``, ``inputs``, ``verdict``, ``result`` and ``timing``.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Sequence

from .algebra import enumerate_congruences
from .eightk import SearchBoundExhausted, census, separating_formula
from .formula import ParseError, parse, render
from .hilbert import (
    ProofError, DeductionError, check_proof, deduction_transform, get_system,
    load_proof, proof_to_json, soundness_report,
)
from .matrices import (
    DomainTooLargeError, MatrixError, MissingAtomError, MissingTableError,
    bounded_terms, clone_functions, evaluate, find_countermodel,
)
from .registry import available_keys, catalog_entry, lookup, matrix_to_dict
from .translate import TranslationError, apply_translation, conservativity_check, get_translation

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3

DEFAULT_SOURCE = {"t1": "cpl", "t1e": "ecpl", "t2-cons": "cpl", "t2-conj": "cpl", "p1embed": "p1"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}\n\n{self.format_usage()}")


def _valuation_text(L, v) -> dict:
    return {k: L.label(i) for k, i in v.items()} if v else None


def _parse_valuation(text: str) -> dict[str, str]:
    out = {}
    for part in filter(None, (s.strip() for s in text.split(","))):
        if "=" not in part:
            raise UsageError(f"bad valuation item {part!r}; expected name=value")
        k, v = part.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _formulas(text: str) -> list:
    return [parse(s) for s in text.split(";") if s.strip()]


# ------------------------------------------------------------------ commands
# each returns (verdict, result, text); verdict None means "no verdict"

def cmd_logics(a):
    if a.action == "list":
        keys = available_keys()
        return None, {"keys": keys}, "\n".join(keys)
    if not a.key:
        raise UsageError("logics show needs a key")
    L = lookup(a.key)
    doc = matrix_to_dict(L)
    try:
        doc["provenance"] = catalog_entry(a.key).provenance
    except KeyError:
        pass
    lines = [f"{L.name}: values {list(L.values)}, designated "
             f"{[L.label(i) for i in sorted(L.designated)]}"]
    for conn, T in L.arrays.items():
        lines.append(f"  {conn}: {T.tolist()}")
    return None, doc, "\n".join(lines)


def cmd_eval(a):
    L = lookup(a.logic)
    f = parse(a.formula)
    v = _parse_valuation(a.valuation or "")
    val = L.label(evaluate(L, f, v))
    verdict = bool(L.is_designated(L.index(val)))
    return verdict, {"value": val, "designated": verdict}, f"{render(f)} = {val}"


def cmd_valid(a):
    L = lookup(a.logic)
    f = parse(a.formula)
    cm = find_countermodel(L, [], f)
    ok = cm is None
    res = {"valid": ok, "countermodel": _valuation_text(L, cm)}
    text = "valid" if ok else f"not valid; countermodel {res['countermodel']}"
    return ok, res, text


def cmd_entails(a):
    L = lookup(a.logic)
    prem, concl = _formulas(a.premises or ""), parse(a.conclusion)
    cm = find_countermodel(L, prem, concl)
    ok = cm is None
    res = {"entails": ok, "countermodel": _valuation_text(L, cm)}
    return ok, res, "entailed" if ok else f"not entailed; countermodel {res['countermodel']}"


def cmd_countermodel(a):
    L = lookup(a.logic)
    prem, concl = _formulas(a.premises or ""), parse(a.conclusion)
    cm = find_countermodel(L, prem, concl)
    res = {"found": cm is not None, "countermodel": _valuation_text(L, cm)}
    return cm is not None, res, str(res["countermodel"]) if cm else "no countermodel"


def cmd_soundness(a):
    r = soundness_report(a.system, lookup(a.logic))
    lines = [f"{v.rule}: {'sound' if v.sound else 'fails at ' + str(v.countermodel)}" for v in r.verdicts]
    return r.sound, r.as_dict(), "\n".join(lines)


def cmd_proof(a):
    p = load_proof(a.file)
    S = get_system(a.system)
    if a.action == "check":
        r = check_proof(S, p)
        res = {"ok": r.ok, "step": r.step, "error": r.error}
        return r.ok, res, "proof checks" if r.ok else f"step {r.step}: {r.error}"
    if not a.discharge:
        raise UsageError("proof deduce needs -A <formula>")
    q = deduction_transform(S, p, parse(a.discharge))
    r = check_proof(S, q)
    doc = proof_to_json(q)
    return r.ok, {"proof": doc, "rechecks": r.ok}, json.dumps(doc, indent=1, ensure_ascii=False)


def cmd_census8k(a):
    rep = census(parallel=a.parallel)
    res = rep.as_dict(with_codes=False)
    lines = [f"{k}: {v}" for k, v in rep.counts.items()]
    for k, (got, exp) in rep.discrepancies().items():
        lines.append(f"note: {k} = {got}, reference {exp}")
    return None, res, "\n".join(lines)


def cmd_separate(a):
    c1, c2 = int(a.code1, 0), int(a.code2, 0)
    if c1 == c2:
        raise UsageError("the two codes are equal")
    try:
        f = separating_formula(c1, c2, a.bound)
    except SearchBoundExhausted as exc:
        return False, {"separator": None, "reason": str(exc)}, str(exc)
    from .eightk import build_logic
    from .matrices import is_valid
    res = {"separator": render(f), "valid_in": [c for c in (c1, c2) if is_valid(build_logic(c), f)]}
    return True, res, render(f)


def cmd_congruences(a):
    L = lookup(a.logic)
    cs = enumerate_congruences(L, designated_compatible=a.designated)
    res = {"count": len(cs), "congruences": [c.labels(L) for c in cs]}
    return None, res, "\n".join(str(c.labels(L)) for c in cs)


def cmd_translate(a):
    f = apply_translation(a.translation, parse(a.formula))
    return None, {"image": render(f)}, render(f)


def cmd_conservativity(a):
    t = get_translation(a.translation)
    src = lookup(a.source or DEFAULT_SOURCE.get(t.name, "cpl"))
    v = conservativity_check(t, src, lookup(a.target), a.atoms, a.size, a.premises)
    text = "no violation" if v.ok else f"violation: {v.premises} / {v.conclusion}"
    return v.ok, v.as_dict(), text


def cmd_clone(a):
    L = lookup(a.logic)
    if a.bound is None:
        cs = clone_functions(L, a.arity)
    else:
        cs = bounded_terms(L, a.arity, a.bound)
    rows = [{"function": [L.label(x) for x in fn], "term": render(t)} for fn, t in cs.items()]
    res = {"exact": cs.exact, "size": len(cs), "functions": rows}
    text = "\n".join(f"{' '.join(r['function'])}  {r['term']}" for r in rows)
    return None, res, text + f"\n{len(cs)} functions" + ("" if cs.exact else " (bounded)")


def cmd_verify_paper(a):
    from .verify import run_checks
    outs = run_checks(section=a.section)
    counts = {s: sum(o.status == s for o in outs) for s in ("pass", "fail", "known", "error")}
    res = {"checks": [o.as_dict() for o in outs], "counts": counts, "total": len(outs)}
    ok = len(outs) > 0 and counts["pass"] + (counts["known"] if a.allow_known else 0) == len(outs)
    lines = [o.line() for o in outs]
    lines.append(f"{len(outs)} checks: " + ", ".join(f"{v} {k}" for k, v in counts.items()))
    return ok, res, "\n".join(lines)


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lfikit", description="Finite-matrix toolkit for logics of formal inconsistency.")
    p.add_argument("--json", action="store_true", help="print a JSON report")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def cmd(name, fn, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        s.set_defaults(fn=fn)
        return s

    s = cmd("logics", cmd_logics, "list or show matrices")
    s.add_argument("action", choices=["list", "show"])
    s.add_argument("key", nargs="?")

    s = cmd("eval", cmd_eval, "evaluate a formula at a valuation")
    s.add_argument("-l", "--logic", required=True)
    s.add_argument("-f", "--formula", required=True)
    s.add_argument("-v", "--valuation", default="", help="p=1/2,q=1")

    s = cmd("valid", cmd_valid, "validity of a schema")
    s.add_argument("-l", "--logic", required=True)
    s.add_argument("-f", "--formula", required=True)

    for name, fn in (("entails", cmd_entails), ("countermodel", cmd_countermodel)):
        s = cmd(name, fn, "semantic consequence" if name == "entails" else "search a countermodel")
        s.add_argument("-l", "--logic", required=True)
        s.add_argument("-p", "--premises", default="", help="semicolon-separated")
        s.add_argument("-c", "--conclusion", required=True)

    s = cmd("soundness", cmd_soundness, "rule-by-rule soundness of a system in a matrix")
    s.add_argument("-s", "--system", required=True)
    s.add_argument("-l", "--logic", required=True)

    s = cmd("proof", cmd_proof, "check a proof file or apply the deduction transform")
    s.add_argument("action", choices=["check", "deduce"])
    s.add_argument("file")
    s.add_argument("-s", "--system", required=True)
    s.add_argument("-A", dest="discharge")

    s = cmd("census8k", cmd_census8k, "classify the 8192 three-valued logics")
    s.add_argument("--parallel", type=int, default=1)

    s = cmd("separate", cmd_separate, "smallest schema valid in exactly one of two codes")
    s.add_argument("code1")
    s.add_argument("code2")
    s.add_argument("--bound", type=int, default=7)

    s = cmd("congruences", cmd_congruences, "congruences of a matrix")
    s.add_argument("-l", "--logic", required=True)
    s.add_argument("--designated", action="store_true")

    s = cmd("translate", cmd_translate, "apply a translation to a formula")
    s.add_argument("-t", "--translation", required=True)
    s.add_argument("-f", "--formula", required=True)

    s = cmd("conservativity", cmd_conservativity, "bounded conservativity check")
    s.add_argument("-t", "--translation", required=True)
    s.add_argument("--source")
    s.add_argument("--target", required=True)
    s.add_argument("--atoms", type=int, default=2)
    s.add_argument("--size", type=int, default=4)
    s.add_argument("--premises", type=int, default=2, help="largest premise set")

    s = cmd("clone", cmd_clone, "term functions of a matrix")
    s.add_argument("-l", "--logic", required=True)
    s.add_argument("--arity", type=int, default=1)
    s.add_argument("--bound", type=int, help="size bound (default: exact clone)")

    s = cmd("verify-paper", cmd_verify_paper, "run the reproduction checks")
    s.add_argument("--section")
    s.add_argument("--allow-known", action="store_true",
                   help="exit 0 when the only mismatches are recorded ones")
    return p


_USAGE_ERRORS = (UsageError, ParseError, KeyError, MatrixError, MissingAtomError, MissingTableError,
                 ProofError, DeductionError, TranslationError, DomainTooLargeError, ValueError,
                 FileNotFoundError)


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    want_json = "--json" in argv
    t0 = time.perf_counter()
    try:
        a = parser.parse_args(argv)
        if not getattr(a, "command", None):
            raise UsageError(parser.format_help())
        verdict, result, text = a.fn(a)
    except _USAGE_ERRORS as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        _emit(want_json, {"command": argv[0] if argv else None, "error": str(msg)}, str(msg), err=True)
        return EXIT_USAGE
    except Exception as exc:  # pragma: no cover - last resort
        _emit(want_json, {"command": argv[0] if argv else None,
                          "error": f"{type(exc).__name__}: {exc}"}, f"internal error: {exc}", err=True)
        return EXIT_INTERNAL
    inputs = {k: v for k, v in vars(a).items() if k not in ("fn", "json", "command")}
    report = {"command": a.command, "inputs": inputs, "verdict": verdict, "result": result,
              "timing": round(time.perf_counter() - t0, 3)}
    _emit(want_json, report, text)
    if verdict is False:
        return EXIT_FALSE
    return EXIT_OK


def _emit(as_json: bool, report: dict, text: str, err: bool = False) -> None:
    stream = sys.stderr if err and not as_json else sys.stdout
    if as_json:
        print(json.dumps(report, indent=1, ensure_ascii=False, default=str), file=stream)
    else:
        print(text, file=stream)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
