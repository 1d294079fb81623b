"""Reproduction checks run by ``verify-paper``.

Each check is a function returning ``(expected, got)``; it passes when the
two agree.  The source location and section tags of every check live in
``data/locations.json`` keyed by check id, so filtering by section is a
data lookup.  A check marked ``known`` there reports a recorded mismatch
with status ``known`` instead of ``fail``.
"""

from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from typing import Callable, Iterable

import numpy as np

from .algebra import (
    blok_pigozzi_check, congruence_connective_check, enumerate_congruences,
    lattice_filters, leibniz_verdict,
)
from .eightk import (
    NCODES, Family, SN_TABLE, _full, build_logic, census, code_of,
    separating_formula, signature_classes, strong_negation_table,
)
from .formula import Imp, MetaVar, parse, render
from .hilbert import (
    check_proof, deduction_transform, get_rule, get_system, metarule_sound_bounded,
    proof_from_json, proof_to_json, random_proof, soundness_report,
)
from .matrices import (
    classify_explosion, clone_functions, entails, is_valid, rule_sound, truth_table,
)
from .registry import builtin
from .translate import (
    apply_translation, conservativity_check, consistency_premises_check,
    define_hyperclassical,
)

__all__ = ["CHECKS", "CheckOutcome", "run_checks", "check_ids", "location"]

CHECKS: dict[str, tuple[str, Callable[[], tuple[object, object]]]] = {}


def check(cid: str, description: str):
    def deco(fn):
        CHECKS[cid] = (description, fn)
        return fn
    return deco


@lru_cache(maxsize=1)
def _locations() -> dict:
    text = resources.files("lfikit").joinpath("data", "locations.json").read_text(encoding="utf-8")
    return json.loads(text)


def location(cid: str) -> dict:
    return _locations().get(cid, {"sections": [], "location": "unlocated"})


@dataclass
class CheckOutcome:
    id: str
    description: str
    location: str
    sections: list[str]
    expected: str
    got: str
    status: str  # pass | fail | known | error
    seconds: float
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def line(self) -> str:
        return (f"[{self.status.upper()}] {self.location}: {self.description} | "
                f"expected: {self.expected} | got: {self.got}")

    def as_dict(self) -> dict:
        d = {"id": self.id, "description": self.description, "location": self.location,
             "sections": self.sections, "expected": self.expected, "got": self.got,
             "status": self.status}
        if self.note:
            d["note"] = self.note
        return d


def _matches(sections: Iterable[str], wanted: str) -> bool:
    w = wanted.strip().lstrip("§")
    return any(s == w or s.startswith(w + ".") or s.startswith(w + "(") for s in sections)


def check_ids(section: str | None = None) -> list[str]:
    if section is None:
        return list(CHECKS)
    return [c for c in CHECKS if _matches(location(c).get("sections", []), section)]


def _show(x: object) -> str:
    if isinstance(x, (list, tuple)) and not isinstance(x, str):
        return "[" + ", ".join(_show(v) for v in x) + "]"
    if isinstance(x, dict):
        return "{" + ", ".join(f"{k}: {_show(v)}" for k, v in x.items()) + "}"
    return str(x)


def run_checks(ids: Iterable[str] | None = None, section: str | None = None) -> list[CheckOutcome]:
    chosen = list(ids) if ids is not None else check_ids(section)
    out = []
    for cid in chosen:
        desc, fn = CHECKS[cid]
        loc = location(cid)
        t0 = time.perf_counter()
        try:
            exp, got = fn()
            ok = exp == got
            status = "pass" if ok else ("known" if loc.get("known") else "fail")
            exp_s, got_s = _show(exp), _show(got)
        except Exception as exc:  # reported, never raised
            status, exp_s, got_s = "error", "no exception", f"{type(exc).__name__}: {exc}"
        out.append(CheckOutcome(cid, desc, loc.get("location", "unlocated"), loc.get("sections", []),
                                exp_s, got_s, status, time.perf_counter() - t0,
                                loc.get("known", "") if status == "known" else ""))
    return out


# ------------------------------------------------------------------ helpers

def _sound(system: str, key: str) -> tuple[str, str]:
    r = soundness_report(system, builtin(key))
    return "sound", "sound" if r.sound else "fails " + ", ".join(r.failing)


def _failing(system: str, key: str, expected: list[str]) -> tuple[list[str], list[str]]:
    return expected, soundness_report(system, builtin(key)).failing


def _validity(key: str, formula: str, expected: bool) -> tuple[str, str]:
    word = {True: "valid", False: "invalid"}
    return word[expected], word[is_valid(builtin(key), parse(formula))]


def _rule(key: str, prem: list[str], concl: str, expected: bool) -> tuple[str, str]:
    word = {True: "sound", False: "unsound"}
    ok = rule_sound(builtin(key), [parse(p) for p in prem], parse(concl))
    return word[expected], word[ok]


def _equivalent(L, a: str, b: str) -> bool:
    fa, fb = parse(a), parse(b)
    return entails(L, [fa], fb) and entails(L, [fb], fa)


def _metarule(key: str, rule: str, bound: int, arity: int = 1) -> tuple[str, str]:
    v = metarule_sound_bounded(builtin(key), rule, bound, arity)
    return "no violation", "no violation" if v.ok else "violation " + " / ".join(render(t) for t in v.violation)


# ---------------------------------------------------------------- Pac

@check("pac-cmin-sound", "Cmin axioms and MP are sound in Pac")
def _():
    return _sound("Cmin", "pac")


@check("pac-tps-invalid", "A -> (~A -> B) is not valid in Pac")
def _():
    return _validity("pac", "A -> (~A -> B)", False)


@check("pac-not-explosive", "p, ~p do not entail q in Pac")
def _():
    L = builtin("pac")
    return "not entailed", "entailed" if entails(L, [parse("p"), parse("~p")], parse("q")) else "not entailed"


@check("pac-no-bottom", "no bottom particle in the unary clone of Pac")
def _():
    prof = classify_explosion(builtin("pac"))
    return None, None if prof.bottom_witness is None else render(prof.bottom_witness)


@check("pac-no-strong-negation", "no strong negation in the unary clone of Pac")
def _():
    prof = classify_explosion(builtin("pac"))
    w = prof.strong_negation_witness
    return None, None if w is None else render(w)


@check("pac-half-fixed", "every unary and binary clone member of Pac sends 1/2 inputs to 1/2")
def _():
    L = builtin("pac")
    h = L.index("1/2")
    bad = [render(t) for f, t in clone_functions(L, 1).items() if f[h] != h]
    bad += [render(t) for f, t in clone_functions(L, 2).items() if f[h * L.n + h] != h]
    return [], bad


# --------------------------------------------------------- independence

@check("min9-independent", "the Min9 countermodel refutes exactly Min9 among Cmin's rules")
def _():
    return _failing("Cmin", "thm3.3", ["Min9"])


@check("p1-not-top-left", "~(A & ~A) is not valid in P1")
def _():
    return _validity("p1", "~(A & ~A)", False)


@check("p1-not-top-right", "~(~A & A) is not valid in P1")
def _():
    return _validity("p1", "~(~A & A)", False)


@check("p1-no-dn-intro", "A -> ~~A is not valid in P1")
def _():
    return _validity("p1", "A -> ~~A", False)


@check("p1-bc-sound", "all rules of bC are sound in P1")
def _():
    return _sound("bC", "p1")


@check("p1-civw-sound", "all rules of Civw are sound in P1")
def _():
    return _sound("Civw", "p1")


# interdefinability rules, numbered as printed
INTERDEF = {
    "i": (["~A -> B"], "A | B"),
    "ii": (["A | B"], "~A -> B"),
    "iii": (["~(~A -> B)"], "~(A | B)"),
    "iv": (["~(A | B)"], "~(~A -> B)"),
    "v": (["A -> B"], "~(A & ~B)"),
    "vi": (["~(A & ~B)"], "A -> B"),
    "vii": (["~(A -> B)"], "A & ~B"),
    "viii": (["A & ~B"], "~(A -> B)"),
    "ix": (["~(A & B)"], "~A | ~B"),
    "x": (["~A | ~B"], "~(A & B)"),
    "xi": (["~(~A | ~B)"], "A & B"),
    "xii": (["A & B"], "~(~A | ~B)"),
}


def _interdef(key: str) -> list[str]:
    L = builtin(key)
    return [k for k, (p, c) in INTERDEF.items() if rule_sound(L, [parse(x) for x in p], parse(c))]


@check("lfi1-interdef", "interdefinability rules sound in LFI1")
def _():
    return ["i", "iii", "iv", "v", "vii", "viii", "ix", "x", "xi", "xii"], _interdef("lfi1")


for _key in ("p1", "p2", "p3", "lfi2"):
    def _mk(key=_key):
        return ["i", "iv", "vi", "vii", "ix", "xi"], _interdef(key)
    check(f"{_key}-interdef", f"interdefinability rules sound in {_key.upper()}")(_mk)


@check("lfi1-ci-sound", "all rules of Ci are sound in LFI1")
def _():
    return _sound("Ci", "lfi1")


@check("lfi1-cj-sound", "cj1-cj3 are sound in LFI1")
def _():
    r = soundness_report("Ci", builtin("lfi1"), [get_rule(f"cj{i}") for i in (1, 2, 3)])
    return "sound", "sound" if r.sound else "fails " + ", ".join(r.failing)


@check("lfi1-ce-sound", "ce is sound in LFI1")
def _():
    r = soundness_report("Ci", builtin("lfi1"), [get_rule("ce")])
    return "sound", "sound" if r.sound else "fails ce"


@check("lfi1-cl-top", "~(A & ~A) is valid in LFI1")
def _():
    return _validity("lfi1", "~(A & ~A)", True)


@check("lfi1-tps-invalid", "A -> (~A -> B) is not valid in LFI1")
def _():
    return _validity("lfi1", "A -> (~A -> B)", False)


@check("lfi2-cl-top", "~(A & ~A) and ~(~A & A) are valid in LFI2")
def _():
    L = builtin("lfi2")
    return [True, True], [is_valid(L, parse("~(A & ~A)")), is_valid(L, parse("~(~A & A)"))]


@check("contradiction-dn", "A & ~A entails ~~(A & ~A) in P2, LFI1 and LFI2")
def _():
    return [True] * 3, [entails(builtin(k), [parse("A & ~A")], parse("~~(A & ~A)"))
                        for k in ("p2", "lfi1", "lfi2")]


@check("bc-contradiction-rules", "contradiction/consistency rules of bC hold in the replaced-negation matrix")
def _():
    return _sound("bC", "fact3.16neg")


@check("bc-contradiction-converses", "converses of the contradiction/consistency rules fail")
def _():
    L = builtin("fact3.16neg")
    conv = [(["~o A"], "A & ~A"), (["~(A & ~A)"], "o A"), (["~(~A & A)"], "o A")]
    return [False] * 3, [rule_sound(L, [parse(p[0])], parse(c)) for p, c in conv]


@check("bc-negated-commutation", "bC is sound, but negated commuted pairs are not equivalent")
def _():
    L = builtin("thm3.21")
    got = [soundness_report("bC", L).sound] + [
        _equivalent(L, a, b) for a, b in [("~(A & B)", "~(B & A)"), ("~(A | B)", "~(B | A)"),
                                          ("~(A & ~A)", "~(~A & A)")]]
    return [True, False, False, False], got


@check("bc3-independent", "bC + bc2 is sound and bc3 fails")
def _():
    L = builtin("thm3.23")
    r = soundness_report("bC+bc2+bc3", L)
    return ["bc3"], r.failing


@check("bc45-independent", "bbC is sound and both bc4 and bc5 fail")
def _():
    return ["bc4", "bc5"], soundness_report("bbC+bc4+bc5", builtin("thm3.24")).failing


@check("bc4-independent", "bbC + bc5 is sound and bc4 fails")
def _():
    return ["bc4"], soundness_report("bbC+bc5+bc4", builtin("thm3.25a")).failing


@check("bc5-independent", "bbC + bc4 is sound and bc5 fails")
def _():
    return ["bc5"], soundness_report("bbC+bc4+bc5", builtin("thm3.25b")).failing


@check("cons-dn-independent", "bbbC is sound; oA -> ~~oA and *A -> ~~*A are not valid")
def _():
    L = builtin("thm3.27")
    return ["sound", "invalid", "invalid"], [
        "sound" if soundness_report("bbbC", L).sound else "unsound",
        *("valid" if is_valid(L, parse(f)) else "invalid" for f in ("o A -> ~~o A", "*A -> ~~*A"))]


@check("dn-intro-independent", "bbbC plus the two double negation schemas is sound; A -> ~~A is not valid")
def _():
    L = builtin("thm3.28")
    extra = [parse("o A -> ~~o A"), parse("*A -> ~~*A")]
    ok = soundness_report("bbbC", L).sound and all(is_valid(L, f) for f in extra)
    return ["sound", "invalid"], ["sound" if ok else "unsound",
                                  "valid" if is_valid(L, parse("A -> ~~A")) else "invalid"]


@check("strong-negation-not-classical", "bbbC is sound, ci and ext fail, A | -A and A -> --A are not valid")
def _():
    L = builtin("thm3.42")
    r = soundness_report("bbbC+ci+ext", L)
    return [["ci", "ext"], False, False], [r.failing, is_valid(L, parse("A | -A")),
                                           is_valid(L, parse("A -> --A"))]


@check("ra0-not-bc1", "PI + RA0 is sound and bc1 fails")
def _():
    return ["bc1"], soundness_report("PI+RA0+bc1", builtin("thm3.13")).failing


@check("ci-consistent-formulas", "Ci is sound and o-A is not valid")
def _():
    L = builtin("fact3.50")
    return ["sound", "invalid"], ["sound" if soundness_report("Ci", L).sound else "unsound",
                                  "valid" if is_valid(L, parse("o -A")) else "invalid"]


# ----------------------------------------------------------------- Urbas

@check("urbas-bc-sound", "all rules of bC are sound in the Urbas matrices")
def _():
    return _sound("bC", "thm3.53urbas")


@check("urbas-ec", "EC has no violation up to size 5")
def _():
    return _metarule("thm3.53urbas", "EC", 5)


@check("urbas-eo", "EO has no violation up to size 5")
def _():
    return _metarule("thm3.53urbas", "EO", 5)


@check("urbas-tps-invalid", "A -> (~A -> B) is not valid in the Urbas matrices")
def _():
    return _validity("thm3.53urbas", "A -> (~A -> B)", False)


@check("urbas-not-top", "~(A & ~A) is not valid in the Urbas matrices")
def _():
    return _validity("thm3.53urbas", "~(A & ~A)", False)


@check("lfi1-rc-violation", "RC has a violation in LFI1 up to size 4")
def _():
    v = metarule_sound_bounded(builtin("lfi1"), "RC", 4)
    return "violation", "violation" if not v.ok else "no violation"


# ---------------------------------------------------------- global rules

@check("cib-rg-ipe", "Cib is sound, RG has no violation, ~(A | B) and ~(B | A) are not equivalent")
def _():
    L = builtin("thm3.58")
    rg = metarule_sound_bounded(L, "RG", 5).ok
    return [True, True, False], [soundness_report("Cib", L).sound, rg,
                                 _equivalent(L, "~(A | B)", "~(B | A)")]


@check("cib-cg-sound", "cg is sound in the same matrix")
def _():
    return _sound("Cib+cg", "thm3.58")


# ---------------------------------------------------------- five logics

@check("p2-tps-invalid", "A -> (~A -> B) is not valid in P2 or LFI1")
def _():
    return [False, False], [is_valid(builtin(k), parse("A -> (~A -> B)")) for k in ("p2", "lfi1")]


@check("p2-cive-sound", "all rules of Cive are sound in P2")
def _():
    return _sound("Cive", "p2")


@check("lfi1-cije-sound", "all rules of Cije are sound in LFI1")
def _():
    return _sound("Cije", "lfi1")


@check("p3-ciorw-sound", "all rules of Ciorw are sound in P3")
def _():
    return _sound("Ciorw", "p3")


@check("lfi2-ciore-sound", "all rules of Ciore are sound in LFI2")
def _():
    return _sound("Ciore", "lfi2")


@check("p3-cr2-disjunctive", "cr2 with a disjunctive conclusion is sound in P3 and LFI2")
def _():
    return [True, True], [rule_sound(builtin(k), [parse("o (A | B)")], parse("o A | o B"))
                          for k in ("p3", "lfi2")]


# ------------------------------------------------------------ 8K family

@lru_cache(maxsize=1)
def _census():
    return census()


for _name, _exp in (("total", 8192), ("dc", 7680), ("cila_cons", 4096), ("cio", 1680), ("cio_cila", 980)):
    def _mk(name=_name, exp=_exp):
        return exp, _census().counts[name]
    check(f"census-{_name.replace('_', '-')}", f"census count {_name}")(_mk)


@check("census-cia", "every code makes Cia sound")
def _():
    return NCODES, int(_full().system_sound("Cia").sum())


@check("census-cons-strong-neg", "o-A is valid in every code")
def _():
    return NCODES, int(_full().valid(parse("o -A")).sum())


@check("census-extends-bc", "every code: Min1-Min11, MP and bc1 sound, tPS invalid")
def _():
    fam = _full()
    ok = fam.system_sound("bC") & ~fam.valid(parse("A -> (~A -> B)"))
    return NCODES, int(ok.sum())


@check("census-separated", "all pairs of codes are separated by a schema of size at most 7")
def _():
    s = signature_classes(7)
    return NCODES, s["classes"]


@check("census-injective", "distinct codes have distinct tables")
def _():
    fam = _full()
    rows = np.concatenate([fam.tables[k].reshape(NCODES, -1) for k in ("neg", "and", "or", "imp")], axis=1)
    return NCODES, len({r.tobytes() for r in rows})


@check("p1-p2-separator", "A -> ~~A is valid in P2 but not in P1, and a separator is found")
def _():
    c1, c2 = code_of(builtin("p1")), code_of(builtin("p2"))
    f = separating_formula(c1, c2)
    sep = is_valid(build_logic(c1), f) != is_valid(build_logic(c2), f)
    return [False, True, True], [is_valid(build_logic(c1), parse("A -> ~~A")),
                                 is_valid(build_logic(c2), parse("A -> ~~A")), sep]


@check("strong-negation-all", "every code defines the classical negation (1, 1/2, 0) -> (0, 0, 1)")
def _():
    fam = _full()
    t = fam.evaluate(parse("~A & o A"))
    ok = (t == np.array(SN_TABLE)).all(axis=1)
    strong_negation_table(code_of(builtin("lfi1")))
    return NCODES, int(ok.sum())


@check("congruence-all", "(A <-> B) & (oA <-> oB) defines a congruence in every code")
def _():
    e = parse("(A <-> B) & (o A <-> o B)")
    return NCODES, sum(congruence_connective_check(build_logic(c), e) for c in range(NCODES))


@check("congruence-p1-iff", "A <-> B alone does not define a congruence in P1")
def _():
    return False, congruence_connective_check(builtin("p1"), parse("A <-> B"))


@check("blok-pigozzi-all", "Blok-Pigozzi conditions with delta (A->A)->A, epsilon A->A hold in every code")
def _():
    e, d, eps = parse("(A <-> B) & (o A <-> o B)"), parse("(A -> A) -> A"), parse("A -> A")
    return NCODES, sum(blok_pigozzi_check(build_logic(c), e, d, eps) for c in range(NCODES))


@check("blok-pigozzi-alt", "Blok-Pigozzi conditions with delta oA, epsilon A & oA hold in every code")
def _():
    e, d, eps = parse("(A <-> B) & (o A <-> o B)"), parse("o A"), parse("A & o A")
    return NCODES, sum(blok_pigozzi_check(build_logic(c), e, d, eps) for c in range(NCODES))


# --------------------------------------------------------------- Mortensen

@check("mortensen-congruences", "only the identity is a designated-compatible congruence")
def _():
    L = builtin("thm3.83mortensen")
    c = enumerate_congruences(L, designated_compatible=True)
    return [True], [x.is_identity for x in c]


@check("mortensen-filters", "at least two lattice filters")
def _():
    return True, len(lattice_filters(builtin("thm3.83mortensen"))) >= 2


@check("mortensen-cibaw", "all rules of Cibaw are sound")
def _():
    return _sound("Cibaw", "thm3.83mortensen")


@check("mortensen-no-isomorphism", "filters outnumber congruences, so no isomorphism")
def _():
    return True, leibniz_verdict(builtin("thm3.83mortensen"))["no_isomorphism"]


@check("mortensen-named-filters", "the two printed value sets are lattice filters")
def _():
    fs = lattice_filters(builtin("thm3.83mortensen"))
    return [True, True], [frozenset(s) in fs for s in ({"0", "a", "1", "u"}, {"0", "b", "1", "u"})]


@check("mortensen-m-rules", "M1n and M2n for n <= 3 are sound in P2")
def _():
    L = builtin("p2")
    rules = [get_rule(f"M1.{n}") for n in (1, 2, 3)] + [
        get_rule(f"M2.{n}.{op}") for n in (1, 2, 3) for op in ("and", "or", "imp")]
    r = soundness_report("Cila", L, rules)
    return [], r.failing


# ------------------------------------------------------------ translations

@check("t1-lfi1", "t1 from CPL into LFI1: no violation (2 atoms, size 5)")
def _():
    v = conservativity_check("t1", builtin("cpl"), builtin("lfi1"), 2, 5)
    return True, v.ok


@check("t1-p1", "t1 from CPL into P1: no violation (2 atoms, size 5)")
def _():
    v = conservativity_check("t1", builtin("cpl"), builtin("p1"), 2, 5)
    return True, v.ok


@check("t1e-lfi1", "t1e from eCPL into LFI1: no violation (2 atoms, size 5)")
def _():
    v = conservativity_check("t1e", builtin("ecpl"), builtin("lfi1"), 2, 5)
    return True, v.ok


@check("t1-negation", "t1 sends ~p to ~p & o p")
def _():
    return "~p & o p", render(apply_translation("t1", parse("~p")))


@check("t2-variants", "t2 variants from CPL into LFI1 (2 atoms, size 4)")
def _():
    got = {n: conservativity_check(n, builtin("cpl"), builtin("lfi1"), 2, 4).ok
           for n in ("t2-cons", "t2-conj")}
    return {"t2-cons": True, "t2-conj": True}, got


@check("consistent-atoms", "classical entailment equals entailment under consistent atoms (LFI1, P1)")
def _():
    return [True, True], [consistency_premises_check(builtin("cpl"), builtin(k), 2, 4).ok
                          for k in ("lfi1", "p1")]


@check("deduction-roundtrip", "100 random proofs: deduction transform re-checks and JSON round-trips")
def _():
    rng = random.Random(20240521)
    good = 0
    systems = ["Cmin", "bC", "Ci", "Cila"]
    for k in range(100):
        S = systems[k % len(systems)]
        p = random_proof(S, rng, rng.randint(3, 9))
        a = rng.choice(p.premises)
        q = deduction_transform(S, p, a)
        if (check_proof(S, p) and check_proof(S, q) and q.conclusion == Imp(a, p.conclusion)
                and proof_from_json(proof_to_json(q)) == q):
            good += 1
    return 100, good


@check("hyperclassical-all", "every table of every code is synthesised in LFI1")
def _():
    fam = _full()
    ok = 0
    for c in range(NCODES):
        for conn in ("neg", "and", "or", "imp"):
            tab = fam.tables[conn][c]
            term = define_hyperclassical(tab.tolist())
            arity = tab.ndim
            vs = [MetaVar("A"), MetaVar("B")][:arity]
            if (truth_table(builtin("lfi1"), term, vs) == tab.ravel()).all():
                ok += 1
    return 4 * NCODES, ok


@check("p1-definable", "P1's connectives are definable by double strong negation in every code")
def _():
    fam = _full()
    p1 = builtin("p1")
    ok = np.ones(NCODES, dtype=bool)
    for src in ("~A", "A & B", "A | B", "A -> B"):
        f = parse(src)
        vs = [MetaVar("A"), MetaVar("B")][: 1 if src == "~A" else 2]
        ok &= (fam.evaluate(apply_translation("p1embed", f), vs)
               == truth_table(p1, f, vs)[None, :]).all(axis=1)
    return NCODES, int(ok.sum())


@check("p1embed-sample", "P1 embeds conservatively into 64 random codes (2 atoms, size 4)")
def _():
    rng = random.Random(3078)
    codes = rng.sample(range(NCODES), 64)
    p1 = builtin("p1")
    return 64, sum(conservativity_check("p1embed", p1, build_logic(c), 2, 4).ok for c in codes)
