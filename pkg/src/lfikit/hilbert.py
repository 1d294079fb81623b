"""Hilbert systems as data: rules, proof checking, the deduction transform,
matrix soundness reports and bounded checks of meta-rules.

Every axiom is an axiomatic rule; axioms are rules with no premises.  A
rule with premises ``P1, ..., Pk / C`` also carries its implicational
axiom form ``P1 -> (... -> (Pk -> C))``, registered in every system under
the name ``<rule>-ax`` so that the deduction transform can stay inside the
same system.

System names are compositional.  ``Ci`` may be followed by suffix letters
(``l d b t`` for cl/cd/cb/cg, ``a o v r`` for the propagation families,
``w e j`` for cw/ce/cj), and any name may be edited with ``+rule`` and
``-rule``: ``"Cib+cg"``, ``"bbC+bc5"``, ``"PI+RA0"``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .formula import (
    AbbreviationPolicy, And, Atom, Cons, Formula, Iff, Imp, Incons, MetaVar, Neg,
    Or, Schema, conjoin, expand_abbreviations, instantiate, map_leaves,
    match_schema, metavars, neg_power, parse, render, subformulas,
)
from .matrices import (
    MatrixLogic, bounded_terms, find_countermodel, rule_sound,
)

__all__ = [
    "AxiomaticRule", "HilbertSystem", "Step", "Proof", "CheckResult",
    "ProofError", "DeductionError", "RULES", "get_rule", "get_system",
    "system_names", "check_proof", "deduction_transform", "soundness_report",
    "SoundnessReport", "RuleVerdict", "metarule_sound_bounded",
    "MetaruleVerdict", "METARULES", "proof_from_json", "proof_to_json",
    "load_proof", "rule_instance_proof", "random_proof",
]


# ---------------------------------------------------------------- rules

@dataclass(frozen=True)
class AxiomaticRule:
    name: str
    premises: tuple[Schema, ...]
    conclusion: Schema

    @property
    def is_axiom(self) -> bool:
        return not self.premises

    @property
    def arity(self) -> int:
        return len(self.premises)

    def axiom_form(self) -> Schema:
        out = self.conclusion
        for p in reversed(self.premises):
            out = Imp(p, out)
        return out

    def metavars(self) -> frozenset[str]:
        names: set[str] = set(metavars(self.conclusion))
        for p in self.premises:
            names |= metavars(p)
        return frozenset(names)

    def __str__(self) -> str:
        prem = ", ".join(render(p) for p in self.premises)
        return f"({self.name}) {prem} / {render(self.conclusion)}" if prem else \
            f"({self.name}) {render(self.conclusion)}"


def _r(name: str, premises: Sequence[str], conclusion: str) -> AxiomaticRule:
    return AxiomaticRule(name, tuple(parse(p) for p in premises), parse(conclusion))


def _ax(name: str, conclusion: str) -> AxiomaticRule:
    return _r(name, (), conclusion)


_BASE_RULES = [
    _ax("Min1", "A -> (B -> A)"),
    _ax("Min2", "(A -> B) -> ((A -> (B -> C)) -> (A -> C))"),
    _ax("Min3", "A -> (B -> A & B)"),
    _ax("Min4", "A & B -> A"),
    _ax("Min5", "A & B -> B"),
    _ax("Min6", "A -> A | B"),
    _ax("Min7", "B -> A | B"),
    _ax("Min8", "(A -> C) -> ((B -> C) -> (A | B -> C))"),
    _ax("Min9", "A | (A -> B)"),
    _ax("Min10", "A | ~A"),
    _ax("Min11", "~~A -> A"),
    _r("MP", ["A", "A -> B"], "B"),
    _ax("tPS", "A -> (~A -> B)"),
    _ax("ext", "o A"),
    _r("bc1", ["o A", "A", "~A"], "B"),
    _r("bc0", ["o A", "A", "~A"], "~B"),
    _r("RA0", ["o B", "A -> B", "A -> ~B"], "~A"),
    _r("RA1", ["o B", "~A -> B", "~A -> ~B"], "A"),
    _r("bc2", ["~*A"], "o A"),
    _r("bc3", ["~o A"], "*A"),
    _r("bc4", ["*A"], "~o A"),
    _r("bc5", ["o A"], "~*A"),
    _r("ci", ["*A"], "A & ~A"),
    _r("cl", ["~(A & ~A)"], "o A"),
    _r("cd", ["~(~A & A)"], "o A"),
    _r("cb", ["~(A & ~A) | ~(~A & A)"], "o A"),
    _r("cg", ["B <-> A & ~A"], "~B <-> ~(A & ~A)"),
    _r("ce", ["A"], "~~A"),
    _r("ca1", ["o A & o B"], "o (A & B)"),
    _r("ca2", ["o A & o B"], "o (A | B)"),
    _r("ca3", ["o A & o B"], "o (A -> B)"),
    _r("co1", ["o A | o B"], "o (A & B)"),
    _r("co2", ["o A | o B"], "o (A | B)"),
    _r("co3", ["o A | o B"], "o (A -> B)"),
    _r("cr1", ["o (A & B)"], "o A | o B"),
    _r("cr2", ["o (A | B)"], "o A & o B"),
    _r("cr3", ["o (A -> B)"], "o A | o B"),
    _ax("cv1", "o (A & B)"),
    _ax("cv2", "o (A | B)"),
    _ax("cv3", "o (A -> B)"),
    _ax("cw", "o ~A"),
    _r("cj1", ["*(A & B)"], "*A & B | *B & A"),
    _r("cj2", ["*(A | B)"], "*A & ~B | *B & ~A"),
    _r("cj3", ["*(A -> B)"], "A & *B"),
    _r("cj1c", ["*A & B | *B & A"], "*(A & B)"),
    _r("cj2c", ["*A & ~B | *B & ~A"], "*(A | B)"),
    _r("cj3c", ["A & *B"], "*(A -> B)"),
    _r("bun", ["A -> o B & (B & ~B)"], "~A"),
]

RULES: dict[str, AxiomaticRule] = {r.name: r for r in _BASE_RULES}

_A, _B, _C = MetaVar("A"), MetaVar("B"), MetaVar("C")
_BIN = {"and": And, "or": Or, "imp": Imp}


def _mortensen_m1(n: int) -> AxiomaticRule:
    return AxiomaticRule(f"M1.{n}", (neg_power(_A, n - 1),), neg_power(_A, n + 1))


def _mortensen_m2(n: int, op: str) -> AxiomaticRule:
    hyp = conjoin([Iff(neg_power(_A, i - 1), neg_power(_B, i - 1)) for i in range(1, n + 1)])
    k = _BIN[op]
    right = [Iff(neg_power(k(_A, _C), i), neg_power(k(_B, _C), i)) for i in range(1, n + 1)]
    left = [Iff(neg_power(k(_C, _A), i), neg_power(k(_C, _B), i)) for i in range(1, n + 1)]
    return AxiomaticRule(f"M2.{n}.{op}", (hyp,), And(conjoin(right), conjoin(left)))


_M_RE = re.compile(r"^M([12])\.(\d+)(?:\.(and|or|imp))?$")


def get_rule(name: str) -> AxiomaticRule:
    """Look up a named rule; ``M1.<n>`` and ``M2.<n>.<op>`` are generated."""
    if name in RULES:
        return RULES[name]
    for k, r in RULES.items():
        if k.lower() == name.lower():
            return r
    m = _M_RE.match(name)
    if m and int(m.group(2)) >= 1:
        n = int(m.group(2))
        if m.group(1) == "1" and m.group(3) is None:
            return _mortensen_m1(n)
        if m.group(1) == "2" and m.group(3) is not None:
            return _mortensen_m2(n, m.group(3))
    raise KeyError(f"unknown rule {name!r}")


# -------------------------------------------------------------- systems

@dataclass(frozen=True)
class HilbertSystem:
    """A named list of rules plus how defined connectives unfold.

    ``dc_flag`` marks dC-systems, where ``cons_def`` (a schema in ``A``)
    defines consistency from the other connectives.  ``incons_def``, when
    present, is an equivalent of ``*A`` provable in the system; soundness
    checks use these definitions when a matrix has no table for the
    connective.
    """

    name: str
    rules: tuple[AxiomaticRule, ...]
    policy: AbbreviationPolicy = field(default_factory=AbbreviationPolicy)
    dc_flag: bool = False
    cons_def: Schema | None = None
    incons_def: Schema | None = None
    axiom_forms: bool = True

    def __post_init__(self) -> None:
        names = [r.name for r in self.rules]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate rule names in {self.name}: {', '.join(dup)}")
        if "MP" not in names:
            raise ValueError(f"{self.name} has no MP")

    @property
    def rule_names(self) -> list[str]:
        return [r.name for r in self.rules]

    def lookup(self, name: str) -> AxiomaticRule:
        for r in self.rules:
            if r.name == name:
                return r
        if self.axiom_forms and name.endswith("-ax"):
            base = name[:-3]
            for r in self.rules:
                if r.name == base and r.premises and r.name != "MP":
                    return AxiomaticRule(name, (), r.axiom_form())
        raise KeyError(f"unknown rule {name}")

    def has(self, name: str) -> bool:
        try:
            self.lookup(name)
        except KeyError:
            return False
        return True

    def expand(self, f: Formula) -> Formula:
        return expand_abbreviations(f, self.policy, strict=False)

    def __str__(self) -> str:
        return self.name


def _names(*groups: Iterable[str]) -> list[str]:
    out: list[str] = []
    for g in groups:
        out.extend(g)
    return out


_MIN = [f"Min{i}" for i in range(1, 12)]
_CMIN = _MIN + ["MP"]
_BC = _CMIN + ["bc1"]
_BBC = _BC + ["bc2", "bc3"]
_BBBC = _BBC + ["bc4", "bc5"]
_CI = _BBBC + ["ci"]

_SUFFIX = {
    "l": ["cl"], "d": ["cd"], "b": ["cb"], "t": ["cg"],
    "a": ["ca1", "ca2", "ca3"], "o": ["co1", "co2", "co3"],
    "v": ["cv1", "cv2", "cv3"], "r": ["cr1", "cr2", "cr3"],
    "w": ["cw"], "e": ["ce"],
    "j": ["cj1", "cj2", "cj3", "cj1c", "cj2c", "cj3c"],
}
_CONS_DEF = {
    "l": "~(A & ~A)",
    "d": "~(~A & A)",
    "b": "~(A & ~A) | ~(~A & A)",
}
_NOCONS = AbbreviationPolicy(consistency=False)
_CI_INCONS = parse("~o A")
_DC_INCONS = parse("A & ~A")

# name -> (rules, consistency language?, incons definition)
_FIXED: dict[str, tuple[list[str], bool, Schema | None]] = {
    "PI": (_MIN[:10] + ["MP"], False, None),
    "Cmin": (_CMIN, False, None),
    "Comega": ([r for r in _CMIN if r != "Min9"], False, None),
    "CPL": (_CMIN + ["tPS"], False, None),
    "eCPL": (_CMIN + ["tPS", "ext"], True, _CI_INCONS),
    "bC": (_BC, True, None),
    "bbC": (_BBC, True, None),
    "bbbC": (_BBBC, True, None),
}
_ALIASES = {"cω": "Comega", "cw_": "Comega", "c_min": "Cmin", "c_omega": "Comega"}

_CN_RE = re.compile(r"^C(\d+)$")
_MORT_RE = re.compile(r"^C(\d+)/(\d+)$")
_CI_RE = re.compile(r"^Ci([ldbtaovrwej]*)$")


def _ci_family(suffix: str) -> HilbertSystem:
    rules = list(_CI)
    cons_def = None
    for ch in suffix:
        for r in _SUFFIX[ch]:
            if r not in rules:
                rules.append(r)
        if ch in _CONS_DEF and cons_def is None:
            cons_def = parse(_CONS_DEF[ch])
    dc = cons_def is not None
    return HilbertSystem(
        "Ci" + suffix, tuple(RULES[r] for r in rules), AbbreviationPolicy(),
        dc_flag=dc, cons_def=cons_def, incons_def=_DC_INCONS if dc else _CI_INCONS)


def _base_system(name: str) -> HilbertSystem:
    key = _ALIASES.get(name.lower(), name)
    for fixed, (rules, lang, incons) in _FIXED.items():
        if fixed.lower() == key.lower():
            return HilbertSystem(fixed, tuple(RULES[r] for r in rules),
                                 AbbreviationPolicy() if lang else _NOCONS,
                                 incons_def=incons)
    m = _MORT_RE.match(key)
    if m:
        n, d = int(m.group(1)), int(m.group(2))
        if n < 1 or d != n + 1:
            raise KeyError(f"unknown system {name!r}")
        base = _ci_family("la")
        extra = (_mortensen_m1(n),) + tuple(_mortensen_m2(n, op) for op in _BIN)
        return HilbertSystem(key, base.rules + extra, base.policy, True,
                             base.cons_def, base.incons_def)
    m = _CN_RE.match(key)
    if m and int(m.group(1)) >= 1:
        n = int(m.group(1))
        base = _ci_family("la")
        return HilbertSystem(key, base.rules, AbbreviationPolicy(cn=n), True,
                             base.cons_def, base.incons_def)
    if key.lower() == "b1":
        base = _ci_family("l")
        kept = tuple(r for r in base.rules if r.name not in ("Min9", "Min10", "Min11"))
        return HilbertSystem("B1", kept + (RULES["bun"],), base.policy, True,
                             base.cons_def, base.incons_def)
    m = _CI_RE.match(key) or _CI_RE.match("Ci" + key[2:].lower() if key[:2].lower() == "ci" else "")
    if m:
        return _ci_family(m.group(1))
    raise KeyError(f"unknown system {name!r}")


@lru_cache(maxsize=256)
def get_system(name: str) -> HilbertSystem:
    """Resolve a system name such as ``"Cije"``, ``"C2"``, ``"C1/2"`` or ``"bC+bc2"``."""
    parts = re.split(r"(?=[+-])", name.strip())
    parts = [p for p in parts if p]
    if not parts or parts[0][0] in "+-":
        raise KeyError(f"unknown system {name!r}")
    sys_ = _base_system(parts[0])
    rules = list(sys_.rules)
    for edit in parts[1:]:
        op, rname = edit[0], edit[1:].strip()
        rule = get_rule(rname)
        if op == "+":
            if all(r.name != rule.name for r in rules):
                rules.append(rule)
        else:
            if rule.name == "MP":
                raise KeyError("MP cannot be removed")
            rules = [r for r in rules if r.name != rule.name]
    if len(parts) == 1:
        return sys_
    return HilbertSystem(name.strip(), tuple(rules), sys_.policy, sys_.dc_flag,
                         sys_.cons_def, sys_.incons_def, sys_.axiom_forms)


def system_names() -> list[str]:
    """Representative built-in names (the grammar accepts many more)."""
    ci = ["Ci", "Cil", "Cid", "Cib", "Cie", "Cile", "Cia", "Cila", "Cio", "Cilo",
          "Cior", "Cibor", "Civ", "Civw", "Cive", "Cibv", "Cibvw", "Cibve",
          "Ciorw", "Ciborw", "Ciore", "Cij", "Cije", "Cibaw"]
    return list(_FIXED) + ci + ["C1", "C2", "C3", "C1/2", "C2/3", "B1"]


# ---------------------------------------------------------------- proofs

@dataclass(frozen=True)
class Step:
    """One proof line.  ``rule=None`` marks a premise; ``cited`` is 1-based."""

    formula: Formula
    rule: str | None = None
    subst: Mapping[str, Formula] = field(default_factory=dict)
    cited: tuple[int, ...] = ()

    @property
    def is_premise(self) -> bool:
        return self.rule is None


@dataclass(frozen=True)
class Proof:
    premises: tuple[Formula, ...]
    steps: tuple[Step, ...]

    @property
    def conclusion(self) -> Formula | None:
        return self.steps[-1].formula if self.steps else None

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class CheckResult:
    ok: bool
    step: int | None = None
    error: str | None = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        return "ok" if self.ok else f"error at step {self.step}: {self.error}"


class ProofError(ValueError):
    pass


class DeductionError(ValueError):
    pass


_FROZEN = "\x00"


def _freeze(f: Formula) -> Formula:
    """Object-level metavariables become reserved atoms while matching."""
    return map_leaves(f, lambda x: Atom(_FROZEN + x.name) if isinstance(x, MetaVar) else x)


def _thaw(f: Formula) -> Formula:
    return map_leaves(f, lambda x: MetaVar(x.name[1:])
                      if isinstance(x, Atom) and x.name.startswith(_FROZEN) else x)


def _check_step(S: HilbertSystem, premises: set[Formula], done: list[Formula],
                k: int, st: Step) -> str | None:
    f = _freeze(S.expand(st.formula))
    if st.rule is None:
        return None if f in premises else "not a listed premise"
    try:
        rule = S.lookup(st.rule)
    except KeyError:
        return f"unknown rule {st.rule}"
    if len(st.cited) != rule.arity:
        return f"wrong rule arity: {st.rule} takes {rule.arity} premise(s), {len(st.cited)} cited"
    for c in st.cited:
        if not 1 <= c <= len(done):
            return f"forward citation of step {c}" if c >= k else f"bad citation {c}"
    sigma: dict[str, Formula] = {}
    for name, g in st.subst.items():
        if name not in rule.metavars():
            return f"bad substitution: {name} is not a metavariable of {st.rule}"
        sigma[name] = _freeze(S.expand(g))
    targets = [(S.expand(p), done[c - 1]) for p, c in zip(rule.premises, st.cited)]
    targets.append((S.expand(rule.conclusion), f))
    for schema, got in targets:
        part = match_schema(instantiate_partial(schema, sigma), got)
        if part is None:
            return f"bad substitution: {render(_thaw(got))} is not an instance of {render(schema)}"
        sigma.update(part)
    return None


def instantiate_partial(s: Schema, sigma: Mapping[str, Formula]) -> Schema:
    """Replace only the bound metavariables, leaving the others in place."""
    return map_leaves(s, lambda leaf: sigma.get(leaf.name, leaf) if isinstance(leaf, MetaVar) else leaf)


def check_proof(S: HilbertSystem | str, p: Proof) -> CheckResult:
    """Check every step; report the first failing step (1-based)."""
    if isinstance(S, str):
        S = get_system(S)
    premises = {_freeze(S.expand(g)) for g in p.premises}
    done: list[Formula] = []
    for k, st in enumerate(p.steps, start=1):
        err = _check_step(S, premises, done, k, st)
        if err is not None:
            return CheckResult(False, k, err)
        done.append(_freeze(S.expand(st.formula)))
    return CheckResult(True)


# ----------------------------------------------------- deduction transform

class _Builder:
    def __init__(self) -> None:
        self.steps: list[Step] = []
        self.index: dict[tuple, int] = {}

    def add(self, f: Formula, rule: str | None, subst: Mapping[str, Formula] | None = None,
            cited: tuple[int, ...] = ()) -> int:
        key = (f, rule, cited, tuple(sorted((subst or {}).items(), key=lambda kv: kv[0])))
        hit = self.index.get(key)
        if hit is not None:
            return hit
        self.steps.append(Step(f, rule, dict(subst or {}), cited))
        self.index[key] = len(self.steps)
        return len(self.steps)

    def mp(self, i: int, j: int) -> int:
        """From step i (X) and step j (X -> Y) derive Y."""
        x, xy = self.steps[i - 1].formula, self.steps[j - 1].formula
        assert isinstance(xy, Imp) and xy.left == x
        return self.add(xy.right, "MP", {"A": x, "B": xy.right}, (i, j))

    def weaken(self, i: int, a: Formula) -> int:
        """From step i (X) derive a -> X."""
        x = self.steps[i - 1].formula
        j = self.add(Imp(x, Imp(a, x)), "Min1", {"A": x, "B": a})
        return self.mp(i, j)

    def identity(self, a: Formula) -> int:
        aa = Imp(a, a)
        s1 = self.add(Imp(a, Imp(aa, a)), "Min1", {"A": a, "B": aa})
        s2 = self.add(Imp(Imp(a, aa), Imp(Imp(a, Imp(aa, a)), aa)), "Min2",
                      {"A": a, "B": aa, "C": a})
        s3 = self.add(Imp(a, aa), "Min1", {"A": a, "B": a})
        s4 = self.mp(s3, s2)
        return self.mp(s1, s4)

    def chain(self, a: Formula, i: int, j: int) -> int:
        """From i (a -> X) and j (a -> (X -> Y)) derive a -> Y."""
        ax = self.steps[i - 1].formula
        axy = self.steps[j - 1].formula
        x, y = ax.right, axy.right.right
        k = self.add(Imp(ax, Imp(axy, Imp(a, y))), "Min2", {"A": a, "B": x, "C": y})
        return self.mp(j, self.mp(i, k))


def deduction_transform(S: HilbertSystem | str, p: Proof, discharged: Formula) -> Proof:
    """Turn a proof of B from premises including ``discharged`` into a proof
    of ``discharged -> B`` from the remaining premises."""
    if isinstance(S, str):
        S = get_system(S)
    res = check_proof(S, p)
    if not res:
        raise DeductionError(f"input proof does not check: {res}")
    for needed in ("Min1", "Min2", "MP"):
        if not S.has(needed):
            raise DeductionError(f"{S.name} lacks {needed}")
    a = S.expand(discharged)
    rest = tuple(g for g in p.premises if S.expand(g) != a)
    out = _Builder()
    img: list[int] = []  # step k of p -> index of a -> C_k in out
    for st in p.steps:
        f = S.expand(st.formula)
        if st.rule is None and f == a:
            img.append(out.identity(a))
            continue
        if st.rule is None:
            img.append(out.weaken(out.add(f, None), a))
            continue
        rule = S.lookup(st.rule)
        if rule.is_axiom:
            sigma = _solve(S, rule, st, p, f)
            img.append(out.weaken(out.add(f, rule.name, sigma), a))
            continue
        if rule.name == "MP":
            i, j = st.cited
            img.append(out.chain(a, img[i - 1], img[j - 1]))
            continue
        if not S.axiom_forms:
            raise DeductionError(f"rule {rule.name} has premises and no implicational form is registered")
        sigma = _solve(S, rule, st, p, f)
        form = S.expand(instantiate(rule.axiom_form(), sigma))
        cur = out.weaken(out.add(form, rule.name + "-ax", sigma), a)
        for c in st.cited:
            cur = out.chain(a, img[c - 1], cur)
        img.append(cur)
    if not p.steps:
        raise DeductionError("empty proof")
    steps = list(out.steps)
    if img[-1] != len(steps):  # dedup left the conclusion earlier; restate it last
        steps.append(steps[img[-1] - 1])
    return Proof(rest, tuple(steps))


def _solve(S: HilbertSystem, rule: AxiomaticRule, st: Step, p: Proof, f: Formula) -> dict[str, Formula]:
    sigma = {k: _freeze(S.expand(v)) for k, v in st.subst.items()}
    pairs = [(rule.conclusion, f)] + [
        (pr, S.expand(p.steps[c - 1].formula)) for pr, c in zip(rule.premises, st.cited)]
    for schema, got in pairs:
        part = match_schema(instantiate_partial(S.expand(schema), sigma), _freeze(got))
        assert part is not None
        sigma.update(part)
    return {k: _thaw(v) for k, v in sigma.items()}


def rule_instance_proof(S: HilbertSystem | str, rule: str, premises: Sequence[Formula],
                        subst: Mapping[str, Formula]) -> Proof:
    """A one-rule proof: the premises stated, then the rule applied to them."""
    if isinstance(S, str):
        S = get_system(S)
    r = S.lookup(rule)
    steps = [Step(g) for g in premises]
    concl = instantiate(r.conclusion, subst)
    steps.append(Step(concl, rule, dict(subst), tuple(range(1, len(premises) + 1))))
    return Proof(tuple(premises), tuple(steps))


def random_proof(S: HilbertSystem | str, rng, steps: int = 6, atoms: Sequence[str] = ("p", "q")) -> Proof:
    """A checked proof built from random rule applications.

    Axiom instances, modus ponens on available lines and rules with
    premises (whose premises are added as listed premises) are mixed;
    ``rng`` is a :class:`random.Random`.
    """
    if isinstance(S, str):
        S = get_system(S)
    pool = [Atom(a) for a in atoms]

    def small(depth: int = 1) -> Formula:
        if depth == 0 or rng.random() < 0.4:
            return rng.choice(pool)
        k = rng.randrange(4)
        if k == 0:
            return Neg(small(depth - 1))
        node = (And, Or, Imp)[k - 1]
        return node(small(depth - 1), small(depth - 1))

    axioms = [r for r in S.rules if r.is_axiom]
    with_prem = [r for r in S.rules if r.premises and r.name != "MP"]
    premises: list[Formula] = [small()]
    out: list[Step] = [Step(premises[0])]
    while len(out) < steps:
        lines = [st.formula for st in out]
        pairs = [(i, j) for j, g in enumerate(lines) if isinstance(g, Imp)
                 for i, h in enumerate(lines) if h == g.left]
        roll = rng.random()
        if pairs and roll < 0.35:
            i, j = rng.choice(pairs)
            g = lines[j]
            out.append(Step(g.right, "MP", {"A": g.left, "B": g.right}, (i + 1, j + 1)))
        elif with_prem and roll < 0.55:
            r = rng.choice(with_prem)
            sigma = {m: small() for m in sorted(r.metavars())}
            cited = []
            for pr in r.premises:
                g = instantiate(pr, sigma)
                if g not in premises:
                    premises.append(g)
                out.append(Step(g))
                cited.append(len(out))
            out.append(Step(instantiate(r.conclusion, sigma), r.name, sigma, tuple(cited)))
        elif roll < 0.7:
            g = rng.choice(premises)
            out.append(Step(g))
        else:
            r = rng.choice(axioms)
            sigma = {m: small() for m in sorted(r.metavars())}
            if r.name == "Min1" and rng.random() < 0.5:
                sigma["A"] = rng.choice(lines)  # sets up a later MP
            out.append(Step(instantiate(r.conclusion, sigma), r.name, sigma))
    return Proof(tuple(premises), tuple(out))


# ------------------------------------------------------------- JSON I/O

def proof_from_json(doc, premises: Sequence[str | Formula] | None = None) -> Proof:
    """Read the step list format; premises default to the premise steps."""
    if isinstance(doc, dict):
        premises = doc.get("premises", premises)
        doc = doc.get("steps")
    if not isinstance(doc, list):
        raise ProofError("proof must be a list of steps")
    steps: list[Step] = []
    for k, item in enumerate(doc, start=1):
        if not isinstance(item, dict) or "formula" not in item or "by" not in item:
            raise ProofError(f"step {k}: expected an object with 'formula' and 'by'")
        f = parse(item["formula"])
        by = item["by"]
        if by == "premise":
            steps.append(Step(f))
            continue
        if not isinstance(by, dict) or "rule" not in by:
            raise ProofError(f"step {k}: 'by' must be \"premise\" or a rule object")
        subst = {m: parse(t) for m, t in (by.get("subst") or {}).items()}
        cited = tuple(int(c) for c in by.get("from", []))
        steps.append(Step(f, str(by["rule"]), subst, cited))
    if premises is None:
        prem = tuple(dict.fromkeys(s.formula for s in steps if s.is_premise))
    else:
        prem = tuple(parse(g) if isinstance(g, str) else g for g in premises)
    return Proof(prem, tuple(steps))


def proof_to_json(p: Proof) -> dict:
    steps = []
    for st in p.steps:
        if st.is_premise:
            by: object = "premise"
        else:
            by = {"rule": st.rule, "subst": {k: render(v) for k, v in sorted(st.subst.items())},
                  "from": list(st.cited)}
        steps.append({"formula": render(st.formula), "by": by})
    return {"premises": [render(g) for g in p.premises], "steps": steps}


def load_proof(path: str) -> Proof:
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ProofError(f"malformed proof file: {exc}") from None
    return proof_from_json(doc)


# ------------------------------------------------------------- soundness

@dataclass(frozen=True)
class RuleVerdict:
    rule: str
    sound: bool
    countermodel: dict[str, str] | None = None

    def as_dict(self) -> dict:
        return {"rule": self.rule, "sound": self.sound, "countermodel": self.countermodel}


@dataclass(frozen=True)
class SoundnessReport:
    system: str
    logic: str
    verdicts: tuple[RuleVerdict, ...]
    fallbacks: tuple[str, ...] = ()

    @property
    def sound(self) -> bool:
        return all(v.sound for v in self.verdicts)

    @property
    def failing(self) -> list[str]:
        return [v.rule for v in self.verdicts if not v.sound]

    def verdict(self, rule: str) -> bool:
        for v in self.verdicts:
            if v.rule == rule:
                return v.sound
        raise KeyError(rule)

    def as_dict(self) -> dict:
        return {"system": self.system, "logic": self.logic, "sound": self.sound,
                "failing": self.failing, "fallbacks": list(self.fallbacks),
                "rules": [v.as_dict() for v in self.verdicts]}


def _replace(f: Formula, kind: type, definition: Schema) -> Formula:
    """Unfold every ``kind`` node by ``definition`` (a schema in A)."""
    if not f.children():
        return f
    kids = [_replace(c, kind, definition) for c in f.children()]
    if isinstance(f, kind):
        return instantiate(definition, {"A": kids[0]})
    return type(f)(*kids) if len(kids) == 2 else type(f)(kids[0])


def semantic_form(S: HilbertSystem, L: MatrixLogic, f: Formula) -> tuple[Formula, list[str]]:
    """Expand ``f`` for evaluation in ``L``, unfolding o/* when L lacks them."""
    used: list[str] = []
    g = S.expand(f)
    has_cons = any(isinstance(x, Cons) for x in subformulas(g))
    if has_cons and not L.has("cons") and S.cons_def is not None:
        g = _replace(g, Cons, S.cons_def)
        used.append(f"o := {render(S.cons_def)}")
    if any(isinstance(x, Incons) for x in subformulas(g)) and not L.has("incons") \
            and S.incons_def is not None:
        g = _replace(g, Incons, S.incons_def)
        used.append(f"* := {render(S.incons_def)}")
        if not L.has("cons") and S.cons_def is not None:
            g = _replace(g, Cons, S.cons_def)
    return g, used


def soundness_report(S: HilbertSystem | str, L: MatrixLogic,
                     rules: Iterable[AxiomaticRule] | None = None) -> SoundnessReport:
    """Check each rule of ``S`` (or the given rules) for soundness in ``L``."""
    if isinstance(S, str):
        S = get_system(S)
    verdicts = []
    fallbacks: list[str] = []
    for r in (S.rules if rules is None else rules):
        prem = []
        for p in r.premises:
            g, used = semantic_form(S, L, p)
            prem.append(g)
            fallbacks.extend(used)
        concl, used = semantic_form(S, L, r.conclusion)
        fallbacks.extend(used)
        ok = rule_sound(L, prem, concl)
        cm = None
        if not ok:
            v = find_countermodel(L, prem, concl)
            cm = {k: L.label(i) for k, i in v.items()} if v else None
        verdicts.append(RuleVerdict(r.name, ok, cm))
    return SoundnessReport(S.name, L.name, tuple(verdicts), tuple(dict.fromkeys(fallbacks)))


# ----------------------------------------------------- bounded meta-rules

METARULES = ("RC", "EC", "RO", "EO", "RG")


@dataclass(frozen=True)
class MetaruleVerdict:
    rule: str
    bound: int
    arity: int
    ok: bool
    functions: int
    violation: tuple[Schema, Schema] | None = None

    def as_dict(self) -> dict:
        return {"rule": self.rule, "bound": self.bound, "arity": self.arity,
                "no_violation": self.ok, "functions": self.functions,
                "violation": None if self.violation is None else [render(t) for t in self.violation]}


def _masks(D: np.ndarray) -> np.ndarray:
    """Pack boolean rows into integer keys (one Python int per row if wide)."""
    if D.shape[1] <= 63:
        w = (1 << np.arange(D.shape[1], dtype=np.int64))
        return D.astype(np.int64) @ w
    return np.array([int("".join("1" if b else "0" for b in row), 2) for row in D], dtype=object)


def metarule_sound_bounded(L: MatrixLogic, rule: str, size_bound: int, arity: int = 1,
                           connectives: Iterable[str] | None = None) -> MetaruleVerdict:
    """Search term functions of size at most ``size_bound`` for a violation.

    RC:  A |= B   implies ~B |= ~A        EC:  A =||= B  implies ~B |= ~A
    RO/EO: the same with o in place of ~. RG:  B =||= A & ~A implies ~B =||= ~(A & ~A)

    ``connectives`` restricts the term language (default: every table of L).
    """
    rule = rule.upper()
    if rule not in METARULES:
        raise KeyError(f"unknown meta-rule {rule!r}; one of {', '.join(METARULES)}")
    if size_bound < 1:
        raise ValueError("size_bound must be >= 1")
    clone = bounded_terms(L, arity, size_bound, connectives)
    fns = list(clone.witnesses)
    F = np.array(fns, dtype=np.int64)
    terms = [clone.witnesses[f] for f in fns]
    des = L.designated_mask
    D = des[F]
    op = L.table("cons" if rule in ("RO", "EO") else "neg")
    m = len(fns)

    if rule in ("EC", "EO"):
        key = _masks(D)
        img = _masks(des[op[F]])
        first: dict = {}
        for i in range(m):
            k = key[i].item() if hasattr(key[i], "item") else key[i]
            j = first.setdefault(k, i)
            if j != i and img[i] != img[j]:
                return MetaruleVerdict(rule, size_bound, arity, False, m, (terms[j], terms[i]))
        return MetaruleVerdict(rule, size_bound, arity, True, m)

    if rule in ("RC", "RO"):
        Dn = des[op[F]]
        pk = np.packbits(D, axis=1)
        pn = np.packbits(Dn, axis=1)
        for i in range(m):
            # f_i |= f_j  iff  D_i subset of D_j
            sub = np.all((pk[i][None, :] & ~pk) == 0, axis=1)
            # then require Dn_j subset of Dn_i
            bad = sub & ~np.all((pn & ~pn[i][None, :]) == 0, axis=1)
            if bad.any():
                j = int(np.flatnonzero(bad)[0])
                return MetaruleVerdict(rule, size_bound, arity, False, m, (terms[i], terms[j]))
        return MetaruleVerdict(rule, size_bound, arity, True, m)

    # RG: pairs (A-term f, B-term g) with D_g == D_{f & ~f}
    neg, conj = L.table("neg"), L.table("and")
    contra = conj[F, neg[F]]
    key = _masks(D)
    img = _masks(des[neg[F]])
    ckey = _masks(des[contra])
    cimg = _masks(des[neg[contra]])
    by_key: dict = {}
    for i in range(m):
        by_key.setdefault(key[i], []).append(i)
    for fi in range(m):
        for gi in by_key.get(ckey[fi], ()):
            if img[gi] != cimg[fi]:
                return MetaruleVerdict(rule, size_bound, arity, False, m, (terms[fi], terms[gi]))
    return MetaruleVerdict(rule, size_bound, arity, True, m)
