import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lfikit.formula import Imp, MetaVar, Neg, parse
from lfikit.hilbert import (
    DeductionError, Proof, ProofError, RULES, Step, check_proof, deduction_transform,
    get_rule, get_system, load_proof, metarule_sound_bounded, proof_from_json,
    proof_to_json, random_proof, rule_instance_proof, soundness_report, system_names,
)
from lfikit.matrices import truth_table
from lfikit.registry import CATALOG, builtin

P = parse
p, q = P("p"), P("q")


def mp_proof():
    return Proof((p, P("p -> q")), (Step(p), Step(P("p -> q")), Step(q, "MP", {"A": p, "B": q}, (1, 2))))


class TestSystems:
    def test_cmin(self):
        assert get_system("Cmin").rule_names == [f"Min{i}" for i in range(1, 12)] + ["MP"]

    def test_subsystems(self):
        cmin = set(get_system("Cmin").rule_names)
        assert set(get_system("PI").rule_names) == cmin - {"Min11"}
        assert set(get_system("Comega").rule_names) == cmin - {"Min9"}
        assert set(get_system("CPL").rule_names) == cmin | {"tPS"}
        assert set(get_system("bC").rule_names) == cmin | {"bc1"}

    def test_ci_family(self):
        ci = set(get_system("Ci").rule_names)
        assert ci == set(get_system("bbbC").rule_names) | {"ci"}
        assert set(get_system("Cila").rule_names) == ci | {"cl", "ca1", "ca2", "ca3"}
        assert set(get_system("Cije").rule_names) == ci | {"cj1", "cj2", "cj3", "cj1c", "cj2c", "cj3c", "ce"}
        assert get_system("Cil").dc_flag and not get_system("Ci").dc_flag

    def test_mortensen_system(self):
        names = get_system("C1/2").rule_names
        assert {"M1.1", "M2.1.and", "M2.1.or", "M2.1.imp"} <= set(names)

    def test_bunder(self):
        names = set(get_system("B1").rule_names)
        assert "bun" in names and not names & {"Min9", "Min10", "Min11"}

    def test_edits(self):
        S = get_system("bC+bc2-bc1")
        assert "bc2" in S.rule_names and "bc1" not in S.rule_names
        with pytest.raises(KeyError):
            get_system("bC-MP")

    @pytest.mark.parametrize("name", system_names())
    def test_names_resolve_and_are_unique(self, name):
        S = get_system(name)
        assert len(set(S.rule_names)) == len(S.rule_names)
        assert "MP" in S.rule_names

    def test_unknown(self):
        with pytest.raises(KeyError):
            get_system("Cq")
        with pytest.raises(KeyError):
            get_rule("zz")

    def test_mortensen_rules(self):
        assert get_rule("M1.1").premises == (MetaVar("A"),)
        assert get_rule("M1.2").conclusion == Neg(Neg(Neg(MetaVar("A"))))

    def test_axiom_forms(self):
        assert get_rule("bc1").axiom_form() == P("o A -> (A -> (~A -> B))")
        assert get_system("bC").lookup("bc1-ax").is_axiom


class TestCheckProof:
    def test_mp(self):
        assert check_proof("Cmin", mp_proof())

    def test_bc1(self):
        prem = (P("o p"), p, P("~p"))
        pr = Proof(prem, tuple(Step(g) for g in prem) + (Step(q, "bc1", {"A": p, "B": q}, (1, 2, 3)),))
        assert check_proof("bC", pr)
        r = check_proof("Cmin", pr)
        assert not r and r.step == 4 and r.error == "unknown rule bc1"

    def test_forward_citation(self):
        pr = Proof((p, P("p -> q")), (Step(q, "MP", {}, (2, 3)), Step(p), Step(P("p -> q"))))
        r = check_proof("Cmin", pr)
        assert r.step == 1 and "forward citation" in r.error

    def test_wrong_arity(self):
        pr = Proof((p,), (Step(p), Step(q, "MP", {}, (1,))))
        assert "wrong rule arity" in check_proof("Cmin", pr).error

    def test_bad_substitution(self):
        pr = Proof((), (Step(P("p -> (q -> p)"), "Min1", {"A": q}),))
        assert "bad substitution" in check_proof("Cmin", pr).error

    def test_unlisted_premise(self):
        assert check_proof("Cmin", Proof((), (Step(p),))).error == "not a listed premise"

    def test_axiom_instance_without_substitution(self):
        assert check_proof("Cmin", Proof((), (Step(P("p -> (q -> p)"), "Min1"),)))

    def test_abbreviations_unfold(self):
        # strong negation is sugar for ~A & oA in bC
        assert check_proof("bC", Proof((), (Step(P("-p -> p | -p"), "Min7", {"A": P("p"), "B": P("-p")}),)))


class TestDeduction:
    def test_identity(self):
        A = P("A")
        q2 = deduction_transform("Cmin", Proof((A,), (Step(A),)), A)
        assert len(q2) == 5 and q2.conclusion == P("A -> A") and q2.premises == ()
        assert check_proof("Cmin", q2)

    def test_premise_case(self):
        A, AB = P("A"), P("A -> B")
        pr = Proof((A, AB), (Step(A), Step(AB), Step(P("B"), "MP", {}, (1, 2))))
        out = deduction_transform("Cmin", pr, A)
        assert out.premises == (AB,) and out.conclusion == P("A -> B")
        assert check_proof("Cmin", out)

    def test_double_mp(self):
        ppq = P("p -> (p -> q)")
        pr = Proof((p, ppq), (Step(p), Step(ppq), Step(P("p -> q"), "MP", {}, (1, 2)),
                              Step(q, "MP", {}, (1, 3))))
        out = deduction_transform("Cmin", pr, p)
        assert out.premises == (ppq,) and out.conclusion == P("p -> q")
        assert check_proof("Cmin", out)

    def test_rule_with_premises_uses_axiom_form(self):
        pr = rule_instance_proof("bC", "bc1", [P("o p"), p, P("~p")], {"A": p, "B": q})
        out = deduction_transform("bC", pr, p)
        assert check_proof("bC", out)
        assert out.conclusion == P("p -> q")

    def test_needs_min1(self):
        S = get_system("Cmin-Min1")
        with pytest.raises(DeductionError):
            deduction_transform(S, Proof((p,), (Step(p),)), p)

    def test_broken_input(self):
        with pytest.raises(DeductionError):
            deduction_transform("Cmin", Proof((), (Step(p),)), p)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**9), st.sampled_from(["Cmin", "bC", "Ci", "Cila", "Cije"]), st.integers(2, 10))
    def test_random_roundtrip(self, seed, system, n):
        rng = random.Random(seed)
        pr = random_proof(system, rng, n)
        assert check_proof(system, pr)
        a = rng.choice(pr.premises)
        out = deduction_transform(system, pr, a)
        assert check_proof(system, out)
        assert out.conclusion == Imp(a, pr.conclusion)
        assert a not in out.premises
        assert proof_from_json(json.loads(json.dumps(proof_to_json(out)))) == out


class TestJson:
    def test_roundtrip_file(self, tmp_path):
        path = tmp_path / "p.json"
        path.write_text(json.dumps(proof_to_json(mp_proof())))
        assert load_proof(str(path)) == mp_proof()

    def test_step_list_only(self):
        doc = proof_to_json(mp_proof())["steps"]
        got = proof_from_json(doc)
        assert got.premises == (p, P("p -> q")) and check_proof("Cmin", got)

    @pytest.mark.parametrize("doc", [{"steps": 3}, [{"formula": "p"}], [{"formula": "p", "by": 3}]])
    def test_malformed(self, doc):
        with pytest.raises(ProofError):
            proof_from_json(doc)

    def test_malformed_file(self, tmp_path):
        (tmp_path / "x.json").write_text("{")
        with pytest.raises(ProofError):
            load_proof(str(tmp_path / "x.json"))


class TestSoundness:
    def test_pac_cmin(self):
        assert soundness_report("Cmin", builtin("pac")).sound

    def test_min9_countermodel(self):
        r = soundness_report("Cmin", builtin("thm3.3"))
        assert r.failing == ["Min9"]
        v = [x for x in r.verdicts if x.rule == "Min9"][0]
        assert v.countermodel is not None

    def test_lfi1_cije(self):
        assert soundness_report("Cije", builtin("lfi1")).sound

    def test_report_dict(self):
        d = soundness_report("bC", builtin("p1")).as_dict()
        assert d["sound"] and len(d["rules"]) == 13

    def test_dc_fallback_for_missing_incons(self):
        r = soundness_report("Ci", builtin("p1"))
        assert r.sound and r.fallbacks


class TestMetarules:
    def test_urbas_eo(self):
        assert metarule_sound_bounded(builtin("thm3.53urbas"), "EO", 5).ok

    def test_lfi1_rc_violation_reverifies(self):
        L = builtin("lfi1")
        v = metarule_sound_bounded(L, "RC", 4)
        assert not v.ok
        f, g = v.violation
        A = MetaVar("A")
        d = L.designated_mask
        tf, tg = d[truth_table(L, f, [A])], d[truth_table(L, g, [A])]
        tnf, tng = d[truth_table(L, Neg(f), [A])], d[truth_table(L, Neg(g), [A])]
        assert (tf <= tg).all() and not (tng <= tnf).all()

    def test_urbas_ec_violation_reverifies(self):
        L = builtin("thm3.53urbas")
        v = metarule_sound_bounded(L, "EC", 5)
        assert not v.ok
        f, g = v.violation
        d = L.designated_mask
        A = MetaVar("A")
        assert (d[truth_table(L, f, [A])] == d[truth_table(L, g, [A])]).all()
        assert (d[truth_table(L, Neg(f), [A])] & ~d[truth_table(L, Neg(g), [A])]).any()

    def test_classical_is_clean(self):
        L = builtin("cpl")
        for rule in ("RC", "EC", "RG"):
            assert metarule_sound_bounded(L, rule, 4).ok

    def test_arity_two(self):
        assert metarule_sound_bounded(builtin("cpl"), "EC", 3, arity=2).ok

    def test_bad_arguments(self):
        with pytest.raises(KeyError):
            metarule_sound_bounded(builtin("cpl"), "XX", 3)
        with pytest.raises(ValueError):
            metarule_sound_bounded(builtin("cpl"), "EC", 0)

    def test_as_dict(self):
        d = metarule_sound_bounded(builtin("lfi1"), "RC", 4).as_dict()
        assert d["no_violation"] is False and len(d["violation"]) == 2


def test_rules_with_premises_have_axiom_forms():
    for r in RULES.values():
        if r.premises and r.name != "MP":
            assert r.axiom_form() is not None, r.name


def test_mp_sound_everywhere():
    mp = [get_rule("MP")]
    for k in CATALOG:
        assert soundness_report("Cmin", builtin(k), mp).sound
