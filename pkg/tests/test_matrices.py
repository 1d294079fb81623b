import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_clone, brute_valid, formulas, schemas, slow_eval
from lfikit.formula import And, Atom, Cons, Imp, MetaVar, Neg, instantiate, parse, render
from lfikit.matrices import (
    DomainTooLargeError, MatrixError, MatrixLogic, MissingAtomError, MissingTableError,
    bounded_terms, classify_explosion, clone_functions, entails, evaluate,
    find_countermodel, is_valid, rule_sound, truth_table, verify_profile,
)
from lfikit.registry import builtin

A, B = MetaVar("A"), MetaVar("B")
THREE = ["pac", "lfi1", "p1", "p2", "p3", "lfi2"]


def P(s):
    return parse(s)


class TestMatrixLogic:
    def test_rejects_degenerate_designation(self):
        t = {"neg": [1, 0], "and": [[0, 1], [1, 1]], "or": [[0, 0], [0, 1]], "imp": [[0, 1], [0, 0]]}
        with pytest.raises(MatrixError):
            MatrixLogic("x", ("1", "0"), frozenset({0, 1}), t)
        with pytest.raises(MatrixError):
            MatrixLogic("x", ("1", "0"), frozenset(), t)

    def test_rejects_missing_required_table(self):
        with pytest.raises(MatrixError, match="missing required"):
            MatrixLogic("x", ("1", "0"), {0}, {"neg": [1, 0]})

    def test_rejects_out_of_range_entry(self):
        t = {"neg": [1, 2], "and": [[0, 1], [1, 1]], "or": [[0, 0], [0, 1]], "imp": [[0, 1], [0, 0]]}
        with pytest.raises(MatrixError):
            MatrixLogic("x", ("1", "0"), {0}, t)

    def test_label_aliases(self):
        L = builtin("pac")
        assert L.index("½") == L.index("1/2") == 1


class TestEvaluate:
    def test_pac_negation_fixes_half(self):
        L = builtin("pac")
        assert L.label(evaluate(L, P("~p"), {"p": "1/2"})) == "1/2"

    def test_lfi1_consistency_of_half(self):
        L = builtin("lfi1")
        assert L.label(evaluate(L, P("o p"), {"p": "1/2"})) == "0"

    def test_p1_negated_contradiction(self):
        L = builtin("p1")
        assert L.label(evaluate(L, P("~(p & ~p)"), {"p": "1/2"})) == "0"

    def test_missing_atom(self):
        with pytest.raises(MissingAtomError):
            evaluate(builtin("pac"), P("p & q"), {"p": "1"})

    def test_missing_table(self):
        with pytest.raises(MissingTableError):
            evaluate(builtin("pac"), P("o p"), {"p": "1"})

    @settings(max_examples=150)
    @given(st.sampled_from(THREE), formulas(cons=False, max_leaves=10),
           st.lists(st.integers(0, 2), min_size=3, max_size=3))
    def test_agrees_with_reference_evaluator(self, key, f, vals):
        L = builtin(key)
        v = dict(zip("pqr", vals))
        assert evaluate(L, f, {k: v[k] for k in "pqr"}) == slow_eval(L, f, v)

    @given(formulas(cons=False, max_leaves=8))
    def test_truth_table_is_listwise_evaluate(self, f):
        L = builtin("lfi1")
        from lfikit.formula import variables
        vs = variables(f)
        tt = truth_table(L, f, vs)
        for k, combo in enumerate(itertools.product(range(3), repeat=len(vs))):
            assert tt[k] == slow_eval(L, f, {x.name: c for x, c in zip(vs, combo)})


class TestValidity:
    def test_pac_tps_invalid(self):
        assert not is_valid(builtin("pac"), P("A -> (~A -> B)"))

    def test_p1_negated_contradiction_invalid(self):
        assert not is_valid(builtin("p1"), P("~(A & ~A)"))

    def test_lfi1_negated_contradiction_valid(self):
        assert is_valid(builtin("lfi1"), P("~(A & ~A)"))

    @settings(max_examples=150)
    @given(st.sampled_from(THREE), schemas(cons=False, max_leaves=7))
    def test_matches_brute_force(self, key, s):
        L = builtin(key)
        assert is_valid(L, s) == brute_valid(L, s, ["A", "B"])

    @settings(max_examples=80)
    @given(st.sampled_from(THREE), schemas(cons=False, max_leaves=5),
           formulas(cons=False, max_leaves=4), formulas(cons=False, max_leaves=4))
    def test_schema_validity_transfers_to_instances(self, key, s, a, b):
        L = builtin(key)
        if is_valid(L, s):
            assert is_valid(L, instantiate(s, {"A": a, "B": b}))


class TestEntailment:
    def test_pac_no_explosion(self):
        assert not entails(builtin("pac"), [P("p"), P("~p")], P("q"))

    def test_ecpl_modus_ponens(self):
        assert entails(builtin("ecpl"), [P("p"), P("p -> q")], P("q"))

    def test_lfi1_gentle_explosion(self):
        assert entails(builtin("lfi1"), [P("o p"), P("p"), P("~p")], P("q"))

    def test_countermodels(self):
        L = builtin("pac")
        v = find_countermodel(L, [P("p"), P("~p")], P("q"))
        assert {k: L.label(x) for k, x in v.items()} == {"p": "1/2", "q": "0"}
        L = builtin("lfi1")
        v = find_countermodel(L, [P("p"), P("~p")], P("o p"))
        assert {k: L.label(x) for k, x in v.items()} == {"p": "1/2"}
        assert find_countermodel(builtin("cpl"), [P("p")], P("p")) is None

    @given(st.sampled_from(THREE), st.lists(formulas(cons=False, max_leaves=4), max_size=3),
           formulas(cons=False, max_leaves=4), formulas(cons=False, max_leaves=4))
    def test_monotone(self, key, gamma, extra, a):
        L = builtin(key)
        if entails(L, gamma, a):
            assert entails(L, gamma + [extra], a)

    @given(st.sampled_from(THREE), st.lists(formulas(cons=False, max_leaves=3), max_size=2),
           st.lists(formulas(cons=False, max_leaves=3), max_size=2),
           formulas(cons=False, max_leaves=3), formulas(cons=False, max_leaves=3))
    def test_cut(self, key, delta, gamma, a, b):
        L = builtin(key)
        if entails(L, delta, a) and entails(L, gamma + [a], b):
            assert entails(L, delta + gamma, b)

    @given(st.sampled_from(THREE), st.lists(formulas(cons=False, max_leaves=4), max_size=2),
           formulas(cons=False, max_leaves=4))
    def test_countermodel_iff_not_entailed(self, key, gamma, a):
        L = builtin(key)
        v = find_countermodel(L, gamma, a)
        assert (v is None) == entails(L, gamma, a)
        if v is not None:
            des = L.designated
            assert all(evaluate(L, g, v) in des for g in gamma)
            assert evaluate(L, a, v) not in des


class TestRules:
    def test_mp_in_pac(self):
        assert rule_sound(builtin("pac"), [A, P("A -> B")], B)

    def test_bc1_in_lfi1(self):
        assert rule_sound(builtin("lfi1"), [P("o A"), A, P("~A")], B)

    def test_bc3_fails_in_its_countermodel(self):
        assert not rule_sound(builtin("thm3.23"), [P("~o A")], P("*A"))


class TestClones:
    def test_pac_clone_fixes_half(self):
        L = builtin("pac")
        assert all(f[1] == 1 for f in clone_functions(L, 1).functions())
        assert all(f[4] == 1 for f in clone_functions(L, 2).functions())

    def test_classical_negation_clone(self):
        assert clone_functions(builtin("cpl"), 1, ["neg"]).functions() == {(0, 1), (1, 0)}

    def test_lfi1_clone_contains_strong_negation(self):
        assert (2, 2, 0) in clone_functions(builtin("lfi1"), 1)

    @pytest.mark.parametrize("key,arity", [(k, 1) for k in THREE + ["cpl", "thm3.25a"]]
                             + [("cpl", 2), ("p1", 2)])
    def test_matches_set_closure(self, key, arity):
        L = builtin(key)
        assert clone_functions(L, arity).functions() == brute_clone(L, arity)

    @pytest.mark.parametrize("key", ["lfi1", "p1", "pac"])
    def test_witnesses_evaluate_to_their_functions(self, key):
        L = builtin(key)
        for arity, vs in ((1, [A]), (2, [A, B])):
            for fn, term in clone_functions(L, arity).items():
                assert tuple(truth_table(L, term, vs)) == fn

    def test_fixpoint(self):
        L = builtin("p2")
        fs = clone_functions(L, 1).functions()
        for f in fs:
            assert tuple(L.tables["neg"][x] for x in f) in fs
            for g in fs:
                assert tuple(L.tables["imp"][f[i]][g[i]] for i in range(3)) in fs

    def test_domain_too_large(self):
        with pytest.raises(DomainTooLargeError):
            clone_functions(builtin("thm3.53urbas"), 1)

    def test_bounded_terms_urbas(self):
        L = builtin("thm3.53urbas")
        bt = bounded_terms(L, 1, 3)
        assert not bt.exact
        for s in ("~A", "~~A"):
            assert truth_table(L, P(s), [A]) in bt

    def test_bounded_terms_size_one(self):
        assert bounded_terms(builtin("cpl"), 1, 1).functions() == {(0, 1)}

    def test_bounded_terms_reach_clone(self):
        L = builtin("p1")
        assert bounded_terms(L, 1, 5).functions() == clone_functions(L, 1).functions()


class TestExplosion:
    def test_pac(self):
        prof = classify_explosion(builtin("pac"))
        assert prof.paraconsistent and not prof.explosive
        assert not prof.has_bottom and not prof.has_strong_negation and not prof.gently_explosive

    def test_lfi1(self):
        prof = classify_explosion(builtin("lfi1"))
        assert prof.paraconsistent
        assert render(prof.bottom_witness) == "o A & (A & ~A)"
        assert render(prof.strong_negation_witness) == "~A & o A"
        assert render(prof.gentle_witness) == "o A"

    def test_classical(self):
        prof = classify_explosion(builtin("cpl"))
        assert prof.explosive and not prof.paraconsistent and prof.has_bottom

    @pytest.mark.parametrize("key", THREE + ["ecpl", "cpl", "thm3.3", "thm3.25a", "fact3.50"])
    def test_witnesses_reverify(self, key):
        L = builtin(key)
        assert verify_profile(L, classify_explosion(L))

    def test_large_matrix_needs_bound(self):
        with pytest.raises(DomainTooLargeError):
            classify_explosion(builtin("thm3.53urbas"))
        prof = classify_explosion(builtin("thm3.53urbas"), bound=3)
        assert prof.pps_bound == 3 and not prof.clone_exact

    @pytest.mark.parametrize("key", THREE)
    def test_partial_explosion_only_tops(self, key):
        # in a paraconsistent finite matrix no non-top sigma(C) follows from A, ~A
        assert not classify_explosion(builtin(key)).partially_explosive_bounded
