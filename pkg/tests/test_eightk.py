import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import brute_clone, brute_valid, decode, schemas
from lfikit.eightk import (
    NCODES, Family, SearchBoundExhausted, build_logic, census, code_of,
    separating_formula, signature_classes, strong_negation_table, unary_clones,
)
from lfikit.formula import MetaVar, parse
from lfikit.hilbert import soundness_report
from lfikit.matrices import is_valid, truth_table
from lfikit.registry import builtin

CODES = {"lfi1": 5168, "p1": 8191, "p2": 8190, "p3": 6071, "lfi2": 6070}
codes_st = st.integers(0, NCODES - 1)

# codes with every Cio rule sound, found by the vectorised census and
# re-checked one matrix at a time below
CIO_CODES = [6070, 6071, 6078, 6079, 6134, 6135, 6142, 6143,
             8118, 8119, 8126, 8127, 8182, 8183, 8190, 8191]


@pytest.fixture(scope="module")
def report():
    return census()


class TestCodes:
    @given(codes_st)
    def test_build_matches_independent_decoding(self, code):
        L = build_logic(code)
        tabs = decode(code)
        for conn in ("neg", "and", "or", "imp"):
            assert L.table(conn).tolist() == tabs[conn]

    @given(codes_st)
    def test_code_of_inverts_build(self, code):
        assert code_of(build_logic(code)) == code

    @pytest.mark.parametrize("key,code", CODES.items())
    def test_catalog_codes(self, key, code):
        assert code_of(builtin(key)) == code

    def test_pac_is_the_lfi1_reduct(self):
        assert code_of(builtin("pac")) == 5168

    def test_non_members(self):
        assert code_of(builtin("cpl")) is None

    @pytest.mark.parametrize("bad", [-1, NCODES, 2.0, "5"])
    def test_range(self, bad):
        with pytest.raises(ValueError):
            build_logic(bad)


class TestFamily:
    @settings(max_examples=60, deadline=None)
    @given(st.lists(codes_st, min_size=1, max_size=6), schemas(max_leaves=6))
    def test_validity_matches_single_matrices(self, cs, s):
        fam = Family(cs)
        got = fam.valid(s)
        for i, c in enumerate(cs):
            assert got[i] == brute_valid(build_logic(c), s, ["A", "B"])

    def test_rule_soundness_matches(self, rng):
        cs = rng.choice(NCODES, 40, replace=False)
        fam = Family(cs)
        prem, concl = [parse("o A"), parse("A"), parse("~A")], parse("B")
        got = fam.rule_sound(prem, concl)
        from lfikit.matrices import rule_sound
        assert got.tolist() == [rule_sound(build_logic(int(c)), prem, concl) for c in cs]

    def test_unary_clones_match_set_closure(self, rng):
        cs = rng.choice(NCODES, 25, replace=False)
        member = unary_clones(Family(cs))
        fns = list(itertools.product(range(3), repeat=3))
        for row, c in zip(member, cs):
            got = {fns[i] for i in np.flatnonzero(row)}
            L = build_logic(int(c)).restrict(["neg", "and", "or", "imp"])
            assert got == brute_clone(L, 1)


class TestCensus:
    def test_counts(self, report):
        assert report.counts == {"total": 8192, "dc": 7680, "cila_cons": 4096, "cio": 16, "cio_cila": 12}

    def test_containment(self, report):
        assert set(report.cila_cons) <= set(report.dc)
        assert set(report.cio_cila) <= set(report.cio)
        assert set(report.cio_cila) == set(report.cio) & set(report.cila_cons)

    def test_cio_codes(self, report):
        assert report.cio == CIO_CODES

    @pytest.mark.parametrize("code", CIO_CODES)
    def test_cio_codes_reverify(self, code):
        assert soundness_report("Cio", build_logic(code)).sound

    def test_cio_rejects_sample(self, rng):
        for c in rng.choice(NCODES, 30, replace=False):
            if int(c) not in CIO_CODES:
                assert not soundness_report("Cio", build_logic(int(c))).sound

    def test_cila_by_direct_evaluation(self, report, rng):
        f = parse("~(A & ~A)")
        cila = set(report.cila_cons)
        for c in rng.choice(NCODES, 200, replace=False):
            tt = tuple(truth_table(build_logic(int(c)), f, [MetaVar("A")]))
            assert (tt == (0, 2, 0)) == (int(c) in cila)

    def test_dc_by_set_closure(self, report, rng):
        dc = set(report.dc)
        for c in rng.choice(NCODES, 25, replace=False):
            L = build_logic(int(c)).restrict(["neg", "and", "or", "imp"])
            assert ((0, 2, 0) in brute_clone(L, 1)) == (int(c) in dc)

    def test_cia_sound_everywhere(self, report):
        assert report.cia_all

    def test_discrepancies_reported(self, report):
        d = report.discrepancies()
        assert set(d) == {"cio", "cio_cila"}
        assert report.as_dict(with_codes=False)["discrepancies"]["cio"] == {"got": 16, "expected": 1680}


class TestSeparation:
    def test_equal_codes(self):
        with pytest.raises(ValueError):
            separating_formula(5, 5)

    def test_p1_p2(self):
        s = separating_formula(8191, 8190)
        assert s == parse("o~A")
        assert is_valid(builtin("p1"), s) != is_valid(builtin("p2"), s)

    @settings(max_examples=25, deadline=None)
    @given(codes_st, codes_st)
    def test_separator_separates(self, a, b):
        if a == b:
            return
        s = separating_formula(a, b)
        assert is_valid(build_logic(a), s) != is_valid(build_logic(b), s)

    def test_bound_exhausted(self):
        with pytest.raises(SearchBoundExhausted):
            separating_formula(8191, 8190, bound=2)

    def test_sample_separated(self, rng):
        cs = rng.choice(NCODES, 300, replace=False)
        r = signature_classes(bound=5, codes=cs)
        assert r["all_separated"] and r["classes"] == 300


class TestStrongNegation:
    @given(codes_st)
    def test_table(self, code):
        d = strong_negation_table(code)
        assert d["table"] == {"1": "0", "1/2": "0", "0": "1"}
        assert d["cons_of_strong_neg_valid"]

    def test_witness_text(self):
        assert strong_negation_table(5168)["witness"] == "~A & o A"
