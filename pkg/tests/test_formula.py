import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import formulas, schemas
from lfikit.formula import (
    And, Atom, Bottom, Cons, ConsPower, DotNeg, Iff, Imp, Incons, MetaVar,
    MissingBindingError, Neg, Or, ParseError, Power, StrongNeg, AbbreviationError,
    AbbreviationPolicy, BOTTOM_ATOM, atoms, expand_abbreviations, instantiate,
    is_primitive, match_schema, metavars, parse, render, size,
)

p, q, r = Atom("p"), Atom("q"), Atom("r")
A, B = MetaVar("A"), MetaVar("B")


class TestParse:
    def test_atom(self):
        assert parse("p") == p

    def test_negated_contradiction(self):
        assert parse("~(p & ~p)") == Neg(And(p, Neg(p)))

    def test_consistency_binds_tighter_than_implication(self):
        assert parse("o p -> (p -> q)") == Imp(Cons(p), Imp(p, q))

    def test_implication_right_assoc(self):
        assert parse("p -> q -> r") == Imp(p, Imp(q, r))

    def test_and_or_left_assoc(self):
        assert parse("p & q & r") == And(And(p, q), r)
        assert parse("p | q | r") == Or(Or(p, q), r)

    def test_precedence_ladder(self):
        assert parse("~p & q | r -> p") == Imp(Or(And(Neg(p), q), r), p)

    def test_iff_is_loosest(self):
        assert parse("p -> q <-> q") == Iff(Imp(p, q), q)

    def test_sugar_nodes(self):
        assert parse("-A") == StrongNeg(A)
        assert parse("=>A") == DotNeg(A)
        assert parse("_|_") == Bottom()
        assert parse("p^3") == Power(p, 3)
        assert parse("p^(2)") == ConsPower(p, 2)
        assert parse("*p") == Incons(p)

    @pytest.mark.parametrize("text", ["oA", "o(p)", "o p", "o o p", "o~p"])
    def test_o_spellings(self, text):
        f = parse(text)
        assert isinstance(f, Cons)

    def test_atom_named_like_o_prefix(self):
        # "or" and "op" are atoms, not o applied to r / p
        assert parse("or") == Atom("or")
        assert parse("op & p") == And(Atom("op"), p)

    @pytest.mark.parametrize("text,offset", [("p &", 3), ("(p", 2), ("p q", 2), ("", 0), ("p # q", 2)])
    def test_error_offset(self, text, offset):
        with pytest.raises(ParseError) as e:
            parse(text)
        assert e.value.offset == offset
        assert e.value.expected


class TestRender:
    def test_examples(self):
        assert render(p) == "p"
        assert render(Neg(And(p, Neg(p)))) == "~(p & ~p)"
        assert render(Imp(p, Imp(q, p))) == "p -> q -> p"

    def test_left_nested_implication_keeps_parens(self):
        assert render(Imp(Imp(p, q), p)) == "(p -> q) -> p"

    def test_cons_spacing(self):
        assert render(Cons(p)) == "o p"
        assert render(Cons(Neg(p))) == "o~p"
        assert parse(render(Cons(Cons(p)))) == Cons(Cons(p))

    @settings(max_examples=300)
    @given(formulas())
    def test_roundtrip(self, f):
        assert parse(render(f)) == f

    @given(schemas())
    def test_roundtrip_schemas(self, s):
        assert parse(render(s)) == s

    @given(formulas(max_leaves=6))
    def test_minimal_parentheses(self, f):
        # dropping any single pair of parentheses changes the parse or breaks it
        text = render(f)
        opens = [i for i, c in enumerate(text) if c == "("]
        for i in opens:
            depth, j = 0, i
            for j in range(i, len(text)):
                depth += {"(": 1, ")": -1}.get(text[j], 0)
                if depth == 0:
                    break
            stripped = text[:i] + text[i + 1:j] + text[j + 1:]
            try:
                assert parse(stripped) != f
            except ParseError:
                pass


class TestSubstitution:
    def test_min1_instance(self):
        assert instantiate(parse("A -> (B -> A)"), {"A": p, "B": q}) == parse("p -> (q -> p)")

    def test_min10_instance(self):
        assert instantiate(parse("A | ~A"), {"A": And(p, q)}) == parse("(p & q) | ~(p & q)")

    def test_bottom_schema_instance(self):
        assert instantiate(parse("o A & (A & ~A)"), {"A": p}) == parse("o p & (p & ~p)")

    def test_missing_binding_names_variable(self):
        with pytest.raises(MissingBindingError) as e:
            instantiate(parse("A -> B"), {"A": p})
        assert e.value.name == "B"

    def test_match_examples(self):
        assert match_schema(parse("A -> (B -> A)"), parse("p -> (q -> p)")) == {"A": p, "B": q}
        assert match_schema(parse("A -> (B -> A)"), parse("p -> (q -> r)")) is None
        assert match_schema(parse("~~A -> A"), parse("~~(p | q) -> (p | q)")) == {"A": Or(p, q)}

    @given(schemas(), st.lists(formulas(max_leaves=4), min_size=2, max_size=2))
    def test_match_inverts_instantiate(self, s, images):
        sigma = {"A": images[0], "B": images[1]}
        f = instantiate(s, sigma)
        got = match_schema(s, f)
        assert got is not None
        assert instantiate(s, got) == f
        assert all(got[k] == sigma[k] for k in metavars(s))

    @given(schemas(max_leaves=5), schemas(max_leaves=4), schemas(max_leaves=4), formulas(max_leaves=3))
    def test_composition(self, s, a, b, x):
        # instantiate(instantiate(s, sigma), tau) == instantiate(s, tau . sigma)
        sigma = {"A": a, "B": b}
        tau = {"A": x, "B": Neg(x)}
        lhs = instantiate(instantiate(s, sigma), tau)
        rhs = instantiate(s, {k: instantiate(v, tau) for k, v in sigma.items()})
        assert lhs == rhs


class TestAbbreviations:
    def test_cumulative_power_one(self):
        assert expand_abbreviations(parse("p^(1)")) == Cons(p)

    def test_cumulative_power_two(self):
        assert expand_abbreviations(parse("p^(2)")) == And(Cons(p), Cons(Cons(p)))

    @pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
    def test_cumulative_recursion(self, n):
        lhs = expand_abbreviations(ConsPower(p, n + 1))
        assert lhs == And(expand_abbreviations(ConsPower(p, n)), expand_abbreviations(Power(p, n + 1)))

    def test_strong_negation_in_bc(self):
        assert expand_abbreviations(parse("-p"), "bC") == And(Neg(p), Cons(p))

    def test_iff(self):
        assert expand_abbreviations(parse("p <-> q")) == And(Imp(p, q), Imp(q, p))

    def test_dot_negation_and_bottom(self):
        b = Atom(BOTTOM_ATOM)
        bot = And(Cons(b), And(b, Neg(b)))
        assert expand_abbreviations(parse("=>p")) == Imp(p, bot)
        assert expand_abbreviations(parse("_|_")) == bot

    def test_dc_unfolding(self):
        pol = AbbreviationPolicy(dc=True)
        assert expand_abbreviations(parse("o p"), pol) == Neg(And(p, Neg(p)))
        assert expand_abbreviations(parse("*p"), pol) == And(p, Neg(p))

    def test_cn_system_unfolds_consistency(self):
        assert expand_abbreviations(parse("o p"), "C2") == And(Cons(p), Cons(Cons(p)))
        assert expand_abbreviations(parse("o p"), "C1") == Cons(p)

    def test_unknown_abbreviation_for_system(self):
        with pytest.raises(AbbreviationError):
            expand_abbreviations(parse("-p"), "CPL")

    @given(formulas())
    def test_expansion_is_primitive(self, f):
        assert is_primitive(expand_abbreviations(f))


@given(formulas())
def test_size_counts_nodes(f):
    assert size(f) >= len(atoms(f))
