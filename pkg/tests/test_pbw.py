from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orw.pbw import (
    EnvElement,
    ParseError,
    build_omega,
    element_equal,
    env_mul,
    normal_form,
    parse_element,
    verify_omega2_identity,
    verify_omega3_combination,
)
from orw.superalg import HalfInt, catalog_build, gen
from orw.weightmod import module_build, symbolic_act

VIR = catalog_build("vir")
ORW = catalog_build("orw", {"lambda": "-1/2", "epsilon": "1/2"})
NS = catalog_build("ns")
H = Fraction(1, 2)


def E(A, text):
    return parse_element(text, A)


class TestProducts:
    def test_concatenation(self):
        assert env_mul(ORW, E(ORW, "G[1/2]"), E(ORW, "L[1]")) == E(ORW, "1 * G[1/2] L[1]")

    def test_bilinear(self):
        assert E(VIR, "L[1] + L[2]") * E(VIR, "L[0]") == E(VIR, "L[1] L[0] + L[2] L[0]")

    def test_scalars(self):
        x = EnvElement.generator(ORW, gen("G", H), 2)
        y = EnvElement.generator(ORW, gen("G", 3 * H), 3)
        assert x * y == E(ORW, "6 * G[1/2] G[3/2]")


class TestNormalForm:
    def test_one_step(self):
        assert normal_form(VIR, E(VIR, "L[1] L[0]")) == E(VIR, "L[0] L[1] + -1 * L[1]")

    def test_odd_letters_anticommute(self):
        assert normal_form(ORW, E(ORW, "G[3/2] G[1/2]")) == E(ORW, "-1 * G[1/2] G[3/2]")

    def test_odd_square_vanishes(self):
        assert normal_form(ORW, E(ORW, "G[1/2] G[1/2]")).is_zero()

    def test_odd_square_is_half_bracket(self):
        # [G_r, G_r] = 2 L_{2r} + central term in NS
        got = normal_form(NS, E(NS, "G[1/2] G[1/2]"))
        assert got == E(NS, "L[1]")
        got = normal_form(NS, E(NS, "G[-1/2] G[-1/2]"))
        assert got == E(NS, "L[-1]")

    def test_words_sorted(self):
        e = E(ORW, "G[5/2] L[-1] G[1/2] L[3] G[-3/2]")
        for word, _ in normal_form(ORW, e).terms.items():
            keys = [ORW.order_key(g) for g in word]
            assert keys == sorted(keys)

    @pytest.mark.parametrize(
        "lhs, rhs, equal",
        [
            ("L[1] L[0]", "L[0] L[1] + -1 * L[1]", True),
            ("G[1/2] G[3/2]", "-1 * G[3/2] G[1/2]", True),
            ("L[0]", "L[1]", False),
        ],
    )
    def test_element_equal(self, lhs, rhs, equal):
        assert element_equal(ORW, E(ORW, lhs), E(ORW, rhs)) is equal


class TestOmega:
    def test_ll_m1(self):
        assert build_omega(VIR, "LL", 0, 0, 1) == E(VIR, "L[0] L[0] + -1 * L[-1] L[1]")

    def test_gg_m1(self):
        om = build_omega(ORW, "GG", Fraction(5, 2), H, 1)
        assert om == E(ORW, "G[5/2] G[1/2] + -1 * G[3/2] G[3/2]")
        assert normal_form(ORW, om) == E(ORW, "-1 * G[1/2] G[5/2]")

    @pytest.mark.parametrize("m, r, s, t", [(1, "3/2", 0, "1/2"), (2, "5/2", 1, "3/2"), (0, "1/2", 0, "1/2")])
    def test_omega2(self, m, r, s, t):
        assert verify_omega2_identity(ORW, m, r, s, t).passed

    @pytest.mark.parametrize("lam", ["0", "1", "-1", "2/3"])
    def test_omega2_other_lambda(self, lam):
        A = catalog_build("orw", {"lambda": lam, "epsilon": "1/2"})
        for m, r2, s, t2 in product(range(3), (-3, 1, 5), (-1, 0, 2), (-1, 3)):
            assert verify_omega2_identity(A, m, HalfInt(r2), s, HalfInt(t2)).passed

    @pytest.mark.parametrize("m, r, u, s1, s2", [(1, "3/2", "1/2", 0, 1), (2, "5/2", "3/2", 0, 2), (0, "-1/2", "7/2", 3, -2)])
    def test_omega3(self, m, r, u, s1, s2):
        assert verify_omega3_combination(ORW, m, r, u, s1, s2).passed

    def test_omega2_needs_integral_s(self):
        with pytest.raises(ValueError):
            verify_omega2_identity(ORW, 1, "1/2", "1/2", "1/2")


class TestParser:
    def test_single_term(self):
        e = E(ORW, "1 * G[3/2] L[2]")
        assert e.terms == {(gen("G", 3 * H), gen("L", 2)): 1}

    def test_two_terms(self):
        e = E(ORW, "-1/2 * L[0] + L[1]")
        assert e.terms == {(gen("L", 0),): -H, (gen("L", 1),): 1}

    def test_bad_index(self):
        with pytest.raises(ValueError, match="not in Z nor Z\\+1/2"):
            E(ORW, "G[1/3]")

    def test_unknown_family(self):
        with pytest.raises(ValueError):
            E(ORW, "X[1]")

    def test_lattice_violation(self):
        with pytest.raises(ValueError):
            E(ORW, "G[1]")

    def test_syntax_error_offset(self):
        with pytest.raises(ParseError) as exc:
            E(ORW, "L[1] +* L[2]")
        assert exc.value.offset == 6


# ---------------------------------------------------------------------------
# Property checks against a module action oracle
# ---------------------------------------------------------------------------

ORW_LETTERS = [g for g in ORW.generators((-4, 4)) if not ORW.is_central(g)]
VIR_LETTERS = [g for g in VIR.generators((-4, 4)) if not VIR.is_central(g)]


def elements(A, letters):
    word = st.lists(st.sampled_from(letters), min_size=1, max_size=4).map(tuple)
    coef = st.fractions(min_value=-3, max_value=3, max_denominator=4)
    return st.dictionaries(word, coef, max_size=3).map(lambda d: EnvElement(A, d))


HALFS = module_build("HalfS", ORW, {"a": "sym", "b": "sym"})
AAB = module_build("Aab", VIR, {"a": "sym", "b": "sym"})


@settings(max_examples=40, deadline=None)
@given(elements(ORW, ORW_LETTERS), elements(ORW, ORW_LETTERS), st.fractions(-3, 3, max_denominator=5))
def test_nf_idempotent_and_linear(x, y, c):
    nx, ny = normal_form(ORW, x), normal_form(ORW, y)
    assert normal_form(ORW, nx) == nx
    assert normal_form(ORW, x + y.scale(c)) == nx + ny.scale(c)


@settings(max_examples=40, deadline=None)
@given(elements(ORW, ORW_LETTERS))
def test_nf_preserves_action_on_halfs(x):
    nx = normal_form(ORW, x)
    for sector in ("x", "y"):
        assert symbolic_act(HALFS, x, sector) == symbolic_act(HALFS, nx, sector)


@settings(max_examples=40, deadline=None)
@given(elements(VIR, VIR_LETTERS))
def test_nf_preserves_action_on_aab(x):
    assert symbolic_act(AAB, x, "v") == symbolic_act(AAB, normal_form(VIR, x), "v")


@settings(max_examples=40, deadline=None)
@given(elements(ORW, ORW_LETTERS))
def test_print_parse_round_trip(x):
    nx = normal_form(ORW, x)
    assert parse_element(str(nx), ORW) == nx
    assert normal_form(ORW, parse_element(str(x), ORW)) == nx
