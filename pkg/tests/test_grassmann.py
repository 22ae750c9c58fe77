from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orw.grassmann import (
    ExtElement,
    certificate_json,
    degree_threshold,
    expand_certificate,
    ext_inject,
    ext_monomial,
    ideal_build,
    member,
    omega_gg_ext,
    verify_lemma33,
)
from orw.pbw import build_omega, parse_element
from orw.superalg import catalog_build

ORW = catalog_build("orw", {"lambda": "-1/2", "epsilon": "1/2"})
H = Fraction(1, 2)


def rank(rows: list[dict]) -> int:
    """Plain Gaussian elimination over Fractions."""
    rows = [dict(r) for r in rows if r]
    r = 0
    cols = sorted({c for row in rows for c in row})
    for col in cols:
        pivot = next((i for i in range(r, len(rows)) if rows[i].get(col)), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i].get(col):
                f = rows[i][col] / p[col]
                for k, v in p.items():
                    rows[i][k] = rows[i].get(k, 0) - f * v
                rows[i] = {k: v for k, v in rows[i].items() if v}
        r += 1
    return r


def spanning_set(window2, m, degree):
    """Every monomial times every relation, restricted to one degree."""
    idx = [d for d in range(window2[0], window2[1] + 1) if d % 2]
    rels = []
    for r2 in idx:
        for s2 in idx:
            g = omega_gg_ext(r2, s2, m)
            if g and all(lo in idx for mono in g.terms for lo in mono):
                rels.append(g)
    rows = []
    for left in combinations(idx, degree - 2):
        for g in rels:
            prod = ExtElement({left: 1}).wedge(g)
            if prod:
                rows.append(dict(prod.terms))
    return rows


class TestInjection:
    def test_transposition(self):
        assert ext_inject(parse_element("G[3/2] G[1/2]", ORW)) == ext_monomial(H, 3 * H).scale(-1)

    def test_square(self):
        assert ext_inject(parse_element("G[1/2] G[1/2]", ORW)).is_zero()

    def test_omega_image(self):
        om = build_omega(ORW, "GG", Fraction(5, 2), H, 1)
        assert ext_inject(om) == ext_monomial(H, Fraction(5, 2)).scale(-1)
        assert omega_gg_ext(5, 1, 1) == ext_inject(om)


class TestMembership:
    def test_lemma_base_case(self):
        ideal = ideal_build((-1, 7), 1, 3)
        res = member(ext_monomial(H, 3 * H, 5 * H), ideal)
        assert res.is_member
        assert expand_certificate(res.certificate) == ext_monomial(H, 3 * H, 5 * H)

    def test_unit_is_not_member(self):
        ideal = ideal_build((-1, 7), 1, 3)
        res = member(ExtElement({(): 1}), ideal)
        assert not res.is_member
        assert res.certificate == []

    def test_degree_two_at_m1_is_member(self):
        # the m=1 relation with r = s+1 is already -2 G_s ^ G_{s+1}; gaps follow by induction
        ideal = ideal_build((1, 5), 1, 2)
        res = member(ext_monomial(H, 5 * H), ideal)
        assert res.is_member
        assert certificate_json(res.certificate) == [
            {"coefficient": "-1", "left": [], "relation": {"r": "3/2", "s": "3/2", "m": 1}, "right": []}
        ]

    def test_degree_two_at_m2_has_non_members(self):
        assert degree_threshold((-9, 9), 2, 3) == {2: 17, 3: 0}

    def test_cap_enforced(self):
        ideal = ideal_build((1, 7), 1, 2)
        with pytest.raises(ValueError, match="cap"):
            member(ext_monomial(H, 3 * H, 5 * H), ideal)

    @pytest.mark.parametrize("m, degree", [(1, 2), (1, 3), (2, 2), (2, 3), (0, 2)])
    def test_rank_matches_oracle(self, m, degree):
        window2 = (-5, 7)
        ideal = ideal_build(window2, m, degree)
        assert ideal.rank(degree) == rank(spanning_set(window2, m, degree))


@settings(max_examples=30, deadline=None)
@given(
    st.integers(0, 2),
    st.dictionaries(
        st.lists(st.sampled_from([-3, -1, 1, 3, 5, 7]), min_size=3, max_size=3, unique=True).map(lambda l: tuple(sorted(l))),
        st.fractions(-3, 3, max_denominator=4),
        max_size=4,
    ),
)
def test_membership_matches_rank_oracle(m, terms):
    window2 = (-3, 7)
    x = ExtElement(terms)
    ideal = ideal_build(window2, m, 3)
    res = member(x, ideal)
    rows = spanning_set(window2, m, 3)
    oracle = rank(rows + [dict(x.terms)]) == rank(rows)
    assert res.is_member == oracle
    if res.is_member:
        assert expand_certificate(res.certificate) == x


@pytest.mark.parametrize("m, k, s", [(1, 1, "1/2"), (1, 3, "1/2"), (2, 2, "-3/2"), (0, 4, "5/2")])
def test_lemma33_instances(m, k, s):
    rep = verify_lemma33(m, k, s, with_certificates=True)
    assert rep.passed, rep.failures
    for entry in rep.info["certificates"]:
        assert entry["certificate"]


def test_lemma33_rejects_integer_s():
    with pytest.raises(ValueError):
        verify_lemma33(1, 1, 1)


def test_wedge_is_graded_commutative():
    x, y = ext_monomial(H), ext_monomial(3 * H)
    assert x.wedge(y) == y.wedge(x).scale(-1)
    assert x.wedge(x).is_zero()
