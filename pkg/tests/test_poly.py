"""Exact polynomial core: frozen examples plus algebraic property tests."""

from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from birwalk.errors import NonExactDivision
from birwalk.poly import (
    ONE,
    HomPoly,
    X,
    Y,
    Z,
    certainly_coprime,
    div_exact,
    format_poly,
    is_squarefree,
    jacobian_det,
    monomial,
    multiplicity_at,
    parse_poly,
    poly_gcd,
    triple_gcd,
    _gcd_dict,
)


# -- strategies ---------------------------------------------------------


@st.composite
def hom_polys(draw, max_degree=4, max_terms=5, nonzero=False):
    d = draw(st.integers(min_value=0, max_value=max_degree))
    n = draw(st.integers(min_value=1 if nonzero else 0, max_value=max_terms))
    terms = {}
    for _ in range(n):
        i = draw(st.integers(min_value=0, max_value=d))
        j = draw(st.integers(min_value=0, max_value=d - i))
        c = draw(st.integers(min_value=-5, max_value=5))
        terms[(i, j, d - i - j)] = terms.get((i, j, d - i - j), 0) + c
    p = HomPoly(terms, d)
    if nonzero and p.is_zero:
        p = p + monomial(d, 0, 0)
    return p


exact_points = st.tuples(
    st.integers(min_value=-4, max_value=4),
    st.integers(min_value=-4, max_value=4),
    st.integers(min_value=-4, max_value=4),
).filter(lambda t: any(c != 0 for c in t))


# -- construction and representation ------------------------------------


def test_mixed_degree_rejected():
    with pytest.raises(ValueError):
        HomPoly({(1, 0, 0): 1, (2, 0, 0): 1})


def test_zero_terms_dropped_and_merged():
    p = HomPoly([((1, 0, 0), 2), ((1, 0, 0), -2), ((0, 1, 0), 3)])
    assert p.as_dict() == {(0, 1, 0): 3}


def test_fraction_with_unit_denominator_becomes_int():
    p = HomPoly({(1, 0, 0): Fraction(4, 2)})
    assert p.as_dict() == {(1, 0, 0): 2}
    assert type(p.terms[0][1]) is int


def test_grlex_leading_term():
    p = parse_poly("y^2 + x*z + x*y")
    assert p.leading() == ((1, 1, 0), 1)


def test_format_examples():
    assert format_poly(HomPoly({})) == "0"
    assert format_poly(X * X - 2 * X * Y + Z * Z) == "x^2 - 2*x*y + z^2"
    assert format_poly(monomial(0, 1, 1, Fraction(-3, 2))) == "-3/2*y*z"


@given(hom_polys())
def test_parse_format_round_trip(p):
    assert parse_poly(format_poly(p)) == p


def test_parse_rejects_garbage():
    for bad in ["", "x + w", "x^", "2**x"]:
        with pytest.raises(ValueError):
            parse_poly(bad)


# -- arithmetic ---------------------------------------------------------


def test_sigma_style_products():
    yz, xz, xy = Y * Z, X * Z, X * Y
    assert yz * xz == parse_poly("x*y*z^2")
    assert yz * xz * xy == parse_poly("x^2*y^2*z^2")


def test_power_and_scale():
    p = (X + Y) ** 2
    assert p == parse_poly("x^2 + 2*x*y + y^2")
    assert p.scale(Fraction(1, 2)) == parse_poly("1/2*x^2 + x*y + 1/2*y^2")


def test_add_degree_mismatch_rejected():
    with pytest.raises(ValueError):
        (X + Y) + (X * X)


@given(hom_polys(), hom_polys())
def test_mul_matches_schoolbook(a, b):
    ref = {}
    for ea, ca in a.terms:
        for eb, cb in b.terms:
            e = (ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2])
            ref[e] = ref.get(e, 0) + ca * cb
    assert (a * b).as_dict() == {e: c for e, c in ref.items() if c != 0}


@given(hom_polys(nonzero=True), exact_points)
def test_eval_homogeneity(p, pt):
    lam = 3
    scaled = tuple(lam * c for c in pt)
    assert p.eval(scaled) == lam ** p.degree * p.eval(pt)


@given(hom_polys(nonzero=True))
def test_euler_identity(p):
    d = p.degree
    lhs = X * p.derivative(0) + Y * p.derivative(1) + Z * p.derivative(2)
    assert lhs == p.scale(d)


# -- division -----------------------------------------------------------


def test_div_exact_example():
    num = (X + Y) * (X - Y)
    assert div_exact(num, X + Y) == X - Y


def test_div_exact_rejects_inexact():
    with pytest.raises(NonExactDivision):
        div_exact(X * X + Y * Y, X + Y)


@given(hom_polys(nonzero=True), hom_polys(nonzero=True))
def test_div_undoes_mul(a, b):
    assert div_exact(a * b, b) == a


# -- gcd ----------------------------------------------------------------


def test_gcd_frozen_examples():
    assert poly_gcd(parse_poly("x^2*y"), parse_poly("x*y^2")) == X * Y
    assert poly_gcd(X + Y, X - Y) == ONE
    s = X + Y + Z
    assert poly_gcd(s * s, s * (X - Z)) == s
    assert poly_gcd(HomPoly({}), s) == s
    # sigma composed with itself: componentwise products share x*y*z
    comps = (parse_poly("x^2*y*z"), parse_poly("x*y^2*z"), parse_poly("x*y*z^2"))
    assert triple_gcd(*comps) == X * Y * Z


def test_gcd_with_fraction_coefficients():
    a = (X + Y).scale(Fraction(1, 2)) * (X + Z)
    b = (X + Y).scale(3) * (Y + Z)
    assert poly_gcd(a, b) == X + Y


@given(hom_polys(nonzero=True, max_degree=3, max_terms=3),
       hom_polys(nonzero=True, max_degree=3, max_terms=3),
       hom_polys(nonzero=True, max_degree=2, max_terms=3))
@settings(max_examples=40, deadline=None)
def test_gcd_multiplicative_on_planted_factor(a, b, g):
    res = poly_gcd(a * g, b * g)
    assert res == g.monic() * poly_gcd(a, b)
    div_exact(a * g, res)
    div_exact(b * g, res)


@given(hom_polys(nonzero=True, max_degree=4, max_terms=4),
       hom_polys(nonzero=True, max_degree=4, max_terms=4))
@settings(max_examples=60, deadline=None)
def test_fast_certificate_is_sound(a, b):
    if certainly_coprime(a, b):
        slow = HomPoly(_gcd_dict(a.as_dict(), b.as_dict()))
        assert slow.degree == 0


def test_gcd_of_zero_pair_is_zero():
    assert poly_gcd(HomPoly({}), HomPoly({})).is_zero


# -- jacobian and squarefreeness ----------------------------------------


def test_jacobian_of_quadratic_involution():
    jac = jacobian_det(Y * Z, X * Z, X * Y)
    assert jac == parse_poly("2*x*y*z")


def test_jacobian_of_linear_map_is_constant():
    jac = jacobian_det(X + Y, Y + Z, Z)
    assert jac == ONE


def test_squarefree_frozen_examples():
    assert is_squarefree(parse_poly("2*x*y*z"))
    assert is_squarefree(X * X + Y * Y)
    assert not is_squarefree(parse_poly("x^2*y"))
    assert not is_squarefree(parse_poly("2*z^3"))
    assert is_squarefree(X + Y + Z)


@given(hom_polys(nonzero=True, max_degree=2, max_terms=3))
@settings(max_examples=40, deadline=None)
def test_square_never_squarefree(p):
    if p.degree >= 1:
        assert not is_squarefree(p * p)


# -- multiplicity -------------------------------------------------------


def _multiplicity_by_translation(p, pt):
    """Independent oracle: expand p(pt + local offsets) and take the minimal
    total degree in the offset variables of the non-chart coordinates."""
    chart = next(v for v in (0, 1, 2) if pt[v] != 0)
    others = [v for v in (0, 1, 2) if v != chart]
    acc = {}
    for e, c in p.terms:
        base = Fraction(c) * Fraction(pt[chart]) ** e[chart]
        u, w = others
        for a in range(e[u] + 1):
            for b in range(e[w] + 1):
                coeff = (base * comb(e[u], a) * Fraction(pt[u]) ** (e[u] - a)
                         * comb(e[w], b) * Fraction(pt[w]) ** (e[w] - b))
                acc[(a, b)] = acc.get((a, b), 0) + coeff
    live = [a + b for (a, b), c in acc.items() if c != 0]
    return min(live)


def test_multiplicity_frozen_examples():
    assert multiplicity_at(Y * Z, (1, 0, 0)) == 2
    assert multiplicity_at(Y * Z, (1, 1, 0)) == 1
    cusp = parse_poly("y^2*z - x^3")
    assert multiplicity_at(cusp, (0, 0, 1)) == 2
    assert multiplicity_at(cusp, (1, 1, 1)) == 1
    assert multiplicity_at(cusp, (1, 2, 1)) == 0
    conic = X * X + Y * Y - Z * Z
    assert multiplicity_at(conic, (3, 4, 5)) == 1


@given(hom_polys(nonzero=True, max_degree=3), exact_points)
def test_multiplicity_matches_translation_oracle(p, pt):
    assert multiplicity_at(p, pt) == _multiplicity_by_translation(p, pt)


@given(hom_polys(nonzero=True, max_degree=2, max_terms=3),
       hom_polys(nonzero=True, max_degree=2, max_terms=3),
       exact_points)
@settings(max_examples=60, deadline=None)
def test_multiplicity_additive_under_product(a, b, pt):
    assert multiplicity_at(a * b, pt) == multiplicity_at(a, pt) + multiplicity_at(b, pt)


def test_multiplicity_rejects_zero_inputs():
    with pytest.raises(ValueError):
        multiplicity_at(HomPoly({}), (1, 0, 0))
    with pytest.raises(ValueError):
        multiplicity_at(X, (0, 0, 0))
