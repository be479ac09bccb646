from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from nslab.series import (
    INF,
    DiagonalError,
    Series,
    Window,
    WindowError,
    compose,
    compositional_inverse,
    divide_by_diag,
    power,
    residue,
    series_invert,
)

X = sp.Symbol("x")
small = st.integers(-3, 3)
coeff_lists = st.lists(small, min_size=1, max_size=5)


def to_sympy(s: Series):
    return sum(sp.Rational(c.numerator, c.denominator) * X ** e[0] for e, c in s.items())


def sympy_coeffs(expr, lo, hi):
    ser = sp.series(expr, X, 0, hi).removeO()
    poly = sp.expand(ser)
    return {d: Fraction(int(poly.coeff(X, d).p), int(poly.coeff(X, d).q)) for d in range(lo, hi)
            if poly.coeff(X, d) != 0}


def unit_series(coeffs, hi=INF):
    c = {k: v for k, v in enumerate(coeffs) if v}
    c[0] = c.get(0) or 1
    return Series.univariate(c, lo=0, hi=hi)


def test_window_certification_of_products():
    a = Series.univariate({0: 1, 1: 2}, hi=4)
    b = Series.univariate({-1: 1}, lo=-1, hi=2)
    prod = a * b
    assert prod.window.lo == (-1,)
    # a is known below x^4 and b below x^2: the product is exact below x^(min(4 - 1, 2 + 0)) = x^2
    assert prod.window.hi == (2,)
    assert prod.coefficient((0,)) == 2


def test_uncertified_coefficient_raises():
    a = Series.univariate({0: 1}, hi=3)
    with pytest.raises(WindowError):
        a.coefficient((5,))


@given(coeff_lists, st.integers(3, 8))
def test_invert_matches_sympy(coeffs, hi):
    s = unit_series(coeffs)
    inv = series_invert(s, hi)
    expected = sympy_coeffs(1 / to_sympy(s), 0, hi)
    assert {e[0]: c for e, c in inv.items()} == expected


@given(coeff_lists, coeff_lists)
def test_product_matches_sympy(a, b):
    sa, sb = unit_series(a), unit_series(b)
    prod = sa * sb
    assert to_sympy(prod) == sp.expand(to_sympy(sa) * to_sympy(sb))


def test_laurent_inverse_and_residue():
    s = Series.univariate({-2: 1, 1: 1}, lo=-2)
    inv = series_invert(s, 6)
    assert inv.window.lo == (2,)
    assert {e[0]: c for e, c in inv.items()} == {2: 1, 5: -1}
    assert residue(Series.univariate({-1: Fraction(3, 4), 2: 1}, lo=-1)) == Fraction(3, 4)


@given(st.lists(small, min_size=1, max_size=4), st.integers(4, 8))
def test_compositional_inverse_roundtrip(tail, order):
    phi = Series.univariate({1: 1, **{k + 2: v for k, v in enumerate(tail) if v}}, lo=0)
    psi = compositional_inverse(phi, order)
    back = compose(phi, psi, hi=order + 1)
    assert {e[0]: c for e, c in back.items()} == {1: Fraction(1)}


def test_compose_with_pole_matches_sympy():
    f = Series.univariate({-2: 1, 1: 1}, lo=-2)
    phi = Series.univariate({1: 1, 2: 3}, lo=0)
    out = compose(f, phi, hi=5)
    expr = (X + 3 * X**2) ** -2 + (X + 3 * X**2)
    expected = sympy_coeffs(sp.expand(expr * X**2), 0, 7)
    assert {e[0]: c for e, c in out.items()} == {d - 2: c for d, c in expected.items() if d - 2 < 5}


def test_power_and_derivative():
    s = Series.univariate({0: 1, 1: 1})
    assert {e[0]: c for e, c in power(s, 3).items()} == {0: 1, 1: 3, 2: 3, 3: 1}
    assert {e[0]: c for e, c in s.derivative().items()} == {0: 1}


def test_divide_by_diag_exact_and_pole():
    xy = ("x", "y")
    h = Series.polynomial(xy, {(2, 0): 1, (0, 2): -1})  # x^2 - y^2
    q = divide_by_diag(h)
    assert dict(q.items()) == {(1, 0): 1, (0, 1): 1}
    with pytest.raises(DiagonalError):
        divide_by_diag(Series.polynomial(xy, {(1, 0): 1}))


@given(st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), small, max_size=6))
def test_divide_by_diag_inverts_multiplication(coeffs):
    xy = ("x", "y")
    f = Series.polynomial(xy, coeffs)
    h = f * Series.polynomial(xy, {(1, 0): 1, (0, 1): -1})
    assert (divide_by_diag(h) - f).is_zero()


def test_truncated_division_window_is_honest():
    xy = ("x", "y")
    f = Series(xy, {(0, 0): 1, (1, 1): 2}, Window((0, 0), (5, 5), 6))
    h = f * Series.polynomial(xy, {(1, 0): 1, (0, 1): -1})
    q = divide_by_diag(h)
    assert (q - f).is_zero()
    assert q.window.total <= 6
