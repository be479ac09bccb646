from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nslab.lie import TensorSeries, get_lie
from nslab.manin import (
    AlphaData,
    LnElement,
    build_truncated_model,
    complementarity_rank,
    form_B,
    functional_t,
    invariance_check,
    residue_identity_table,
    solve_normalizing_transform,
)
from nslab.series import Series, compose

CONFIGS = [(0, 0), (1, 0), (2, 0), (2, 1), (3, 0), (3, -2), (4, 1)]


@st.composite
def elements(draw, n):
    lie = get_lie("sl2")
    terms = {}
    for _ in range(draw(st.integers(1, 3))):
        i = draw(st.integers(0, 2))
        d = draw(st.integers(-3, 3))
        terms.setdefault((i,), {})[(d,)] = Fraction(draw(st.integers(-3, 3)))
    laurent = TensorSeries(lie, 1, ("x",), terms, Series.univariate({}, lo=-3).window)
    quot = {}
    if n:
        for i in range(3):
            quot[i] = [Fraction(draw(st.integers(-2, 2))) for _ in range(n)]
    return LnElement(lie, n, laurent, quot)


@pytest.mark.parametrize("n,a0", CONFIGS)
@given(data=st.data())
def test_form_symmetric_and_invariant(n, a0, data):
    lie = get_lie("sl2")
    alpha = AlphaData.standard(n, a0)
    u, v, w = (data.draw(elements(n)) for _ in range(3))
    assert form_B(alpha, lie, u, v) == form_B(alpha, lie, v, u)
    assert invariance_check(alpha, lie, u, v, w) == 0


def test_functional_examples():
    alpha = AlphaData.standard(2, 1)  # x^-2 + x^-1
    f = Series.univariate({0: 1, 1: 5})
    # res{(x^-2 + x^-1)(1 + 5x)} = 5 + 1
    assert functional_t(alpha, f) == 6
    # the quotient part subtracts res{alpha p}: p = [1] gives 1
    assert functional_t(alpha, f, (1, 0)) == 5


@pytest.mark.parametrize("n,a0", CONFIGS)
def test_diagonal_is_isotropic(n, a0):
    lie = get_lie("sl2")
    alpha = AlphaData.standard(n, a0)
    elems = []
    for d in range(n + 2):
        f = TensorSeries.from_vector(lie, {d % 3: 1}, Series.monomial(("x",), (d,)))
        elems.append(LnElement.diagonal(lie, n, f))
    for u in elems:
        for v in elems:
            assert form_B(alpha, lie, u, v) == 0


@pytest.mark.parametrize("n,a0", CONFIGS)
def test_model_gram_is_nondegenerate(n, a0):
    K = max(n + 1, 4)
    model = build_truncated_model(AlphaData.standard(n, a0), get_lie("sl2"), K)
    radical = model.radical_indices()
    # the radical is exactly the span of the basis vectors without partners in the window
    assert model.gram_rank() == model.dim - len(radical)
    # b_i x^j pairs with x^(n-1-j) through the leading term: partners leave the window for j <= n-1-K
    expected = 3 * (n if not a0 or n < 2 else 1)
    assert len(radical) == expected


def test_diagonal_is_not_complementary():
    lie = get_lie("sl2")
    model = build_truncated_model(AlphaData.standard(1), lie, 4)
    diag = model.diagonal_basis()
    assert not complementarity_rank(model, diag + diag[:3])


def test_normalizing_already_normal():
    t = solve_normalizing_transform(AlphaData.standard(3, 2), 8)
    assert dict(t.psi.items()) == {(1,): 1}


def test_normalizing_known_series():
    alpha = AlphaData(2, {-2: 1})  # x^-2 + x
    t = solve_normalizing_transform(alpha, 8)
    assert t.psi.coefficient((4,)) == Fraction(-1, 2)
    assert t.psi.coefficient((2,)) == 0 and t.psi.coefficient((3,)) == 0
    assert dict(compose(t.phi, t.psi, hi=9).items()) == {(1,): 1}
    # the ODE itself: alpha(psi) psi' = beta through the certified order
    lhs = compose(alpha.series(), t.psi, hi=7) * t.psi.derivative()
    assert (lhs - t.beta.series()).is_zero()


@pytest.mark.parametrize("alpha", [AlphaData(2, {-2: 1}), AlphaData(3, {-1: 1}), AlphaData(2, {0: 1, -1: 3, -3: 2})])
def test_residue_table(alpha):
    t = solve_normalizing_transform(alpha, 8)
    rows = residue_identity_table(alpha, t, range(-5, 6))
    assert all(r.matches for r in rows)


def test_residue_literal_column_is_the_alpha_side():
    alpha = AlphaData(2, {-2: 1})
    t = solve_normalizing_transform(alpha, 8)
    rows = {r.k: r for r in residue_identity_table(alpha, t, range(-5, 6))}
    # res{alpha(psi) psi' psi^k} = res{alpha x^k}: 1 at k = -2, unlike res{beta x^-2} = 0
    assert rows[-2].substituted == 1 and rows[-2].beta_side == 0


def test_order_too_small():
    with pytest.raises(ValueError):
        solve_normalizing_transform(AlphaData.standard(2), 1)


def test_alpha_json_roundtrip():
    a = AlphaData(4, {0: Fraction(1, 3), -2: 5})
    assert AlphaData.from_json(a.to_json()) == a
