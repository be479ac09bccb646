import itertools
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from nslab.lie import (
    TensorSeries,
    act_diagonally,
    alt,
    casimir,
    commutator,
    get_lie,
    lie_from_json,
    lie_to_json,
    tau_flip,
    trace_form,
    sl_matrices,
)
from nslab.series import Series

XY = ("x", "y")


@pytest.mark.parametrize("name", ["sl2", "sl3"])
def test_jacobi_and_antisymmetry(name):
    lie = get_lie(name)
    d = lie.dim
    for i, j in itertools.product(range(d), repeat=2):
        assert lie.bracket_vec({i: 1}, {j: 1}) == {k: -c for k, c in lie.bracket_vec({j: 1}, {i: 1}).items()}
    for i, j, k in itertools.combinations(range(d), 3):
        a, b, c = {i: 1}, {j: 1}, {k: 1}
        total = {}
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            for key, v in lie.bracket_vec(x, lie.bracket_vec(y, z)).items():
                total[key] = total.get(key, 0) + v
        assert not any(total.values())


def test_sl2_killing_is_four_times_trace():
    lie = get_lie("sl2")
    e, h, f = [[0, 1], [0, 0]], [[1, 0], [0, -1]], [[0, 0], [1, 0]]
    tr = trace_form([e, h, f])
    assert [list(row) for row in lie.killing] == [[4 * v for v in row] for row in tr]
    assert lie.killing[1][1] == 8 and lie.killing[0][2] == 4


def test_sl3_killing_is_six_times_trace():
    lie = get_lie("sl3")
    _, mats = sl_matrices(3)
    tr = trace_form(mats)
    assert [list(row) for row in lie.killing] == [[6 * v for v in row] for row in tr]


@pytest.mark.parametrize("name", ["sl2", "sl3"])
def test_killing_invariance(name):
    lie = get_lie(name)
    d = lie.dim
    for i, j, k in itertools.product(range(d), repeat=3):
        left = lie.kappa(lie.bracket_vec({i: 1}, {j: 1}), {k: 1})
        right = lie.kappa({i: 1}, lie.bracket_vec({j: 1}, {k: 1}))
        assert left == right


@pytest.mark.parametrize("name", ["sl2", "sl3"])
def test_dual_basis(name):
    lie = get_lie(name)
    for i in range(lie.dim):
        for j in range(lie.dim):
            assert lie.kappa(lie.dual_vector(i), {j: 1}) == int(i == j)


@pytest.mark.parametrize("name", ["sl2", "sl3"])
def test_casimir_is_invariant_and_symmetric(name):
    lie = get_lie(name)
    omega = casimir(lie)
    assert (omega - tau_flip(omega)).is_zero()
    for i in range(lie.dim):
        assert act_diagonally(lie, {i: 1}, 0, omega).is_zero()
        # x^m on both legs: still invariant after setting x = y, not before
        assert not act_diagonally(lie, {i: 1}, 1, omega).is_zero()


def test_json_roundtrip(sl3):
    again = lie_from_json(lie_to_json(sl3))
    assert again.killing == sl3.killing
    assert again.brackets == sl3.brackets


@given(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
def test_commutator_antisymmetric(i, j, k):
    lie = get_lie("sl2")
    x = Series.monomial(XY, (1, 0))
    a = TensorSeries.from_vector(lie, {i: 1}, x).embed_legs(2, [0])
    b = TensorSeries(lie, 2, XY, {(j, k): {(0, 1): Fraction(1)}}, casimir(lie).window)
    assert (commutator(a, b) + commutator(b, a)).is_zero()


def test_alt_is_alternating(sl2):
    x3 = ("x1", "x2", "x3")
    t = TensorSeries(sl2, 3, x3, {(0, 1, 2): {(1, 0, 2): Fraction(1)}}, casimir(sl2).embed(x3, {"x": "x1", "y": "x2"}).window)
    a = alt(t)
    swapped = a.permute_legs((1, 0, 2)).permute_variables((1, 0, 2))
    assert (a + swapped).is_zero()
    assert not a.is_zero()
