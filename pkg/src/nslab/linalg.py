"""Exact linear algebra over Q on sparse row vectors, backed by sympy's DomainMatrix."""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Vector = Mapping[int, Fraction]


def _to_qq(c):
    c = Fraction(c)
    return QQ(c.numerator, c.denominator)


def _from_qq(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _as_dict(row) -> dict:
    if isinstance(row, Mapping):
        return {k: v for k, v in row.items() if v}
    return {k: v for k, v in enumerate(row) if v}


def to_domain_matrix(rows: Sequence, ncols: int) -> DomainMatrix:
    data = {}
    for i, row in enumerate(rows):
        entries = {j: _to_qq(v) for j, v in _as_dict(row).items()}
        if entries:
            data[i] = entries
    return DomainMatrix(data, (len(rows), ncols), QQ)


def _rows_of(dm: DomainMatrix) -> list[dict]:
    sdm = dm.to_sdm()
    return [{j: _from_qq(v) for j, v in sdm.get(i, {}).items()} for i in range(dm.shape[0])]


def rank(rows: Sequence, ncols: int) -> int:
    if not rows:
        return 0
    return to_domain_matrix(rows, ncols).rank()


def rref(rows: Sequence, ncols: int) -> tuple[list[dict], tuple]:
    """Nonzero rows of the reduced row echelon form and the pivot columns."""
    if not rows:
        return [], ()
    reduced, pivots = to_domain_matrix(rows, ncols).rref()
    out = [r for r in _rows_of(reduced) if r]
    return out, tuple(pivots)


def row_space_equal(a: Sequence, b: Sequence, ncols: int) -> bool:
    ra, _ = rref(a, ncols)
    rb, _ = rref(b, ncols)
    return ra == rb


def in_row_space(vec, rows: Sequence, ncols: int) -> bool:
    return rank(list(rows) + [vec], ncols) == rank(rows, ncols)


def solve_combination(vec, rows: Sequence, ncols: int) -> dict | None:
    """Coefficients c with sum_k c_k rows[k] = vec, or None if vec is not in the span."""
    if not rows:
        return {} if not _as_dict(vec) else None
    m = len(rows)
    # transpose system: columns are rows[k], augmented with vec
    data: dict = {}
    for k, row in enumerate(rows):
        for j, v in _as_dict(row).items():
            data.setdefault(j, {})[k] = _to_qq(v)
    for j, v in _as_dict(vec).items():
        data.setdefault(j, {})[m] = _to_qq(v)
    aug = DomainMatrix(data, (ncols, m + 1), QQ)
    reduced, pivots = aug.rref()
    if m in pivots:
        return None
    sol = {}
    sdm = reduced.to_sdm()
    for i, p in enumerate(pivots):
        val = sdm.get(i, {}).get(m)
        if val:
            sol[p] = _from_qq(val)
    return sol


def nullspace(rows: Sequence, ncols: int) -> list[dict]:
    """Basis of {v : M v = 0} for the matrix with the given rows."""
    if not rows:
        return [{j: Fraction(1)} for j in range(ncols)]
    ns = to_domain_matrix(rows, ncols).nullspace()
    return [r for r in _rows_of(ns) if r]


def inverse(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(matrix)
    inv = to_domain_matrix(matrix, n).inv().to_dense().to_list()
    return [[_from_qq(v) for v in row] for row in inv]


def mat_vec(rows: Sequence, vec) -> dict:
    v = _as_dict(vec)
    out = {}
    for i, row in enumerate(rows):
        acc = sum((c * v[j] for j, c in _as_dict(row).items() if j in v), Fraction(0))
        if acc:
            out[i] = acc
    return out


class RowSpace:
    """Row space kept in reduced echelon form, for repeated membership tests."""

    def __init__(self, rows: Sequence, ncols: int):
        self.ncols = ncols
        reduced, pivots = rref(list(rows), ncols)
        self.rows = reduced
        self.pivots = pivots

    @property
    def dim(self) -> int:
        return len(self.rows)

    def residual(self, vec) -> dict:
        v = dict(_as_dict(vec))
        for row, p in zip(self.rows, self.pivots):
            c = v.get(p)
            if c:
                for j, a in row.items():
                    val = v.get(j, 0) - c * a
                    if val:
                        v[j] = val
                    else:
                        v.pop(j, None)
        return v

    def contains(self, vec) -> bool:
        return not self.residual(vec)
