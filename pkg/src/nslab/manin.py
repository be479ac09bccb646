"""The algebras A(n, alpha) and L(n, alpha), the residue functional, the invariant
form B, a finite truncated model for rank checks, and the normalizing coordinate
change alpha -> x^{-n} + alpha_0 x^{-1}.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .lie import LieAlgebraData, TensorSeries
from .series import (
    INF,
    Series,
    Window,
    WindowError,
    as_fraction,
    compose,
    compositional_inverse,
    power,
    residue,
    series_invert,
)


@dataclass(frozen=True)
class AlphaData:
    """alpha(x) = x^{-n} + sum_{i <= n-2} alpha_i x^{-i-1}, finitely supported."""

    n: int
    coeffs: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        clean = {}
        for i, c in dict(self.coeffs).items():
            i = int(i)
            c = as_fraction(c)
            if i > self.n - 2:
                raise ValueError(f"alpha index {i} exceeds n-2 = {self.n - 2}")
            if c:
                clean[i] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def standard(cls, n: int, alpha0=0) -> "AlphaData":
        """x^{-n} + alpha0 x^{-1}; alpha0 is only a free parameter for n >= 2."""
        if n >= 2 and alpha0:
            return cls(n, {0: alpha0})
        return cls(n, {})

    @property
    def alpha0(self) -> Fraction:
        return self.coeffs.get(0, Fraction(0))

    def coefficient_at_degree(self, d: int) -> Fraction:
        if d == -self.n:
            return Fraction(1)
        return self.coeffs.get(-d - 1, Fraction(0))

    @property
    def max_degree(self) -> int:
        return max([-self.n, *(-i - 1 for i in self.coeffs)])

    def read_set(self) -> list[int]:
        """Indices i of alpha_i that any computation here can read."""
        return sorted(self.coeffs)

    def series(self, var: str = "x") -> Series:
        coeffs = {-self.n: 1}
        for i, c in self.coeffs.items():
            coeffs[-i - 1] = coeffs.get(-i - 1, 0) + c
        return Series.polynomial((var,), {(d,): c for d, c in coeffs.items()})

    def s_series(self, hi: int) -> Series:
        """1 / (x^n alpha(x)) exact below degree hi."""
        return series_invert(self.series().shift((self.n,)), hi)

    def to_json(self) -> dict:
        return {"n": self.n, "alpha": {str(i): str(c) for i, c in sorted(self.coeffs.items())}}

    @classmethod
    def from_json(cls, obj: Mapping) -> "AlphaData":
        return cls(int(obj["n"]), {int(k): Fraction(v) for k, v in obj.get("alpha", {}).items()})


class LnElement:
    """An element (f, [p]) of L(n, alpha) = g((x)) x g[x]/x^n."""

    __slots__ = ("lie", "n", "laurent", "quotient")

    def __init__(self, lie: LieAlgebraData, n: int, laurent: TensorSeries | None = None,
                 quotient: Mapping | None = None):
        if laurent is None:
            laurent = TensorSeries.zero(lie, 1, ("x",), Window.exact((0,)))
        if laurent.arity != 1 or laurent.vars != ("x",):
            raise ValueError("laurent part must be an arity-1 tensor in x")
        quot = {}
        for i, p in (quotient or {}).items():
            p = tuple(as_fraction(c) for c in p)
            if any(p[n:]):
                raise ValueError("quotient class must have degree < n")
            p = p[:n]
            p = p + (Fraction(0),) * (n - len(p))
            if any(p):
                quot[i] = p
        self.lie = lie
        self.n = n
        self.laurent = laurent
        self.quotient = quot

    @classmethod
    def basis_laurent(cls, lie, n, i, degree, c=1) -> "LnElement":
        mono = Series.monomial(("x",), (degree,), c)
        return cls(lie, n, TensorSeries.from_vector(lie, {i: 1}, mono))

    @classmethod
    def basis_quotient(cls, lie, n, i, degree, c=1) -> "LnElement":
        if not 0 <= degree < n:
            raise ValueError("quotient degree out of range")
        p = [0] * n
        p[degree] = c
        return cls(lie, n, None, {i: p})

    @classmethod
    def diagonal(cls, lie, n, f: TensorSeries) -> "LnElement":
        """(f, [f mod x^n]) for an arity-1 power series f."""
        if f.window.lo[0] < 0:
            raise ValueError("diagonal elements need a power series")
        if n and f.window.hi[0] < n:
            raise WindowError("series not exact below x^n; cannot form its class")
        quot = {}
        for (i,), comp in f.terms.items():
            quot[i] = [comp.get((d,), 0) for d in range(n)]
        return cls(lie, n, f, quot)

    def _check(self, other: "LnElement"):
        if self.n != other.n:
            raise ValueError("elements of different L(n, alpha)")

    def __add__(self, other: "LnElement") -> "LnElement":
        self._check(other)
        quot = {}
        for i in set(self.quotient) | set(other.quotient):
            a = self.quotient.get(i, (0,) * self.n)
            b = other.quotient.get(i, (0,) * self.n)
            quot[i] = tuple(x + y for x, y in zip(a, b))
        return LnElement(self.lie, self.n, self.laurent + other.laurent, quot)

    def __neg__(self) -> "LnElement":
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LnElement":
        c = as_fraction(c)
        quot = {i: tuple(c * v for v in p) for i, p in self.quotient.items()}
        return LnElement(self.lie, self.n, self.laurent.scale(c), quot)

    def mul_scalar(self, s: Series) -> "LnElement":
        """Action of the diagonal scalar (s, [s]) for a power series s."""
        if s.window.lo[0] < 0:
            raise ValueError("only power series act diagonally")
        quot = {}
        if self.quotient:
            if s.window.hi[0] < self.n:
                raise WindowError("scalar not exact below x^n")
            sc = [s.coefficient((d,)) for d in range(self.n)]
            for i, p in self.quotient.items():
                quot[i] = tuple(
                    sum((p[a] * sc[d - a] for a in range(d + 1)), Fraction(0)) for d in range(self.n)
                )
        return LnElement(self.lie, self.n, self.laurent.mul_series(s), quot)

    def bracket(self, other: "LnElement") -> "LnElement":
        self._check(other)
        from .lie import commutator
        laurent = commutator(self.laurent, other.laurent)
        quot = {}
        for i, p in self.quotient.items():
            for j, q in other.quotient.items():
                consts = self.lie.brackets.get((i, j))
                if not consts:
                    continue
                prod = _poly_mul_mod(p, q, self.n)
                for k, c in consts:
                    cur = quot.get(k, (Fraction(0),) * self.n)
                    quot[k] = tuple(u + c * v for u, v in zip(cur, prod))
        return LnElement(self.lie, self.n, laurent, quot)

    def laurent_window(self) -> Window:
        return self.laurent.window

    def is_zero(self) -> bool:
        return self.laurent.is_zero() and not self.quotient

    def to_json(self) -> dict:
        names = self.lie.basis_names
        laurent = [[names[idx[0]], e[0], str(c)] for idx, e, c in self.laurent.items()]
        quot = [[names[i], d, str(c)] for i, p in sorted(self.quotient.items()) for d, c in enumerate(p) if c]
        hi = self.laurent.window.hi[0]
        return {"laurent": laurent, "quotient": quot,
                "laurent_window": [self.laurent.window.lo[0], None if hi == INF else int(hi)]}

    def __repr__(self):
        return f"LnElement(n={self.n}, laurent={self.laurent!r}, quotient={self.quotient})"


def _poly_mul_mod(p, q, n):
    out = [Fraction(0)] * n
    for a, u in enumerate(p):
        if not u:
            continue
        for b, v in enumerate(q):
            if a + b < n and v:
                out[a + b] += u * v
    return tuple(out)


def _laurent_pair_residue(alpha: AlphaData, f: Mapping, fw: Window, g: Mapping, gw: Window) -> Fraction:
    """res_0 { alpha * f * g } for univariate coefficient dicts, with exactness checks."""
    prod_lo = fw.lo[0] + gw.lo[0]
    prod_hi = min(fw.hi[0] + gw.lo[0], gw.hi[0] + fw.lo[0])
    alpha_terms = [(-alpha.n, Fraction(1))] + [(-i - 1, c) for i, c in alpha.coeffs.items()]
    total = Fraction(0)
    for d, a in alpha_terms:
        m = -1 - d
        if m < prod_lo:
            continue
        if m >= prod_hi:
            raise WindowError(
                f"pairing needs the product coefficient of degree {m}, certified below {prod_hi}"
            )
        acc = Fraction(0)
        for (e,), c in f.items():
            v = g.get((m - e,))
            if v:
                acc += c * v
        total += a * acc
    return total


def functional_t(alpha: AlphaData, f: Series, p=()) -> Fraction:
    """t(f, [p]) = res_0 { alpha (f - p) }."""
    n = alpha.n
    p = tuple(p) + (0,) * (n - len(tuple(p)))
    one = {(0,): Fraction(1)}
    val = _laurent_pair_residue(alpha, f.coeffs, f.window, one, Window.exact((0,)))
    for d, c in enumerate(p[:n]):
        if c:
            val -= as_fraction(c) * alpha.coefficient_at_degree(-1 - d)
    return val


def form_B(alpha: AlphaData, lie: LieAlgebraData, u: LnElement, v: LnElement) -> Fraction:
    """B(a(f,[p]), b(g,[q])) = kappa(a,b) t(fg, [pq]), extended bilinearly."""
    if u.n != alpha.n or v.n != alpha.n:
        raise ValueError("elements do not live in L(n, alpha) for this alpha")
    total = Fraction(0)
    uw, vw = u.laurent.window, v.laurent.window
    for i in range(lie.dim):
        for j in range(lie.dim):
            k = lie.killing[i][j]
            if k:
                fi = u.laurent.terms.get((i,), {})
                gj = v.laurent.terms.get((j,), {})
                total += k * _laurent_pair_residue(alpha, fi, uw, gj, vw)
    for i, p in u.quotient.items():
        for j, q in v.quotient.items():
            k = lie.killing[i][j]
            if k:
                prod = _poly_mul_mod(p, q, alpha.n)
                total -= k * sum(
                    (c * alpha.coefficient_at_degree(-1 - d) for d, c in enumerate(prod) if c), Fraction(0)
                )
    return total


def form_B_extended(alpha: AlphaData, lie: LieAlgebraData, u: LnElement,
                    table: Mapping, variable: str = "y") -> TensorSeries:
    """Pair u against the first leg of sum_{(l, j)} table[(l, j)] (x) b_j y^l.

    The second leg stays free, so the result is the g[[y]]-valued series
    sum B(u, table[(l, j)]) b_j y^l.  With a single entry at (0, j) this is
    form_B times b_j.
    """
    terms: dict = {}
    top = 0
    for (ell, j), elem in table.items():
        val = form_B(alpha, lie, u, elem)
        top = max(top, ell + 1)
        if val:
            terms.setdefault((j,), {})[(ell,)] = val
    return TensorSeries(lie, 1, (variable,), terms, Window((0,), (top,)))


def invariance_check(alpha: AlphaData, lie: LieAlgebraData, u: LnElement, v: LnElement,
                     w: LnElement) -> Fraction:
    return form_B(alpha, lie, u.bracket(v), w) - form_B(alpha, lie, u, v.bracket(w))


@dataclass
class TruncatedModel:
    """Finite stage: b_i x^j (-K <= j < K) in the Laurent slot, b_i [x]^m in the quotient."""

    alpha: AlphaData
    lie: LieAlgebraData
    K: int
    gram: list = field(repr=False, default_factory=list)

    @property
    def n(self) -> int:
        return self.alpha.n

    @property
    def dim(self) -> int:
        return self.lie.dim * (2 * self.K + self.n)

    def laurent_index(self, i: int, j: int) -> int:
        return i * 2 * self.K + (j + self.K)

    def quotient_index(self, i: int, m: int) -> int:
        return self.lie.dim * 2 * self.K + i * self.n + m

    def coords(self, elem: LnElement) -> dict:
        """Model coordinates of elem (its Laurent part must sit in [-K, K) exactly)."""
        w = elem.laurent.window
        if elem.laurent.terms and w.lo[0] < -self.K:
            low = min(e[0] for comp in elem.laurent.terms.values() for e in comp)
            if low < -self.K:
                raise WindowError(f"vector has Laurent degree {low} below -K = {-self.K}")
        if w.hi[0] < self.K:
            raise WindowError(f"vector exact below x^{w.hi[0]} only; model needs x^{self.K}")
        out = {}
        for (i,), comp in elem.laurent.terms.items():
            for (j,), c in comp.items():
                if j < self.K:
                    out[self.laurent_index(i, j)] = c
        for i, p in elem.quotient.items():
            for m, c in enumerate(p):
                if c:
                    out[self.quotient_index(i, m)] = c
        return out

    def diagonal_basis(self) -> list[dict]:
        rows = []
        for i in range(self.lie.dim):
            for j in range(self.K):
                row = {self.laurent_index(i, j): Fraction(1)}
                if j < self.n:
                    row[self.quotient_index(i, j)] = Fraction(1)
                rows.append(row)
        return rows

    def gram_rank(self) -> int:
        return linalg.rank(self.gram, self.dim)

    def radical_indices(self) -> list[int]:
        """Basis vectors whose every pairing falls outside the model window."""
        return [a for a, row in enumerate(self.gram) if not any(row.values())]


def build_truncated_model(alpha: AlphaData, lie: LieAlgebraData, K: int) -> TruncatedModel:
    if K < alpha.n + 1:
        raise ValueError("model needs K >= n + 1")
    model = TruncatedModel(alpha, lie, K)
    dim = model.dim
    gram = [dict() for _ in range(dim)]
    d = lie.dim
    for i in range(d):
        for k in range(d):
            kap = lie.killing[i][k]
            if not kap:
                continue
            for j in range(-K, K):
                for ell in range(-K, K):
                    a = alpha.coefficient_at_degree(-1 - j - ell)
                    if a:
                        gram[model.laurent_index(i, j)][model.laurent_index(k, ell)] = kap * a
            for a_deg in range(alpha.n):
                for b_deg in range(alpha.n):
                    if a_deg + b_deg < alpha.n:
                        c = alpha.coefficient_at_degree(-1 - a_deg - b_deg)
                        if c:
                            gram[model.quotient_index(i, a_deg)][model.quotient_index(k, b_deg)] = -kap * c
    model.gram = gram
    return model


def model_pairing(model: TruncatedModel, u: Mapping, v: Mapping) -> Fraction:
    total = Fraction(0)
    for a, x in u.items():
        row = model.gram[a]
        for b, y in v.items():
            g = row.get(b)
            if g:
                total += x * y * g
    return total


def complementarity_rank(model: TruncatedModel, w_vectors: Sequence) -> bool:
    """True iff span(Delta_K) + span(W) is the whole model with dim W = d(K+n)."""
    rows = [model.coords(w) if isinstance(w, LnElement) else dict(w) for w in w_vectors]
    if len(rows) != model.lie.dim * (model.K + model.n):
        return False
    return linalg.rank(model.diagonal_basis() + rows, model.dim) == model.dim


@dataclass(frozen=True)
class NormalizingTransform:
    psi: Series
    phi: Series
    beta: AlphaData
    order: int


def solve_normalizing_transform(alpha: AlphaData, order: int) -> NormalizingTransform:
    """Solve alpha(psi) psi' = beta with beta = x^{-n} + alpha_0 x^{-1}, psi = x + O(x^2).

    At m = n the coefficient of psi_m drops out of the recursion (the residue
    is a coordinate invariant), so psi_n is a free parameter; it is fixed to 0.
    """
    if order < 2:
        raise ValueError("order must be at least 2")
    n = alpha.n
    beta = AlphaData.standard(n, alpha.alpha0)
    a_ser = alpha.series()
    b_ser = beta.series()
    coeffs = {1: Fraction(1)}
    for m in range(2, order + 1):
        psi = Series.univariate(coeffs, lo=0, hi=m + 1)
        lhs = compose(a_ser, psi, hi=m - n) * psi.derivative()
        deg = m - 1 - n
        err = lhs.coefficient((deg,)) - b_ser.coefficient((deg,))
        factor = m - n
        if factor == 0:
            if err:
                raise ArithmeticError(f"recursion degenerate at degree {deg}: residual {err}")
            continue
        if err:
            coeffs[m] = -err / factor
    psi = Series.univariate(coeffs, lo=0, hi=order + 1)
    phi = compositional_inverse(psi, order)
    return NormalizingTransform(psi, phi, beta, order)


def _laurent_power(p: Series, k: int) -> Series:
    """p^k for p = x + O(x^2); negative k goes through the unit p / x."""
    if k >= 0:
        return power(p, k)
    unit = Series(p.vars, {(e[0] - 1,): c for e, c in p.coeffs.items()}, Window((0,), (p.hi - 1,)))
    inv = series_invert(unit, unit.hi)
    return power(inv, -k).shift((k,))


@dataclass(frozen=True)
class ResidueRow:
    """Residues for f = x^k: res{beta f}, res{alpha f(phi)}, res{alpha(psi) psi' f}.

    The first three agree for a correct transform.  ``substituted`` is
    res{alpha(psi) psi' psi^k}, which equals res{alpha x^k} instead.
    """

    k: int
    beta_side: Fraction
    alpha_of_phi: Fraction
    pulled_back: Fraction
    substituted: Fraction

    @property
    def matches(self) -> bool:
        return self.beta_side == self.alpha_of_phi == self.pulled_back


def residue_identity_table(alpha: AlphaData, transform: NormalizingTransform, ks) -> list[ResidueRow]:
    psi, phi = transform.psi, transform.phi
    n = alpha.n
    top = transform.order + 1
    pulled = compose(alpha.series(), psi, hi=top - n) * psi.derivative()
    rows = []
    for k in ks:
        mono = Series.monomial(("x",), (k,))
        beta_side = residue(transform.beta.series() * mono)
        alpha_of_phi = residue(alpha.series() * _laurent_power(phi, k))
        pulled_back = residue(pulled * mono)
        substituted = residue(pulled * _laurent_power(psi, k))
        rows.append(ResidueRow(k, beta_side, alpha_of_phi, pulled_back, substituted))
    return rows
