"""Exact truncated Laurent/power series with tracked exactness windows.

A window records, per variable, a lower bound ``lo`` below which every
coefficient is known to vanish and an exclusive upper bound ``hi``.  An
optional bound ``total`` caps the total degree.  A coefficient at exponent
``e`` is certified when ``e < hi`` componentwise and ``sum(e) < total``; every
arithmetic routine computes the largest window on which its result is exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

INF = math.inf

Exps = tuple


class WindowError(ValueError):
    """A requested coefficient or result lies outside the certified window."""


class VariableMismatch(ValueError):
    pass


class DiagonalError(ValueError):
    """Raised by divide_by_diag when the input does not vanish on x = y."""


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floating point values are not accepted; use Fraction")
    return Fraction(value)


@dataclass(frozen=True)
class Window:
    lo: tuple
    hi: tuple
    total: float | int = INF

    def __post_init__(self):
        if len(self.lo) != len(self.hi):
            raise ValueError("lo and hi must have the same length")
        for low, high in zip(self.lo, self.hi):
            if high < low:
                raise ValueError(f"empty window component [{low}, {high})")

    @classmethod
    def exact(cls, lo: Iterable[int]) -> "Window":
        lo = tuple(lo)
        return cls(lo, tuple(INF for _ in lo))

    @property
    def nvars(self) -> int:
        return len(self.lo)

    @property
    def valuation(self) -> int:
        return sum(self.lo)

    def contains(self, e) -> bool:
        for v, h in zip(e, self.hi):
            if v >= h:
                return False
        return sum(e) < self.total

    def in_support_range(self, e) -> bool:
        return all(v >= low for v, low in zip(e, self.lo))

    def intersect(self, other: "Window") -> "Window":
        return Window(
            tuple(min(a, b) for a, b in zip(self.lo, other.lo)),
            tuple(min(a, b) for a, b in zip(self.hi, other.hi)),
            min(self.total, other.total),
        )

    def product(self, other: "Window") -> "Window":
        lo = tuple(a + b for a, b in zip(self.lo, other.lo))
        hi = tuple(
            min(ha + lb, hb + la)
            for la, ha, lb, hb in zip(self.lo, self.hi, other.lo, other.hi)
        )
        total = min(self.total + other.valuation, other.total + self.valuation)
        hi = tuple(max(h, low) for h, low in zip(hi, lo))
        return Window(lo, hi, total)

    def shifted(self, e) -> "Window":
        return Window(
            tuple(a + b for a, b in zip(self.lo, e)),
            tuple(a + b for a, b in zip(self.hi, e)),
            self.total + sum(e),
        )

    def capped(self, hi=None, total=None) -> "Window":
        new_hi = self.hi if hi is None else tuple(min(a, b) for a, b in zip(self.hi, hi))
        new_hi = tuple(max(h, low) for h, low in zip(new_hi, self.lo))
        new_total = self.total if total is None else min(self.total, total)
        return Window(self.lo, new_hi, new_total)

    def permuted(self, order) -> "Window":
        return Window(tuple(self.lo[i] for i in order), tuple(self.hi[i] for i in order), self.total)

    def to_json(self) -> dict:
        def enc(v):
            return None if v == INF else int(v)
        return {"lo": list(self.lo), "hi": [enc(h) for h in self.hi], "total": enc(self.total)}


# raw coefficient-dict kernels, shared with the tensor layer

def mul_dicts(a: Mapping, b: Mapping, window: Window) -> dict:
    out: dict = {}
    hi = window.hi
    total = window.total
    n = len(hi)
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(ea[i] + eb[i] for i in range(n))
            ok = True
            for i in range(n):
                if e[i] >= hi[i]:
                    ok = False
                    break
            if not ok or sum(e) >= total:
                continue
            out[e] = out.get(e, 0) + ca * cb
    return {e: c for e, c in out.items() if c}


def add_dicts(a: Mapping, b: Mapping, window: Window, sign: int = 1) -> dict:
    out = {e: c for e, c in a.items() if window.contains(e)}
    for e, c in b.items():
        if window.contains(e):
            out[e] = out.get(e, 0) + sign * c
    return {e: c for e, c in out.items() if c}


def restrict_dict(a: Mapping, window: Window) -> dict:
    return {e: c for e, c in a.items() if c and window.contains(e)}


def divide_dict_by_diag(coeffs: Mapping, window: Window, ix: int, iy: int):
    """Exact quotient of ``coeffs`` by (x_ix - x_iy); returns (coeffs, window).

    Uses the anti-diagonal partial sums f[a,b] = sum_j h[a+1+j, b-j] (or the
    mirrored form when the y-window is the longer one), which is what the
    substitution x = y + t followed by division by t produces.
    """
    if window.lo[ix] < 0 or window.lo[iy] < 0:
        raise WindowError("divide_by_diag needs power-series behaviour in both variables")
    hx, hy = window.hi[ix], window.hi[iy]
    others = [k for k in range(window.nvars) if k not in (ix, iy)]
    other_val = sum(window.lo[k] for k in others)
    groups: dict = {}
    for e, c in coeffs.items():
        key = tuple(e[k] for k in others)
        groups.setdefault(key, {})[(e[ix], e[iy])] = c
    # diagonal check on certified degrees
    for key, grid in groups.items():
        sums: dict = {}
        for (a, b), c in grid.items():
            sums[a + b] = sums.get(a + b, 0) + c
        for m, val in sums.items():
            if val and m < min(hx, hy) and m + sum(key) < window.total:
                raise DiagonalError(
                    f"series does not vanish on the diagonal (degree {m}, other exponents {key})"
                )
    reach = max(hx, hy)
    total = min(window.total - 1, reach + other_val - 1)
    lo = list(window.lo)
    lo[ix] = 0
    lo[iy] = 0
    out_window = Window(tuple(lo), window.hi, total)
    along_x = hx >= hy
    out: dict = {}
    for key, grid in groups.items():
        for (a, b), c in grid.items():
            # h[a,b] feeds f[a-1-j, b+j] (along x) or f[a+j, b-1-j] (along y)
            if along_x:
                targets = [(a - 1 - j, b + j, c) for j in range(a)]
            else:
                targets = [(a + j, b - 1 - j, -c) for j in range(b)]
            for fa, fb, val in targets:
                e = [0] * window.nvars
                e[ix], e[iy] = fa, fb
                for k, v in zip(others, key):
                    e[k] = v
                e = tuple(e)
                if out_window.contains(e):
                    out[e] = out.get(e, 0) + val
    return {e: c for e, c in out.items() if c}, out_window


class Series:
    """Sparse exact series in named variables with an exactness window."""

    __slots__ = ("vars", "coeffs", "window")

    def __init__(self, variables, coeffs: Mapping, window: Window):
        variables = tuple(variables)
        if len(variables) != window.nvars:
            raise VariableMismatch("window dimension does not match variables")
        clean = {}
        for e, c in coeffs.items():
            e = tuple(e)
            c = as_fraction(c)
            if not c:
                continue
            if not window.in_support_range(e):
                raise WindowError(f"exponent {e} lies below the window lower bound {window.lo}")
            if window.contains(e):
                clean[e] = c
        self.vars = variables
        self.coeffs = clean
        self.window = window

    # constructors
    @classmethod
    def zero(cls, variables=("x",), window: Window | None = None) -> "Series":
        variables = tuple(variables)
        if window is None:
            window = Window.exact([0] * len(variables))
        return cls(variables, {}, window)

    @classmethod
    def constant(cls, c, variables=("x",)) -> "Series":
        variables = tuple(variables)
        zero = (0,) * len(variables)
        return cls(variables, {zero: c}, Window.exact(zero))

    @classmethod
    def monomial(cls, variables, exps, c=1) -> "Series":
        """An exact monomial; the lower bound of each variable is min(0, exponent)."""
        variables = tuple(variables)
        exps = tuple(exps)
        lo = tuple(min(0, v) for v in exps)
        return cls(variables, {exps: c}, Window.exact(lo))

    @classmethod
    def polynomial(cls, variables, coeffs: Mapping) -> "Series":
        variables = tuple(variables)
        if coeffs:
            lo = tuple(min(0, min(e[i] for e in coeffs)) for i in range(len(variables)))
        else:
            lo = (0,) * len(variables)
        return cls(variables, coeffs, Window.exact(lo))

    @classmethod
    def univariate(cls, coeffs: Mapping[int, object], lo: int | None = None, hi=INF, var: str = "x") -> "Series":
        if lo is None:
            lo = min([0, *coeffs])
        return cls((var,), {(k,): c for k, c in coeffs.items()}, Window((lo,), (hi,)))

    # access
    @property
    def nvars(self) -> int:
        return len(self.vars)

    def is_certified(self, e) -> bool:
        e = tuple(e)
        return (not self.window.in_support_range(e)) or self.window.contains(e)

    def coefficient(self, e) -> Fraction:
        if isinstance(e, int):
            e = (e,)
        e = tuple(e)
        if not self.window.in_support_range(e):
            return Fraction(0)
        if not self.window.contains(e):
            raise WindowError(f"coefficient {e} outside certified window {self.window}")
        return self.coeffs.get(e, Fraction(0))

    def __getitem__(self, e) -> Fraction:
        return self.coefficient(e)

    def items(self):
        return sorted(self.coeffs.items())

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> int | None:
        """Lowest degree with nonzero coefficient (univariate only)."""
        self._need_univariate()
        if not self.coeffs:
            return None
        return min(e[0] for e in self.coeffs)

    @property
    def hi(self):
        self._need_univariate()
        return self.window.hi[0]

    @property
    def lo(self) -> int:
        self._need_univariate()
        return self.window.lo[0]

    def _need_univariate(self):
        if self.nvars != 1:
            raise VariableMismatch("operation needs a univariate series")

    def _check_vars(self, other: "Series"):
        if self.vars != other.vars:
            raise VariableMismatch(f"variables {self.vars} vs {other.vars}")

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, Series):
            other = Series.constant(other, self.vars)
        self._check_vars(other)
        window = self.window.intersect(other.window)
        return Series(self.vars, add_dicts(self.coeffs, other.coeffs, window), window)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.vars, {e: -c for e, c in self.coeffs.items()}, self.window)

    def __sub__(self, other):
        if not isinstance(other, Series):
            other = Series.constant(other, self.vars)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Series":
        c = as_fraction(c)
        return Series(self.vars, {e: c * v for e, v in self.coeffs.items()}, self.window)

    def __mul__(self, other):
        if not isinstance(other, Series):
            return self.scale(other)
        self._check_vars(other)
        window = self.window.product(other.window)
        return Series(self.vars, mul_dicts(self.coeffs, other.coeffs, window), window)

    def __rmul__(self, other):
        return self.scale(other)

    def shift(self, exps) -> "Series":
        """Multiply by the monomial with the given exponents."""
        if isinstance(exps, int):
            exps = (exps,)
        exps = tuple(exps)
        coeffs = {tuple(a + b for a, b in zip(e, exps)): c for e, c in self.coeffs.items()}
        return Series(self.vars, coeffs, self.window.shifted(exps))

    def truncate(self, hi=None, total=None) -> "Series":
        if isinstance(hi, int) or hi == INF:
            hi = (hi,)
        window = self.window.capped(hi, total)
        return Series(self.vars, restrict_dict(self.coeffs, window), window)

    def equal_on_window(self, other: "Series") -> bool:
        return (self - other).is_zero()

    def embed(self, variables, mapping: Mapping[str, str] | None = None) -> "Series":
        """Rename/inject into a larger variable list; missing variables get exponent 0."""
        variables = tuple(variables)
        mapping = dict(mapping or {v: v for v in self.vars})
        pos = [variables.index(mapping[v]) for v in self.vars]
        lo = [0] * len(variables)
        hi = [INF] * len(variables)
        for src, dst in enumerate(pos):
            lo[dst] = self.window.lo[src]
            hi[dst] = self.window.hi[src]
        coeffs = {}
        for e, c in self.coeffs.items():
            ne = [0] * len(variables)
            for src, dst in enumerate(pos):
                ne[dst] = e[src]
            coeffs[tuple(ne)] = c
        return Series(variables, coeffs, Window(tuple(lo), tuple(hi), self.window.total))

    def permute_variables(self, order) -> "Series":
        """New series whose k-th variable slot carries old slot order[k]'s exponent."""
        coeffs = {tuple(e[i] for i in order): c for e, c in self.coeffs.items()}
        return Series(self.vars, coeffs, self.window.permuted(order))

    def derivative(self, var: str | None = None) -> "Series":
        k = 0 if var is None else self.vars.index(var)
        coeffs = {}
        for e, c in self.coeffs.items():
            if e[k]:
                ne = list(e)
                ne[k] -= 1
                coeffs[tuple(ne)] = c * e[k]
        lo = list(self.window.lo)
        hi = list(self.window.hi)
        lo[k] = 0 if lo[k] == 0 else lo[k] - 1
        hi[k] = max(hi[k] - 1, lo[k])
        return Series(self.vars, coeffs, Window(tuple(lo), tuple(hi), self.window.total - 1))

    def __repr__(self):
        terms = " + ".join(f"({c})*{_mono(self.vars, e)}" for e, c in self.items()) or "0"
        return f"Series[{terms}; window={self.window}]"


def _mono(variables, e) -> str:
    parts = [f"{v}^{k}" for v, k in zip(variables, e) if k]
    return "*".join(parts) or "1"


# public operations

def series_add(a: Series, b: Series) -> Series:
    return a + b


def series_mul(a: Series, b: Series) -> Series:
    return a * b


def _target_hi(target) -> float:
    if isinstance(target, Window):
        return target.hi[0]
    return target


def series_invert(a: Series, target_window) -> Series:
    """Multiplicative inverse of a univariate Laurent unit, exact below the target bound."""
    a._need_univariate()
    v = a.valuation()
    if v is None:
        raise ZeroDivisionError("cannot invert the zero series")
    target = _target_hi(target_window)
    available = a.hi - 2 * v
    if target == INF and available == INF:
        if len(a.coeffs) == 1:
            return Series.monomial(a.vars, (-v,), 1 / a.coeffs[(v,)])
        raise WindowError("inverse of a non-monomial needs a finite target window")
    if target > available:
        raise WindowError(f"input exact below {a.hi} only reaches degree {available}, target {target}")
    lead = a.coeffs[(v,)]
    n_terms = int(target + v)  # coefficients of the unit part u^{-1}
    u = [a.coeffs.get((v + k,), Fraction(0)) for k in range(n_terms)]
    inv = []
    for k in range(n_terms):
        acc = Fraction(1) if k == 0 else Fraction(0)
        for j in range(1, k + 1):
            if u[j]:
                acc -= u[j] * inv[k - j]
        inv.append(acc / lead)
    coeffs = {k - v: c for k, c in enumerate(inv) if c}
    return Series.univariate(coeffs, lo=-v, hi=target, var=a.vars[0])


def residue(a: Series) -> Fraction:
    a._need_univariate()
    if a.hi <= -1:
        raise WindowError("degree -1 is outside the certified window")
    return a.coefficient((-1,))


def power(a: Series, k: int, hi=None) -> Series:
    """Nonnegative integer power by repeated squaring."""
    a._need_univariate()
    if k < 0:
        raise ValueError("use series_invert for negative powers")
    result = Series.constant(1, a.vars)
    base = a
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    if hi is not None:
        result = result.truncate(hi)
    return result


def compose(f: Series, phi: Series, hi=None) -> Series:
    """f(phi(x)) for phi = c1 x + c2 x^2 + ... with c1 != 0.

    ``hi`` caps the result window; it is required when both inputs are exact
    polynomials and f has a pole, since the answer is then an infinite series.
    """
    f._need_univariate()
    phi._need_univariate()
    if phi.coefficient((0,)) != 0:
        raise ValueError("phi must have zero constant term")
    if phi.coefficient((1,)) == 0:
        raise ValueError("phi must have a nonzero linear coefficient")
    var = f.vars
    v = f.valuation()
    if v is None:
        top = f.hi if hi is None else min(f.hi, hi)
        return Series(var, {}, Window((0,), (top,)))
    unit = Series(var, {(e[0] - 1,): c for e, c in phi.coeffs.items()}, Window((0,), (phi.hi - 1,)))
    reach = min(f.hi, v + unit.hi)
    if hi is not None:
        reach = min(reach, hi)
    if reach == INF:
        if v < 0:
            raise WindowError("composition with a pole needs a finite window bound")
        out = {}
        for (k,), c in f.coeffs.items():
            term = power(unit, k).shift((k,)).scale(c)
            for e, val in term.coeffs.items():
                out[e] = out.get(e, 0) + val
        return Series.polynomial(var, out)
    unit_inv = series_invert(unit, reach - v) if v < 0 else None
    window = Window((min(0, v),), (reach,))
    out: dict = {}
    for (k,), c in sorted(f.coeffs.items()):
        if k >= reach:
            continue
        if k >= 0:
            term = power(unit, k, reach - k)
        else:
            term = power(unit_inv, -k, reach - k)
        for (d,), val in term.coeffs.items():
            if d + k < reach:
                out[(d + k,)] = out.get((d + k,), 0) + c * val
    return Series(var, out, window)


def compositional_inverse(phi: Series, order: int) -> Series:
    """psi with phi(psi(x)) = x, exact through degree ``order`` inclusive."""
    phi._need_univariate()
    if phi.coefficient((0,)) != 0 or phi.coefficient((1,)) == 0:
        raise ValueError("compositional inverse needs phi = c1 x + ... with c1 != 0")
    if phi.hi < order + 1:
        raise WindowError(f"phi is exact below degree {phi.hi}; order {order} needs {order + 1}")
    c1 = phi.coefficient((1,))
    coeffs = {1: 1 / c1}
    for m in range(2, order + 1):
        psi = Series.univariate(coeffs, lo=0, hi=m + 1, var=phi.vars[0])
        err = compose(phi.truncate(m + 1), psi, hi=m + 1).coefficient((m,))
        if err:
            coeffs[m] = -err / c1
    return Series.univariate(coeffs, lo=0, hi=order + 1, var=phi.vars[0])


def divide_by_diag(h, x: str = "x", y: str = "y"):
    """Exact quotient h / (x - y) for a Series or TensorSeries vanishing on x = y."""
    ix, iy = h.vars.index(x), h.vars.index(y)
    if isinstance(h, Series):
        coeffs, window = divide_dict_by_diag(h.coeffs, h.window, ix, iy)
        return Series(h.vars, coeffs, window)
    return h.map_components(lambda coeffs, window: divide_dict_by_diag(coeffs, window, ix, iy))
