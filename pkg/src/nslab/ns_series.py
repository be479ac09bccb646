"""Series of type (n, s): r(x, y) = s(x) y^n Omega / (x - y) + g(x, y).

The singular part is never expanded here; it is carried symbolically by n and
s, and only the regular part g is stored as a truncated tensor series.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from . import linalg
from .lie import LieAlgebraData, TensorSeries, casimir, tau_flip
from .manin import AlphaData, LnElement, TruncatedModel, build_truncated_model, complementarity_rank, form_B
from .report import CheckReport, verdict
from .series import INF, Series, Window, WindowError, as_fraction, divide_by_diag

XY = ("x", "y")


@dataclass(frozen=True)
class NSSeries:
    lie: LieAlgebraData
    n: int
    s: Series
    g: TensorSeries

    def __post_init__(self):
        if self.s.vars != ("x",):
            raise ValueError("s must be a series in x")
        if self.s.coefficient((0,)) == 0 or self.s.window.lo[0] < 0:
            raise ValueError("s must be a unit power series")
        if self.g.arity != 2 or self.g.vars != XY:
            raise ValueError("g must be an arity-2 tensor series in (x, y)")
        if min(self.g.window.lo) < 0:
            raise ValueError("g must be a power series")

    def s_coeff(self, m: int) -> Fraction:
        if m < 0:
            return Fraction(0)
        return self.s.coefficient((m,))

    def with_g(self, g: TensorSeries) -> "NSSeries":
        return NSSeries(self.lie, self.n, self.s, g)

    def windows(self) -> dict:
        return {"s": self.s.window.to_json(), "g": self.g.window.to_json()}

    def to_json(self) -> dict:
        g_entries = [[idx[0], idx[1], e[0], e[1], str(c)] for idx, e, c in self.g.items()]
        return {
            "n": self.n,
            "lie": self.lie.name,
            "s": {str(e[0]): str(c) for e, c in self.s.items()},
            "g": g_entries,
            "windows": {
                "s_hi": _enc(self.s.window.hi[0]),
                "g_hi": [_enc(h) for h in self.g.window.hi],
                "g_total": _enc(self.g.window.total),
            },
        }

    @classmethod
    def from_json(cls, obj: Mapping, lie: LieAlgebraData) -> "NSSeries":
        n = int(obj["n"])
        win = obj.get("windows", {})
        s_hi = _dec(win.get("s_hi"))
        s = Series.univariate({int(k): Fraction(v) for k, v in obj.get("s", {"0": "1"}).items()}, lo=0, hi=s_hi)
        g_hi = win.get("g_hi", [None, None])
        g_window = Window((0, 0), (_dec(g_hi[0]), _dec(g_hi[1])), _dec(win.get("g_total")))
        terms: dict = {}
        for i, j, kx, ky, c in obj.get("g", []):
            comp = terms.setdefault((int(i), int(j)), {})
            key = (int(kx), int(ky))
            comp[key] = comp.get(key, 0) + Fraction(c)
        g = TensorSeries(lie, 2, XY, terms, g_window)
        return cls(lie, n, s, g)


def _enc(v):
    return None if v == INF else int(v)


def _dec(v):
    return INF if v is None else int(v)


def make_ns_series(lie, n: int, s: Series, g: TensorSeries | None = None) -> NSSeries:
    if g is None:
        g = TensorSeries.zero(lie, 2, XY, Window.exact((0, 0)))
    return NSSeries(lie, n, s, g)


def w_basis(n: int, lie: LieAlgebraData, k: int, i: int) -> LnElement:
    """w_{k,i}: b_i(0, -[x]^{(n-1)-k}) for k < n and b_i(x^{(n-1)-k}, 0) for k >= n."""
    if k < 0 or not 0 <= i < lie.dim:
        raise IndexError("w_basis index out of range")
    if k < n:
        return LnElement.basis_quotient(lie, n, i, n - 1 - k, -1)
    return LnElement.basis_laurent(lie, n, i, n - 1 - k)


def s_times_w(r_or_s, n: int, lie: LieAlgebraData, k: int, i: int) -> LnElement:
    """s * w_{k,i} inside A(n, alpha) (s acts diagonally)."""
    s = r_or_s.s if isinstance(r_or_s, NSSeries) else r_or_s
    if k >= n:
        laurent = TensorSeries.from_vector(lie, {i: 1}, s.shift((n - 1 - k,)))
        return LnElement(lie, n, laurent)
    start = n - 1 - k
    if s.window.hi[0] < k + 1:
        raise WindowError("s not exact enough for the quotient coefficient")
    p = [Fraction(0)] * n
    for d in range(start, n):
        p[d] = -s.coefficient((d - start,))
    return LnElement(lie, n, None, {i: p})


def regular_coefficient(r: NSSeries, k: int, i: int) -> LnElement:
    """g_{k,i}: the diagonal element paired with b^i y^k in g."""
    g = r.g
    lie = r.lie
    if k >= g.window.hi[1] or k >= g.window.total:
        raise WindowError(f"g is not certified at y-degree {k}")
    hi = min(g.window.hi[0], g.window.total - k)
    comps: dict = {}
    for (a, j), comp in g.terms.items():
        kap = lie.killing[j][i]
        if not kap:
            continue
        target = comps.setdefault((a,), {})
        for (p, q), c in comp.items():
            if q == k:
                target[(p,)] = target.get((p,), 0) + c * kap
    f = TensorSeries(lie, 1, ("x",), comps, Window((0,), (hi,)))
    return LnElement.diagonal(lie, r.n, f)


@dataclass
class CoefficientTable:
    n: int
    k_max: int
    rows: dict  # (k, i) -> LnElement

    def vectors(self) -> list[LnElement]:
        return [self.rows[key] for key in sorted(self.rows)]

    def __getitem__(self, key) -> LnElement:
        return self.rows[key]


def coefficients(r: NSSeries, k_max: int) -> CoefficientTable:
    """f_{k,i} = s w_{k,i} + g_{k,i} for 0 <= k < k_max."""
    rows = {}
    for k in range(k_max):
        for i in range(r.lie.dim):
            rows[(k, i)] = s_times_w(r, r.n, r.lie, k, i) + regular_coefficient(r, k, i)
    return CoefficientTable(r.n, k_max, rows)


def _s_of_y(s: Series) -> Series:
    return s.embed(XY, {"x": "y"})


def _s_of_x(s: Series) -> Series:
    return s.embed(XY, {"x": "x"})


def swap_xy(t: TensorSeries) -> TensorSeries:
    """t(y, x): exchange the roles of the two variables (legs untouched)."""
    return t.permute_variables((1, 0))


def _diagonal_reach(window: Window):
    """Degrees m below which the restriction to x = y is certified."""
    lo, hi = window.lo, window.hi
    return min(hi[0] + lo[1], hi[1] + lo[0], window.total)


def normalize_to_ns(h: Series, g: TensorSeries, lie: LieAlgebraData | None = None) -> NSSeries:
    """Rewrite h(x,y) Omega / (x - y) + g as s(x) y^n Omega / (x - y) + g'."""
    lie = lie or g.lie
    if h.vars != XY:
        raise ValueError("h must be a series in (x, y)")
    if min(h.window.lo) < 0:
        raise ValueError("h must be a power series")
    reach = _diagonal_reach(h.window)
    diag: dict = {}
    for (a, b), c in h.coeffs.items():
        if a + b < reach:
            diag[a + b] = diag.get(a + b, 0) + c
    diag = {m: c for m, c in diag.items() if c}
    if not diag:
        raise ValueError("h vanishes on the diagonal to all certified orders")
    n = min(diag)
    s = Series.univariate({m - n: c for m, c in diag.items()}, lo=0, hi=reach - n)
    y_n = Series.monomial(XY, (0, n))
    f = divide_by_diag(h - y_n * _s_of_x(s))
    omega = casimir(lie, XY)
    g_new = omega.mul_series(f) + g
    return NSSeries(lie, n, s, g_new)


def bar(r: NSSeries) -> NSSeries:
    """s(y) x^n Omega / (x - y) - tau(g(y, x)), renormalized to (n, s) form."""
    h = _s_of_y(r.s).shift((r.n, 0))
    flipped = -tau_flip(swap_xy(r.g))
    out = normalize_to_ns(h, flipped, r.lie)
    if out.n != r.n:
        raise AssertionError("bar changed the type")
    return out


def bar_regular_part(r: NSSeries) -> TensorSeries:
    return bar(r).g


def is_skew(r: NSSeries) -> tuple[bool, TensorSeries]:
    """(r == bar(r) on the shared window, residual r - bar(r))."""
    residual = r.g - bar(r).g
    return residual.is_zero(), residual


def gram_ww(n: int, s, k: int, i: int, ell: int, j: int, lie: LieAlgebraData) -> Fraction:
    """Closed form of B(s w_{k,i}, s w_{l,j})."""
    kap = lie.killing[i][j]
    if not kap:
        return Fraction(0)

    def s_at(m):
        if m < 0:
            return Fraction(0)
        if isinstance(s, Series):
            return s.coefficient((m,))
        return as_fraction(s[m]) if m < len(s) else Fraction(0)

    m = k + ell - n + 1
    if 0 <= k <= n - 1 and 0 <= ell <= n - 1 and k + ell >= n - 1:
        return -kap * s_at(m)
    if k >= n and ell >= n:
        return kap * s_at(m)
    return Fraction(0)


def check_s_alpha(r: NSSeries, alpha: AlphaData) -> bool:
    """s * x^n alpha(x) == 1 on the certified window of s."""
    if r.n != alpha.n:
        return False
    prod = r.s * alpha.series().shift((alpha.n,))
    one = Series.constant(1)
    return (prod - one).is_zero()


def _pair_all(alpha, lie, left: CoefficientTable, right: CoefficientTable, target) -> tuple[list, int, int]:
    failures, certified, untested = [], 0, 0
    for (k, i), u in sorted(left.rows.items()):
        for (ell, j), v in sorted(right.rows.items()):
            try:
                val = form_B(alpha, lie, u, v)
            except WindowError:
                untested += 1
                continue
            certified += 1
            want = target(k, i, ell, j)
            if val != want:
                failures.append({"k": k, "i": i, "l": ell, "j": j, "value": val, "expected": want})
    return failures, certified, untested


def orthocomplement_check(r: NSSeries, alpha: AlphaData, k_max: int) -> CheckReport:
    """B(f_{k,i}, fbar_{l,j}) = 0 for all certified pairs with k, l < k_max."""
    if not check_s_alpha(r, alpha):
        raise ValueError("s does not equal 1/(x^n alpha) on its window")
    left = coefficients(r, k_max)
    right = coefficients(bar(r), k_max)
    failures, certified, untested = _pair_all(alpha, r.lie, left, right, lambda *a: 0)
    return verdict("orthocomplement", failures, certified, untested, window={"k_max": k_max})


def dual_basis_check(r: NSSeries, alpha: AlphaData, k_max: int) -> CheckReport:
    """B(s w_{k,i}, b^j (x^l, [x]^l)) = delta_ij delta_kl."""
    if not check_s_alpha(r, alpha):
        raise ValueError("s does not equal 1/(x^n alpha) on its window")
    lie = r.lie
    left = CoefficientTable(r.n, k_max, {
        (k, i): s_times_w(r, r.n, lie, k, i) for k in range(k_max) for i in range(lie.dim)
    })
    right_rows = {}
    for ell in range(k_max):
        for j in range(lie.dim):
            mono = Series.monomial(("x",), (ell,))
            vec = TensorSeries.from_vector(lie, lie.dual_vector(j), mono)
            right_rows[(ell, j)] = LnElement.diagonal(lie, r.n, vec) if r.n else LnElement(lie, 0, vec)
    right = CoefficientTable(r.n, k_max, right_rows)
    failures, certified, untested = _pair_all(
        alpha, lie, left, right, lambda k, i, ell, j: Fraction(int(k == ell and i == j))
    )
    return verdict("dual_basis", failures, certified, untested, window={"k_max": k_max})


def w_subspace(r: NSSeries, K: int) -> list[LnElement]:
    """The vectors f_{k,i}, 0 <= k < K + n, spanning W(r) inside the K-model."""
    return coefficients(r, K + r.n).vectors()


def complementary_check(r: NSSeries, alpha: AlphaData, K: int, model: TruncatedModel | None = None) -> CheckReport:
    model = model or build_truncated_model(alpha, r.lie, K)
    try:
        vectors = w_subspace(r, K)
        ok = complementarity_rank(model, vectors)
    except WindowError as exc:
        return CheckReport("complementary", "insufficient", details={"reason": str(exc)},
                           window={"K": K})
    failures = [] if ok else [{"reason": "Delta_K + W does not span the model"}]
    return verdict("complementary", failures, 1, window={"K": K, "model_dim": model.dim})


def isotropy_check(r: NSSeries, alpha: AlphaData, K: int) -> CheckReport:
    table = coefficients(r, K + r.n)
    failures, certified, untested = _pair_all(alpha, r.lie, table, table, lambda *a: 0)
    return verdict("isotropic", failures, certified, untested, window={"K": K})


def lagrangian_check(r: NSSeries, alpha: AlphaData, K: int) -> CheckReport:
    """W(r) isotropic and complementary to the diagonal in the K-model."""
    comp = complementary_check(r, alpha, K)
    iso = isotropy_check(r, alpha, K)
    failures = []
    if comp.status == "fail":
        failures.append({"part": "complementary", **(comp.counterexample or {})})
    if iso.status == "fail":
        failures.append({"part": "isotropic", **(iso.counterexample or {})})
    certified = iso.certified if comp.status != "insufficient" else 0
    return verdict("lagrangian", failures, certified, iso.untested, window={"K": K},
                   details={"complementary": comp.status, "isotropic": iso.status})


def project_first(r: NSSeries, y_order: int) -> TensorSeries:
    """s(x) Omega sum_{k>=0} x^{-k-1} y^{n+k} + g, truncated below y^{y_order}."""
    lie, n = r.lie, r.n
    s_hi = r.s.window.hi[0]
    omega = casimir(lie, XY)
    kmax = max(0, y_order - n)
    lo_x = min(0, -kmax)
    g = r.g
    total = min(s_hi + n - 1, g.window.total)
    window = Window((lo_x, 0), (g.window.hi[0], min(y_order, g.window.hi[1])), total)
    terms: dict = {}
    for idx, comp in omega.terms.items():
        c0 = comp[(0, 0)]
        target = terms.setdefault(idx, {})
        for k in range(kmax):
            for (j,), sc in r.s.coeffs.items():
                e = (j - k - 1, n + k)
                if window.contains(e):
                    target[e] = target.get(e, 0) + c0 * sc
    for idx, comp in g.terms.items():
        target = terms.setdefault(idx, {})
        for e, c in comp.items():
            if window.contains(e):
                target[e] = target.get(e, 0) + c
    return TensorSeries(lie, 2, XY, terms, window)


def lift_projection(p: TensorSeries, n: int) -> NSSeries:
    """Inverse of project_first: recover (n, s, g) from the projected expansion."""
    lie = p.lie
    diff = Series.polynomial(XY, {(1, 0): 1, (0, 1): -1})
    big = p.mul_series(diff)
    for idx, comp in big.terms.items():
        for e in comp:
            if e[0] < 0:
                raise ValueError("projection does not come from an (n, s)-series")
    window = Window((0, 0), big.window.hi, big.window.total)
    big = TensorSeries(lie, 2, XY, big.terms, window)
    omega = casimir(lie, XY)
    # R(x, y) = s(x) y^n Omega + (x - y) g; read s from the y^n column of the Omega part
    idx0 = next(iter(sorted(omega.terms)))
    c0 = omega.terms[idx0][(0, 0)]
    comp = big.terms.get(idx0, {})
    coeffs = {}
    diag_vals = {}
    reach = _diagonal_reach(window)
    for (a, b), c in comp.items():
        if a + b < reach:
            diag_vals[a + b] = diag_vals.get(a + b, 0) + c
    for m, c in diag_vals.items():
        if c and m >= n:
            coeffs[m - n] = c / c0
    s = Series.univariate(coeffs, lo=0, hi=reach - n)
    singular = omega.mul_series(_s_of_x(s).shift((0, n)))
    g = divide_by_diag(big - singular)
    return NSSeries(lie, n, s, g)


def series_from_subspace(vectors, alpha: AlphaData, lie: LieAlgebraData, k_count: int,
                         s_hi: int | None = None) -> NSSeries:
    """Rebuild the (n, 1/(x^n alpha)) series whose coefficient space is span(vectors).

    ``vectors`` must span W truncated to Laurent valuation >= n - k_count; the
    dual basis v_{k,i} with B(v_{k,i}, b^j (x^l, [x]^l)) = delta is solved
    exactly and g is read off from v_{k,i} - s w_{k,i}.
    """
    n = alpha.n
    vectors = list(vectors)
    keys = [(ell, j) for ell in range(k_count) for j in range(lie.dim)]
    if len(vectors) != len(keys):
        raise ValueError(f"need {len(keys)} spanning vectors, got {len(vectors)}")
    probes = []
    for ell, j in keys:
        mono = Series.monomial(("x",), (ell,))
        vec = TensorSeries.from_vector(lie, lie.dual_vector(j), mono)
        probes.append(LnElement.diagonal(lie, n, vec) if n else LnElement(lie, 0, vec))
    pairing = [[form_B(alpha, lie, v, p) for p in probes] for v in vectors]
    try:
        inv = linalg.inverse(pairing)
    except Exception as exc:  # singular pairing: not complementary
        raise ValueError("vectors do not pair nondegenerately with the diagonal") from exc
    # row ``key`` of the inverse pairing gives v_key = sum_a inv[key][a] vectors[a]
    hi_x = min(v.laurent.window.hi[0] for v in vectors)
    s_hi = hi_x if s_hi is None else s_hi
    s = alpha.s_series(min(s_hi, hi_x + k_count))
    terms: dict = {}
    for col, (k, i) in enumerate(keys):
        v = None
        for a, elem in enumerate(vectors):
            c = inv[col][a]
            if c:
                v = elem.scale(c) if v is None else v + elem.scale(c)
        g_ki = v - s_times_w(s, n, lie, k, i)
        for (a,), comp in g_ki.laurent.terms.items():
            for (p,), c in comp.items():
                if p < 0:
                    raise ValueError(f"dual vector {(k, i)} has a singular regular part: {g_ki}")
        for a in set(g_ki.quotient) | {idx[0] for idx in g_ki.laurent.terms}:
            comp = g_ki.laurent.terms.get((a,), {})
            quot = g_ki.quotient.get(a, (0,) * n)
            if any(comp.get((d,), 0) != quot[d] for d in range(n)):
                raise ValueError("dual vector is not diagonal modulo x^n")
        hi_x = min(hi_x, g_ki.laurent.window.hi[0])
        dual = lie.dual_vector(i)
        for (a,), comp in g_ki.laurent.terms.items():
            for (p,), c in comp.items():
                for j, dj in dual.items():
                    target = terms.setdefault((a, j), {})
                    target[(p, k)] = target.get((p, k), 0) + c * dj
    window = Window((0, 0), (hi_x, k_count))
    g = TensorSeries(lie, 2, XY, terms, window)
    return NSSeries(lie, n, s, g)
