"""Yang-Baxter residuals, quasi-Lie bialgebra data (delta, phi) and twisting.

Triple products are never expanded directly.  With R(x, y) = (x - y) r(x, y),
which is a power series for every (n, s)-type series,

    D * CYB(r) = (x2 - x3)[R12, R13] + (x1 - x3)[R12, R23] + (x1 - x2)[R13, R23]

where D = (x1 - x2)(x1 - x3)(x2 - x3).  The right hand side P is a power
series with an honest exactness window, CYB(r) vanishes iff P does, and the
expansion of CYB(r) in the region |x1| > |x2| > |x3| is the expansion of P / D.
CYB(r) is itself a power series exactly when D divides P, which is decided by
three exact diagonal divisions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping

from . import linalg
from .lie import LieAlgebraData, TensorSeries, act_diagonally, alt, casimir, commutator, tau_flip
from .manin import AlphaData, LnElement, build_truncated_model, form_B
from .ns_series import XY, NSSeries, coefficients, is_skew, lift_projection, swap_xy, w_subspace
from .report import CheckReport, verdict
from .series import DiagonalError, Series, Window, WindowError, divide_by_diag

X3 = ("x1", "x2", "x3")
X4 = ("x1", "x2", "x3", "x4")


class PoleError(ValueError):
    """A quantity that should be a power series has a pole on a diagonal."""


def numerator(r: NSSeries) -> TensorSeries:
    """R(x, y) = s(x) y^n Omega + (x - y) g(x, y)."""
    lie = r.lie
    sing = casimir(lie, XY).mul_series(r.s.embed(XY, {"x": "x"}).shift((0, r.n)))
    diff = Series.polynomial(XY, {(1, 0): 1, (0, 1): -1})
    return sing + r.g.mul_series(diff)


def bar_numerator(r: NSSeries) -> TensorSeries:
    """(x - y) rbar(x, y) = tau(R(y, x))."""
    return tau_flip(swap_xy(numerator(r)))


def _as_ns(r, n: int | None) -> NSSeries:
    if isinstance(r, NSSeries):
        return r
    if isinstance(r, TensorSeries):
        if n is None:
            raise ValueError("a projected series needs its type n")
        return lift_projection(r, n)
    raise TypeError("expected an NSSeries or a projected TensorSeries")


def _place(t: TensorSeries, legs, variables, names=X3) -> TensorSeries:
    arity = len(names)
    mapping = {v: names[k] for v, k in zip(t.vars, variables)}
    return t.embed(names, mapping).embed_legs(arity, legs)


def _linear(names, a: int, b: int) -> Series:
    e_a = tuple(int(k == a) for k in range(len(names)))
    e_b = tuple(int(k == b) for k in range(len(names)))
    return Series.polynomial(names, {e_a: 1, e_b: -1})


def triple_numerator(R: TensorSeries, R_third: TensorSeries | None = None) -> TensorSeries:
    """P = D * ([r12, r13] + [r12, r23] + [r13, r23']) for numerators R, R'."""
    r12 = _place(R, (0, 1), (0, 1))
    r13 = _place(R, (0, 2), (0, 2))
    r23 = _place(R, (1, 2), (1, 2))
    r23_third = r23 if R_third is None else _place(R_third, (1, 2), (1, 2))
    return (
        commutator(r12, r13).mul_series(_linear(X3, 1, 2))
        + commutator(r12, r23).mul_series(_linear(X3, 0, 2))
        + commutator(r13, r23_third).mul_series(_linear(X3, 0, 1))
    )


def divide_by_vandermonde(P: TensorSeries) -> TensorSeries:
    """P / ((x1 - x2)(x1 - x3)(x2 - x3)); raises PoleError when D does not divide P."""
    try:
        q = divide_by_diag(P, "x1", "x2")
        q = divide_by_diag(q, "x1", "x3")
        return divide_by_diag(q, "x2", "x3")
    except DiagonalError as exc:
        raise PoleError(f"residual has a pole on a diagonal: {exc}") from exc


@dataclass
class TripleExpansion:
    """CYB-type residual, stored through its polynomial numerator P = D * residual."""

    numerator: TensorSeries
    kind: str
    provenance: dict = field(default_factory=lambda: {
        "regions": ["1/(x1-x2): powers of x2", "1/(x1-x3): powers of x3", "1/(x2-x3): powers of x3"],
        "assumption": "projection computation stands in for the computation in A3(n, alpha)",
    })
    _quotient: TensorSeries | None = field(default=None, repr=False)
    _pole: str | None = field(default=None, repr=False)

    @property
    def window(self) -> Window:
        return self.numerator.window

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def power_series(self) -> TensorSeries:
        """The residual as a power series; PoleError if it has a pole."""
        if self._quotient is None and self._pole is None:
            try:
                self._quotient = divide_by_vandermonde(self.numerator)
            except PoleError as exc:
                self._pole = str(exc)
        if self._pole is not None:
            raise PoleError(self._pole)
        return self._quotient

    def is_pole_free(self) -> bool:
        try:
            self.power_series()
        except PoleError:
            return False
        return True

    def laurent_coefficient(self, idx, exps) -> Fraction:
        """Coefficient of x1^a x2^b x3^c in the region expansion of P / D."""
        a, b, c = exps
        P = self.numerator
        comp = P.terms.get(tuple(idx), {})
        total = Fraction(0)
        for k2 in range(c + 1):
            for k3 in range(c - k2 + 1):
                for k1 in range(b + 2 + k3):
                    e = (a + 2 + k1 + k2, b + 1 - k1 + k3, c - k2 - k3)
                    if not P.window.contains(e):
                        raise WindowError(f"numerator coefficient {e} is not certified")
                    total += comp.get(e, 0)
        return total

    def report(self) -> CheckReport:
        name = self.kind
        w = self.window
        certified = 0 if w.total <= 0 else 1
        details = {"numerator_total_degree_below": w.total, "provenance": self.provenance}
        if self.is_zero():
            return verdict(name, [], certified, window=w.to_json(), details=details)
        idx, e, c = self.numerator.first_nonzero()
        example = {"basis": list(idx), "exponents": list(e), "value": c, "of": "numerator D*residual"}
        try:
            q = self.power_series()
            qi, qe, qc = q.first_nonzero()
            example = {"basis": list(qi), "exponents": list(qe), "value": qc, "of": "residual"}
        except (PoleError, TypeError):
            pass
        return verdict(name, [example], certified, window=w.to_json(), details=details)


def cyb(r, lie: LieAlgebraData | None = None, n: int | None = None) -> TripleExpansion:
    """CYB(r) = [r12, r13] + [r12, r23] + [r13, r23]."""
    r = _as_ns(r, n)
    return TripleExpansion(triple_numerator(numerator(r)), "cybe")


def gcyb(r, lie: LieAlgebraData | None = None, n: int | None = None) -> TripleExpansion:
    """[r12, r13] + [r12, r23] + [r13, rbar23]."""
    r = _as_ns(r, n)
    return TripleExpansion(triple_numerator(numerator(r), bar_numerator(r)), "gcybe")


def cyb_polynomial(s: TensorSeries) -> TensorSeries:
    """CYB of a power-series two-tensor (no singular part), in (x1, x2, x3)."""
    s12 = _place(s, (0, 1), (0, 1))
    s13 = _place(s, (0, 2), (0, 2))
    s23 = _place(s, (1, 2), (1, 2))
    return commutator(s12, s13) + commutator(s12, s23) + commutator(s13, s23)


def phi_of(r, lie: LieAlgebraData | None = None, n: int | None = None, check_skew: bool = True) -> TensorSeries:
    """phi = -CYB(r) as a power series in (x1, x2, x3)."""
    r = _as_ns(r, n)
    if check_skew:
        ok, _ = is_skew(r)
        if not ok:
            raise ValueError("phi_of needs a skew-symmetric series")
    return -cyb(r).power_series()


# delta

def delta_of(r, vec: Mapping, m: int, lie: LieAlgebraData | None = None, n: int | None = None,
             R: TensorSeries | None = None) -> TensorSeries:
    """delta(a) = -[a (x) 1 + 1 (x) a, r] for a = sum vec_i b_i x^m."""
    r = _as_ns(r, n)
    R = numerator(r) if R is None else R
    act = act_diagonally(r.lie, vec, m, R)
    try:
        return -divide_by_diag(act)
    except DiagonalError as exc:
        raise PoleError(f"delta(a) has a pole: {exc}") from exc


class DeltaTable:
    """delta tabulated lazily on generators b_i x^m, extended linearly."""

    def __init__(self, lie: LieAlgebraData, generator: Callable[[int, int], TensorSeries], label: str = ""):
        self.lie = lie
        self._generator = generator
        self._cache: dict = {}
        self.label = label

    @classmethod
    def from_series(cls, r: NSSeries) -> "DeltaTable":
        R = numerator(r)
        return cls(r.lie, lambda i, m: delta_of(r, {i: 1}, m, R=R), "delta_r")

    def twisted(self, s: TensorSeries) -> "DeltaTable":
        """delta + ds with ds(a) = [a (x) 1 + 1 (x) a, s]."""
        s = _rename(s, XY)

        def gen(i, m):
            return self.basis(i, m) + act_diagonally(self.lie, {i: 1}, m, s)
        return DeltaTable(self.lie, gen, self.label + "+ds")

    def basis(self, i: int, m: int) -> TensorSeries:
        key = (i, m)
        if key not in self._cache:
            self._cache[key] = self._generator(i, m)
        return self._cache[key]

    def __call__(self, vec: Mapping, m: int) -> TensorSeries:
        out = None
        for i, c in sorted(vec.items()):
            if not c:
                continue
            term = self.basis(i, m).scale(c)
            out = term if out is None else out + term
        if out is None:
            out = self.basis(0, m).scale(0)
        return out


def _rename(t: TensorSeries, names) -> TensorSeries:
    if t.vars == tuple(names):
        return t
    return t.embed(names, dict(zip(t.vars, names)))


@dataclass
class QuasiBialgebraData:
    delta_table: DeltaTable
    phi: TensorSeries


def quasi_bialgebra_data(r: NSSeries) -> QuasiBialgebraData:
    return QuasiBialgebraData(DeltaTable.from_series(r), phi_of(r))


def apply_delta_first(table: DeltaTable, t: TensorSeries) -> TensorSeries:
    """(delta (x) 1 (x) ...)(t): the first leg of t is replaced by delta of it."""
    arity = t.arity + 1
    names = X4[:arity] if arity <= 4 else tuple(f"x{k + 1}" for k in range(arity))
    w = t.window
    if w.lo[0] < 0:
        raise ValueError("delta acts on power series only")
    rest_val = sum(w.lo[1:])
    out: dict = {}
    d_hi = [w.hi[0] - 1, w.hi[0] - 1]
    d_total = w.total - 1
    if w.hi[0] - 1 + rest_val < d_total:
        d_total = w.hi[0] - 1 + rest_val
    for idx, comp in t.terms.items():
        i, rest_idx = idx[0], idx[1:]
        for e, c in comp.items():
            p, rest_e = e[0], e[1:]
            d = table.basis(i, p)
            dw = d.window
            d_hi = [min(d_hi[0], dw.hi[0]), min(d_hi[1], dw.hi[1])]
            d_total = min(d_total, dw.total + rest_val)
            for didx, dcomp in d.terms.items():
                key = didx + rest_idx
                target = out.setdefault(key, {})
                for de, dc in dcomp.items():
                    ne = de + rest_e
                    target[ne] = target.get(ne, 0) + c * dc
    # generators outside the support still bound certification through their windows
    if not t.terms:
        d = table.basis(0, max(0, w.lo[0]))
        d_hi = [min(d_hi[0], d.window.hi[0]), min(d_hi[1], d.window.hi[1])]
        d_total = min(d_total, d.window.total + rest_val)
    lo = (0, 0) + tuple(w.lo[1:])
    hi = tuple(max(h, 0) for h in d_hi) + tuple(w.hi[1:])
    window = Window(lo, hi, d_total)
    return TensorSeries(t.lie, arity, names, out, window)


def cocycle_residual(table: DeltaTable, a: tuple, b: tuple) -> TensorSeries:
    """delta([a,b]) - [a (x) 1 + 1 (x) a, delta(b)] + [b (x) 1 + 1 (x) b, delta(a)].

    Generators are pairs (vec, m) meaning sum vec_i b_i x^m.
    """
    lie = table.lie
    (va, ma), (vb, mb) = a, b
    ab = lie.bracket_vec(va, vb)
    lhs = table(ab, ma + mb)
    da, db = table(va, ma), table(vb, mb)
    return lhs - act_diagonally(lie, va, ma, db) + act_diagonally(lie, vb, mb, da)


def quasi_jacobi_residual(table: DeltaTable, phi: TensorSeries, a: tuple) -> TensorSeries:
    """1/2 Alt((delta (x) 1) delta(a)) - [a (x) 1 (x) 1 + ..., phi]."""
    vec, m = a
    da = _rename(table(vec, m), XY)
    dd = apply_delta_first(table, da)
    left = alt(dd).scale(Fraction(1, 2))
    right = act_diagonally(table.lie, vec, m, _rename(phi, X3))
    return left - right


def alt_delta_phi_residual(table: DeltaTable, phi: TensorSeries) -> TensorSeries:
    """Alt((delta (x) 1 (x) 1) phi), arity 4."""
    return alt(apply_delta_first(table, _rename(phi, X3)))


# twisting

def is_skew_tensor(s: TensorSeries) -> bool:
    """s(x, y) = -tau(s(y, x))."""
    return (s + tau_flip(swap_xy(s))).is_zero()


def twist_series(r: NSSeries, s_twist: TensorSeries) -> NSSeries:
    """r - s: the singular part is untouched."""
    s_twist = _rename(s_twist, XY)
    if not is_skew_tensor(s_twist):
        raise ValueError("twist tensor is not skew-symmetric")
    if min(s_twist.window.lo) < 0:
        raise ValueError("twist tensor must be a power series")
    return r.with_g(r.g - s_twist)


def twist_subspace(w_basis, s_twist: TensorSeries, alpha: AlphaData, lie: LieAlgebraData) -> list[LnElement]:
    """{sum_i B(b^i, w) a_i - w} for s = sum_i a_i (x) b^i (second leg paired with w)."""
    s_twist = _rename(s_twist, XY)
    n = alpha.n
    legs: dict = {}
    for (p, q), comp in s_twist.terms.items():
        for (e1, e2), c in comp.items():
            legs.setdefault((q, e2), []).append((p, e1, c))
    pairing_elems = {}
    for (q, e2) in legs:
        mono = TensorSeries.from_vector(lie, {q: 1}, Series.monomial(("x",), (e2,)))
        pairing_elems[(q, e2)] = LnElement.diagonal(lie, n, mono)
    out = []
    for w in w_basis:
        acc = -w
        for key, targets in sorted(legs.items()):
            val = form_B(alpha, lie, pairing_elems[key], w)
            if not val:
                continue
            for p, e1, c in targets:
                mono = TensorSeries.from_vector(lie, {p: 1}, Series.monomial(("x",), (e1,)))
                acc = acc + LnElement.diagonal(lie, n, mono).scale(val * c)
        out.append(acc)
    return out


def random_skew_twist(lie: LieAlgebraData, rng, max_degree: int = 2, coeff_range: int = 2,
                      terms: int = 3) -> TensorSeries:
    """A random skew polynomial two-tensor.

    Sums ``terms`` elementary skew tensors c (b_i x^a (x) b_j y^b - b_j x^b (x) b_i y^a)
    with a, b <= max_degree and c in [-coeff_range, coeff_range].
    """
    acc: dict = {}
    for _ in range(terms):
        i, j = rng.randrange(lie.dim), rng.randrange(lie.dim)
        a, b = rng.randint(0, max_degree), rng.randint(0, max_degree)
        c = Fraction(rng.randint(-coeff_range, coeff_range))
        for key, e, sign in (((i, j), (a, b), 1), ((j, i), (b, a), -1)):
            comp = acc.setdefault(key, {})
            comp[e] = comp.get(e, 0) + sign * c
    terms_clean = {k: {e: c for e, c in v.items() if c} for k, v in acc.items()}
    terms_clean = {k: v for k, v in terms_clean.items() if v}
    return TensorSeries(lie, 2, XY, terms_clean, Window.exact((0, 0)))


def twist_delta_phi(data: QuasiBialgebraData, s_twist: TensorSeries, convention: str = "phi") -> QuasiBialgebraData:
    """Twisted pair (delta_s, phi_s) for r -> r - s.

    delta_s = delta + ds.  With phi = -CYB(r) (the sign fixed by the quasi-Jacobi
    identity) the cubic part transforms as phi_s = phi - CYB(s) + 1/2 Alt((delta (x) 1) s).
    ``convention="cyb"`` treats ``data.phi`` as CYB(r) instead, for which the
    rule reads phi_s = phi + CYB(s) - 1/2 Alt((delta (x) 1) s).
    """
    s_twist = _rename(s_twist, XY)
    table = data.delta_table.twisted(s_twist)
    correction = alt(apply_delta_first(data.delta_table, s_twist)).scale(Fraction(1, 2))
    change = cyb_polynomial(s_twist) - correction
    if convention == "phi":
        phi = _rename(data.phi, X3) - change
    elif convention == "cyb":
        phi = _rename(data.phi, X3) + change
    else:
        raise ValueError("convention must be 'phi' or 'cyb'")
    return QuasiBialgebraData(table, phi)


# subalgebra test

def subalgebra_residual(r: NSSeries, alpha: AlphaData, K: int, k_max: int | None = None,
                        with_gcyb: bool = True) -> CheckReport:
    """Is W(r) closed under the bracket?  Decided pairwise in the K-model.

    Brackets whose Laurent part leaves the model window count as untested.
    """
    lie = r.lie
    model = build_truncated_model(alpha, lie, K)
    k_max = K + r.n if k_max is None else k_max
    span_table = coefficients(r, K + r.n)
    rows = [model.coords(v) for v in span_table.vectors()]
    space = linalg.RowSpace(rows, model.dim)
    table = coefficients(r, k_max)
    keys = sorted(table.rows)
    failures, certified, untested = [], 0, 0
    for a_pos, ka in enumerate(keys):
        for kb in keys[a_pos + 1:]:
            u = table.rows[ka].bracket(table.rows[kb])
            try:
                vec = model.coords(u)
            except WindowError:
                untested += 1
                continue
            certified += 1
            if not space.contains(vec):
                if len(failures) < 5:
                    failures.append({"f": list(ka), "g": list(kb), "bracket": u.to_json()})
    details = {"pairs_out_of_window": untested}
    if with_gcyb:
        g = gcyb(r)
        g_closed = g.is_zero()
        details["gcyb_zero"] = g_closed
        details["verdicts_agree"] = g_closed == (not failures)
    rep = verdict("subalgebra", failures, certified, untested, window={"K": K, "k_max": k_max},
                  details=details)
    return rep


def twist_coherence_check(r: NSSeries, alpha: AlphaData, s_twist: TensorSeries, K: int = 5,
                          m_max: int = 2) -> CheckReport:
    """Compares the twisted data of r with the data of r - s.

    Three parts: W(r)_s = W(r - s) as row spaces in the K-model, delta_s = delta + ds
    on generators b_i x^m (m <= m_max), and the phi transformation rule.
    """
    lie = r.lie
    s_twist = _rename(s_twist, XY)
    twisted = twist_series(r, s_twist)
    failures: list = []
    certified = 0
    model = build_truncated_model(alpha, lie, K)
    left = [model.coords(v) for v in twist_subspace(w_subspace(r, K), s_twist, alpha, lie)]
    right = [model.coords(v) for v in w_subspace(twisted, K)]
    if linalg.row_space_equal(left, right, model.dim):
        certified += 1
    else:
        failures.append({"part": "W(r)_s = W(r - s)"})
    data = quasi_bialgebra_data(r) if is_skew(r)[0] else QuasiBialgebraData(DeltaTable.from_series(r), None)
    table_s = DeltaTable.from_series(twisted)
    table_rule = data.delta_table.twisted(s_twist)
    for i in range(lie.dim):
        for m in range(m_max + 1):
            diff = table_s.basis(i, m) - table_rule.basis(i, m)
            if not diff.is_zero():
                idx, e, c = diff.first_nonzero()
                failures.append({"part": "delta_s = delta + ds", "generator": [i, m],
                                 "basis": list(idx), "exponents": list(e), "value": c})
                break
            certified += 1
    if data.phi is not None:
        rule = twist_delta_phi(data, s_twist).phi
        diff = phi_of(twisted) - rule
        if diff.is_zero():
            certified += 1
        else:
            idx, e, c = diff.first_nonzero()
            failures.append({"part": "phi_s rule", "basis": list(idx), "exponents": list(e), "value": c})
    return verdict("twist_coherence", failures, certified, window={"K": K, "m_max": m_max})
