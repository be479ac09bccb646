"""Simple Lie algebra data and tensor calculus on g^{(x)m}-valued series.

Tensors are stored per basis multi-index; the index ``UNIT`` (-1) marks the
unit of U(g) in a leg, so that a (x) 1 and 1 (x) a are ordinary tensors and the
U(g)^{(x)m} commutator needs only one collision slot.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from . import linalg
from .series import (
    INF,
    Series,
    VariableMismatch,
    Window,
    add_dicts,
    as_fraction,
    mul_dicts,
    restrict_dict,
)

UNIT = -1


@dataclass(frozen=True)
class LieAlgebraData:
    name: str
    basis_names: tuple
    brackets: Mapping  # (i, j) -> tuple of (k, c) with [b_i, b_j] = sum c b_k
    killing: tuple  # killing[i][j] = kappa(b_i, b_j)
    dual: tuple = field(default=())  # b^i = sum_j dual[i][j] b_j

    @property
    def dim(self) -> int:
        return len(self.basis_names)

    def structure_constant(self, i, j, k) -> Fraction:
        return dict(self.brackets.get((i, j), ())).get(k, Fraction(0))

    def bracket_vec(self, u: Mapping, v: Mapping) -> dict:
        out: dict = {}
        for i, a in u.items():
            for j, b in v.items():
                for k, c in self.brackets.get((i, j), ()):
                    out[k] = out.get(k, 0) + a * b * c
        return {k: c for k, c in out.items() if c}

    def kappa(self, u: Mapping, v: Mapping) -> Fraction:
        return sum((a * b * self.killing[i][j] for i, a in u.items() for j, b in v.items()), Fraction(0))

    def dual_vector(self, i: int) -> dict:
        return {j: c for j, c in enumerate(self.dual[i]) if c}

    def index(self, name: str) -> int:
        return self.basis_names.index(name)


def _killing_from_brackets(dim, brackets):
    ad = []
    for i in range(dim):
        m = [[Fraction(0)] * dim for _ in range(dim)]
        for j in range(dim):
            for k, c in brackets.get((i, j), ()):
                m[k][j] += c
        ad.append(m)
    killing = []
    for i in range(dim):
        row = []
        for j in range(dim):
            row.append(sum(ad[i][a][b] * ad[j][b][a] for a in range(dim) for b in range(dim)))
        killing.append(tuple(row))
    return tuple(killing)


def lie_from_structure_constants(name: str, basis_names: Sequence[str], constants) -> LieAlgebraData:
    """Build algebra data from entries (i, j, k, c) meaning [b_i, b_j] has c on b_k.

    Only one of (i, j), (j, i) needs to be listed; antisymmetry fills the other.
    """
    dim = len(basis_names)
    table: dict = {}
    for i, j, k, c in constants:
        c = as_fraction(c)
        table.setdefault((i, j), {})[k] = c
        table.setdefault((j, i), {})[k] = -c
    brackets = {key: tuple(sorted((k, c) for k, c in val.items() if c)) for key, val in table.items()}
    brackets = {key: val for key, val in brackets.items() if val}
    killing = _killing_from_brackets(dim, brackets)
    dual = tuple(tuple(row) for row in linalg.inverse(killing))
    return LieAlgebraData(name, tuple(basis_names), brackets, killing, dual)


def _mat_mul(a, b):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def _flatten(m):
    return [v for row in m for v in row]


def lie_from_matrices(name: str, basis_names, matrices) -> LieAlgebraData:
    mats = [[[as_fraction(v) for v in row] for row in m] for m in matrices]
    flat = [_flatten(m) for m in mats]
    ncols = len(flat[0])
    constants = []
    for i, j in itertools.combinations(range(len(mats)), 2):
        ab = _mat_mul(mats[i], mats[j])
        ba = _mat_mul(mats[j], mats[i])
        comm = [x - y for x, y in zip(_flatten(ab), _flatten(ba))]
        coords = linalg.solve_combination(comm, flat, ncols)
        if coords is None:
            raise ValueError("matrices do not span a Lie algebra")
        constants.extend((i, j, k, c) for k, c in coords.items())
    return lie_from_structure_constants(name, basis_names, constants)


def _elementary(n, i, j):
    m = [[0] * n for _ in range(n)]
    m[i][j] = 1
    return m


def sl_matrices(n: int):
    names, mats = [], []
    for i in range(n):
        for j in range(n):
            if i != j:
                names.append(f"E{i + 1}{j + 1}")
                mats.append(_elementary(n, i, j))
    for i in range(n - 1):
        m = [[0] * n for _ in range(n)]
        m[i][i], m[i + 1][i + 1] = 1, -1
        names.append(f"H{i + 1}")
        mats.append(m)
    return names, mats


def sl2() -> LieAlgebraData:
    """sl(2) in the basis e, h, f."""
    e = [[0, 1], [0, 0]]
    h = [[1, 0], [0, -1]]
    f = [[0, 0], [1, 0]]
    return lie_from_matrices("sl2", ("e", "h", "f"), [e, h, f])


def sl3() -> LieAlgebraData:
    names, mats = sl_matrices(3)
    return lie_from_matrices("sl3", names, mats)


def sl_n(n: int) -> LieAlgebraData:
    if n == 2:
        return sl2()
    names, mats = sl_matrices(n)
    return lie_from_matrices(f"sl{n}", names, mats)


def trace_form(matrices):
    mats = [[[as_fraction(v) for v in row] for row in m] for m in matrices]
    return [[sum(_mat_mul(a, b)[k][k] for k in range(len(a))) for b in mats] for a in mats]


_BUILTIN = {"sl2": sl2, "sl3": sl3, "sl4": lambda: sl_n(4)}
_CACHE: dict = {}


def get_lie(name_or_data) -> LieAlgebraData:
    if isinstance(name_or_data, LieAlgebraData):
        return name_or_data
    if name_or_data not in _CACHE:
        if name_or_data not in _BUILTIN:
            raise KeyError(f"unknown Lie algebra {name_or_data!r}")
        _CACHE[name_or_data] = _BUILTIN[name_or_data]()
    return _CACHE[name_or_data]


def lie_from_json(obj: Mapping) -> LieAlgebraData:
    names = obj.get("basis") or [f"b{i}" for i in range(int(obj["dim"]))]
    consts = [(int(i), int(j), int(k), Fraction(c)) for i, j, k, c in obj["structure_constants"]]
    return lie_from_structure_constants(obj.get("name", "custom"), names, consts)


def lie_to_json(lie: LieAlgebraData) -> dict:
    consts = []
    for (i, j), vals in sorted(lie.brackets.items()):
        if i < j:
            consts.extend([i, j, k, str(c)] for k, c in vals)
    return {"name": lie.name, "dim": lie.dim, "basis": list(lie.basis_names), "structure_constants": consts}


class TensorSeries:
    """Element of g^{(x)m} (x) (truncated series) with a common exactness window."""

    __slots__ = ("lie", "arity", "vars", "terms", "window")

    def __init__(self, lie: LieAlgebraData, arity: int, variables, terms: Mapping, window: Window):
        variables = tuple(variables)
        if len(variables) != window.nvars:
            raise VariableMismatch("window dimension does not match variables")
        clean = {}
        for idx, coeffs in terms.items():
            idx = tuple(idx)
            if len(idx) != arity:
                raise ValueError(f"basis index {idx} does not have arity {arity}")
            comp = {}
            for e, c in coeffs.items():
                c = as_fraction(c)
                if c and window.contains(e):
                    if not window.in_support_range(e):
                        raise ValueError(f"exponent {e} below window lower bound")
                    comp[tuple(e)] = c
            if comp:
                clean[idx] = comp
        self.lie = lie
        self.arity = arity
        self.vars = variables
        self.terms = clean
        self.window = window

    @classmethod
    def _raw(cls, lie, arity, variables, terms, window):
        obj = cls.__new__(cls)
        obj.lie, obj.arity, obj.vars, obj.window = lie, arity, tuple(variables), window
        obj.terms = {k: v for k, v in terms.items() if v}
        return obj

    @classmethod
    def zero(cls, lie, arity, variables, window: Window | None = None):
        variables = tuple(variables)
        if window is None:
            window = Window.exact([0] * len(variables))
        return cls._raw(lie, arity, variables, {}, window)

    @classmethod
    def from_series(cls, lie, idx, series: Series, scale=1):
        scale = as_fraction(scale)
        terms = {tuple(idx): {e: c * scale for e, c in series.coeffs.items()}}
        return cls._raw(lie, len(idx), series.vars, terms, series.window)

    @classmethod
    def from_vector(cls, lie, vec: Mapping, series: Series):
        """sum_i vec[i] b_i (x) series, arity 1."""
        terms = {(i,): {e: c * v for e, c in series.coeffs.items()} for i, v in vec.items() if v}
        return cls._raw(lie, 1, series.vars, terms, series.window)

    # access
    def component(self, idx) -> Series:
        return Series(self.vars, self.terms.get(tuple(idx), {}), self.window)

    def coefficient(self, idx, e) -> Fraction:
        return self.component(idx).coefficient(e)

    def is_zero(self) -> bool:
        return not self.terms

    def items(self):
        """Canonically ordered (index, exponents, value) triples."""
        out = []
        for idx in sorted(self.terms):
            for e in sorted(self.terms[idx]):
                out.append((idx, e, self.terms[idx][e]))
        return out

    def first_nonzero(self):
        items = self.items()
        return items[0] if items else None

    def _check(self, other: "TensorSeries"):
        if self.arity != other.arity:
            raise ValueError(f"arity {self.arity} vs {other.arity}")
        if self.vars != other.vars:
            raise VariableMismatch(f"variables {self.vars} vs {other.vars}")

    # arithmetic
    def __add__(self, other: "TensorSeries") -> "TensorSeries":
        self._check(other)
        window = self.window.intersect(other.window)
        terms = {}
        for idx in set(self.terms) | set(other.terms):
            terms[idx] = add_dicts(self.terms.get(idx, {}), other.terms.get(idx, {}), window)
        return TensorSeries._raw(self.lie, self.arity, self.vars, terms, window)

    def __neg__(self):
        terms = {idx: {e: -c for e, c in comp.items()} for idx, comp in self.terms.items()}
        return TensorSeries._raw(self.lie, self.arity, self.vars, terms, self.window)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "TensorSeries":
        c = as_fraction(c)
        if not c:
            return TensorSeries._raw(self.lie, self.arity, self.vars, {}, self.window)
        terms = {idx: {e: v * c for e, v in comp.items()} for idx, comp in self.terms.items()}
        return TensorSeries._raw(self.lie, self.arity, self.vars, terms, self.window)

    def __rmul__(self, c):
        return self.scale(c)

    def mul_series(self, s: Series) -> "TensorSeries":
        """Multiply every component by a scalar series in the same variables."""
        if s.vars != self.vars:
            raise VariableMismatch(f"variables {self.vars} vs {s.vars}")
        window = self.window.product(s.window)
        terms = {idx: mul_dicts(comp, s.coeffs, window) for idx, comp in self.terms.items()}
        return TensorSeries._raw(self.lie, self.arity, self.vars, terms, window)

    def shift(self, exps) -> "TensorSeries":
        exps = tuple(exps)
        terms = {
            idx: {tuple(a + b for a, b in zip(e, exps)): c for e, c in comp.items()}
            for idx, comp in self.terms.items()
        }
        return TensorSeries._raw(self.lie, self.arity, self.vars, terms, self.window.shifted(exps))

    def truncate(self, hi=None, total=None) -> "TensorSeries":
        window = self.window.capped(hi, total)
        terms = {idx: restrict_dict(comp, window) for idx, comp in self.terms.items()}
        return TensorSeries._raw(self.lie, self.arity, self.vars, terms, window)

    def restrict_to(self, window: Window) -> "TensorSeries":
        window = Window(self.window.lo, window.hi, window.total).intersect(self.window)
        return self.truncate(window.hi, window.total)

    def map_components(self, fn) -> "TensorSeries":
        """Apply fn(coeffs, window) -> (coeffs, window) to every component."""
        terms = {}
        window = None
        for idx, comp in self.terms.items():
            terms[idx], window = fn(comp, self.window)
        if window is None:
            _, window = fn({}, self.window)
        return TensorSeries._raw(self.lie, self.arity, self.vars, terms, window)

    def embed(self, variables, mapping: Mapping[str, str] | None = None) -> "TensorSeries":
        variables = tuple(variables)
        mapping = dict(mapping or {v: v for v in self.vars})
        pos = [variables.index(mapping[v]) for v in self.vars]
        lo = [0] * len(variables)
        hi = [INF] * len(variables)
        for src, dst in enumerate(pos):
            lo[dst] = self.window.lo[src]
            hi[dst] = self.window.hi[src]
        terms = {}
        for idx, comp in self.terms.items():
            new = {}
            for e, c in comp.items():
                ne = [0] * len(variables)
                for src, dst in enumerate(pos):
                    ne[dst] = e[src]
                new[tuple(ne)] = c
            terms[idx] = new
        window = Window(tuple(lo), tuple(hi), self.window.total)
        return TensorSeries._raw(self.lie, self.arity, variables, terms, window)

    def embed_legs(self, arity: int, slots: Sequence[int]) -> "TensorSeries":
        """Place leg k into output slot slots[k]; remaining slots carry the unit."""
        terms = {}
        for idx, comp in self.terms.items():
            new = [UNIT] * arity
            for k, s in enumerate(slots):
                new[s] = idx[k]
            terms[tuple(new)] = dict(comp)
        return TensorSeries._raw(self.lie, arity, self.vars, terms, self.window)

    def permute_legs(self, order: Sequence[int]) -> "TensorSeries":
        """Output leg k carries input leg order[k]."""
        terms = {tuple(idx[i] for i in order): dict(comp) for idx, comp in self.terms.items()}
        return TensorSeries._raw(self.lie, self.arity, self.vars, terms, self.window)

    def permute_variables(self, order: Sequence[int]) -> "TensorSeries":
        """Output variable slot k carries the exponent of input slot order[k]."""
        terms = {
            idx: {tuple(e[i] for i in order): c for e, c in comp.items()}
            for idx, comp in self.terms.items()
        }
        return TensorSeries._raw(self.lie, self.arity, self.vars, terms, self.window.permuted(order))

    def equal_on_window(self, other: "TensorSeries") -> bool:
        return (self - other).is_zero()

    def __repr__(self):
        names = self.lie.basis_names

        def leg(i):
            return "1" if i == UNIT else names[i]
        parts = []
        for idx, e, c in self.items()[:12]:
            mono = "*".join(f"{v}^{k}" for v, k in zip(self.vars, e) if k) or "1"
            parts.append(f"({c}){'(x)'.join(leg(i) for i in idx)}*{mono}")
        more = " + ..." if len(self.items()) > 12 else ""
        return f"TensorSeries[{' + '.join(parts) or '0'}{more}; window={self.window}]"


def constant_tensor(lie, entries: Mapping, variables=("x", "y")) -> TensorSeries:
    """Constant tensor from {basis index tuple: coefficient}."""
    variables = tuple(variables)
    zero = (0,) * len(variables)
    arity = len(next(iter(entries))) if entries else 2
    terms = {tuple(idx): {zero: c} for idx, c in entries.items()}
    return TensorSeries(lie, arity, variables, terms, Window.exact(zero))


def casimir(lie: LieAlgebraData, variables=("x", "y")) -> TensorSeries:
    """Omega = sum_i b_i (x) b^i as a constant arity-2 tensor."""
    entries = {}
    for i in range(lie.dim):
        for j, c in enumerate(lie.dual[i]):
            if c:
                entries[(i, j)] = entries.get((i, j), 0) + c
    return constant_tensor(lie, entries, variables)


def commutator(a: TensorSeries, b: TensorSeries) -> TensorSeries:
    """[A, B] in U(g)^{(x)m} for tensors sharing at most one non-unit slot per term pair."""
    a._check(b)
    lie = a.lie
    window = a.window.product(b.window)
    out: dict = {}
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            collisions = [p for p in range(a.arity) if ia[p] != UNIT and ib[p] != UNIT]
            if not collisions:
                continue
            if len(collisions) > 1:
                raise ValueError("bracket leaves g^{(x)m}: more than one collision slot")
            p = collisions[0]
            consts = lie.brackets.get((ia[p], ib[p]))
            if not consts:
                continue
            prod = mul_dicts(ca, cb, window)
            if not prod:
                continue
            base = [ia[q] if ia[q] != UNIT else ib[q] for q in range(a.arity)]
            for k, c in consts:
                base[p] = k
                key = tuple(base)
                target = out.setdefault(key, {})
                for e, v in prod.items():
                    target[e] = target.get(e, 0) + c * v
    terms = {idx: {e: c for e, c in comp.items() if c} for idx, comp in out.items()}
    return TensorSeries._raw(lie, a.arity, a.vars, terms, window)


def tensor_bracket(a: TensorSeries, slots_a, b: TensorSeries, slots_b, arity: int) -> TensorSeries:
    """Embed the legs of a and b into ``arity`` slots and take the commutator.

    The layouts must overlap in exactly one slot (the collision slot).
    """
    shared = set(slots_a) & set(slots_b)
    if len(shared) != 1 or len(set(slots_a)) != len(slots_a) or len(set(slots_b)) != len(slots_b):
        raise ValueError("malformed leg embedding: need exactly one shared slot")
    return commutator(a.embed_legs(arity, slots_a), b.embed_legs(arity, slots_b))


def tau_flip(a: TensorSeries) -> TensorSeries:
    if a.arity != 2:
        raise ValueError("tau_flip needs an arity-2 tensor")
    return a.permute_legs((1, 0))


def _sign(perm) -> int:
    sign = 1
    perm = list(perm)
    for i in range(len(perm)):
        while perm[i] != i:
            j = perm[i]
            perm[i], perm[j] = perm[j], perm[i]
            sign = -sign
    return sign


def permute_lockstep(a: TensorSeries, perm) -> TensorSeries:
    """Output leg k and output variable k both come from input position perm[k]."""
    return a.permute_legs(perm).permute_variables(perm)


def alt(a: TensorSeries) -> TensorSeries:
    """Signed sum over permutations acting on legs and variables together."""
    m = a.arity
    if m != 3 and m != 4:
        raise ValueError("alt is implemented for arity 3 and 4")
    if len(a.vars) != m:
        raise ValueError("alt needs one variable per leg")
    out = None
    for perm in itertools.permutations(range(m)):
        term = permute_lockstep(a, perm)
        if _sign(perm) < 0:
            term = -term
        out = term if out is None else out + term
    return out


def act_diagonally(lie, vec: Mapping, exps_per_leg, t: TensorSeries) -> TensorSeries:
    """[a (x) 1 ... + ... + 1 ... (x) a, t] for a = vec * x_leg^{m} placed on each leg in turn."""
    out = TensorSeries.zero(lie, t.arity, t.vars, t.window)
    for leg in range(t.arity):
        e = [0] * len(t.vars)
        e[leg] = exps_per_leg
        mono = Series.monomial(t.vars, e)
        a = TensorSeries.from_vector(lie, vec, mono).embed_legs(t.arity, [leg])
        out = out + commutator(a, t)
    return out
