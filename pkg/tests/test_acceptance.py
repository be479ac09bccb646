"""Acceptance criteria 1-11, one test each; every test prints a single PASS/FAIL line.

Run ``python3 tests/test_acceptance.py`` for the bare summary, or
``pytest tests/test_acceptance.py -v -s`` to see the lines under pytest.
"""
import random
import sys
import time

import pytest

from nslab.catalog import (
    borel_decomposition,
    default_precision,
    generalized_r,
    projection_reduction_check,
    quasi_r,
    rescaled_orthocomplement_check,
    skew_solution,
    trivial_decomposition,
)
from nslab.lie import get_lie
from nslab.manin import AlphaData, form_B, residue_identity_table, solve_normalizing_transform
from nslab.ns_series import (
    dual_basis_check,
    gram_ww,
    is_skew,
    lagrangian_check,
    complementary_check,
    make_ns_series,
    orthocomplement_check,
    s_times_w,
)
from nslab.series import Series, compose
from nslab.yang_baxter import (
    DeltaTable,
    alt_delta_phi_residual,
    cyb,
    gcyb,
    phi_of,
    quasi_jacobi_residual,
    random_skew_twist,
    subalgebra_residual,
    twist_coherence_check,
)

SL2 = get_lie("sl2")
CONFIG_MATRIX = [(1, 0), (2, 0), (2, 1), (3, 2), (4, 1)]


def line(number: int, title: str, ok: bool, detail: str = "") -> str:
    text = f"criterion {number:>2} {title}: {'PASS' if ok else 'FAIL'}"
    return text + (f" ({detail})" if detail else "")


def criterion_1():
    yang = make_ns_series(SL2, 0, Series.constant(1))
    expansion = cyb(yang)
    window_ok = expansion.window.total > 6 * 3
    alpha = AlphaData.standard(0)
    ok = (expansion.is_zero() and window_ok and is_skew(yang)[0]
          and complementary_check(yang, alpha, 5).passed and lagrangian_check(yang, alpha, 5).passed)
    return ok, f"CYB window total={expansion.window.total}"


def criterion_2():
    checked = 0
    for n, a0 in CONFIG_MATRIX:
        alpha = AlphaData.standard(n, a0)
        s = alpha.s_series(4 * n + 12)
        for k in range(2 * n + 4):
            for ell in range(2 * n + 4):
                for i in range(SL2.dim):
                    for j in range(SL2.dim):
                        u, v = s_times_w(s, n, SL2, k, i), s_times_w(s, n, SL2, ell, j)
                        if form_B(alpha, SL2, u, v) != gram_ww(n, s, k, i, ell, j, SL2):
                            return False, f"mismatch at n={n} a0={a0} k={k} l={ell} i={i} j={j}"
                        checked += 1
    return True, f"{checked} pairings"


def criterion_3():
    K = 5
    entries = []
    for n in range(5):
        for a0 in ((0, 1) if n >= 2 else (0,)):
            entries.append((f"quasi_r n={n} a0={a0}", quasi_r(n, a0, SL2, default_precision(n, K)), n, a0))
    for kind in ("r0", "r1", "r01"):
        for n in (2, 3):
            for a0 in (0, 1):
                entries.append((f"{kind} n={n} a0={a0}", generalized_r(kind, n, a0, SL2), n, a0))
    certified = 0
    for label, r, n, a0 in entries:
        rep = orthocomplement_check(r, AlphaData.standard(n, a0), K + n)
        if not rep.passed:
            return False, f"{label}: {rep.status}"
        certified += rep.certified
    return True, f"{len(entries)} series, {certified} certified pairings"


def criterion_4():
    for n, a0 in CONFIG_MATRIX:
        alpha = AlphaData.standard(n, a0)
        r = make_ns_series(SL2, n, alpha.s_series(24))
        rep = dual_basis_check(r, alpha, 8)
        if not rep.passed or rep.untested:
            return False, f"n={n} a0={a0}: {rep.status}"
    return True, "k, l < 8"


def criterion_5():
    timings = []
    for n in range(5):
        for a0 in (0, 1):
            start = time.time()
            r = quasi_r(n, a0, SL2)
            alpha = AlphaData.standard(n, a0)
            if not is_skew(r)[0] or not lagrangian_check(r, alpha, 5).passed:
                return False, f"n={n} a0={a0}: skew/Lagrangian"
            phi = phi_of(r)  # raises PoleError if CYB(r) is not a power series
            table = DeltaTable.from_series(r)
            for i in range(SL2.dim):
                for m in range(3):
                    res = quasi_jacobi_residual(table, phi, ({i: 1}, m))
                    if not res.is_zero() or res.window.total <= 0:
                        return False, f"n={n} a0={a0}: quasi-Jacobi at b_{i} x^{m}"
            adp = alt_delta_phi_residual(table, phi)
            if not adp.is_zero() or adp.window.total <= 0:
                return False, f"n={n} a0={a0}: Alt((delta x 1 x 1) phi)"
            timings.append(time.time() - start)
    return True, f"slowest case {max(timings):.1f}s"


def criterion_6():
    for n in (0, 1, 2):
        rep = subalgebra_residual(skew_solution(n, SL2), AlphaData.standard(n), 5)
        if not rep.passed or not rep.details["verdicts_agree"]:
            return False, f"skew solution n={n} not closed"
    for n, a0 in [(2, 1), (3, 0), (3, 1), (4, 0), (4, 1)]:
        rep = subalgebra_residual(quasi_r(n, a0, SL2), AlphaData.standard(n, a0), 5)
        if rep.status != "fail" or "bracket" not in (rep.counterexample or {}):
            return False, f"quasi_r n={n} a0={a0} reported {rep.status}"
        if not rep.details["verdicts_agree"]:
            return False, f"quasi_r n={n} a0={a0}: GCYB and bracket verdicts disagree"
    return True, "closed for n<=2 skew solutions, counterexamples for the rest"


def criterion_7():
    dec = borel_decomposition(SL2)
    for kind in ("r0", "r1", "r01"):
        for n in (2, 3):
            for a0 in (0, 1):
                d = dec if kind == "r01" else None
                long_form = generalized_r(kind, n, a0, SL2, d, "long")
                closed = generalized_r(kind, n, a0, SL2, d, "closed")
                if min(closed.g.window.hi) < 8 or min(long_form.g.window.hi) < 8:
                    return False, f"{kind} n={n} a0={a0}: window below 8"
                if not (long_form.g - closed.g).is_zero() or not long_form.s.equal_on_window(closed.s):
                    return False, f"{kind} n={n} a0={a0}: long != closed"
                if not gcyb(closed).is_zero():
                    return False, f"{kind} n={n} a0={a0}: GCYB != 0"
        for n in (2, 3):
            for a0 in (0, 1):
                for side, target in ((1, "r0"), (2, "r1")):
                    deg = generalized_r("r01", n, a0, SL2, trivial_decomposition(SL2, side))
                    if not (deg.g - generalized_r(target, n, a0, SL2).g).is_zero():
                        return False, f"r01 with s{side}=g differs from {target}"
    return True, "r0, r1, r01 (Borel) for n in {2,3}, a0 in {0,1}"


def criterion_8():
    rng = random.Random(20240601)
    for entry in ("yang", "n1"):
        r = skew_solution(0, SL2) if entry == "yang" else quasi_r(1, 0, SL2)
        alpha = AlphaData.standard(r.n)
        for trial in range(20):
            s = random_skew_twist(SL2, rng, max_degree=2, coeff_range=2)
            rep = twist_coherence_check(r, alpha, s, K=5, m_max=2)
            if not rep.passed:
                return False, f"{entry} twist {trial}: {rep.counterexample}"
    return True, "20 twists each on Yang and the n=1 entry"


def criterion_9():
    for alpha in (AlphaData(2, {-2: 1}), AlphaData(3, {0: 0, -1: 1})):
        t = solve_normalizing_transform(alpha, 8)
        if dict(compose(t.phi, t.psi, hi=9).items()) != {(1,): 1}:
            return False, "phi(psi(x)) != x"
        for row in residue_identity_table(alpha, t, range(-5, 6)):
            if not row.matches:
                return False, f"residue identity fails at k={row.k}"
    return True, "res{beta x^k} = res{alpha phi^k} = res{alpha(psi) psi' x^k}, |k| <= 5"


def criterion_10():
    cases = [("r1 n=2 a0=1", generalized_r("r1", 2, 1, SL2), AlphaData.standard(2, 1)),
             ("quasi_r n=3 a0=1", quasi_r(3, 1, SL2), AlphaData.standard(3, 1))]
    for label, r, alpha in cases:
        rep = rescaled_orthocomplement_check(r, alpha, 5)
        if not rep.passed:
            return False, f"{label}: {rep.status}"
    return True, "K=5"


def criterion_11():
    for kind in ("r0", "r1"):
        for n in (3, 4):
            rep = projection_reduction_check(generalized_r(kind, n, 0, SL2), AlphaData.standard(n), 5)
            if not rep.passed or rep.details.get("reduced_complementary") != "pass":
                return False, f"{kind} n={n}: {rep.counterexample}"
    return True, "r0, r1 at n in {3,4}"


CRITERIA = [
    (1, "Yang baseline", criterion_1),
    (2, "Gram closed form vs residues", criterion_2),
    (3, "orthocomplement pairings", criterion_3),
    (4, "dual-basis identity", criterion_4),
    (5, "quasi-r-matrix suite", criterion_5),
    (6, "subalgebra gate", criterion_6),
    (7, "closed-form identities", criterion_7),
    (8, "twist coherence", criterion_8),
    (9, "normalizing transform", criterion_9),
    (10, "rescaling identity", criterion_10),
    (11, "reduction to L(2)", criterion_11),
]


@pytest.mark.parametrize("number,title,fn", CRITERIA, ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_acceptance(number, title, fn):
    ok, detail = fn()
    print(line(number, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    failed = 0
    for number, title, fn in CRITERIA:
        ok, detail = fn()
        failed += not ok
        print(line(number, title, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
