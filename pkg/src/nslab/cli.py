"""Command line front end: verify, expand, twist, normalize-alpha.

Exit codes: 0 all certified checks pass, 1 some check fails, 2 malformed
request or input, 3 window insufficient, 4 twist tensor not skew.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import catalog, yang_baxter as yb
from .lie import LieAlgebraData, TensorSeries, get_lie, lie_from_json
from .manin import AlphaData, residue_identity_table, solve_normalizing_transform
from .ns_series import (
    XY,
    NSSeries,
    bar,
    coefficients,
    complementary_check,
    is_skew,
    lagrangian_check,
    orthocomplement_check,
)
from .report import FAIL, INSUFFICIENT, PASS, CheckReport, verdict
from .series import Window, WindowError

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_WINDOW, EXIT_NOT_SKEW = 0, 1, 2, 3, 4

CHECKS = (
    "skew", "cybe", "gcybe", "complementary", "lagrangian", "orthocomplement", "cocycle",
    "quasi_jacobi", "alt_phi", "twist_coherence", "closed_form", "rescale", "reduction",
)


class RequestError(ValueError):
    """Malformed request or input (exit 2)."""


@dataclass
class Windows:
    K: int = 5
    k_max: int | None = None
    y_order: int | None = None
    precision: int | None = None
    m_max: int = 2


@dataclass
class CheckRequest:
    target: str
    checks: list
    windows: Windows = field(default_factory=Windows)
    lie: str = "sl2"
    twist_path: str | None = None
    seed: int = 0


@dataclass
class Target:
    series: NSSeries
    alpha: AlphaData
    entry: catalog.CatalogEntry | None = None


# loading

def _read_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise RequestError(f"cannot read JSON from {path}: {exc}") from exc


def load_lie(source: str) -> LieAlgebraData:
    if Path(source).suffix == ".json":
        try:
            return lie_from_json(_read_json(source))
        except (KeyError, TypeError, ValueError) as exc:
            raise RequestError(f"bad Lie algebra file: {exc}") from exc
    try:
        return get_lie(source)
    except KeyError as exc:
        raise RequestError(str(exc)) from exc


def load_target(catalog_id: str | None, input_path: str | None, lie: LieAlgebraData,
                precision: int | None = None) -> Target:
    if bool(catalog_id) == bool(input_path):
        raise RequestError("give exactly one of --catalog-id or --input")
    if catalog_id:
        try:
            entry = catalog.parse_id(catalog_id)
            return Target(entry.build(lie, precision), entry.alpha(), entry)
        except (KeyError, ValueError) as exc:
            raise RequestError(str(exc)) from exc
    obj = _read_json(input_path)
    try:
        series = NSSeries.from_json(obj, lie)
        alpha = AlphaData.from_json(obj["alpha"]) if "alpha" in obj else _alpha_from_s(series)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise RequestError(f"bad series file: {exc}") from exc
    return Target(series, alpha)


def _alpha_from_s(r: NSSeries) -> AlphaData:
    """alpha = 1 / (x^n s), as far as s is known."""
    from .series import series_invert

    inv = series_invert(r.s, r.s.window.hi[0])
    coeffs = {}
    for (d,), c in inv.items():
        # x^(d - n) carries alpha_i with -1 - i = d - n
        i = r.n - 1 - d
        if d > 0 and c:
            coeffs[i] = c
    return AlphaData(r.n, coeffs)


def tensor_from_json(obj, lie: LieAlgebraData) -> TensorSeries:
    """A polynomial two-tensor from {"g": [[i, j, kx, ky, "p/q"], ...]} or a bare list."""
    entries = obj["g"] if isinstance(obj, dict) else obj
    terms: dict = {}
    try:
        for i, j, kx, ky, c in entries:
            comp = terms.setdefault((int(i), int(j)), {})
            comp[(int(kx), int(ky))] = comp.get((int(kx), int(ky)), 0) + Fraction(c)
    except (TypeError, ValueError) as exc:
        raise RequestError(f"bad tensor entries: {exc}") from exc
    for i, j in terms:
        if not (0 <= i < lie.dim and 0 <= j < lie.dim):
            raise RequestError("tensor basis index out of range")
    terms = {k: {e: c for e, c in v.items() if c} for k, v in terms.items()}
    return TensorSeries(lie, 2, XY, {k: v for k, v in terms.items() if v}, Window.exact((0, 0)))


def tensor_to_json(t: TensorSeries) -> dict:
    return {"g": [[idx[0], idx[1], e[0], e[1], str(c)] for idx, e, c in t.items() if c]}


# checks

def _tensor_verdict(name: str, residual: TensorSeries, **kw) -> CheckReport:
    w = residual.window
    if residual.is_zero():
        certified = 1 if w.total > 0 and all(h > lo for h, lo in zip(w.hi, w.lo)) else 0
        return verdict(name, [], certified, window=w.to_json(), **kw)
    idx, e, c = residual.first_nonzero()
    return verdict(name, [{"basis": list(idx), "exponents": list(e), "value": c}], 1,
                   window=w.to_json(), **kw)


def _combine(name: str, reports: list, window: dict) -> CheckReport:
    failures = [r.counterexample or {"part": r.name} for r in reports if r.status == FAIL]
    certified = sum(1 for r in reports if r.status == PASS)
    untested = sum(1 for r in reports if r.status == INSUFFICIENT)
    if failures:
        return verdict(name, failures, certified, untested, window=window)
    if untested:
        return CheckReport(name, INSUFFICIENT, certified, untested, window=window)
    return verdict(name, [], certified, window=window)


def _skew_report(t: Target, w: Windows) -> CheckReport:
    _, residual = is_skew(t.series)
    return _tensor_verdict("skew", residual)


def _generators(lie, m_max):
    return [({i: Fraction(1)}, m) for m in range(m_max + 1) for i in range(lie.dim)]


def _cocycle_report(t: Target, w: Windows) -> CheckReport:
    table = yb.DeltaTable.from_series(t.series)
    gens = _generators(t.series.lie, min(w.m_max, 1))
    parts = []
    for a_pos, a in enumerate(gens):
        for b in gens[a_pos + 1:]:
            parts.append(_tensor_verdict("cocycle", yb.cocycle_residual(table, a, b)))
    return _combine("cocycle", parts, {"m_max": min(w.m_max, 1)})


def _phi_and_table(t: Target):
    if not is_skew(t.series)[0]:
        raise RequestError("quasi-Lie bialgebra checks need a skew-symmetric series")
    try:
        phi = yb.phi_of(t.series)
    except yb.PoleError as exc:
        return None, None, exc
    return yb.DeltaTable.from_series(t.series), phi, None


def _quasi_jacobi_report(t: Target, w: Windows) -> CheckReport:
    table, phi, err = _phi_and_table(t)
    if err is not None:
        return verdict("quasi_jacobi", [{"reason": str(err)}], 1)
    parts = [_tensor_verdict("quasi_jacobi", yb.quasi_jacobi_residual(table, phi, g))
             for g in _generators(t.series.lie, w.m_max)]
    return _combine("quasi_jacobi", parts, {"m_max": w.m_max})


def _alt_phi_report(t: Target, w: Windows) -> CheckReport:
    table, phi, err = _phi_and_table(t)
    if err is not None:
        return verdict("alt_phi", [{"reason": str(err)}], 1)
    return _tensor_verdict("alt_phi", yb.alt_delta_phi_residual(table, phi))


def _twist_report(t: Target, w: Windows, twist: TensorSeries) -> CheckReport:
    return yb.twist_coherence_check(t.series, t.alpha, twist, w.K, w.m_max)


def _closed_form_report(t: Target, w: Windows) -> CheckReport:
    entry = t.entry
    if entry is None or entry.kind != "generalized":
        raise RequestError("closed_form applies to generalized/... catalog entries")
    params = dict(entry.params)
    lie = t.series.lie
    dec = catalog.borel_decomposition(lie) if params.get("decomposition") == "borel" else None
    long_form = catalog.generalized_r(params["which"], entry.n, entry.alpha0, lie, dec, "long", w.precision)
    closed = catalog.generalized_r(params["which"], entry.n, entry.alpha0, lie, dec, "closed", w.precision)
    diff = long_form.g - closed.g
    s_diff = long_form.s - closed.s
    if not s_diff.is_zero():
        return verdict("closed_form", [{"part": "s", "value": str(s_diff)}], 1)
    return _tensor_verdict("closed_form", diff)


def run_check(name: str, t: Target, w: Windows, twist: TensorSeries | None = None) -> CheckReport:
    r, alpha = t.series, t.alpha
    k_max = w.k_max if w.k_max is not None else w.K + r.n
    try:
        if name == "skew":
            return _skew_report(t, w)
        if name == "cybe":
            return yb.cyb(r).report()
        if name == "gcybe":
            return yb.gcyb(r).report()
        if name == "complementary":
            return complementary_check(r, alpha, w.K)
        if name == "lagrangian":
            return lagrangian_check(r, alpha, w.K)
        if name == "orthocomplement":
            return orthocomplement_check(r, alpha, k_max)
        if name == "cocycle":
            return _cocycle_report(t, w)
        if name == "quasi_jacobi":
            return _quasi_jacobi_report(t, w)
        if name == "alt_phi":
            return _alt_phi_report(t, w)
        if name == "twist_coherence":
            return _twist_report(t, w, twist)
        if name == "closed_form":
            return _closed_form_report(t, w)
        if name == "rescale":
            return catalog.rescaled_orthocomplement_check(r, alpha, w.K)
        if name == "reduction":
            if r.n <= 2:
                raise RequestError("reduction applies to n > 2")
            return catalog.projection_reduction_check(r, alpha, w.K)
    except WindowError as exc:
        return CheckReport(name, INSUFFICIENT, window={"K": w.K, "k_max": k_max},
                           details={"reason": str(exc)})
    raise RequestError(f"unknown check {name!r}")


def _suggest_window(name: str, req: CheckRequest, t: Target, twist) -> dict | None:
    """Smallest expansion precision (catalog targets) at which the check is certified."""
    if t.entry is None:
        return {"hint": "supply a longer expansion of s and g"}
    base = req.windows.precision or catalog.default_precision(t.entry.n, req.windows.K)
    for extra in range(2, 31, 2):
        w = Windows(**{**req.windows.__dict__, "precision": base + extra})
        try:
            bigger = Target(t.entry.build(t.series.lie, w.precision), t.alpha, t.entry)
            if run_check(name, bigger, w, twist).status != INSUFFICIENT:
                return {"precision": base + extra, "K": w.K}
        except (WindowError, RequestError):
            continue
    return None


def cmd_verify(req: CheckRequest, lie: LieAlgebraData, input_path: str | None = None) -> tuple[int, dict]:
    for name in req.checks:
        if name not in CHECKS:
            raise RequestError(f"unknown check {name!r}; choose from {', '.join(CHECKS)}")
    t = load_target(req.target if input_path is None else None, input_path, lie, req.windows.precision)
    twist = None
    if "twist_coherence" in req.checks:
        if req.twist_path:
            twist = tensor_from_json(_read_json(req.twist_path), lie)
            if not yb.is_skew_tensor(twist):
                return EXIT_NOT_SKEW, {"error": "twist tensor is not skew-symmetric"}
        else:
            twist = yb.random_skew_twist(lie, random.Random(req.seed))
    reports = []
    for name in req.checks:
        rep = run_check(name, t, req.windows, twist)
        if rep.status == INSUFFICIENT:
            rep.minimal_window = _suggest_window(name, req, t, twist)
        reports.append(rep)
    statuses = {r.status for r in reports}
    code = EXIT_FAIL if FAIL in statuses else EXIT_WINDOW if INSUFFICIENT in statuses else EXIT_OK
    out = {
        "target": req.target,
        "lie": lie.name,
        "n": t.series.n,
        "alpha": t.alpha.to_json(),
        "windows": {"K": req.windows.K, "k_max": req.windows.k_max, "m_max": req.windows.m_max},
        "checks": [r.to_json() for r in reports],
        "exit_code": code,
    }
    return code, out


def cmd_expand(t: Target, k_max: int, with_bar: bool = False) -> tuple[int, dict]:
    try:
        table = coefficients(t.series, k_max)
        rows = [{"k": k, "i": i, "f": table.rows[(k, i)].to_json()} for k, i in sorted(table.rows)]
        out = {"n": t.series.n, "k_max": k_max, "coefficients": rows}
        if with_bar:
            bar_table = coefficients(bar(t.series), k_max)
            out["bar_coefficients"] = [{"k": k, "i": i, "f": bar_table.rows[(k, i)].to_json()}
                                       for k, i in sorted(bar_table.rows)]
    except WindowError as exc:
        return EXIT_WINDOW, {"error": str(exc), "k_max": k_max}
    return EXIT_OK, out


def cmd_twist(t: Target, twist: TensorSeries, K: int, m_max: int) -> tuple[int, dict, dict | None]:
    if not yb.is_skew_tensor(twist):
        return EXIT_NOT_SKEW, {"error": "twist tensor is not skew-symmetric"}, None
    twisted = yb.twist_series(t.series, twist)
    try:
        rep = yb.twist_coherence_check(t.series, t.alpha, twist, K, m_max)
    except WindowError as exc:
        rep = CheckReport("twist_coherence", INSUFFICIENT, details={"reason": str(exc)})
    series_json = twisted.to_json()
    series_json["alpha"] = t.alpha.to_json()
    code = {PASS: EXIT_OK, FAIL: EXIT_FAIL}.get(rep.status, EXIT_WINDOW)
    return code, {"twist": tensor_to_json(twist), "checks": [rep.to_json()], "exit_code": code}, series_json


def cmd_normalize_alpha(alpha: AlphaData, order: int) -> tuple[int, dict]:
    if order < 2:
        raise RequestError("order must be at least 2")
    transform = solve_normalizing_transform(alpha, order)
    rows, untested = [], []
    for k in range(-5, 6):
        try:
            rows += residue_identity_table(alpha, transform, [k])
        except WindowError:
            untested.append(k)  # order too low to certify this residue
    table = [{"k": row.k, "res_beta_xk": str(row.beta_side), "res_alpha_phi_k": str(row.alpha_of_phi),
              "res_alpha_psi_dpsi_xk": str(row.pulled_back), "match": row.matches} for row in rows]
    ok = all(row.matches for row in rows)
    out = {
        "alpha": alpha.to_json(),
        "beta": transform.beta.to_json(),
        "order": order,
        "psi": {str(e[0]): str(c) for e, c in transform.psi.items()},
        "phi": {str(e[0]): str(c) for e, c in transform.phi.items()},
        "residue_table": table,
        "all_match": ok,
        "untested_k": untested,
    }
    if not rows:
        return EXIT_WINDOW, out
    return (EXIT_OK if ok else EXIT_FAIL), out


# output

def _text(out: dict) -> str:
    lines = []
    if "checks" in out:
        head = out.get("target", "")
        if head:
            lines.append(f"target {head}  n={out.get('n')}  lie={out.get('lie')}")
        for rep in out["checks"]:
            line = f"  {rep['check']:<16} {rep['status']:<13} certified={rep['certified']} untested={rep['untested']}"
            lines.append(line)
            if "counterexample" in rep:
                lines.append(f"    first counterexample: {json.dumps(rep['counterexample'], sort_keys=True)}")
            if rep.get("minimal_window"):
                lines.append(f"    suggested window: {json.dumps(rep['minimal_window'], sort_keys=True)}")
    elif "coefficients" in out:
        for key in ("coefficients", "bar_coefficients"):
            for row in out.get(key, []):
                f = row["f"]
                lines.append(f"{'fbar' if key.startswith('bar') else 'f'}[{row['k']},{row['i']}] "
                             f"laurent={f['laurent']} quotient={f['quotient']}")
    elif "psi" in out:
        lines.append("psi = " + " + ".join(f"({c})x^{d}" for d, c in out["psi"].items()))
        lines.append("phi = " + " + ".join(f"({c})x^{d}" for d, c in out["phi"].items()))
        for row in out["residue_table"]:
            lines.append(f"  k={row['k']:>3}  {row['res_beta_xk']:>6} {row['res_alpha_phi_k']:>6} "
                         f"{row['res_alpha_psi_dpsi_xk']:>6}  {'ok' if row['match'] else 'MISMATCH'}")
    else:
        lines.append(json.dumps(out, sort_keys=True))
    return "\n".join(lines)


def emit(out: dict, as_json: bool, stream=None) -> None:
    stream = stream or sys.stdout
    if as_json:
        stream.write(json.dumps(out, sort_keys=True, indent=2) + "\n")
    else:
        stream.write(_text(out) + "\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--lie", default="sl2", help="sl2, sl3, sl4 or a JSON structure-constant file")
    common.add_argument("--window-K", dest="K", type=int, default=5)
    common.add_argument("--k-max", dest="k_max", type=int, default=None)
    common.add_argument("--precision", type=int, default=None, help="expansion order for catalog entries")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="as_json", action="store_true", default=True)
    fmt.add_argument("--text", dest="as_json", action="store_false")
    common.add_argument("--catalog-id", default=None)
    common.add_argument("--input", default=None, help="series JSON file")

    parser = argparse.ArgumentParser(prog="nslab", description="exact checks for (n, s)-type series")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common])
    p.add_argument("--checks", default="skew,lagrangian", help="comma separated: " + ",".join(CHECKS))
    p.add_argument("--m-max", type=int, default=2)
    p.add_argument("--twist", default=None, help="twist tensor JSON for twist_coherence")
    p.add_argument("--seed", type=int, default=0, help="seed of the random twist when --twist is absent")

    p = sub.add_parser("expand", parents=[common])
    p.add_argument("--bar", action="store_true", help="also print the coefficients of bar(r)")

    p = sub.add_parser("twist", parents=[common])
    p.add_argument("--twist", required=True, help="twist tensor JSON")
    p.add_argument("--output", default=None, help="where to write the twisted series JSON")
    p.add_argument("--m-max", type=int, default=2)

    p = sub.add_parser("normalize-alpha", parents=[common])
    p.add_argument("--alpha", required=True, help='AlphaData JSON file or inline JSON {"n": 2, "alpha": {...}}')
    p.add_argument("--order", type=int, default=8)
    return parser


def _load_alpha(source: str) -> AlphaData:
    try:
        obj = json.loads(source) if source.lstrip().startswith("{") else _read_json(source)
        return AlphaData.from_json(obj)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise RequestError(f"bad alpha: {exc}") from exc


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        code, out = _dispatch(args)
    except RequestError as exc:
        code, out = EXIT_PARSE, {"error": str(exc)}
    emit(out, args.as_json)
    return code


def _dispatch(args) -> tuple[int, dict]:
    if args.command == "normalize-alpha":
        return cmd_normalize_alpha(_load_alpha(args.alpha), args.order)
    lie = load_lie(args.lie)
    if args.command == "verify":
        checks = [c.strip() for c in args.checks.split(",") if c.strip()]
        windows = Windows(args.K, args.k_max, None, args.precision, args.m_max)
        req = CheckRequest(args.catalog_id or args.input or "", checks, windows, args.lie, args.twist, args.seed)
        if bool(args.catalog_id) == bool(args.input):
            raise RequestError("give exactly one of --catalog-id or --input")
        return cmd_verify(req, lie, args.input)
    t = load_target(args.catalog_id, args.input, lie, args.precision)
    if args.command == "expand":
        k_max = args.k_max if args.k_max is not None else args.K + t.series.n
        return cmd_expand(t, k_max, args.bar)
    twist = tensor_from_json(_read_json(args.twist), lie)
    code, out, series_json = cmd_twist(t, twist, args.K, args.m_max)
    if series_json is not None and args.output:
        Path(args.output).write_text(json.dumps(series_json, sort_keys=True, indent=2) + "\n")
        out["output"] = args.output
    return code, out


if __name__ == "__main__":
    sys.exit(main())
