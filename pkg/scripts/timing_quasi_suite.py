"""Time the quasi-Lie-bialgebra checks (quasi-Jacobi and Alt(delta phi)) per catalog quasi-r-matrix."""
import argparse
import time
from dataclasses import dataclass

from nslab.catalog import quasi_r
from nslab.lie import get_lie
from nslab.yang_baxter import DeltaTable, alt_delta_phi_residual, phi_of, quasi_jacobi_residual


@dataclass
class TimingConfig:
    lie: str = "sl2"
    max_n: int = 4
    m_max: int = 2


def time_one(lie, n: int, alpha0, m_max: int) -> dict:
    t0 = time.time()
    r = quasi_r(n, alpha0, lie)
    phi = phi_of(r)
    t1 = time.time()
    table = DeltaTable.from_series(r)
    jacobi_ok = all(quasi_jacobi_residual(table, phi, ({i: 1}, m)).is_zero()
                    for i in range(lie.dim) for m in range(m_max + 1))
    t2 = time.time()
    alt_ok = alt_delta_phi_residual(table, phi).is_zero()
    t3 = time.time()
    return {"n": n, "alpha0": alpha0, "jacobi": jacobi_ok, "alt_phi": alt_ok,
            "phi_s": t1 - t0, "jacobi_s": t2 - t1, "alt_s": t3 - t2}


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lie", default=TimingConfig.lie)
    ap.add_argument("--max-n", type=int, default=TimingConfig.max_n)
    ap.add_argument("--m-max", type=int, default=TimingConfig.m_max)
    args = ap.parse_args()
    cfg = TimingConfig(args.lie, args.max_n, args.m_max)
    lie = get_lie(cfg.lie)
    print(f"{'n':>2} {'a0':>3} {'jacobi':>7} {'alt':>6} {'phi[s]':>8} {'jacobi[s]':>10} {'alt[s]':>8}")
    for n in range(cfg.max_n + 1):
        for a0 in ((0, 1) if n >= 2 else (0,)):
            row = time_one(lie, n, a0, cfg.m_max)
            print(f"{n:>2} {a0:>3} {row['jacobi']!s:>7} {row['alt_phi']!s:>6} "
                  f"{row['phi_s']:>8.2f} {row['jacobi_s']:>10.2f} {row['alt_s']:>8.2f}", flush=True)
