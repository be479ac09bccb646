"""Apply random skew twists to a catalog entry and check that W, delta and phi transform coherently."""
import argparse
import random
from dataclasses import dataclass

from nslab.catalog import load
from nslab.yang_baxter import random_skew_twist, twist_coherence_check


@dataclass
class TwistConfig:
    entry: str = "skew_solution/n=0"
    lie: str = "sl2"
    trials: int = 20
    seed: int = 0
    max_degree: int = 2
    coeff_range: int = 2
    K: int = 5
    m_max: int = 2


def run(cfg: TwistConfig) -> int:
    r, alpha = load(cfg.entry, cfg.lie)
    rng = random.Random(cfg.seed)
    failures = 0
    for trial in range(cfg.trials):
        s = random_skew_twist(r.lie, rng, max_degree=cfg.max_degree, coeff_range=cfg.coeff_range)
        rep = twist_coherence_check(r, alpha, s, K=cfg.K, m_max=cfg.m_max)
        failures += not rep.passed
        print(f"trial {trial:>3}: {rep.status:<12} terms={len(s.items())}", flush=True)
    print(f"{cfg.trials - failures}/{cfg.trials} coherent")
    return failures


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    for name, default in vars(TwistConfig()).items():
        ap.add_argument("--" + name.replace("_", "-"), type=type(default), default=default)
    cfg = TwistConfig(**vars(ap.parse_args()))
    raise SystemExit(1 if run(cfg) else 0)
