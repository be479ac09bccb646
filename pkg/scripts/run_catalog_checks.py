"""Sweep every builtin catalog entry through the structural checks and print a table."""
import argparse
import json
import time
from dataclasses import asdict, dataclass

from nslab.catalog import builtin_ids, load
from nslab.ns_series import complementary_check, is_skew, lagrangian_check, orthocomplement_check
from nslab.series import WindowError
from nslab.yang_baxter import cyb, gcyb


@dataclass
class SweepConfig:
    lie: str = "sl2"
    K: int = 5
    max_n: int = 4
    json_out: str | None = None


def run(cfg: SweepConfig) -> list[dict]:
    rows = []
    for entry_id in builtin_ids(cfg.max_n):
        start = time.time()
        r, alpha = load(entry_id, cfg.lie)
        row = {"id": entry_id, "skew": is_skew(r)[0]}
        row["complementary"] = complementary_check(r, alpha, cfg.K).status
        row["lagrangian"] = lagrangian_check(r, alpha, cfg.K).status
        row["orthocomplement"] = orthocomplement_check(r, alpha, cfg.K + r.n).status
        try:
            row["cyb_zero"] = cyb(r).is_zero()
            # generalized entries are not skew; the relevant equation is GCYB
            row["gcyb_zero"] = None if row["skew"] else gcyb(r).is_zero()
        except WindowError:
            row["cyb_zero"] = row["gcyb_zero"] = None
        row["seconds"] = round(time.time() - start, 2)
        rows.append(row)
        print(f"{entry_id:<40} skew={row['skew']!s:<5} compl={row['complementary']:<12} "
              f"lagr={row['lagrangian']:<12} perp={row['orthocomplement']:<12} "
              f"cyb=0:{row['cyb_zero']!s:<5} gcyb=0:{row['gcyb_zero']!s:<5} {row['seconds']}s", flush=True)
    return rows


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lie", default=SweepConfig.lie)
    ap.add_argument("--K", type=int, default=SweepConfig.K)
    ap.add_argument("--max-n", type=int, default=SweepConfig.max_n)
    ap.add_argument("--json-out")
    cfg = SweepConfig(**{k.replace("-", "_"): v for k, v in vars(ap.parse_args()).items()})
    rows = run(cfg)
    if cfg.json_out:
        with open(cfg.json_out, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2)
