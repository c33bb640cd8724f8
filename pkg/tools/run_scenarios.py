#!/usr/bin/env python3
"""
tools/run_scenarios.py

Batch runner: evaluate every canonical scenario (bomb tests, repeated and Zeno
protocols, the X-ray cavity, generalized IFM), and save one CSV per scenario
plus a per-scenario meta file, grouped under one run id.

Run (from repo root so imports work):
  python -m tools.run_scenarios --outdir data/runs --trials 1000000 --seed 20240601

Per scenario:
  {run_id}__{scenario}.csv        outcome,probability,count,frequency
  {run_id}__{scenario}_meta.json  request, efficiency, chi-square
and one {run_id}__meta_common.json.
"""

import os
import csv
import argparse
import uuid
from datetime import datetime, timezone
from typing import Any, Dict, List

from ifmlab.schema import RunRequest
from ifmlab.utils import ensure_outdir, format_number, save_run_to_file
from ifmlab.worker import run_job


# ---------- scenarios ----------

SCENARIOS: Dict[str, Dict[str, Any]] = {
    "penrose_good": {"protocol": "penrose", "params": {"present": True}},
    "penrose_dud": {"protocol": "penrose", "params": {"present": False}},
    "mine_symmetric": {"protocol": "ev", "params": {"R": 0.5}},
    "mine_low_reflectivity": {"protocol": "ev", "params": {"R": 0.1}},
    "repeated_near_limit": {"protocol": "repeated_ev", "params": {"R": 1e-3}},
    "zeno_10": {"protocol": "zeno", "params": {"N": 10}},
    "zeno_1000": {"protocol": "zeno", "params": {"N": 1000}},
    "cavity_empty": {"protocol": "xray", "params": {"absorber": False}},
    "cavity_bone": {"protocol": "xray", "params": {"absorber": True}},
    "generalized_symmetric": {"protocol": "generalized", "params": {"R": 0.5}},
    "generalized_orthogonal": {"protocol": "generalized", "params": {"alpha": "0.6", "beta": "0.8", "system": "psi_perp"}},
}


def new_run_id() -> str:
    return f"run_{datetime.now(timezone.utc).strftime('%Y%m%dT%H%M%SZ')}_{uuid.uuid4().hex[:6]}"


# ---------- main runner ----------

def run_scenarios(
    outdir: str = "data/runs",
    trials: int = 0,
    seed: int = 0,
    names: List[str] | None = None,
) -> str:
    """Run the selected scenarios, write CSV + meta per scenario, return run_id."""
    ensure_outdir(outdir)
    names = names or list(SCENARIOS)
    unknown = [n for n in names if n not in SCENARIOS]
    if unknown:
        raise ValueError("Unknown scenario: %s" % ", ".join(unknown))

    run_id = new_run_id()
    meta_common = {
        "run_id": run_id,
        "created_at": datetime.now(timezone.utc).isoformat(),
        "scenarios": names,
        "trials": trials,
        "master_seed": seed,
    }
    top_meta_path = os.path.join(outdir, f"{run_id}__meta_common.json")
    save_run_to_file(top_meta_path, meta_common)

    for name in names:
        scenario = SCENARIOS[name]
        exact = run_job(RunRequest(protocol=scenario["protocol"], params=scenario["params"]))
        sampled = None
        if trials > 0:
            sampled = run_job(RunRequest(protocol=scenario["protocol"], params=scenario["params"],
                                         mode="sample", trials=trials, seed=seed))

        rows = []
        for label, p in exact["distribution"].items():
            count = sampled["counts"].get(label, 0) if sampled else 0
            rows.append({
                "outcome": label,
                "probability": format_number(p),
                "count": count,
                "frequency": format_number(count / trials) if trials else "0",
            })

        csv_path = os.path.join(outdir, f"{run_id}__{name}.csv")
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.DictWriter(fh, fieldnames=["outcome", "probability", "count", "frequency"], lineterminator="\n")
            writer.writeheader()
            writer.writerows(rows)
        print("Wrote", csv_path)

        meta = {
            **meta_common,
            "scenario": name,
            "protocol": scenario["protocol"],
            "params": exact["params"],
            "efficiency": exact["efficiency"],
            "single_shot_efficiency": exact["single_shot_efficiency"],
            "rounds_expected": exact["rounds_expected"],
            "chi_square": sampled["chi_square"] if sampled else None,
        }
        meta_path = os.path.join(outdir, f"{run_id}__{name}_meta.json")
        save_run_to_file(meta_path, meta)
        print("Wrote meta", meta_path)

    print("Run complete. Meta (common):", top_meta_path)
    return run_id


# ---------- CLI ----------

if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Run every canonical scenario and save CSV + meta files.")
    parser.add_argument("--outdir", default="data/runs", help="Output directory for scenario CSVs and meta")
    parser.add_argument("--trials", type=int, default=0, help="Monte Carlo trials per scenario (0 = exact only)")
    parser.add_argument("--seed", type=int, default=0, help="Master seed for the sampled ledgers")
    parser.add_argument("--scenarios", default="", help="Comma-separated subset of scenario names")
    args = parser.parse_args()

    names = [n.strip() for n in args.scenarios.split(",") if n.strip()] or None
    run_scenarios(outdir=args.outdir, trials=args.trials, seed=args.seed, names=names)
