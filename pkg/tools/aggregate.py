#!/usr/bin/env python3
"""
tools/aggregate.py

Check the sampled ledgers of a runs directory against their exact distributions
and save one summary CSV row per scenario file.

Usage:
  python -m tools.aggregate --indir data/runs --out data/summary/aggregates.csv
"""

import os
import csv
import argparse

from ifmlab.core import OutcomeDistribution
from ifmlab.montecarlo import TrialLedger, chi_square_check, within_binomial_bound
from ifmlab.utils import format_number, load_run_from_file

FIELDNAMES = ['run_id', 'scenario', 'trials', 'efficiency', 'statistic', 'dof', 'passed', 'within_4_sigma', 'max_abs_deviation']


def summarize_file(path):
    rows = []
    with open(path, 'r', encoding='utf-8') as fh:
        for r in csv.DictReader(fh):
            rows.append(r)
    probs = {r['outcome']: float(r['probability']) for r in rows}
    total = sum(probs.values())
    # probabilities were written with 12 significant digits
    dist = OutcomeDistribution({label: p / total for label, p in probs.items()})
    counts = {r['outcome']: int(r['count']) for r in rows}
    trials = sum(counts.values())

    summary = {'trials': trials, 'statistic': '', 'dof': '', 'passed': '', 'within_4_sigma': '', 'max_abs_deviation': ''}
    if trials:
        ledger = TrialLedger(master_seed=0, trials=trials, counts=counts)
        chi = chi_square_check(ledger, dist)
        freqs = ledger.frequencies()
        summary.update({
            'statistic': format_number(chi.statistic),
            'dof': chi.dof,
            'passed': chi.passed,
            'within_4_sigma': within_binomial_bound(ledger, dist),
            'max_abs_deviation': format_number(max(abs(freqs[l] - dist[l]) for l in dist.labels)),
        })
    return summary


def aggregate_runs(indir, outpath):
    if os.path.dirname(outpath):
        os.makedirs(os.path.dirname(outpath), exist_ok=True)
    files = sorted(f for f in os.listdir(indir) if f.endswith('.csv'))
    summaries = []
    for fn in files:
        # scenario is part of filename after __
        parts = fn.split('__')
        if len(parts) != 2:
            continue
        run_id = parts[0]
        scenario = parts[1].rsplit('.csv', 1)[0]
        summary = summarize_file(os.path.join(indir, fn))

        meta_path = os.path.join(indir, f"{run_id}__{scenario}_meta.json")
        efficiency = ''
        if os.path.exists(meta_path):
            efficiency = format_number(load_run_from_file(meta_path).get('efficiency', ''))

        summaries.append({'run_id': run_id, 'scenario': scenario, 'efficiency': efficiency, **summary})

    with open(outpath, 'w', newline='', encoding='utf-8') as fh:
        writer = csv.DictWriter(fh, fieldnames=FIELDNAMES, lineterminator='\n')
        writer.writeheader()
        for s in summaries:
            writer.writerow(s)
    print('Wrote summary to', outpath)
    return summaries


if __name__ == '__main__':
    parser = argparse.ArgumentParser()
    parser.add_argument('--indir', default='data/runs')
    parser.add_argument('--out', default='data/summary/aggregates.csv')
    args = parser.parse_args()
    aggregate_runs(args.indir, args.out)
