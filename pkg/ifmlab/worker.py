from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, Mapping, Sequence

from .adapters import get_adapter
from .errors import DomainError
from .montecarlo import chi_square_check, sample, within_binomial_bound
from .networks import NetworkSpec, dark_port_residual, run_network, tune_dark_port
from .schema import (
    ChiSquareDocument,
    ExactRunDocument,
    NetworkResultDocument,
    RunRequest,
    SampleRunDocument,
    SweepDocument,
    SweepRow,
    TuneDocument,
)
from .utils import round_probs, round_sig


def run_job(req: RunRequest) -> Dict[str, Any]:
    """Execute one validated request; exact mode never touches the sampler."""
    adapter = get_adapter(req.protocol)
    params = adapter.validate(req.params)
    outcome = adapter.call(params)
    dumped = params.model_dump(mode="json")

    if req.mode == "exact":
        doc = ExactRunDocument(
            protocol=req.protocol,
            params=dumped,
            distribution=round_probs(outcome.distribution.as_dict()),
            efficiency=round_sig(outcome.efficiency),
            single_shot_efficiency=round_sig(outcome.single_shot_efficiency),
            rounds_expected=round_sig(outcome.rounds_expected),
            success_label=outcome.success_label,
            failure_label=outcome.failure_label,
            extra=adapter.extra(params),
        )
        return doc.model_dump(mode="json")

    ledger = sample(outcome.distribution, req.trials, req.seed)
    chi = chi_square_check(ledger, outcome.distribution)
    doc = SampleRunDocument(
        protocol=req.protocol,
        params=dumped,
        master_seed=ledger.master_seed,
        trials=ledger.trials,
        counts=dict(ledger.counts),
        frequencies=round_probs(ledger.frequencies()),
        exact=round_probs(outcome.distribution.as_dict()),
        chi_square=ChiSquareDocument(
            statistic=round_sig(chi.statistic) if chi.statistic != float("inf") else None,
            dof=chi.dof,
            passed=chi.passed,
        ),
        within_4_sigma=within_binomial_bound(ledger, outcome.distribution, sigmas=4.0),
    )
    return doc.model_dump(mode="json")


def sweep_job(
    protocol: str,
    param_name: str,
    grid: Sequence[Any],
    fixed: Mapping[str, Any] | None = None,
    workers: int = 1,
) -> Dict[str, Any]:
    """One row per grid value, rows in grid order whatever the worker count."""
    if not grid:
        raise DomainError("sweep grid is empty")
    if workers < 1:
        raise DomainError("workers must be >= 1, got %r" % workers)
    fixed = dict(fixed or {})
    adapter = get_adapter(protocol)
    # validate the whole grid before running any of it
    params_list = [adapter.validate({**fixed, param_name: value}) for value in grid]

    with ThreadPoolExecutor(max_workers=workers) as pool:
        outcomes = list(pool.map(adapter.call, params_list))

    rows = []
    for params, outcome in zip(params_list, outcomes):
        probs = outcome.distribution
        rows.append(SweepRow(
            value=params.model_dump(mode="json")[param_name],
            distribution=round_probs({label: probs[label] for label in adapter.labels}),
            efficiency=round_sig(outcome.efficiency),
            rounds_expected=round_sig(outcome.rounds_expected),
        ))
    doc = SweepDocument(
        protocol=adapter.name,
        param_name=param_name,
        fixed=fixed,
        labels=list(adapter.labels),
        rows=rows,
    )
    return doc.model_dump(mode="json")


def tune_job(t1: float) -> Dict[str, Any]:
    t2 = tune_dark_port(t1)
    return TuneDocument(T1=t1, T2=round_sig(t2), residual_D2=round_sig(dark_port_residual(t1, t2))).model_dump(mode="json")


def network_job(doc: Mapping[str, Any]) -> Dict[str, Any]:
    dist = run_network(NetworkSpec.from_dict(doc))
    return NetworkResultDocument(distribution=round_probs(dist.as_dict())).model_dump(mode="json")
