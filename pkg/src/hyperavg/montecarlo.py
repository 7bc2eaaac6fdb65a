"""Ensemble experiments over random initial states.

Runs many independent trajectories from p-Rademacher initial states on a
fixed hypergraph, recording the weighted average, the exact first-step
shift, the consensus value, convergence time, and the nonlinear residual.
The reports check the concentration and anti-concentration predictions
against the ensemble.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .dynamics import (
    InteractionFunction,
    nonlinear_residual,
    one_step_closed_form,
    run,
)
from .errors import WrongInitProbabilityError, ZeroWeightedSumError
from .hypergraph import Hypergraph3, StateVector, rademacher_init
from .motif import MotifGraph, build_motif, epsilon
from .prediction import shift_theorem, sigma_lambda_exact, weighted_average

CONCENTRATION_PASS_FRACTION = 0.9  # per-clause Monte Carlo risk level
SIGMA_MEAN_DEVIATION_MAX = 0.05  # mean relative sigma_lambda deviation
C0_BERRY_ESSEEN = 0.56  # Berry-Esseen constant (upper end of the known range)


@dataclass(frozen=True)
class RunRecord:
    """One trajectory's measurements; ``error`` is set when the run aborted."""

    seed: int
    mu_bar: float | None
    sigma_lambda: float | None
    discarded: bool
    consensus_value: float | None
    steps_to_converge: int | None
    residual_norm: float | None
    x1_max_dev: float | None
    error: str | None = None


@dataclass(frozen=True)
class EnsembleSummary:
    """All run records plus per-field aggregates."""

    records: list
    aggregates: dict  # field -> {mean, std, min, max}
    discard_count: int
    p_init: float
    base_seed: int

    @property
    def runs(self) -> int:
        return len(self.records)


def _aggregate(records: list) -> dict:
    fields = (
        "mu_bar",
        "sigma_lambda",
        "consensus_value",
        "steps_to_converge",
        "residual_norm",
        "x1_max_dev",
    )
    out = {}
    for name in fields:
        vals = np.array(
            [getattr(r, name) for r in records if getattr(r, name) is not None],
            dtype=np.float64,
        )
        if vals.size:
            out[name] = {
                "mean": float(vals.mean()),
                "std": float(vals.std(ddof=1)) if vals.size > 1 else 0.0,
                "min": float(vals.min()),
                "max": float(vals.max()),
            }
    return out


def _single_run(
    h: Hypergraph3,
    g: MotifGraph,
    f: InteractionFunction,
    p_init: float,
    seed: int,
    tol: float,
    t_max: int,
    mu_pop: float,
) -> RunRecord:
    try:
        x0 = rademacher_init(h.n, p_init, seed)
        mu_bar = weighted_average(g, x0)
        decomp = one_step_closed_form(h, x0, f)
        discarded = False
        try:
            sigma = sigma_lambda_exact(h, g, x0, f)
        except ZeroWeightedSumError:
            sigma = None
            discarded = True
        trace = run(h, x0, f, tol=tol, t_max=t_max)
        probe_t = (
            trace.steps_to_converge
            if trace.steps_to_converge is not None
            else t_max
        )
        x1 = StateVector(values=decomp.x1, time=1, seed=seed)
        _, res_norm = nonlinear_residual(h, g, x1, f, probe_t)
        # deviation from mu (1 + sigma_lambda) with the run's exact shift;
        # the theorem-level shift stands in when the shift is undefined
        shift = sigma if sigma is not None else shift_theorem(p_init, f)
        x1_max_dev = float(np.abs(decomp.x1 - mu_pop * (1.0 + shift)).max())
        return RunRecord(
            seed=seed,
            mu_bar=mu_bar,
            sigma_lambda=sigma,
            discarded=discarded,
            consensus_value=trace.consensus_value,
            steps_to_converge=trace.steps_to_converge,
            residual_norm=res_norm,
            x1_max_dev=x1_max_dev,
        )
    except Exception as exc:  # failed runs become records, not crashes
        return RunRecord(
            seed=seed,
            mu_bar=None,
            sigma_lambda=None,
            discarded=True,
            consensus_value=None,
            steps_to_converge=None,
            residual_norm=None,
            x1_max_dev=None,
            error=f"{type(exc).__name__}: {exc}",
        )


def run_ensemble(
    h: Hypergraph3,
    f: InteractionFunction,
    p_init: float,
    R: int,
    tol: float = 1e-9,
    t_max: int = 1000,
    base_seed: int = 0,
    jobs: int = 1,
    g: MotifGraph | None = None,
) -> EnsembleSummary:
    """R independent runs with seeds base_seed .. base_seed + R - 1.

    Records are assembled in seed order regardless of scheduling, so the
    summary is reproducible for any jobs count.
    """
    if R < 1:
        raise ValueError(f"need R >= 1, got {R}")
    if g is None:
        g = build_motif(h)
    mu_pop = 2.0 * p_init - 1.0
    seeds = range(base_seed, base_seed + R)
    if jobs > 1:
        from joblib import Parallel, delayed

        records = Parallel(n_jobs=jobs)(
            delayed(_single_run)(h, g, f, p_init, s, tol, t_max, mu_pop)
            for s in seeds
        )
    else:
        records = [
            _single_run(h, g, f, p_init, s, tol, t_max, mu_pop) for s in seeds
        ]
    records = sorted(records, key=lambda r: r.seed)
    return EnsembleSummary(
        records=records,
        aggregates=_aggregate(records),
        discard_count=sum(r.discarded for r in records),
        p_init=p_init,
        base_seed=base_seed,
    )


@dataclass(frozen=True)
class ConcentrationReport:
    """Ensemble-level check of the three concentration predictions."""

    sigma_mean_rel_dev: float
    sigma_max_rel_dev: float
    sigma_ok: bool
    mu_window: float  # epsilon with the default C
    mu_fraction: float
    mu_ok: bool
    x1_window: float  # 6 gamma with gamma = epsilon / 6
    x1_fraction: float
    x1_ok: bool
    pass_fraction: float
    passed: bool


def concentration_report(
    e: EnsembleSummary,
    p_init: float,
    f: InteractionFunction,
    g: MotifGraph,
    C: float = 4.3,
) -> ConcentrationReport:
    """Check sigma_lambda, mu_bar, and x^(1) concentration over the ensemble.

    (i) mean and max relative deviation of the exact shift from the theorem
    value; (ii) fraction of runs with |mu_bar - (2p-1)| < eps; (iii) fraction
    of runs with every vertex inside the 6 gamma window, gamma = eps / 6.
    """
    eps = epsilon(g, C)
    shift = shift_theorem(p_init, f)
    sigmas = np.array(
        [r.sigma_lambda for r in e.records if r.sigma_lambda is not None]
    )
    if sigmas.size and shift != 0.0:
        rel = np.abs(sigmas - shift) / abs(shift)
        sigma_mean, sigma_max = float(rel.mean()), float(rel.max())
    elif sigmas.size:
        # at lambda = 0 every exact shift is identically zero
        sigma_mean = sigma_max = float(np.abs(sigmas).max())
    else:
        sigma_mean = sigma_max = 0.0
    sigma_ok = sigma_mean <= SIGMA_MEAN_DEVIATION_MAX

    mu_pop = 2.0 * p_init - 1.0
    mus = np.array([r.mu_bar for r in e.records if r.mu_bar is not None])
    mu_fraction = (
        float((np.abs(mus - mu_pop) < eps).mean()) if mus.size else 0.0
    )
    mu_ok = mu_fraction >= CONCENTRATION_PASS_FRACTION

    devs = np.array([r.x1_max_dev for r in e.records if r.x1_max_dev is not None])
    x1_window = eps  # 6 gamma with gamma = eps / 6
    x1_fraction = float((devs <= x1_window).mean()) if devs.size else 0.0
    x1_ok = x1_fraction >= CONCENTRATION_PASS_FRACTION

    return ConcentrationReport(
        sigma_mean_rel_dev=sigma_mean,
        sigma_max_rel_dev=sigma_max,
        sigma_ok=sigma_ok,
        mu_window=eps,
        mu_fraction=mu_fraction,
        mu_ok=mu_ok,
        x1_window=x1_window,
        x1_fraction=x1_fraction,
        x1_ok=x1_ok,
        pass_fraction=CONCENTRATION_PASS_FRACTION,
        passed=sigma_ok and mu_ok and x1_ok,
    )


@dataclass(frozen=True)
class AnticoncentrationReport:
    """Empirical tail of |mu_bar| against the folded-normal lower bound."""

    a: float
    empirical_fraction: float
    bound: float
    slack: float  # two binomial standard errors at the bound value
    psi0: float
    passed: bool


def _folded_normal_cdf(x: float) -> float:
    """Psi(x) = Pr(|Z| <= x) for standard normal Z, x >= 0."""
    return math.erf(x / math.sqrt(2.0))


def anticoncentration_report(
    e: EnsembleSummary, g: MotifGraph, a: float
) -> AnticoncentrationReport:
    """Check Pr(|mu_bar| > a) >= 1 - Psi(a sum D / sqrt(sum D^2)) - 2 C0 psi0.

    Requires a balanced (p = 1/2) ensemble; passes when the empirical
    fraction clears the bound minus two binomial standard errors.
    """
    if e.p_init != 0.5:
        raise WrongInitProbabilityError(
            f"anti-concentration needs p_init = 1/2, got {e.p_init}"
        )
    if a <= 0:
        raise ValueError(f"a must be positive, got {a}")
    D = g.D.astype(np.float64)
    sum_d = D.sum()
    sum_d2 = (D**2).sum()
    psi0 = float((D**3).sum() / sum_d2**1.5)
    bound = 1.0 - _folded_normal_cdf(a * sum_d / math.sqrt(sum_d2))
    bound -= 2.0 * C0_BERRY_ESSEEN * psi0
    mus = np.array([r.mu_bar for r in e.records if r.mu_bar is not None])
    fraction = float((np.abs(mus) > a).mean()) if mus.size else 0.0
    q = min(max(bound, 0.0), 1.0)
    slack = 2.0 * math.sqrt(q * (1.0 - q) / max(1, mus.size))
    return AnticoncentrationReport(
        a=a,
        empirical_fraction=fraction,
        bound=bound,
        slack=slack,
        psi0=psi0,
        passed=fraction >= bound - slack,
    )


# ---------------------------------------------------------------------------
# serialization

def ensemble_to_csv(e: EnsembleSummary, path) -> None:
    """Per-run CSV: seed, mu_bar, sigma_lambda, consensus, steps, residual."""

    def fmt(v):
        if v is None:
            return ""
        if isinstance(v, float):
            return f"{v:.17g}"
        return str(v)

    lines = ["seed,mu_bar,sigma_lambda,consensus,steps,residual"]
    for r in e.records:
        lines.append(
            ",".join(
                fmt(v)
                for v in (
                    r.seed,
                    r.mu_bar,
                    r.sigma_lambda,
                    r.consensus_value,
                    r.steps_to_converge,
                    r.residual_norm,
                )
            )
        )
    Path(path).write_text("\n".join(lines) + "\n")


def ensemble_summary_text(e: EnsembleSummary) -> str:
    lines = [
        f"runs = {e.runs}",
        f"p_init = {e.p_init:.17g}",
        f"base_seed = {e.base_seed}",
        f"discard_count = {e.discard_count}",
    ]
    for name in sorted(e.aggregates):
        agg = e.aggregates[name]
        for stat in ("mean", "std", "min", "max"):
            lines.append(f"{name}.{stat} = {agg[stat]:.17g}")
    return "\n".join(lines) + "\n"


def concentration_report_text(r: ConcentrationReport) -> str:
    lines = [
        f"sigma_mean_rel_dev = {r.sigma_mean_rel_dev:.17g}",
        f"sigma_max_rel_dev = {r.sigma_max_rel_dev:.17g}",
        f"sigma_ok = {str(r.sigma_ok).lower()}",
        f"mu_window = {r.mu_window:.17g}",
        f"mu_fraction = {r.mu_fraction:.17g}",
        f"mu_ok = {str(r.mu_ok).lower()}",
        f"x1_window = {r.x1_window:.17g}",
        f"x1_fraction = {r.x1_fraction:.17g}",
        f"x1_ok = {str(r.x1_ok).lower()}",
        f"pass_fraction = {r.pass_fraction:.17g}",
        f"passed = {str(r.passed).lower()}",
    ]
    return "\n".join(lines) + "\n"


def anticoncentration_report_text(r: AnticoncentrationReport) -> str:
    lines = [
        f"a = {r.a:.17g}",
        f"empirical_fraction = {r.empirical_fraction:.17g}",
        f"bound = {r.bound:.17g}",
        f"slack = {r.slack:.17g}",
        f"psi0 = {r.psi0:.17g}",
        f"passed = {str(r.passed).lower()}",
    ]
    return "\n".join(lines) + "\n"
