"""Closed-form predictions and the executable assumption checker.

Covers the mean-field consensus value on the trivial (all-triples,
repetitions allowed) topology, the theorem-level multiplicative shift,
the exact first-step shift on a concrete hypergraph, a convergence-time
bound from the spectral gap, and a finite-size surrogate for the
theorem's hypotheses.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import InteractionFunction, one_step_closed_form
from .errors import (
    IsolatedVertexError,
    NuNotLessThanOneError,
    SingularDenominatorError,
    ZeroWeightedSumError,
)
from .hypergraph import Hypergraph3, StateVector
from .motif import MotifGraph, SpectralSummary, epsilon, find_M, spectral_summary

# Finite-n surrogates for the asymptotic hypotheses; all are report fields.
DEGREE_LOG_FACTOR = 3.0  # degree_ok iff min |N_i| >= 3 log n
M_EPS_THRESHOLD = 0.2  # M eps = o(1) surrogate
DELTA_WINDOW_FACTOR = 5.0  # factor separating M eps^2 << delta < eps
MOMENT_RATIO_THRESHOLD = 0.1  # third-moment smallness surrogate


@dataclass(frozen=True)
class PredictionReport:
    """Predicted consensus and its ingredients for one initial state."""

    mu_bar: float
    sigma_lambda: float
    shift_theorem: float
    predicted_consensus_exact: float
    predicted_consensus_theorem: float
    T_estimate: int


@dataclass(frozen=True)
class ExtraPHalfReport:
    """The extra clauses that apply only to balanced (p = 1/2) inits."""

    delta: float
    delta_window_ok: bool
    moment_ratio: float
    moment_ok: bool


@dataclass(frozen=True)
class AssumptionReport:
    """Clause-by-clause verdict on the theorem's hypotheses at finite n.

    Thresholds are explicit fields so callers can tighten or audit them.
    """

    n: int
    min_degree: int
    degree_threshold: float
    degree_ok: bool
    connected: bool
    non_bipartite: bool
    nu: float
    epsilon: float
    C: float
    M: int | None
    M_eps_product: float | None
    M_eps_threshold: float
    M_eps_ok: bool
    extra_p_half: ExtraPHalfReport | None
    verdict: bool


def mean_field_consensus(n: int, a: int, f: InteractionFunction) -> float:
    """One-step consensus on the trivial topology with a (+1)s and n-a (-1)s.

    (a-b)/n * (1 + 2ab(1-s(2 lambda)) / (n^2 - 2ab(1-s(2 lambda)))), b = n-a.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not 0 <= a <= n:
        raise ValueError(f"need 0 <= a <= n, got a={a}")
    b = n - a
    q = 2.0 * a * b * (1.0 - f.s_two_lambda)
    denom = n * n - q
    if denom <= 0.0:
        raise SingularDenominatorError(
            f"n^2 - 2ab(1 - s(2 lambda)) = {denom} <= 0"
        )
    return (a - b) / n * (1.0 + q / denom)


def shift_theorem(p_init: float, f: InteractionFunction) -> float:
    """Theorem-level shift 2p(1-p)(1-s(2 lambda)) / (1 - 2p(1-p)(1-s(2 lambda)))."""
    if not 0.0 <= p_init <= 1.0:
        raise ValueError(f"p_init must lie in [0, 1], got {p_init}")
    q = 2.0 * p_init * (1.0 - p_init) * (1.0 - f.s_two_lambda)
    denom = 1.0 - q
    if denom == 0.0:
        raise SingularDenominatorError("1 - 2p(1-p)(1 - s(2 lambda)) = 0")
    return q / denom


def weighted_average(g: MotifGraph, x0: StateVector) -> float:
    """Degree-weighted mean of the states."""
    if g.n == 0 or np.any(g.D == 0):
        bad = np.nonzero(g.D == 0)[0]
        raise IsolatedVertexError(f"vertices with zero degree: {bad[:5].tolist()}")
    D = g.D.astype(np.float64)
    return float((D * x0.values).sum() / D.sum())


def sigma_lambda_exact(
    h: Hypergraph3, g: MotifGraph, x0: StateVector, f: InteractionFunction
) -> float:
    """Exact first-step shift sigma_lambda(x0) on a concrete hypergraph.

    sum_i (sum_j W_ij sigma_j) x_i / sum_i D_i x_i, with the per-vertex
    shifts from the one-step closed form.  Raises ZeroWeightedSumError when
    the degree-weighted sum of states is numerically zero.
    """
    D = g.D.astype(np.float64)
    denom = float((D * x0.values).sum())
    if abs(denom) <= 1e-12 * D.sum():
        raise ZeroWeightedSumError(
            f"degree-weighted state sum {denom} is numerically zero"
        )
    decomp = one_step_closed_form(h, x0, f)
    numer = float((x0.values * (g.W @ decomp.sigma_lambda_i)).sum())
    return numer / denom


def convergence_time_estimate(summary: SpectralSummary, target: float) -> int:
    """Steps needed for nu^t sqrt(Delta n) to fall below target, floored at 0."""
    if target <= 0:
        raise ValueError(f"target must be positive, got {target}")
    nu = summary.nu
    if not 0.0 < nu < 1.0:
        if nu == 0.0:
            return 0 if math.sqrt(summary.delta_ratio * summary.n) <= target else 1
        raise NuNotLessThanOneError(f"nu = {nu} is not in (0, 1)")
    ratio = math.sqrt(summary.delta_ratio * summary.n) / target
    if ratio <= 1.0:
        return 0
    return max(0, math.ceil(math.log(ratio) / math.log(1.0 / nu)))


def predict(
    h: Hypergraph3,
    g: MotifGraph,
    x0: StateVector,
    f: InteractionFunction,
    p_init: float,
    target: float = 1e-9,
    summary: SpectralSummary | None = None,
) -> PredictionReport:
    """Bundle the closed-form predictions for one initial state."""
    if summary is None:
        summary = spectral_summary(g)
    mu = weighted_average(g, x0)
    sigma = sigma_lambda_exact(h, g, x0, f)
    shift = shift_theorem(p_init, f)
    return PredictionReport(
        mu_bar=mu,
        sigma_lambda=sigma,
        shift_theorem=shift,
        predicted_consensus_exact=mu * (1.0 + sigma),
        predicted_consensus_theorem=mu * (1.0 + shift),
        T_estimate=convergence_time_estimate(summary, target),
    )


def _choose_delta(M: int, eps: float, D: np.ndarray) -> tuple[float, bool]:
    """Pick delta in the window M eps^2 << delta < eps (factor-5 margins).

    The primary choice is the geometric mean of M eps^2 and eps, clamped to
    the window; when even the clamped value violates a margin, fall back to
    the concrete witness delta = n^{-3/4}.
    """
    n = D.shape[0]
    Df = D.astype(np.float64)
    rms_cap = math.sqrt(float((Df**2).sum())) / (DELTA_WINDOW_FACTOR * float(D.sum()))
    lo = DELTA_WINDOW_FACTOR * M * eps * eps
    hi = min(eps / DELTA_WINDOW_FACTOR, rms_cap)
    if lo <= hi:
        delta = min(max(math.sqrt(M * eps * eps * eps), lo), hi)
    else:
        delta = n ** (-0.75)

    def window_ok(d: float) -> bool:
        return (
            M * eps * eps <= d / DELTA_WINDOW_FACTOR
            and d <= eps / DELTA_WINDOW_FACTOR
            and d <= rms_cap
        )

    return delta, window_ok(delta)


def check_assumptions(
    h: Hypergraph3,
    g: MotifGraph,
    p_init: float,
    C: float = 4.3,
    m_max: int = 64,
    summary: SpectralSummary | None = None,
) -> AssumptionReport:
    """Evaluate the theorem's hypotheses with explicit finite-n thresholds.

    degree_ok iff min |N_i| >= 3 log n; connectivity and non-bipartiteness
    from the spectral summary; M from the smallest-m inequality with
    eps = epsilon(g, C); M eps flagged ok iff <= 0.2.  For p_init = 1/2 the
    extra clauses pick delta inside the factor-5 window and check the
    third-moment ratio (sum D^2)^{-3/2} sum D^3 <= 0.1.
    """
    if summary is None:
        summary = spectral_summary(g)
    n = h.n
    deg = h.degrees()
    min_degree = int(deg.min()) if n else 0
    degree_threshold = DEGREE_LOG_FACTOR * math.log(n)
    degree_ok = min_degree >= degree_threshold
    eps = epsilon(g, C)
    try:
        M = find_M(g, eps, m_max, summary=summary)
    except NuNotLessThanOneError:
        M = None
    m_eps = None if M is None else M * eps
    m_eps_ok = m_eps is not None and m_eps <= M_EPS_THRESHOLD
    extra = None
    if p_init == 0.5 and M is not None:
        delta, window_ok = _choose_delta(M, eps, g.D)
        D = g.D.astype(np.float64)
        moment_ratio = float((D**3).sum() / (D**2).sum() ** 1.5)
        extra = ExtraPHalfReport(
            delta=delta,
            delta_window_ok=window_ok,
            moment_ratio=moment_ratio,
            moment_ok=moment_ratio <= MOMENT_RATIO_THRESHOLD,
        )
    clauses = [
        degree_ok,
        summary.connected,
        not summary.bipartite,
        m_eps_ok,
    ]
    if extra is not None:
        clauses += [extra.delta_window_ok, extra.moment_ok]
    return AssumptionReport(
        n=n,
        min_degree=min_degree,
        degree_threshold=degree_threshold,
        degree_ok=degree_ok,
        connected=summary.connected,
        non_bipartite=not summary.bipartite,
        nu=summary.nu,
        epsilon=eps,
        C=C,
        M=M,
        M_eps_product=m_eps,
        M_eps_threshold=M_EPS_THRESHOLD,
        M_eps_ok=m_eps_ok,
        extra_p_half=extra,
        verdict=all(clauses),
    )


# ---------------------------------------------------------------------------
# report serialization

def prediction_report_text(r: PredictionReport) -> str:
    lines = [
        f"mu_bar = {r.mu_bar:.17g}",
        f"sigma_lambda = {r.sigma_lambda:.17g}",
        f"shift_theorem = {r.shift_theorem:.17g}",
        f"predicted_consensus_exact = {r.predicted_consensus_exact:.17g}",
        f"predicted_consensus_theorem = {r.predicted_consensus_theorem:.17g}",
        f"T_estimate = {r.T_estimate}",
    ]
    return "\n".join(lines) + "\n"


def assumption_report_text(r: AssumptionReport) -> str:
    lines = [
        f"n = {r.n}",
        f"min_degree = {r.min_degree}",
        f"degree_threshold = {r.degree_threshold:.17g}",
        f"degree_ok = {str(r.degree_ok).lower()}",
        f"connected = {str(r.connected).lower()}",
        f"non_bipartite = {str(r.non_bipartite).lower()}",
        f"nu = {r.nu:.17g}",
        f"epsilon = {r.epsilon:.17g}",
        f"C = {r.C:.17g}",
        f"M = {'notfound' if r.M is None else r.M}",
        f"M_eps_product = "
        + ("notfound" if r.M_eps_product is None else f"{r.M_eps_product:.17g}"),
        f"M_eps_threshold = {r.M_eps_threshold:.17g}",
        f"M_eps_ok = {str(r.M_eps_ok).lower()}",
    ]
    if r.extra_p_half is not None:
        e = r.extra_p_half
        lines += [
            f"delta = {e.delta:.17g}",
            f"delta_window_ok = {str(e.delta_window_ok).lower()}",
            f"moment_ratio = {e.moment_ratio:.17g}",
            f"moment_ok = {str(e.moment_ok).lower()}",
        ]
    lines.append(f"verdict = {'pass' if r.verdict else 'fail'}")
    return "\n".join(lines) + "\n"
