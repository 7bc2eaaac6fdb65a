"""Three-body averaging dynamics on 3-uniform hypergraphs.

Each step replaces a vertex's state by a weighted average of the pair means
(x_j + x_k)/2 over its neighbor pairs, weighted by s(lambda |x_j - x_k|)
where s is analytic at 0 with s(0) = s'(0) = 1.  The module also provides
the lambda = 0 linear engine, the exact one-step closed form on binary
states, the affine conjugacy to {-1, +1} states, and the exact nonlinear
residual against the linear evolution.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadRangeError,
    IsolatedVertexError,
    LambdaOutOfRangeError,
    NonBinaryStateError,
    NonpositiveNormalizationError,
    SingularLocalNormalizationError,
)
from .hypergraph import Hypergraph3, StateVector
from .motif import MotifGraph

LAMBDA_PROVED = 0.5  # |lambda| below this is the analytically covered regime


@dataclass(frozen=True)
class InteractionFunction:
    """The pair-weight function s applied to lambda |x_j - x_k|.

    ``kind`` is "exponential" (s(x) = e^x) or "power_series" (a truncated
    power series with coefficients a_0, a_1, ..., a_K).  The leading
    coefficients are pinned to a_0 = a_1 = 1.
    """

    kind: str
    lam: float
    coefficients: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.kind not in ("exponential", "power_series"):
            raise ValueError(f"unknown interaction kind {self.kind!r}")
        if self.kind == "power_series":
            if self.coefficients is None or len(self.coefficients) < 2:
                raise ValueError("power_series needs coefficients (a_0, a_1, ...)")
            if self.coefficients[0] != 1.0 or self.coefficients[1] != 1.0:
                raise ValueError(
                    f"require a_0 = a_1 = 1, got {self.coefficients[:2]}"
                )
            object.__setattr__(
                self, "coefficients", tuple(float(a) for a in self.coefficients)
            )
        elif self.coefficients is not None:
            raise ValueError("exponential takes no coefficients")
        if abs(self.lam) >= LAMBDA_PROVED:
            warnings.warn(
                f"|lambda| = {abs(self.lam)} >= {LAMBDA_PROVED}: outside the "
                "analytically covered coupling range; results are exploratory",
                stacklevel=2,
            )

    def value(self, x):
        """s(x), vectorized."""
        if self.kind == "exponential":
            return np.exp(x)
        x = np.asarray(x, dtype=np.float64)
        out = np.zeros_like(x)
        for a in reversed(self.coefficients):
            out = out * x + a
        return out

    def strength(self, diff):
        """Pair weight s(lambda |diff|)."""
        return self.value(self.lam * np.abs(diff))

    @property
    def s_two_lambda(self) -> float:
        """s(2 lambda), the quantity entering every closed-form shift."""
        return float(self.value(2.0 * self.lam))


def exponential(lam: float) -> InteractionFunction:
    """The canonical choice s(x) = e^x."""
    return InteractionFunction(kind="exponential", lam=lam)


def power_series(lam: float, coefficients) -> InteractionFunction:
    """A degree-K truncation s(x) = sum a_k x^k with a_0 = a_1 = 1."""
    return InteractionFunction(
        kind="power_series", lam=lam, coefficients=tuple(coefficients)
    )


@dataclass(frozen=True)
class SimulationTrace:
    """Trajectory summary of a nonlinear run."""

    states: list  # StateVector snapshots: first, every `stride`, last
    spread_history: np.ndarray  # spread at t = 0 .. final
    consensus_value: float  # degree-weighted mean of the final state
    steps_to_converge: int | None  # first t with spread <= tol, else None
    tol: float

    @property
    def final_state(self) -> StateVector:
        return self.states[-1]


@dataclass(frozen=True)
class OneStepDecomposition:
    """Exact decomposition x1_i = mu_bar_i (1 + sigma_lambda_i) on binary states."""

    c: np.ndarray  # discordant neighbor-pair counts
    mu_bar_i: np.ndarray  # local degree-weighted neighbor averages
    sigma_lambda_i: np.ndarray  # local multiplicative shifts
    x1: np.ndarray  # the closed-form next state


def _require_degrees(h: Hypergraph3) -> np.ndarray:
    deg = h.degrees()
    if h.n == 0 or np.any(deg == 0):
        bad = np.nonzero(deg == 0)[0]
        raise IsolatedVertexError(f"vertices with no neighbor pairs: {bad[:5].tolist()}")
    return deg


def step(h: Hypergraph3, x: StateVector, f: InteractionFunction) -> StateVector:
    """One synchronous nonlinear update.

    The per-vertex sums run over the incidence index in its fixed
    (owner, u, v) order, so results are bit-reproducible.
    """
    _require_degrees(h)
    v = x.values
    xu = v[h.pair_u]
    xv = v[h.pair_v]
    w = f.strength(xu - xv)
    z = np.bincount(h.pair_owner, weights=w, minlength=h.n)
    bad = np.nonzero(z <= 0.0)[0]
    if bad.size:
        i = int(bad[0])
        raise NonpositiveNormalizationError(i, float(z[i]))
    num = np.bincount(h.pair_owner, weights=w * 0.5 * (xu + xv), minlength=h.n)
    return StateVector(values=num / z, time=x.time + 1, seed=x.seed)


def linear_step(g: MotifGraph, x: StateVector) -> StateVector:
    """One step of the linear dynamics x' = P x with P = D^{-1} W."""
    if g.n == 0 or np.any(g.D == 0):
        bad = np.nonzero(g.D == 0)[0]
        raise IsolatedVertexError(f"vertices with zero degree: {bad[:5].tolist()}")
    values = (g.W @ x.values) / g.D
    return StateVector(values=values, time=x.time + 1, seed=x.seed)


def run(
    h: Hypergraph3,
    x0: StateVector,
    f: InteractionFunction,
    tol: float = 1e-9,
    t_max: int = 1000,
    stride: int | None = None,
) -> SimulationTrace:
    """Iterate `step` until the spread drops below tol or t_max is reached.

    Snapshots are kept at t = 0, every `stride` steps, and the final step.
    The default stride is 1 for n <= 1000 and 10 above.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    deg = _require_degrees(h)
    if stride is None:
        stride = 1 if h.n <= 1000 else 10
    states = [x0]
    spreads = [x0.spread()]
    steps_to_converge: int | None = 0 if spreads[0] <= tol else None
    x = x0
    t = 0
    while steps_to_converge is None and t < t_max:
        x = step(h, x, f)
        t += 1
        spreads.append(x.spread())
        if t % stride == 0:
            states.append(x)
        if spreads[-1] <= tol:
            steps_to_converge = t
    if states[-1] is not x:
        states.append(x)
    D_i = 2.0 * deg
    consensus = float((D_i * x.values).sum() / D_i.sum())
    return SimulationTrace(
        states=states,
        spread_history=np.array(spreads),
        consensus_value=consensus,
        steps_to_converge=steps_to_converge,
        tol=tol,
    )


def one_step_closed_form(
    h: Hypergraph3, x0: StateVector, f: InteractionFunction
) -> OneStepDecomposition:
    """Exact first update on binary states: x1_i = mu_bar_i (1 + sigma_i).

    c_i counts the neighbor pairs with x_j != x_k; sigma_i =
    c_i (1 - s(2 lambda)) / (|N_i| - c_i (1 - s(2 lambda))).
    """
    deg = _require_degrees(h)
    v = x0.values
    if not np.all(np.abs(v) == 1.0):
        raise NonBinaryStateError("states must all be -1 or +1")
    discordant = (v[h.pair_u] != v[h.pair_v]).astype(np.float64)
    c = np.bincount(h.pair_owner, weights=discordant, minlength=h.n)
    # mu_bar_i = (1/D_i) sum_j W_ij x_j; each neighbor pair contributes x_u + x_v
    pair_sums = np.bincount(
        h.pair_owner, weights=v[h.pair_u] + v[h.pair_v], minlength=h.n
    )
    mu_bar_i = pair_sums / (2.0 * deg)
    denom = deg - c * (1.0 - f.s_two_lambda)
    bad = np.nonzero(denom <= 0.0)[0]
    if bad.size:
        i = int(bad[0])
        raise SingularLocalNormalizationError(
            f"denominator |N_{i}| - c_{i} (1 - s(2 lambda)) = {denom[i]} <= 0"
        )
    sigma_i = c * (1.0 - f.s_two_lambda) / denom
    return OneStepDecomposition(
        c=c.astype(np.int64),
        mu_bar_i=mu_bar_i,
        sigma_lambda_i=sigma_i,
        x1=mu_bar_i * (1.0 + sigma_i),
    )


def rescale_to_pm1(
    y0: StateVector, lambda_tilde: float, s_lo: float, s_hi: float
):
    """Conjugate a two-level chain on {s_lo, s_hi} to the canonical {-1, +1}.

    Returns (x0, lambda, (scale, offset)) with y^(t) = scale x^(t) + offset;
    scale = (s_hi - s_lo)/2 and offset = (s_lo + s_hi)/2.
    """
    if not s_lo < s_hi:
        raise ValueError(f"need s_lo < s_hi, got ({s_lo}, {s_hi})")
    width = s_hi - s_lo
    if not abs(lambda_tilde) < 1.0 / width:
        raise LambdaOutOfRangeError(
            f"|lambda_tilde| = {abs(lambda_tilde)} >= 1/(s_hi - s_lo) = {1.0 / width}"
        )
    v = y0.values
    if not np.all((v == s_lo) | (v == s_hi)):
        raise BadRangeError(f"states must all be {s_lo} or {s_hi}")
    offset = 0.5 * (s_lo + s_hi)
    scale = 0.5 * width
    x0 = StateVector(values=(v - offset) / scale, time=y0.time, seed=y0.seed)
    return x0, lambda_tilde * scale, (scale, offset)


def nonlinear_residual(
    h: Hypergraph3,
    g: MotifGraph,
    x1: StateVector,
    f: InteractionFunction,
    t: int,
):
    """R^(t)(x1) = (t nonlinear steps from x1) - (t linear steps from x1).

    Both evolutions are computed exactly; no expansion is involved.
    Returns the residual vector and its infinity norm.
    """
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    nonlinear = x1
    linear = x1
    for _ in range(t):
        nonlinear = step(h, nonlinear, f)
        linear = linear_step(g, linear)
    residual = nonlinear.values - linear.values
    return residual, float(np.abs(residual).max()) if residual.size else 0.0


# ---------------------------------------------------------------------------
# trace export

def trace_to_csv(trace: SimulationTrace, path) -> None:
    """Long-form CSV of the stored snapshots: columns t, vertex, value."""
    from pathlib import Path

    lines = ["t,vertex,value"]
    for s in trace.states:
        lines.extend(
            f"{s.time},{i},{val:.17g}" for i, val in enumerate(s.values)
        )
    Path(path).write_text("\n".join(lines) + "\n")


def trace_summary(trace: SimulationTrace) -> str:
    """'name = value' summary record of a run."""
    steps = trace.steps_to_converge
    lines = [
        f"consensus_value = {trace.consensus_value:.17g}",
        f"steps_to_converge = {'none' if steps is None else steps}",
        f"final_spread = {trace.spread_history[-1]:.17g}",
        f"tol = {trace.tol:.17g}",
    ]
    return "\n".join(lines) + "\n"
