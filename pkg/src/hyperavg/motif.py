"""Weighted motif graph of a 3-uniform hypergraph and its spectral summary.

W_ij counts the hyperedges containing both i and j; D is the diagonal of row
sums (D_i = 2 |N_i|).  The random-walk transition matrix P = D^{-1} W shares
its spectrum with the symmetric normalization D^{-1/2} W D^{-1/2}, which is
what we actually diagonalize.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import IsolatedVertexError, NuNotLessThanOneError
from .hypergraph import Hypergraph3

EIG_TOL = 1e-9  # tolerance for all eigenvalue pass/fail comparisons
DENSE_LIMIT = 2000  # above this, compute only nu iteratively


@dataclass(frozen=True)
class MotifGraph:
    """Symmetric triangle-count weight matrix with its degree vector."""

    n: int
    W: np.ndarray  # (n, n) int64, zero diagonal
    D: np.ndarray  # (n,) int64 row sums


@dataclass(frozen=True)
class SpectralSummary:
    """Spectrum-derived quantities of the transition matrix P = D^{-1} W.

    ``eigenvalues_P`` is sorted descending; it is None when n exceeds the
    dense-solver limit and only nu was computed iteratively.
    """

    n: int
    eigenvalues_P: np.ndarray | None
    nu: float
    delta_ratio: float
    connected: bool
    bipartite: bool
    d_min: int
    d_max: int


@dataclass(frozen=True)
class ComparisonCertificate:
    """Per-index check that P's spectrum tracks a rescaling of W's spectrum."""

    n: int
    lambdas_W: np.ndarray  # sorted descending
    lambdas_P: np.ndarray  # sorted descending
    lhs: np.ndarray  # |lambda_i(P) - 2 lambda_i(W) / (d_max + d_min)|
    rhs: float  # (d_max/d_min) (d_max - d_min) / (d_max + d_min)
    passed: bool


@dataclass(frozen=True)
class ErSpectrumCertificate:
    """Check of the random-hypergraph eigenvalue location claim.

    The top eigenvalue of W should sit near p (n-2)(n-1) and the bulk near
    -p (n-2), both within sqrt(n log n / p).  Margins are bound minus
    deviation (negative margin = violated).
    """

    n: int
    p_edge: float
    bound: float
    top_deviation: float
    bulk_deviation: float
    margins: np.ndarray
    passed: bool


def build_motif(h: Hypergraph3) -> MotifGraph:
    """Accumulate triangle counts from the hyperedge list."""
    W = np.zeros((h.n, h.n), dtype=np.int64)
    t = h.triples
    for a, b in ((0, 1), (0, 2), (1, 2)):
        np.add.at(W, (t[:, a], t[:, b]), 1)
        np.add.at(W, (t[:, b], t[:, a]), 1)
    return MotifGraph(n=h.n, W=W, D=W.sum(axis=1))


def _require_no_isolated(g: MotifGraph) -> None:
    if g.n == 0 or np.any(g.D == 0):
        bad = np.nonzero(g.D == 0)[0]
        raise IsolatedVertexError(f"vertices with zero degree: {bad[:5].tolist()}")


def _adjacency_lists(W: np.ndarray) -> list[np.ndarray]:
    return [np.nonzero(row)[0] for row in W]


def _connected(W: np.ndarray) -> bool:
    n = W.shape[0]
    seen = np.zeros(n, dtype=bool)
    stack = [0]
    seen[0] = True
    adj = _adjacency_lists(W)
    while stack:
        i = stack.pop()
        for j in adj[i]:
            if not seen[j]:
                seen[j] = True
                stack.append(int(j))
    return bool(seen.all())


def _bipartite(W: np.ndarray) -> bool:
    """2-colorability of the nonzero pattern (exact, tolerance-free)."""
    n = W.shape[0]
    color = np.full(n, -1, dtype=np.int8)
    adj = _adjacency_lists(W)
    for start in range(n):
        if color[start] >= 0:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            i = stack.pop()
            for j in adj[i]:
                if color[j] < 0:
                    color[j] = 1 - color[i]
                    stack.append(int(j))
                elif color[j] == color[i]:
                    return False
    return True


def _symmetric_normalization(g: MotifGraph) -> np.ndarray:
    inv_sqrt = 1.0 / np.sqrt(g.D.astype(np.float64))
    return g.W * inv_sqrt[:, None] * inv_sqrt[None, :]


def transition_spectrum(g: MotifGraph) -> np.ndarray:
    """Eigenvalues of P = D^{-1} W, sorted descending (via the symmetric form)."""
    _require_no_isolated(g)
    return np.linalg.eigvalsh(_symmetric_normalization(g))[::-1].copy()


def _nu_iterative(g: MotifGraph, iters: int = 5000, tol: float = 1e-13) -> float:
    """Largest |eigenvalue| orthogonal to the top eigenvector of the
    symmetric normalization (power iteration with deflation)."""
    S = _symmetric_normalization(g)
    v1 = np.sqrt(g.D.astype(np.float64))
    v1 /= np.linalg.norm(v1)
    rng = np.random.default_rng(0)
    y = rng.standard_normal(g.n)
    y -= (v1 @ y) * v1
    y /= np.linalg.norm(y)
    prev = 0.0
    for _ in range(iters):
        z = S @ y
        z -= (v1 @ z) * v1
        norm = np.linalg.norm(z)
        if norm == 0.0:
            return 0.0
        y = z / norm
        if abs(norm - prev) <= tol * max(1.0, norm):
            break
        prev = norm
    return float(abs(y @ (S @ y)))


def spectral_summary(g: MotifGraph, dense_limit: int = DENSE_LIMIT) -> SpectralSummary:
    """Spectrum of P, second eigenvalue nu, degree ratio, connectivity flags."""
    _require_no_isolated(g)
    d_min = int(g.D.min())
    d_max = int(g.D.max())
    connected = _connected(g.W)
    bipartite = _bipartite(g.W)
    if g.n <= dense_limit:
        ev = transition_spectrum(g)
        nu = float(max(abs(ev[1]), abs(ev[-1]))) if g.n > 1 else 0.0
    else:
        ev = None
        nu = _nu_iterative(g)
    return SpectralSummary(
        n=g.n,
        eigenvalues_P=ev,
        nu=nu,
        delta_ratio=d_max / d_min,
        connected=connected,
        bipartite=bipartite,
        d_min=d_min,
        d_max=d_max,
    )


def spectral_comparison_certificate(g: MotifGraph) -> ComparisonCertificate:
    """Check |lambda_i(P) - 2 lambda_i(W)/(d_max+d_min)| against the degree-
    spread bound, index by index (both spectra sorted descending)."""
    _require_no_isolated(g)
    lw = np.linalg.eigvalsh(g.W.astype(np.float64))[::-1].copy()
    lp = transition_spectrum(g)
    d_min = float(g.D.min())
    d_max = float(g.D.max())
    lhs = np.abs(lp - 2.0 * lw / (d_max + d_min))
    rhs = (d_max / d_min) * (d_max - d_min) / (d_max + d_min)
    return ComparisonCertificate(
        n=g.n,
        lambdas_W=lw,
        lambdas_P=lp,
        lhs=lhs,
        rhs=rhs,
        passed=bool(np.all(lhs <= rhs + EIG_TOL)),
    )


def er_spectrum_certificate(g: MotifGraph, p_edge: float) -> ErSpectrumCertificate:
    """Locate W's eigenvalues against the Erdos-Renyi prediction.

    A failed check is a reported verdict, not an error.
    """
    if not 0.0 < p_edge <= 1.0:
        raise ValueError(f"p_edge must lie in (0, 1], got {p_edge}")
    n = g.n
    lw = np.linalg.eigvalsh(g.W.astype(np.float64))[::-1]
    bound = math.sqrt(n * math.log(n) / p_edge)
    deviations = np.empty(n)
    deviations[0] = abs(lw[0] - p_edge * (n - 2) * (n - 1))
    deviations[1:] = np.abs(lw[1:] + p_edge * (n - 2))
    margins = bound - deviations
    return ErSpectrumCertificate(
        n=n,
        p_edge=p_edge,
        bound=bound,
        top_deviation=float(deviations[0]),
        bulk_deviation=float(deviations[1:].max()) if n > 1 else 0.0,
        margins=margins,
        passed=bool(np.all(margins >= -EIG_TOL)),
    )


def epsilon(g: MotifGraph, C: float = 4.3) -> float:
    """Concentration scale C sqrt(log n) max_i sqrt(sum_j (W_ij/D_i)^2)."""
    _require_no_isolated(g)
    if C <= 0:
        raise ValueError(f"C must be positive, got {C}")
    ratios = g.W / g.D.astype(np.float64)[:, None]
    row_norms = np.sqrt((ratios**2).sum(axis=1))
    return float(C * math.sqrt(math.log(g.n)) * row_norms.max())


def find_M(
    g: MotifGraph,
    eps: float,
    m_max: int,
    summary: SpectralSummary | None = None,
) -> int | None:
    """Smallest m in [1, m_max] with nu^m/(1-nu) sqrt(Delta n) <= m eps.

    Returns None when no m qualifies.  Pass a precomputed summary to skip
    the eigensolve.
    """
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    if summary is None:
        summary = spectral_summary(g)
    nu = summary.nu
    if nu >= 1.0 - 1e-12:
        raise NuNotLessThanOneError(f"nu = {nu} is not < 1")
    scale = math.sqrt(summary.delta_ratio * g.n) / (1.0 - nu)
    for m in range(1, m_max + 1):
        if nu**m * scale <= m * eps:
            return m
    return None


# ---------------------------------------------------------------------------
# report serialization

def certificate_report(cert) -> str:
    """'name = value' lines for either certificate record."""
    lines = []
    if isinstance(cert, ComparisonCertificate):
        lines += [
            f"kind = spectral_comparison",
            f"n = {cert.n}",
            f"rhs = {cert.rhs:.17g}",
            f"max_lhs = {cert.lhs.max():.17g}",
            f"passed = {str(cert.passed).lower()}",
        ]
    elif isinstance(cert, ErSpectrumCertificate):
        lines += [
            f"kind = er_spectrum",
            f"n = {cert.n}",
            f"p_edge = {cert.p_edge:.17g}",
            f"bound = {cert.bound:.17g}",
            f"top_deviation = {cert.top_deviation:.17g}",
            f"bulk_deviation = {cert.bulk_deviation:.17g}",
            f"min_margin = {cert.margins.min():.17g}",
            f"passed = {str(cert.passed).lower()}",
        ]
    else:
        raise TypeError(f"not a certificate: {type(cert)!r}")
    return "\n".join(lines) + "\n"


def dump_spectra_csv(g: MotifGraph, path) -> None:
    """CSV with columns index, lambda_W, lambda_P (both sorted descending)."""
    lw = np.linalg.eigvalsh(g.W.astype(np.float64))[::-1]
    lp = transition_spectrum(g)
    lines = ["index,lambda_W,lambda_P"]
    lines.extend(
        f"{i},{w:.17g},{p:.17g}" for i, (w, p) in enumerate(zip(lw, lp))
    )
    Path(path).write_text("\n".join(lines) + "\n")
