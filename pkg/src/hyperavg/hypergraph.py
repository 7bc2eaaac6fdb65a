"""Simple 3-uniform hypergraphs: construction, random generators, file I/O.

Vertices are 0-based contiguous integers.  Hyperedges are unordered triples
of distinct vertices, stored canonically as sorted rows.  Every hypergraph
carries a flat neighbor-pair index so the update engine can iterate over all
(vertex, neighbor pair) incidences without Python-level loops.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DegenerateTripleError, OutOfRangeError, TooSmallTorusError

# All randomness in the package flows through np.random.default_rng(seed).
RNG_ALGORITHM = "pcg64"


@dataclass(frozen=True)
class Hypergraph3:
    """Simple 3-uniform hypergraph plus a per-vertex neighbor-pair index.

    ``triples`` is an (m, 3) int array, each row sorted, rows lexicographically
    sorted and unique.  The incidence arrays enumerate, for every vertex i,
    the pairs {u, v} with {i, u, v} a hyperedge: entry r belongs to vertex
    ``pair_owner[r]`` and pair ``(pair_u[r], pair_v[r])`` with u < v.  Entries
    are grouped per owner (rows ``offsets[i]:offsets[i+1]``) and sorted by
    (owner, u, v), which fixes the summation order of the update engine.
    Instances are immutable and safe to share across threads.
    """

    n: int
    triples: np.ndarray
    pair_owner: np.ndarray
    pair_u: np.ndarray
    pair_v: np.ndarray
    offsets: np.ndarray
    duplicates_collapsed: int = 0

    @property
    def m(self) -> int:
        """Number of hyperedges."""
        return int(self.triples.shape[0])

    def degrees(self) -> np.ndarray:
        """|N_i| for every vertex: the number of neighbor pairs."""
        return np.diff(self.offsets)

    def neighbor_pairs(self, i: int) -> list[tuple[int, int]]:
        """The pairs {u, v} sharing a hyperedge with vertex i."""
        lo, hi = int(self.offsets[i]), int(self.offsets[i + 1])
        return [
            (int(u), int(v))
            for u, v in zip(self.pair_u[lo:hi], self.pair_v[lo:hi])
        ]


@dataclass(frozen=True)
class StateVector:
    """Per-vertex real states at a given time step.

    ``seed`` records the RNG seed the state originated from, if any.
    """

    values: np.ndarray
    time: int = 0
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(
            self, "values", np.asarray(self.values, dtype=np.float64)
        )
        if self.values.ndim != 1:
            raise ValueError("state must be a 1-d array")
        if self.time < 0:
            raise ValueError("time must be nonnegative")

    @property
    def n(self) -> int:
        return int(self.values.shape[0])

    def spread(self) -> float:
        """max - min of the state entries."""
        return float(self.values.max() - self.values.min())


def _assemble(n: int, triples: np.ndarray, duplicates: int = 0) -> Hypergraph3:
    """Build the incidence index from canonical triples."""
    t = triples.reshape(-1, 3)
    owner = np.concatenate([t[:, 0], t[:, 1], t[:, 2]])
    u = np.concatenate([t[:, 1], t[:, 0], t[:, 0]])
    v = np.concatenate([t[:, 2], t[:, 2], t[:, 1]])
    order = np.lexsort((v, u, owner))
    owner, u, v = owner[order], u[order], v[order]
    counts = np.bincount(owner, minlength=n)
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return Hypergraph3(
        n=n,
        triples=t,
        pair_owner=owner,
        pair_u=u,
        pair_v=v,
        offsets=offsets,
        duplicates_collapsed=duplicates,
    )


def from_edge_list(n: int, triples) -> Hypergraph3:
    """Canonicalize a triple list into a simple 3-uniform hypergraph.

    Triples are treated as unordered sets; duplicates are collapsed silently
    and counted in ``duplicates_collapsed``.

    Raises OutOfRangeError for indices outside [0, n) and
    DegenerateTripleError for triples with repeated vertices.
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    arr = np.asarray(list(triples), dtype=np.int64).reshape(-1, 3)
    if arr.size:
        if arr.min() < 0 or arr.max() >= n:
            bad = arr[((arr < 0) | (arr >= n)).any(axis=1)][0]
            raise OutOfRangeError(f"triple {tuple(bad)} outside [0, {n})")
        arr = np.sort(arr, axis=1)
        degenerate = (arr[:, 0] == arr[:, 1]) | (arr[:, 1] == arr[:, 2])
        if degenerate.any():
            bad = arr[degenerate][0]
            raise DegenerateTripleError(f"repeated vertex in triple {tuple(bad)}")
        unique = np.unique(arr, axis=0)
    else:
        unique = arr
    duplicates = arr.shape[0] - unique.shape[0]
    return _assemble(n, unique, duplicates)


def _unrank_colex(ranks: np.ndarray, n: int) -> np.ndarray:
    """Map colex ranks r = C(k,3) + C(j,2) + i back to triples i < j < k."""
    c3 = np.array([math.comb(k, 3) for k in range(n + 1)], dtype=np.int64)
    c2 = np.array([math.comb(j, 2) for j in range(n + 1)], dtype=np.int64)
    k = np.searchsorted(c3, ranks, side="right") - 1
    rem = ranks - c3[k]
    j = np.searchsorted(c2, rem, side="right") - 1
    i = rem - c2[j]
    return np.stack([i, j, k], axis=1)


def generate_erdos_renyi(n: int, p_edge: float, seed: int) -> Hypergraph3:
    """Include each of the C(n,3) triples independently with probability p_edge.

    Deterministic given (n, p_edge, seed).
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    if not 0.0 <= p_edge <= 1.0:
        raise ValueError(f"p_edge must lie in [0, 1], got {p_edge}")
    total = math.comb(n, 3)
    rng = np.random.default_rng(seed)
    mask = rng.random(total) < p_edge
    ranks = np.nonzero(mask)[0]
    triples = _unrank_colex(ranks, n)
    # colex order -> lexicographic order for the canonical representation
    triples = triples[np.lexsort((triples[:, 2], triples[:, 1], triples[:, 0]))]
    return _assemble(n, triples)


def generate_complete(n: int) -> Hypergraph3:
    """All C(n,3) triples."""
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    triples = np.array(list(itertools.combinations(range(n), 3)), dtype=np.int64)
    return _assemble(n, triples)


def generate_torus(L: int, d: int) -> Hypergraph3:
    """Periodic lattice triples {i - e_j, i, i + e_j} on (Z/LZ)^d.

    One hyperedge per (vertex, axis); L >= 5 keeps all triples non-degenerate
    and distinct across centers.
    """
    if L < 5:
        raise TooSmallTorusError(f"need L >= 5, got {L}")
    if d < 1:
        raise ValueError(f"need d >= 1, got {d}")
    n = L**d
    ids = np.arange(n)
    coords = np.stack(np.unravel_index(ids, (L,) * d), axis=0)  # (d, n)
    rows = []
    for axis in range(d):
        minus = coords.copy()
        minus[axis] = (minus[axis] - 1) % L
        plus = coords.copy()
        plus[axis] = (plus[axis] + 1) % L
        rows.append(
            np.stack(
                [
                    np.ravel_multi_index(minus, (L,) * d),
                    ids,
                    np.ravel_multi_index(plus, (L,) * d),
                ],
                axis=1,
            )
        )
    triples = np.unique(np.sort(np.concatenate(rows), axis=1), axis=0)
    return _assemble(n, triples)


def rademacher_init(n: int, p_init: float, seed: int) -> StateVector:
    """i.i.d. +/-1 states, +1 with probability p_init; deterministic per seed."""
    if not 0.0 <= p_init <= 1.0:
        raise ValueError(f"p_init must lie in [0, 1], got {p_init}")
    rng = np.random.default_rng(seed)
    values = np.where(rng.random(n) < p_init, 1.0, -1.0)
    return StateVector(values=values, time=0, seed=seed)


# ---------------------------------------------------------------------------
# file formats (plain text, round-trip exact)

def save_hypergraph(h: Hypergraph3, path) -> None:
    """Write 'n m' then one 'i j k' line per hyperedge."""
    lines = [f"{h.n} {h.m}"]
    lines.extend(f"{a} {b} {c}" for a, b, c in h.triples)
    Path(path).write_text("\n".join(lines) + "\n")


def load_hypergraph(path) -> Hypergraph3:
    """Read the format written by save_hypergraph (triples in any order)."""
    tokens = Path(path).read_text().split()
    if len(tokens) < 2:
        raise ValueError(f"{path}: missing header")
    n, m = int(tokens[0]), int(tokens[1])
    body = tokens[2:]
    if len(body) != 3 * m:
        raise ValueError(f"{path}: expected {3 * m} indices, found {len(body)}")
    triples = np.array(body, dtype=np.int64).reshape(m, 3)
    return from_edge_list(n, triples)


def save_state(s: StateVector, path) -> None:
    """Write 'n t' then one real per line at 17 significant digits."""
    lines = [f"{s.n} {s.time}"]
    lines.extend(f"{v:.17g}" for v in s.values)
    Path(path).write_text("\n".join(lines) + "\n")


def load_state(path) -> StateVector:
    tokens = Path(path).read_text().split()
    if len(tokens) < 2:
        raise ValueError(f"{path}: missing header")
    n, t = int(tokens[0]), int(tokens[1])
    body = tokens[2:]
    if len(body) != n:
        raise ValueError(f"{path}: expected {n} values, found {len(body)}")
    return StateVector(values=np.array(body, dtype=np.float64), time=t)
