"""Seeded Monte Carlo simulation of probabilistic zero forcing.

Trials are simulated in batches with numpy.  The draw deciding whether
white vertex ``w`` turns blue in round ``r`` of trial ``t`` is
``uniforms(seed, STREAM_TRIAL, t, r, w)``, so every trial's trajectory is
fixed by ``(seed, t)`` alone: batch size and worker count cannot change a
result.  Per-trial round counts are aggregated as an integer histogram,
which makes the reported moments independent of aggregation order.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from . import rng
from .exact import ResourceError
from .graph import Graph, GraphError, members, radius_and_center

DEFAULT_TRIALS = 100_000
ROUND_CAP = 1_000_000
_BATCH_CELLS = 1 << 20


class SimulationError(RuntimeError):
    """A trial failed to finish within the hard round cap."""


@dataclass(frozen=True)
class TrialOutcome:
    rounds_to_all_blue: int
    trajectory_lengths: tuple[int, ...] | None = None


@dataclass(frozen=True)
class EstimateReport:
    mean: float
    std_error: float
    trials: int
    seed: int
    quantiles: dict | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


class _Simulator:
    """Vectorized round kernel for one graph."""

    def __init__(self, g: Graph):
        self.g = g
        n = g.n
        a = g.adjacency_matrix()
        sparse = n > 64 and g.edge_count * 8 < n * n
        if sparse:
            self.adj = sp.csr_matrix(a)
            self.closed = sp.csr_matrix(a + np.eye(n))
        else:
            self.adj = a
            self.closed = a + np.eye(n)
        self.deg = np.maximum(np.asarray(g.degrees, dtype=np.float64), 1.0)
        self.vertices = np.arange(n, dtype=np.int64)

    def _times(self, x: np.ndarray, m) -> np.ndarray:
        # x @ m for dense x and either dense or sparse m
        return np.asarray(x @ m)

    def step_probabilities(self, blue: np.ndarray) -> np.ndarray:
        """Per-vertex probability of turning blue this round (rows are trials)."""
        bf = blue.astype(np.float64)
        cnt = self._times(bf, self.closed)
        certain = blue & (cnt >= self.deg)
        uncertain = blue & ~certain
        fire = np.where(uncertain, cnt / self.deg, 0.0)
        log_miss = self._times(np.log1p(-fire), self.adj)
        forced = self._times(certain.astype(np.float64), self.adj) > 0
        return np.where(forced, 1.0, -np.expm1(log_miss))

    def run(
        self,
        z: int,
        trial_ids: np.ndarray,
        seed: int,
        max_rounds: int = ROUND_CAP,
        record: bool = False,
    ) -> tuple[np.ndarray, list | None]:
        """Round counts per trial; trials unfinished after ``max_rounds`` get -1."""
        g = self.g
        start = np.zeros(g.n, dtype=bool)
        start[members(z)] = True
        count = len(trial_ids)
        out = np.full(count, -1, dtype=np.int64)
        blue = np.broadcast_to(start, (count, g.n)).copy()
        alive = np.arange(count)
        trial_key = rng.fold(rng.key(seed, rng.STREAM_TRIAL), trial_ids)
        traj = [[int(start.sum())] for _ in range(count)] if record else None
        r = 0
        while True:
            done = blue.all(axis=1)
            if done.any():
                out[alive[done]] = r
                keep = ~done
                blue, alive, trial_key = blue[keep], alive[keep], trial_key[keep]
            if len(alive) == 0 or r >= max_rounds:
                break
            r += 1
            p = self.step_probabilities(blue)
            u = rng.to_unit(rng.fold(rng.fold(trial_key, r)[:, None], self.vertices[None, :]))
            blue |= u < p
            if record:
                for k, c in zip(alive, blue.sum(axis=1)):
                    traj[k].append(int(c))
        return out, traj


def _check_start(g: Graph, z: int) -> None:
    if z == 0:
        raise GraphError("start set is empty")
    for comp in g.components():
        if not comp & z:
            raise GraphError("start set misses a connected component")


def simulate_trial(
    g: Graph, z: int, trial: int = 0, seed: int = 0, record: bool = False, max_rounds: int = ROUND_CAP
) -> TrialOutcome:
    """Run one trial; its randomness is keyed by ``(seed, trial)``."""
    _check_start(g, z)
    rounds, traj = _Simulator(g).run(z, np.array([trial], dtype=np.int64), seed, max_rounds, record)
    if rounds[0] < 0:
        raise SimulationError(f"trial {trial} did not finish within {max_rounds} rounds")
    return TrialOutcome(int(rounds[0]), tuple(traj[0]) if record else None)


def round_histogram(
    g: Graph, z: int, trials: int, seed: int, threads: int = 1, max_rounds: int = ROUND_CAP
) -> np.ndarray:
    """Counts of trials by finishing round; index ``max_rounds + 1`` holds
    trials still unfinished after ``max_rounds`` rounds."""
    _check_start(g, z)
    if trials < 1:
        raise ValueError("need at least one trial")
    sim = _Simulator(g)
    batch = max(256, _BATCH_CELLS // g.n)
    chunks = [np.arange(lo, min(lo + batch, trials), dtype=np.int64) for lo in range(0, trials, batch)]

    def work(ids):
        rounds, _ = sim.run(z, ids, seed, max_rounds)
        return rounds

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(c) for c in chunks]
    rounds = np.concatenate(parts)
    censored = int((rounds < 0).sum())
    hist = np.bincount(rounds[rounds >= 0], minlength=1)
    if censored:
        if max_rounds >= ROUND_CAP:
            raise SimulationError(f"{censored} trials exceeded the round cap of {ROUND_CAP}")
        hist = np.concatenate([hist, np.zeros(max(0, max_rounds + 2 - len(hist)), dtype=np.int64)])
        hist[max_rounds + 1] = censored
    return hist


def _moments(hist: np.ndarray) -> tuple[float, float]:
    """Mean and standard error from an integer histogram, computed exactly."""
    total = int(hist.sum())
    s1 = sum(int(c) * r for r, c in enumerate(hist))
    s2 = sum(int(c) * r * r for r, c in enumerate(hist))
    mean = Fraction(s1, total)
    if total < 2:
        return float(mean), math.nan
    var = (Fraction(s2) - Fraction(s1 * s1, total)) / (total - 1)
    return float(mean), math.sqrt(var / total)


def _quantile(hist: np.ndarray, alpha, trials: int) -> int:
    need = math.ceil(Fraction(alpha) * trials)
    acc = 0
    for r, c in enumerate(hist):
        acc += int(c)
        if acc >= need:
            return r
    raise AssertionError("histogram does not cover the quantile")


def estimate_ept(
    g: Graph, z: int, trials: int = DEFAULT_TRIALS, seed: int = 0, threads: int = 1, alphas=()
) -> EstimateReport:
    """Monte Carlo estimate of ept(G, Z) with its standard error."""
    if trials < 2:
        raise ValueError("need at least two trials")
    hist = round_histogram(g, z, trials, seed, threads)
    mean, se = _moments(hist)
    quantiles = {str(a): _quantile(hist, a, trials) for a in alphas} or None
    return EstimateReport(mean, se, trials, seed, quantiles)


def estimate_lround(
    g: Graph, b: int, rounds: int, trials: int = DEFAULT_TRIALS, seed: int = 0, threads: int = 1
) -> EstimateReport:
    """Fraction of trials all blue after ``rounds`` rounds, with binomial SE."""
    if trials < 2:
        raise ValueError("need at least two trials")
    if rounds < 0:
        raise ValueError("rounds must be nonnegative")
    hist = round_histogram(g, b, trials, seed, threads, max_rounds=rounds)
    hits = int(hist[: rounds + 1].sum())
    indicator = np.array([trials - hits, hits], dtype=np.int64)
    mean, se = _moments(indicator)
    return EstimateReport(mean, se, trials, seed)


def estimate_confidence_time(
    g: Graph, z: int, alpha, trials: int = DEFAULT_TRIALS, seed: int = 0, threads: int = 1
) -> int:
    """Empirical α-quantile of the propagation time."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie strictly between 0 and 1, got {alpha}")
    hist = round_histogram(g, z, trials, seed, threads)
    return _quantile(hist, alpha, trials)


MAX_CANDIDATES = 4


def start_candidates(g: Graph, limit: int = MAX_CANDIDATES) -> list[int]:
    """Center vertices of largest degree (ties to the lowest index), at most ``limit``.

    Simulating every vertex is too slow for large graphs, so Monte Carlo
    minimization over start vertices is restricted to these.
    """
    center = members(radius_and_center(g)[1])
    return sorted(sorted(center, key=lambda v: -g.deg(v))[:limit])


def estimate_ept_graph(
    g: Graph, trials: int = DEFAULT_TRIALS, seed: int = 0, threads: int = 1, candidates=None
) -> tuple[EstimateReport, int]:
    """Smallest MC ept over single-vertex starts (see :func:`start_candidates`).

    Taking the minimum of several noisy means biases the estimate slightly low.
    """
    if candidates is None:
        candidates = start_candidates(g)
    best = None
    for v in candidates:
        rep = estimate_ept(g, 1 << v, trials, seed, threads)
        if best is None or rep.mean < best[0].mean:
            best = (rep, v)
    return best


__all__ = [
    "EstimateReport",
    "ResourceError",
    "SimulationError",
    "TrialOutcome",
    "estimate_confidence_time",
    "estimate_ept",
    "estimate_ept_graph",
    "estimate_lround",
    "round_histogram",
    "simulate_trial",
    "start_candidates",
]
