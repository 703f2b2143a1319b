"""Throttling numbers, zero forcing number, and Kang-Yi's P_B(G)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from . import exact
from .graph import Graph, GraphError, greedy_dominating_set, k_center_seed, members, popcount, to_mask
from .kernels import is_zero_forcing_set

EXHAUSTIVE_CAP = 12


@dataclass(frozen=True)
class ThrottleResult:
    value: Fraction | int
    witness: int
    time: Fraction | int
    mode: str

    @property
    def witness_vertices(self) -> list[int]:
        return members(self.witness)


@dataclass(frozen=True)
class KangYiResult:
    k0: int | None  # None only for the empty start set
    probability: Fraction


def th_pzf(g: Graph, z: int, **caps) -> Fraction:
    """|Z| + ept(G, Z)."""
    return popcount(z) + exact.ept_exact(g, z, **caps)


def _all_subsets_chain(g: Graph, **caps) -> exact.StateChain:
    return exact.build_joint_chain(g, list(range(1, g.full + 1)), **caps)


def _heuristic_candidates(g: Graph) -> list[int]:
    seen = []
    for k in range(1, g.n + 1):
        s = k_center_seed(g, k)
        if s not in seen:
            seen.append(s)
    d = greedy_dominating_set(g)
    if d not in seen:
        seen.append(d)
    return seen


def _check(g: Graph, mode: str, cap: int) -> None:
    if not g.is_connected():
        raise GraphError("graph is disconnected")
    if mode not in ("exhaustive", "heuristic"):
        raise ValueError(f"mode must be 'exhaustive' or 'heuristic', not {mode!r}")
    if mode == "exhaustive" and g.n > cap:
        raise exact.ResourceError(
            "exhaustive", f"exhaustive search needs n <= {cap}, graph has n = {g.n}"
        )


def th_pzf_graph(g: Graph, mode: str = "exhaustive", cap: int = EXHAUSTIVE_CAP, **caps) -> ThrottleResult:
    """Probabilistic throttling number min_Z (|Z| + ept(G, Z))."""
    _check(g, mode, cap)
    if mode == "heuristic":
        best = None
        for z in _heuristic_candidates(g):
            t = exact.ept_exact(g, z, **caps)
            if best is None or popcount(z) + t < best[0]:
                best = (popcount(z) + t, z, t)
        return ThrottleResult(best[0], best[1], best[2], mode)
    chain = _all_subsets_chain(g, **caps)
    times = exact.expected_times(chain)
    best = None
    for size in range(1, g.n + 1):
        if best is not None and size >= best[0]:
            break
        for combo in combinations(range(g.n), size):
            z = to_mask(combo)
            t = times[chain.index[z]]
            if best is None or size + t < best[0]:
                best = (size + t, z, t)
    return ThrottleResult(best[0], best[1], best[2], mode)


def th_alpha(g: Graph, alpha, mode: str = "exhaustive", cap: int = EXHAUSTIVE_CAP, **caps) -> ThrottleResult:
    """Confidence throttling number min_Z (|Z| + ptpf(G, Z, alpha))."""
    _check(g, mode, cap)
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie strictly between 0 and 1, got {alpha}")
    if mode == "heuristic":
        best = None
        for z in _heuristic_candidates(g):
            t = exact.confidence_time(g, z, alpha, **caps)
            if best is None or popcount(z) + t < best[0]:
                best = (popcount(z) + t, z, t)
        return ThrottleResult(best[0], best[1], best[2], mode)
    chain = _all_subsets_chain(g, **caps)
    best = None
    for size in range(1, g.n + 1):
        if best is not None and size >= best[0]:
            break
        for combo in combinations(range(g.n), size):
            z = to_mask(combo)
            t = exact.confidence_from_chain(chain, alpha, z) if z != g.full else 0
            if best is None or size + t < best[0]:
                best = (size + t, z, t)
    return ThrottleResult(best[0], best[1], best[2], mode)


def zero_forcing_number(g: Graph, cap: int = EXHAUSTIVE_CAP) -> tuple[int, int]:
    """Minimum zero forcing set size and a witness, by increasing-size search."""
    if g.n > cap:
        raise exact.ResourceError("exhaustive", f"zero forcing number needs n <= {cap}")
    for size in range(1, g.n + 1):
        for combo in combinations(range(g.n), size):
            z = to_mask(combo)
            if is_zero_forcing_set(g, z):
                return size, z
    raise AssertionError("V(G) is always a zero forcing set")


def kang_yi_probability(g: Graph, b: int, **caps) -> KangYiResult:
    """P_B(G): probability that the blue set is a zero forcing set at the
    first round ``k0`` where that is possible at all."""
    if b == 0:
        return KangYiResult(None, Fraction(0))
    chain = exact.build_chain(g, b, **caps)
    verdict: dict[int, bool] = {}

    def zf(i: int) -> bool:
        if i not in verdict:
            verdict[i] = is_zero_forcing_set(g, chain.states[i])
        return verdict[i]

    for k, (scale, mass) in enumerate(exact._forward(chain, b)):
        hit = [m for i, m in mass.items() if m and zf(i)]
        if hit:
            return KangYiResult(k, exact._as_prob(chain, sum(hit), scale))
        if k > len(chain.states) + exact.MAX_ROUNDS:
            raise AssertionError("no zero forcing set ever reachable")
    raise AssertionError("unreachable")
