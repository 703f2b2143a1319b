"""Exact probabilistic zero forcing via the absorbing Markov chain on blue sets.

States are blue bitmasks reachable from the start set.  Every transition
goes to a superset, so expected absorption times follow from one backward
pass in decreasing popcount order, and round-by-round distributions from
forward propagation.

Exact mode (the default) works in :class:`fractions.Fraction`; ``exact=False``
switches to binary64 for chains whose denominators get out of hand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .graph import Graph, GraphError, members, popcount
from .kernels import round_kernel

DEFAULT_MAX_STATES = 2_000_000
DEFAULT_FRONTIER_CAP = 24
MAX_ROUNDS = 1_000_000

Prob = Fraction | float


class ResourceError(RuntimeError):
    """A configured cap was exceeded; ``cap`` names it."""

    def __init__(self, cap: str, message: str):
        super().__init__(message)
        self.cap = cap


def successor_distribution(
    g: Graph, blue: int, frontier_cap: int = DEFAULT_FRONTIER_CAP, exact: bool = True
) -> dict[int, Prob]:
    """Distribution of the blue set after one round from ``blue``."""
    kernel = round_kernel(g, blue, exact)
    sure = 0
    coins = []
    for w, p in kernel.items():
        if p == 1:
            sure |= 1 << w
        elif p > 0:
            coins.append((1 << w, p))
    if len(coins) > frontier_cap:
        raise ResourceError(
            "frontier",
            f"{len(coins)} uncertain white vertices exceed the frontier cap of "
            f"{frontier_cap}; use Monte Carlo (--mode mc)",
        )
    base = blue | sure
    if not exact:
        dist = {base: 1.0}
        for bit, p in coins:
            q = 1.0 - p
            nxt = {}
            for s, m in dist.items():
                nxt[s] = m * q
                nxt[s | bit] = m * p
            dist = nxt
        return dist
    # integer numerators over the product of the coin denominators
    denom = 1
    num = {base: 1}
    for bit, p in coins:
        a, b = p.numerator, p.denominator
        c = b - a
        denom *= b
        nxt = {}
        for s, m in num.items():
            nxt[s] = m * c
            nxt[s | bit] = m * a
        num = nxt
    return {s: Fraction(m, denom) for s, m in num.items()}


@dataclass
class StateChain:
    """Reachable blue sets with their one-round transition probabilities.

    ``states[0]`` is the start set (the first root when several were given).
    ``transitions[i]`` lists ``(j, p)`` for successors ``j != i``;
    ``self_loop[i]`` is the probability of no change.
    """

    graph: Graph
    roots: tuple[int, ...]
    states: list[int]
    index: dict[int, int]
    transitions: list[list[tuple[int, Prob]]]
    self_loop: list[Prob]
    exact: bool = True
    _expected: list | None = field(default=None, repr=False)

    @property
    def start(self) -> int:
        return self.roots[0]

    @property
    def absorbing(self) -> int:
        return self.index[self.graph.full]

    def __len__(self) -> int:
        return len(self.states)

    def outgoing(self, i: int) -> Iterator[tuple[int, Prob]]:
        yield i, self.self_loop[i]
        yield from self.transitions[i]

    @cached_property
    def _scaled(self) -> tuple[object, list[object], list[list[tuple[int, object]]]]:
        """Transition probabilities as integers over a common denominator."""
        if not self.exact:
            return 1.0, list(self.self_loop), self.transitions
        denom = 1
        for i in range(len(self.states)):
            for _, p in self.outgoing(i):
                denom = math.lcm(denom, p.denominator)
        loops = [p.numerator * (denom // p.denominator) for p in self.self_loop]
        trans = [
            [(j, p.numerator * (denom // p.denominator)) for j, p in row]
            for row in self.transitions
        ]
        return denom, loops, trans


def _check_start(g: Graph, z: int) -> None:
    if z == 0:
        raise GraphError("start set is empty")
    if z & ~g.full:
        raise GraphError("start set has vertices outside the graph")
    for comp in g.components():
        if not comp & z:
            raise GraphError("start set misses a connected component")


def build_joint_chain(
    g: Graph,
    roots: Sequence[int],
    max_states: int = DEFAULT_MAX_STATES,
    frontier_cap: int = DEFAULT_FRONTIER_CAP,
    exact: bool = True,
) -> StateChain:
    """Chain over the union of the states reachable from each root set."""
    for z in roots:
        _check_start(g, z)
    states: list[int] = []
    index: dict[int, int] = {}
    for z in roots:
        if z not in index:
            index[z] = len(states)
            states.append(z)
    transitions: list[list[tuple[int, Prob]]] = []
    self_loop: list[Prob] = []
    i = 0
    while i < len(states):
        s = states[i]
        dist = successor_distribution(g, s, frontier_cap, exact)
        row = []
        loop: Prob = Fraction(0) if exact else 0.0
        for t, p in dist.items():
            if t == s:
                loop = p
                continue
            j = index.get(t)
            if j is None:
                if len(states) >= max_states:
                    raise ResourceError(
                        "states",
                        f"state count exceeds the cap of {max_states}; use Monte Carlo (--mode mc)",
                    )
                j = index[t] = len(states)
                states.append(t)
            row.append((j, p))
        transitions.append(row)
        self_loop.append(loop)
        i += 1
    return StateChain(g, tuple(roots), states, index, transitions, self_loop, exact)


def build_chain(
    g: Graph,
    z: int,
    max_states: int = DEFAULT_MAX_STATES,
    frontier_cap: int = DEFAULT_FRONTIER_CAP,
    exact: bool = True,
) -> StateChain:
    return build_joint_chain(g, [z], max_states, frontier_cap, exact)


def expected_times(chain: StateChain) -> list[Prob]:
    """Expected rounds to absorption from every state of the chain."""
    if chain._expected is not None:
        return chain._expected
    zero, one = (Fraction(0), Fraction(1)) if chain.exact else (0.0, 1.0)
    n_states = len(chain.states)
    exp: list[Prob] = [zero] * n_states
    order = sorted(range(n_states), key=lambda i: -popcount(chain.states[i]))
    full = chain.graph.full
    for i in order:
        if chain.states[i] == full:
            continue
        stay = chain.self_loop[i]
        if stay == 1:
            raise AssertionError(f"state {chain.states[i]:#x} can never change")
        acc = one
        for j, p in chain.transitions[i]:
            acc += p * exp[j]
        exp[i] = acc / (one - stay)
    chain._expected = exp
    return exp


def ept_from_chain(chain: StateChain, z: int | None = None) -> Prob:
    return expected_times(chain)[chain.index[chain.start if z is None else z]]


def ept_exact(g: Graph, z: int, **caps) -> Prob:
    """Expected propagation time ept(G, Z)."""
    if z == g.full:
        return Fraction(0) if caps.get("exact", True) else 0.0
    return ept_from_chain(build_chain(g, z, **caps))


def singleton_chain(g: Graph, **caps) -> StateChain:
    if not g.is_connected():
        raise GraphError("graph is disconnected")
    return build_joint_chain(g, [1 << v for v in range(g.n)], **caps)


def ept_graph(g: Graph, **caps) -> tuple[Prob, int]:
    """Minimum ept over single-vertex starts, with the lowest-index argmin."""
    chain = singleton_chain(g, **caps)
    exp = expected_times(chain)
    vals = [exp[chain.index[1 << v]] for v in range(g.n)]
    best = min(vals)
    return best, vals.index(best)


# --------------------------------------------------------------------------
# forward propagation


def _forward(chain: StateChain, root: int) -> Iterator[tuple[object, dict[int, object]]]:
    """Yield ``(scale, masses)`` for rounds 0, 1, 2, ...; the probability of
    state ``i`` after the round is ``masses[i] / scale``."""
    denom, loops, trans = chain._scaled
    mass = {chain.index[root]: 1 if chain.exact else 1.0}
    scale = 1 if chain.exact else 1.0
    while True:
        yield scale, mass
        nxt: dict[int, object] = {}
        for i, m in mass.items():
            lp = loops[i]
            if lp:
                nxt[i] = nxt.get(i, 0) + m * lp
            for j, p in trans[i]:
                nxt[j] = nxt.get(j, 0) + m * p
        mass = nxt
        if chain.exact:
            scale *= denom


def _as_prob(chain: StateChain, num, scale) -> Prob:
    return Fraction(num, scale) if chain.exact else float(num)


def round_distribution(chain: StateChain, rounds: int, root: int | None = None) -> dict[int, Prob]:
    """Distribution over blue sets after ``rounds`` rounds."""
    if rounds < 0:
        raise ValueError("rounds must be nonnegative")
    root = chain.start if root is None else root
    for r, (scale, mass) in enumerate(_forward(chain, root)):
        if r == rounds:
            return {chain.states[i]: _as_prob(chain, m, scale) for i, m in mass.items() if m}
    raise AssertionError("unreachable")


def absorption_curve(chain: StateChain, rounds: int, root: int | None = None) -> list[Prob]:
    """``P(all blue after r rounds)`` for ``r = 0..rounds``."""
    root = chain.start if root is None else root
    final = chain.index.get(chain.graph.full)
    out = []
    for r, (scale, mass) in enumerate(_forward(chain, root)):
        out.append(_as_prob(chain, mass.get(final, 0), scale))
        if r == rounds:
            return out
    raise AssertionError("unreachable")


def lround_probability(g: Graph, b: int, rounds: int, **caps) -> Prob:
    """Probability that everything is blue after ``rounds`` rounds from ``b``."""
    exact = caps.get("exact", True)
    if b == 0:
        return Fraction(0) if exact else 0.0
    if b == g.full:
        return Fraction(1) if exact else 1.0
    return absorption_curve(build_chain(g, b, **caps), rounds)[-1]


def lround_graph(g: Graph, rounds: int, **caps) -> tuple[Prob, int]:
    """Maximum ℓ-round probability over single-vertex starts and its argmax."""
    chain = singleton_chain(g, **caps)
    vals = [absorption_curve(chain, rounds, 1 << v)[-1] for v in range(g.n)]
    best = max(vals)
    return best, vals.index(best)


def _check_alpha(alpha) -> None:
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie strictly between 0 and 1, got {alpha}")


def confidence_from_chain(chain: StateChain, alpha, root: int | None = None) -> int:
    """Least t with ``P(all blue after t rounds) >= alpha``."""
    _check_alpha(alpha)
    root = chain.start if root is None else root
    if chain.exact and not isinstance(alpha, Fraction):
        alpha = Fraction(alpha)
    final = chain.index.get(chain.graph.full)
    for t, (scale, mass) in enumerate(_forward(chain, root)):
        m = mass.get(final, 0)
        if chain.exact:
            if m * alpha.denominator >= alpha.numerator * scale:
                return t
        elif m >= alpha:
            return t
        if t >= MAX_ROUNDS:
            raise ResourceError("rounds", f"no confidence {alpha} within {MAX_ROUNDS} rounds")
    raise AssertionError("unreachable")


def confidence_time(g: Graph, z: int, alpha, **caps) -> int:
    """α-confidence propagation time from the start set ``z``."""
    _check_alpha(alpha)
    if z == g.full:
        return 0
    return confidence_from_chain(build_chain(g, z, **caps), alpha)


def confidence_time_graph(g: Graph, alpha, **caps) -> tuple[int, int]:
    """Minimum α-confidence time over single-vertex starts and its argmin."""
    _check_alpha(alpha)
    chain = singleton_chain(g, **caps)
    vals = [confidence_from_chain(chain, alpha, 1 << v) for v in range(g.n)]
    best = min(vals)
    return best, vals.index(best)


def ept_series(chain: StateChain, horizon: int) -> tuple[Prob, Prob]:
    """Truncated absorption-time series and a bound on what it leaves out.

    Returns ``(partial, tail)`` with ``partial <= ept <= partial + tail``,
    where ``partial = sum_{r<=horizon} r * (F(r) - F(r-1))`` and ``F`` is the
    absorption curve.  The tail uses ``R + U`` times the unabsorbed mass at
    ``R = horizon``; ``U`` bounds the remaining time from any state as
    (number of vertices) times the longest mean sojourn.
    """
    curve = absorption_curve(chain, horizon)
    partial = sum(r * (curve[r] - curve[r - 1]) for r in range(1, horizon + 1))
    one = Fraction(1) if chain.exact else 1.0
    worst = max(
        (one / (one - chain.self_loop[i]) for i, s in enumerate(chain.states) if s != chain.graph.full),
        default=one,
    )
    remaining = chain.graph.n * worst
    return partial, (one - curve[-1]) * (horizon + remaining)

