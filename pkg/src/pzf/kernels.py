"""Color change rules: probabilistic, standard zero forcing, and PSD.

Blue sets are int bitmasks.  All rules evaluate forces against the blue
set at the start of the round; nothing chains within a round.
"""

from __future__ import annotations

from fractions import Fraction

from .graph import Graph, members, popcount


def force_probability(g: Graph, u: int, w: int, blue: int) -> Fraction:
    """Probability that blue ``u`` forces white neighbor ``w`` this round,
    ``|N[u] & B| / deg u``."""
    if not blue >> u & 1:
        raise ValueError(f"vertex {u} is not blue")
    if blue >> w & 1:
        raise ValueError(f"vertex {w} is not white")
    if not g.has_edge(u, w):
        raise ValueError(f"vertices {u} and {w} are not adjacent")
    return Fraction(popcount(g.closed(u) & blue), g.deg(u))


def _fire_probabilities(g: Graph, blue: int, exact: bool) -> dict[int, Fraction | float]:
    """Per-blue-vertex firing probability for vertices with a white neighbor."""
    out = {}
    for u in members(blue):
        if g.adj[u] & ~blue:
            c, d = popcount(g.closed(u) & blue), g.deg(u)
            out[u] = Fraction(c, d) if exact else c / d
    return out


def round_kernel(g: Graph, blue: int, exact: bool = True) -> dict[int, Fraction | float]:
    """Probability that each white vertex turns blue this round.

    White vertices without a blue neighbor are left out.
    """
    fire = _fire_probabilities(g, blue, exact)
    one = Fraction(1) if exact else 1.0
    miss: dict[int, Fraction | float] = {}
    for u, p in fire.items():
        for w in members(g.adj[u] & ~blue):
            miss[w] = miss.get(w, one) * (one - p)
    return {w: one - q for w, q in sorted(miss.items())}


def certain_forces(g: Graph, blue: int) -> int:
    """White vertices forced with probability one (some blue neighbor has
    every other vertex of its closed neighborhood blue)."""
    out = 0
    for u in members(blue):
        white = g.adj[u] & ~blue
        if white and white & (white - 1) == 0:
            out |= white
    return out


def zf_round(g: Graph, blue: int) -> int:
    """One time step of standard zero forcing."""
    return blue | certain_forces(g, blue)


def psd_round(g: Graph, blue: int) -> int:
    """One time step of PSD zero forcing.

    A blue vertex forces ``w`` when ``w`` is its only white neighbor inside
    the white component containing ``w``.
    """
    forced = 0
    for comp in g.components(g.full & ~blue):
        for u in members(blue):
            white = g.adj[u] & comp
            if white and white & (white - 1) == 0:
                forced |= white
    return blue | forced


_RULES = {"zf": zf_round, "psd": psd_round}


def propagation_time(g: Graph, z: int, rule: str = "zf") -> int | None:
    """Rounds for ``rule`` to turn everything blue from ``z``; None if it stalls."""
    if rule not in _RULES:
        raise ValueError(f"unknown rule {rule!r}; expected one of {', '.join(_RULES)}")
    step = _RULES[rule]
    blue, t = z, 0
    while blue != g.full:
        nxt = step(g, blue)
        if nxt == blue:
            return None
        blue, t = nxt, t + 1
    return t


def zf_closure(g: Graph, z: int) -> int:
    blue = z
    while True:
        nxt = zf_round(g, blue)
        if nxt == blue:
            return blue
        blue = nxt


def is_zero_forcing_set(g: Graph, z: int) -> bool:
    return zf_closure(g, z) == g.full
