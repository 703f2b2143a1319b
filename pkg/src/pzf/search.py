"""Evidence searches: edge monotonicity of ept, non-monotonicity of P_B(G),
and ept/radius ratios across families."""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterator

import networkx as nx

from . import exact, montecarlo
from .graph import Graph, build, gnp_graph, members, radius_and_center, to_mask
from .params import kang_yi_probability

ATLAS_MAX_N = 7


@dataclass(frozen=True)
class GnpSampler:
    """Seeded G(n, p) sampling for sizes beyond the exhaustive range.

    Graph ``i`` of size ``n`` uses seed ``seed + i``; disconnected draws are
    skipped (their seeds are still consumed).
    """

    sizes: tuple[int, ...]
    count: int
    p: float = 0.5
    seed: int = 0

    def graphs(self) -> Iterator[tuple[Graph, int]]:
        for n in self.sizes:
            for i in range(self.count):
                g = gnp_graph(n, self.p, self.seed + i)
                if g.is_connected():
                    yield g, self.seed + i


@dataclass
class SearchReport:
    instances_checked: int
    violations: list = field(default_factory=list)
    runtime_s: float = 0.0
    search_space: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)


@lru_cache(maxsize=None)
def _atlas(n: int) -> tuple[Graph, ...]:
    out = []
    for h in nx.graph_atlas_g():
        if h.number_of_nodes() == n and (n == 1 or nx.is_connected(h)):
            out.append(Graph.from_edges(n, h.edges(), f"atlas{n}"))
    return tuple(out)


def connected_graphs(n: int) -> tuple[Graph, ...]:
    """One representative per isomorphism class of connected graphs on n vertices."""
    if not 1 <= n <= ATLAS_MAX_N:
        raise ValueError(f"exhaustive enumeration covers 1 <= n <= {ATLAS_MAX_N}")
    return _atlas(n)


def _frac(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _instances(max_n: int, min_n: int, sampler: GnpSampler | None):
    for n in range(min_n, min(max_n, ATLAS_MAX_N) + 1):
        for g in connected_graphs(n):
            yield g, None
    if sampler is not None:
        yield from sampler.graphs()


def _space(kind: str, max_n: int, min_n: int, sampler: GnpSampler | None) -> str:
    text = f"{kind}: connected graphs up to isomorphism, {min_n} <= n <= {min(max_n, ATLAS_MAX_N)}"
    if sampler is not None:
        text += f"; G(n,{sampler.p}) sizes {list(sampler.sizes)} x {sampler.count} seeds from {sampler.seed}"
    return text


def scan_edge_monotonicity(
    max_n: int = 5, sampler: GnpSampler | None = None, min_n: int = 2, **caps
) -> SearchReport:
    """Check ept(H + e) <= ept(H) for every connected H and non-edge e."""
    t0 = time.perf_counter()
    memo: dict[Graph, Fraction] = {}

    def ept(g: Graph) -> Fraction:
        if g not in memo:
            memo[g] = exact.ept_graph(g, **caps)[0]
        return memo[g]

    checked = 0
    violations = []
    for h, seed in _instances(max_n, min_n, sampler):
        base = ept(h)
        for u, v in h.non_edges():
            checked += 1
            val = ept(h.with_edge(u, v))
            if val > base:
                violations.append({
                    "n": h.n,
                    "edges": [list(e) for e in h.edges()],
                    "added": [u, v],
                    "ept_before": _frac(base),
                    "ept_after": _frac(val),
                    "gnp_seed": seed,
                })
    return SearchReport(checked, violations, time.perf_counter() - t0, _space("edge monotonicity", max_n, min_n, sampler))


def scan_kangyi_monotonicity(
    max_n: int = 5, sampler: GnpSampler | None = None, min_n: int = 2, **caps
) -> SearchReport:
    """Search for nested start sets A < B with P_A(G) > P_B(G)."""
    t0 = time.perf_counter()
    checked = 0
    violations = []
    for g, seed in _instances(max_n, min_n, sampler):
        cache = {b: kang_yi_probability(g, b, **caps) for b in range(1, g.full + 1)}
        for b in range(1, g.full + 1):
            pb = cache[b]
            # proper nonempty subsets of b
            a = (b - 1) & b
            while a:
                checked += 1
                pa = cache[a]
                if pa.probability > pb.probability:
                    violations.append({
                        "n": g.n,
                        "edges": [list(e) for e in g.edges()],
                        "A": members(a),
                        "B": members(b),
                        "P_A": _frac(pa.probability),
                        "P_B": _frac(pb.probability),
                        "k0_A": pa.k0,
                        "k0_B": pb.k0,
                        "gnp_seed": seed,
                    })
                a = (a - 1) & b
    return SearchReport(checked, violations, time.perf_counter() - t0, _space("kang-yi monotonicity", max_n, min_n, sampler))


def reverify(violation: dict) -> bool:
    """Recompute a reported violation from scratch."""
    g = Graph.from_edges(violation["n"], [tuple(e) for e in violation["edges"]])
    if "added" in violation:
        before = exact.ept_graph(g)[0]
        after = exact.ept_graph(g.with_edge(*violation["added"]))[0]
        return (
            after > before
            and _frac(before) == violation["ept_before"]
            and _frac(after) == violation["ept_after"]
        )
    pa = kang_yi_probability(g, to_mask(violation["A"]))
    pb = kang_yi_probability(g, to_mask(violation["B"]))
    return (
        pa.probability > pb.probability
        and _frac(pa.probability) == violation["P_A"]
        and _frac(pb.probability) == violation["P_B"]
    )


DEFAULT_PROBE_FAMILIES = ("path:{n}", "cycle:{n}", "star:{n}", "kary:k=2,h={n}")


def radius_ratio_probe(
    families=DEFAULT_PROBE_FAMILIES,
    sizes=range(5, 13),
    trials: int = 20_000,
    seed: int = 0,
    max_states: int = 100_000,
    frontier_cap: int = 16,
) -> list[dict]:
    """Tabulate ept/rad and ept/(rad (ln n)^2) for family templates.

    Templates are generator strings with ``{n}`` standing for each size.
    Uses the exact engine when it fits the caps, Monte Carlo otherwise.
    """
    rows = []
    for fam in families:
        for size in sizes:
            g = build(fam.format(n=size))
            rad, _ = radius_and_center(g)
            try:
                val, v = exact.ept_graph(g, max_states=max_states, frontier_cap=frontier_cap)
                ept, se, engine, text = float(val), 0.0, "exact", _frac(val)
            except exact.ResourceError:
                rep, v = montecarlo.estimate_ept_graph(g, trials, seed)
                ept, se, engine, text = rep.mean, rep.std_error, "mc", None
            log2 = math.log(g.n) ** 2
            rows.append({
                "family": fam,
                "size": size,
                "n": g.n,
                "rad": rad,
                "ept": ept,
                "ept_exact": text,
                "std_error": se,
                "start": v,
                "engine": engine,
                "ept_over_rad": ept / rad if rad else math.nan,
                "ept_over_rad_ln2n": ept / (rad * log2) if rad and log2 else math.nan,
            })
    return rows
