"""Simple undirected graphs over vertices 0..n-1 with bitset adjacency.

Vertex sets are plain Python ints used as bitmasks (bit ``v`` set means
vertex ``v`` is in the set), so they grow past 64 vertices for free.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import rng

UNREACHABLE = -1


class GraphError(ValueError):
    """Invalid graph construction or an operation on an unsuitable graph."""


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def members(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class Graph:
    """Immutable simple graph.

    ``adj[v]`` is the neighbor bitmask of ``v``.  Construct with
    :meth:`from_edges` or through :func:`build`.
    """

    __slots__ = ("n", "adj", "edge_count", "_deg", "name")

    def __init__(self, n: int, adj: Sequence[int], name: str = ""):
        if n < 1:
            raise GraphError("a graph needs at least one vertex")
        if len(adj) != n:
            raise GraphError("adjacency length does not match n")
        full = (1 << n) - 1
        twice = 0
        for v, nb in enumerate(adj):
            if nb & ~full:
                raise GraphError(f"vertex {v} has a neighbor outside 0..{n - 1}")
            if nb >> v & 1:
                raise GraphError(f"self-loop at vertex {v}")
            for u in members(nb):
                if not adj[u] >> v & 1:
                    raise GraphError(f"asymmetric adjacency between {v} and {u}")
            twice += popcount(nb)
        self.n = n
        self.adj = tuple(adj)
        self.edge_count = twice // 2
        self._deg = tuple(popcount(nb) for nb in adj)
        self.name = name

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], name: str = "") -> "Graph":
        adj = [0] * n
        seen = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            e = (min(u, v), max(u, v))
            if e in seen:
                raise GraphError(f"duplicate edge {e}")
            seen.add(e)
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, adj, name)

    def __repr__(self) -> str:
        label = self.name or "Graph"
        return f"<{label} n={self.n} m={self.edge_count}>"

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def deg(self, v: int) -> int:
        return self._deg[v]

    @property
    def degrees(self) -> tuple[int, ...]:
        return self._deg

    def max_degree(self) -> int:
        return max(self._deg)

    def neighbors(self, v: int) -> list[int]:
        return members(self.adj[v])

    def closed(self, v: int) -> int:
        return self.adj[v] | (1 << v)

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in members(self.adj[u]) if u < v]

    def non_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, v in combinations(range(self.n), 2) if not self.has_edge(u, v)]

    def with_edge(self, u: int, v: int) -> "Graph":
        if u == v or self.has_edge(u, v):
            raise GraphError(f"cannot add edge ({u}, {v})")
        adj = list(self.adj)
        adj[u] |= 1 << v
        adj[v] |= 1 << u
        return Graph(self.n, adj)

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.float64)
        for u, v in self.edges():
            a[u, v] = a[v, u] = 1.0
        return a

    def component_of(self, v: int, within: int | None = None) -> int:
        """Bitmask of the component of ``v`` in the subgraph induced by ``within``."""
        within = self.full if within is None else within
        comp = frontier = 1 << v
        while frontier:
            nxt = 0
            for u in members(frontier):
                nxt |= self.adj[u]
            frontier = nxt & within & ~comp
            comp |= frontier
        return comp

    def components(self, within: int | None = None) -> list[int]:
        rest = self.full if within is None else within
        out = []
        while rest:
            v = (rest & -rest).bit_length() - 1
            c = self.component_of(v, rest)
            out.append(c)
            rest &= ~c
        return out

    def is_connected(self) -> bool:
        return self.component_of(0) == self.full

    def is_tree(self) -> bool:
        return self.edge_count == self.n - 1 and self.is_connected()

    def to_edge_list(self) -> str:
        lines = [f"{self.n} {self.edge_count}"]
        lines += [f"{u} {v}" for u, v in self.edges()]
        return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# families


KINDS = ("path", "cycle", "star", "complete", "spider", "kary_tree", "gnp", "edge_list")


@dataclass(frozen=True)
class FamilySpec:
    kind: str
    params: dict = field(default_factory=dict)

    def __str__(self) -> str:
        if self.kind in ("path", "cycle", "star", "complete"):
            return f"{self.kind}:{self.params['n']}"
        if self.kind == "edge_list":
            return f"file:{self.params['path']}"
        name = "kary" if self.kind == "kary_tree" else self.kind
        return name + ":" + ",".join(f"{k}={v}" for k, v in self.params.items())


_ALIASES = {"kary": "kary_tree", "file": "edge_list"}


def parse_family(text: str) -> FamilySpec:
    """Parse generator strings such as ``cycle:8`` or ``gnp:n=20,p=0.5,seed=7``."""
    kind, sep, rest = text.partition(":")
    kind = _ALIASES.get(kind.strip(), kind.strip())
    if not sep or kind not in KINDS:
        raise GraphError(f"unrecognized graph generator {text!r}")
    if kind == "edge_list":
        return FamilySpec(kind, {"path": rest})
    params: dict = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        name, eq, value = item.partition("=")
        if not eq:
            name, value = "n", name
        try:
            params[name.strip()] = float(value) if name.strip() == "p" else int(value)
        except ValueError:
            raise GraphError(f"bad parameter {item!r} in {text!r}") from None
    return FamilySpec(kind, params)


def _need(spec: FamilySpec, *names: str) -> list:
    missing = [k for k in names if k not in spec.params]
    if missing:
        raise GraphError(f"{spec.kind} needs parameter(s) {', '.join(missing)}")
    extra = set(spec.params) - set(names)
    if extra:
        raise GraphError(f"{spec.kind} does not take parameter(s) {', '.join(sorted(extra))}")
    return [spec.params[k] for k in names]


def path_graph(n: int) -> Graph:
    if n < 1:
        raise GraphError("path needs n >= 1")
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], f"P{n}")


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], f"C{n}")


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with the center at vertex 0."""
    if leaves < 1:
        raise GraphError("star needs at least one leaf")
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)], f"K1,{leaves}")


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise GraphError("complete graph needs n >= 1")
    return Graph.from_edges(n, combinations(range(n), 2), f"K{n}")


def spider_graph(n: int, legs: int) -> Graph:
    """Spider of order ``n``: body vertex 0 and ``legs`` legs as equal as
    possible, longer legs first."""
    if legs < 3:
        raise GraphError("spider needs at least 3 legs")
    if n - 1 < legs:
        raise GraphError(f"spider with {legs} legs needs n >= {legs + 1}")
    base, extra = divmod(n - 1, legs)
    edges = []
    nxt = 1
    for i in range(legs):
        prev = 0
        for _ in range(base + (1 if i < extra else 0)):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Graph.from_edges(n, edges, f"spider{n},{legs}")


def kary_tree(k: int, h: int) -> Graph:
    """Full k-ary tree of height h, root 0, vertices in BFS order."""
    if k < 2 or h < 0:
        raise GraphError("kary tree needs k >= 2 and h >= 0")
    n = (k ** (h + 1) - 1) // (k - 1)
    return Graph.from_edges(n, [((v - 1) // k, v) for v in range(1, n)], f"T{k},{h}")


def gnp_graph(n: int, p: float, seed: int) -> Graph:
    if n < 1:
        raise GraphError("gnp needs n >= 1")
    if not 0 < p < 1:
        raise GraphError("gnp needs 0 < p < 1")
    pairs = np.array(list(combinations(range(n), 2)), dtype=np.int64).reshape(-1, 2)
    u = rng.uniforms(seed, rng.STREAM_GNP, pairs[:, 0], pairs[:, 1])
    edges = [tuple(e) for e in pairs[u < p].tolist()]
    return Graph.from_edges(n, edges, f"G({n},{p})#{seed}")


def read_edge_list(path: str) -> Graph:
    """Read ``n m`` followed by ``m`` lines ``u v`` (0-based)."""
    with open(path) as fh:
        tokens = fh.read().split()
    try:
        nums = [int(t) for t in tokens]
    except ValueError as exc:
        raise GraphError(f"{path}: non-integer token") from exc
    if len(nums) < 2:
        raise GraphError(f"{path}: missing 'n m' header")
    n, m = nums[0], nums[1]
    body = nums[2:]
    if len(body) != 2 * m:
        raise GraphError(f"{path}: header says {m} edges, found {len(body) / 2:g}")
    return Graph.from_edges(n, zip(body[::2], body[1::2]), path)


def build(spec: FamilySpec | str) -> Graph:
    if isinstance(spec, str):
        spec = parse_family(spec)
    kind = spec.kind
    if kind == "path":
        return path_graph(*_need(spec, "n"))
    if kind == "cycle":
        return cycle_graph(*_need(spec, "n"))
    if kind == "star":
        return star_graph(*_need(spec, "n"))
    if kind == "complete":
        return complete_graph(*_need(spec, "n"))
    if kind == "spider":
        return spider_graph(*_need(spec, "n", "legs"))
    if kind == "kary_tree":
        return kary_tree(*_need(spec, "k", "h"))
    if kind == "gnp":
        return gnp_graph(*_need(spec, "n", "p", "seed"))
    if kind == "edge_list":
        return read_edge_list(*_need(spec, "path"))
    raise GraphError(f"unknown family {kind!r}")


# --------------------------------------------------------------------------
# metrics


def distances(g: Graph, v: int) -> list[int]:
    """BFS distances from ``v``; unreachable vertices get ``UNREACHABLE``."""
    dist = [UNREACHABLE] * g.n
    seen = frontier = 1 << v
    d = 0
    while frontier:
        nxt = 0
        for u in members(frontier):
            dist[u] = d
            nxt |= g.adj[u]
        frontier = nxt & ~seen
        seen |= frontier
        d += 1
    return dist


def set_distances(g: Graph, s: int) -> list[int]:
    """Distance from every vertex to the vertex set ``s``."""
    dist = [UNREACHABLE] * g.n
    seen = frontier = s
    d = 0
    while frontier:
        nxt = 0
        for u in members(frontier):
            dist[u] = d
            nxt |= g.adj[u]
        frontier = nxt & ~seen
        seen |= frontier
        d += 1
    return dist


def eccentricity(g: Graph, v: int) -> int:
    dist = distances(g, v)
    if UNREACHABLE in dist:
        raise GraphError("graph is disconnected")
    return max(dist)


def radius_and_center(g: Graph) -> tuple[int, int]:
    """Return ``(rad(G), center mask)``."""
    ecc = [eccentricity(g, v) for v in range(g.n)]
    r = min(ecc)
    return r, to_mask(v for v in range(g.n) if ecc[v] == r)


def radius(g: Graph) -> int:
    return radius_and_center(g)[0]


def covering_radius(g: Graph, s: int) -> int:
    dist = set_distances(g, s)
    if UNREACHABLE in dist:
        return math.inf
    return max(dist)


def is_dominating(g: Graph, s: int) -> bool:
    covered = s
    for v in members(s):
        covered |= g.adj[v]
    return covered == g.full


def greedy_dominating_set(g: Graph) -> int:
    """Greedy max-coverage dominating set, ties to the lowest index."""
    undominated = g.full
    chosen = 0
    while undominated:
        best, gain = -1, -1
        for v in range(g.n):
            c = popcount(g.closed(v) & undominated)
            if c > gain:
                best, gain = v, c
        chosen |= 1 << best
        undominated &= ~g.closed(best)
    return chosen


def k_center_seed(g: Graph, k: int, exact_limit: int = 20000) -> int:
    """A k-set of vertices with small covering radius.

    Exact (minimum covering radius, first in lexicographic order) when
    ``C(n, k) <= exact_limit``; otherwise greedy farthest-point starting
    from the lowest-index center vertex.
    """
    if not 1 <= k <= g.n:
        raise GraphError(f"k must be in 1..{g.n}, got {k}")
    if not g.is_connected():
        raise GraphError("graph is disconnected")
    if math.comb(g.n, k) <= exact_limit:
        best, best_r = 0, math.inf
        for combo in combinations(range(g.n), k):
            s = to_mask(combo)
            r = covering_radius(g, s)
            if r < best_r:
                best, best_r = s, r
                if r == 0:
                    break
        return best
    _, center = radius_and_center(g)
    s = center & -center
    while popcount(s) < k:
        dist = set_distances(g, s)
        far = max(range(g.n), key=lambda v: (dist[v], -v))
        s |= 1 << far
    return s
