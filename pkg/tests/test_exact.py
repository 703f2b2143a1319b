from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pzf import exact
from pzf.exact import (
    ResourceError,
    absorption_curve,
    build_chain,
    confidence_time,
    confidence_time_graph,
    ept_exact,
    ept_graph,
    ept_series,
    lround_graph,
    lround_probability,
    round_distribution,
    successor_distribution,
)
from pzf.graph import Graph, GraphError, build, popcount, radius, to_mask
from pzf.kernels import is_zero_forcing_set, propagation_time

from oracles import ept_linear_solve, fire_outcomes, reachable
from strategies import connected_graphs, trees

F = Fraction


def test_successor_path3_center():
    d = successor_distribution(build("path:3"), 0b010)
    assert d == {0b010: F(1, 4), 0b011: F(1, 4), 0b110: F(1, 4), 0b111: F(1, 4)}


def test_successor_star_one_leaf_blue():
    star = build("star:3")
    d = successor_distribution(star, 0b0011)
    by_new = [sum(p for s, p in d.items() if popcount(s) - 2 == k) for k in range(3)]
    assert by_new == [F(1, 9), F(4, 9), F(4, 9)]


def test_successor_all_blue_absorbs():
    g = build("cycle:5")
    assert successor_distribution(g, g.full) == {g.full: 1}


def test_successor_factors_out_certain_forces():
    # from {0,1} on C_8 both neighbours are forced, nothing else is possible
    g = build("cycle:8")
    assert successor_distribution(g, 0b11) == {to_mask([7, 0, 1, 2]): 1}


def test_frontier_cap():
    g = build("star:10")
    with pytest.raises(ResourceError) as info:
        successor_distribution(g, 1, frontier_cap=5)
    assert info.value.cap == "frontier"
    with pytest.raises(ResourceError):
        build_chain(g, 1, frontier_cap=5)


def test_state_cap():
    with pytest.raises(ResourceError) as info:
        build_chain(build("cycle:10"), 1, max_states=5)
    assert info.value.cap == "states"


def test_chain_sizes():
    assert len(build_chain(build("path:3"), 0b010)) == 4
    assert len(build_chain(build("star:3"), 1)) == 2 ** 3
    # distinct blue sets differ from distinct leaf counts; counts 0..3 give 4 classes
    chain = build_chain(build("star:3"), 1)
    assert {popcount(s) - 1 for s in chain.states} == {0, 1, 2, 3}


def test_cycle_five_reachable_states():
    g = build("cycle:5")
    chain = build_chain(g, 1)
    oracle = reachable(5, g.edges(), 1)
    assert set(chain.states) == oracle
    # frozen from the fire-level reachability oracle
    assert len(oracle) == 7


@settings(max_examples=50, deadline=None)
@given(connected_graphs(max_n=6), st.data())
def test_chain_matches_oracle(g, data):
    z = data.draw(st.integers(1, g.full))
    chain = build_chain(g, z)
    assert set(chain.states) == reachable(g.n, g.edges(), z)
    for i, s in enumerate(chain.states):
        got = {chain.states[j]: p for j, p in chain.outgoing(i) if p}
        assert got == fire_outcomes(g.n, g.edges(), s)


@settings(max_examples=60, deadline=None)
@given(connected_graphs(max_n=7), st.data())
def test_successors_sum_to_one_and_grow(g, data):
    chain = build_chain(g, data.draw(st.integers(1, g.full)))
    for i, s in enumerate(chain.states):
        total = F(0)
        for j, p in chain.outgoing(i):
            total += p
            assert chain.states[j] & s == s
        assert total == 1
    assert chain.self_loop[chain.absorbing] == 1


def test_ept_examples():
    assert ept_exact(build("cycle:4"), 1) == F(7, 3)
    assert ept_exact(build("path:5"), 1 << 2) == 3
    assert abs(float(ept_exact(build("star:3"), 1)) - 2.76316) < 1e-5
    assert ept_exact(build("star:3"), 1) == F(105, 38)
    assert ept_graph(build("path:6")) == (F(11, 3), 2)
    assert ept_graph(build("cycle:7"))[0] == 4
    assert ept_graph(build("complete:2")) == (1, 0)


def test_ept_full_start_is_zero():
    g = build("path:4")
    assert ept_exact(g, g.full) == 0
    assert lround_probability(g, g.full, 0) == 1
    assert confidence_time(g, g.full, F(1, 2)) == 0


def test_start_set_errors():
    with pytest.raises(GraphError):
        ept_exact(build("path:3"), 0)
    with pytest.raises(GraphError):
        ept_exact(Graph.from_edges(3, [(0, 1)]), 1)
    with pytest.raises(GraphError):
        ept_graph(Graph.from_edges(3, [(0, 1)]))
    with pytest.raises(GraphError):
        ept_exact(build("path:3"), 0b1000)


def test_round_distribution_examples():
    chain = build_chain(build("path:3"), 0b010)
    assert round_distribution(chain, 0) == {0b010: 1}
    assert round_distribution(chain, 1)[0b111] == F(1, 4)
    star = build_chain(build("star:3"), 1)
    dist = round_distribution(star, 1)
    by_count = [sum(p for s, p in dist.items() if popcount(s) - 1 == k) for k in range(4)]
    assert by_count == [F(8, 27), F(4, 9), F(2, 9), F(1, 27)]
    for r in range(6):
        assert sum(round_distribution(star, r).values()) == 1


def test_lround_examples():
    assert lround_probability(build("cycle:4"), 1, 2) == F(3, 4)
    assert lround_graph(build("path:4"), 2)[0] == F(1, 2)
    assert lround_probability(build("path:4"), 0, 3) == 0
    curve = absorption_curve(build_chain(build("cycle:5"), 1), 4)
    assert curve == [0, 0, F(1, 4), F(13, 16), F(61, 64)]


def test_confidence_examples():
    assert confidence_time_graph(build("cycle:5"), F(1, 4))[0] == 2
    assert confidence_time_graph(build("path:4"), F(1, 2))[0] == 2
    assert confidence_time_graph(build("path:4"), F(3, 5))[0] == 3
    assert confidence_time(build("complete:2"), 1, 0.99) == 1
    with pytest.raises(ValueError):
        confidence_time(build("path:3"), 1, 1)
    with pytest.raises(ValueError):
        confidence_time(build("path:3"), 1, 0)


def test_float_mode_agrees():
    for spec in ("cycle:9", "star:4", "spider:n=10,legs=3"):
        g = build(spec)
        exact_val, v = ept_graph(g)
        float_val, w = ept_graph(g, exact=False)
        assert isinstance(float_val, float)
        assert abs(float_val - float(exact_val)) < 1e-9
        assert v == w


@settings(max_examples=40, deadline=None)
@given(connected_graphs(max_n=6), st.data())
def test_ept_matches_linear_solve(g, data):
    z = data.draw(st.integers(1, g.full))
    assert abs(float(ept_exact(g, z)) - ept_linear_solve(g.n, g.edges(), z)) < 1e-9


SERIES_GRAPHS = ["path:5", "cycle:6", "star:4", "complete:4", "spider:n=8,legs=3", "kary:k=2,h=2"]


@pytest.mark.parametrize("spec", SERIES_GRAPHS)
def test_series_cross_check(spec):
    g = build(spec)
    for v in range(g.n):
        chain = build_chain(g, 1 << v)
        partial, tail = ept_series(chain, 200)
        e = ept_exact(g, 1 << v)
        assert partial <= e <= partial + tail
        assert tail < F(1, 10 ** 6)


@settings(max_examples=30, deadline=None)
@given(connected_graphs(max_n=6), st.data())
def test_lround_nondecreasing_to_one(g, data):
    z = data.draw(st.integers(1, g.full))
    curve = absorption_curve(build_chain(g, z), 60 * g.n)
    assert all(a <= b for a, b in zip(curve, curve[1:]))
    assert curve[-1] > 1 - 1e-6


@settings(max_examples=30, deadline=None)
@given(connected_graphs(max_n=6), st.data())
def test_zero_forcing_sets_finish_by_pt(g, data):
    z = data.draw(st.integers(1, g.full))
    if not is_zero_forcing_set(g, z):
        return
    pt = propagation_time(g, z)
    for ell in range(pt, pt + 3):
        assert lround_probability(g, z, ell) == 1


@settings(max_examples=30, deadline=None)
@given(connected_graphs(max_n=6), st.data())
def test_lround_monotone_in_start_set(g, data):
    b = data.draw(st.integers(1, g.full))
    a = data.draw(st.integers(1, g.full)) & b or b
    ca = absorption_curve(build_chain(g, a), 2 * g.n)
    cb = absorption_curve(build_chain(g, b), 2 * g.n)
    assert all(x <= y for x, y in zip(ca, cb))


@settings(max_examples=30, deadline=None)
@given(connected_graphs(max_n=7))
def test_radius_lower_bound(g):
    assert radius(g) <= ept_graph(g)[0]


@settings(max_examples=30, deadline=None)
@given(trees(max_n=7), st.data())
def test_psd_time_below_ept_on_trees(g, data):
    z = data.draw(st.integers(1, g.full))
    assert propagation_time(g, z, "psd") <= ept_exact(g, z)


@settings(max_examples=25, deadline=None)
@given(connected_graphs(max_n=6), st.data())
def test_markov_and_confidence_bounds(g, data):
    z = data.draw(st.integers(1, g.full))
    e = ept_exact(g, z)
    for alpha in (F(1, 2), F(9, 10), F(99, 100)):
        assert confidence_time(g, z, alpha) <= e / (1 - alpha)
    ept_best, v = ept_graph(g)
    ell = -(-ept_best.numerator // ept_best.denominator) * 2
    if ell > ept_best:
        assert lround_probability(g, 1 << v, ell) >= 1 - ept_best / ell


def test_joint_chain_agrees_with_single_starts():
    g = build("spider:n=9,legs=4")
    roots = [1 << v for v in range(g.n)]
    joint = exact.build_joint_chain(g, roots)
    times = exact.expected_times(joint)
    for r in roots:
        assert times[joint.index[r]] == ept_exact(g, r)


def test_pairs_start_sets():
    g = build("cycle:6")
    for a, b in combinations(range(6), 2):
        z = to_mask([a, b])
        assert abs(float(ept_exact(g, z)) - ept_linear_solve(6, g.edges(), z)) < 1e-9
