from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pzf.graph import Graph, build, to_mask
from pzf.kernels import (
    certain_forces,
    force_probability,
    is_zero_forcing_set,
    propagation_time,
    psd_round,
    round_kernel,
    zf_closure,
    zf_round,
)

from conftest import labels
from oracles import fire_outcomes
from strategies import connected_graphs, graphs, trees


def test_force_probability_examples(kang_yi_tree):
    p3 = build("path:3")
    assert force_probability(p3, 1, 0, 0b010) == Fraction(1, 2)
    assert force_probability(kang_yi_tree, 2, 3, labels(1, 2, 3)) == Fraction(2, 3)
    assert force_probability(kang_yi_tree, 2, 3, labels(1, 3)) == Fraction(1, 3)


@pytest.mark.parametrize("u,w,blue", [(0, 1, 0b010), (1, 1, 0b010), (1, 0, 0b011), (0, 2, 0b001)])
def test_force_probability_preconditions(u, w, blue):
    with pytest.raises(ValueError):
        force_probability(build("path:3"), u, w, blue)


def test_round_kernel_examples():
    assert round_kernel(build("path:3"), 0b010) == {0: Fraction(1, 2), 2: Fraction(1, 2)}
    assert round_kernel(build("cycle:4"), 0b0011) == {2: 1, 3: 1}
    star = build("star:3")
    assert round_kernel(star, 0b0001) == {1: Fraction(1, 3), 2: Fraction(1, 3), 3: Fraction(1, 3)}
    # the three leaves are independent, so counts are binomial(3, 1/3)
    dist = fire_outcomes(4, star.edges(), 1)
    by_count = [sum(p for s, p in dist.items() if bin(s).count("1") - 1 == k) for k in range(4)]
    assert by_count == [Fraction(8, 27), Fraction(4, 9), Fraction(2, 9), Fraction(1, 27)]


def test_round_kernel_omits_unreachable_whites():
    k = round_kernel(build("path:5"), 0b00001)
    assert set(k) == {1}


def test_round_kernel_float_mode():
    k = round_kernel(build("path:3"), 0b010, exact=False)
    assert k == {0: 0.5, 2: 0.5}
    assert all(isinstance(p, float) for p in k.values())


def test_zf_round_examples():
    assert zf_round(build("path:4"), 0b0001) == 0b0011
    assert zf_round(build("path:3"), 0b010) == 0b010
    assert zf_round(build("cycle:6"), to_mask([0, 1])) == to_mask([5, 0, 1, 2])


def test_psd_round_examples():
    assert psd_round(build("star:4"), 0b00001) == 0b11111
    assert psd_round(build("path:5"), to_mask([2])) == to_mask([1, 2, 3])
    assert psd_round(build("cycle:5"), 0b00001) == 0b00001


def test_propagation_times():
    assert propagation_time(build("path:6"), 1, "zf") == 5
    assert propagation_time(build("path:3"), 0b010, "zf") is None
    assert propagation_time(build("path:7"), 1 << 3, "psd") == 3
    assert propagation_time(build("star:4"), 1, "psd") == 1
    assert propagation_time(build("cycle:5"), 0b11111, "zf") == 0
    with pytest.raises(ValueError):
        propagation_time(build("path:3"), 1, "bogus")


def test_zero_forcing_sets(kang_yi_tree):
    for n in (2, 5, 9):
        assert is_zero_forcing_set(build(f"path:{n}"), 1)
    assert not is_zero_forcing_set(build("path:3"), 0b010)
    assert is_zero_forcing_set(kang_yi_tree, labels(1, 4))
    assert not is_zero_forcing_set(kang_yi_tree, labels(1))
    assert zf_closure(kang_yi_tree, labels(1)) == labels(1, 2, 3)


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=7), st.data())
def test_round_operators_monotone(g, data):
    blue = data.draw(st.integers(0, g.full))
    assert zf_round(g, blue) & blue == blue
    assert psd_round(g, blue) & blue == blue
    assert all(not blue >> w & 1 for w in round_kernel(g, blue))


@settings(max_examples=80, deadline=None)
@given(connected_graphs(max_n=6), st.data())
def test_kernel_matches_fire_enumeration(g, data):
    blue = data.draw(st.integers(1, g.full))
    incident = sum(1 for u in range(g.n) if blue >> u & 1 for w in g.neighbors(u) if not blue >> w & 1)
    if incident > 10:
        return
    dist = fire_outcomes(g.n, g.edges(), blue)
    kernel = round_kernel(g, blue)
    for w in range(g.n):
        if blue >> w & 1:
            continue
        marginal = sum(p for s, p in dist.items() if s >> w & 1)
        assert kernel.get(w, 0) == marginal


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=7), st.data())
def test_deterministic_dominance(g, data):
    blue = data.draw(st.integers(0, g.full))
    zf = zf_round(g, blue)
    assert zf & psd_round(g, blue) == zf
    kernel = round_kernel(g, blue)
    for w in range(g.n):
        if (zf & ~blue) >> w & 1:
            assert kernel[w] == 1
    assert certain_forces(g, blue) == zf & ~blue


@settings(max_examples=60, deadline=None)
@given(trees(max_n=9), st.data())
def test_psd_time_finite_on_trees(g, data):
    z = data.draw(st.integers(1, g.full))
    t = propagation_time(g, z, "psd")
    assert t is not None and t <= g.n


def test_isolated_blue_vertex_has_no_kernel():
    g = Graph.from_edges(3, [(1, 2)])
    assert round_kernel(g, 0b001) == {}
