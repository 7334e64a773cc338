# tests/test_topology.py
# -*- coding: utf-8 -*-
import logging
import math
from collections import Counter

import numpy as np
import pytest
from scipy import stats

from common.errors import DisconnectedTopologyError, InvalidEdgeError, InvalidSizeError
from common.graph import (
    EdgeDistribution,
    Graph,
    sample_edge,
    sample_edges,
    uniform_edge_distribution,
)
from common.utils import make_rng
from topologies import AVAILABLE, load_topology
from topologies.complete import build_complete
from topologies.rgg import build_rgg, rgg_edges_from_positions
from topologies.ring import build_ring


# ---------------- complete ----------------

def test_complete_small():
    assert build_complete(3).edges == ((0, 1), (0, 2), (1, 2))
    assert build_complete(2).edges == ((0, 1),)


@pytest.mark.parametrize("n", [2, 5, 10, 17])
def test_complete_edge_count(n):
    g = build_complete(n)
    assert g.num_edges == n * (n - 1) // 2
    assert g.positions is None
    assert g.is_connected()


def test_complete_rejects_n1():
    with pytest.raises(InvalidSizeError):
        build_complete(1)


# ---------------- ring ----------------

def test_ring_n4():
    assert build_ring(4).edges == ((0, 1), (0, 3), (1, 2), (2, 3))


def test_ring_n3_is_k3():
    assert build_ring(3).edges == build_complete(3).edges


def test_ring_degrees():
    g = build_ring(10)
    assert g.num_edges == 10
    assert g.degrees() == [2] * 10


@pytest.mark.parametrize("n", [1, 2])
def test_ring_rejects_small(n):
    with pytest.raises(InvalidSizeError):
        build_ring(n)


# ---------------- rgg ----------------

def test_rgg_edge_threshold():
    assert rgg_edges_from_positions([(0.0, 0.0), (0.5, 0.5)], 0.8) == [(0, 1)]
    assert rgg_edges_from_positions([(0.0, 0.0), (0.9, 0.0)], 0.8) == []
    # estrictamente menor
    assert rgg_edges_from_positions([(0.0, 0.0), (0.8, 0.0)], 0.8) == []


def test_rgg_large_radius_is_complete(rng):
    g = build_rgg(10, 1.0, 1.5, rng)
    assert g.edges == build_complete(10).edges
    assert len(g.positions) == 10


def test_rgg_edges_recomputable_from_positions():
    g = build_rgg(12, 1.0, 0.5, make_rng(3))
    assert g.is_connected()
    assert tuple(rgg_edges_from_positions(g.positions, 0.5)) == g.edges
    assert all(0.0 <= c <= 1.0 for p in g.positions for c in p)


def test_rgg_gives_up_after_max_attempts():
    with pytest.raises(DisconnectedTopologyError) as info:
        build_rgg(5, 100.0, 0.001, make_rng(0), max_attempts=3)
    assert info.value.attempts == 3


def test_rgg_warns_near_attempt_cap(caplog):
    caplog.set_level(logging.DEBUG, logger="topologies.rgg")
    with pytest.raises(DisconnectedTopologyError):
        build_rgg(5, 100.0, 0.001, make_rng(0), max_attempts=20)
    failed = [r for r in caplog.records if "no conexo" in r.getMessage()]
    assert len(failed) == 20
    assert [r.levelno for r in failed] == [logging.DEBUG] * 18 + [logging.WARNING] * 2


def test_rgg_deterministic_given_seed():
    a = build_rgg(10, 1.0, 0.8, make_rng(99))
    b = build_rgg(10, 1.0, 0.8, make_rng(99))
    assert a == b


# ---------------- Graph ----------------

def test_graph_rejects_bad_edges():
    with pytest.raises(InvalidEdgeError):
        Graph.from_edges(3, [(1, 1)])
    with pytest.raises(InvalidEdgeError):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(InvalidEdgeError):
        Graph.from_edges(3, [(0, 1), (1, 0), (1, 2)])


def test_graph_rejects_disconnected():
    with pytest.raises(DisconnectedTopologyError):
        Graph.from_edges(4, [(0, 1), (2, 3)])


def test_graph_json_roundtrip_keeps_positions():
    g = build_rgg(6, 1.0, 0.9, make_rng(5))
    assert Graph.from_json(g.to_json()) == g


def test_load_topology_by_name():
    for name in AVAILABLE:
        assert callable(load_topology(name).build)
    with pytest.raises(ValueError):
        load_topology("star")


# ---------------- distribución de aristas ----------------

def test_uniform_distribution():
    d = uniform_edge_distribution(build_complete(3))
    assert d.probabilities == pytest.approx((1 / 3, 1 / 3, 1 / 3))
    assert d.probability(1, 0) == d.probability(0, 1)
    assert d.probability(0, 0) == 0.0
    assert d.is_uniform
    assert math.fsum(d.probabilities) == pytest.approx(1.0, abs=1e-12)

    ring = uniform_edge_distribution(build_ring(10))
    assert set(ring.probabilities) == {0.1}

    single = uniform_edge_distribution(build_complete(2))
    assert single.as_dict() == {(0, 1): 1.0}


def test_distribution_validation():
    with pytest.raises(InvalidEdgeError):
        EdgeDistribution(edges=((0, 1), (1, 2)), probabilities=(0.5, 0.4))
    with pytest.raises(InvalidEdgeError):
        EdgeDistribution(edges=((0, 1), (1, 2)), probabilities=(1.0, 0.0))


def test_sample_edge_single_support(rng):
    d = uniform_edge_distribution(build_complete(2))
    assert {sample_edge(d, rng) for _ in range(50)} == {(0, 1)}


def test_sample_edges_deterministic():
    d = uniform_edge_distribution(build_ring(7))
    a = sample_edges(d, make_rng(4), 500)
    b = sample_edges(d, make_rng(4), 500)
    assert np.array_equal(a, b)


def test_sample_edges_frequencies_complete3():
    d = uniform_edge_distribution(build_complete(3))
    draws = sample_edges(d, make_rng(2024), 300_000)
    counts = Counter(map(tuple, draws.tolist()))
    for e in d.edges:
        assert counts[e] / 300_000 == pytest.approx(1 / 3, abs=0.01)


@pytest.mark.parametrize("graph", [build_complete(5), build_ring(8)], ids=["complete5", "ring8"])
def test_sample_edges_chi_square(graph):
    d = uniform_edge_distribution(graph)
    n_draws = 100_000
    draws = sample_edges(d, make_rng(77), n_draws)
    index = {e: k for k, e in enumerate(d.edges)}
    observed = np.zeros(len(d.edges))
    for i, j in draws:
        observed[index[(int(i), int(j))]] += 1
    expected = n_draws / len(d.edges)
    chi2_stat = float(((observed - expected) ** 2 / expected).sum())
    assert chi2_stat < stats.chi2.ppf(0.999, df=len(d.edges) - 1)


def test_sample_edges_non_uniform_support():
    d = EdgeDistribution(edges=((0, 1), (1, 2)), probabilities=(0.25, 0.75))
    draws = sample_edges(d, make_rng(1), 40_000)
    share = np.mean(draws[:, 0] == 1)
    assert share == pytest.approx(0.75, abs=0.02)
