# tests/test_analysis.py
# -*- coding: utf-8 -*-
import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from common.errors import (
    DegenerateInputError,
    InsufficientDataError,
    InvalidParameterError,
)
from common.utils import make_rng
from gossip.analysis import (
    TbarEstimate,
    aggregate_consensus_stats,
    convergence_bound,
    epsilon_averaging_time,
    estimate_tbar,
    mse_floor_iteration,
    sync_accuracy,
)
from gossip.engine import IterationMetrics, NodeStates, SimulationRun, run_simulation
from gossip.quantizer import Quantizer
from topologies.complete import build_complete
from topologies.ring import build_ring


def _metrics(mse_values):
    return [IterationMetrics(l, float(v), 0.0, 0.0, 0.0, False) for l, v in enumerate(mse_values)]


# ---------------- ε-promediado ----------------

def test_epsilon_time_constant_start():
    states = [NodeStates((0.4, 0.4, 0.4), 0), NodeStates((0.4, 0.4, 0.4), 1)]
    assert epsilon_averaging_time(states, 0.01) == 0


def test_epsilon_time_n2_real_one_step():
    run = SimulationRun(graph=build_complete(2), quantizer=None, initial_values=(0.0, 2.0), tol=1e-12,
                        full_state=True)
    trace = run_simulation(run)
    assert epsilon_averaging_time(trace.snapshots, 0.1) == 1


def test_epsilon_time_never_reached():
    states = [NodeStates((0.0, 2.0), l) for l in range(5)]
    assert epsilon_averaging_time(states, 0.1) is None


@pytest.mark.parametrize("tau", [0.0, 1.0, -0.5, 2.0])
def test_epsilon_time_rejects_tau(tau):
    with pytest.raises(InvalidParameterError):
        epsilon_averaging_time([NodeStates((1.0, 2.0), 0)], tau)


def test_epsilon_time_zero_norm():
    with pytest.raises(DegenerateInputError):
        epsilon_averaging_time([NodeStates((0.0, 0.0), 0)], 0.1)


# ---------------- T̄(G) ----------------

def test_tbar_single_edge_is_one(unit_quantizer):
    est = estimate_tbar(build_complete(2), unit_quantizer, 1, make_rng(0), inits=[[0.0, 2.0]])
    assert est.value == 1.0
    assert est.stderr == 0.0
    assert est.n_samples == 100

    est = estimate_tbar(build_complete(2), unit_quantizer, 5, make_rng(1))
    assert est.value == 1.0


def test_tbar_all_distinct_levels_is_one(unit_quantizer):
    est = estimate_tbar(build_complete(4), unit_quantizer, 1, make_rng(2), inits=[[0.0, 1.0, 2.0, 3.0]])
    assert est.value == 1.0


def test_tbar_complete3_one_odd_node(unit_quantizer):
    # Geométrica con p = 2/3: E[T1] = 3/2
    est = estimate_tbar(build_complete(3), unit_quantizer, 1, make_rng(7), repetitions=10_000,
                        inits=[[0.0, 0.0, 2.0]])
    assert est.n_samples == 10_000
    assert est.stderr > 0
    assert abs(est.value - 1.5) <= 3 * est.stderr


def test_tbar_takes_worst_initialization(unit_quantizer):
    inits = [[0.0, 1.0, 2.0], [0.0, 0.0, 2.0]]
    est = estimate_tbar(build_complete(3), unit_quantizer, 2, make_rng(3), repetitions=2000, inits=inits)
    assert est.value > 1.0


def test_tbar_deterministic_given_rng():
    q = Quantizer(bits=2, range_min=0.0, range_max=3.0)
    a = estimate_tbar(build_ring(6), q, 4, make_rng(11), repetitions=50)
    b = estimate_tbar(build_ring(6), q, 4, make_rng(11), repetitions=50)
    assert a == b
    assert a.value >= 1.0


def test_tbar_degenerate_explicit_init(unit_quantizer):
    with pytest.raises(DegenerateInputError):
        estimate_tbar(build_complete(3), unit_quantizer, 1, make_rng(0), inits=[[1.0, 1.2, 0.9]])


def test_tbar_rejects_bad_counts(unit_quantizer):
    with pytest.raises(InvalidParameterError):
        estimate_tbar(build_complete(3), unit_quantizer, 0, make_rng(0))
    with pytest.raises(InvalidParameterError):
        estimate_tbar(build_complete(3), unit_quantizer, 2, make_rng(0), inits=[[0.0, 1.0, 2.0]])


# ---------------- cota de convergencia ----------------

def test_convergence_bound_examples():
    assert convergence_bound(10, 0, 4, TbarEstimate.exact(1)) == 20
    assert convergence_bound(2, 0, 2, TbarEstimate.exact(1)) == 1
    tbar = TbarEstimate(value=2.7, stderr=0.1, n_samples=100)
    assert convergence_bound(20, 0, 8, tbar) == pytest.approx(2 * convergence_bound(10, 0, 8, tbar))


@pytest.mark.parametrize(
    "n, m, M, tbar",
    [(0, 0, 4, 1.0), (10, 4, 4, 1.0), (10, 5, 4, 1.0), (10, 0, 4, 0.5)],
)
def test_convergence_bound_rejects(n, m, M, tbar):
    with pytest.raises(InvalidParameterError):
        convergence_bound(n, m, M, TbarEstimate.exact(tbar))


def test_convergence_bound_holds_on_n2_family():
    q = Quantizer(bits=4, range_min=0.0, range_max=15.0)  # Δ = 1
    for span in (2, 4, 8):
        iters = []
        for seed in range(1000):
            run = SimulationRun(graph=build_complete(2), quantizer=q, initial_values=(0.0, float(span)), seed=seed)
            iters.append(run_simulation(run).consensus_iteration)
        assert None not in iters
        mean = sum(iters) / len(iters)
        assert mean <= convergence_bound(2, 0, span, TbarEstimate.exact(1))


# ---------------- agregación ----------------

def test_aggregate_examples():
    s = aggregate_consensus_stats([10, 20, 30])
    assert (s.mean, s.median, s.non_converged, s.n_trials) == (20.0, 20.0, 0, 3)

    s = aggregate_consensus_stats([5, None, 15])
    assert s.mean == 10.0
    assert s.non_converged == 1
    assert s.consensus_iterations == [5, 15]

    s = aggregate_consensus_stats([7])
    assert s.mean == s.median == s.p05 == s.p95 == 7.0


def test_aggregate_all_non_converged():
    s = aggregate_consensus_stats([None, None])
    assert s.mean is None and s.non_converged == 2
    assert s.to_dict()["median"] is None


def test_aggregate_empty():
    with pytest.raises(InvalidParameterError):
        aggregate_consensus_stats([])


def test_aggregate_field_names():
    assert list(aggregate_consensus_stats([1, 2]).to_dict()) == [
        "n_trials", "consensus_iterations", "mean", "median", "p05", "p95", "non_converged",
    ]


@given(st.lists(st.one_of(st.none(), st.integers(min_value=0, max_value=10**6)), min_size=1, max_size=60),
       st.randoms(use_true_random=False))
def test_aggregate_permutation_invariant(results, rnd):
    shuffled = list(results)
    rnd.shuffle(shuffled)
    a, b = aggregate_consensus_stats(results), aggregate_consensus_stats(shuffled)
    assert a == b
    assert a.n_trials == len(a.consensus_iterations) + a.non_converged
    if a.mean is not None:
        assert a.p05 <= a.median <= a.p95
        assert min(a.consensus_iterations) <= a.mean <= max(a.consensus_iterations)


# ---------------- precisión de sincronización ----------------

def test_sync_accuracy_examples():
    assert sync_accuracy(35, 0.5) == 17.5
    assert sync_accuracy(70, 0.5) == 35.0
    assert sync_accuracy(1, 1.0) == 1.0


@given(st.integers(min_value=1, max_value=10**5), st.integers(min_value=1, max_value=1000),
       st.integers(min_value=1, max_value=8))
def test_sync_accuracy_bilinear(iters, latency_ms, factor):
    base = sync_accuracy(iters, latency_ms)
    assert sync_accuracy(iters * factor, latency_ms) == factor * base
    assert sync_accuracy(iters, latency_ms * factor) == factor * base


@pytest.mark.parametrize("iters, latency", [(0, 0.5), (35, 0.0), (-1, 1.0)])
def test_sync_accuracy_rejects(iters, latency):
    with pytest.raises(InvalidParameterError):
        sync_accuracy(iters, latency)


# ---------------- meseta de MSE ----------------

def test_plateau_constant_from_40():
    mse = [1.0 / (l + 1) for l in range(40)] + [0.01] * 30
    assert mse_floor_iteration(_metrics(mse), window=20, rel_tol=0.01) == 40


def test_plateau_geometric_decay_has_none():
    mse = [0.5 ** l for l in range(100)]
    assert mse_floor_iteration(_metrics(mse), window=20, rel_tol=0.05) is None


def test_plateau_after_halving():
    floor = 0.5 ** 35
    mse = [0.5 ** l for l in range(36)] + [floor * (1.01 if l % 2 else 0.99) for l in range(36, 70)]
    assert mse_floor_iteration(_metrics(mse), window=10, rel_tol=0.05) == 35


def test_plateau_all_zero_window():
    assert mse_floor_iteration(_metrics([1.0, 0.5, 0.0, 0.0, 0.0]), window=3, rel_tol=0.05) == 2


def test_plateau_errors():
    with pytest.raises(InsufficientDataError):
        mse_floor_iteration(_metrics([1.0] * 5), window=10)
    with pytest.raises(InvalidParameterError):
        mse_floor_iteration(_metrics([1.0] * 5), window=1)


@settings(max_examples=100)
@given(st.lists(st.floats(min_value=1e-6, max_value=1.0), min_size=5, max_size=60),
       st.floats(min_value=0.0, max_value=0.5), st.floats(min_value=0.0, max_value=0.5))
def test_plateau_monotone_in_tolerance(mse, tol_a, tol_b):
    lo, hi = sorted((tol_a, tol_b))
    m = _metrics(mse)
    at_lo = mse_floor_iteration(m, window=5, rel_tol=lo)
    at_hi = mse_floor_iteration(m, window=5, rel_tol=hi)
    if at_lo is not None:
        assert at_hi is not None and at_hi <= at_lo

