# gossip/analysis.py
# -*- coding: utf-8 -*-
"""
Tiempos de convergencia y agregación entre trials.

- epsilon_averaging_time: primera iteración con ||t(l) - t_ave·1||_2 / ||t(0)||_2 <= tau.
- estimate_tbar: Monte Carlo de T̄(G), el máximo (sobre inicializaciones muestreadas)
  del tiempo esperado hasta el primer paso que cambia valores. Al maximizar solo
  sobre las inicializaciones muestreadas, es una cota INFERIOR del T̄(G) teórico.
- convergence_bound: (M - m)^2 · n · T̄(G) / 8, con el rango en pasos de cuantización.
- aggregate_consensus_stats / mse_floor_iteration / sync_accuracy: soporte de los
  barridos por n y de la conversión latencia -> precisión.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from common.errors import (
    DegenerateInputError,
    InsufficientDataError,
    InvalidParameterError,
)
from common.graph import Graph, sample_edges, uniform_edge_distribution
from common.logger import get_logger
from common.utils import make_rng, spawn_seeds
from gossip.engine import IterationMetrics, NodeStates, pair_update, draw_initial_values
from gossip.quantizer import Quantizer

logger = get_logger(__name__)

DEFAULT_TBAR_REPETITIONS = 100
DEFAULT_PLATEAU_WINDOW = 20
DEFAULT_PLATEAU_REL_TOL = 0.05
# Intentos para sacar una inicialización que no tenga a todos los nodos en el mismo nivel.
MAX_INIT_RESAMPLES = 1000
_EDGE_BATCH = 64


# ---------------- Tipos ----------------

@dataclass(frozen=True)
class ConvergenceStats:
    n_trials: int
    consensus_iterations: List[int]
    mean: Optional[float]
    median: Optional[float]
    p05: Optional[float]
    p95: Optional[float]
    non_converged: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_trials": self.n_trials,
            "consensus_iterations": list(self.consensus_iterations),
            "mean": self.mean,
            "median": self.median,
            "p05": self.p05,
            "p95": self.p95,
            "non_converged": self.non_converged,
        }


@dataclass(frozen=True)
class TbarEstimate:
    value: float
    stderr: float
    n_samples: int

    @classmethod
    def exact(cls, value: float) -> "TbarEstimate":
        """T̄ conocido analíticamente (p.ej. 1 para una sola arista)."""
        return cls(value=float(value), stderr=0.0, n_samples=0)


# ---------------- Tiempo de ε-promediado ----------------

def epsilon_averaging_time(trace_states: Sequence[NodeStates], tau: float) -> Optional[int]:
    if not (0.0 < tau < 1.0):
        raise InvalidParameterError(f"tau debe estar en (0, 1) (recibido {tau})")
    if not trace_states:
        raise InsufficientDataError("traza sin estados")
    t0 = np.asarray(trace_states[0].values, dtype=float)
    norm0 = float(np.linalg.norm(t0))
    if norm0 == 0.0:
        raise DegenerateInputError("||t(0)||_2 = 0: el cociente no está definido")
    t_ave = float(np.mean(t0))
    for s in trace_states:
        dev = np.linalg.norm(np.asarray(s.values, dtype=float) - t_ave)
        if dev / norm0 <= tau:
            return s.iteration
    return None


# ---------------- T̄(G) ----------------

def _first_change_time(
    values: Sequence[float],
    dist,
    q: Optional[Quantizer],
    swap_enabled: bool,
    rng: np.random.Generator,
) -> int:
    # Hasta el primer paso no trivial el estado no cambia: basta con muestrear aristas.
    l = 0
    while True:
        for i, j in sample_edges(dist, rng, _EDGE_BATCH):
            l += 1
            ti, tj = values[i], values[j]
            ni, nj, _ = pair_update(ti, tj, q, swap_enabled)
            if ni != ti or nj != tj:
                return l


def _can_change(values: Sequence[float], g: Graph, q: Optional[Quantizer], swap_enabled: bool) -> bool:
    for i, j in g.edges:
        ni, nj, _ = pair_update(values[i], values[j], q, swap_enabled)
        if ni != values[i] or nj != values[j]:
            return True
    return False


def estimate_tbar(
    g: Graph,
    q: Quantizer,
    n_inits: int,
    rng: np.random.Generator,
    repetitions: int = DEFAULT_TBAR_REPETITIONS,
    inits: Optional[Sequence[Sequence[float]]] = None,
    swap_enabled: bool = True,
) -> TbarEstimate:
    """
    Para cada inicialización (aleatoria en [m, M], o las de `inits`) estima
    E[T_1] con `repetitions` repeticiones y devuelve la mayor, con el error
    estándar de esa misma celda.

    Inicializaciones aleatorias sin ningún paso posible (todos en un nivel) se
    vuelven a muestrear; si vienen explícitas, DegenerateInputError.
    """
    if n_inits < 1 or repetitions < 1:
        raise InvalidParameterError(f"n_inits y repetitions deben ser >= 1 ({n_inits}, {repetitions})")
    if not g.is_connected():
        raise InvalidParameterError("estimate_tbar necesita un grafo conexo")
    if inits is not None and len(inits) != n_inits:
        raise InvalidParameterError(f"{len(inits)} inicializaciones explícitas para n_inits={n_inits}")

    dist = uniform_edge_distribution(g)
    # Semillas por celda fijadas de antemano: el resultado no depende del orden de ejecución.
    seeds = spawn_seeds(rng, n_inits)

    best: Optional[TbarEstimate] = None
    for c, seed in enumerate(seeds):
        cell_rng = make_rng(seed)
        if inits is not None:
            values = [float(v) for v in inits[c]]
            if len(values) != g.n:
                raise InvalidParameterError(f"inicialización {c}: {len(values)} valores para {g.n} nodos")
            if not _can_change(values, g, q, swap_enabled):
                raise DegenerateInputError(f"inicialización {c}: ningún paso cambia valores")
        else:
            for _ in range(MAX_INIT_RESAMPLES):
                values = list(draw_initial_values(g.n, (q.range_min, q.range_max), cell_rng))
                if _can_change(values, g, q, swap_enabled):
                    break
            else:
                raise DegenerateInputError(
                    f"sin inicialización no degenerada tras {MAX_INIT_RESAMPLES} intentos"
                )

        samples = np.array(
            [_first_change_time(values, dist, q, swap_enabled, cell_rng) for _ in range(repetitions)],
            dtype=float,
        )
        mean = float(samples.mean())
        stderr = float(samples.std(ddof=1) / math.sqrt(repetitions)) if repetitions > 1 else 0.0
        logger.debug("tbar: celda %d -> E[T1]=%.4f (se=%.4f)", c, mean, stderr)
        if best is None or mean > best.value:
            best = TbarEstimate(value=mean, stderr=stderr, n_samples=n_inits * repetitions)

    return best


def convergence_bound(n: int, m: float, M: float, tbar: TbarEstimate) -> float:
    """(M - m)^2 · n · T̄(G) / 8 iteraciones; m y M en pasos de cuantización."""
    if n <= 0:
        raise InvalidParameterError(f"n debe ser > 0 (recibido {n})")
    if not M > m:
        raise InvalidParameterError(f"M={M} debe ser > m={m}")
    if not tbar.value >= 1:
        raise InvalidParameterError(f"tbar debe ser >= 1 (recibido {tbar.value})")
    return (M - m) ** 2 * n * tbar.value / 8


# ---------------- Agregación entre trials ----------------

def aggregate_consensus_stats(results: Sequence[Optional[int]]) -> ConvergenceStats:
    """
    Media/mediana/percentiles sobre los trials que convergieron; los demás
    se cuentan aparte. Percentiles por rango más cercano (inverted_cdf).
    """
    if not results:
        raise InvalidParameterError("aggregate_consensus_stats: lista vacía")
    converged = sorted(int(r) for r in results if r is not None)
    non_converged = len(results) - len(converged)
    if not converged:
        return ConvergenceStats(len(results), [], None, None, None, None, non_converged)
    arr = np.asarray(converged, dtype=float)
    return ConvergenceStats(
        n_trials=len(results),
        consensus_iterations=converged,
        mean=float(arr.mean()),
        median=float(np.median(arr)),
        p05=float(np.percentile(arr, 5, method="inverted_cdf")),
        p95=float(np.percentile(arr, 95, method="inverted_cdf")),
        non_converged=non_converged,
    )


def sync_accuracy(iterations_to_mse_floor: float, per_step_latency: float) -> float:
    """Iteraciones hasta la meseta × latencia por paso (misma unidad que la latencia)."""
    if iterations_to_mse_floor <= 0 or per_step_latency <= 0:
        raise InvalidParameterError(
            f"iteraciones y latencia deben ser > 0 ({iterations_to_mse_floor}, {per_step_latency})"
        )
    return iterations_to_mse_floor * per_step_latency


def mse_floor_iteration(
    metrics: Sequence[IterationMetrics],
    window: int = DEFAULT_PLATEAU_WINDOW,
    rel_tol: float = DEFAULT_PLATEAU_REL_TOL,
) -> Optional[int]:
    """
    Primera iteración l tal que en [l, l+window) max(MSE)/min(MSE) < 1 + rel_tol.
    Una ventana toda a cero cuenta como meseta; con min = 0 y max > 0, no.
    """
    if window < 2:
        raise InvalidParameterError(f"window debe ser >= 2 (recibido {window})")
    if rel_tol < 0:
        raise InvalidParameterError(f"rel_tol debe ser >= 0 (recibido {rel_tol})")
    if len(metrics) < window:
        raise InsufficientDataError(f"traza de {len(metrics)} puntos < ventana {window}")

    mse = np.asarray([m.mse for m in metrics], dtype=float)
    views = sliding_window_view(mse, window)
    hi = views.max(axis=1)
    lo = views.min(axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(hi == 0.0, 1.0, hi / lo)
    hits = np.nonzero(ratio < 1.0 + rel_tol)[0]
    if hits.size == 0:
        return None
    return metrics[int(hits[0])].iteration
