# gossip/engine.py
# -*- coding: utf-8 -*-
"""
Máquina de estados del gossip por pares con intercambio cuantizado.

En cada iteración l se elige una arista {i, j} y los dos nodos actualizan:

    t_i(l+1) = t_i(l) - ½·Q[t_i(l)] + ½·Q[t_j(l)]
    t_j(l+1) = t_j(l) - ½·Q[t_j(l)] + ½·Q[t_i(l)]

Reglas de composición (modo cuantizado, comparando NIVELES, no valores reales):
  * mismo nivel                          -> sin cambio
  * niveles adyacentes y swap activado   -> intercambio exacto de valores reales
  * resto                                -> fórmula de arriba
Modo real (q = None): ambos nodos pasan al punto medio.

En todas las ramas t_i + t_j se conserva; el swap además es bit-exacto.

Consenso:
  * cuantizado: max_i |t_i(l) - media(t(0))| < Δ
  * real:       max_i |t_i(l) - media(t(0))| < tol (obligatoria)
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from common.errors import (
    DisconnectedTopologyError,
    InvalidEdgeError,
    InvalidParameterError,
    InvalidSizeError,
    MissingToleranceError,
    ValueRangeError,
)
from common.graph import Edge, Graph, sample_edges, uniform_edge_distribution
from common.logger import get_logger
from common.utils import make_rng
from gossip.quantizer import Quantizer

logger = get_logger(__name__)

DEFAULT_MAX_ITERATIONS = 100_000
# Aristas por bloque de muestreo. Fijo: la secuencia de aristas no depende del tope de iteraciones.
EDGE_BLOCK = 4096


# ---------------- Tipos ----------------

class StepKind(str, enum.Enum):
    AVERAGED = "averaged"
    SWAPPED = "swapped"
    NO_CHANGE = "no-change"


@dataclass(frozen=True)
class NodeStates:
    values: Tuple[float, ...]
    iteration: int = 0

    @classmethod
    def initial(cls, values: Sequence[float]) -> "NodeStates":
        return cls(values=tuple(float(v) for v in values), iteration=0)

    @property
    def n(self) -> int:
        return len(self.values)

    def mean(self) -> float:
        return math.fsum(self.values) / len(self.values)


@dataclass(frozen=True)
class StepOutcome:
    edge: Edge
    kind: StepKind
    values_changed: bool


@dataclass(frozen=True)
class IterationMetrics:
    iteration: int
    mse: float
    spread: float
    min: float
    max: float
    at_consensus: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "iteration": self.iteration,
            "mse": self.mse,
            "spread": self.spread,
            "min": self.min,
            "max": self.max,
            "at_consensus": self.at_consensus,
        }


# ---------------- Actualización por pares ----------------

def pair_update(
    ti: float, tj: float, q: Optional[Quantizer], swap_enabled: bool
) -> Tuple[float, float, StepKind]:
    if q is None:
        if ti == tj:
            return ti, tj, StepKind.NO_CHANGE
        mid = (ti + tj) / 2.0
        return mid, mid, StepKind.AVERAGED

    ki, kj = q.level(ti), q.level(tj)
    if ki == kj:
        return ti, tj, StepKind.NO_CHANGE
    if swap_enabled and abs(ki - kj) == 1:
        return tj, ti, StepKind.SWAPPED
    # h = ½Q[t_j] - ½Q[t_i]; sumar y restar el mismo h conserva t_i + t_j
    h = (q.value_of(kj) - q.value_of(ki)) / 2.0
    return ti + h, tj - h, StepKind.AVERAGED


def gossip_step(
    s: NodeStates,
    edge: Sequence[int],
    q: Optional[Quantizer] = None,
    swap_enabled: bool = True,
) -> Tuple[NodeStates, StepOutcome]:
    """Un paso de gossip sobre la arista {i, j}. No modifica s."""
    i, j = int(edge[0]), int(edge[1])
    if i == j or not (0 <= i < s.n and 0 <= j < s.n):
        raise InvalidEdgeError(f"arista ({i}, {j}) inválida para {s.n} nodos")
    ti, tj = s.values[i], s.values[j]
    ni, nj, kind = pair_update(ti, tj, q, swap_enabled)
    values = list(s.values)
    values[i], values[j] = ni, nj
    changed = ni != ti or nj != tj
    outcome = StepOutcome(edge=(i, j), kind=kind if changed else StepKind.NO_CHANGE, values_changed=changed)
    return NodeStates(values=tuple(values), iteration=s.iteration + 1), outcome


# ---------------- Consenso y métricas ----------------

def _threshold(q: Optional[Quantizer], tol: Optional[float]) -> float:
    if q is not None:
        return q.step
    if tol is None:
        raise MissingToleranceError("modo real sin tolerancia de consenso (tol)")
    return float(tol)


def _max_deviation(values: Sequence[float], center: float) -> float:
    return max(abs(v - center) for v in values)


def check_consensus(
    s: NodeStates, initial_mean: float, q: Optional[Quantizer] = None, tol: Optional[float] = None
) -> bool:
    return _max_deviation(s.values, initial_mean) < _threshold(q, tol)


def compute_metrics(
    s: NodeStates, initial_mean: float, q: Optional[Quantizer] = None, tol: Optional[float] = None
) -> IterationMetrics:
    # fsum: resultado independiente del orden de los nodos (un swap no mueve el MSE).
    lo, hi = min(s.values), max(s.values)
    return IterationMetrics(
        iteration=s.iteration,
        mse=math.fsum((v - initial_mean) ** 2 for v in s.values) / len(s.values),
        spread=hi - lo,
        min=lo,
        max=hi,
        at_consensus=check_consensus(s, initial_mean, q, tol),
    )


# ---------------- Simulación ----------------

@dataclass(frozen=True)
class SimulationRun:
    """
    Una ejecución concreta (un trial): grafo ya construido y valores resueltos.
    El harness traduce SimulationConfig -> SimulationRun por trial.
    """

    graph: Graph
    quantizer: Optional[Quantizer]
    init_range: Tuple[float, float] = (0.0, 1.0)
    initial_values: Optional[Tuple[float, ...]] = None
    swap_enabled: bool = True
    tol: Optional[float] = None
    seed: int = 0
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    record_every: int = 1
    full_state: bool = False
    stop_at_consensus: bool = True


@dataclass(frozen=True)
class Trace:
    metrics: Tuple[IterationMetrics, ...]
    consensus_iteration: Optional[int]
    first_change_iteration: Optional[int]
    iterations_run: int
    initial_mean: float
    initial_values: Tuple[float, ...]
    final_values: Tuple[float, ...]
    snapshots: Tuple[NodeStates, ...] = ()
    consensus_lost: bool = False
    seed: int = 0

    @property
    def converged(self) -> bool:
        return self.consensus_iteration is not None

    def mse_series(self) -> List[float]:
        return [m.mse for m in self.metrics]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "seed": self.seed,
            "consensus_iteration": self.consensus_iteration,
            "first_change_iteration": self.first_change_iteration,
            "iterations_run": self.iterations_run,
            "consensus_lost": self.consensus_lost,
            "initial_mean": self.initial_mean,
            "initial_values": list(self.initial_values),
            "final_values": list(self.final_values),
            "metrics": [m.to_dict() for m in self.metrics],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def draw_initial_values(
    n: int, init_range: Tuple[float, float], rng: np.random.Generator
) -> Tuple[float, ...]:
    """Valores iniciales i.i.d. uniformes en [m, M]."""
    lo, hi = init_range
    return tuple(float(v) for v in rng.uniform(lo, hi, size=n))


def _validate(run: SimulationRun) -> None:
    if run.max_iterations < 1:
        raise InvalidParameterError(f"max_iterations debe ser >= 1 ({run.max_iterations})")
    if run.record_every < 1:
        raise InvalidParameterError(f"record_every debe ser >= 1 ({run.record_every})")
    if not run.graph.is_connected():
        raise DisconnectedTopologyError("el grafo no es conexo: el gossip no alcanzaría la media global")
    if run.quantizer is None and run.tol is None:
        raise MissingToleranceError("modo real sin tolerancia de consenso (tol)")


def run_simulation(run: SimulationRun, rng: Optional[np.random.Generator] = None) -> Trace:
    """
    Muestrea aristas y aplica gossip_step hasta consenso o max_iterations.

    rng: si no se pasa, se crea con run.seed. El harness pasa el mismo generator
    que usó para el grafo (RGG) para no reutilizar la secuencia desde el principio.
    """
    _validate(run)
    rng = rng if rng is not None else make_rng(run.seed)
    g, q = run.graph, run.quantizer

    if run.initial_values is not None:
        values = [float(v) for v in run.initial_values]
        if len(values) != g.n:
            raise InvalidSizeError(f"{len(values)} valores iniciales para {g.n} nodos")
    else:
        values = list(draw_initial_values(g.n, run.init_range, rng))
    if q is not None:
        bad = [v for v in values if not q.contains(v)]
        if bad:
            raise ValueRangeError(
                f"{len(bad)} valores iniciales fuera de [{q.range_min}, {q.range_max}] (p.ej. {bad[0]!r})"
            )

    initial = tuple(values)
    initial_mean = math.fsum(values) / len(values)
    threshold = _threshold(q, run.tol)
    dist = uniform_edge_distribution(g)

    metrics: List[IterationMetrics] = []
    snapshots: List[NodeStates] = []
    # Las métricas solo dependen del multiconjunto de valores: swaps y pasos sin cambio
    # no las mueven, así que se recalculan solo tras un promediado.
    dirty = True

    def record(l: int) -> None:
        nonlocal dirty
        state = NodeStates(values=tuple(values), iteration=l) if (dirty or run.full_state) else None
        if dirty:
            metrics.append(compute_metrics(state, initial_mean, q, run.tol))
            dirty = False
        else:
            last = metrics[-1]
            metrics.append(IterationMetrics(l, last.mse, last.spread, last.min, last.max, last.at_consensus))
        if run.full_state:
            snapshots.append(state)

    # Nodos con |t_i - media| >= umbral; consenso <=> 0. Se actualiza solo en i, j.
    def outside(v: float) -> int:
        return 1 if abs(v - initial_mean) >= threshold else 0

    violators = sum(outside(v) for v in values)
    at_consensus = violators == 0
    consensus_iteration: Optional[int] = 0 if at_consensus else None
    first_change: Optional[int] = None
    consensus_lost = False
    record(0)
    logger.debug("simulación: n=%d |E|=%d seed=%d", g.n, g.num_edges, run.seed)

    l = 0
    block: List[List[int]] = []
    pos = 0
    while l < run.max_iterations and not (at_consensus and run.stop_at_consensus):
        if pos >= len(block):
            block = sample_edges(dist, rng, EDGE_BLOCK).tolist()
            pos = 0
        i, j = block[pos]
        pos += 1
        l += 1

        ti, tj = values[i], values[j]
        ni, nj, kind = pair_update(ti, tj, q, run.swap_enabled)
        if ni != ti or nj != tj:
            values[i], values[j] = ni, nj
            if kind is not StepKind.SWAPPED:
                dirty = True
            if first_change is None:
                first_change = l
            violators += outside(ni) + outside(nj) - outside(ti) - outside(tj)
            now = violators == 0
            if now and consensus_iteration is None:
                consensus_iteration = l
            if at_consensus and not now:
                consensus_lost = True
            at_consensus = now

        if l % run.record_every == 0:
            record(l)

    if metrics[-1].iteration != l:
        record(l)

    logger.debug("simulación: %d iteraciones, consenso=%s", l, consensus_iteration)
    return Trace(
        metrics=tuple(metrics),
        consensus_iteration=consensus_iteration,
        first_change_iteration=first_change,
        iterations_run=l,
        initial_mean=initial_mean,
        initial_values=initial,
        final_values=tuple(values),
        snapshots=tuple(snapshots),
        consensus_lost=consensus_lost,
        seed=run.seed,
    )


def with_values(run: SimulationRun, values: Sequence[float]) -> SimulationRun:
    """Copia de run con valores iniciales explícitos."""
    return replace(run, initial_values=tuple(float(v) for v in values))
