# gossip/harness.py
# -*- coding: utf-8 -*-
"""
Orquestación de experimentos: lotes de trials, barridos por n y comparación
real vs. cuantizado.

Por trial k:
    seed_k = seed + k
    rng    = default_rng(seed_k)
    grafo  = topologies.<nombre>.build(spec, rng)   # RGG remuestrea posiciones en cada trial
    traza  = run_simulation(run_k, rng)             # mismo rng: init uniforme + aristas

Un trial que falla (p.ej. RGG sin grafo conexo) queda registrado con su error y el
lote continúa. Los ficheros se escriben al final del lote.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from common.config import SimulationConfig
from common.errors import ConfigMismatchError, GossipError, InvalidParameterError
from common.export import csv_text, save_json, save_text, write_trial_files
from common.format import COMPARE_COLUMNS, SWEEP_COLUMNS, compare_rows, padding_note, sweep_row
from common.graph import Graph
from common.logger import get_logger
from common.templates import render_summary
from common.utils import make_rng, trial_seed
from gossip.analysis import (
    ConvergenceStats,
    aggregate_consensus_stats,
    epsilon_averaging_time,
    mse_floor_iteration,
    sync_accuracy,
)
from gossip.engine import SimulationRun, Trace, run_simulation
from topologies import load_topology

logger = get_logger(__name__)

REPORT_FILE = "report.json"
STATS_FILE = "stats.json"
SUMMARY_FILE = "summary.txt"
SWEEP_FILE = "sweep.csv"
COMPARE_FILE = "compare.csv"


# ---------------- Tipos ----------------

@dataclass(frozen=True)
class TrialResult:
    trial_index: int
    seed: int
    consensus_iteration: Optional[int] = None
    first_change_iteration: Optional[int] = None
    iterations_run: int = 0
    consensus_lost: bool = False
    mse_floor_iteration: Optional[int] = None
    epsilon_time: Optional[int] = None
    sync_accuracy_ms: Optional[float] = None
    error: Optional[str] = None
    files: Tuple[str, ...] = ()

    def to_dict(self) -> Dict[str, Any]:
        return {
            "trial_index": self.trial_index,
            "seed": self.seed,
            "consensus_iteration": self.consensus_iteration,
            "first_change_iteration": self.first_change_iteration,
            "iterations_run": self.iterations_run,
            "consensus_lost": self.consensus_lost,
            "mse_floor_iteration": self.mse_floor_iteration,
            "epsilon_time": self.epsilon_time,
            "sync_accuracy_ms": self.sync_accuracy_ms,
            "error": self.error,
            "files": list(self.files),
        }


@dataclass
class ExperimentReport:
    config: SimulationConfig
    trials: List[TrialResult]
    stats: ConvergenceStats
    files: List[str] = field(default_factory=list)
    # En memoria, no se serializa: la usan emit_compare y los tests.
    traces: List[Optional[Trace]] = field(default_factory=list, repr=False)

    @property
    def consensus_iterations(self) -> List[Optional[int]]:
        return [t.consensus_iteration for t in self.trials]

    @property
    def mse_floor_iterations(self) -> List[Optional[int]]:
        return [t.mse_floor_iteration for t in self.trials]

    @property
    def any_converged(self) -> bool:
        return any(t.consensus_iteration is not None for t in self.trials)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config.echo(),
            "trials": [t.to_dict() for t in self.trials],
            "consensus_iterations": self.consensus_iterations,
            "stats": self.stats.to_dict(),
            "files": list(self.files),
        }


# ---------------- Un trial ----------------

def build_run(cfg: SimulationConfig, graph: Graph, seed: int) -> SimulationRun:
    return SimulationRun(
        graph=graph,
        quantizer=cfg.quantizer(),
        init_range=(cfg.range_min, cfg.range_max),
        initial_values=cfg.init_values,
        swap_enabled=cfg.swap_enabled,
        tol=cfg.effective_tol(),
        seed=seed,
        max_iterations=cfg.max_iterations,
        record_every=cfg.record_every,
        full_state=cfg.full_state,
        stop_at_consensus=cfg.stop_at_consensus,
    )


def _trial_analysis(cfg: SimulationConfig, trace: Trace) -> Dict[str, Any]:
    """Meseta de MSE, ε-tiempo y precisión de sync, cuando la traza lo permite."""
    out: Dict[str, Any] = {"mse_floor_iteration": None, "epsilon_time": None, "sync_accuracy_ms": None}
    if cfg.record_every == 1 and len(trace.metrics) >= cfg.plateau_window:
        out["mse_floor_iteration"] = mse_floor_iteration(trace.metrics, cfg.plateau_window, cfg.plateau_tol)
    if cfg.record_every == 1 and trace.snapshots and any(trace.initial_values):
        out["epsilon_time"] = epsilon_averaging_time(trace.snapshots, cfg.tau)
    floor = out["mse_floor_iteration"]
    if cfg.step_latency_ms is not None and floor:
        out["sync_accuracy_ms"] = sync_accuracy(floor, cfg.step_latency_ms)
    return out


def run_trial(cfg: SimulationConfig, trial_index: int) -> Tuple[Graph, Trace]:
    seed = trial_seed(cfg.seed, trial_index)
    rng = make_rng(seed)
    graph = load_topology(cfg.topology).build(cfg.topology_spec, rng)
    trace = run_simulation(build_run(cfg, graph, seed), rng)
    return graph, trace


# ---------------- Lote ----------------

def run_experiment(cfg: SimulationConfig, write: bool = True) -> ExperimentReport:
    """
    Ejecuta cfg.trials trials, agrega y (si write) escribe trazas + informe en cfg.out_dir.
    """
    cfg.validate()
    results: List[Tuple[int, int, Optional[Graph], Optional[Trace], Optional[str]]] = []

    for k in range(cfg.trials):
        seed = trial_seed(cfg.seed, k)
        try:
            graph, trace = run_trial(cfg, k)
        except GossipError as exc:
            logger.warning("[trial %d] falló: %s", k, exc)
            results.append((k, seed, None, None, str(exc)))
            continue
        except Exception as exc:
            logger.exception("[trial %d] error inesperado: %s", k, exc)
            results.append((k, seed, None, None, f"{type(exc).__name__}: {exc}"))
            continue
        logger.info(
            "[trial %d] seed=%d consenso=%s iteraciones=%d",
            k, seed, trace.consensus_iteration, trace.iterations_run,
        )
        results.append((k, seed, graph, trace, None))

    # Escritura serializada al final del lote
    trials: List[TrialResult] = []
    traces: List[Optional[Trace]] = []
    all_files: List[str] = []
    for k, seed, graph, trace, error in results:
        if trace is None:
            trials.append(TrialResult(trial_index=k, seed=seed, error=error))
            traces.append(None)
            continue
        files: List[str] = []
        if write:
            files = write_trial_files(cfg.out_dir, k, trace, graph, cfg.format)
            all_files.extend(files)
        extra = _trial_analysis(cfg, trace)
        trials.append(
            TrialResult(
                trial_index=k,
                seed=seed,
                consensus_iteration=trace.consensus_iteration,
                first_change_iteration=trace.first_change_iteration,
                iterations_run=trace.iterations_run,
                consensus_lost=trace.consensus_lost,
                files=tuple(files),
                **extra,
            )
        )
        traces.append(trace)

    stats = aggregate_consensus_stats([t.consensus_iteration for t in trials])
    report = ExperimentReport(config=cfg, trials=trials, stats=stats, files=all_files, traces=traces)

    if write:
        report.files.extend([STATS_FILE, SUMMARY_FILE, REPORT_FILE])
        save_json(os.path.join(cfg.out_dir, STATS_FILE), stats.to_dict())
        save_text(os.path.join(cfg.out_dir, SUMMARY_FILE), render_summary(summary_context(report)))
        save_json(os.path.join(cfg.out_dir, REPORT_FILE), report.to_dict())
        logger.info("Informe escrito en %s", os.path.join(cfg.out_dir, REPORT_FILE))
    return report


def summary_context(report: ExperimentReport) -> Dict[str, Any]:
    cfg = report.config
    return {
        "config": cfg.echo(),
        "tol": cfg.effective_tol(),
        "stats": report.stats.to_dict(),
        "non_converged_pct": 100.0 * report.stats.non_converged / report.stats.n_trials,
        "trials": [t.to_dict() for t in report.trials],
        "files": report.files,
    }


# ---------------- Barrido por n ----------------

@dataclass(frozen=True)
class SweepRow:
    n_nodes: int
    topology: str
    stats: ConvergenceStats
    seed: int


def run_sweep(cfg_template: SimulationConfig, node_counts: Sequence[int], write: bool = True) -> Tuple[List[SweepRow], str]:
    """
    Un run_experiment por entrada de node_counts; devuelve (filas, CSV).
    Entrada e usa la semilla base seed + e·trials: entradas repetidas no comparten trials.
    """
    if not node_counts:
        raise InvalidParameterError("node_counts vacío")
    rows: List[SweepRow] = []
    for e, n in enumerate(node_counts):
        entry_seed = cfg_template.seed + e * cfg_template.trials
        sub_dir = os.path.join(cfg_template.out_dir, f"n{int(n):03d}_{e:02d}")
        cfg = replace(cfg_template.with_nodes(int(n), entry_seed), out_dir=sub_dir)
        report = run_experiment(cfg, write=write)
        logger.info("sweep n=%d: mediana=%s sin consenso=%d", n, report.stats.median, report.stats.non_converged)
        rows.append(SweepRow(n_nodes=int(n), topology=cfg.topology, stats=report.stats, seed=entry_seed))

    text = csv_text(SWEEP_COLUMNS, [sweep_row(r.n_nodes, r.topology, r.stats) for r in rows])
    if write:
        save_text(os.path.join(cfg_template.out_dir, SWEEP_FILE), text)
    return rows, text


def linear_fit_r2(xs: Sequence[float], ys: Sequence[float]) -> Tuple[float, float, float]:
    """Ajuste lineal por mínimos cuadrados: (pendiente, ordenada, R²)."""
    x = np.asarray(xs, dtype=float)
    y = np.asarray(ys, dtype=float)
    if len(x) < 2:
        raise InvalidParameterError("hacen falta al menos 2 puntos para el ajuste")
    slope, intercept = np.polyfit(x, y, 1)
    residual = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0 else 1.0 - float(np.sum(residual ** 2)) / ss_tot
    return float(slope), float(intercept), r2


# ---------------- Comparación real vs. cuantizado ----------------

_COMPARE_IGNORED = ("mode", "tol")


def emit_compare(real_report: ExperimentReport, quantized_report: ExperimentReport, out_path: Optional[str] = None) -> str:
    """
    CSV iteration,mse_real,mse_quantized del primer trial de cada informe.
    La serie más corta se rellena con su último MSE y se avisa en un comentario de cabecera.
    """
    a = real_report.config.echo()
    b = quantized_report.config.echo()
    if a["mode"] != "real" or b["mode"] != "quantized":
        raise ConfigMismatchError("se espera (informe real, informe cuantizado)")
    diff = sorted(k for k in a if k not in _COMPARE_IGNORED and a[k] != b[k])
    if diff:
        raise ConfigMismatchError(f"configuraciones distintas en: {', '.join(diff)}")
    if a["record_every"] != 1:
        raise ConfigMismatchError("la comparación necesita métricas en cada iteración (record_every=1)")

    real_trace = real_report.traces[0] if real_report.traces else None
    quant_trace = quantized_report.traces[0] if quantized_report.traces else None
    if real_trace is None or quant_trace is None:
        raise ConfigMismatchError("el primer trial de algún informe no tiene traza")

    real_mse = real_trace.mse_series()
    quant_mse = quant_trace.mse_series()
    text = csv_text(
        COMPARE_COLUMNS,
        compare_rows(real_mse, quant_mse),
        comment=padding_note(len(real_mse), len(quant_mse)),
    )
    if out_path:
        save_text(out_path, text)
        logger.info("Comparación escrita en %s", out_path)
    return text
