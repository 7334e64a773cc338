# common/format.py
# -*- coding: utf-8 -*-
"""
Cabeceras y filas de los CSV de salida. Las columnas son contrato: los scripts
de gráficas las leen por nombre, no se reordenan.
"""

from __future__ import annotations

from typing import Iterable, List, Optional, Sequence

from common.utils import fmt_bool, fmt_float

TRACE_COLUMNS = ("iteration", "mse", "spread", "min", "max", "at_consensus")
STATE_COLUMNS = ("iteration", "node_id", "value")
SWEEP_COLUMNS = ("n_nodes", "topology", "mean_iters", "median_iters", "p05", "p95", "non_converged")
COMPARE_COLUMNS = ("iteration", "mse_real", "mse_quantized")


def metrics_rows(metrics: Iterable) -> List[List[str]]:
    return [
        [str(m.iteration), fmt_float(m.mse), fmt_float(m.spread), fmt_float(m.min), fmt_float(m.max),
         fmt_bool(m.at_consensus)]
        for m in metrics
    ]


def state_rows(snapshots: Iterable) -> List[List[str]]:
    rows: List[List[str]] = []
    for s in snapshots:
        for node_id, value in enumerate(s.values):
            rows.append([str(s.iteration), str(node_id), fmt_float(value)])
    return rows


def sweep_row(n: int, topology: str, stats) -> List[str]:
    return [
        str(n), topology, fmt_float(stats.mean), fmt_float(stats.median),
        fmt_float(stats.p05), fmt_float(stats.p95), str(stats.non_converged),
    ]


def compare_rows(real: Sequence[float], quantized: Sequence[float]) -> List[List[str]]:
    """Una fila por iteración; la serie más corta se rellena con su último valor."""
    length = max(len(real), len(quantized))
    rows = []
    for l in range(length):
        r = real[min(l, len(real) - 1)]
        q = quantized[min(l, len(quantized) - 1)]
        rows.append([str(l), fmt_float(r), fmt_float(q)])
    return rows


def padding_note(real_len: int, quantized_len: int) -> Optional[str]:
    """Comentario de cabecera cuando alguna serie se ha rellenado; None si no hace falta."""
    if quantized_len < real_len:
        return f"# mse_quantized padded with last recorded value after iteration {quantized_len - 1}"
    if real_len < quantized_len:
        return f"# mse_real padded with last recorded value after iteration {real_len - 1}"
    return None
