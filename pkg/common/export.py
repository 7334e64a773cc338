# common/export.py
# -*- coding: utf-8 -*-
"""
Escritura de ficheros de resultados (trazas, estados, informes, barridos).

Todo lo que sale de aquí es determinista byte a byte: claves JSON ordenadas,
floats con 17 cifras, fin de línea '\n', sin marcas de tiempo.
"""

from __future__ import annotations

import csv
import io
import json
import os
from typing import Any, Iterable, List, Optional, Sequence

from common.format import STATE_COLUMNS, TRACE_COLUMNS, metrics_rows, state_rows
from common.logger import get_logger

logger = get_logger(__name__)


def ensure_dir(path: str) -> None:
    if path and not os.path.exists(path):
        os.makedirs(path, exist_ok=True)


def dumps_json(data: Any) -> str:
    return json.dumps(data, ensure_ascii=False, indent=2, sort_keys=True) + "\n"


def save_json(path: str, data: Any) -> None:
    ensure_dir(os.path.dirname(path))
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps_json(data))


def csv_text(header: Sequence[str], rows: Iterable[Sequence[str]], comment: Optional[str] = None) -> str:
    buf = io.StringIO()
    if comment:
        buf.write(comment.rstrip("\n") + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def save_text(path: str, text: str) -> None:
    ensure_dir(os.path.dirname(path))
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(text)


def trace_csv(trace) -> str:
    """CSV iteration,mse,spread,min,max,at_consensus."""
    return csv_text(TRACE_COLUMNS, metrics_rows(trace.metrics))


def state_csv(trace) -> str:
    """CSV iteration,node_id,value (solo con registro de estado completo)."""
    return csv_text(STATE_COLUMNS, state_rows(trace.snapshots))


def write_trial_files(out_dir: str, trial_index: int, trace, graph, fmt: str) -> List[str]:
    """
    Escribe los ficheros de un trial y devuelve sus nombres RELATIVOS a out_dir
    (el informe no depende de dónde se guardó).
    """
    stem = f"trial_{trial_index:03d}"
    files: List[str] = []

    if fmt == "json":
        name = f"{stem}.json"
        save_json(os.path.join(out_dir, name), trace.to_dict())
    else:
        name = f"{stem}.csv"
        save_text(os.path.join(out_dir, name), trace_csv(trace))
    files.append(name)

    if trace.snapshots:
        name = f"{stem}_state.csv"
        save_text(os.path.join(out_dir, name), state_csv(trace))
        files.append(name)

    if graph is not None:
        name = f"{stem}_graph.json"
        save_json(os.path.join(out_dir, name), graph.to_dict())
        files.append(name)

    return files


def missing_files(out_dir: str, names: Iterable[str]) -> List[str]:
    return [n for n in names if not os.path.exists(os.path.join(out_dir, n))]
