# common/utils.py
# -*- coding: utf-8 -*-
"""
Utilidades compartidas: generadores aleatorios con semilla, derivación de
semillas por trial y formato de floats para los ficheros de salida.

Centraliza lo que antes se repetía en cada script para que todas las
ejecuciones deriven la aleatoriedad de la misma forma (reproducibilidad).
"""

from __future__ import annotations

import os
from typing import Optional

import numpy as np

# 17 cifras significativas: ida y vuelta exacta para doubles.
FLOAT_FMT = ".17g"


def make_rng(seed: Optional[int]) -> np.random.Generator:
    """Generator de numpy. Única fuente de aleatoriedad del proyecto."""
    return np.random.default_rng(seed)


def trial_seed(base_seed: int, trial_index: int) -> int:
    """Semilla del trial k: seed + k (simple y sin colisiones dentro de un lote)."""
    return int(base_seed) + int(trial_index)


def spawn_seeds(rng: np.random.Generator, count: int) -> list[int]:
    """Semillas hijas independientes, fijadas antes de lanzar el trabajo (orden-independiente)."""
    return [int(s) for s in rng.integers(0, 2**63 - 1, size=count, dtype=np.int64)]


def fmt_float(x: Optional[float]) -> str:
    """Float con 17 cifras significativas; vacío si None."""
    if x is None:
        return ""
    return format(float(x), FLOAT_FMT)


def fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def is_truthy_env(name: str) -> bool:
    return os.getenv(name, "").strip().lower() in ("1", "true", "yes", "y", "on")
