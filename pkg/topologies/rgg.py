# topologies/rgg.py
# -*- coding: utf-8 -*-
"""
Grafo geométrico aleatorio (RGG) en una caja cuadrada.

- Posiciones i.i.d. uniformes en [0, box_side]^2.
- Arista {i, j} si y solo si la distancia euclídea es ESTRICTAMENTE menor que radius
  ("distance less than 0.8m").
- Si el grafo sale no conexo se vuelven a muestrear TODAS las posiciones,
  hasta max_attempts veces; después, DisconnectedTopologyError con el número de intentos.

Las posiciones quedan guardadas en el Graph: el conjunto de aristas es
recalculable con rgg_edges_from_positions().
"""

from __future__ import annotations

import logging
from typing import List, Sequence

import numpy as np

from common.errors import DisconnectedTopologyError, InvalidParameterError, InvalidSizeError
from common.graph import Edge, Graph
from common.logger import get_logger

logger = get_logger(__name__)

MIN_NODES = 2
DEFAULT_MAX_ATTEMPTS = 100


def rgg_edges_from_positions(positions: Sequence[Sequence[float]], radius: float) -> List[Edge]:
    """Aristas {i, j}, i < j, con ||p_i - p_j|| < radius."""
    pts = np.asarray(positions, dtype=float)
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.linalg.norm(diff, axis=-1)
    ii, jj = np.nonzero(np.triu(dist < radius, k=1))
    return [(int(i), int(j)) for i, j in zip(ii, jj)]


def build_rgg(
    n: int,
    box_side: float,
    radius: float,
    rng: np.random.Generator,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> Graph:
    if n < MIN_NODES:
        raise InvalidSizeError(f"rgg: n debe ser >= {MIN_NODES} (recibido {n})")
    if box_side <= 0 or radius <= 0:
        raise InvalidParameterError(f"rgg: box_side y radius deben ser > 0 ({box_side}, {radius})")
    if max_attempts < 1:
        raise InvalidParameterError(f"rgg: max_attempts debe ser >= 1 ({max_attempts})")

    # Último 10 % de intentos (al menos el último): aviso en vez de debug.
    warn_from = max_attempts - max(1, max_attempts // 10) + 1
    for attempt in range(1, max_attempts + 1):
        positions = rng.uniform(0.0, box_side, size=(n, 2))
        edges = rgg_edges_from_positions(positions, radius)
        g = Graph.from_edges(n, edges, positions.tolist(), require_connected=False)
        if g.num_edges and g.is_connected():
            if attempt > 1:
                logger.debug("rgg: conexo al intento %d/%d", attempt, max_attempts)
            return g
        level = logging.WARNING if attempt >= warn_from else logging.DEBUG
        logger.log(level, "rgg: intento %d/%d no conexo (%d aristas)", attempt, max_attempts, g.num_edges)

    raise DisconnectedTopologyError(
        f"rgg: sin grafo conexo tras {max_attempts} intentos "
        f"(n={n}, box={box_side}, radius={radius})",
        attempts=max_attempts,
    )


def build(spec, rng: np.random.Generator) -> Graph:
    return build_rgg(spec.n, spec.box_side, spec.radius, rng, spec.max_attempts)
