# topologies/complete.py
# -*- coding: utf-8 -*-
"""
Grafo completo K_n: todas las n(n-1)/2 aristas. Conexo por construcción.
"""

from __future__ import annotations

import networkx as nx

from common.errors import InvalidSizeError
from common.graph import Graph

MIN_NODES = 2


def build_complete(n: int) -> Graph:
    if n < MIN_NODES:
        raise InvalidSizeError(f"complete: n debe ser >= {MIN_NODES} (recibido {n})")
    return Graph.from_edges(n, nx.complete_graph(n).edges())


def build(spec, rng=None) -> Graph:
    # No consume aleatoriedad.
    return build_complete(spec.n)
