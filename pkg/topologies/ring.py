# topologies/ring.py
# -*- coding: utf-8 -*-
"""
Anillo C_n: aristas {i, (i+1) mod n}. Exactamente n aristas, grado 2 en todos.
Con n = 2 el anillo duplicaría la arista {0,1}, así que el mínimo es 3.
"""

from __future__ import annotations

import networkx as nx

from common.errors import InvalidSizeError
from common.graph import Graph

MIN_NODES = 3


def build_ring(n: int) -> Graph:
    if n < MIN_NODES:
        raise InvalidSizeError(f"ring: n debe ser >= {MIN_NODES} (recibido {n})")
    return Graph.from_edges(n, nx.cycle_graph(n).edges())


def build(spec, rng=None) -> Graph:
    return build_ring(spec.n)
