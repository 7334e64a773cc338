# common/graph.py
# -*- coding: utf-8 -*-
"""
Tipos de grafo compartidos por topologies/ y gossip/.

- Graph: grafo no dirigido, sin lazos ni aristas duplicadas, conexo.
  Inmutable; se puede compartir entre trials concurrentes.
- EdgeDistribution: probabilidad de seleccionar cada arista en una iteración
  (simétrica por construcción, soporte = aristas del grafo).

Índices de nodo 0..n-1 (el etiquetado 1..N es solo notación).
Formato JSON: {"n": int, "edges": [[i, j], ...], "positions": [[x, y], ...] | null}
con i < j y aristas ordenadas lexicográficamente.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from common.errors import DisconnectedTopologyError, InvalidEdgeError, InvalidSizeError

Edge = Tuple[int, int]


def normalize_edge(i: int, j: int) -> Edge:
    """Par no ordenado {i, j} como tupla (min, max)."""
    i, j = int(i), int(j)
    return (i, j) if i < j else (j, i)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: Tuple[Edge, ...]
    positions: Optional[Tuple[Tuple[float, float], ...]] = None

    # ---------------- Construcción validada ----------------

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[Sequence[int]],
        positions: Optional[Iterable[Sequence[float]]] = None,
        require_connected: bool = True,
    ) -> "Graph":
        """
        Normaliza (i < j, orden lexicográfico) y valida las invariantes.
        Duplicados y lazos se rechazan, no se corrigen en silencio.
        """
        if n < 1:
            raise InvalidSizeError(f"n debe ser >= 1 (recibido {n})")
        seen = set()
        for e in edges:
            i, j = int(e[0]), int(e[1])
            if i == j:
                raise InvalidEdgeError(f"lazo en el nodo {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidEdgeError(f"arista ({i}, {j}) fuera de [0, {n})")
            key = normalize_edge(i, j)
            if key in seen:
                raise InvalidEdgeError(f"arista duplicada {key}")
            seen.add(key)
        pos = None
        if positions is not None:
            pos = tuple((float(p[0]), float(p[1])) for p in positions)
            if len(pos) != n:
                raise InvalidSizeError(f"{len(pos)} posiciones para {n} nodos")
        g = cls(n=n, edges=tuple(sorted(seen)), positions=pos)
        if require_connected and not g.is_connected():
            raise DisconnectedTopologyError(f"grafo de {n} nodos no conexo")
        return g

    # ---------------- Consultas ----------------

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        G.add_nodes_from(range(self.n))
        G.add_edges_from(self.edges)
        return G

    def is_connected(self) -> bool:
        if self.n == 1:
            return True
        return nx.is_connected(self.to_networkx())

    def degrees(self) -> List[int]:
        deg = [0] * self.n
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    # ---------------- Serialización ----------------

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "edges": [[i, j] for i, j in self.edges],
            "positions": None if self.positions is None else [[x, y] for x, y in self.positions],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        data = json.loads(text)
        return cls.from_edges(data["n"], data["edges"], data.get("positions"))


@dataclass(frozen=True)
class EdgeDistribution:
    edges: Tuple[Edge, ...]
    probabilities: Tuple[float, ...]

    def __post_init__(self):
        if len(self.edges) != len(self.probabilities) or not self.edges:
            raise InvalidEdgeError("distribución vacía o desalineada")
        if any(p <= 0 for p in self.probabilities):
            raise InvalidEdgeError("toda probabilidad debe ser > 0")
        total = math.fsum(self.probabilities)
        if abs(total - 1.0) > 1e-12:
            raise InvalidEdgeError(f"las probabilidades suman {total!r}, no 1")

    def as_dict(self) -> Dict[Edge, float]:
        return dict(zip(self.edges, self.probabilities))

    def probability(self, i: int, j: int) -> float:
        """P_(i,j) = P_(j,i); 0 fuera del conjunto de aristas."""
        return self.as_dict().get(normalize_edge(i, j), 0.0)

    @property
    def is_uniform(self) -> bool:
        return max(self.probabilities) == min(self.probabilities)


def uniform_edge_distribution(g: Graph) -> EdgeDistribution:
    """P = 1/|E| en cada arista del grafo."""
    if not g.edges:
        raise InvalidEdgeError("grafo sin aristas")
    p = 1.0 / len(g.edges)
    return EdgeDistribution(edges=g.edges, probabilities=tuple(p for _ in g.edges))


def sample_edges(d: EdgeDistribution, rng: np.random.Generator, size: int) -> np.ndarray:
    """
    Muestra `size` aristas de una vez. Devuelve un array (size, 2) de índices.
    Distribución uniforme: un solo rng.integers (rápido); si no, rng.choice con p.
    """
    edges = np.asarray(d.edges, dtype=np.int64)
    if d.is_uniform:
        idx = rng.integers(0, len(d.edges), size=size)
    else:
        idx = rng.choice(len(d.edges), size=size, p=np.asarray(d.probabilities))
    return edges[idx]


def sample_edge(d: EdgeDistribution, rng: np.random.Generator) -> Edge:
    """Una arista del soporte de d; determinista dado el estado del rng."""
    i, j = sample_edges(d, rng, 1)[0]
    return int(i), int(j)
