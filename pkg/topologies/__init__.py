# topologies/__init__.py
# -*- coding: utf-8 -*-
"""
Generadores de topología, un módulo por tipo (complete, ring, rgg).

Cada módulo expone:
    build(spec, rng) -> Graph     # interfaz común usada por el harness
    build_<nombre>(...)           # constructor con parámetros explícitos

Se resuelven por nombre con importlib, igual que se añade un tipo nuevo:
crear topologies/<nombre>.py con build() y añadirlo a AVAILABLE.
"""

from __future__ import annotations

import importlib
from types import ModuleType

AVAILABLE = ("complete", "ring", "rgg")


def load_topology(name: str) -> ModuleType:
    """Importa topologies.<name>; ValueError si no existe o no expone build()."""
    slug = (name or "").strip().lower()
    if slug not in AVAILABLE:
        raise ValueError(f"topología desconocida: {name!r} (disponibles: {', '.join(AVAILABLE)})")
    mod = importlib.import_module(f"topologies.{slug}")
    if not callable(getattr(mod, "build", None)):
        raise ValueError(f"topologies.{slug} no expone build()")
    return mod
