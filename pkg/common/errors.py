# -*- coding: utf-8 -*-
"""
Jerarquía de errores del simulador.

Todas las excepciones heredan de GossipError y, además, del builtin que
corresponda (ValueError / RuntimeError), para que quien las capture pueda
hacerlo de forma genérica.

Los scripts de scripts/ traducen estas excepciones a códigos de salida:
    UsageError             -> 1
    cualquier GossipError  -> 2
"""

from __future__ import annotations

from typing import Optional


class GossipError(Exception):
    """Raíz de todos los errores propios del proyecto."""


class InvalidSizeError(GossipError, ValueError):
    """Número de nodos fuera del rango admitido por el generador."""


class DisconnectedTopologyError(GossipError, RuntimeError):
    """El grafo no es conexo (o no se consiguió uno conexo tras N intentos)."""

    def __init__(self, message: str, attempts: int = 0):
        super().__init__(message)
        self.attempts = attempts


class InvalidEdgeError(GossipError, ValueError):
    """Arista con índices fuera de rango o con i == j."""


class MissingToleranceError(GossipError, ValueError):
    """Modo real sin tolerancia de consenso."""


class ValueRangeError(GossipError, ValueError):
    """Valores iniciales fuera del rango [m, M] del cuantizador."""


class InvalidParameterError(GossipError, ValueError):
    """Parámetro numérico fuera de su dominio (tau, ventana, n, latencia...)."""


class DegenerateInputError(GossipError, ValueError):
    """Entrada degenerada (p.ej. ||t(0)||_2 = 0)."""


class InsufficientDataError(GossipError, ValueError):
    """La traza es más corta de lo que exige el cálculo."""


class ConfigMismatchError(GossipError, ValueError):
    """Dos informes no son comparables (configuraciones distintas)."""


class UsageError(GossipError, ValueError):
    """Error de uso de la CLI o del fichero de configuración; nombra la clave culpable."""

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(f"{key}: {message}" if key else message)
        self.key = key


EXIT_OK = 0
EXIT_USAGE = 1
EXIT_RUNTIME = 2
EXIT_NO_CONSENSUS = 3


def exit_code_for(exc: BaseException) -> int:
    """Código de salida de la CLI para una excepción."""
    if isinstance(exc, UsageError):
        return EXIT_USAGE
    return EXIT_RUNTIME
