# common/logger.py
# -*- coding: utf-8 -*-
"""
Factoría de loggers para todo el simulador.

Uso:
    from common.logger import get_logger
    logger = get_logger(__name__)

    logger.info("Trial %d: consenso en %d iteraciones", k, it)
    logger.exception("Trial falló")  # incluye el traceback

Solo los scripts de entrada (scripts/run_*.py) llaman a setup_logging();
los módulos de common/, topologies/ y gossip/ se limitan a get_logger().

Nivel: argumento explícito (--verbose / --quiet) > GOSSIP_LOG_LEVEL > LOG_LEVEL > INFO.
En CI (CI=true) el formato lleva hora para correlacionar con el job.

Los logs van SIEMPRE a stderr: los ficheros de resultados (trazas, informes)
tienen que ser idénticos byte a byte entre ejecuciones.
"""

from __future__ import annotations

import logging
import os
import sys
from typing import Optional

from common.utils import is_truthy_env

_configured = False


def _resolve_level(level: Optional[str], default_level: str) -> int:
    name = (
        level
        or os.getenv("GOSSIP_LOG_LEVEL")
        or os.getenv("LOG_LEVEL")
        or default_level
    ).upper()
    return getattr(logging, name, logging.INFO)


def setup_logging(level: Optional[str] = None, default_level: str = "INFO") -> None:
    """
    Configura el logger raíz una sola vez.
    Una segunda llamada solo puede cambiar el nivel (p.ej. --verbose tras leer config).
    """
    global _configured
    resolved = _resolve_level(level, default_level)
    if _configured:
        logging.getLogger().setLevel(resolved)
        return
    _configured = True

    is_ci = is_truthy_env("CI")
    fmt = (
        "%(asctime)s [%(levelname)-8s] %(name)s: %(message)s"
        if is_ci
        else "[%(levelname)-8s] %(name)s: %(message)s"
    )
    logging.basicConfig(
        level=resolved, format=fmt, datefmt="%H:%M:%S", stream=sys.stderr, force=True
    )


def get_logger(name: str) -> logging.Logger:
    """Devuelve un logger con nombre. Usar __name__ como convención."""
    return logging.getLogger(name)
