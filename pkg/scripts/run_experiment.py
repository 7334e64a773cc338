#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Ejecuta un lote de trials de gossip por pares y escribe trazas + informe.

Uso:
    python scripts/run_experiment.py --topology complete --nodes 10 --trials 50 --seed 1 --out out/complete10
    python scripts/run_experiment.py --config experimento.env --mode real

Exit codes:
    0 = OK
    1 = error de uso (flag/config inválida)
    2 = error de ejecución
    3 = ningún trial alcanzó el consenso
"""

import os
import sys

# Fix sys.path para encontrar 'common', 'gossip' y 'topologies' desde cualquier ubicación
script_dir = os.path.dirname(os.path.abspath(__file__))
repo_root = os.path.dirname(script_dir)
if repo_root not in sys.path:
    sys.path.insert(0, repo_root)

from common.config import build_parser, config_from_namespace, log_level_from
from common.errors import EXIT_NO_CONSENSUS, EXIT_OK, EXIT_RUNTIME, exit_code_for
from common.logger import get_logger, setup_logging
from gossip.harness import run_experiment

logger = get_logger(__name__)


def main(argv=None) -> int:
    setup_logging()
    try:
        ap = build_parser("Lote de trials de gossip cuantizado por pares")
        ns = ap.parse_args(argv)
        setup_logging(log_level_from(ns))
        cfg = config_from_namespace(ns)
        logger.info("Config: %s", cfg.echo())
        report = run_experiment(cfg)
    except Exception as exc:
        code = exit_code_for(exc)
        if code == EXIT_RUNTIME:
            logger.exception("Fallo en la ejecución: %s", exc)
        else:
            logger.error("%s", exc)
        return code

    s = report.stats
    print(f"trials={s.n_trials} sin_consenso={s.non_converged} mediana={s.median} p95={s.p95}")
    print(f"informe: {os.path.join(cfg.out_dir, 'report.json')}")
    if all(t.error for t in report.trials):
        logger.error("Todos los trials fallaron (ver report.json)")
        return EXIT_RUNTIME
    if not report.any_converged:
        logger.warning("Ningún trial alcanzó el consenso en %d iteraciones", cfg.max_iterations)
        return EXIT_NO_CONSENSUS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
