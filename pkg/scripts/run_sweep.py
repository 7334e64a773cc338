#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Barrido por número de nodos: un lote de trials por cada n y sweep.csv con
n_nodes,topology,mean_iters,median_iters,p05,p95,non_converged.

Uso:
    python scripts/run_sweep.py --topology complete --node-counts 10,20,30,40,50 --trials 100 --out out/sweep

Exit codes: 0 OK, 1 uso, 2 ejecución, 3 ninguna entrada alcanzó el consenso.
"""

import os
import sys

script_dir = os.path.dirname(os.path.abspath(__file__))
repo_root = os.path.dirname(script_dir)
if repo_root not in sys.path:
    sys.path.insert(0, repo_root)

from common.config import build_parser, config_from_namespace, log_level_from
from common.errors import EXIT_NO_CONSENSUS, EXIT_OK, EXIT_RUNTIME, UsageError, exit_code_for
from common.logger import get_logger, setup_logging
from gossip.harness import linear_fit_r2, run_sweep

logger = get_logger(__name__)


def parse_node_counts(raw: str) -> list[int]:
    try:
        counts = [int(tok) for tok in raw.replace(" ", "").split(",") if tok]
    except ValueError:
        raise UsageError(f"lista de enteros inválida {raw!r}", key="node_counts") from None
    if not counts:
        raise UsageError("lista vacía", key="node_counts")
    return counts


def main(argv=None) -> int:
    setup_logging()
    try:
        ap = build_parser("Barrido de convergencia por número de nodos")
        ap.add_argument("--node-counts", required=True, help="lista separada por comas, p.ej. 10,20,30")
        ns = ap.parse_args(argv)
        setup_logging(log_level_from(ns))
        counts = parse_node_counts(ns.node_counts)
        # n del barrido manda sobre --nodes; se valida con el primero
        ns.nodes = counts[0]
        cfg = config_from_namespace(ns)
        for n in counts:
            cfg.with_nodes(n, cfg.seed)
        rows, text = run_sweep(cfg, counts)
    except Exception as exc:
        code = exit_code_for(exc)
        if code == EXIT_RUNTIME:
            logger.exception("Fallo en el barrido: %s", exc)
        else:
            logger.error("%s", exc)
        return code

    sys.stdout.write(text)
    medians = [(r.n_nodes, r.stats.median) for r in rows if r.stats.median is not None]
    if not medians:
        return EXIT_NO_CONSENSUS
    if len({n for n, _ in medians}) >= 2:
        slope, intercept, r2 = linear_fit_r2([n for n, _ in medians], [m for _, m in medians])
        print(f"# ajuste lineal mediana~n: pendiente={slope:.4g} ordenada={intercept:.4g} R2={r2:.4f}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
