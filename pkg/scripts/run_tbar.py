#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Estima T̄(G) (peor caso sobre inicializaciones del tiempo esperado hasta el primer
paso que cambia valores) y la cota de convergencia esperada (M-m)^2·n·T̄/8.

Uso:
    python scripts/run_tbar.py --topology ring --nodes 10 --bits 4 --n-inits 20 --repetitions 100 --seed 7

La salida es JSON por stdout (claves ordenadas).
"""

import os
import sys

script_dir = os.path.dirname(os.path.abspath(__file__))
repo_root = os.path.dirname(script_dir)
if repo_root not in sys.path:
    sys.path.insert(0, repo_root)

from common.config import build_parser, config_from_namespace, log_level_from
from common.errors import EXIT_OK, EXIT_RUNTIME, UsageError, exit_code_for
from common.export import dumps_json
from common.logger import get_logger, setup_logging
from common.utils import make_rng
from gossip.analysis import DEFAULT_TBAR_REPETITIONS, convergence_bound, estimate_tbar
from topologies import load_topology

logger = get_logger(__name__)


def main(argv=None) -> int:
    setup_logging()
    try:
        ap = build_parser("Estimación de T̄(G) y cota de convergencia esperada")
        ap.add_argument("--n-inits", type=int, default=10, help="inicializaciones aleatorias (def. 10)")
        ap.add_argument("--repetitions", type=int, default=DEFAULT_TBAR_REPETITIONS,
                        help=f"repeticiones por inicialización (def. {DEFAULT_TBAR_REPETITIONS})")
        ns = ap.parse_args(argv)
        setup_logging(log_level_from(ns))
        cfg = config_from_namespace(ns)
        if not cfg.quantized:
            raise UsageError("T̄(G) se define sobre el cuantizador", key="mode")

        rng = make_rng(cfg.seed)
        graph = load_topology(cfg.topology).build(cfg.topology_spec, rng)
        q = cfg.quantizer()
        tbar = estimate_tbar(graph, q, ns.n_inits, rng, repetitions=ns.repetitions, swap_enabled=cfg.swap_enabled)
        # rango en pasos de cuantización: niveles 0 .. 2^bits - 1
        bound = convergence_bound(graph.n, 0, q.max_level, tbar)
    except Exception as exc:
        code = exit_code_for(exc)
        if code == EXIT_RUNTIME:
            logger.exception("Fallo en la estimación: %s", exc)
        else:
            logger.error("%s", exc)
        return code

    sys.stdout.write(dumps_json({
        "topology": cfg.topology,
        "n": graph.n,
        "edges": graph.num_edges,
        "bits": cfg.bits,
        "seed": cfg.seed,
        "tbar": tbar.value,
        "tbar_stderr": tbar.stderr,
        "n_samples": tbar.n_samples,
        "convergence_bound": bound,
    }))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
