#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Comparación real vs. cuantizado con la misma semilla: ejecuta ambos modos con la
misma configuración y escribe compare.csv (iteration,mse_real,mse_quantized) del trial 0.

Uso:
    python scripts/run_compare.py --topology complete --nodes 10 --seed 3 --max-iters 2000 --run-to-cap --out out/cmp

El resto de flags se aplica a los dos modos; --mode se ignora.
"""

import os
import sys
from dataclasses import replace

script_dir = os.path.dirname(os.path.abspath(__file__))
repo_root = os.path.dirname(script_dir)
if repo_root not in sys.path:
    sys.path.insert(0, repo_root)

from common.config import build_parser, config_from_namespace, log_level_from
from common.errors import EXIT_OK, EXIT_RUNTIME, exit_code_for
from common.logger import get_logger, setup_logging
from gossip.harness import COMPARE_FILE, emit_compare, run_experiment

logger = get_logger(__name__)


def main(argv=None) -> int:
    setup_logging()
    try:
        ap = build_parser("Comparación de MSE: gossip real vs. cuantizado")
        ns = ap.parse_args(argv)
        setup_logging(log_level_from(ns))
        base = config_from_namespace(ns)
        real_cfg = replace(base, mode="real", out_dir=os.path.join(base.out_dir, "real")).validate()
        quant_cfg = replace(base, mode="quantized", tol=None, out_dir=os.path.join(base.out_dir, "quantized")).validate()

        real_report = run_experiment(real_cfg)
        quant_report = run_experiment(quant_cfg)
        out_path = os.path.join(base.out_dir, COMPARE_FILE)
        emit_compare(real_report, quant_report, out_path)
    except Exception as exc:
        code = exit_code_for(exc)
        if code == EXIT_RUNTIME:
            logger.exception("Fallo en la comparación: %s", exc)
        else:
            logger.error("%s", exc)
        return code

    print(f"comparación: {out_path}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
