#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Valida un report.json de run_experiment antes de usar sus datos para gráficas.

Uso:
    python scripts/validate_report.py --report out/complete10/report.json

Exit codes:
    0 = Válido
    1 = Inválido (faltan campos, nº de trials distinto de config.trials o ficheros ausentes)
"""

import argparse
import json
import os
import sys

script_dir = os.path.dirname(os.path.abspath(__file__))
repo_root = os.path.dirname(script_dir)
if repo_root not in sys.path:
    sys.path.insert(0, repo_root)

from common.export import missing_files

REQUIRED_KEYS = ("config", "trials", "consensus_iterations", "stats", "files")
STATS_KEYS = ("n_trials", "consensus_iterations", "mean", "median", "p05", "p95", "non_converged")


def validate_report(path: str) -> tuple[bool, str]:
    """Comprueba la estructura del informe y que existan sus ficheros. Retorna (válido, mensaje)."""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except FileNotFoundError:
        return False, f"❌ {path} no existe"
    except json.JSONDecodeError:
        return False, f"❌ {path} no es JSON válido"

    if not isinstance(data, dict):
        return False, "❌ el informe no es un diccionario"

    missing = [k for k in REQUIRED_KEYS if k not in data]
    if missing:
        return False, f"❌ Campos faltantes: {', '.join(missing)}"

    missing_stats = [k for k in STATS_KEYS if k not in data["stats"]]
    if missing_stats:
        return False, f"❌ Campos faltantes en stats: {', '.join(missing_stats)}"

    expected = data["config"].get("trials")
    got = len(data["trials"])
    if expected != got:
        return False, f"❌ {got} trials en el informe, config.trials={expected}"
    if data["stats"]["n_trials"] != got:
        return False, f"❌ stats.n_trials={data['stats']['n_trials']} no coincide con {got} trials"

    absent = missing_files(os.path.dirname(os.path.abspath(path)), data["files"])
    if absent:
        return False, f"❌ Ficheros referenciados que no existen: {', '.join(absent)}"

    warnings = []
    failed = [t["trial_index"] for t in data["trials"] if t.get("error")]
    if failed:
        warnings.append(f"⚠️  ADVERTENCIA: {len(failed)} trials con error: {failed}")
    non_conv = data["stats"]["non_converged"]
    if non_conv:
        warnings.append(f"⚠️  ADVERTENCIA: {non_conv} de {got} trials sin consenso")

    msg = f"✅ Informe válido ({got} trials, {len(data['files'])} ficheros)"
    if warnings:
        msg = msg + "\n" + "\n".join(warnings)
    return True, msg


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description="Valida un report.json de experimento")
    ap.add_argument("--report", required=True, help="Ruta a report.json")
    args = ap.parse_args(argv)

    valid, msg = validate_report(args.report)
    print(msg)
    return 0 if valid else 1


if __name__ == "__main__":
    sys.exit(main())
