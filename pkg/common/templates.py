# common/templates.py
# -*- coding: utf-8 -*-
"""
Render del resumen de experimento con Jinja2 (templates/*.txt).

El resumen es texto plano para humanos; los datos de verdad están en
report.json / stats.json. Sin marcas de tiempo: mismo config -> mismo fichero.
"""

from __future__ import annotations

import os
from typing import Any, Dict

from jinja2 import Environment, FileSystemLoader, StrictUndefined, select_autoescape

TEMPLATES_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "templates")
SUMMARY_TEMPLATE = "experiment_summary.txt"


def _num(value: Any, digits: int = 6) -> str:
    if value is None:
        return "N/D"
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    return str(value)


def make_env(templates_dir: str = TEMPLATES_DIR) -> Environment:
    env = Environment(
        loader=FileSystemLoader(templates_dir),
        autoescape=select_autoescape(["html"]),
        undefined=StrictUndefined,
        keep_trailing_newline=True,
        trim_blocks=True,
        lstrip_blocks=True,
    )
    env.filters["num"] = _num
    return env


def render_summary(ctx: Dict[str, Any], template: str = SUMMARY_TEMPLATE, templates_dir: str = TEMPLATES_DIR) -> str:
    return make_env(templates_dir).get_template(template).render(**ctx)
