"""
config.py - Configuración centralizada de los experimentos.

Orden de resolución (de menor a mayor prioridad):
    valores por defecto < variables de entorno GOSSIP_* < fichero --config < flags de la CLI

El fichero de configuración es un documento plano clave=valor (UTF-8), el mismo
formato que un .env; las claves son los flags largos con '-' o '_'
(max-iters == max_iters). Una clave desconocida es un error de uso.
"""

from __future__ import annotations

import argparse
import json
import os
from dataclasses import asdict, dataclass, replace
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
from dotenv import dotenv_values

from common.errors import UsageError
from common.logger import get_logger

logger = get_logger(__name__)

TOPOLOGIES = ("complete", "ring", "rgg")
MODES = ("quantized", "real")
FORMATS = ("csv", "json")
MIN_NODES = {"complete": 2, "ring": 3, "rgg": 2}


class RunSettings:
    """Valores por defecto tomados del entorno (GOSSIP_*)."""

    def __init__(self):
        self.out_dir = os.getenv("GOSSIP_OUT_DIR", "out")
        self.format = os.getenv("GOSSIP_FORMAT", "csv").strip().lower()
        self.seed = _env_int("GOSSIP_SEED", 0)
        self.max_iterations = _env_int("GOSSIP_MAX_ITERS", 100_000)
        self.bits = _env_int("GOSSIP_BITS", 16)

    def __repr__(self) -> str:
        return (
            f"RunSettings(out_dir='{self.out_dir}', format='{self.format}', seed={self.seed}, "
            f"max_iterations={self.max_iterations}, bits={self.bits})"
        )


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"entero inválido {raw!r}", key=name) from None


# Instancia global (lazy load)
_settings: Optional[RunSettings] = None


def get_settings() -> RunSettings:
    """Obtener instancia global de settings (singleton)"""
    global _settings
    if _settings is None:
        _settings = RunSettings()
    return _settings


def reset_settings() -> None:
    """Olvida la instancia global (tests que cambian el entorno)."""
    global _settings
    _settings = None


# ---------------- Configuración de experimento ----------------

@dataclass(frozen=True)
class TopologySpec:
    name: str
    n: int
    box_side: float = 1.0
    radius: float = 0.8
    max_attempts: int = 100


@dataclass(frozen=True)
class SimulationConfig:
    topology: str = "complete"
    n: int = 10
    box_side: float = 1.0
    radius: float = 0.8
    max_attempts: int = 100
    mode: str = "quantized"
    bits: int = 16
    range_min: float = 0.0
    range_max: float = 1.0
    tol: Optional[float] = None
    swap_enabled: bool = True
    init: str = "uniform"
    init_values: Optional[Tuple[float, ...]] = None
    seed: int = 0
    max_iterations: int = 100_000
    record_every: int = 1
    full_state: bool = False
    stop_at_consensus: bool = True
    trials: int = 1
    tau: float = 0.01
    plateau_window: int = 20
    plateau_tol: float = 0.05
    step_latency_ms: Optional[float] = None
    out_dir: str = "out"
    format: str = "csv"

    @property
    def topology_spec(self) -> TopologySpec:
        return TopologySpec(self.topology, self.n, self.box_side, self.radius, self.max_attempts)

    @property
    def quantized(self) -> bool:
        return self.mode == "quantized"

    def quantizer(self):
        """Quantizer del experimento, o None en modo real."""
        from gossip.quantizer import Quantizer

        if not self.quantized:
            return None
        return Quantizer(bits=self.bits, range_min=self.range_min, range_max=self.range_max)

    def effective_tol(self) -> Optional[float]:
        """Tolerancia del modo real: --tol, o el Δ del cuantizador configurado."""
        if self.quantized:
            return None
        if self.tol is not None:
            return self.tol
        return (self.range_max - self.range_min) / (2 ** self.bits - 1)

    def validate(self) -> "SimulationConfig":
        if self.topology not in TOPOLOGIES:
            raise UsageError(f"topología desconocida {self.topology!r}", key="topology")
        if self.n < 2:
            raise UsageError(f"n debe ser >= 2 (recibido {self.n})", key="nodes")
        if self.n < MIN_NODES[self.topology]:
            raise UsageError(
                f"{self.topology} necesita n >= {MIN_NODES[self.topology]} (recibido {self.n})", key="nodes"
            )
        if self.box_side <= 0:
            raise UsageError(f"debe ser > 0 (recibido {self.box_side})", key="box")
        if self.radius <= 0:
            raise UsageError(f"debe ser > 0 (recibido {self.radius})", key="radius")
        if self.max_attempts < 1:
            raise UsageError(f"debe ser >= 1 (recibido {self.max_attempts})", key="max_attempts")
        if self.mode not in MODES:
            raise UsageError(f"modo desconocido {self.mode!r}", key="mode")
        if self.bits < 1:
            raise UsageError(f"debe ser >= 1 (recibido {self.bits})", key="bits")
        if not self.range_max > self.range_min:
            raise UsageError(
                f"range_max ({self.range_max}) debe ser > range_min ({self.range_min})", key="range_max"
            )
        if self.tol is not None and self.tol <= 0:
            raise UsageError(f"debe ser > 0 (recibido {self.tol})", key="tol")
        if self.max_iterations < 1:
            raise UsageError(f"debe ser >= 1 (recibido {self.max_iterations})", key="max_iters")
        if self.trials < 1:
            raise UsageError(f"debe ser >= 1 (recibido {self.trials})", key="trials")
        if self.record_every < 1:
            raise UsageError(f"debe ser >= 1 (recibido {self.record_every})", key="record_every")
        if not 0 < self.tau < 1:
            raise UsageError(f"debe estar en (0, 1) (recibido {self.tau})", key="tau")
        if self.plateau_window < 2:
            raise UsageError(f"debe ser >= 2 (recibido {self.plateau_window})", key="plateau_window")
        if self.plateau_tol < 0:
            raise UsageError(f"debe ser >= 0 (recibido {self.plateau_tol})", key="plateau_tol")
        if self.step_latency_ms is not None and self.step_latency_ms <= 0:
            raise UsageError(f"debe ser > 0 (recibido {self.step_latency_ms})", key="step_latency_ms")
        if self.format not in FORMATS:
            raise UsageError(f"formato desconocido {self.format!r}", key="format")
        if self.init_values is not None:
            if len(self.init_values) != self.n:
                raise UsageError(
                    f"{len(self.init_values)} valores iniciales para {self.n} nodos", key="init"
                )
            if self.quantized:
                out = [v for v in self.init_values if not self.range_min <= v <= self.range_max]
                if out:
                    raise UsageError(
                        f"{len(out)} valores fuera de [{self.range_min}, {self.range_max}]", key="init"
                    )
        return self

    def with_nodes(self, n: int, seed: int) -> "SimulationConfig":
        """Copia para un punto del barrido por n."""
        return replace(self, n=n, seed=seed).validate()

    def echo(self) -> Dict[str, Any]:
        """Configuración para el informe (sin rutas de salida: el informe no depende de --out)."""
        data = asdict(self)
        data.pop("out_dir", None)
        if data["init_values"] is not None:
            data["init_values"] = list(data["init_values"])
        return data


# ---------------- Fichero de configuración ----------------

def load_init_values(path: str) -> Tuple[float, ...]:
    """Vector inicial desde fichero: array JSON o números separados por espacios/comas/líneas."""
    p = Path(path)
    if not p.exists():
        raise UsageError(f"fichero no encontrado: {path}", key="init")
    text = p.read_text(encoding="utf-8")
    try:
        if text.lstrip().startswith("["):
            values = json.loads(text)
        else:
            values = np.array(text.replace(",", " ").split(), dtype=float).tolist()
        return tuple(float(v) for v in values)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"no se pudo leer {path}: {exc}", key="init") from None


def load_config_file(path: str) -> Dict[str, str]:
    """Lee un fichero clave=valor; claves normalizadas a snake_case."""
    if not Path(path).exists():
        raise UsageError(f"fichero no encontrado: {path}", key="config")
    raw = dotenv_values(path, encoding="utf-8")
    out: Dict[str, str] = {}
    for key, value in raw.items():
        norm = key.strip().lower().replace("-", "_")
        if norm not in _KEY_TO_FIELD:
            raise UsageError("clave desconocida en el fichero de configuración", key=key)
        if value is None:
            raise UsageError("clave sin valor", key=key)
        out[norm] = value
    return out


# ---------------- CLI ----------------

class _Parser(argparse.ArgumentParser):
    """argparse que lanza UsageError (código 1) en vez de salir con 2."""

    def error(self, message: str):
        raise UsageError(message)


def _truthy(value: str) -> bool:
    v = str(value).strip().lower()
    if v in ("1", "true", "yes", "y", "on"):
        return True
    if v in ("0", "false", "no", "n", "off"):
        return False
    raise ValueError(f"booleano inválido {value!r}")


# clave (flag/fichero) -> (campo de SimulationConfig, conversor)
_KEY_TO_FIELD = {
    "topology": ("topology", str),
    "nodes": ("n", int),
    "box": ("box_side", float),
    "radius": ("radius", float),
    "max_attempts": ("max_attempts", int),
    "bits": ("bits", int),
    "range_min": ("range_min", float),
    "range_max": ("range_max", float),
    "mode": ("mode", str),
    "tol": ("tol", float),
    "swap": ("swap_enabled", _truthy),
    "init": ("init", str),
    "seed": ("seed", int),
    "max_iters": ("max_iterations", int),
    "trials": ("trials", int),
    "record_every": ("record_every", int),
    "full_state": ("full_state", _truthy),
    "run_to_cap": ("stop_at_consensus", lambda v: not _truthy(v)),
    "tau": ("tau", float),
    "plateau_window": ("plateau_window", int),
    "plateau_tol": ("plateau_tol", float),
    "step_latency_ms": ("step_latency_ms", float),
    "out": ("out_dir", str),
    "format": ("format", lambda v: str(v).strip().lower()),
}


def build_parser(description: str = "Simulación de gossip cuantizado por pares") -> argparse.ArgumentParser:
    ap = _Parser(description=description, argument_default=argparse.SUPPRESS)
    ap.add_argument("--config", help="fichero clave=valor con la configuración (los flags mandan)")
    ap.add_argument("--topology", choices=TOPOLOGIES)
    ap.add_argument("--nodes", type=int, help="número de nodos n")
    ap.add_argument("--box", type=float, help="lado de la caja RGG en metros (def. 1.0)")
    ap.add_argument("--radius", type=float, help="radio de conexión RGG en metros (def. 0.8)")
    ap.add_argument("--max-attempts", type=int, help="remuestreos RGG hasta conexo (def. 100)")
    ap.add_argument("--bits", type=int, help="bits del cuantizador (def. 16)")
    ap.add_argument("--range-min", type=float, help="m, extremo inferior del rango")
    ap.add_argument("--range-max", type=float, help="M, extremo superior del rango")
    ap.add_argument("--mode", choices=MODES)
    ap.add_argument("--tol", type=float, help="tolerancia de consenso en modo real (def. Δ)")
    ap.add_argument("--swap", action=argparse.BooleanOptionalAction, help="regla de swap (def. activada)")
    ap.add_argument("--init", help="uniform | file:<ruta>")
    ap.add_argument("--seed", type=int)
    ap.add_argument("--max-iters", type=int)
    ap.add_argument("--trials", type=int)
    ap.add_argument("--record-every", type=int)
    ap.add_argument("--full-state", action="store_true", help="guardar todos los valores de nodo")
    ap.add_argument("--run-to-cap", action="store_true", help="no parar al alcanzar consenso")
    ap.add_argument("--tau", type=float, help="tau del tiempo de ε-promediado (def. 0.01)")
    ap.add_argument("--plateau-window", type=int)
    ap.add_argument("--plateau-tol", type=float)
    ap.add_argument("--step-latency-ms", type=float, help="latencia por iteración para la precisión de sync")
    ap.add_argument("--out", help="directorio de salida")
    ap.add_argument("--format", choices=FORMATS)
    ap.add_argument("-v", "--verbose", action="store_true", help="log DEBUG")
    ap.add_argument("-q", "--quiet", action="store_true", help="log WARNING")
    return ap


def _apply(values: Dict[str, Any], source: Dict[str, Any]) -> None:
    for key, raw in source.items():
        field_name, conv = _KEY_TO_FIELD[key]
        try:
            values[field_name] = conv(raw)
        except (TypeError, ValueError) as exc:
            raise UsageError(f"valor inválido {raw!r} ({exc})", key=key) from None


def config_from_namespace(ns: argparse.Namespace, file: Optional[str] = None) -> SimulationConfig:
    settings = get_settings()
    values: Dict[str, Any] = {
        "out_dir": settings.out_dir,
        "format": settings.format,
        "seed": settings.seed,
        "max_iterations": settings.max_iterations,
        "bits": settings.bits,
    }

    cfg_path = getattr(ns, "config", None) or file
    if cfg_path:
        _apply(values, load_config_file(cfg_path))

    flags = {
        k: v for k, v in vars(ns).items() if k in _KEY_TO_FIELD
    }
    # store_true sin valor por defecto: solo aparece si se pasó
    _apply(values, flags)

    init = str(values.get("init", "uniform"))
    if init.startswith("file:"):
        values["init_values"] = load_init_values(init[len("file:"):])
    elif init != "uniform":
        raise UsageError(f"se esperaba 'uniform' o 'file:<ruta>' (recibido {init!r})", key="init")

    return SimulationConfig(**values).validate()


def parse_cli(
    args: Optional[Sequence[str]] = None,
    file: Optional[str] = None,
    parser: Optional[argparse.ArgumentParser] = None,
) -> Tuple[SimulationConfig, argparse.Namespace]:
    """Como parse_config, devolviendo también el Namespace (flags de log, extras del script)."""
    ap = parser or build_parser()
    ns = ap.parse_args(list(args) if args is not None else None)
    return config_from_namespace(ns, file), ns


def parse_config(args: Optional[Sequence[str]] = None, file: Optional[str] = None) -> SimulationConfig:
    """Tokens de la CLI (+ fichero opcional) -> SimulationConfig validada."""
    cfg, _ = parse_cli(args, file)
    return cfg


def log_level_from(ns: argparse.Namespace) -> Optional[str]:
    if getattr(ns, "verbose", False):
        return "DEBUG"
    if getattr(ns, "quiet", False):
        return "WARNING"
    return None
