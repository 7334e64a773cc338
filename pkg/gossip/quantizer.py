# gossip/quantizer.py
# -*- coding: utf-8 -*-
"""
Cuantizador uniforme mid-tread sobre [m, M] con 2^bits niveles.

    Δ = (M - m) / (2^bits - 1)
    niveles: m + kΔ, k = 0 .. 2^bits - 1

- Entradas fuera de [m, M] se saturan a m o M.
- Empates (x justo a mitad entre dos niveles) redondean hacia arriba (hacia M).
- Idempotente: Q(Q(x)) = Q(x); |Q(x) - x| <= Δ/2 dentro del rango.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from common.errors import InvalidParameterError

DEFAULT_BITS = 16


@dataclass(frozen=True)
class Quantizer:
    bits: int = DEFAULT_BITS
    range_min: float = 0.0
    range_max: float = 1.0
    step: float = field(init=False)

    def __post_init__(self):
        if self.bits < 1:
            raise InvalidParameterError(f"bits debe ser >= 1 (recibido {self.bits})")
        if not self.range_max > self.range_min:
            raise InvalidParameterError(
                f"rango vacío: M={self.range_max} debe ser > m={self.range_min}"
            )
        object.__setattr__(self, "step", (self.range_max - self.range_min) / (2 ** self.bits - 1))

    @property
    def max_level(self) -> int:
        return 2 ** self.bits - 1

    def level(self, x: float) -> int:
        """Índice k del nivel más cercano (saturado a [0, 2^bits - 1])."""
        k = math.floor((x - self.range_min) / self.step + 0.5)
        if k < 0:
            return 0
        if k > self.max_level:
            return self.max_level
        return k

    def value_of(self, k: int) -> float:
        # Los extremos se devuelven exactos para que Q(m) = m y Q(M) = M.
        if k <= 0:
            return self.range_min
        if k >= self.max_level:
            return self.range_max
        return self.range_min + k * self.step

    def __call__(self, x: float) -> float:
        return self.value_of(self.level(x))

    def contains(self, x: float) -> bool:
        return self.range_min <= x <= self.range_max


def quantize(q: Quantizer, x: float) -> float:
    """Nivel m + kΔ más cercano a x (ver Quantizer)."""
    return q(x)
