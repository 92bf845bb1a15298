"""Gamma function on (0, 2], self-contained.

A fixed-coefficient Lanczos approximation (g = 7, 9 terms).  Arguments
below 1/2 go through the reflection formula, whose companion argument
1 - x stays inside the accurate range.  Accuracy is better than 1e-12
relative on (0, 2]; a regression test pins sampled values.
"""

from __future__ import annotations

import math

from .errors import ConfigurationError

__all__ = ["gamma_pos", "GAMMA_LANCZOS_G", "GAMMA_LANCZOS_COEFFS"]

GAMMA_LANCZOS_G = 7.0

GAMMA_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def _lanczos(x: float) -> float:
    # valid for x >= 0.5
    z = x - 1.0
    acc = GAMMA_LANCZOS_COEFFS[0]
    for i, c in enumerate(GAMMA_LANCZOS_COEFFS[1:], start=1):
        acc += c / (z + i)
    t = z + GAMMA_LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * acc


def gamma_pos(x: float) -> float:
    """Gamma(x) for 0 < x <= 2."""
    if not (0.0 < x <= 2.0) or not math.isfinite(x):
        raise ConfigurationError(f"gamma_pos requires 0 < x <= 2, got {x!r}")
    if x < 0.5:
        # reflection; 1 - x lies in (0.5, 1)
        return math.pi / (math.sin(math.pi * x) * _lanczos(1.0 - x))
    return _lanczos(x)
