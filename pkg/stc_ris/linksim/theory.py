"""Closed-form symbol error rates for coherent M-PSK in AWGN."""

import math

import numpy as np
from scipy import integrate, special

from ..errors import ValidationError


def q_function(x: "float | np.ndarray") -> "float | np.ndarray":
    """Gaussian tail probability Q(x) = ½·erfc(x/√2)."""
    return 0.5 * special.erfc(np.asarray(x) / math.sqrt(2))


def psk_ser(order: int, esn0: float) -> float:
    """Exact M-PSK symbol error probability at linear Es/N0.

    BPSK uses Q(√(2·Es/N0)); higher orders integrate
    (1/π)∫₀^{(M−1)π/M} exp(−Es/N0·sin²(π/M)/sin²φ) dφ.
    """
    if order < 2:
        raise ValidationError(f"PSK order must be >= 2 (got {order})", subcategory="RNG")
    if esn0 < 0:
        raise ValidationError(f"Es/N0 must be non-negative (got {esn0})", subcategory="RNG")
    if order == 2:
        return float(q_function(math.sqrt(2 * esn0)))
    spread = math.sin(math.pi / order) ** 2

    def integrand(phi: float) -> float:
        s = math.sin(phi)
        if s == 0:
            return 0.0
        return math.exp(-esn0 * spread / s**2)

    value, _ = integrate.quad(integrand, 0.0, (order - 1) * math.pi / order)
    return float(min(max(value / math.pi, 0.0), 1.0))


def binomial_sigma(probability: float, trials: int) -> float:
    """Standard deviation of an error-rate estimate over ``trials`` symbols."""
    return math.sqrt(probability * (1 - probability) / trials)
