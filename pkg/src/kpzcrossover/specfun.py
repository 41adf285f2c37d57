"""Scalar special functions on the real line: Airy Ai and Ai', the Gaussian
CDF and the Gumbel weight.

All functions accept scalars or arrays and return the same shape.
"""
from dataclasses import dataclass

import numpy as np
from scipy import special


@dataclass(frozen=True)
class EvalAccuracy:
    abs_tol: float = 1e-12
    rel_tol: float = 1e-10

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be strictly positive")


def _out(v, like):
    return float(v) if np.ndim(like) == 0 else v


def airy_pair(x):
    """Return (Ai(x), Ai'(x)) for real x."""
    x = np.asarray(x, dtype=float)
    ai, aip, _, _ = special.airy(x)
    return ai, aip


def airy_ai(x):
    x = np.asarray(x, dtype=float)
    return _out(airy_pair(x)[0], x)


def airy_ai_prime(x):
    x = np.asarray(x, dtype=float)
    return _out(airy_pair(x)[1], x)


def airy_modulus_phase(x):
    """Modulus M and phase theta (mod 2 pi) with Ai = M cos(theta) and
    Bi = M sin(theta)."""
    x = np.asarray(x, dtype=float)
    ai, _, bi, _ = special.airy(x)
    return np.hypot(ai, bi), np.arctan2(bi, ai)


def gaussian_cdf(s):
    s = np.asarray(s, dtype=float)
    return _out(special.ndtr(s), s)


def gumbel_weight(r):
    """G(r) = exp(-exp(-r)); underflows cleanly to 0 for very negative r."""
    r = np.asarray(r, dtype=float)
    with np.errstate(over="ignore", under="ignore"):
        v = np.exp(-np.exp(-r))
    return _out(v, r)
