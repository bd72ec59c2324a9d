"""Stable elementary functions used throughout the solvers."""
from __future__ import annotations

import math

import numpy as np

LOG2 = math.log(2.0)

# atanh arguments are clipped this far away from +-1; tanh products can
# round to exactly 1 at large beta.
ATANH_EPS = 1e-15


def logcosh(x):
    """log cosh(x) without overflow: |x| + log1p(e^{-2|x|}) - log 2."""
    a = np.abs(x)
    return a + np.log1p(np.exp(-2.0 * a)) - LOG2


def atanh_clipped(x):
    return np.arctanh(np.clip(x, -1.0 + ATANH_EPS, 1.0 - ATANH_EPS))


def sigmoid(x):
    """1 / (1 + e^{-x}), evaluated on the non-overflowing branch."""
    x = np.asarray(x, dtype=np.float64)
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out
