"""Truncated Taylor series ("jets") in one variable.

A jet is a complex array whose first axis indexes powers of ``t``; trailing
axes broadcast, so a jet may carry a batch of evaluation points.
"""

from __future__ import annotations

import math

import numpy as np


def const(value, order: int) -> np.ndarray:
    value = np.asarray(value, dtype=complex)
    out = np.zeros((order + 1,) + value.shape, dtype=complex)
    out[0] = value
    return out


def variable(center, order: int) -> np.ndarray:
    """Jet of ``center + t``."""
    out = const(center, order)
    if order >= 1:
        out[1] = 1.0
    return out


def mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n = min(len(a), len(b))
    shape = np.broadcast_shapes(a.shape[1:], b.shape[1:])
    out = np.zeros((n,) + shape, dtype=complex)
    for k in range(n):
        for j in range(k + 1):
            out[k] = out[k] + a[j] * b[k - j]
    return out


def recip(a: np.ndarray) -> np.ndarray:
    n = len(a)
    out = np.zeros(a.shape, dtype=complex)
    out[0] = 1.0 / a[0]
    for k in range(1, n):
        acc = np.zeros(a.shape[1:], dtype=complex)
        for j in range(1, k + 1):
            acc = acc + a[j] * out[k - j]
        out[k] = -acc * out[0]
    return out


def div(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return mul(a, recip(b))


def power(a: np.ndarray, k: int) -> np.ndarray:
    out = const(np.ones(a.shape[1:]), len(a) - 1)
    for _ in range(k):
        out = mul(out, a)
    return out


def sqrt(a: np.ndarray) -> np.ndarray:
    """Square root with the principal branch at the constant term."""
    n = len(a)
    out = np.zeros(a.shape, dtype=complex)
    out[0] = np.sqrt(a[0])
    for k in range(1, n):
        acc = np.zeros(a.shape[1:], dtype=complex)
        for j in range(1, k):
            acc = acc + out[j] * out[k - j]
        out[k] = (a[k] - acc) / (2 * out[0])
    return out


def deriv(a: np.ndarray) -> np.ndarray:
    """d/dt, keeping the length (top coefficient becomes zero)."""
    out = np.zeros(a.shape, dtype=complex)
    k = np.arange(1, len(a)).reshape((-1,) + (1,) * (a.ndim - 1))
    out[:-1] = a[1:] * k
    return out


def polyval(coeffs, x: np.ndarray) -> np.ndarray:
    """Evaluate an ascending-coefficient polynomial at a jet ``x`` (Horner)."""
    coeffs = np.asarray(coeffs, dtype=complex)
    acc = const(np.full(x.shape[1:], coeffs[-1]), len(x) - 1)
    for c in coeffs[-2::-1]:
        acc = mul(acc, x)
        acc[0] = acc[0] + c
    return acc


def coeff_to_derivative(a: np.ndarray, m: int):
    """m-th derivative at ``t = 0`` from the jet coefficients."""
    return a[m] * math.factorial(m)
