"""Seeded test data shared by the self-test, the scripts and the test suite."""

from __future__ import annotations

import numpy as np

from .circle import BivariateRational
from .qdomain import QuadratureDomain


def _modulus_outside(rng, lo: float, hi: float) -> float:
    """A modulus in ``[0.1, lo] U [hi, 4]``."""
    if rng.random() < 0.5:
        return float(rng.uniform(0.1, lo))
    return float(rng.uniform(hi, 4.0))


def random_circle_datum(rng: np.random.Generator, max_degree: int = 6) -> BivariateRational:
    """Random ``R(z, zbar)`` of total degree at most ``max_degree`` in numerator and denominator.

    The denominator is a product of factors ``1 - c z``, ``1 - c zbar`` and
    ``c - z zbar`` chosen so that none vanishes on ``0.9 < |z| < 1.1``.
    """
    den = np.ones((1, 1), dtype=complex)
    budget = int(rng.integers(1, max_degree + 1))
    used = 0
    while used < budget:
        kind = rng.integers(3) if budget - used >= 2 else rng.integers(2)
        phase = np.exp(2j * np.pi * rng.random())
        if kind == 2:
            c = _modulus_outside(rng, 0.7, 1.4) * phase
            f = np.array([[c, 0], [0, -1]], dtype=complex)
            used += 2
        else:
            c = 1 / _modulus_outside(rng, 0.8, 1.25) * phase
            f = np.array([[1, -c]], dtype=complex) if kind == 1 else np.array([[1], [-c]], dtype=complex)
            used += 1
        out = np.zeros((den.shape[0] + f.shape[0] - 1, den.shape[1] + f.shape[1] - 1), dtype=complex)
        for i, j in zip(*np.nonzero(f)):
            out[i : i + den.shape[0], j : j + den.shape[1]] += f[i, j] * den
        den = out
    nd = int(rng.integers(0, max_degree + 1))
    num = np.zeros((nd + 1, nd + 1), dtype=complex)
    for i in range(nd + 1):
        for j in range(nd + 1 - i):
            num[i, j] = rng.normal() + 1j * rng.normal()
    return BivariateRational(num, den)


def circle_corpus(seed: int = 0, size: int = 50, max_degree: int = 6) -> list[BivariateRational]:
    rng = np.random.default_rng(seed)
    return [random_circle_datum(rng, max_degree) for _ in range(size)]


def zbar() -> BivariateRational:
    return BivariateRational(np.array([[0, 1]], dtype=complex), np.ones((1, 1), dtype=complex))


def real_x() -> BivariateRational:
    return BivariateRational.from_xy(np.array([[0], [1]], dtype=complex))


def domain_corpus() -> dict[str, QuadratureDomain]:
    return {
        "disc": QuadratureDomain.disc(),
        "cardioid_0.1": QuadratureDomain.cardioid(0.1),
        "cardioid_0.25": QuadratureDomain.cardioid(0.25),
        "cardioid_0.4": QuadratureDomain.cardioid(0.4),
        "cubic": QuadratureDomain.from_polynomial([0.1, 1, 0.15 + 0.1j, 0.05]),
    }


def rational_datum_for(Q: QuadratureDomain, rng: np.random.Generator) -> BivariateRational:
    """Random data with poles kept off the boundary of ``Q``: denominators ``c - z`` with ``c`` well outside."""
    c = 1.6 * Q.scale * np.exp(2j * np.pi * rng.random())
    d = 1.8 * Q.scale * np.exp(2j * np.pi * rng.random())
    num = np.zeros((3, 3), dtype=complex)
    num[:2, :2] = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    den = np.array([[c * np.conj(d), -c], [-np.conj(d), 1], [0, 0]], dtype=complex)
    return BivariateRational(num, den)
