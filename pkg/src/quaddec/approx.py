"""Nearby quadrature domains from an analytic map of the disc.

Truncating the Taylor series of ``g`` gives a polynomial map, hence an area
quadrature domain. Truncating ``sqrt(g')`` to ``p`` and integrating ``p**2``
gives a map whose derivative is a perfect square, so the boundary tangent
is itself rational and the domain is also an arclength quadrature domain.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from . import jets
from .cpoly import ComplexPoly
from .errors import ConfigError, DomainError, QuaddecError, UnivalenceError
from .qdomain import QuadratureDomain, unit_samples

log = logging.getLogger(__name__)

NEGATIVE_FREQ_GATE = 1e-8
REPORT_SAMPLES = 1024


@dataclass(frozen=True)
class AnalyticMapInput:
    """A disc-holomorphic map ``g``, held as ascending Taylor coefficients.

    Build it with ``from_series`` or ``from_samples``; the latter takes
    ``2**k`` (``k >= 8``) equispaced boundary values and rejects data with
    Fourier energy at negative frequencies.
    """

    coeffs: np.ndarray
    source: str = "series"

    @classmethod
    def from_series(cls, coeffs) -> AnalyticMapInput:
        c = np.asarray(coeffs, dtype=complex)
        if c.ndim != 1 or c.size == 0:
            raise DomainError("series must be a nonempty 1-D list of coefficients")
        return cls(c, "series")

    @classmethod
    def from_samples(cls, values) -> AnalyticMapInput:
        v = np.asarray(values, dtype=complex)
        n = v.size
        if n < 256 or n & (n - 1):
            raise DomainError(f"need 2**k boundary samples with k >= 8, got {n}")
        c = np.fft.fft(v) / n
        scale = float(np.max(np.abs(v)))
        neg = float(np.max(np.abs(c[n // 2 + 1 :])))
        if neg >= NEGATIVE_FREQ_GATE * scale:
            raise DomainError(f"negative-frequency content {neg:.2e} (scale {scale:.3g}); data is not disc-holomorphic")
        return cls(c[: n // 2], "samples")

    @classmethod
    def from_json(cls, obj) -> AnalyticMapInput:
        if "series" in obj:
            return cls.from_series([complex(re, im) for re, im in obj["series"]])
        if "samples" in obj:
            return cls.from_samples([complex(re, im) for re, im in obj["samples"]])
        raise DomainError("map input needs a 'series' or 'samples' entry")

    def truncated(self, n: int) -> np.ndarray:
        """Coefficients of degree ``0..n``, zero padded."""
        out = np.zeros(n + 1, dtype=complex)
        k = min(n + 1, self.coeffs.size)
        out[:k] = self.coeffs[:k]
        return out

    def values(self, w):
        return np.polynomial.polynomial.polyval(w, self.coeffs)

    def derivative_values(self, w):
        return np.polynomial.polynomial.polyval(w, np.polynomial.polynomial.polyder(self.coeffs))


@dataclass(frozen=True, eq=False)
class ApproximationReport:
    domain: QuadratureDomain
    sup_error: float
    derivative_error: float
    kind: str
    degree: int
    sqrt_coeffs: np.ndarray | None = None
    tangent_residual: float | None = None

    def to_json(self) -> dict:
        out = {
            "domain": self.domain.to_json(),
            "sup_error": self.sup_error,
            "derivative_error": self.derivative_error,
            "kind": self.kind,
            "degree": self.degree,
        }
        if self.tangent_residual is not None:
            out["tangent_residual"] = self.tangent_residual
        return out


def _errors(g: AnalyticMapInput, P: ComplexPoly) -> tuple[float, float]:
    _, w = unit_samples(REPORT_SAMPLES)
    sup = float(np.max(np.abs(g.values(w) - P(w))))
    der = float(np.max(np.abs(g.derivative_values(w) - P.derivative()(w))))
    return sup, der


def _domain_or_raise(P: ComplexPoly, n: int) -> QuadratureDomain:
    Q = QuadratureDomain.from_polynomial(P.coeffs, strict=False)
    if not Q.diagnostics["valid"]:
        raise UnivalenceError(f"degree {n} map is not univalent: {Q.diagnostics['reason']}", dict(Q.diagnostics))
    return Q


def approximate_area_qd(g: AnalyticMapInput, n: int) -> ApproximationReport:
    """Degree-``n`` Taylor truncation of ``g`` and its error on the unit circle."""
    if n < 1:
        raise ConfigError("degree must be at least 1")
    P = ComplexPoly(g.truncated(n))
    Q = _domain_or_raise(P, n)
    sup, der = _errors(g, P)
    log.info("area truncation N=%d: sup error %.3e", n, sup)
    return ApproximationReport(Q, sup, der, "area", n)


def sqrt_series(coeffs, n: int) -> np.ndarray:
    """Degree-``n`` truncation of the analytic square root, with the principal branch at 0."""
    c = np.zeros(n + 1, dtype=complex)
    k = min(n + 1, len(coeffs))
    c[:k] = coeffs[:k]
    if c[0] == 0:
        raise QuaddecError("square root of a series vanishing at the origin")
    return jets.sqrt(c)


def _winding_about_zero(vals) -> int:
    turns = np.sum(np.angle(np.roll(vals, -1) / vals)) / (2 * np.pi)
    return int(round(turns))


def approximate_arclength_qd(g: AnalyticMapInput, n: int) -> ApproximationReport:
    """``P = g(0) + integral of p**2`` with ``p`` the degree-``n`` truncation of ``sqrt(g')``."""
    if n < 0:
        raise ConfigError("degree must be non-negative")
    gp = np.polynomial.polynomial.polyder(g.coeffs) if g.coeffs.size > 1 else np.zeros(1, complex)
    _, w = unit_samples(REPORT_SAMPLES)
    dvals = g.derivative_values(w)
    if np.min(np.abs(dvals)) == 0 or _winding_about_zero(dvals) != 0:
        raise QuaddecError("g' winds around the origin on the circle; no analytic square root")
    p = ComplexPoly(sqrt_series(gp, n))
    P = (p * p).antiderivative() + complex(g.coeffs[0])
    Q = _domain_or_raise(P, n)
    sup, der = _errors(g, P)
    T = Q.tangent_w(w)
    rational_T = 1j * w * p(w) / p.conj()(1 / w)
    tres = float(np.max(np.abs(T - rational_T)))
    log.info("arclength construction N=%d: sup error %.3e, tangent residual %.2e", n, sup, tres)
    return ApproximationReport(Q, sup, der, "area_and_arclength", int(P.degree), p.coeffs, tres)


def mobius_series(n_terms: int = 64, q: float = 0.5) -> np.ndarray:
    """Taylor coefficients of ``w / (1 - q w)``."""
    k = np.arange(n_terms)
    out = np.zeros(n_terms, dtype=complex)
    out[1:] = q ** (k[1:] - 1.0)
    return out
