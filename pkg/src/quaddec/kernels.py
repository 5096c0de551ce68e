"""Bergman kernel, complementary kernel and their antiderivative families.

All kernels are pulled back to the disc through ``f = P^{-1}``:

    K(z, w)      = f'(z) conj(f'(w)) / (pi (1 - f(z) conj f(w))**2)
    Lambda(z, w) = f'(z) f'(w) / (pi (f(z) - f(w))**2)
    k_a^0(z)     = f(z) conj(f'(a)) / (pi (1 - f(z) conj f(a)))
    lambda_a^0(z)= f'(a) / (pi (f(a) - f(z)))

Derivatives in the base point are taken with truncated Taylor series in
``a`` (for Lambda, lambda) or ``conj(a)`` (for K, k); ``conj(f(a))`` is the
coefficient-conjugated Taylor series of ``f`` at ``a``.

Functions named ``*_w`` take disc coordinates; the others take points of
the domain and call ``Q.inverse_map``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import jets
from .cpoly import ComplexPoly, RationalFunction
from .errors import ConfigError, DomainError, PoleError
from .qdomain import BOUNDARY_TOL, QuadratureDomain, unit_samples

MAX_ORDER = 16
KINDS = ("K", "Lambda", "k_lower", "lambda_lower")


def _check_order(m: int, max_order: int = MAX_ORDER) -> None:
    if m < 0 or m > max_order:
        raise ConfigError(f"derivative order {m} outside [0, {max_order}]")


def _interior(alpha: complex) -> None:
    if abs(alpha) >= 1 - BOUNDARY_TOL:
        raise DomainError(f"base point disc coordinate {alpha} is not strictly interior")


def inverse_jet(Q: QuadratureDomain, alpha: complex, order: int) -> np.ndarray:
    """Taylor coefficients of ``f = P^{-1}`` at ``a = P(alpha)``; entry 0 is ``alpha``."""
    ptay = Q.map.taylor_at(alpha, order)
    shifted = ptay.copy()
    shifted[0] = 0.0
    dcoef = np.arange(1, order + 1) * ptay[1:]
    u = np.zeros(order + 1, dtype=complex)
    if order >= 1:
        u[1] = 1 / ptay[1]
    t = jets.variable(0.0, order)
    for _ in range(int(math.ceil(math.log2(order + 2))) + 2):
        err = jets.polyval(shifted, u) - t
        slope = jets.polyval(dcoef, u) if order >= 1 else jets.const(1.0, 0)
        u = u - jets.div(err, slope)
    out = u.copy()
    out[0] = alpha
    return out


def _lift(series: np.ndarray, ndim: int) -> np.ndarray:
    return series.reshape((-1,) + (1,) * ndim)


def _as_w(Q, z):
    return np.asarray(Q.inverse_map(z), dtype=complex)


def _finish(x, like):
    return x if np.ndim(like) else complex(x)


# --------------------------------------------------------------------------
# kernels in disc coordinates


def bergman_K_w(Q: QuadratureDomain, u, v):
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    denom = 1 - u * np.conj(v)
    if np.any(np.abs(denom) < 1e-14):
        raise PoleError("Bergman kernel evaluated on the boundary diagonal")
    return 1 / (Q.dmap(u) * np.conj(Q.dmap(v)) * np.pi * denom**2)


def lambda_L_w(Q: QuadratureDomain, u, v):
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    diff = u - v
    if np.any(np.abs(diff) < 1e-14):
        raise PoleError("Lambda kernel evaluated on the diagonal", principal_part=[(2, 1 / np.pi)])
    return 1 / (Q.dmap(u) * Q.dmap(v) * np.pi * diff**2)


def K_deriv_w(Q: QuadratureDomain, alpha: complex, m: int, u):
    """``d^m/d(conj w)^m K(z, w)`` at ``w = a = P(alpha)``, ``z = P(u)``."""
    _check_order(m)
    u = np.asarray(u, dtype=complex)
    g = np.conj(inverse_jet(Q, alpha, m + 1))
    gp = jets.deriv(g)[: m + 1]
    g = g[: m + 1]
    den = jets.const(np.ones(u.shape), m) - _lift(g, u.ndim) * u
    expr = jets.div(_lift(gp, u.ndim) * np.ones(u.shape), jets.mul(den, den))
    return math.factorial(m) * expr[m] / (np.pi * Q.dmap(u))


def Lambda_deriv_w(Q: QuadratureDomain, alpha: complex, m: int, u):
    """``d^m/dw^m Lambda(z, w)`` at ``w = a = P(alpha)``, ``z = P(u)``."""
    _check_order(m)
    u = np.asarray(u, dtype=complex)
    if np.any(np.abs(u - alpha) < 1e-14):
        raise PoleError("Lambda_a^m evaluated at its pole z = a")
    F = inverse_jet(Q, alpha, m + 1)
    Fp = jets.deriv(F)[: m + 1]
    F = F[: m + 1]
    den = _lift(F, u.ndim) * np.ones(u.shape) - jets.const(u, m)
    expr = jets.div(_lift(Fp, u.ndim) * np.ones(u.shape), jets.mul(den, den))
    return math.factorial(m) * expr[m] / (np.pi * Q.dmap(u))


def k_lower_coeffs(Q: QuadratureDomain, alpha: complex, m: int) -> np.ndarray:
    """``beta_n`` with ``k_a^m(u) = sum_n beta_n (u / (1 - u conj(alpha)))**(n+1)``."""
    _check_order(m)
    g = np.conj(inverse_jet(Q, alpha, m + 1))
    gp = jets.deriv(g)[: m + 1]
    G = g[: m + 1].copy()
    G[0] = 0.0
    out = np.zeros(m + 1, dtype=complex)
    acc = gp.copy()
    for n in range(m + 1):
        out[n] = acc[m]
        acc = jets.mul(acc, G)
    return out * math.factorial(m) / np.pi


def lambda_lower_coeffs(Q: QuadratureDomain, alpha: complex, m: int) -> np.ndarray:
    """``gamma_n`` with ``lambda_a^m(u) = sum_n gamma_n (1 / (alpha - u))**(n+1)``."""
    _check_order(m)
    F = inverse_jet(Q, alpha, m + 1)
    Fp = jets.deriv(F)[: m + 1]
    H = F[: m + 1].copy()
    H[0] = 0.0
    out = np.zeros(m + 1, dtype=complex)
    acc = Fp.copy()
    for n in range(m + 1):
        out[n] = acc[m]
        acc = jets.mul(acc, -H)
    return out * math.factorial(m) / np.pi


def k_lower_w(Q: QuadratureDomain, alpha: complex, m: int, u, coeffs=None):
    u = np.asarray(u, dtype=complex)
    beta = k_lower_coeffs(Q, alpha, m) if coeffs is None else coeffs
    X = u / (1 - u * np.conj(alpha))
    return sum(b * X ** (n + 1) for n, b in enumerate(beta))


def lambda_lower_w(Q: QuadratureDomain, alpha: complex, m: int, u, coeffs=None):
    u = np.asarray(u, dtype=complex)
    if np.any(np.abs(u - alpha) < 1e-14):
        gamma = lambda_lower_coeffs(Q, alpha, m) if coeffs is None else coeffs
        pp = [(n + 1, complex(c * (-1) ** (n + 1))) for n, c in enumerate(gamma)]
        raise PoleError("lambda_a^m evaluated at its pole z = a", alpha, pp, "w")
    gamma = lambda_lower_coeffs(Q, alpha, m) if coeffs is None else coeffs
    X = 1 / (alpha - u)
    return sum(c * X ** (n + 1) for n, c in enumerate(gamma))


def k_lower_jet_w(Q: QuadratureDomain, alpha: complex, m: int, u):
    """``k_a^m`` straight from the Taylor series of ``u g'/(pi(1 - u g))``."""
    u = np.asarray(u, dtype=complex)
    g = np.conj(inverse_jet(Q, alpha, m + 1))
    gp = jets.deriv(g)[: m + 1]
    g = g[: m + 1]
    num = _lift(gp, u.ndim) * u
    den = jets.const(np.ones(u.shape), m) - _lift(g, u.ndim) * u
    return math.factorial(m) * jets.div(num, den)[m] / np.pi


def _power_sum(coeffs, top: ComplexPoly, bottom: ComplexPoly) -> RationalFunction:
    """``sum_n c_n (top/bottom)**(n+1)`` with one shared denominator."""
    m = len(coeffs) - 1
    num = ComplexPoly([0])
    for n, c in enumerate(coeffs):
        num = num + c * (top ** (n + 1)) * (bottom ** (m - n))
    return RationalFunction(num, bottom ** (m + 1))


def k_lower_rational(Q: QuadratureDomain, alpha: complex, m: int) -> RationalFunction:
    """``k_a^m`` as a rational function of the disc coordinate."""
    return _power_sum(k_lower_coeffs(Q, alpha, m), ComplexPoly([0, 1]), ComplexPoly([1, -np.conj(alpha)]))


def lambda_lower_rational(Q: QuadratureDomain, alpha: complex, m: int) -> RationalFunction:
    return _power_sum(lambda_lower_coeffs(Q, alpha, m), ComplexPoly([1]), ComplexPoly([alpha, -1]))


# --------------------------------------------------------------------------
# public point-evaluation API (domain coordinates)


def bergman_K(Q: QuadratureDomain, z, w):
    return _finish(bergman_K_w(Q, _as_w(Q, z), _as_w(Q, w)), np.broadcast(z, w))


def lambda_L(Q: QuadratureDomain, z, w):
    return _finish(lambda_L_w(Q, _as_w(Q, z), _as_w(Q, w)), np.broadcast(z, w))


def K_deriv(Q: QuadratureDomain, a: complex, m: int, z):
    alpha = complex(Q.inverse_map(a))
    _interior(alpha)
    return _finish(K_deriv_w(Q, alpha, m, _as_w(Q, z)), z)


def Lambda_deriv(Q: QuadratureDomain, a: complex, m: int, z):
    alpha = complex(Q.inverse_map(a))
    _interior(alpha)
    return _finish(Lambda_deriv_w(Q, alpha, m, _as_w(Q, z)), z)


def k_lower(Q: QuadratureDomain, a: complex, m: int, z):
    alpha = complex(Q.inverse_map(a))
    _interior(alpha)
    return _finish(k_lower_w(Q, alpha, m, _as_w(Q, z)), z)


def lambda_lower(Q: QuadratureDomain, a: complex, m: int, z):
    alpha = complex(Q.inverse_map(a))
    _interior(alpha)
    return _finish(lambda_lower_w(Q, alpha, m, _as_w(Q, z)), z)


# --------------------------------------------------------------------------
# kernel terms


@dataclass(frozen=True, eq=False)
class KernelTerm:
    """``coeff`` times one of ``K_a^m``, ``Lambda_a^m``, ``k_a^m``, ``lambda_a^m``."""

    kind: str
    a: complex
    m: int
    coeff: complex
    alpha: complex | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown kernel kind {self.kind!r}")
        _check_order(self.m)

    def disc_point(self, Q: QuadratureDomain) -> complex:
        if self.alpha is not None:
            return self.alpha
        alpha = complex(Q.inverse_map(self.a))
        _interior(alpha)
        return alpha

    def with_coeff(self, coeff) -> KernelTerm:
        return KernelTerm(self.kind, self.a, self.m, complex(coeff), self.alpha)

    def with_kind(self, kind) -> KernelTerm:
        return KernelTerm(kind, self.a, self.m, self.coeff, self.alpha)

    def eval_w(self, Q: QuadratureDomain, u):
        alpha = self.disc_point(Q)
        fn = {"K": K_deriv_w, "Lambda": Lambda_deriv_w, "k_lower": k_lower_w, "lambda_lower": lambda_lower_w}[self.kind]
        return self.coeff * fn(Q, alpha, self.m, u)

    def __call__(self, Q: QuadratureDomain, z):
        return _finish(self.eval_w(Q, _as_w(Q, z)), z)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "a": [float(self.a.real), float(self.a.imag)],
            "m": int(self.m),
            "coeff": [float(self.coeff.real), float(self.coeff.imag)],
        }

    @classmethod
    def from_json(cls, obj) -> KernelTerm:
        return cls(obj["kind"], complex(*obj["a"]), int(obj["m"]), complex(*obj["coeff"]))


# --------------------------------------------------------------------------
# identity checks


def default_base_points(n: int = 9, radius: float = 0.45) -> np.ndarray:
    """Disc coordinates: the origin plus ``n - 1`` points on a circle."""
    ring = radius * np.exp(1j * (2 * np.pi * np.arange(n - 1) / (n - 1) + 0.1))
    return np.concatenate([[0j], ring])


def _rel(lhs, rhs) -> float:
    return float(np.max(np.abs(lhs - rhs)) / max(float(np.max(np.abs(lhs))), 1e-300))


def boundary_identities(Q: QuadratureDomain, n_boundary: int = 64, base_points=None, orders=(0, 1, 2)) -> dict:
    """Max relative residuals of the boundary identities linking K, Lambda, k and lambda.

    ``tangent_pair``: ``K(z,w) T(z) = -conj(Lambda(z,w)) conj(T(z))``; ``tangent_pair_m`` the
    same for base-point derivatives; ``both_boundary``: the version with
    ``z`` and ``w`` both on the boundary; ``k_lambda``: ``k_a^m = -conj(lambda_a^m)``.
    """
    alphas = default_base_points() if base_points is None else np.asarray(base_points, dtype=complex)
    _, u = unit_samples(n_boundary, 0.05)
    T = Q.tangent_w(u)
    report = {"tangent_pair": 0.0, "both_boundary": 0.0}
    for m in orders:
        report[f"tangent_pair_{m}"] = 0.0
        report[f"k_lambda_{m}"] = 0.0
    for alpha in alphas:
        lhs = bergman_K_w(Q, u, alpha) * T
        rhs = -np.conj(lambda_L_w(Q, u, alpha)) * np.conj(T)
        report["tangent_pair"] = max(report["tangent_pair"], _rel(lhs, rhs))
        for m in orders:
            lhs = K_deriv_w(Q, alpha, m, u) * T
            rhs = -np.conj(Lambda_deriv_w(Q, alpha, m, u)) * np.conj(T)
            report[f"tangent_pair_{m}"] = max(report[f"tangent_pair_{m}"], _rel(lhs, rhs))
            k = k_lower_w(Q, alpha, m, u)
            lam = lambda_lower_w(Q, alpha, m, u)
            report[f"k_lambda_{m}"] = max(report[f"k_lambda_{m}"], _rel(k, -np.conj(lam)))
    _, v = unit_samples(len(alphas), 0.3)
    Tv = Q.tangent_w(v)
    for vj, tj in zip(v, Tv):
        left = T * bergman_K_w(Q, u, vj) * np.conj(tj)
        mid = -np.conj(T * lambda_L_w(Q, u, vj) * tj)
        right = tj * bergman_K_w(Q, vj, u) * np.conj(T)
        report["both_boundary"] = max(report["both_boundary"], _rel(left, mid), _rel(left, right))
    report["max"] = max(v for k, v in report.items() if k != "max")
    return report


def winding_number(values_fn, deriv_fn, Q: QuadratureDomain, n: int = 1024) -> float:
    """``(1/2 pi i) * contour integral of h'/h dz`` over the boundary (trapezoid rule)."""
    _, u = unit_samples(n)
    dz = 1j * u * Q.dmap(u) * (2 * np.pi / n)
    return complex(np.sum(deriv_fn(u) / values_fn(u) * dz) / (2j * np.pi)).real


def ratio_checks(Q: QuadratureDomain, base_points=None) -> dict:
    """k_b^0 / lambda_b^0 divided by f**2 (a unimodular constant) and zero counts."""
    r = np.concatenate([0.25 * np.exp(2j * np.pi * np.arange(8) / 8), 0.6 * np.exp(2j * np.pi * (np.arange(8) + 0.5) / 8)])
    ratio = k_lower_w(Q, 0j, 0, r) / lambda_lower_w(Q, 0j, 0, r) / r**2
    const = complex(np.mean(ratio))
    report = {
        "constant": const,
        "spread": float(np.max(np.abs(ratio - const))),
        "modulus_error": abs(abs(const) - 1),
        "k_zero_counts": [],
        "lambda_zero_counts": [],
        "max_rounding_gap": 0.0,
    }
    alphas = default_base_points(5, 0.4) if base_points is None else base_points
    for alpha in alphas:
        wk = winding_number(lambda u: k_lower_w(Q, alpha, 0, u), lambda u: K_deriv_w(Q, alpha, 0, u), Q)
        wl = winding_number(lambda u: lambda_lower_w(Q, alpha, 0, u), lambda u: Lambda_deriv_w(Q, alpha, 0, u), Q)
        # lambda_a^0 has a simple pole at a inside, k_a^0 has none in the closure
        zk, zl = wk, wl + 1
        report["max_rounding_gap"] = max(report["max_rounding_gap"], abs(zk - round(zk)), abs(zl - round(zl)))
        report["k_zero_counts"].append(int(round(zk)))
        report["lambda_zero_counts"].append(int(round(zl)))
    report["ok"] = (
        report["spread"] < 1e-9
        and report["modulus_error"] < 1e-9
        and report["max_rounding_gap"] < 0.1
        and all(c == 1 for c in report["k_zero_counts"])
        and all(c == 0 for c in report["lambda_zero_counts"])
    )
    return report


def fit_polynomial_by_k(Q: QuadratureDomain, p: ComplexPoly, n_terms: int, n_samples: int = 256):
    """Least-squares fit of ``p`` on the boundary by ``k_b^0 .. k_b^{n_terms-1}``.

    Returns the coefficients and the relative sup residual on the samples.
    """
    _, u = unit_samples(n_samples, 0.01)
    z = Q.map(u)
    A = np.column_stack([k_lower_w(Q, 0j, m, u) for m in range(n_terms)])
    target = p(z)
    coef, *_ = np.linalg.lstsq(A, target, rcond=None)
    resid = float(np.max(np.abs(A @ coef - target)) / max(float(np.max(np.abs(target))), 1e-300))
    return coef, resid
