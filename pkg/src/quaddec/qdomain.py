"""Simply connected area quadrature domains as rational images of the unit disc.

A domain is held as its conformal map ``P`` from the disc. The disc
coordinate ``w`` of a point ``z`` is ``inverse_map(z)``. The Schwarz
function pulled back to the disc is ``S(P(w)) = conj(P)(1/w)``, a rational
function of ``w``; the double of the domain becomes the Riemann sphere in
``w`` with reflection ``w -> 1/conj(w)``.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .cpoly import ComplexPoly, PartialFractions, RationalFunction, partial_fractions, roots
from .errors import (
    DegenerateBoundaryPointError,
    DegreeBoundError,
    DomainError,
    InvalidDomainError,
    PointOutsideDomainError,
    PoleError,
    QuaddecError,
)

log = logging.getLogger(__name__)

BOUNDARY_TOL = 1e-9


class _PointAtInfinity:
    """Tag for the reflected base point, which sits at ``w = infinity``."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _PointAtInfinity()


def unit_samples(n: int, offset: float = 0.0) -> tuple[np.ndarray, np.ndarray]:
    theta = 2 * np.pi * np.arange(n) / n + offset
    return theta, np.exp(1j * theta)


def _segments_intersect(z: np.ndarray) -> bool:
    """True if the closed polygon through ``z`` has two crossing non-adjacent edges."""
    p = np.stack([z.real, z.imag], axis=1)
    q = np.roll(p, -1, axis=0)
    n = len(p)

    def orient(a, b, c):
        return (b[..., 0] - a[..., 0]) * (c[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (c[..., 0] - a[..., 0])

    A, B = p[:, None, :], q[:, None, :]
    C, D = p[None, :, :], q[None, :, :]
    d1 = orient(A, B, C)
    d2 = orient(A, B, D)
    d3 = orient(C, D, A)
    d4 = orient(C, D, B)
    cross = (d1 * d2 < 0) & (d3 * d4 < 0)
    idx = np.arange(n)
    sep = np.abs(idx[:, None] - idx[None, :])
    sep = np.minimum(sep, n - sep)
    return bool(np.any(cross & (sep > 1)))


@dataclass(frozen=True, eq=False)
class QuadratureDomain:
    """Image of the unit disc under the rational map ``map``.

    With ``strict=True`` (the default) construction fails unless ``map`` is
    analytic on the closed disc, has nonvanishing derivative there and is
    injective on the sampled boundary. ``strict=False`` keeps the checks as
    diagnostics only; cusped boundaries such as the cardioid ``w + w**2/2``
    need it.
    """

    map: RationalFunction
    strict: bool = True
    pole_margin: float = 1e-6
    jordan_samples: int = 512
    jordan_threshold: float = 1e-9
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if not isinstance(self.map, RationalFunction):
            object.__setattr__(self, "map", RationalFunction(ComplexPoly(self.map)))
        self.diagnostics.update(self._validate())
        if self.strict and not self.diagnostics["valid"]:
            raise InvalidDomainError(self.diagnostics["reason"])

    # construction helpers --------------------------------------------------

    @classmethod
    def disc(cls) -> QuadratureDomain:
        return cls(RationalFunction.identity())

    @classmethod
    def from_polynomial(cls, coeffs, **kw) -> QuadratureDomain:
        return cls(RationalFunction(ComplexPoly(coeffs)), **kw)

    @classmethod
    def cardioid(cls, c: complex, **kw) -> QuadratureDomain:
        """``P(w) = w + c w**2``; univalent with smooth boundary for ``|c| < 1/2``."""
        return cls.from_polynomial([0, 1, c], **kw)

    def to_json(self) -> dict:
        return {"map": self.map.to_json()}

    @classmethod
    def from_json(cls, obj, **kw) -> QuadratureDomain:
        return cls(RationalFunction.from_json(obj["map"]), **kw)

    # derived data ----------------------------------------------------------

    @property
    def base(self) -> complex:
        return complex(self.map(0.0))

    @property
    def degree(self) -> int:
        return self.map.degree

    @property
    def is_polynomial(self) -> bool:
        return self.map.is_polynomial

    @cached_property
    def dmap(self) -> RationalFunction:
        return self.map.derivative()

    @cached_property
    def schwarz_w(self) -> RationalFunction:
        """``S(P(w)) = conj(P)(1/w)`` as a rational function of ``w``."""
        return self.map.conj().at_inverse()

    @cached_property
    def scale(self) -> float:
        _, w = unit_samples(256)
        return float(np.max(np.abs(self.map(w))))

    def P(self, w):
        return self.map(w)

    def dP(self, w):
        return self.dmap(w)

    def _validate(self) -> dict:
        diag: dict = {"valid": True, "reason": ""}
        P = self.map
        if P.num.is_zero or P.degree < 1:
            return {"valid": False, "reason": "map is constant"}
        if P.den.degree >= 1:
            poles = [r for r, _ in roots(P.den)]
            diag["min_pole_modulus"] = float(min(abs(r) for r in poles))
            if diag["min_pole_modulus"] <= 1 + self.pole_margin:
                diag.update(valid=False, reason=f"map has a pole at modulus {diag['min_pole_modulus']:.3g} <= 1")
                return diag
        dnum = P.num.derivative() * P.den - P.num * P.den.derivative()
        if dnum.is_zero:
            return {"valid": False, "reason": "map is constant"}
        if dnum.degree >= 1:
            crit = [r for r, _ in roots(dnum)]
            diag["min_critical_modulus"] = float(min(abs(r) for r in crit))
            if diag["min_critical_modulus"] <= 1 + BOUNDARY_TOL:
                diag.update(valid=False, reason=f"derivative vanishes at modulus {diag['min_critical_modulus']:.6g}")
        _, w = unit_samples(self.jordan_samples)
        z = P(w)
        n = len(z)
        dist = np.abs(z[:, None] - z[None, :])
        idx = np.arange(n)
        sep = np.abs(idx[:, None] - idx[None, :])
        sep = np.minimum(sep, n - sep)
        far = sep >= max(2, n // 32)
        diag["min_separated_distance"] = float(np.min(dist[far]))
        diag["self_intersecting"] = _segments_intersect(z)
        if diag["self_intersecting"] or diag["min_separated_distance"] <= self.jordan_threshold * max(
            1.0, float(np.max(np.abs(z)))
        ):
            diag["jordan_failed"] = True
            if diag["valid"]:
                diag.update(valid=False, reason="boundary curve is not a Jordan curve (self-intersection)")
        return diag

    # point maps ------------------------------------------------------------

    def inverse_map(self, z, tol: float = BOUNDARY_TOL):
        """Disc coordinate ``w`` with ``P(w) = z`` and ``|w| <= 1``."""
        arr = np.asarray(z, dtype=complex)
        out = np.array([self._inverse_one(complex(v), tol) for v in arr.ravel()], dtype=complex)
        out = out.reshape(arr.shape)
        return out if out.ndim else complex(out)

    def _inverse_one(self, z: complex, tol: float) -> complex:
        eq = self.map.num - z * self.map.den
        if eq.degree < 1:
            raise PointOutsideDomainError(f"no preimage of {z}")
        cands = [r for r, _ in roots(eq) if abs(r) <= 1 + max(tol, 1e-7)]
        if not cands:
            raise PointOutsideDomainError(f"{z} lies outside the closed domain")
        cands = [self._polish(r, z) for r in cands]
        cands = [r for r in cands if abs(r) <= 1 + tol]
        if not cands:
            raise PointOutsideDomainError(f"{z} lies outside the closed domain")
        uniq = []
        for r in cands:
            if all(abs(r - u) > 1e-7 for u in uniq):
                uniq.append(r)
        if len(uniq) > 1:
            raise InvalidDomainError(f"{len(uniq)} preimages of {z} in the disc; map is not univalent")
        return uniq[0]

    def _polish(self, w: complex, z: complex) -> complex:
        for _ in range(3):
            d = complex(self.dmap(w))
            if d == 0:
                break
            step = (complex(self.map(w)) - z) / d
            w = w - step
            if abs(step) < 1e-17:
                break
        return w

    def contains(self, z, tol: float = BOUNDARY_TOL) -> bool:
        try:
            self.inverse_map(z, tol)
        except PointOutsideDomainError:
            return False
        return True

    def boundary(self, theta):
        return self.map(np.exp(1j * np.asarray(theta, dtype=float)))

    def tangent(self, theta):
        """Unit tangent ``z'(theta)/|z'(theta)|`` of the positively oriented boundary."""
        w = np.exp(1j * np.asarray(theta, dtype=float))
        zp = 1j * w * self.dmap(w)
        return zp / np.abs(zp)

    def tangent_w(self, w):
        """Unit tangent at the boundary point ``P(w)``, ``|w| = 1``."""
        zp = 1j * w * self.dmap(w)
        return zp / np.abs(zp)

    def tangent_squared_rational(self, w):
        """``-w**2 P'(w) / conj(P')(1/w)``, the extension of ``T**2`` off the circle."""
        w = np.asarray(w, dtype=complex)
        return -(w**2) * self.dmap(w) / self.dmap.conj()(1 / w)

    # operations --------------------------------------------------------------

    @cached_property
    def _schwarz(self) -> SchwarzFunction:
        return SchwarzFunction(self, self.schwarz_w)

    def schwarz(self) -> SchwarzFunction:
        return self._schwarz

    @cached_property
    def _quadrature(self) -> QuadratureData:
        return _quadrature_data(self)

    def quadrature_data(self) -> QuadratureData:
        return self._quadrature

    def implicitize(self) -> ImplicitCurve:
        return implicitize(self)

    def reflect(self, a: complex):
        return reflect(self, a)

    def boundary_table(self, n: int = 256) -> np.ndarray:
        """Columns theta, re z, im z, re S, im S, re T, im T at ``n`` boundary samples."""
        theta, w = unit_samples(n)
        z = self.map(w)
        s = self.schwarz_w(w)
        t = self.tangent_w(w)
        return np.column_stack([theta, z.real, z.imag, s.real, s.imag, t.real, t.imag])



@dataclass(frozen=True, eq=False)
class SchwarzFunction:
    owner: QuadratureDomain
    as_w_rational: RationalFunction

    @cached_property
    def _pf(self):
        P = self.owner.map
        if P.is_polynomial:
            # conj(P)(1/w) is already a Laurent polynomial: one pole at 0 of order deg P
            c = np.conj(P.num.coeffs / P.den.leading)
            return PartialFractions(ComplexPoly([c[0]]), [(0j, k, complex(c[k])) for k in range(1, len(c)) if c[k] != 0])
        return partial_fractions(self.as_w_rational)

    def poles_in_disc(self) -> list[tuple[complex, int]]:
        """Disc coordinates and orders of the poles of ``S`` inside the domain."""
        return [(p, n) for p, n in self._pf.poles().items() if abs(p) < 1]

    def __call__(self, z):
        w = np.atleast_1d(self.owner.inverse_map(z))
        for pole, order in self._pf.poles().items():
            hit = np.abs(w - pole) < 1e-12 * (1 + abs(pole))
            if np.any(hit):
                pp = [(k + 1, complex(c)) for k, c in enumerate(self._pf.principal_part(pole))]
                raise PoleError(f"Schwarz function has a pole at z={self.owner.map(pole)}", pole, pp, "w")
        out = self.as_w_rational(w)
        return out.reshape(np.shape(z)) if np.ndim(z) else complex(out[0])

    def derivative_at_w(self, w):
        """``S'(P(w)) = (S o P)'(w) / P'(w)``."""
        return self.as_w_rational.derivative()(w) / self.owner.dmap(w)


@dataclass(frozen=True, eq=False)
class QuadratureData:
    """``integral_Omega h dA = sum c * h^(m)(a)`` over ``(a, m, c)`` in ``weights``."""

    nodes: list
    weights: list

    def apply(self, derivs) -> complex:
        """Evaluate the quadrature sum; ``derivs(a, m)`` returns ``h^(m)(a)``."""
        return complex(sum(c * derivs(a, m) for a, m, c in self.weights))

    def apply_poly(self, p: ComplexPoly) -> complex:
        cache = {}

        def derivs(a, m):
            if m not in cache:
                q = p
                for _ in range(m):
                    q = q.derivative()
                cache[m] = q
            return cache[m](a)

        return self.apply(derivs)

    def to_json(self) -> dict:
        return {
            "nodes": [{"a": [a.real, a.imag], "max_order": int(n)} for a, n in self.nodes],
            "weights": [{"a": [a.real, a.imag], "m": int(m), "c": [c.real, c.imag]} for a, m, c in self.weights],
        }


def _quadrature_data(Q: QuadratureDomain) -> QuadratureData:
    sw = Q.schwarz()
    pf = sw._pf
    nodes, weights = [], []
    for w0, n in sorted(sw.poles_in_disc(), key=lambda t: (t[0].real, t[0].imag)):
        a = complex(Q.map(w0))
        pp = pf.principal_part(w0)
        ptay = Q.map.taylor_at(w0, n)
        dtay = Q.dmap.taylor_at(w0, n)
        shifted = ptay.copy()
        shifted[0] = 0.0
        power = np.zeros(n + 1, dtype=complex)
        power[0] = 1.0
        nodes.append((a, n))
        for m in range(n):
            series = np.convolve(power, dtay)[: n + 1]
            res = sum(pp[j - 1] * series[j - 1] for j in range(1, n + 1))
            weights.append((a, m, complex(math.pi * res / math.factorial(m))))
            power = np.convolve(power, shifted)[: n + 1]
    return QuadratureData(nodes, weights)


# --------------------------------------------------------------------------
# implicitization


@dataclass(frozen=True, eq=False)
class ImplicitCurve:
    """Bivariate polynomial ``Q(z, zbar)``, ``coeffs[i, j]`` on ``z**i zbar**j``."""

    coeffs: np.ndarray
    degree_bounds: tuple = (0, 0)
    interpolation_residual: float = 0.0

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def eval2(self, z, zeta):
        from .circle import bivariate_eval

        return bivariate_eval(self.coeffs, z, zeta)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.eval2(z, np.conj(z))
        return out if np.ndim(out) else complex(out)

    def relative_values(self, z):
        """``|Q(z, conj z)|`` over ``sum |c_ij| |z|**(i+j)``, the rounding-aware size of ``Q`` at ``z``."""
        z = np.asarray(z, dtype=complex)
        r = np.abs(z)
        from .circle import bivariate_eval

        mag = bivariate_eval(np.abs(self.coeffs).astype(complex), r, r).real
        val = np.abs(self(z))
        return np.divide(val, mag, out=np.zeros_like(val), where=mag > 0)

    def to_json(self) -> dict:
        return {
            "coeffs": [[[float(c.real), float(c.imag)] for c in row] for row in self.coeffs],
            "var_order": "z,zbar",
        }

    @classmethod
    def from_json(cls, obj) -> ImplicitCurve:
        c = np.array([[complex(re, im) for re, im in row] for row in obj["coeffs"]], dtype=complex)
        return cls(c, (c.shape[0] - 1, c.shape[1] - 1))


def sylvester(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Sylvester matrix of two polynomials given by ascending coefficients."""
    m, n = len(a) - 1, len(b) - 1
    S = np.zeros((m + n, m + n), dtype=complex)
    for i in range(n):
        S[i, i : i + m + 1] = a[::-1]
    for i in range(m):
        S[n + i, i : i + n + 1] = b[::-1]
    return S


def _resultant_at(Pc: np.ndarray, Pstar: np.ndarray, z: complex, zeta: complex) -> complex:
    d = len(Pc) - 1
    a = Pc.copy()
    a[0] -= z
    b = -Pstar.copy()
    b[d] += zeta
    return complex(np.linalg.det(sylvester(a, b)))


def _interpolate_resultant(Pc, Pstar, d, rho):
    n = d + 1
    omega = np.exp(2j * np.pi * np.arange(n) / n)
    V = np.array([[_resultant_at(Pc, Pstar, rho * zk, rho * zl) for zl in omega] for zk in omega])
    powers = rho ** np.arange(n)
    return np.fft.fft2(V) / (n * n) / powers[:, None] / powers[None, :]


def implicitize(Q: QuadratureDomain, check_points: int = 8, rtol: float = 1e-8) -> ImplicitCurve:
    """``Res_w(P(w) - z, zbar w**d - w**d conj(P)(1/w))`` for polynomial ``P``.

    Evaluated on a ``(d+1) x (d+1)`` grid of scaled roots of unity and
    interpolated by a 2-D DFT; the degree bound is confirmed at extra points.
    The grid radius is picked from a few candidates by the boundary residual,
    since a radius far above 1 loses digits in the low-order coefficients.
    """
    from .circle import bivariate_eval

    if not Q.is_polynomial:
        raise DomainError("implicitize requires a polynomial map")
    P = Q.map.num * (1 / Q.map.den.leading)
    d = P.degree
    Pc = np.asarray(P.coeffs, dtype=complex)
    Pstar = P.conj().reversed(d).coeffs
    Pstar = np.concatenate([Pstar, np.zeros(d + 1 - len(Pstar), dtype=complex)])
    _, wb = unit_samples(64, np.pi / 64)
    zb = Q.map(wb)
    best = None
    for rho in sorted({1.0, 0.5, math.sqrt(Q.scale), Q.scale}):
        coeffs = _interpolate_resultant(Pc, Pstar, d, rho)
        score = float(np.max(ImplicitCurve(coeffs).relative_values(zb)))
        if best is None or score < best[0]:
            best = (score, rho, coeffs)
    _, rho, coeffs = best
    rng = np.random.default_rng(12345)
    test = rho * (rng.uniform(-1.5, 1.5, (check_points, 2)) + 1j * rng.uniform(-1.5, 1.5, (check_points, 2)))
    exact = np.array([_resultant_at(Pc, Pstar, t[0], t[1]) for t in test])
    approx = bivariate_eval(coeffs, test[:, 0], test[:, 1])
    resid = float(np.max(np.abs(exact - approx)) / max(np.max(np.abs(exact)), 1e-300))
    if resid > rtol:
        raise DegreeBoundError(f"resultant interpolation residual {resid:.2e} exceeds {rtol:.0e}")
    top = coeffs[d, d]
    big = np.max(np.abs(coeffs))
    norm = top if abs(top) > 1e-8 * big else coeffs.flat[np.argmax(np.abs(coeffs))]
    coeffs = coeffs / norm
    coeffs[np.abs(coeffs) < 1e-14 * np.max(np.abs(coeffs))] = 0
    return ImplicitCurve(coeffs, (d, d), resid)


# --------------------------------------------------------------------------
# reflection and the boundary description


def reflect_coordinate(w):
    """Disc-coordinate reflection ``w -> 1/conj(w)``, exchanging 0 and INFINITY."""
    if w is INFINITY:
        return 0j
    if abs(w) < 1e-14:
        return INFINITY
    return 1 / np.conj(complex(w))


def reflect(Q: QuadratureDomain, a: complex):
    """Disc coordinate of the reflection of the interior point ``a`` in the double."""
    alpha = Q.inverse_map(a)
    if abs(alpha) >= 1 - BOUNDARY_TOL:
        raise DomainError("reflect requires an interior point")
    return reflect_coordinate(alpha)


@dataclass(frozen=True, eq=False)
class BoundaryDescription:
    """The curve as ``1/(zbar - conj a) - conj(k2(z)) = A/(z - a) + c + k1(z)``."""

    a: complex
    A: complex
    c: complex
    k1: list
    k2: list
    equation: str
    residual: float
    cleared: np.ndarray | None = None

    def to_json(self) -> dict:
        out = {
            "a": [self.a.real, self.a.imag],
            "A": [self.A.real, self.A.imag],
            "c": [self.c.real, self.c.imag],
            "k1": [t.to_json() for t in self.k1],
            "k2": [t.to_json() for t in self.k2],
            "equation": self.equation,
            "residual": self.residual,
        }
        if self.cleared is not None:
            out["cleared"] = ImplicitCurve(self.cleared).to_json()
        return out


def _fmt(c: complex) -> str:
    return f"({c.real:.12g}{c.imag:+.12g}i)"


def boundary_description(Q: QuadratureDomain, a_boundary: complex, samples: int = 256) -> BoundaryDescription:
    from . import decomp
    from .circle import BivariateRational

    a = complex(a_boundary)
    alpha = complex(Q.inverse_map(a, tol=1e-8))
    if abs(abs(alpha) - 1) > 1e-8:
        raise DomainError(f"{a} is not on the boundary (|w| = {abs(alpha):.3g})")
    alpha = alpha / abs(alpha)
    a = complex(Q.map(alpha))
    sprime = complex(Q.schwarz().derivative_at_w(alpha))
    if abs(sprime) < 1e-12:
        raise DegenerateBoundaryPointError("S'(a) vanishes")
    A = 1 / sprime
    ab = np.conj(a)
    num = np.array([[-a + A * ab, -A], [1, 0]], dtype=complex)
    den = np.array([[a * ab, -a], [-ab, 1]], dtype=complex)
    R = BivariateRational(num, den)
    d = decomp.convert(decomp.decompose(Q, R), "k_kbar")
    theta, w = unit_samples(samples, 0.0)
    z = Q.map(w)
    keep = np.abs(w - alpha) > 1e-9
    w, z = w[keep], z[keep]
    if np.max(np.abs(R(z))) < 1e-12 * R.scale:
        raise QuaddecError("boundary function vanishes identically; the boundary would be a line")
    k1 = decomp.eval_terms_w(Q, d.first, w)
    k2 = decomp.eval_terms_w(Q, d.second, w)
    lhs = 1 / (np.conj(z) - ab) - np.conj(k2)
    rhs = A / (z - a) + d.constant + k1
    resid = float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(lhs))))
    eq = (
        f"1/(zbar - conj{_fmt(a)}) - conj(k2(z)) = {_fmt(A)}/(z - {_fmt(a)}) + {_fmt(d.constant)} + k1(z)"
        f"   with k1 = {decomp.render_terms(d.first)}, k2 = {decomp.render_terms(d.second)}"
    )
    cleared = _cleared_equation(Q, a, A, d) if Q.is_polynomial and Q.degree == 1 else None
    return BoundaryDescription(a, A, complex(d.constant), list(d.first), list(d.second), eq, resid, cleared)


def _cleared_equation(Q, a, A, d) -> np.ndarray:
    """Clear denominators when the map is affine, so the k-terms are rational in z."""
    from . import decomp
    from .circle import _add2, _conv2

    p0, p1 = Q.map.num.coeffs[0] / Q.map.den.leading, Q.map.num.coeffs[1] / Q.map.den.leading
    to_w = RationalFunction(ComplexPoly([-p0 / p1, 1 / p1]))
    k1 = decomp.terms_as_rational(Q, d.first).compose(to_w)
    k2 = decomp.terms_as_rational(Q, d.second).compose(to_w)
    right = RationalFunction(ComplexPoly([A])) / RationalFunction(ComplexPoly([-a, 1])) + d.constant + k1
    left = RationalFunction(ComplexPoly([1])) / RationalFunction(ComplexPoly([-np.conj(a), 1])) - k2.conj()
    left, right = left.normalized(), right.normalized()
    # left(zbar) * right_den(z) - right_num(z) * left_den(zbar)
    term1 = _conv2(left.num.coeffs[None, :], right.den.coeffs[:, None])
    term2 = _conv2(right.num.coeffs[:, None], left.den.coeffs[None, :])
    out = _add2(term1, -term2)
    big = np.max(np.abs(out))
    dd = min(out.shape) - 1
    top = out[dd, dd] if dd >= 0 else 0
    out = out / (top if abs(top) > 1e-8 * big else out.flat[np.argmax(np.abs(out))])
    out[np.abs(out) < 1e-13] = 0
    return out


# --------------------------------------------------------------------------
# invariant suite


def area_integral(Q: QuadratureDomain, h, n_radial: int = 64, n_angular: int = 256) -> complex:
    """``integral_Omega h dA`` as ``integral_D h(P) |P'|**2`` on a polar Gauss-Legendre x trapezoid grid."""
    x, wt = np.polynomial.legendre.leggauss(n_radial)
    r = 0.5 * (x + 1)
    wr = 0.5 * wt
    theta, e = unit_samples(n_angular)
    w = r[:, None] * e[None, :]
    vals = h(Q.map(w)) * np.abs(Q.dmap(w)) ** 2 * r[:, None]
    return complex(np.sum(vals * wr[:, None]) * 2 * np.pi / n_angular)


def invariant_suite(Q: QuadratureDomain, samples: int = 256, max_power: int = 5, implicit: bool = True) -> dict:
    """Max residuals of the domain invariants, each with its pass gate."""
    _, w = unit_samples(samples, 0.0123)
    z = Q.map(w)
    rep: dict = {"valid": bool(Q.diagnostics.get("valid", False))}
    rep["schwarz_boundary"] = float(np.max(np.abs(Q.schwarz_w(w) - np.conj(z))) / max(1.0, Q.scale))
    T = Q.tangent_w(w)
    rep["tangent_squared"] = float(np.max(np.abs(T**2 - Q.tangent_squared_rational(w))))
    poles = Q.schwarz().poles_in_disc()
    if Q.is_polynomial:
        rep["pole_structure"] = len(poles) == 1 and abs(poles[0][0]) < 1e-9 and poles[0][1] == Q.degree
    data = Q.quadrature_data()
    b = Q.base
    qerr = 0.0
    n_rad = max(32, 2 * Q.degree * (max_power + 2))
    for k in range(max_power + 1):
        p = ComplexPoly([-b, 1]) ** k
        exact = area_integral(Q, p, n_rad, max(256, 4 * n_rad))
        qerr = max(qerr, abs(data.apply_poly(p) - exact) / max(abs(exact), Q.scale ** (k + 2)))
    rep["quadrature"] = float(qerr)
    if implicit and Q.is_polynomial:
        try:
            curve = implicitize(Q)
            rep["implicit_boundary"] = float(np.max(curve.relative_values(z)))
            rep["implicit_base"] = float(curve.relative_values(b))
            rep["implicit_exterior"] = float(curve.relative_values(b + 5 * Q.scale * (1 + 1j)))
        except DegreeBoundError as exc:
            rep["implicit_error"] = str(exc)
    gates = {
        "schwarz_boundary": lambda v: v < 1e-10,
        "tangent_squared": lambda v: v < 1e-12,
        "pole_structure": bool,
        "quadrature": lambda v: v < 1e-6,
        "implicit_boundary": lambda v: v < 1e-8,
        "implicit_base": lambda v: v > 1e-6,
        "implicit_exterior": lambda v: v > 1e-6,
        "valid": bool,
    }
    rep["failed"] = [k for k, gate in gates.items() if k in rep and not gate(rep[k])]
    if "implicit_error" in rep:
        rep["failed"].append("implicit_error")
    rep["ok"] = not rep["failed"]
    return rep
