"""Decompositions of boundary data on a quadrature domain into kernel families.

Everything is done in the disc coordinate ``w``. The boundary function
``R(z, conj z)`` becomes ``M(w) = R(P(w), conj(P)(1/w))``, a rational
function on the sphere. Poles of ``M`` inside the disc are matched by
``lambda_a^m`` terms; poles outside (``w = infinity`` included) by ``k_a^m``
terms with base point at the reflected position. What is left is constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .circle import BivariateRational
from .cpoly import ComplexPoly, PartialFractions, RationalFunction, partial_fractions
from .errors import ConfigError, IllConditionedPoleError, NotInRSError, QuaddecError
from .kernels import (
    MAX_ORDER,
    KernelTerm,
    k_lower_coeffs,
    k_lower_rational,
    lambda_lower_coeffs,
    lambda_lower_rational,
)
from .qdomain import QuadratureDomain, unit_samples

FORMS = ("k_lambda", "k_kbar", "lambda_lambdabar")
RS_GATE = 1e-8
COND_LIMIT = 1e12


# --------------------------------------------------------------------------
# extension to the double


def _extend(Q: QuadratureDomain, R: BivariateRational, seed=None) -> tuple[RationalFunction, PartialFractions]:
    _, w = unit_samples(128, 0.1234)
    R.check_nondegenerate(Q.map(w))
    raw = R.substitute(Q.map, Q.schwarz_w)
    if raw.num.is_zero:
        return RationalFunction.constant(0), PartialFractions(ComplexPoly([0]), [])
    pf = partial_fractions(raw, seed=seed)
    for pole in pf.poles():
        if abs(abs(pole) - 1) < RS_GATE:
            raise NotInRSError(f"data has a pole on the boundary (disc coordinate {pole:.6g})")
    return pf.to_rational(), pf


def extend_to_double(Q: QuadratureDomain, R: BivariateRational, seed=None) -> RationalFunction:
    """``M(w) = R(P(w), conj(P)(1/w))``, the meromorphic extension of the data to the double."""
    return _extend(Q, R, seed)[0]


# --------------------------------------------------------------------------
# term helpers


def _terms_sum_w(Q, terms, w):
    w = np.asarray(w, dtype=complex)
    acc = np.zeros(w.shape, dtype=complex)
    for t in terms:
        acc = acc + t.eval_w(Q, w)
    return acc


def eval_terms_w(Q: QuadratureDomain, terms, w):
    """Sum of kernel terms at disc coordinates ``w`` (no conjugation)."""
    return _terms_sum_w(Q, terms, w)


def terms_as_rational(Q: QuadratureDomain, terms) -> RationalFunction:
    """The sum of ``k_lower`` / ``lambda_lower`` terms as a rational function of ``w``."""
    out = RationalFunction.constant(0)
    for t in terms:
        alpha = t.disc_point(Q)
        if t.kind == "k_lower":
            out = out + t.coeff * k_lower_rational(Q, alpha, t.m)
        elif t.kind == "lambda_lower":
            out = out + t.coeff * lambda_lower_rational(Q, alpha, t.m)
        else:
            raise ConfigError(f"{t.kind} terms have no rational form here")
    return out


def render_terms(terms) -> str:
    if not terms:
        return "0"
    sym = {"k_lower": "k", "lambda_lower": "lambda", "K": "K", "Lambda": "Lambda"}
    parts = []
    for t in terms:
        c, a = t.coeff, t.a
        parts.append(f"({c.real:.12g}{c.imag:+.12g}i)*{sym[t.kind]}[a=({a.real:.12g}{a.imag:+.12g}i), m={t.m}]")
    return " + ".join(parts)


def _order_key(t: KernelTerm):
    return (t.kind, round(t.a.real, 12), round(t.a.imag, 12), t.m)


# --------------------------------------------------------------------------
# the decomposition value


@dataclass(frozen=True, eq=False)
class Decomposition:
    """``constant + sum(first) + sum(second)``, conjugating ``second`` except in ``k_lambda`` form.

    ``k_lambda``: first = k terms, second = lambda terms (both meromorphic on
    the double; the sum equals ``M``). ``k_kbar``: both lists hold k terms.
    ``lambda_lambdabar``: both lists hold lambda terms.
    """

    form: str
    constant: complex
    first: list = field(default_factory=list)
    second: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.form not in FORMS:
            raise ConfigError(f"unknown decomposition form {self.form!r}")

    @property
    def k_terms(self) -> list:
        return [t for t in self.first + self.second if t.kind == "k_lower"]

    @property
    def lambda_terms(self) -> list:
        return [t for t in self.first + self.second if t.kind == "lambda_lower"]

    @property
    def conjugates_second(self) -> bool:
        return self.form != "k_lambda"

    def eval_w(self, Q: QuadratureDomain, w):
        w = np.asarray(w, dtype=complex)
        s2 = _terms_sum_w(Q, self.second, w)
        if self.conjugates_second:
            s2 = np.conj(s2)
        return self.constant + _terms_sum_w(Q, self.first, w) + s2

    def __call__(self, Q: QuadratureDomain, z):
        out = self.eval_w(Q, np.asarray(Q.inverse_map(z)))
        return out if np.ndim(out) else complex(out)

    def residual(self, Q: QuadratureDomain, R: BivariateRational, n: int = 256) -> float:
        """Relative sup-error against ``R`` on ``n`` boundary samples."""
        _, w = unit_samples(n, 0.0173)
        ref = R(Q.map(w))
        scale = float(np.max(np.abs(ref))) or 1.0
        return float(np.max(np.abs(self.eval_w(Q, w) - ref)) / scale)

    def to_json(self) -> dict:
        c = complex(self.constant)
        return {
            "form": self.form,
            "constant": [c.real, c.imag],
            "k_terms": [t.to_json() for t in self.first],
            "lambda_terms": [t.to_json() for t in self.second],
        }

    @classmethod
    def from_json(cls, obj) -> Decomposition:
        return cls(
            obj["form"],
            complex(*obj["constant"]),
            [KernelTerm.from_json(t) for t in obj["k_terms"]],
            [KernelTerm.from_json(t) for t in obj["lambda_terms"]],
        )


# --------------------------------------------------------------------------
# principal-part matching


def _solve_triangular(A: np.ndarray, rhs: np.ndarray, where: str) -> np.ndarray:
    cond = float(np.linalg.cond(A))
    if not np.isfinite(cond) or cond > COND_LIMIT:
        raise IllConditionedPoleError(f"matching system at {where} is ill-conditioned (cond {cond:.3g})", cond)
    return np.linalg.solve(A, rhs)


def _lambda_matrix(Q, alpha, n):
    A = np.zeros((n, n), dtype=complex)
    for m in range(n):
        gamma = lambda_lower_coeffs(Q, alpha, m)
        for j in range(1, m + 2):
            A[j - 1, m] = gamma[j - 1] * (-1) ** j
    return A


def _k_matrix(Q, alpha, w0, n):
    A = np.zeros((n, n), dtype=complex)
    for m in range(n):
        beta = k_lower_coeffs(Q, alpha, m)
        for j in range(1, m + 2):
            A[j - 1, m] = sum(beta[k] * (-w0) ** (k + 1) * math.comb(k + 1, j) * w0**j for k in range(j - 1, m + 1))
    return A


def _kb_matrix(Q, n):
    A = np.zeros((n, n), dtype=complex)
    for m in range(n):
        beta = k_lower_coeffs(Q, 0j, m)
        A[: m + 1, m] = beta
    return A


def _check_order(n, where):
    if n > MAX_ORDER + 1:
        raise ConfigError(f"pole of order {n} at {where} exceeds the kernel order limit {MAX_ORDER}")


def decompose(Q: QuadratureDomain, R: BivariateRational, seed=None, tol: float = 1e-8) -> Decomposition:
    """``R = constant + k + lambda`` on the boundary, in ``k_lambda`` form."""
    M, pf = _extend(Q, R, seed)
    k_terms, lam_terms = [], []
    for w0, n in sorted(pf.poles().items(), key=lambda t: (t[0].real, t[0].imag)):
        _check_order(n, w0)
        pp = pf.principal_part(w0)
        if abs(w0) < 1:
            x = _solve_triangular(_lambda_matrix(Q, w0, n), pp, f"w={w0:.6g}")
            a = complex(Q.map(w0))
            lam_terms += [KernelTerm("lambda_lower", a, m, complex(c), w0) for m, c in enumerate(x)]
        else:
            alpha = 1 / np.conj(w0)
            x = _solve_triangular(_k_matrix(Q, alpha, w0, n), pp, f"w={w0:.6g}")
            a = complex(Q.map(alpha))
            k_terms += [KernelTerm("k_lower", a, m, complex(c), alpha) for m, c in enumerate(x)]
    poly = pf.poly_part.coeffs
    if len(poly) > 1:
        n = len(poly) - 1
        _check_order(n, "infinity")
        x = _solve_triangular(_kb_matrix(Q, n), np.asarray(poly[1:], dtype=complex), "w=infinity")
        k_terms += [KernelTerm("k_lower", Q.base, m, complex(c), 0j) for m, c in enumerate(x)]
    k_terms = [t for t in k_terms if t.coeff != 0]
    lam_terms = [t for t in lam_terms if t.coeff != 0]

    # whatever is left over must be a constant on the whole double
    rest = []
    for rad, off in ((0.5, 0.011), (1.0, 0.0), (2.0, 0.023)):
        _, u = unit_samples(64, off)
        u = rad * u
        rest.append(M(u) - _terms_sum_w(Q, k_terms, u) - _terms_sum_w(Q, lam_terms, u))
    const = complex(np.mean(rest[1]))
    allrest = np.concatenate(rest)
    _, u1 = unit_samples(64)
    scale = max(1.0, float(np.max(np.abs(M(u1)))))
    spread = float(np.max(np.abs(allrest - const))) / scale
    if spread > tol:
        raise QuaddecError(f"remainder after matching is not constant (spread {spread:.2e})")
    diag = {"constant_spread": spread, "inside_multiplicity": len(lam_terms), "outside_multiplicity": len(k_terms)}
    return Decomposition("k_lambda", const, k_terms, lam_terms, diag)


# --------------------------------------------------------------------------
# conversions between the three forms


def _flip(t: KernelTerm) -> KernelTerm:
    """On the boundary ``k_a^m = -conj(lambda_a^m)``: swap the kind and map ``c -> -conj(c)``."""
    kind = "k_lower" if t.kind == "lambda_lower" else "lambda_lower"
    return KernelTerm(kind, t.a, t.m, -np.conj(t.coeff), t.alpha)


def _to_k_lambda(d: Decomposition) -> Decomposition:
    if d.form == "k_lambda":
        return d
    if d.form == "k_kbar":
        return Decomposition("k_lambda", d.constant, list(d.first), [_flip(t) for t in d.second], d.diagnostics)
    return Decomposition("k_lambda", d.constant, [_flip(t) for t in d.second], list(d.first), d.diagnostics)


def convert(d: Decomposition, target: str) -> Decomposition:
    """Rewrite ``d`` in ``target`` form using ``k_a^m = -conj(lambda_a^m)`` on the boundary."""
    if target not in FORMS:
        raise ConfigError(f"unknown decomposition form {target!r}")
    base = _to_k_lambda(d)
    if target == "k_lambda":
        return base
    if target == "k_kbar":
        return Decomposition(target, base.constant, list(base.first), [_flip(t) for t in base.second], base.diagnostics)
    return Decomposition(target, base.constant, list(base.second), [_flip(t) for t in base.first], base.diagnostics)


# --------------------------------------------------------------------------
# Dirichlet problem


@dataclass(frozen=True, eq=False)
class DirichletSolution:
    """Harmonic extension ``u = c + k1 + conj(k2)`` of rational boundary data."""

    domain: QuadratureDomain
    decomposition: Decomposition

    def eval_w(self, w):
        return self.decomposition.eval_w(self.domain, w)

    def __call__(self, z):
        w = np.asarray(self.domain.inverse_map(z), dtype=complex)
        out = self.eval_w(w)
        return out if np.ndim(out) else complex(out)


def dirichlet_solve(Q: QuadratureDomain, R: BivariateRational, seed=None) -> DirichletSolution:
    return DirichletSolution(Q, convert(decompose(Q, R, seed=seed), "k_kbar"))


@dataclass(frozen=True, eq=False)
class PoissonReference:
    """Fourier-series harmonic extension of the pulled-back data on the disc."""

    domain: QuadratureDomain
    coeffs: np.ndarray

    def eval_w(self, w):
        w = np.asarray(w, dtype=complex)
        n = len(self.coeffs)
        k = np.fft.fftfreq(n, 1.0 / n).astype(int)
        r, phi = np.abs(w), np.angle(w)
        out = np.zeros(w.shape, dtype=complex)
        for kk, c in zip(k, self.coeffs):
            if c != 0:
                out = out + c * r ** abs(kk) * np.exp(1j * kk * phi)
        return out

    def __call__(self, z):
        out = self.eval_w(np.asarray(self.domain.inverse_map(z), dtype=complex))
        return out if np.ndim(out) else complex(out)


def poisson_reference(Q: QuadratureDomain, R: BivariateRational, n: int = 1024) -> PoissonReference:
    _, w = unit_samples(n)
    c = np.fft.fft(R(Q.map(w))) / n
    c[np.abs(c) < 1e-17 * max(1.0, float(np.max(np.abs(c))))] = 0
    return PoissonReference(Q, c)


# --------------------------------------------------------------------------
# Dirichlet-to-Neumann


@dataclass(frozen=True, eq=False)
class DtnImage:
    """``du/dn = -i kappa1(z) T(z) + i conj(kappa2(z) T(z))`` on the boundary."""

    kappa1: list
    kappa2: list

    def eval_w(self, Q: QuadratureDomain, w):
        w = np.asarray(w, dtype=complex)
        T = Q.tangent_w(w)
        return -1j * _terms_sum_w(Q, self.kappa1, w) * T + 1j * np.conj(_terms_sum_w(Q, self.kappa2, w) * T)

    def coefficients(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            np.array([t.coeff for t in sorted(self.kappa1, key=_order_key)], dtype=complex),
            np.array([t.coeff for t in sorted(self.kappa2, key=_order_key)], dtype=complex),
        )

    def to_json(self) -> dict:
        return {"kappa1": [t.to_json() for t in self.kappa1], "kappa2": [t.to_json() for t in self.kappa2]}


def dtn(Q: QuadratureDomain, R: BivariateRational, seed=None) -> DtnImage:
    """Normal derivative of the harmonic extension, as Bergman-span data times the tangent.

    Differentiating ``c + k1 + conj(k2)`` turns every ``k_a^m`` into ``K_a^m``.
    """
    d = convert(decompose(Q, R, seed=seed), "k_kbar")
    return DtnImage([t.with_kind("K") for t in d.first], [t.with_kind("K") for t in d.second])


def fd_normal_derivative(u, Q: QuadratureDomain, w, h: float = 1e-4):
    """One-sided second-order difference of ``u`` along the outward normal ``-iT``."""
    w = np.asarray(w, dtype=complex)
    z0 = Q.map(w)
    nrm = -1j * Q.tangent_w(w)
    u0, u1, u2 = u(z0), u(z0 - h * nrm), u(z0 - 2 * h * nrm)
    return (3 * u0 - 4 * u1 + u2) / (2 * h)
