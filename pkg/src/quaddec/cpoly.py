"""Univariate complex polynomials and rational functions.

Coefficients are stored in ascending degree order as complex128 arrays.
Root finding uses Aberth-Ehrlich simultaneous iteration; residues at
(possibly multiple) poles are extracted with discrete Cauchy integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

NEG_INF = float("-inf")
_EPS = np.finfo(float).eps


def _as_coeffs(c) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(c, dtype=complex)).ravel()
    nz = np.flatnonzero(arr)
    if nz.size == 0:
        out = np.zeros(1, dtype=complex)
    else:
        out = arr[: nz[-1] + 1].copy()
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class ComplexPoly:
    """Polynomial with complex coefficients, ``coeffs[k]`` multiplies ``z**k``."""

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _as_coeffs(self.coeffs))

    @classmethod
    def constant(cls, c) -> ComplexPoly:
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1.0) -> ComplexPoly:
        out = np.zeros(k + 1, dtype=complex)
        out[k] = c
        return cls(out)

    @classmethod
    def from_roots(cls, roots, leading=1.0) -> ComplexPoly:
        p = cls([leading])
        for r in roots:
            p = p * cls([-r, 1.0])
        return p

    @property
    def degree(self):
        """Index of the last nonzero coefficient, ``-inf`` for the zero polynomial."""
        if self.is_zero:
            return NEG_INF
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coeffs) == 1 and self.coeffs[0] == 0

    @property
    def leading(self) -> complex:
        return complex(self.coeffs[-1])

    @property
    def scale(self) -> float:
        return float(np.max(np.abs(self.coeffs)))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.full(z.shape, self.coeffs[-1], dtype=complex)
        for c in self.coeffs[-2::-1]:
            acc = acc * z + c
        return acc if acc.ndim else complex(acc)

    def __len__(self):
        return len(self.coeffs)

    def __repr__(self):
        return f"ComplexPoly({np.array2string(self.coeffs, precision=6)})"

    # arithmetic -------------------------------------------------------

    def _lift(self, other) -> ComplexPoly:
        if isinstance(other, ComplexPoly):
            return other
        return ComplexPoly([other])

    def __add__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        other = self._lift(other)
        n = max(len(self), len(other))
        out = np.zeros(n, dtype=complex)
        out[: len(self)] += self.coeffs
        out[: len(other)] += other.coeffs
        return ComplexPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return ComplexPoly(-self.coeffs)

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        other = self._lift(other)
        return ComplexPoly(np.convolve(self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise DomainError("negative polynomial power")
        out = ComplexPoly([1.0])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __divmod__(self, other):
        other = self._lift(other)
        if other.is_zero:
            raise DomainError("polynomial division by zero")
        num = self.coeffs.copy()
        den = other.coeffs
        dn = len(den) - 1
        if len(num) - 1 < dn:
            return ComplexPoly([0]), ComplexPoly(num)
        quot = np.zeros(len(num) - dn, dtype=complex)
        lead = den[-1]
        for k in range(len(num) - 1, dn - 1, -1):
            q = num[k] / lead
            quot[k - dn] = q
            num[k - dn : k + 1] -= q * den
        return ComplexPoly(quot), ComplexPoly(num[:dn] if dn else [0])

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def derivative(self) -> ComplexPoly:
        if len(self) == 1:
            return ComplexPoly([0])
        return ComplexPoly(self.coeffs[1:] * np.arange(1, len(self)))

    def antiderivative(self) -> ComplexPoly:
        """Antiderivative with zero constant term."""
        if self.is_zero:
            return ComplexPoly([0])
        out = np.zeros(len(self) + 1, dtype=complex)
        out[1:] = self.coeffs / np.arange(1, len(self) + 1)
        return ComplexPoly(out)

    def conj(self) -> ComplexPoly:
        """Coefficient-wise conjugate, so ``p.conj()(z) == conj(p(conj(z)))``."""
        return ComplexPoly(np.conj(self.coeffs))

    def reversed(self, n: int | None = None) -> ComplexPoly:
        """``z**n * p(1/z)`` for ``n >= degree`` (default: the degree)."""
        if n is None:
            n = len(self) - 1
        if n < len(self) - 1:
            raise DomainError("reversal length below degree")
        out = np.zeros(n + 1, dtype=complex)
        out[: len(self)] = self.coeffs
        return ComplexPoly(out[::-1])

    def shift(self, k: int) -> ComplexPoly:
        """Multiply by ``z**k``."""
        return ComplexPoly(np.concatenate([np.zeros(k, dtype=complex), self.coeffs]))

    def taylor_at(self, a: complex, order: int | None = None) -> np.ndarray:
        """Coefficients of ``p(a + t)`` in ``t``."""
        c = self.coeffs.copy()
        n = len(c)
        # repeated synthetic division
        out = np.zeros(n, dtype=complex)
        for k in range(n):
            acc = 0j
            for j in range(n - 1, k - 1, -1):
                acc = acc * a + c[j]
                c[j] = acc
            out[k] = c[k]
        if order is not None:
            res = np.zeros(order + 1, dtype=complex)
            m = min(order + 1, n)
            res[:m] = out[:m]
            return res
        return out

    def to_json(self) -> dict:
        return {"coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> ComplexPoly:
        return cls([complex(re, im) for re, im in obj["coeffs"]])


# --------------------------------------------------------------------------
# roots


def _horner_with_derivative(a, z):
    p = np.full(z.shape, a[-1], dtype=complex)
    dp = np.zeros(z.shape, dtype=complex)
    with np.errstate(over="ignore", invalid="ignore"):
        for c in a[-2::-1]:
            dp = dp * z + p
            p = p * z + c
    return p, dp


def _backward_bound(a, z):
    absa = np.abs(a)
    az = np.abs(z)
    acc = np.full(z.shape, absa[-1])
    with np.errstate(over="ignore"):
        for c in absa[-2::-1]:
            acc = acc * az + c
    return acc


def _aberth(a, seed, maxiter):
    n = len(a) - 1
    a = a / a[-1]
    if a[0] != 0:
        radius = abs(a[0]) ** (1.0 / n)
    else:
        radius = max(np.max(np.abs(a[:-1])) ** (1.0 / n), 0.5)
    rng = np.random.default_rng(seed)
    offset = 0.4 if seed is None else rng.uniform(0, 2 * np.pi)
    angles = 2 * np.pi * np.arange(n) / n + offset
    z = radius * np.exp(1j * angles)
    if seed is not None:
        z *= 1 + 0.05 * rng.standard_normal(n)
    done = np.zeros(n, dtype=bool)
    for _ in range(maxiter):
        p, dp = _horner_with_derivative(a, z)
        done = np.abs(p) <= 4 * n * _EPS * _backward_bound(a, z)
        if done.all():
            return z, True
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.sum(1.0 / diff, axis=1)
            ratio = p / dp
            corr = ratio / (1 - ratio * s)
        bad = ~np.isfinite(corr)
        corr[bad] = 1e-3 * (1 + np.abs(z[bad]))
        corr[done] = 0
        z = z - corr
    return z, False


def _newton_polish(a, z, steps=3):
    for _ in range(steps):
        p, dp = _horner_with_derivative(a, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = z - p / dp
        pc, _ = _horner_with_derivative(a, cand)
        ok = np.isfinite(cand) & (np.abs(pc) < np.abs(p))
        z = np.where(ok, cand, z)
    return z


def _cluster(a, z, tol):
    """Group approximate roots into clusters via inclusion disks and a relative floor radius."""
    n = len(z)
    monic = a / a[-1]
    p, _ = _horner_with_derivative(monic, z)
    floor = 4 * n * _EPS * _backward_bound(monic, z)
    diff = z[:, None] - z[None, :]
    np.fill_diagonal(diff, 1.0)
    prod = np.prod(np.abs(diff), axis=1)
    with np.errstate(divide="ignore", invalid="ignore"):
        incl = n * np.maximum(np.abs(p), floor) / prod
    incl = np.where(np.isfinite(incl), incl, np.inf)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            d = abs(z[i] - z[j])
            radius = max(1e-8, tol * max(1.0, abs(z[i]), abs(z[j])))
            if d < radius or d < 2 * (incl[i] + incl[j]) and d < 1e-2 * (1 + abs(z[i])):
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _refine_multiple(poly: ComplexPoly, center: complex, mult: int, spread: float) -> complex:
    d = poly
    for _ in range(mult - 1):
        d = d.derivative()
    dd = d.derivative()
    c = center
    for _ in range(4):
        denom = dd(c)
        if denom == 0:
            break
        step = d(c) / denom
        if not np.isfinite(step) or abs(c - step - center) > max(spread, 1e-12 * (1 + abs(center))) * 4:
            break
        c = c - step
    return complex(c)


def roots(p: ComplexPoly, tol: float = 1e-10, seed: int | None = None, maxiter: int | None = None):
    """Roots of ``p`` with multiplicities as ``[(root, multiplicity), ...]``.

    Approximate roots whose Aberth inclusion disks overlap, or that lie closer
    than ``max(1e-8, tol * max(1, |z_i|, |z_j|))``, are merged into one root at the cluster
    centroid with the summed multiplicity.
    """
    if not isinstance(p, ComplexPoly):
        p = ComplexPoly(p)
    if p.is_zero or p.degree < 1:
        raise DomainError("roots requires a nonzero polynomial of degree >= 1")
    a = p.coeffs
    # exact zero roots from vanishing low-order coefficients
    nz = int(np.flatnonzero(a)[0])
    out = [(0j, nz)] if nz else []
    a = a[nz:]
    n = len(a) - 1
    if n == 0:
        return out
    if n == 1:
        out.append((complex(-a[0] / a[1]), 1))
        return _merge_zero(out, 1e-8)
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        z, ok = _aberth(a, seed, maxiter or (200 + 20 * n))
        if ok:
            z = _newton_polish(a / a[-1], z)
        if not ok or not np.all(np.isfinite(z)):
            z = _eig_roots(a)
    red = ComplexPoly(a)
    for grp in _cluster(a, z, tol):
        pts = z[grp]
        center = complex(np.mean(pts))
        m = len(grp)
        if m > 1:
            spread = float(np.max(np.abs(pts - center)))
            center = _refine_multiple(red, center, m, spread)
        out.append((center, m))
    return _merge_zero(out, 1e-8)


def _merge_zero(items, radius):
    # an underflowed constant term splits a tiny cluster into "exact zero" plus neighbours
    if not items or items[0][0] != 0 or items[0][1] == 0:
        return _sorted(items)
    m0 = items[0][1]
    rest = []
    for r, m in items[1:]:
        if abs(r) < radius:
            m0 += m
        else:
            rest.append((r, m))
    return _sorted([(0j, m0)] + rest)


def _sorted(items):
    return sorted(items, key=lambda rm: (round(rm[0].real, 12), round(rm[0].imag, 12)))


def _eig_roots(a):
    comp = _companion(a)
    if np.all(np.isfinite(comp)):
        z = np.linalg.eigvals(comp)
        if np.all(np.isfinite(z)):
            return _newton_polish(a / a[-1], z)
    # a tiny leading coefficient sends roots towards infinity: invert the reversed polynomial
    r = np.linalg.eigvals(_companion(a[::-1]))
    return 1 / r


def _companion(a):
    n = len(a) - 1
    c = np.zeros((n, n), dtype=complex)
    c[1:, :-1] = np.eye(n - 1)
    c[:, -1] = -a[:-1] / a[-1]
    return c


def companion_roots(p: ComplexPoly) -> np.ndarray:
    """Plain companion-matrix eigenvalues (no clustering); used as an oracle."""
    return np.linalg.eigvals(_companion(p.coeffs))


# --------------------------------------------------------------------------
# rational functions


@dataclass(frozen=True, eq=False)
class RationalFunction:
    num: ComplexPoly
    den: ComplexPoly = field(default_factory=lambda: ComplexPoly([1.0]))

    def __post_init__(self):
        if not isinstance(self.num, ComplexPoly):
            object.__setattr__(self, "num", ComplexPoly(self.num))
        if not isinstance(self.den, ComplexPoly):
            object.__setattr__(self, "den", ComplexPoly(self.den))
        if self.den.is_zero:
            raise DomainError("rational function with zero denominator")

    @classmethod
    def constant(cls, c) -> RationalFunction:
        return cls(ComplexPoly([c]))

    @classmethod
    def identity(cls) -> RationalFunction:
        return cls(ComplexPoly([0, 1]))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def degree(self) -> int:
        """Max of numerator and denominator degrees (0 for constants)."""
        return int(max(0, self.num.degree, self.den.degree))

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __call__(self, z):
        return self.num(z) / self.den(z)

    def __repr__(self):
        return f"RationalFunction(num={self.num!r}, den={self.den!r})"

    def _lift(self, other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, ComplexPoly):
            return RationalFunction(other)
        return RationalFunction.constant(other)

    def __add__(self, other):
        return arith(self, self._lift(other), "add")

    __radd__ = __add__

    def __sub__(self, other):
        return arith(self, self._lift(other), "sub")

    def __rsub__(self, other):
        return arith(self._lift(other), self, "sub")

    def __mul__(self, other):
        return arith(self, self._lift(other), "mul")

    __rmul__ = __mul__

    def __truediv__(self, other):
        return arith(self, self._lift(other), "div")

    def __rtruediv__(self, other):
        return arith(self._lift(other), self, "div")

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __pow__(self, k: int):
        if k >= 0:
            return RationalFunction(self.num**k, self.den**k)
        return RationalFunction(self.den ** (-k), self.num ** (-k))

    def derivative(self) -> RationalFunction:
        return derivative(self)

    def conj(self) -> RationalFunction:
        """Coefficient conjugate: ``r.conj()(z) == conj(r(conj(z)))``."""
        return RationalFunction(self.num.conj(), self.den.conj())

    def at_inverse(self) -> RationalFunction:
        """The rational function ``z -> r(1/z)`` as a polynomial quotient."""
        e = max(len(self.num), len(self.den)) - 1
        return RationalFunction(self.num.reversed(e), self.den.reversed(e))

    def compose(self, inner: RationalFunction) -> RationalFunction:
        """``self(inner(z))`` without cancellation."""
        inner = self._lift(inner)
        e = max(len(self.num), len(self.den)) - 1
        n_pows = [ComplexPoly([1.0])]
        d_pows = [ComplexPoly([1.0])]
        for _ in range(e):
            n_pows.append(n_pows[-1] * inner.num)
            d_pows.append(d_pows[-1] * inner.den)

        def hom(p):
            acc = ComplexPoly([0])
            for k, c in enumerate(p.coeffs):
                acc = acc + c * n_pows[k] * d_pows[e - k]
            return acc

        return RationalFunction(hom(self.num), hom(self.den))

    def normalized(self, tol: float = 1e-10, seed: int | None = None) -> RationalFunction:
        """Cancel common roots and make the denominator monic."""
        if self.num.is_zero:
            return RationalFunction(ComplexPoly([0]), ComplexPoly([1]))
        if self.den.degree == 0:
            return RationalFunction(self.num * (1 / self.den.leading), ComplexPoly([1]))
        return partial_fractions(self, tol=tol, seed=seed).to_rational()

    def taylor_at(self, a: complex, order: int) -> np.ndarray:
        """Taylor coefficients of ``r(a + t)`` up to ``t**order``; ``a`` must not be a pole."""
        n = self.num.taylor_at(a, order)
        d = self.den.taylor_at(a, order)
        if d[0] == 0:
            raise DomainError("taylor_at called at a pole")
        return series_div(n, d)

    def to_json(self) -> dict:
        return {"num": self.num.to_json(), "den": self.den.to_json()}

    @classmethod
    def from_json(cls, obj) -> RationalFunction:
        return cls(ComplexPoly.from_json(obj["num"]), ComplexPoly.from_json(obj["den"]))


def series_div(n: np.ndarray, d: np.ndarray) -> np.ndarray:
    """Truncated power-series quotient ``n / d`` (same length as ``n``)."""
    m = len(n)
    d = np.concatenate([d, np.zeros(max(0, m - len(d)), dtype=complex)])
    out = np.zeros(m, dtype=complex)
    for k in range(m):
        acc = n[k] - np.dot(d[1 : k + 1][::-1], out[:k]) if k else n[k]
        out[k] = acc / d[0]
    return out


def arith(a: RationalFunction, b: RationalFunction, op: str) -> RationalFunction:
    """``add``, ``sub``, ``mul`` or ``div`` of two rational functions (no cancellation)."""
    if op == "add":
        if a.den.degree == 0 and b.den.degree == 0:
            return RationalFunction(a.num * (1 / a.den.leading) + b.num * (1 / b.den.leading))
        return RationalFunction(a.num * b.den + b.num * a.den, a.den * b.den)
    if op == "sub":
        return arith(a, -b, "add")
    if op == "mul":
        return RationalFunction(a.num * b.num, a.den * b.den)
    if op == "div":
        if b.num.is_zero:
            raise DomainError("division by the zero rational function")
        return RationalFunction(a.num * b.den, a.den * b.num)
    raise ValueError(f"unknown op {op!r}")


def derivative(r: RationalFunction) -> RationalFunction:
    if r.den.degree == 0:
        return RationalFunction(r.num.derivative() * (1 / r.den.leading))
    return RationalFunction(r.num.derivative() * r.den - r.num * r.den.derivative(), r.den * r.den)


def antiderivative(p: ComplexPoly) -> ComplexPoly:
    return p.antiderivative()


def eval_rational(r: RationalFunction, z):
    return r(z)


def conj_reflect(r: RationalFunction) -> RationalFunction:
    """``s(w) = conj(r(1/conj(w)))``; agrees with ``conj(r)`` on the unit circle."""
    return r.conj().at_inverse().normalized()


# --------------------------------------------------------------------------
# partial fractions


@dataclass(frozen=True, eq=False)
class PartialFractions:
    """``poly_part(z) + sum(coeff * (z - pole)**(-order))``."""

    poly_part: ComplexPoly
    terms: list = field(default_factory=list)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.asarray(self.poly_part(z), dtype=complex)
        for pole, order, coeff in self.terms:
            acc = acc + coeff * (z - pole) ** (-order)
        return acc if acc.ndim else complex(acc)

    def poles(self) -> dict:
        out: dict = {}
        for pole, order, _ in self.terms:
            out[pole] = max(out.get(pole, 0), order)
        return out

    def principal_part(self, pole) -> np.ndarray:
        """Coefficients ``[c_1, ..., c_n]`` of ``(z - pole)**(-k)``."""
        n = self.poles()[pole]
        out = np.zeros(n, dtype=complex)
        for p, order, coeff in self.terms:
            if p == pole:
                out[order - 1] += coeff
        return out

    def to_rational(self) -> RationalFunction:
        poles = self.poles()
        den = ComplexPoly([1.0])
        for pole, order in poles.items():
            den = den * ComplexPoly([-pole, 1.0]) ** order
        num = self.poly_part * den
        for pole, order, coeff in self.terms:
            rest = ComplexPoly([1.0])
            for q, o in poles.items():
                rest = rest * ComplexPoly([-q, 1.0]) ** (o - order if q == pole else o)
            num = num + coeff * rest
        return RationalFunction(num, den)


def laurent_principal(func, center: complex, order: int, rho: float, npts: int = 128):
    """Principal-part coefficients ``c_1..c_order`` of ``func`` at ``center``.

    Trapezoidal Cauchy integrals on the circle ``|z - center| = rho``, which must
    enclose no other singularity. Also returns the sup of ``|func|`` on the circle.
    """
    theta = 2 * np.pi * np.arange(npts) / npts
    e = rho * np.exp(1j * theta)
    vals = func(center + e)
    coeffs = np.array([np.mean(vals * e**j) for j in range(1, order + 1)], dtype=complex)
    return coeffs, float(np.max(np.abs(vals)))


def partial_fractions(
    r: RationalFunction, tol: float = 1e-10, seed: int | None = None, drop_tol: float = 1e-10
) -> PartialFractions:
    """Partial-fraction expansion of ``r``.

    Candidate poles come from the denominator roots; their principal parts
    are measured directly, so common numerator/denominator factors show up as
    vanishing principal parts and are dropped (relative threshold ``drop_tol``).
    """
    quot, rem = divmod(r.num, r.den)
    if r.den.degree == 0 or rem.is_zero:
        return PartialFractions(quot, [])
    proper = RationalFunction(rem, r.den)
    cands = roots(r.den, tol=tol, seed=seed)
    pts = np.array([c for c, _ in cands])
    terms = []
    for i, (pole, mult) in enumerate(cands):
        others = np.delete(pts, i)
        if others.size:
            rho = 0.5 * float(np.min(np.abs(others - pole)))
        else:
            rho = 0.5 * max(1.0, abs(pole))
        coeffs, sup = laurent_principal(proper, pole, mult, rho)
        mags = np.abs(coeffs) * rho ** -np.arange(1, mult + 1, dtype=float)
        keep = np.flatnonzero(mags > drop_tol * max(sup, 1e-300))
        if keep.size == 0:
            continue
        for k in keep + 1:
            terms.append((complex(pole), int(k), complex(coeffs[k - 1])))
    return PartialFractions(quot, terms)


def residue(r: RationalFunction, pole: complex, order: int, rho: float | None = None) -> complex:
    """Residue of ``r`` at ``pole`` given an upper bound on the pole order."""
    if rho is None:
        rho = 1e-3 * max(1.0, abs(pole))
    coeffs, _ = laurent_principal(r, pole, order, rho)
    return complex(coeffs[0])
