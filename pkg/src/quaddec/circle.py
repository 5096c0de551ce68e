"""Rational functions of z and conj(z) restricted to the unit circle.

On ``|z| = 1`` we have ``conj(z) = 1/z``, so every nondegenerate
``R(z, conj z)`` is the restriction of a holomorphic rational function.
Splitting its partial fractions by pole location and reflecting one half
through ``z -> 1/conj(z)`` gives the ``r1(z) + conj(r2(z))`` representations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .cpoly import ComplexPoly, PartialFractions, RationalFunction, conj_reflect, partial_fractions
from .errors import DegenerateDataError, DomainError

FORMS = ("poles_outside", "poles_inside", "holo_restriction", "antiholo_restriction")
BOUNDARY_POLE_TOL = 1e-8
DEGENERATE_TOL = 1e-10


def circle_samples(n: int = 128, offset: float = 0.0) -> np.ndarray:
    return np.exp(1j * (2 * np.pi * np.arange(n) / n + offset))


def _conv2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    out = np.zeros((a.shape[0] + b.shape[0] - 1, a.shape[1] + b.shape[1] - 1), dtype=complex)
    for i, j in zip(*np.nonzero(a)):
        out[i : i + b.shape[0], j : j + b.shape[1]] += a[i, j] * b
    return out


def _trim2(a: np.ndarray) -> np.ndarray:
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    rows = np.flatnonzero(np.any(a != 0, axis=1))
    cols = np.flatnonzero(np.any(a != 0, axis=0))
    if rows.size == 0:
        return np.zeros((1, 1), dtype=complex)
    return a[: rows[-1] + 1, : cols[-1] + 1].copy()


def bivariate_eval(coeffs: np.ndarray, z, zeta):
    """``sum coeffs[i, j] z**i zeta**j`` elementwise over broadcast ``z``, ``zeta``."""
    z = np.asarray(z, dtype=complex)
    zeta = np.asarray(zeta, dtype=complex)
    acc = np.zeros(np.broadcast_shapes(z.shape, zeta.shape), dtype=complex)
    for i in range(coeffs.shape[0] - 1, -1, -1):
        row = np.zeros_like(acc)
        for j in range(coeffs.shape[1] - 1, -1, -1):
            row = row * zeta + coeffs[i, j]
        acc = acc * z + row
    return acc


@dataclass(frozen=True, eq=False)
class BivariateRational:
    """``R(z, zbar) = num(z, zbar) / den(z, zbar)`` with ``num[i, j]`` on ``z**i zbar**j``."""

    num: np.ndarray
    den: np.ndarray = field(default_factory=lambda: np.ones((1, 1), dtype=complex))

    def __post_init__(self):
        object.__setattr__(self, "num", _trim2(self.num))
        object.__setattr__(self, "den", _trim2(self.den))
        if not np.any(self.den != 0):
            raise DomainError("zero denominator polynomial")

    @classmethod
    def constant(cls, c) -> BivariateRational:
        return cls(np.array([[c]], dtype=complex))

    @classmethod
    def from_xy(cls, num_xy, den_xy=None) -> BivariateRational:
        """From coefficient matrices in ``x**i y**j`` with ``z = x + iy``."""
        num_xy = np.atleast_2d(np.asarray(num_xy, dtype=complex))
        den_xy = np.ones((1, 1)) if den_xy is None else np.atleast_2d(np.asarray(den_xy, dtype=complex))
        size = max(num_xy.shape[0] + num_xy.shape[1], den_xy.shape[0] + den_xy.shape[1])
        x = np.array([[0, 0.5], [0.5, 0]], dtype=complex)  # (z + zbar)/2
        y = np.array([[0, 0.5j], [-0.5j, 0]], dtype=complex)  # (z - zbar)/(2i)
        xp = [np.ones((1, 1), dtype=complex)]
        yp = [np.ones((1, 1), dtype=complex)]
        for _ in range(size):
            xp.append(_conv2(xp[-1], x))
            yp.append(_conv2(yp[-1], y))

        def convert(m):
            out = np.zeros((size + 1, size + 1), dtype=complex)
            for i, j in zip(*np.nonzero(m)):
                t = m[i, j] * _conv2(xp[i], yp[j])
                out[: t.shape[0], : t.shape[1]] += t
            return out

        return cls(convert(num_xy), convert(den_xy))

    @property
    def scale(self) -> float:
        return float(max(np.max(np.abs(self.num)), np.max(np.abs(self.den))))

    @property
    def bidegree(self) -> tuple[int, int]:
        return (max(self.num.shape[0], self.den.shape[0]) - 1, max(self.num.shape[1], self.den.shape[1]) - 1)

    def eval2(self, z, zeta):
        return bivariate_eval(self.num, z, zeta) / bivariate_eval(self.den, z, zeta)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.eval2(z, np.conj(z))
        return out if np.ndim(out) else complex(out)

    def den_values(self, z):
        z = np.asarray(z, dtype=complex)
        return bivariate_eval(self.den, z, np.conj(z))

    def conj(self) -> BivariateRational:
        """The data ``conj(R(z, zbar))``, again as a quotient in ``z, zbar``."""
        return BivariateRational(np.conj(self.num.T), np.conj(self.den.T))

    def __add__(self, other):
        if not isinstance(other, BivariateRational):
            other = BivariateRational.constant(other)
        num = _add2(_conv2(self.num, other.den), _conv2(other.num, self.den))
        return BivariateRational(num, _conv2(self.den, other.den))

    def check_nondegenerate(self, curve_points) -> None:
        """Raise if the denominator vanishes identically on the sampled curve."""
        vals = np.abs(self.den_values(curve_points))
        if np.max(vals) <= DEGENERATE_TOL * float(np.max(np.abs(self.den))):
            raise DegenerateDataError("denominator vanishes identically on the curve")

    def substitute(self, zrat: RationalFunction, zetarat: RationalFunction) -> RationalFunction:
        """``R(X(w), Y(w))`` for rational ``X``, ``Y`` in a new variable ``w``."""
        I = max(self.num.shape[0], self.den.shape[0]) - 1
        J = max(self.num.shape[1], self.den.shape[1]) - 1
        xn = [ComplexPoly([1.0])]
        xd = [ComplexPoly([1.0])]
        for _ in range(I):
            xn.append(xn[-1] * zrat.num)
            xd.append(xd[-1] * zrat.den)
        yn = [ComplexPoly([1.0])]
        yd = [ComplexPoly([1.0])]
        for _ in range(J):
            yn.append(yn[-1] * zetarat.num)
            yd.append(yd[-1] * zetarat.den)

        def hom(m):
            acc = ComplexPoly([0])
            for i, j in zip(*np.nonzero(m)):
                acc = acc + m[i, j] * (xn[i] * xd[I - i] * yn[j] * yd[J - j])
            return acc

        return RationalFunction(hom(self.num), hom(self.den))

    def to_json(self) -> dict:
        def enc(m):
            return {"coeffs": [[[float(c.real), float(c.imag)] for c in row] for row in m]}

        return {"num": enc(self.num), "den": enc(self.den)}

    @classmethod
    def from_json(cls, obj) -> BivariateRational:
        def dec(part):
            return np.array([[complex(re, im) for re, im in row] for row in part["coeffs"]], dtype=complex)

        if obj.get("var_order") == "x,y":
            return cls.from_xy(dec(obj["num"]), dec(obj["den"]) if "den" in obj else None)
        den = dec(obj["den"]) if "den" in obj else np.ones((1, 1), dtype=complex)
        return cls(dec(obj["num"]), den)


def _add2(a, b):
    out = np.zeros((max(a.shape[0], b.shape[0]), max(a.shape[1], b.shape[1])), dtype=complex)
    out[: a.shape[0], : a.shape[1]] += a
    out[: b.shape[0], : b.shape[1]] += b
    return out


@dataclass(frozen=True, eq=False)
class CircleDecomposition:
    """``R = r1(z) + conj(r2(z))`` on the unit circle.

    The additive constant always lives in ``r1``; the polynomial part of
    ``r2`` has zero constant coefficient. ``boundary_poles`` lists poles of the
    holomorphic restriction on the circle itself; those terms stay in ``r1``.
    """

    form: str
    r1: RationalFunction
    r2: RationalFunction
    boundary_poles: tuple = ()
    constant_in_r1: bool = True

    @property
    def in_RS(self) -> bool:
        return not self.boundary_poles

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        out = self.r1(z) + np.conj(self.r2(z))
        return out if np.ndim(out) else complex(out)

    def to_json(self) -> dict:
        return {"form": self.form, "r1": self.r1.to_json(), "r2": self.r2.to_json()}

    @classmethod
    def from_json(cls, obj) -> CircleDecomposition:
        return cls(obj["form"], RationalFunction.from_json(obj["r1"]), RationalFunction.from_json(obj["r2"]))


def holo_restriction(R: BivariateRational, seed: int | None = None) -> RationalFunction:
    """The rational ``q(z) = R(z, 1/z)``, which equals ``R`` on ``|z| = 1``."""
    R.check_nondegenerate(circle_samples(128, 0.1234))
    q = R.substitute(RationalFunction.identity(), RationalFunction([1.0], [0.0, 1.0]))
    return q.normalized(seed=seed)


def _rf(poly: ComplexPoly, terms) -> RationalFunction:
    return PartialFractions(poly, list(terms)).to_rational()


def decompose(R: BivariateRational, form: str = "poles_outside", seed: int | None = None) -> CircleDecomposition:
    if form not in FORMS:
        raise DomainError(f"unknown circle form {form!r}")
    q = holo_restriction(R, seed=seed)
    pf = partial_fractions(q, seed=seed)
    const = complex(pf.poly_part.coeffs[0])
    poly = ComplexPoly(np.concatenate([[0], pf.poly_part.coeffs[1:]]))
    inside, outside, boundary = [], [], []
    for term in pf.terms:
        d = abs(term[0]) - 1
        if abs(d) < BOUNDARY_POLE_TOL:
            boundary.append(term)
        elif d < 0:
            inside.append(term)
        else:
            outside.append(term)
    zero = ComplexPoly([0])
    if form == "holo_restriction":
        keep, refl = _rf(poly, inside + outside + boundary), None
    elif form == "poles_outside":
        keep, refl = _rf(poly, outside + boundary), _rf(zero, inside)
    elif form == "poles_inside":
        keep, refl = _rf(zero, inside + boundary), _rf(poly, outside)
    else:
        keep, refl = _rf(zero, boundary), _rf(poly, inside + outside)
    if refl is None or refl.is_zero:
        r2 = RationalFunction(zero)
        shift = 0j
    else:
        r2pf = partial_fractions(conj_reflect(refl), seed=seed)
        shift = complex(r2pf.poly_part.coeffs[0])
        r2 = _rf(ComplexPoly(np.concatenate([[0], r2pf.poly_part.coeffs[1:]])), r2pf.terms)
    r1 = keep + RationalFunction.constant(const + np.conj(shift))
    bpoles = tuple(sorted({t[0] for t in boundary}, key=lambda c: (c.real, c.imag)))
    return CircleDecomposition(form, r1, r2, bpoles)


def r2_constant(d: CircleDecomposition) -> complex:
    """Constant coefficient of the polynomial part of ``r2`` (zero under the convention)."""
    if d.r2.is_zero:
        return 0j
    return complex(partial_fractions(d.r2).poly_part.coeffs[0])


def uniqueness_check(d1: CircleDecomposition, d2: CircleDecomposition, n: int = 128) -> dict:
    """Compare two decompositions of the same data on circle samples.

    ``r1_spread`` / ``r2_spread`` measure how far ``r1 - r1'`` and
    ``r2 - r2'`` are from constants; ``r1_diff`` / ``r2_diff`` are the raw
    differences, which vanish when both obey the constant convention.
    """
    z = circle_samples(n, 0.0371)
    bad = set(d1.boundary_poles) | set(d2.boundary_poles)
    if bad:
        mask = np.min(np.abs(z[:, None] - np.array(sorted(bad, key=abs))[None, :]), axis=1) > 1e-3
        z = z[mask]
    e1 = d1.r1(z) - d2.r1(z)
    e2 = d1.r2(z) - d2.r2(z)
    report = {
        "r1_spread": float(np.max(np.abs(e1 - np.mean(e1)))),
        "r2_spread": float(np.max(np.abs(e2 - np.mean(e2)))),
        "r1_diff": float(np.max(np.abs(e1))),
        "r2_diff": float(np.max(np.abs(e2))),
        "r2_constants": (abs(r2_constant(d1)), abs(r2_constant(d2))),
    }
    report["unique_up_to_constant"] = report["r1_spread"] < 1e-9 and report["r2_spread"] < 1e-9
    report["convention_ok"] = (
        report["unique_up_to_constant"]
        and report["r1_diff"] < 1e-9
        and report["r2_diff"] < 1e-9
        and max(report["r2_constants"]) < 1e-9
    )
    return report


def boundary_residual(R: BivariateRational, d: CircleDecomposition, n: int = 128) -> float:
    """Relative sup-residual of ``r1 + conj(r2) - R`` on circle samples away from boundary poles."""
    z = circle_samples(n, 0.0217)
    if d.boundary_poles:
        poles = np.array(d.boundary_poles)
        z = z[np.min(np.abs(z[:, None] - poles[None, :]), axis=1) > 1e-3]
    ref = R(z)
    scale = float(np.max(np.abs(ref))) or 1.0
    return float(np.max(np.abs(d(z) - ref)) / scale)
