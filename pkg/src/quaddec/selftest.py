"""Aggregate invariant suite behind the ``selftest`` subcommand."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np

from . import approx, circle, decomp, kernels
from .corpus import circle_corpus, domain_corpus, rational_datum_for, real_x, zbar
from .cpoly import ComplexPoly, RationalFunction, companion_roots, conj_reflect, partial_fractions, roots
from .qdomain import invariant_suite, unit_samples

log = logging.getLogger(__name__)


@dataclass
class SuiteResult:
    name: str
    residual: float
    tolerance: float
    seconds: float

    @property
    def ok(self) -> bool:
        return bool(np.isfinite(self.residual)) and self.residual < self.tolerance

    def to_json(self) -> dict:
        return {"name": self.name, "residual": self.residual, "tolerance": self.tolerance, "ok": self.ok}


def _cpoly(rng) -> float:
    worst = 0.0
    for _ in range(20):
        p = ComplexPoly(rng.normal(size=7) + 1j * rng.normal(size=7))
        found = np.sort_complex(np.array([r for r, m in roots(p) for _ in range(m)]))
        ref = np.sort_complex(companion_roots(p))
        worst = max(worst, float(np.max(np.abs(found - ref))))
        q = ComplexPoly(rng.normal(size=4) + 1j * rng.normal(size=4))
        r = RationalFunction(q, p)
        _, z = unit_samples(64)
        z = 2 * z
        worst = max(worst, float(np.max(np.abs(partial_fractions(r)(z) - r(z))) / np.max(np.abs(r(z)))))
        _, u = unit_samples(32, 0.1)
        worst = max(worst, float(np.max(np.abs(conj_reflect(conj_reflect(r))(u) - r(u)))))
    return worst


def _circle(seed) -> float:
    worst = 0.0
    for R in circle_corpus(seed, 50):
        for form in circle.FORMS:
            worst = max(worst, circle.boundary_residual(R, circle.decompose(R, form, seed=seed), 256))
    return worst


def _domains() -> float:
    worst = 0.0
    for Q in domain_corpus().values():
        rep = invariant_suite(Q)
        if not rep["ok"]:
            return float("inf")
        worst = max(worst, rep["schwarz_boundary"], rep["quadrature"], rep.get("implicit_boundary", 0.0))
    return worst


def _kernels() -> float:
    worst = 0.0
    for Q in domain_corpus().values():
        worst = max(worst, kernels.boundary_identities(Q)["max"])
        rc = kernels.ratio_checks(Q)
        if not rc["ok"]:
            return float("inf")
        worst = max(worst, rc["spread"], rc["modulus_error"])
    return worst


def _decomp(rng) -> float:
    worst = 0.0
    for Q in domain_corpus().values():
        for R in (zbar(), real_x(), rational_datum_for(Q, rng)):
            d = decomp.decompose(Q, R)
            for form in decomp.FORMS:
                worst = max(worst, decomp.convert(d, form).residual(Q, R))
    return worst


def _dirichlet(rng) -> float:
    worst = 0.0
    r = np.array([0.1, 0.3, 0.5, 0.7, 0.9])
    grid = (r[:, None] * np.exp(2j * np.pi * (np.arange(5) / 5 + 0.05))[None, :]).ravel()
    for Q in domain_corpus().values():
        for R in (zbar(), rational_datum_for(Q, rng)):
            u = decomp.dirichlet_solve(Q, R)
            ref = decomp.poisson_reference(Q, R)
            worst = max(worst, float(np.max(np.abs(u.eval_w(grid) - ref.eval_w(grid)))))
    return worst


def _dtn(rng) -> float:
    worst = 0.0
    _, w = unit_samples(64, 0.05)
    for Q in domain_corpus().values():
        R = rational_datum_for(Q, rng)
        u = decomp.dirichlet_solve(Q, R)
        image = decomp.dtn(Q, R).eval_w(Q, w)
        fd = decomp.fd_normal_derivative(u, Q, w)
        worst = max(worst, float(np.max(np.abs(image - fd)) / np.max(np.abs(image))))
    return worst


def _approx() -> float:
    g = approx.AnalyticMapInput.from_series(approx.mobius_series(80))
    worst = 0.0
    prev = np.inf
    for n in range(4, 13):
        rep = approx.approximate_area_qd(g, n)
        bound = 2.0 ** -(n - 1)
        if not (bound / 2 <= rep.sup_error <= 2 * bound) or rep.sup_error >= prev:
            return float("inf")
        prev = rep.sup_error
        if not invariant_suite(rep.domain)["ok"]:
            return float("inf")
        worst = max(worst, abs(rep.sup_error / bound - 1))
    return worst


def run(seed: int = 0) -> list[SuiteResult]:
    rng = np.random.default_rng(seed)
    plan = [
        ("cpoly roots / partial fractions / reflection", lambda: _cpoly(rng), 1e-9),
        ("circle four-form reproduction", lambda: _circle(seed), 1e-8),
        ("qdomain invariants", _domains, 1e-6),
        ("kernel boundary identities", _kernels, 1e-9),
        ("decomposition boundary reproduction", lambda: _decomp(rng), 1e-8),
        ("dirichlet vs Fourier-Poisson", lambda: _dirichlet(rng), 1e-6),
        ("dirichlet-to-neumann vs finite differences", lambda: _dtn(rng), 1e-4),
        ("area truncation of a Mobius map", _approx, 1.0),
    ]
    out = []
    for name, fn, tol in plan:
        t0 = time.perf_counter()
        res = fn()
        out.append(SuiteResult(name, float(res), tol, time.perf_counter() - t0))
        log.info("%s: %.3e (tol %.0e)", name, res, tol)
    return out
