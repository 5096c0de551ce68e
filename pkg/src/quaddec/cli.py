"""Command-line front end: ``python3 -m quaddec <subcommand> ...``.

Exit status is 0 when every residual gate passes, 1 when a gate fails (the
failing invariant is named on stderr) and 2 for unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import approx, circle, decomp, kernels, selftest
from .circle import BivariateRational
from .cpoly import ComplexPoly
from .errors import QuaddecError
from .qdomain import (
    QuadratureDomain,
    area_integral,
    boundary_description,
    invariant_suite,
    unit_samples,
)

log = logging.getLogger("quaddec")

SUBCOMMANDS = (
    "decompose-circle",
    "decompose",
    "schwarz",
    "implicitize",
    "quadrature",
    "boundary-eq",
    "kernels",
    "dirichlet",
    "dtn",
    "approximate",
    "selftest",
)


class InputError(Exception):
    """Malformed or unreadable input; maps to exit status 2."""


@dataclass
class RunConfig:
    subcommand: str
    domain: str | None = None
    data: str | None = None
    form: str | None = None
    samples: int = 256
    tol: float = 1e-8
    output: str | None = None
    format: str = "json"
    seed: int = 0
    degree: int | None = None
    kind: str = "area"
    point: str | None = None

    def validate(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise InputError(f"unknown subcommand {self.subcommand!r}")
        if self.samples < 16:
            raise InputError(f"--samples must be at least 16, got {self.samples}")
        if not 1e-14 < self.tol < 1e-2:
            raise InputError(f"--tol must lie in (1e-14, 1e-2), got {self.tol}")
        if self.format not in ("json", "csv"):
            raise InputError(f"--format must be json or csv, got {self.format!r}")


@dataclass
class Outcome:
    payload: dict
    rows: list = field(default_factory=list)
    header: tuple = ()
    gates: dict = field(default_factory=dict)  # name -> (value, passed)


# --------------------------------------------------------------------------
# input helpers


def _load_json(path: str | None, flag: str):
    if path is None:
        raise InputError(f"{flag} is required for this subcommand")
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"{flag} {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _parse(path, flag, builder):
    obj = _load_json(path, flag)
    try:
        return builder(obj)
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        if isinstance(exc, QuaddecError) and not isinstance(exc, ValueError):
            raise
        raise InputError(f"{path}: does not match the expected schema ({type(exc).__name__}: {exc})") from exc


def load_domain(path) -> QuadratureDomain:
    def build(obj):
        strict = bool(obj.get("strict", True))
        return QuadratureDomain.from_json(obj, strict=strict)

    return _parse(path, "--domain", build)


def load_data(path) -> BivariateRational:
    return _parse(path, "--data", BivariateRational.from_json)


def _complex_arg(text: str) -> complex:
    try:
        parts = [float(s) for s in text.split(",")]
    except ValueError as exc:
        raise InputError(f"--point expects 're,im', got {text!r}") from exc
    if len(parts) != 2:
        raise InputError(f"--point expects 're,im', got {text!r}")
    return complex(parts[0], parts[1])


def _pair(c) -> list:
    c = complex(c)
    return [c.real, c.imag]


def _gate(out: Outcome, name: str, value: float, passed: bool) -> None:
    out.gates[name] = (float(value), bool(passed))


# --------------------------------------------------------------------------
# subcommands


def cmd_decompose_circle(cfg: RunConfig) -> Outcome:
    R = load_data(cfg.data)
    form = cfg.form or "poles_outside"
    if form not in circle.FORMS:
        raise InputError(f"--form for decompose-circle must be one of {', '.join(circle.FORMS)}")
    d = circle.decompose(R, form, seed=cfg.seed)
    res = circle.boundary_residual(R, d, cfg.samples)
    payload = d.to_json()
    payload["boundary_poles"] = [_pair(p) for p in d.boundary_poles]
    payload["residual"] = res
    out = Outcome(payload, header=("theta", "re_R", "im_R", "re_fit", "im_fit", "abs_err"))
    theta, z = unit_samples(cfg.samples)
    ref, fit = R(z), d(z)
    out.rows = [(t, a.real, a.imag, b.real, b.imag, abs(a - b)) for t, a, b in zip(theta, ref, fit)]
    _gate(out, "circle boundary reproduction", res, res < cfg.tol)
    return out


def cmd_decompose(cfg: RunConfig) -> Outcome:
    Q, R = load_domain(cfg.domain), load_data(cfg.data)
    form = cfg.form or "k_lambda"
    if form not in decomp.FORMS:
        raise InputError(f"--form for decompose must be one of {', '.join(decomp.FORMS)}")
    d = decomp.convert(decomp.decompose(Q, R, seed=cfg.seed), form)
    res = d.residual(Q, R, cfg.samples)
    payload = d.to_json()
    payload["residual"] = res
    out = Outcome(payload, header=("theta", "re_R", "im_R", "re_fit", "im_fit", "abs_err"))
    theta, w = unit_samples(cfg.samples)
    ref, fit = R(Q.map(w)), d.eval_w(Q, w)
    out.rows = [(t, a.real, a.imag, b.real, b.imag, abs(a - b)) for t, a, b in zip(theta, ref, fit)]
    _gate(out, "decomposition boundary reproduction", res, res < cfg.tol)
    return out


def cmd_schwarz(cfg: RunConfig) -> Outcome:
    Q = load_domain(cfg.domain)
    S = Q.schwarz()
    theta, w = unit_samples(cfg.samples)
    z = Q.map(w)
    res = float(np.max(np.abs(S.as_w_rational(w) - np.conj(z))) / max(1.0, Q.scale))
    payload = {
        "as_w_rational": S.as_w_rational.to_json(),
        "poles": [{"w": _pair(p), "z": _pair(Q.map(p)), "order": int(n)} for p, n in S.poles_in_disc()],
        "boundary_residual": res,
    }
    out = Outcome(payload, header=("theta", "re_z", "im_z", "re_S", "im_S", "re_T", "im_T"))
    out.rows = [tuple(r) for r in Q.boundary_table(cfg.samples)]
    _gate(out, "S(z) = conj(z) on the boundary", res, res < 1e-10)
    return out


def cmd_implicitize(cfg: RunConfig) -> Outcome:
    Q = load_domain(cfg.domain)
    curve = Q.implicitize()
    theta, w = unit_samples(cfg.samples)
    z = Q.map(w)
    scale = curve.scale
    on = float(np.max(np.abs(curve(z))) / scale)
    base = float(abs(curve(Q.base)) / scale)
    far = float(abs(curve(Q.base + 10 * Q.scale * (1 + 1j))) / scale)
    payload = curve.to_json()
    payload.update(boundary_residual=on, base_value=base, exterior_value=far)
    out = Outcome(payload, header=("theta", "re_z", "im_z", "abs_Q"))
    out.rows = [(t, v.real, v.imag, abs(q)) for t, v, q in zip(theta, z, curve(z))]
    _gate(out, "curve vanishes on the boundary", on, on < cfg.tol)
    _gate(out, "curve nonzero at the base point", base, base > 1e-6)
    _gate(out, "curve nonzero far outside", far, far > 1e-6)
    return out


def cmd_quadrature(cfg: RunConfig) -> Outcome:
    Q = load_domain(cfg.domain)
    data = Q.quadrature_data()
    rows = []
    worst = 0.0
    for k in range(6):
        p = ComplexPoly([-Q.base, 1]) ** k
        rule = data.apply_poly(p)
        ref = area_integral(Q, p, 96, 512)
        err = abs(rule - ref) / max(abs(ref), Q.scale ** (k + 2))
        worst = max(worst, err)
        rows.append((k, rule.real, rule.imag, ref.real, ref.imag, err))
    payload = data.to_json()
    payload["monomial_check"] = [{"power": r[0], "rule": [r[1], r[2]], "integral": [r[3], r[4]], "rel_err": r[5]} for r in rows]
    out = Outcome(payload, rows, ("power", "re_rule", "im_rule", "re_integral", "im_integral", "rel_err"))
    _gate(out, "quadrature identity on (z-b)^k, k<=5", worst, worst < 1e-6)
    return out


def cmd_boundary_eq(cfg: RunConfig) -> Outcome:
    Q = load_domain(cfg.domain)
    a = _complex_arg(cfg.point) if cfg.point else complex(Q.map(1.0))
    bd = boundary_description(Q, a, cfg.samples)
    out = Outcome(bd.to_json(), [(k, v) for k, v in (("residual", bd.residual),)], ("name", "value"))
    _gate(out, "boundary equation residual", bd.residual, bd.residual < cfg.tol)
    return out


def cmd_kernels(cfg: RunConfig) -> Outcome:
    Q = load_domain(cfg.domain)
    ids = kernels.boundary_identities(Q, 64)
    ratio = kernels.ratio_checks(Q)
    payload = {"identities": ids, "ratio": {k: (_pair(v) if isinstance(v, complex) else v) for k, v in ratio.items()}}
    if cfg.point:
        z = _complex_arg(cfg.point)
        m = cfg.degree or 0
        payload["point"] = {
            "z": _pair(z),
            "m": m,
            "K": _pair(kernels.K_deriv(Q, Q.base, m, z)),
            "Lambda": _pair(kernels.Lambda_deriv(Q, Q.base, m, z)) if abs(z - Q.base) > 1e-12 else None,
            "k_lower": _pair(kernels.k_lower(Q, Q.base, m, z)),
        }
    out = Outcome(payload, header=("identity", "max_residual"))
    out.rows = [(k, v) for k, v in ids.items()]
    _gate(out, "kernel boundary identities", ids["max"], ids["max"] < 1e-9)
    _gate(out, "k_b/lambda_b over f^2 is unimodular", ratio["modulus_error"], bool(ratio["ok"]))
    return out


def _interior_grid():
    r = np.array([0.1, 0.3, 0.5, 0.7, 0.9])
    return (r[:, None] * np.exp(2j * np.pi * (np.arange(5) / 5 + 0.05))[None, :]).ravel()


def cmd_dirichlet(cfg: RunConfig) -> Outcome:
    Q, R = load_domain(cfg.domain), load_data(cfg.data)
    u = decomp.dirichlet_solve(Q, R, seed=cfg.seed)
    ref = decomp.poisson_reference(Q, R)
    w = _interior_grid()
    z = Q.map(w)
    uv, rv = u.eval_w(w), ref.eval_w(w)
    err = float(np.max(np.abs(uv - rv)))
    payload = u.decomposition.to_json()
    payload["grid"] = [{"z": _pair(a), "u": _pair(b), "reference": _pair(c)} for a, b, c in zip(z, uv, rv)]
    payload["max_reference_error"] = err
    out = Outcome(payload, header=("re_z", "im_z", "re_u", "im_u", "re_ref", "im_ref"))
    out.rows = [(a.real, a.imag, b.real, b.imag, c.real, c.imag) for a, b, c in zip(z, uv, rv)]
    _gate(out, "dirichlet solution vs Fourier-Poisson reference", err, err < 1e-6)
    return out


def cmd_dtn(cfg: RunConfig) -> Outcome:
    Q, R = load_domain(cfg.domain), load_data(cfg.data)
    image = decomp.dtn(Q, R, seed=cfg.seed)
    u = decomp.dirichlet_solve(Q, R, seed=cfg.seed)
    theta, w = unit_samples(64, 0.05)
    an = image.eval_w(Q, w)
    fd = decomp.fd_normal_derivative(u, Q, w)
    scale = float(np.max(np.abs(an))) or 1.0
    err = float(np.max(np.abs(an - fd)) / scale)
    payload = image.to_json()
    payload["fd_relative_error"] = err
    out = Outcome(payload, header=("theta", "re_dudn", "im_dudn", "re_fd", "im_fd"))
    out.rows = [(t, a.real, a.imag, b.real, b.imag) for t, a, b in zip(theta, an, fd)]
    _gate(out, "normal derivative vs finite differences", err, err < 1e-4 or scale == 0)
    return out


def cmd_approximate(cfg: RunConfig) -> Outcome:
    g = _parse(cfg.data, "--data", approx.AnalyticMapInput.from_json)
    if cfg.degree is None:
        raise InputError("--degree is required for approximate")
    if cfg.kind == "area":
        rep = approx.approximate_area_qd(g, cfg.degree)
    elif cfg.kind == "arclength":
        rep = approx.approximate_arclength_qd(g, cfg.degree)
    else:
        raise InputError("--kind must be area or arclength")
    suite = invariant_suite(rep.domain)
    payload = rep.to_json()
    payload["invariants"] = {k: v for k, v in suite.items()}
    out = Outcome(payload, header=("theta", "re_P", "im_P"))
    theta, w = unit_samples(cfg.samples)
    out.rows = [(t, v.real, v.imag) for t, v in zip(theta, rep.domain.map(w))]
    for name in ("schwarz_boundary", "tangent_squared", "quadrature", "implicit_boundary", "implicit_base"):
        if name in suite:
            _gate(out, f"qdomain invariant {name}", suite[name], name not in suite["failed"])
    _gate(out, "returned domain is a valid quadrature domain", 0.0, bool(suite["valid"]))
    if rep.tangent_residual is not None:
        _gate(out, "tangent is rational in w", rep.tangent_residual, rep.tangent_residual < 1e-9)
    return out


def cmd_selftest(cfg: RunConfig) -> Outcome:
    results = selftest.run(cfg.seed)
    out = Outcome({"seed": cfg.seed, "suites": [r.to_json() for r in results]}, header=("suite", "residual", "tolerance", "ok"))
    out.rows = [(r.name, r.residual, r.tolerance, r.ok) for r in results]
    for r in results:
        _gate(out, r.name, r.residual, r.ok)
    return out


HANDLERS = {
    "decompose-circle": cmd_decompose_circle,
    "decompose": cmd_decompose,
    "schwarz": cmd_schwarz,
    "implicitize": cmd_implicitize,
    "quadrature": cmd_quadrature,
    "boundary-eq": cmd_boundary_eq,
    "kernels": cmd_kernels,
    "dirichlet": cmd_dirichlet,
    "dtn": cmd_dtn,
    "approximate": cmd_approximate,
    "selftest": cmd_selftest,
}


# --------------------------------------------------------------------------
# output


def _fmt_cell(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def render(out: Outcome, fmt: str) -> str:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(out.header)
        for row in out.rows:
            writer.writerow([_fmt_cell(v) for v in row])
        return buf.getvalue()
    payload = dict(out.payload)
    payload["gates"] = {k: {"value": v, "ok": ok} for k, (v, ok) in out.gates.items()}
    return json.dumps(payload, sort_keys=True, indent=2, default=_json_default) + "\n"


def _json_default(obj):
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="quaddec", description="Kernel decompositions on quadrature domains.")
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--domain", help="domain JSON {'map': rational}")
    p.add_argument("--data", help="boundary data JSON (bivariate rational) or map input for approximate")
    p.add_argument("--form", help="decomposition form")
    p.add_argument("--samples", type=int, default=256)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--output", help="output path (default stdout)")
    p.add_argument("--format", default="json", choices=("json", "csv"))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--degree", type=int)
    p.add_argument("--kind", default="area", choices=("area", "arclength"))
    p.add_argument("--point", help="complex point 're,im' (boundary-eq base point, kernels evaluation point)")
    return p


def _setup_logging() -> None:
    level = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}.get(
        os.environ.get("QUADDEC_LOG", "quiet").lower(), logging.WARNING
    )
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        cfg.validate()
        out = HANDLERS[cfg.subcommand](cfg)
    except InputError as exc:
        print(f"input error: {exc}", file=stderr)
        return 2
    except QuaddecError as exc:
        print(f"FAILED {cfg.subcommand}: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    text = render(out, cfg.format)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    failed = [name for name, (_, ok) in out.gates.items() if not ok]
    for name, (value, ok) in out.gates.items():
        print(f"{'ok  ' if ok else 'FAIL'} {name}: {value:.3e}", file=stderr)
    if failed:
        print(f"residual gate failed: {', '.join(failed)}", file=stderr)
        return 1
    return 0


def main(argv=None) -> int:
    _setup_logging()
    ns = build_parser().parse_args(argv)
    cfg = RunConfig(**vars(ns))
    return run(cfg)
