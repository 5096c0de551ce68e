import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quaddec.circle import (
    FORMS,
    BivariateRational,
    CircleDecomposition,
    boundary_residual,
    circle_samples,
    decompose,
    holo_restriction,
    r2_constant,
    uniqueness_check,
)
from quaddec.corpus import circle_corpus, random_circle_datum
from quaddec.errors import DegenerateDataError, DomainError


def _worked():
    # 1/(2.5 - z - zbar)
    return BivariateRational(np.ones((1, 1)), np.array([[2.5, -1], [-1, 0]]))


def test_from_xy_matches_direct_evaluation():
    R = BivariateRational.from_xy([[0, 0, 1], [2, 0, 0]], [[3, 1], [0, 0]])  # (y^2 + 2x)/(3 + y)
    z = np.array([0.3 + 0.4j, -1.2 + 0.1j, 2j])
    x, y = z.real, z.imag
    assert np.allclose(R(z), (y**2 + 2 * x) / (3 + y), rtol=1e-14)


def test_holo_restriction_agrees_on_circle():
    R = _worked()
    q = holo_restriction(R)
    z = circle_samples(64, 0.2)
    assert np.max(np.abs(q(z) - R(z))) < 1e-13


def test_degenerate_data_rejected():
    # 1 / (z zbar - 1) has a denominator that vanishes on the whole circle
    R = BivariateRational(np.ones((1, 1)), np.array([[-1, 0], [0, 1]]))
    with pytest.raises(DegenerateDataError):
        decompose(R)


def test_unknown_form():
    with pytest.raises(DomainError):
        decompose(_worked(), "sideways")


def test_zero_denominator_rejected():
    with pytest.raises(DomainError):
        BivariateRational(np.ones((1, 1)), np.zeros((2, 2)))


def test_worked_example_poles_outside():
    d = decompose(_worked(), "poles_outside")
    z = np.array([0.1 + 0.2j, -0.7j, 3.0 + 1j])
    assert np.max(np.abs(d.r1(z) - (-2 / 3 - (4 / 3) / (z - 2)))) < 1e-10
    assert np.max(np.abs(d.r2(z) - (-(4 / 3) / (z - 2)))) < 1e-10
    assert d.in_RS


def test_real_data_symmetry():
    # real data: r2 equals r1 minus its constant
    d = decompose(_worked(), "poles_outside")
    z = circle_samples(32, 0.1)
    shift = d.r1(z) - d.r2(z)
    assert np.max(np.abs(shift - shift[0])) < 1e-12


def test_polynomial_data():
    # R = z^2 + 3 zbar + 1 -> r1 = z^2 + 1, r2 = 3 z
    R = BivariateRational(np.array([[1, 3], [0, 0], [1, 0]], dtype=complex))
    d = decompose(R, "poles_outside")
    z = np.array([0.5, 1j, 2 + 1j])
    assert np.allclose(d.r1(z), z**2 + 1, atol=1e-13)
    assert np.allclose(d.r2(z), 3 * z, atol=1e-13)
    assert abs(r2_constant(d)) < 1e-14


def test_boundary_pole_kept_in_r1():
    # 1/(z - 1) has a pole on the circle
    R = BivariateRational(np.ones((1, 1)), np.array([[-1], [1]]))
    d = decompose(R, "poles_inside")
    assert not d.in_RS
    assert abs(d.boundary_poles[0] - 1) < 1e-12
    assert boundary_residual(R, d) < 1e-12


@pytest.mark.parametrize("form", FORMS)
def test_corpus_reproduction(form):
    worst = max(boundary_residual(R, decompose(R, form, seed=1), 256) for R in circle_corpus(3, 20))
    assert worst < 1e-8


@given(st.integers(0, 2**31 - 1))
def test_random_datum_all_forms_agree(seed):
    R = random_circle_datum(np.random.default_rng(seed))
    ds = [decompose(R, f) for f in FORMS]
    z = circle_samples(256, 0.0217)
    ref = R(z)
    scale = np.max(np.abs(ref))
    for d in ds:
        assert np.max(np.abs(d(z) - ref)) / scale < 1e-8
    for a in ds:
        for b in ds:
            assert np.max(np.abs(a(z) - b(z))) / scale < 1e-8


def test_uniqueness_same_form_different_seed():
    R = circle_corpus(5, 1)[0]
    rep = uniqueness_check(decompose(R, "poles_outside", seed=1), decompose(R, "poles_outside", seed=2))
    assert rep["unique_up_to_constant"] and rep["convention_ok"]


def test_uniqueness_detects_shifted_constant():
    R = _worked()
    d = decompose(R, "poles_outside")
    shifted = CircleDecomposition(d.form, d.r1 + 1.0, d.r2 + 1.0)  # conj(1) = 1 keeps the sum off by 2
    rep = uniqueness_check(d, shifted)
    assert rep["unique_up_to_constant"] and not rep["convention_ok"]


def test_json_round_trip():
    d = decompose(_worked(), "holo_restriction")
    back = CircleDecomposition.from_json(json.loads(json.dumps(d.to_json())))
    z = circle_samples(16)
    assert np.max(np.abs(back(z) - d(z))) == 0
    R = _worked()
    assert np.array_equal(BivariateRational.from_json(R.to_json()).den, R.den)
