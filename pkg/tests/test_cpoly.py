import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from quaddec.cpoly import (
    ComplexPoly,
    RationalFunction,
    antiderivative,
    arith,
    conj_reflect,
    derivative,
    partial_fractions,
    roots,
)
from quaddec.errors import DomainError

PI = np.pi


def _eig_roots(coeffs):
    """Independent oracle: eigenvalues of a companion matrix built here."""
    a = np.asarray(coeffs, dtype=complex)
    n = len(a) - 1
    C = np.zeros((n, n), dtype=complex)
    C[0, :] = -a[-2::-1] / a[-1]
    C[1:, :-1] = np.eye(n - 1)
    return np.linalg.eigvals(C)


def _expand(rs):
    return np.sort_complex(np.array([r for r, m in rs for _ in range(m)]))


def test_roots_of_z2_minus_1():
    assert [(round(r.real, 12), m) for r, m in roots(ComplexPoly([-1, 0, 1]))] == [(-1.0, 1), (1.0, 1)]


def test_double_root_detected():
    rs = roots(ComplexPoly([-2, 6, -4.5, 1]))
    assert len(rs) == 2
    got = {round(r.real, 9): m for r, m in rs}
    assert got == {0.5: 1, 2.0: 2}


def test_random_degree6_matches_companion_oracle():
    rng = np.random.default_rng(6)
    c = rng.normal(size=7) + 1j * rng.normal(size=7)
    found = _expand(roots(ComplexPoly(c)))
    ref = np.sort_complex(_eig_roots(c))
    assert np.max(np.abs(found - ref)) < 1e-10


@pytest.mark.parametrize("p", [ComplexPoly([3]), ComplexPoly([0])])
def test_roots_rejects_constants(p):
    with pytest.raises(DomainError):
        roots(p)


@given(
    st.lists(
        st.tuples(st.floats(-1.5, 1.5), st.floats(-1.5, 1.5), st.integers(1, 3)),
        min_size=1,
        max_size=4,
        unique_by=lambda t: (round(t[0], 1), round(t[1], 1)),
    ),
    st.complex_numbers(min_magnitude=0.5, max_magnitude=2),
)
def test_root_recombination(spec, lead):
    pts = [complex(x, y) for x, y, _ in spec]
    for i in range(len(pts)):
        for j in range(i):
            if abs(pts[i] - pts[j]) < 0.3:
                return
    p = ComplexPoly.from_roots([z for z, (_, _, m) in zip(pts, spec) for _ in range(m)], lead)
    rs = roots(p)
    back = ComplexPoly.from_roots([r for r, m in rs for _ in range(m)], p.leading)
    err = np.max(np.abs(back.coeffs - p.coeffs)) / np.max(np.abs(p.coeffs))
    assert err < 1e-9 * p.degree
    assert sorted(m for _, m in rs) == sorted(m for _, _, m in spec)


def test_partial_fractions_worked_example():
    r = RationalFunction(ComplexPoly([0, -1]), ComplexPoly([1, -2.5, 1]))
    pf = partial_fractions(r)
    assert pf.poly_part.is_zero
    terms = {round(p.real, 9): (o, c) for p, o, c in pf.terms}
    # residue oracle A = lim (z - a) r(z), evaluated on both sides of each pole
    for a in (2.0, 0.5):
        eps = 1e-7
        lim = np.mean([(eps * s) * r(a + eps * s) for s in (1, -1, 1j, -1j)])
        assert abs(terms[a][1] - lim) < 1e-6
    assert abs(terms[2.0][1] - (-4 / 3)) < 1e-12
    assert abs(terms[0.5][1] - (1 / 3)) < 1e-12


def test_partial_fractions_pure_pole():
    pf = partial_fractions(RationalFunction(ComplexPoly([1]), ComplexPoly([0, 0, 1])))
    assert len(pf.terms) == 1
    pole, order, coeff = pf.terms[0]
    assert abs(pole) < 1e-12 and order == 2 and abs(coeff - 1) < 1e-12


def test_partial_fractions_long_division():
    pf = partial_fractions(RationalFunction(ComplexPoly([0, 0, 0, 1]), ComplexPoly([-1, 1])))
    assert np.allclose(pf.poly_part.coeffs, [1, 1, 1], atol=1e-14)
    (pole, order, coeff), = pf.terms
    assert abs(pole - 1) < 1e-12 and order == 1 and abs(coeff - 1) < 1e-12


@given(st.integers(0, 10_000))
def test_partial_fraction_round_trip(seed):
    rng = np.random.default_rng(seed)
    num = ComplexPoly(rng.normal(size=5) + 1j * rng.normal(size=5))
    den = ComplexPoly(rng.normal(size=4) + 1j * rng.normal(size=4))
    r = RationalFunction(num, den)
    pf = partial_fractions(r)
    z = 2 * np.exp(2j * np.pi * (np.arange(64) + 0.3) / 64)
    near = np.min(np.abs(z[:, None] - np.array(list(pf.poles()))[None, :]), axis=1)
    z = z[near > 1e-3]
    ref = r(z)
    assert np.max(np.abs(pf(z) - ref)) / np.max(np.abs(ref)) < 1e-9


def test_conj_reflect_examples():
    w = np.exp(1j * np.linspace(0.1, 6, 17))
    s = conj_reflect(RationalFunction.identity())
    assert np.allclose(s(w), 1 / w, atol=1e-14)
    s = conj_reflect(RationalFunction(ComplexPoly([1]), ComplexPoly([-0.5, 1])))
    assert np.allclose(s(w), w / (1 - 0.5 * w), atol=1e-12)
    assert [round(abs(p), 12) for p in partial_fractions(s).poles()] == [2.0]
    c = 1.5 - 2j
    assert np.allclose(conj_reflect(RationalFunction.constant(c))(w), np.conj(c))


@given(st.integers(0, 10_000))
def test_conj_reflect_involution_and_boundary(seed):
    rng = np.random.default_rng(seed)
    r = RationalFunction(ComplexPoly(rng.normal(size=3) + 1j * rng.normal(size=3)), ComplexPoly([2.0 + rng.random(), 1]))
    w = np.exp(1j * np.linspace(0, 6, 32))
    s = conj_reflect(r)
    assert np.max(np.abs(s(w) - np.conj(r(w)))) < 1e-12 * max(1, np.max(np.abs(r(w))))
    assert np.max(np.abs(conj_reflect(s)(w) - r(w))) < 1e-12 * max(1, np.max(np.abs(r(w))))


def test_arith_examples():
    a = RationalFunction(ComplexPoly([1]), ComplexPoly([-1, 1]))
    b = RationalFunction(ComplexPoly([1]), ComplexPoly([1, 1]))
    s = arith(a, b, "add")
    z = np.array([0.3 + 0.2j, 2j, -3.0])
    assert np.allclose(s(z), 2 * z / (z**2 - 1), rtol=1e-13)
    aa = 0.7 - 0.1j
    d = derivative(RationalFunction(ComplexPoly([1]), ComplexPoly([aa, -1])))
    assert np.allclose(d(z), 1 / (aa - z) ** 2, rtol=1e-12)
    assert np.allclose(antiderivative(ComplexPoly([0, 0, 3])).coeffs, [0, 0, 0, 1])


@given(st.integers(0, 10_000), st.sampled_from(["add", "sub", "mul", "div"]))
def test_arith_pointwise(seed, op):
    rng = np.random.default_rng(seed)

    def rand():
        return RationalFunction(ComplexPoly(rng.normal(size=3) + 1j * rng.normal(size=3)), ComplexPoly(rng.normal(size=2) + 1j * rng.normal(size=2)))

    a, b = rand(), rand()
    z = rng.normal(size=32) + 1j * rng.normal(size=32)
    ref = {"add": a(z) + b(z), "sub": a(z) - b(z), "mul": a(z) * b(z), "div": a(z) / b(z)}[op]
    got = arith(a, b, op)(z)
    assert np.max(np.abs(got - ref) / np.maximum(np.abs(ref), 1e-3)) < 1e-12 * 1e2


def test_division_by_zero_rational():
    with pytest.raises(DomainError):
        arith(RationalFunction.identity(), RationalFunction.constant(0), "div")


@given(st.lists(st.integers(-50, 50), min_size=1, max_size=8))
def test_derivative_of_antiderivative_is_identity(ints):
    p = ComplexPoly(np.array(ints, dtype=complex))
    q = p.antiderivative()
    assert q.coeffs[0] == 0
    assert np.allclose(q.derivative().coeffs, p.coeffs, rtol=1e-15, atol=0)


def test_json_round_trip():
    r = RationalFunction(ComplexPoly([1, 2j]), ComplexPoly([3, 0, 1 - 1j]))
    back = RationalFunction.from_json(r.to_json())
    assert np.array_equal(back.num.coeffs, r.num.coeffs) and np.array_equal(back.den.coeffs, r.den.coeffs)
    assert r.to_json()["num"] == {"coeffs": [[1.0, 0.0], [0.0, 2.0]]}


def test_zero_polynomial_degree_sentinel():
    assert ComplexPoly([0, 0]).degree == float("-inf")
    assert ComplexPoly([1, 0, 0]).degree == 0
