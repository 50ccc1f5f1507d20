import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from complexaction import (
    Free,
    Harmonic,
    PhaseJet,
    PhysicalConstants,
    TrajectoryState,
    hierarchy_rhs,
    leibniz_square,
    reconstruct_amplitude,
)
from complexaction.hierarchy import leibniz_squares
from complexaction.validation import leibniz_brute_force


def taylor_square_oracle(S, n):
    """n-th derivative of S_1(x)^2 read off the product of truncated Taylor series."""
    from math import factorial

    coeffs = [S[k + 1] / factorial(k) for k in range(len(S) - 1)]
    prod = np.convolve(coeffs, coeffs)
    return prod[n] * factorial(n) if n < prod.size else 0j


def test_leibniz_examples():
    assert leibniz_square(PhaseJet([0, 2 + 1j]), 0) == 3 + 4j
    assert leibniz_square(PhaseJet([0, 1, 2]), 1) == 4
    assert leibniz_square(PhaseJet([0, 1, 2, 0]), 2) == 8


complex_jets = arrays(
    np.complex128, 12,
    elements=st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False),
)


@given(complex_jets, st.integers(0, 10))
@settings(max_examples=200, deadline=None)
def test_leibniz_matches_taylor_product(S, n):
    expected = taylor_square_oracle(S, n)
    got = leibniz_square(S, n)
    assert abs(got - expected) <= 1e-12 * max(1.0, sum(abs(S)) ** 2)


@given(complex_jets, st.integers(0, 10))
@settings(max_examples=200, deadline=None)
def test_leibniz_matches_brute_force(S, n):
    assert abs(leibniz_square(S, n) - leibniz_brute_force(S, n)) <= 1e-12 * max(1.0, sum(abs(S)) ** 2)


def test_leibniz_vectorised_agrees(rng):
    S = rng.normal(size=(8, 5)) + 1j * rng.normal(size=(8, 5))
    all_n = leibniz_squares(S)
    for n in range(8):
        np.testing.assert_allclose(all_n[n], leibniz_square(S, n), rtol=1e-14)


def test_harmonic_ground_state_rhs():
    state = TrajectoryState(t=0.0, x=0.0, jet=PhaseJet([0, 0, 1j]))
    d = hierarchy_rhs(state, 0.0, Harmonic(1.0))
    assert d[2] == pytest.approx(0.0, abs=1e-15)
    assert d[0] == pytest.approx(-0.5, abs=1e-15)


def test_vacuum_fixed_point():
    state = TrajectoryState(t=0.0, x=0.3, jet=PhaseJet.zeros(5))
    assert np.all(hierarchy_rhs(state, 0.0, Free()) == 0)


@given(
    st.complex_numbers(max_magnitude=5, allow_nan=False),
    st.complex_numbers(max_magnitude=5, allow_nan=False),
    st.complex_numbers(max_magnitude=5, allow_nan=False),
    st.complex_numbers(max_magnitude=5, allow_nan=False),
)
@settings(max_examples=100, deadline=None)
def test_zeroth_equation(s1, s2, s3, v):
    x = 0.7
    pot = Harmonic(1.3)
    consts = PhysicalConstants(hbar=0.8, mass=1.5)
    S = np.array([0.1, s1, s2, s3])
    d = hierarchy_rhs(TrajectoryState(0.0, x, PhaseJet(S)), v, pot, consts)
    expected = 1j * consts.hbar / (2 * consts.mass) * s2 - s1**2 / (2 * consts.mass) - pot(x) + v * s1
    assert abs(d[0] - expected) <= 1e-12 * (1 + abs(expected))


def test_closure_beyond_order():
    # with N = 1 the S_2 term is dropped
    d = hierarchy_rhs(TrajectoryState(0.0, 0.0, PhaseJet([0, 1])), 0.0, Free())
    assert d[0] == -0.5
    assert d[1] == 0


def test_reconstruct_amplitude():
    assert reconstruct_amplitude(0.0) == 1
    assert abs(reconstruct_amplitude(0.5j + 0.28618j)) == pytest.approx(0.4556, abs=1e-4)
    assert reconstruct_amplitude(np.pi) == pytest.approx(-1)
    assert reconstruct_amplitude(2.0, PhysicalConstants(hbar=2.0)) == pytest.approx(np.exp(1j))


def test_phase_jet_is_immutable():
    j = PhaseJet([1, 2, 3])
    assert j.order == 2
    assert j[5] == 0
    with pytest.raises(ValueError):
        j.values[0] = 7


def test_constants_validation():
    with pytest.raises(ValueError):
        PhysicalConstants(hbar=0.0)
    with pytest.raises(ValueError):
        PhysicalConstants(mass=-1.0)
