import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from complexaction import (
    Bomca,
    Dpm,
    DpmSplitState,
    GaussianWavepacket,
    Harmonic,
    IntegrationConfig,
    Morse,
    PhaseJet,
    RealClassical,
    TrajectoryState,
    Zevca,
    dpm_split_rhs,
    full_rhs,
    jet_to_split,
    propagate_fan,
    split_to_jet,
    velocity_of,
)
from complexaction.strategies import strategy_from_name
from complexaction.validation import dpm_form_mismatch

STATE = TrajectoryState(t=0.0, x=0.4, jet=PhaseJet([0.1, 1 + 2j, 0.5j]))


def test_velocities():
    assert velocity_of(Bomca(), STATE) == 1 + 2j
    assert velocity_of(Dpm(), STATE) == 1
    assert velocity_of(Zevca(), STATE) == 0


def test_real_classical_needs_aux():
    with pytest.raises(ValueError):
        velocity_of(RealClassical(), STATE)
    s = TrajectoryState(0.0, 0.0, PhaseJet([0, 0, 1j]), v_aux=0.25)
    assert velocity_of(RealClassical(), s) == 0.25
    assert full_rhs(RealClassical(), s, Morse(10.25, 0.2209)).dv_aux == pytest.approx(0.0, abs=1e-14)


def test_bomca_has_no_quantum_force():
    p = 0.7
    s = TrajectoryState(0.0, 1.3, PhaseJet([0, p, 1j]))
    d = full_rhs(Bomca(), s, Harmonic(1.0))
    assert d.djet[1] == pytest.approx(-1.3, abs=1e-14)


def test_dpm_quantum_force_term():
    S1 = 0.7 + 0.4j
    S2 = 0.3 + 1j
    s = TrajectoryState(0.0, 1.3, PhaseJet([0, S1, S2]))
    d = full_rhs(Dpm(), s, Harmonic(1.0))
    assert d.djet[1] == pytest.approx(-1.3 - 1j * S2 * S1.imag, abs=1e-14)


def test_strategy_names():
    assert strategy_from_name("DPM") == Dpm()
    assert strategy_from_name("real_classical") == RealClassical()
    with pytest.raises(ValueError):
        strategy_from_name("hydro")


def test_split_conversion_examples():
    j = split_to_jet(DpmSplitState(0.0, 0.0, (0, 1, 0), (0, 2, 0)))
    assert j.jet[1] == 1 - 2j
    z = split_to_jet(DpmSplitState(0.0, 0.0, (0, 0, 0), (0, 0, 0)))
    assert np.all(z.jet.values == 0)
    with pytest.raises(ValueError):
        DpmSplitState(0.0, 0.0, (0, 1), (0, 1))


finite = st.floats(-1e3, 1e3)


@given(finite, st.tuples(finite, finite, finite), st.tuples(finite, finite, finite))
@settings(max_examples=100, deadline=None)
def test_split_round_trip(x, s, c):
    st_ = DpmSplitState(0.5, x, s, c)
    back = jet_to_split(split_to_jet(st_))
    assert back.x == x
    np.testing.assert_allclose(back.s, s, rtol=1e-15, atol=0)
    np.testing.assert_allclose(back.c, c, rtol=1e-15, atol=0)


def test_split_ground_state_is_straight_line():
    # ground state, omega = 1: c_1 = -2 alpha0 x / hbar... written through the jet of the Gaussian
    w = GaussianWavepacket(alpha0=0.5)
    jet = w.action_derivatives(np.array([2.0 + 0j]), 2)[:, 0]
    s = jet_to_split(TrajectoryState(0.0, 2.0, PhaseJet(jet)))
    d = dpm_split_rhs(s, Harmonic(1.0))
    assert d.x == 0.0
    assert d.s[1] == pytest.approx(0.0, abs=1e-14)
    assert s.c[1] * s.c[2] == pytest.approx(2.0)


def test_split_zero_state_free():
    from complexaction import Free

    d = dpm_split_rhs(DpmSplitState(0.0, 0.0, (0, 0, 0), (0, 0, 0)), Free())
    assert d.x == 0 and d.s == (0, 0, 0) and d.c == (0, 0, 0)


def test_dpm_split_and_complex_forms_agree(morse, morse_packet):
    dx, dS = dpm_form_mismatch(GaussianWavepacket(alpha0=0.4, xc=0.5, pc=0.3), Harmonic(1.0), np.linspace(-1, 2, 5), 6.0)
    assert dx < 1e-9 and dS < 1e-9
    dx, dS = dpm_form_mismatch(morse_packet, morse, np.linspace(8.0, 10.5, 5), 5.93)
    assert dx < 1e-9 and dS < 1e-9


def test_bomca_classical_momentum_law():
    w = GaussianWavepacket(alpha0=0.5, xc=1.0, pc=0.2)
    pot = Morse(2.0, 0.5)
    cfg = IntegrationConfig(dt=1e-3, t_final=1.0, store_every=1, error_estimate=False)
    fan = propagate_fan(w, pot, Bomca(), np.array([0.5 + 0.1j, 1.5 - 0.2j]), 2, cfg)
    S1 = fan.jets[:, 1]
    dS1 = np.gradient(S1, fan.times, axis=0, edge_order=2)
    V1 = pot.derivative(fan.x, 1)
    # second-order finite difference of the sampled S_1, so the residual sits at the dt^2 level
    assert np.abs(dS1 + V1)[2:-2].max() < 1e-5
    exact = np.array([-pot.derivative(x, 1) for x in fan.x[5]])
    from complexaction.strategies import make_fan_rhs

    y = np.concatenate([fan.x[5][None], fan.jets[5]])
    assert np.abs(make_fan_rhs(Bomca(), pot)(0.0, y)[2] - exact).max() < 1e-10
