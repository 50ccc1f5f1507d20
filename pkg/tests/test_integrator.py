import numpy as np
import pytest

from complexaction import GaussianWavepacket, Harmonic, IntegrationConfig, Zevca, integrate, propagate_fan, rk4_step


def oscillator(t, y):
    return np.array([y[1], -y[0]])


def test_scalar_exponential():
    y = rk4_step(np.array([1.0]), lambda t, y: y, 0.1)
    assert y[0] == pytest.approx(np.exp(0.1), abs=1e-6)
    assert y[0] == pytest.approx(1 + 0.1 + 0.1**2 / 2 + 0.1**3 / 6 + 0.1**4 / 24, abs=1e-15)


def test_zero_rhs():
    y0 = np.array([1.0, 2.0 + 1j])
    res = integrate(y0, lambda t, y: np.zeros_like(y), IntegrationConfig(dt=0.1, t_final=1.0))
    assert np.all(res.final == y0)


def test_one_period():
    res = integrate(np.array([1.0, 0.0]), oscillator, IntegrationConfig(dt=1e-3, t_final=2 * np.pi))
    assert np.abs(res.final - [1.0, 0.0]).max() < 1e-10
    assert res.times[-1] == pytest.approx(2 * np.pi, abs=1e-15)


def test_t_final_zero():
    res = integrate(np.array([3.0]), oscillator, IntegrationConfig(dt=0.1, t_final=0.0))
    assert res.times.tolist() == [0.0]
    assert res.states.shape[0] == 1


def test_fourth_order_convergence():
    def err(dt):
        res = integrate(np.array([1.0, 0.0]), oscillator, IntegrationConfig(dt=dt, t_final=2.0, error_estimate=False))
        return np.abs(res.final - [np.cos(2.0), -np.sin(2.0)]).max()

    # against the dt/4 run as reference
    def err_ref(dt):
        cfg = lambda h: IntegrationConfig(dt=h, t_final=2.0, error_estimate=False)
        ref = integrate(np.array([1.0, 0.0]), oscillator, cfg(dt / 4)).final
        return np.abs(integrate(np.array([1.0, 0.0]), oscillator, cfg(dt)).final - ref).max()

    ratio = err_ref(0.1) / err_ref(0.05)
    assert 12 <= ratio <= 20
    assert 12 <= err(0.1) / err(0.05) <= 20


def test_deterministic():
    cfg = IntegrationConfig(dt=0.01, t_final=1.3, store_every=7)
    a = integrate(np.array([0.3 + 0.1j, 1.0]), oscillator, cfg)
    b = integrate(np.array([0.3 + 0.1j, 1.0]), oscillator, cfg)
    assert np.array_equal(a.states, b.states) and np.array_equal(a.times, b.times)


def test_morse_trajectory_self_convergence(morse):
    def rhs(t, y):
        return np.array([y[1], -morse.derivative(y[0], 1)])

    res = integrate(np.array([9.342, 0.0]), rhs, IntegrationConfig(dt=1e-3, t_final=5.93))
    assert res.max_error < 1e-6
    # energy conservation puts the inner turning point where V = V(9.342)
    u = 1 + np.sqrt(1 + morse(9.342) / morse.depth)
    x_turn = -np.log(u) / morse.range
    x, v = res.final
    assert x_turn < x < x_turn + 1.0 and v < 0


def test_divergent_columns_are_frozen():
    def rhs(t, y):
        return np.array([[1.0, y[0, 1] ** 2]]) * np.ones_like(y)

    y0 = np.array([[0.0, 1.0]])
    res = integrate(y0, rhs, IntegrationConfig(dt=0.01, t_final=2.0, error_estimate=False))
    assert res.diverged.tolist() == [False, True]
    assert res.final[0, 0] == pytest.approx(2.0)


def test_stored_samples_hit_t_final():
    res = integrate(np.array([1.0, 0.0]), oscillator, IntegrationConfig(dt=0.1, t_final=1.05, store_every=3))
    assert res.times[-1] == pytest.approx(1.05)
    assert np.all(np.diff(res.times) > 0)


def test_zevca_positions_constant():
    cfg = IntegrationConfig(dt=1e-2, t_final=3.0, store_every=10)
    fan = propagate_fan(GaussianWavepacket(0.5, 0.3, 0.4), Harmonic(1.0), Zevca(), np.linspace(-2, 2, 9), 4, cfg)
    assert np.all(fan.x == fan.x[0])


@pytest.mark.parametrize("bad", [dict(dt=0.0), dict(dt=-1.0), dict(t_final=-1.0), dict(store_every=0)])
def test_config_validation(bad):
    with pytest.raises(ValueError):
        IntegrationConfig(**bad)
