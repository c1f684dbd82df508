import numpy as np
import pytest

from fracdisc.controllers import (
    FracPid,
    controller_feedthrough,
    controller_freq_response,
    controller_response,
    controller_weights,
    make_pd_delta,
    make_pid,
)
from fracdisc.exceptions import FracDiscError
from fracdisc.frac_core import Discretization, Rule, make_signal


class TestFracPid:
    """Controller parameters"""

    def test_make_pid(self):
        ctl = make_pid(2.0, 0.5, 0.3)
        assert (ctl.K, ctl.Ti, ctl.Td, ctl.lam, ctl.delta) == (2.0, 0.5, 0.3, 1.0, 1.0)

    def test_make_pd_delta(self, example_controller):
        assert example_controller == FracPid(K=50.0, Ti=0.0, Td=5.326, lam=0.0, delta=1.286)
        assert not example_controller.has_integral
        assert example_controller.has_derivative

    @pytest.mark.parametrize('kwargs', [{'lam': -0.5}, {'delta': -0.1}])
    def test_rejects_negative_orders(self, kwargs):
        with pytest.raises(FracDiscError, match='must be nonnegative'):
            FracPid(K=1.0, Ti=1.0, Td=1.0, **kwargs)

    def test_make_pd_delta_rejects_negative_delta(self):
        with pytest.raises(FracDiscError):
            make_pd_delta(1.0, 1.0, -1.0)


class TestControllerResponse:
    """Time-domain controller output"""

    def test_proportional_only(self):
        u = controller_response(FracPid(K=2.0, Ti=0.0, Td=0.0), np.ones(3), Discretization(sample_period=0.1))
        assert list(u) == [2.0, 2.0, 2.0]

    def test_pi_on_step(self):
        """K = Ti = 1, T = 1: u_k = 1 + (k + 1)"""
        u = controller_response(make_pid(1.0, 1.0, 0.0), np.ones(5), Discretization(sample_period=1.0))
        np.testing.assert_allclose(u, [2.0, 3.0, 4.0, 5.0, 6.0], rtol=1e-15)

    def test_zero_gain_terms_ignore_orders(self):
        """lambda and delta play no part when Ti = Td = 0"""
        disc = Discretization(sample_period=0.1)
        error = np.random.default_rng(1).normal(size=20)
        first = controller_response(FracPid(K=3.0, lam=0.3, delta=1.7), error, disc)
        second = controller_response(FracPid(K=3.0, lam=2.0, delta=0.2), error, disc)
        assert np.array_equal(first, second)

    def test_classical_pid(self):
        """lambda = delta = 1 is the textbook discrete PID"""
        T, K, Ti, Td = 0.1, 2.0, 0.5, 0.3
        error = np.random.default_rng(2).normal(size=50)
        u = controller_response(make_pid(K, Ti, Td), error, Discretization(sample_period=T))
        previous = np.concatenate(([0.0], error[:-1]))
        expected = K * error + Ti * T * np.cumsum(error) + Td * (error - previous) / T
        np.testing.assert_allclose(u, expected, rtol=0, atol=1e-12)

    def test_linearity(self, example_controller, example_disc):
        rng = np.random.default_rng(3)
        e1, e2 = rng.normal(size=100), rng.normal(size=100)
        u1 = controller_response(example_controller, e1, example_disc)
        u2 = controller_response(example_controller, e2, example_disc)
        combined = controller_response(example_controller, 0.5 * e1 + 4.0 * e2, example_disc)
        scale = float(np.max(np.abs(combined)))
        np.testing.assert_allclose(combined, 0.5 * u1 + 4.0 * u2, rtol=0, atol=1e-10 * scale)

    def test_derivative_order_continuity(self):
        """PD^delta step response approaches PD as delta -> 1"""
        disc = Discretization(sample_period=0.1)
        step = make_signal('step', 100, 0.1)
        reference = controller_response(make_pd_delta(1.0, 1.0, 1.0), step, disc)
        deviations = [
            np.max(np.abs(controller_response(make_pd_delta(1.0, 1.0, delta), step, disc) - reference))
            for delta in (1.1, 1.01, 1.001)
        ]
        assert all(later < earlier for earlier, later in zip(deviations, deviations[1:]))

    def test_short_memory_shortens_weights(self):
        """Truncated weights leave the first L/T + 1 samples unchanged"""
        full = Discretization(sample_period=0.1)
        short = Discretization(sample_period=0.1, memory_length=1.0)
        ctl = FracPid(K=1.0, Ti=0.5, Td=0.2, lam=0.7, delta=0.6)
        error = np.ones(40)
        u_full = controller_response(ctl, error, full)
        u_short = controller_response(ctl, error, short)
        np.testing.assert_allclose(u_short[:11], u_full[:11], rtol=1e-14)
        assert not np.allclose(u_short[20:], u_full[20:])

    def test_rejects_empty_error(self, example_controller, example_disc):
        with pytest.raises(FracDiscError):
            controller_response(example_controller, [], example_disc)

    def test_rejects_tustin(self, example_controller):
        with pytest.raises(FracDiscError, match='backward-euler'):
            controller_response(example_controller, np.ones(3), Discretization(sample_period=0.1, rule=Rule.TUSTIN))


class TestControllerFeedthrough:
    """Instantaneous controller gain du_k/de_k"""

    def test_proportional(self):
        assert controller_feedthrough(FracPid(K=3.0), Discretization(sample_period=0.1)) == 3.0

    def test_pd_delta(self, example_controller, example_disc):
        expected = 50.0 + 5.326 * 0.05 ** -1.286
        assert controller_feedthrough(example_controller, example_disc) == pytest.approx(expected, rel=1e-12)

    def test_integral_only(self):
        """K = 0, Ti = 1, lambda = 1 gives T"""
        gain = controller_feedthrough(FracPid(K=0.0, Ti=1.0, lam=1.0), Discretization(sample_period=0.1))
        assert gain == pytest.approx(0.1, rel=1e-14)

    def test_rejects_tustin(self):
        disc = Discretization(sample_period=0.1, rule=Rule.TUSTIN)
        with pytest.raises(FracDiscError, match='backward-euler'):
            controller_feedthrough(FracPid(K=1.0, Td=0.5, delta=0.5), disc)

    @pytest.mark.parametrize(
        'ctl',
        [
            FracPid(K=3.0),
            FracPid(K=50.0, Td=5.326, lam=0.0, delta=1.286),
            FracPid(K=1.5, Ti=0.8, Td=0.4, lam=0.6, delta=0.9),
        ],
    )
    def test_matches_first_impulse_sample(self, ctl):
        """g_c is the controller output at k = 0 for a unit impulse"""
        disc = Discretization(sample_period=0.05)
        impulse = make_signal('impulse', 10, 0.05)
        assert controller_feedthrough(ctl, disc) == controller_response(ctl, impulse, disc)[0]

    def test_weights_are_impulse_response(self, example_controller, example_disc):
        impulse = make_signal('impulse', 30, example_disc.sample_period)
        np.testing.assert_allclose(
            controller_weights(example_controller, example_disc, 30),
            controller_response(example_controller, impulse, example_disc),
            rtol=1e-14,
        )


class TestControllerFreqResponse:
    """Controller transfer function on the unit circle"""

    def test_proportional(self):
        response = controller_freq_response(FracPid(K=2.5), Discretization(sample_period=0.1), [0.5, 5.0])
        np.testing.assert_allclose(response, [2.5, 2.5])

    def test_integral_dominates_low_frequency(self):
        ctl = make_pid(1.0, 1.0, 0.0)
        response = controller_freq_response(ctl, Discretization(sample_period=0.01), [0.001])
        assert abs(response[0]) == pytest.approx(1000.0, rel=1e-2)
