import math

import numpy as np
import pytest

from fracdisc.exceptions import DegenerateStepError, FracDiscError
from fracdisc.frac_core import Discretization, Rule, apply_operator, euler_weights, make_signal
from fracdisc.systems import FracSystem, SimResult, freq_response, simulate_system, step_response


def direct_solution(sys, u, disc):
    """
    Solve sum_i a_i (D^beta_i y)_k = sum_i b_i (D^alpha_i u)_k sample by sample,
    evaluating every operator with apply_operator on the samples so far
    """
    n = len(u)
    weights = {order: euler_weights(order, disc, n) for _, order in sys.denom + sys.numer}
    lead = sum(coef * weights[order].weights[0] for coef, order in sys.denom)
    y = np.zeros(n)
    for k in range(1, n):
        forced = sum(coef * apply_operator(weights[order], u[:k + 1])[k] for coef, order in sys.numer)
        past = sum(coef * apply_operator(weights[order], y[:k + 1])[k] for coef, order in sys.denom)
        y[k] = (forced - past) / lead
    return y


class TestFracSystem:
    """Validation of plant coefficients"""

    def test_from_pairs_sorts_orders(self, example_plant):
        assert [order for _, order in example_plant.denom] == [0.0, 0.9, 2.2]
        assert example_plant.numer == ((1.0, 0.0),)

    def test_rejects_empty_denominator(self):
        with pytest.raises(FracDiscError, match='at least one term'):
            FracSystem(denom=())

    def test_rejects_zero_leading_coefficient(self):
        with pytest.raises(FracDiscError, match='leading'):
            FracSystem.from_pairs([(1.0, 0.0), (0.0, 1.5)])

    def test_rejects_repeated_orders(self):
        with pytest.raises(FracDiscError, match='strictly increasing'):
            FracSystem.from_pairs([(1.0, 0.5), (2.0, 0.5)])

    def test_rejects_negative_orders(self):
        with pytest.raises(FracDiscError, match='nonnegative'):
            FracSystem.from_pairs([(1.0, -0.5)])

    def test_static_gain(self, example_plant):
        assert example_plant.static_gain() == 1.0
        assert FracSystem.from_pairs([(1.0, 1.0)], [(1.0, 0.0)]).static_gain() == math.inf

    def test_static_gain_undefined_without_zero_order_terms(self):
        """No zero-order term on either side leaves y/u undetermined"""
        assert math.isnan(FracSystem.from_pairs([(1.0, 1.0)], [(1.0, 1.0)]).static_gain())

    def test_feedthrough(self):
        """g_p = b_0 / (a_1/T + a_0) for D y + y = u"""
        sys = FracSystem.from_pairs([(1.0, 1.0), (1.0, 0.0)], [(1.0, 0.0)])
        assert sys.feedthrough(Discretization(sample_period=0.1)) == pytest.approx(1.0 / 11.0, rel=1e-14)

    def test_degenerate_step(self):
        """sum a_i T**-beta_i = 0 is rejected"""
        sys = FracSystem.from_pairs([(-2.0, 0.0), (1.0, 1.0)], [(1.0, 0.0)])
        disc = Discretization(sample_period=0.5)
        with pytest.raises(DegenerateStepError):
            sys.feedthrough(disc)
        with pytest.raises(DegenerateStepError):
            simulate_system(sys, np.ones(5), disc)


class TestSimulateSystem:
    """Explicit time-domain update"""

    def test_integrator_ramp(self):
        """D^1 y = u under a unit step gives y_k = k*T"""
        sys = FracSystem.from_pairs([(1.0, 1.0)], [(1.0, 0.0)])
        result = step_response(sys, Discretization(sample_period=0.1), 10)
        np.testing.assert_allclose(result.y, 0.1 * np.arange(10), rtol=0, atol=1e-12)

    def test_first_order_lag(self):
        """D^1 y + y = 1 reaches 1 - exp(-1) at t = 1"""
        sys = FracSystem.from_pairs([(1.0, 1.0), (1.0, 0.0)], [(1.0, 0.0)])
        result = step_response(sys, Discretization(sample_period=0.001), 1001)
        assert result.t[-1] == pytest.approx(1.0)
        assert abs(result.y[-1] - (1.0 - math.exp(-1.0))) <= 2e-3

    def test_initial_sample_is_zero(self, example_plant, example_disc):
        """y_0 = 0 even with direct feedthrough"""
        sys = FracSystem.from_pairs([(1.0, 0.0)], [(1.0, 0.0)])
        assert step_response(sys, example_disc, 3).y[0] == 0.0
        assert step_response(example_plant, example_disc, 3).y[0] == 0.0

    def test_example_plant_steady_state(self, example_plant, example_disc):
        """Open-loop step response settles at the static gain"""
        result = step_response(example_plant, example_disc, 2000)
        assert abs(result.y[-1] - example_plant.static_gain()) <= 1e-2

    def test_matches_direct_solution(self, example_plant, example_disc):
        """Combined-weight update equals the operator-by-operator solution"""
        u = make_signal('step', 200, example_disc.sample_period)
        fast = simulate_system(example_plant, u, example_disc).y
        np.testing.assert_allclose(fast, direct_solution(example_plant, u, example_disc), rtol=0, atol=1e-10)

    def test_matches_direct_solution_with_numerator_dynamics(self):
        sys = FracSystem.from_pairs([(1.0, 1.5), (2.0, 0.0)], [(0.5, 0.4), (1.0, 0.0)])
        disc = Discretization(sample_period=0.05)
        u = make_signal('sine', 150, 0.05, frequency=2.0)
        fast = simulate_system(sys, u, disc).y
        np.testing.assert_allclose(fast, direct_solution(sys, u, disc), rtol=0, atol=1e-10)

    def test_linearity(self, example_plant):
        """Response to a*u1 + b*u2 is a*y1 + b*y2"""
        disc = Discretization(sample_period=0.05)
        rng = np.random.default_rng(0)
        u1, u2 = rng.normal(size=300), rng.normal(size=300)
        y1 = simulate_system(example_plant, u1, disc).y
        y2 = simulate_system(example_plant, u2, disc).y
        combined = simulate_system(example_plant, 2.0 * u1 - 3.0 * u2, disc).y
        scale = max(1.0, float(np.max(np.abs(combined))))
        np.testing.assert_allclose(combined, 2.0 * y1 - 3.0 * y2, rtol=0, atol=1e-9 * scale)

    def test_integer_orders_match_classical_recursion(self):
        """0.5 y'' + 0.3 y' + y = u agrees with the textbook backward-Euler recursion"""
        T = 0.1
        sys = FracSystem.from_pairs([(0.5, 2.0), (0.3, 1.0), (1.0, 0.0)], [(1.0, 0.0)])
        u = make_signal('step', 200, T)
        y = simulate_system(sys, u, Discretization(sample_period=T)).y

        a2, a1 = 0.5 / T ** 2, 0.3 / T
        expected = np.zeros(200)
        for k in range(1, 200):
            previous = expected[k - 2] if k >= 2 else 0.0
            expected[k] = (u[k] + (2.0 * a2 + a1) * expected[k - 1] - a2 * previous) / (a2 + a1 + 1.0)
        np.testing.assert_allclose(y, expected, rtol=0, atol=1e-12)

    def test_short_memory_converges(self, example_plant):
        """Deviation from the full-memory response shrinks as L grows"""
        T, n = 0.05, 400
        u = make_signal('step', n, T)
        full = simulate_system(example_plant, u, Discretization(sample_period=T)).y
        deviations = []
        for memory_length in (1.0, 2.0, 5.0, 10.0):
            disc = Discretization(sample_period=T, memory_length=memory_length)
            deviations.append(np.max(np.abs(simulate_system(example_plant, u, disc).y - full)))
        assert all(later < earlier for earlier, later in zip(deviations, deviations[1:]))

    def test_rejects_empty_input(self, example_plant, example_disc):
        with pytest.raises(FracDiscError):
            simulate_system(example_plant, [], example_disc)

    def test_rejects_tustin(self, example_plant):
        with pytest.raises(FracDiscError, match='backward-euler'):
            simulate_system(example_plant, np.ones(5), Discretization(sample_period=0.1, rule=Rule.TUSTIN))

    def test_result_columns(self, example_plant, example_disc):
        result = step_response(example_plant, example_disc, 4, amplitude=2.0)
        assert isinstance(result, SimResult)
        assert len(result) == 4
        assert list(result.columns()) == ['t', 'u', 'y']
        assert list(result.u) == [2.0] * 4


class TestFreqResponse:
    """Discrete transfer function on the unit circle"""

    def test_identity_plant(self):
        sys = FracSystem.from_pairs([(1.0, 0.0)], [(1.0, 0.0)])
        response = freq_response(sys, Discretization(sample_period=0.01), [0.1, 1.0, 100.0])
        np.testing.assert_allclose(response, np.ones(3), atol=1e-15)

    def test_integrator_low_frequency(self):
        """1/s has magnitude close to 1/omega well below Nyquist"""
        sys = FracSystem.from_pairs([(1.0, 1.0)], [(1.0, 0.0)])
        response = freq_response(sys, Discretization(sample_period=0.001), [0.001])
        assert abs(response[0]) == pytest.approx(1000.0, rel=1e-2)

    def test_half_integrator(self):
        """s**-0.5 at omega = 1 has magnitude near 1"""
        sys = FracSystem.from_pairs([(1.0, 0.5)], [(1.0, 0.0)])
        response = freq_response(sys, Discretization(sample_period=0.01), [1.0])
        assert abs(abs(response[0]) - 1.0) <= 0.05

    def test_half_integrator_slope(self):
        """-10 dB per decade between omega = 0.1 and 1"""
        sys = FracSystem.from_pairs([(1.0, 0.5)], [(1.0, 0.0)])
        response = freq_response(sys, Discretization(sample_period=0.01), [0.1, 1.0])
        slope = 20.0 * math.log10(abs(response[1])) - 20.0 * math.log10(abs(response[0]))
        assert abs(slope + 10.0) <= 0.5

    def test_tustin_integrator_phase(self):
        """The bilinear integrator keeps exactly -90 degrees"""
        sys = FracSystem.from_pairs([(1.0, 1.0)], [(1.0, 0.0)])
        response = freq_response(sys, Discretization(sample_period=0.1, rule=Rule.TUSTIN), [1.0, 10.0])
        np.testing.assert_allclose(np.degrees(np.angle(response)), [-90.0, -90.0], atol=1e-9)

    @pytest.mark.parametrize('omega', [0.0, 400.0])
    def test_rejects_out_of_range(self, omega):
        sys = FracSystem.from_pairs([(1.0, 0.0)], [(1.0, 0.0)])
        with pytest.raises(FracDiscError, match='omega must lie'):
            freq_response(sys, Discretization(sample_period=0.01), [omega])
