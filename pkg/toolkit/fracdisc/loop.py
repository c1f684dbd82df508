import logging
from dataclasses import dataclass

import numpy as np

from .controllers import (
    controller_feedthrough,
    controller_freq_response,
    controller_response,
    controller_weights,
    make_pd_delta,
)
from .exceptions import AlgebraicLoopError, DegenerateStepError, FracDiscError, PoleError
from .frac_core import (
    Discretization,
    Rule,
    apply_operator,
    as_signal,
    euler_weights,
    frozen_array,
    gl_coeffs,
    make_signal,
)
from .systems import POLE_TOLERANCE, FracSystem, combined_weights, freq_response, history_sum

logger = logging.getLogger(__name__)

# Sample index of the delayed unit step: w_0 = w_1 = 0, w_k = 1 for k >= 2
DELAYED_STEP_ONSET = 2


@dataclass(frozen=True)
class LoopResult:
    """
    Closed-loop run: setpoint w, error e = w - y, controller output u and
    plant output y, sampled at t_k = k*T
    """

    sample_period: float
    t: np.ndarray
    w: np.ndarray
    e: np.ndarray
    u: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        for name in ('t', 'w', 'e', 'u', 'y'):
            object.__setattr__(self, name, frozen_array(getattr(self, name)))
        lengths = {len(self.t), len(self.w), len(self.e), len(self.u), len(self.y)}
        if len(lengths) != 1:
            raise FracDiscError('LoopResult columns must have equal length')

    @classmethod
    def from_samples(cls, sample_period, w, u, y):
        w = np.asarray(w, dtype=float)
        y = np.asarray(y, dtype=float)
        return cls(
            sample_period=sample_period,
            t=np.arange(len(w)) * sample_period,
            w=w,
            e=w - y,
            u=u,
            y=y,
        )

    def __len__(self):
        return len(self.t)

    def columns(self):
        return {'t': self.t, 'w': self.w, 'e': self.e, 'u': self.u, 'y': self.y}


@dataclass(frozen=True)
class ExampleParams:
    """
    Plant 0.8 D^2.2 y + 0.5 D^0.9 y + y = u under the PD^1.286 controller
    K = 50, Td = 5.326, sampled at T for n_steps samples
    """

    a2: float = 0.8
    a1: float = 0.5
    a0: float = 1.0
    beta2: float = 2.2
    beta1: float = 0.9
    Td: float = 5.326
    K: float = 50.0
    delta: float = 1.286
    T: float = 0.05
    n_steps: int = 2000

    def __post_init__(self):
        if not self.T > 0:
            raise FracDiscError('sample_period must be positive')
        if self.n_steps < 1:
            raise FracDiscError(f'n_steps must be at least 1, got {self.n_steps}')
        if self.delta < 0:
            raise FracDiscError(f'delta must be nonnegative, got {self.delta}')

    def plant(self):
        return FracSystem.from_pairs(
            denominator=[(self.a0, 0.0), (self.a1, self.beta1), (self.a2, self.beta2)],
            numerator=[(1.0, 0.0)],
        )

    def controller(self):
        return make_pd_delta(self.K, self.Td, self.delta)

    def discretization(self):
        return Discretization(sample_period=self.T)


def step_setpoint(n_steps, onset=DELAYED_STEP_ONSET, amplitude=1.0):
    """
    Step setpoint, zero before sample onset; onset=0 steps at k = 0
    """
    return make_signal('step', n_steps, 1.0, amplitude=amplitude, onset=onset)


def simulate_loop(sys, ctl, setpoint, disc):
    """
    Close the feedback loop w -> e -> controller -> u -> plant -> y

    Every step splits plant and controller into a history part and an
    instantaneous part,

        y_k = P_hist + g_p u_k,    u_k = C_hist + g_c (w_k - y_k)

    and solves the pair for y_k in closed form. y_0 is not forced: with zero
    history it is g_p g_c w_0 / (1 + g_p g_c).

    Args:
        sys: the plant
        ctl: the controller
        setpoint: w_0..w_{N-1}
        disc: backward-Euler discretization shared by plant and controller
    """
    w = as_signal(setpoint, 'setpoint')
    if disc.rule is not Rule.BACKWARD_EULER:
        raise FracDiscError('loop simulation requires the backward-euler rule')
    n = w.size
    g_p = sys.feedthrough(disc)
    g_c = controller_feedthrough(ctl, disc)
    loop_gain = 1.0 + g_p * g_c
    if loop_gain == 0:
        raise AlgebraicLoopError(f'degenerate algebraic loop: 1 + g_p*g_c = 0 (g_p={g_p:.12g}, g_c={g_c:.12g})')

    y_weights = combined_weights(sys.denom, disc, n)
    u_weights = combined_weights(sys.numer, disc, n)
    e_weights = controller_weights(ctl, disc, n)
    lead = y_weights[0]

    logger.debug(
        'closing loop over %d samples, T=%g, memory=%s, g_p=%g, g_c=%g',
        n, disc.sample_period, disc.memory_length or 'full', g_p, g_c,
    )
    y = np.zeros(n)
    u = np.zeros(n)
    e = np.zeros(n)
    for k in range(n):
        plant_history = (history_sum(u_weights, u, k) - history_sum(y_weights, y, k)) / lead
        controller_history = history_sum(e_weights, e, k)
        y[k] = (plant_history + g_p * controller_history + g_p * g_c * w[k]) / loop_gain
        e[k] = w[k] - y[k]
        u[k] = controller_history + g_c * e[k]
    return LoopResult.from_samples(disc.sample_period, w, u, y)


def simulate_example_direct(params):
    """
    Closed-loop difference equation of the example, written out term by term

        y_k = (K w_k + Td T^-d sum_{j=0}^{k} c_j(d) w_{k-j}
               - a2 T^-b2 sum_{j=1}^{k} c_j(b2) y_{k-j}
               - a1 T^-b1 sum_{j=1}^{k} c_j(b1) y_{k-j}
               - Td T^-d sum_{j=1}^{k} c_j(d) y_{k-j})
              / (a2 T^-b2 + a1 T^-b1 + Td T^-d + a0 + K)

    with y_0 = 0, w_0 = w_1 = 0 and w_k = 1 from k = 2 on.
    """
    if params.n_steps < 2:
        raise FracDiscError(f'n_steps must be at least 2, got {params.n_steps}')
    n, T = params.n_steps, params.T
    w = step_setpoint(n)
    c_beta2 = gl_coeffs(params.beta2, n).coeffs
    c_beta1 = gl_coeffs(params.beta1, n).coeffs
    c_delta = gl_coeffs(params.delta, n).coeffs
    s_beta2 = params.a2 * T ** (-params.beta2)
    s_beta1 = params.a1 * T ** (-params.beta1)
    s_delta = params.Td * T ** (-params.delta)
    denominator = (
        s_beta2 * c_beta2[0] + s_beta1 * c_beta1[0] + s_delta * c_delta[0] + (params.a0 + params.K)
    )
    if denominator == 0:
        raise DegenerateStepError('closed-loop step denominator is zero')

    y = np.zeros(n)
    for k in range(1, n):
        numerator = (
            params.K * w[k]
            + s_delta * history_sum(c_delta, w, k, start=0)
            - s_beta2 * history_sum(c_beta2, y, k)
            - s_beta1 * history_sum(c_beta1, y, k)
            - s_delta * history_sum(c_delta, y, k)
        )
        y[k] = numerator / denominator
    u = controller_response(params.controller(), w - y, params.discretization())
    return LoopResult.from_samples(T, w, u, y)


def closed_loop_equation_residual(result, params, relative=False):
    """
    Largest |lhs - rhs| of the discretized closed-loop equation

        a2 D^b2 y + a1 D^b1 y + Td D^d y + (a0 + K) y = K w + Td D^d w

    over all samples, full memory. With relative=True the residual is divided
    by the largest magnitude of any single term.
    """
    n = len(result)
    if n != params.n_steps:
        raise FracDiscError(f'result has {n} samples, params expect {params.n_steps}')
    if result.sample_period != params.T:
        raise FracDiscError(f'result sampled at T={result.sample_period}, params expect T={params.T}')
    disc = params.discretization()

    def differintegral(order, samples):
        return apply_operator(euler_weights(order, disc, n), samples)

    lhs = [
        params.a2 * differintegral(params.beta2, result.y),
        params.a1 * differintegral(params.beta1, result.y),
        params.Td * differintegral(params.delta, result.y),
        (params.a0 + params.K) * result.y,
    ]
    rhs = [params.K * result.w, params.Td * differintegral(params.delta, result.w)]
    residual = float(np.max(np.abs(sum(lhs) - sum(rhs))))
    if not relative:
        return residual
    scale = max(float(np.max(np.abs(term))) for term in lhs + rhs)
    return residual / scale if scale > 0 else residual


def closed_loop_freq_response(sys, ctl, disc, omegas):
    """
    Complementary sensitivity G_c G_s / (1 + G_c G_s) on the unit circle
    """
    open_loop = controller_freq_response(ctl, disc, omegas) * freq_response(sys, disc, omegas)
    return_difference = 1.0 + open_loop
    if np.any(np.abs(return_difference) < POLE_TOLERANCE):
        raise PoleError('closed-loop frequency response evaluated on a pole')
    return open_loop / return_difference
