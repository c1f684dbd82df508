import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import DegenerateStepError, FracDiscError, PoleError
from .frac_core import (
    Rule,
    as_signal,
    euler_weights,
    frozen_array,
    generating_function,
    make_signal,
    operator_weights,
)

logger = logging.getLogger(__name__)

# |denominator| below this is treated as a pole hit
POLE_TOLERANCE = 1e-300


def _normalize_terms(terms, name):
    pairs = tuple((float(coef), float(order)) for coef, order in terms)
    orders = [order for _, order in pairs]
    if any(order < 0 for order in orders):
        raise FracDiscError(f'{name} orders must be nonnegative')
    if any(lower >= upper for lower, upper in zip(orders, orders[1:])):
        raise FracDiscError(f'{name} orders must be strictly increasing')
    return pairs


@dataclass(frozen=True)
class FracSystem:
    """
    Fractional-order LTI plant

        sum_i a_i D^beta_i y = sum_i b_i D^alpha_i u

    denom and numer hold (coefficient, order) pairs sorted by increasing
    order; the last denominator pair is the leading term.
    """

    denom: tuple
    numer: tuple = ()

    def __post_init__(self):
        denom = _normalize_terms(self.denom, 'denominator')
        numer = _normalize_terms(self.numer, 'numerator')
        if not denom:
            raise FracDiscError('denominator must have at least one term')
        if denom[-1][0] == 0:
            raise FracDiscError('leading denominator coefficient must be nonzero')
        object.__setattr__(self, 'denom', denom)
        object.__setattr__(self, 'numer', numer)

    @classmethod
    def from_pairs(cls, denominator, numerator=()):
        """
        Build a system from (coefficient, order) pairs in any order
        """
        return cls(
            denom=sorted(denominator, key=lambda pair: pair[1]),
            numer=sorted(numerator, key=lambda pair: pair[1]),
        )

    def static_gain(self):
        """
        Steady-state ratio y/u: zero-order numerator over zero-order denominator

        inf when only the denominator lacks a zero-order term, nan when both do.
        """
        a0 = sum(coef for coef, order in self.denom if order == 0)
        b0 = sum(coef for coef, order in self.numer if order == 0)
        if a0 == 0:
            return math.inf if b0 else math.nan
        return b0 / a0

    def _leading(self, terms, disc):
        return sum(coef * operator_weights(order, disc, 1).weights[0] for coef, order in terms)

    def feedthrough(self, disc):
        """
        Instantaneous gain g_p = dy_k/du_k of the discretized plant
        """
        lead = self._leading(self.denom, disc)
        if lead == 0:
            raise DegenerateStepError('implicit step denominator sum(a_i * T**-beta_i) is zero')
        return self._leading(self.numer, disc) / lead


@dataclass(frozen=True)
class SimResult:
    """
    Open-loop run: t, u, y sampled at t_k = k*T
    """

    sample_period: float
    t: np.ndarray
    u: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        for name in ('t', 'u', 'y'):
            object.__setattr__(self, name, frozen_array(getattr(self, name)))
        if not len(self.t) == len(self.u) == len(self.y):
            raise FracDiscError('SimResult columns must have equal length')

    @classmethod
    def from_samples(cls, sample_period, u, y):
        t = np.arange(len(u)) * sample_period
        return cls(sample_period=sample_period, t=t, u=u, y=y)

    def __len__(self):
        return len(self.t)

    def columns(self):
        return {'t': self.t, 'u': self.u, 'y': self.y}


def combined_weights(terms, disc, n_terms):
    """
    sum_i coef_i * (T**-order_i * c_j(order_i)) as one weight sequence
    """
    length = disc.memory_terms(n_terms)
    combined = np.zeros(length)
    for coef, order in terms:
        combined += coef * euler_weights(order, disc, n_terms).weights
    return combined


def history_sum(weights, samples, k, start=1):
    """
    sum_{j=start}^{min(k, N)} weights[j] * samples[k - j]
    """
    last = min(k, len(weights) - 1)
    if last < start:
        return 0.0
    return float(np.dot(weights[start:last + 1], samples[k - last:k - start + 1][::-1]))


def simulate_system(sys, u, disc):
    """
    Sampled response of a FracSystem by the explicit Grünwald-Letnikov update

    y_0 = 0 and, for k >= 1,

        y_k = (sum_i b_i T^-alpha_i sum_{j=0}^{k} c_j u_{k-j}
               - sum_i a_i T^-beta_i sum_{j=1}^{k} c_j y_{k-j})
              / sum_i a_i T^-beta_i

    with the b-sum running over every numerator term including b_0, and both
    history sums cut at floor(L/T) under short memory.

    Args:
        sys: the plant
        u: input samples u_0..u_{N-1}
        disc: backward-Euler discretization
    """
    u = as_signal(u, 'input')
    if disc.rule is not Rule.BACKWARD_EULER:
        raise FracDiscError('time-domain simulation requires the backward-euler rule')
    n = u.size
    y_weights = combined_weights(sys.denom, disc, n)
    u_weights = combined_weights(sys.numer, disc, n)
    lead = y_weights[0]
    if lead == 0:
        raise DegenerateStepError('implicit step denominator sum(a_i * T**-beta_i) is zero')

    logger.debug(
        'simulating %d samples, T=%g, memory=%s',
        n, disc.sample_period, disc.memory_length or 'full',
    )
    forced = np.convolve(u_weights, u)[:n] if sys.numer else np.zeros(n)
    y = np.zeros(n)
    for k in range(1, n):
        y[k] = (forced[k] - history_sum(y_weights, y, k)) / lead
    return SimResult.from_samples(disc.sample_period, u, y)


def step_response(sys, disc, n_steps, amplitude=1.0):
    u = make_signal('step', n_steps, disc.sample_period, amplitude=amplitude)
    return simulate_system(sys, u, disc)


def freq_response(sys, disc, omegas, n_terms=None):
    """
    Discrete transfer function G_s evaluated on the unit circle

    Each operator is the generating function at z = exp(i*omega*T) raised to
    its order on the principal branch, so n_terms plays no part here.
    """
    base = generating_function(disc, omegas)
    numerator = sum((coef * base ** order for coef, order in sys.numer), np.zeros_like(base))
    denominator = sum((coef * base ** order for coef, order in sys.denom), np.zeros_like(base))
    if np.any(np.abs(denominator) < POLE_TOLERANCE):
        raise PoleError('frequency response evaluated on a pole of the plant')
    return numerator / denominator
