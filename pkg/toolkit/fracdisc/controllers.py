import logging
from dataclasses import dataclass

import numpy as np

from .exceptions import FracDiscError
from .frac_core import (
    Rule,
    apply_operator,
    as_signal,
    euler_weights,
    generating_function,
    operator_weights,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FracPid:
    """
    Discrete PI^lambda D^delta controller

        G_c = K + Ti / omega(z**-1)**lam + Td * omega(z**-1)**delta

    lam = delta = 1 is the classical PID; Ti = 0 gives PD^delta.
    """

    K: float
    Ti: float = 0.0
    Td: float = 0.0
    lam: float = 1.0
    delta: float = 1.0

    def __post_init__(self):
        if self.lam < 0:
            raise FracDiscError(f'lambda must be nonnegative, got {self.lam}')
        if self.delta < 0:
            raise FracDiscError(f'delta must be nonnegative, got {self.delta}')

    @property
    def has_integral(self):
        return self.Ti != 0

    @property
    def has_derivative(self):
        return self.Td != 0


def make_pid(K, Ti, Td):
    return FracPid(K=K, Ti=Ti, Td=Td, lam=1.0, delta=1.0)


def make_pd_delta(K, Td, delta):
    if delta < 0:
        raise FracDiscError(f'delta must be nonnegative, got {delta}')
    return FracPid(K=K, Ti=0.0, Td=Td, lam=0.0, delta=delta)


def controller_response(ctl, error, disc):
    """
    Controller output u_k = K e_k + Ti (I^lam e)_k + Td (D^delta e)_k

    Terms with a zero gain are dropped before any weights are generated, so
    lam or delta never matter when their gain is zero.

    Args:
        ctl: the controller
        error: error samples e_0..e_{N-1}
        disc: backward-Euler discretization, memory policy shared with the plant
    """
    e = as_signal(error, 'error')
    if disc.rule is not Rule.BACKWARD_EULER:
        raise FracDiscError('controller_response requires the backward-euler rule')
    n = e.size
    u = ctl.K * e
    if ctl.has_integral:
        u = u + ctl.Ti * apply_operator(euler_weights(-ctl.lam, disc, n), e)
    if ctl.has_derivative:
        u = u + ctl.Td * apply_operator(euler_weights(ctl.delta, disc, n), e)
    return u


def controller_weights(ctl, disc, n_terms):
    """
    Impulse response of the controller as one weight sequence
    """
    weights = np.zeros(disc.memory_terms(n_terms))
    weights[0] = ctl.K
    if ctl.has_integral:
        weights += ctl.Ti * operator_weights(-ctl.lam, disc, n_terms).weights
    if ctl.has_derivative:
        weights += ctl.Td * operator_weights(ctl.delta, disc, n_terms).weights
    return weights


def controller_feedthrough(ctl, disc):
    """
    du_k/de_k = K + Ti T**lam + Td T**-delta, zero-gain terms omitted
    """
    if disc.rule is not Rule.BACKWARD_EULER:
        raise FracDiscError('controller_feedthrough requires the backward-euler rule')
    gain = ctl.K
    if ctl.has_integral:
        gain = gain + ctl.Ti * operator_weights(-ctl.lam, disc, 1).weights[0]
    if ctl.has_derivative:
        gain = gain + ctl.Td * operator_weights(ctl.delta, disc, 1).weights[0]
    return float(gain)


def controller_freq_response(ctl, disc, omegas):
    base = generating_function(disc, omegas)
    response = np.full(base.shape, complex(ctl.K))
    if ctl.has_integral:
        response = response + ctl.Ti * base ** (-ctl.lam)
    if ctl.has_derivative:
        response = response + ctl.Td * base ** ctl.delta
    return response
