import enum
import logging
import math
from dataclasses import dataclass

import numpy as np

from .exceptions import FracDiscError

logger = logging.getLogger(__name__)

# Relative slack when taking floor(L/T), so that L = 1, T = 0.05 keeps 21 terms
MEMORY_FLOOR_GUARD = 1e-9


def frozen_array(values):
    """
    Return a read-only float64 copy of values
    """
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


class Rule(enum.Enum):
    """
    Generating function used to discretize s**alpha
    """

    BACKWARD_EULER = 'backward-euler'
    TUSTIN = 'tustin'


@dataclass(frozen=True)
class BinomialTable:
    """
    Grünwald-Letnikov coefficients c_0..c_N of (1 - x)**order
    """

    order: float
    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'coeffs', frozen_array(self.coeffs))

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, j):
        return self.coeffs[j]


@dataclass(frozen=True)
class Discretization:
    """
    Sampling setup shared by every operator of a run

    Args:
        sample_period: T in seconds, strictly positive
        rule: generating function, backward Euler or Tustin
        memory_length: L in seconds for the short memory principle,
            None keeps the full history
    """

    sample_period: float
    rule: Rule = Rule.BACKWARD_EULER
    memory_length: float | None = None

    def __post_init__(self):
        if not self.sample_period > 0:
            raise FracDiscError('sample_period must be positive')
        if self.memory_length is not None and not self.memory_length >= self.sample_period:
            raise FracDiscError('memory_length must be at least sample_period')
        object.__setattr__(self, 'rule', Rule(self.rule))

    @property
    def is_short(self):
        return self.memory_length is not None

    def memory_terms(self, n_terms):
        """
        Number of weights kept out of n_terms requested: floor(L/T) + 1 at most
        """
        if self.memory_length is None:
            return n_terms
        ratio = self.memory_length / self.sample_period
        return min(n_terms, math.floor(ratio * (1.0 + MEMORY_FLOOR_GUARD)) + 1)


@dataclass(frozen=True)
class OperatorWeights:
    """
    Convolution weights of the discrete differintegral of a signed order

    Positive order differentiates, negative order integrates.
    """

    order: float
    weights: np.ndarray
    discretization: Discretization

    def __post_init__(self):
        object.__setattr__(self, 'weights', frozen_array(self.weights))

    def __len__(self):
        return len(self.weights)


def _check_n_terms(n_terms):
    if int(n_terms) != n_terms or n_terms < 1:
        raise FracDiscError(f'n_terms must be a positive integer, got {n_terms}')
    return int(n_terms)


def gl_coeffs(order, n_terms):
    """
    Compute c_0..c_{n_terms-1} by the recurrence c_j = (1 - (1 + order)/j) * c_{j-1}

    The running product is sequential, so every entry is bit-for-bit the
    recurrence value and integer orders n give exact zeros past index n.
    """
    n_terms = _check_n_terms(n_terms)
    j = np.arange(1, n_terms, dtype=float)
    factors = 1.0 - (1.0 + order) / j
    coeffs = np.concatenate(([1.0], np.cumprod(factors)))
    return BinomialTable(order=float(order), coeffs=coeffs)


def gl_coeff_direct(order, j):
    """
    Evaluate c_j as the product of (i - 1 - order)/i over i = 1..j
    """
    if j < 0:
        raise FracDiscError(f'j must be nonnegative, got {j}')
    return float(math.prod((i - 1 - order) / i for i in range(1, int(j) + 1)))


def euler_weights(order, disc, n_terms):
    """
    Backward-difference operator weights T**(-order) * c_j

    Args:
        order: signed order, negative for integration
        disc: backward-Euler discretization; its memory policy truncates the
            series to floor(L/T) + 1 terms
        n_terms: requested length, usually the signal length
    """
    if disc.rule is not Rule.BACKWARD_EULER:
        raise FracDiscError('euler_weights requires the backward-euler rule')
    n = disc.memory_terms(_check_n_terms(n_terms))
    table = gl_coeffs(order, n)
    weights = disc.sample_period ** (-order) * table.coeffs
    return OperatorWeights(order=float(order), weights=weights, discretization=disc)


def tustin_weights(order, disc, n_terms):
    """
    Power series of ((2/T) * (1 - x)/(1 + x))**order in x = z**-1

    (1 - x)**order has coefficients c_j(order) and (1 + x)**(-order) has
    (-1)**j * c_j(-order); the series is their truncated convolution.
    """
    if disc.rule is not Rule.TUSTIN:
        raise FracDiscError('tustin_weights requires the tustin rule')
    n = disc.memory_terms(_check_n_terms(n_terms))
    forward = gl_coeffs(order, n).coeffs
    alternating = (-1.0) ** np.arange(n) * gl_coeffs(-order, n).coeffs
    series = np.convolve(forward, alternating)[:n]
    weights = (2.0 / disc.sample_period) ** order * series
    return OperatorWeights(order=float(order), weights=weights, discretization=disc)


def operator_weights(order, disc, n_terms):
    if disc.rule is Rule.TUSTIN:
        return tustin_weights(order, disc, n_terms)
    return euler_weights(order, disc, n_terms)


def as_signal(values, name='signal'):
    """
    Coerce values to a non-empty 1-D float array
    """
    array = np.asarray(values, dtype=float)
    if array.ndim != 1 or array.size == 0:
        raise FracDiscError(f'{name} must be a non-empty 1-D sequence')
    return array


def apply_operator(weights, signal):
    """
    Causal convolution output[k] = sum_{j <= min(k, N)} w_j * signal[k - j]

    Samples before k = 0 are taken as zero.
    """
    samples = as_signal(signal)
    return np.convolve(weights.weights, samples)[: samples.size]


def make_signal(kind, n_steps, sample_period, amplitude=1.0, onset=0, frequency=1.0):
    """
    Build one of the standard input sequences on t_k = k*T

    Args:
        kind: 'step', 'ramp', 'impulse', 'sine' or 'constant'
        n_steps: number of samples
        sample_period: T in seconds
        amplitude: scale of the signal
        onset: first sample index at which the signal is nonzero
        frequency: angular frequency of 'sine' in rad/s
    """
    n_steps = _check_n_terms(n_steps)
    k = np.arange(n_steps)
    active = k >= onset
    if kind == 'step':
        values = np.where(active, amplitude, 0.0)
    elif kind == 'ramp':
        values = np.where(active, amplitude * (k - onset) * sample_period, 0.0)
    elif kind == 'impulse':
        values = np.where(k == onset, amplitude, 0.0)
    elif kind == 'sine':
        values = np.where(active, amplitude * np.sin(frequency * (k - onset) * sample_period), 0.0)
    elif kind == 'constant':
        values = np.full(n_steps, float(amplitude))
    else:
        raise FracDiscError(f'unknown signal kind: {kind}')
    return values.astype(float)


def check_omegas(omegas, sample_period):
    """
    Validate a frequency grid against the Nyquist limit pi/T
    """
    omegas = as_signal(omegas, 'omegas')
    nyquist = math.pi / sample_period
    bad = omegas[(omegas <= 0) | (omegas > nyquist)]
    if bad.size:
        raise FracDiscError(f'omega must lie in (0, pi/T] = (0, {nyquist:.12g}], got {bad[0]:.12g}')
    return omegas


def generating_function(disc, omegas):
    """
    omega(z**-1) of the discretization evaluated at z = exp(i*omega*T)
    """
    omegas = check_omegas(omegas, disc.sample_period)
    shift = np.exp(-1j * omegas * disc.sample_period)
    if disc.rule is Rule.TUSTIN:
        return (2.0 / disc.sample_period) * (1.0 - shift) / (1.0 + shift)
    return (1.0 - shift) / disc.sample_period
