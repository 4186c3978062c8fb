"""Seedable simulators for the three stationary test processes.

All output lands on a regular grid t0 + i*h as a Trajectory. The Gaussian
process with covariance exp(-|t|/2) is Markov, so exact O(length) recursion
replaces dense Cholesky. The stable moving averages ride on an integer
innovation lattice convolved with a finite exponential kernel whose stable
norm is exactly one, making the marginal law known in closed form. The
autoregressive simulator is the generic recursion with pluggable innovation
law and burn-in.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
from scipy import signal

from .csvio import read_csv, write_csv
from .distributions import Cauchy, Levy, Marginal, Gaussian
from .errors import (
    DomainError,
    GridMisaligned,
    InvalidGrid,
    NonFiniteInput,
    NonStationaryCoefficients,
    Unsupported,
)

__all__ = [
    "Trajectory",
    "GaussExpCov",
    "StableMovingAverage",
    "ArStudentT",
    "ProcessSpec",
    "default_kernel",
    "simulate_gauss_exp_cov",
    "simulate_stable_ma",
    "simulate_ar",
    "simulate",
    "write_trajectory_csv",
    "read_trajectory_csv",
]

KERNEL_SUPPORT = 251  # taps at integer lags 0..250; both stable norms equal 1 exactly


@dataclass(frozen=True)
class Trajectory:
    """Process values on the grid t0 + i*h with a declared marginal law."""

    t0: float
    h: float
    values: np.ndarray
    marginal: Optional[Marginal] = None

    def __post_init__(self):
        if not (np.isfinite(self.t0) and np.isfinite(self.h)) or self.h <= 0:
            raise InvalidGrid("need finite t0 and step h > 0")
        v = np.asarray(self.values, dtype=float).ravel()
        if v.size < 1:
            raise InvalidGrid("trajectory must hold at least one value")
        if not np.all(np.isfinite(v)):
            raise NonFiniteInput("trajectory values contain NaN or infinity")
        object.__setattr__(self, "values", v)

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.h * np.arange(self.values.size)

    def index_of(self, t: float) -> int:
        """Grid index of time t; GridMisaligned if t is off-lattice."""
        k = (t - self.t0) / self.h
        ki = int(round(k))
        if abs(k - ki) > 1e-9:
            raise GridMisaligned(f"t={t} is not on the grid (t0={self.t0}, h={self.h})")
        if not (0 <= ki < self.values.size):
            raise GridMisaligned(f"t={t} outside the simulated window")
        return ki


@dataclass(frozen=True)
class GaussExpCov:
    """Stationary Gaussian process, N(0,1) marginal, covariance exp(-|t|/2)."""

    kind = "gauss_exp_cov"


@dataclass(frozen=True)
class StableMovingAverage:
    """Moving average of i.i.d. stable innovations over an integer lattice.

    alpha = 1 uses symmetric Cauchy innovations, alpha = 0.5 totally skewed
    positive (Levy) innovations. The kernel must have stable norm 1 so the
    marginal is the standard law of the same family.
    """

    alpha: float
    kernel: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.alpha not in (0.5, 1.0):
            raise Unsupported(f"alpha must be 0.5 or 1.0, got {self.alpha}")
        k = self.kernel if self.kernel is not None else default_kernel(self.alpha)
        k = np.asarray(k, dtype=float).ravel()
        if not np.all(np.isfinite(k)):
            raise NonFiniteInput("kernel contains non-finite values")
        if self.alpha == 0.5 and np.any(k < 0):
            raise DomainError("alpha=0.5 requires a nonnegative kernel")
        norm = np.sum(np.abs(k)) if self.alpha == 1.0 else np.sum(np.sqrt(k)) ** 2
        if abs(norm - 1.0) > 1e-6:
            raise DomainError(f"kernel stable norm must be 1, got {norm!r}")
        object.__setattr__(self, "kernel", k)

    @property
    def marginal(self) -> Marginal:
        return Cauchy(0.0, 1.0) if self.alpha == 1.0 else Levy(1.0)


@dataclass(frozen=True)
class ArStudentT:
    """AR(p) recursion X(t) = phi_1 X(t-ph) + ... + phi_p X(t-h) + xi_t.

    Note the index convention: phi_1 multiplies the most distant lag. The
    innovation law is pluggable (experiments use Student-t, nu = 0.8).
    """

    phi: tuple
    innovation: Marginal

    def __post_init__(self):
        phi = tuple(float(c) for c in self.phi)
        if len(phi) < 1 or not all(np.isfinite(phi)):
            raise NonFiniteInput("need at least one finite coefficient")
        # characteristic polynomial 1 - sum_j phi_j z^(p-j+1); lag-k
        # coefficient is phi_{p-k+1}
        a = np.array(phi[::-1])  # a[k-1] multiplies lag k
        roots = np.roots(np.concatenate([-a[::-1], [1.0]]))
        if np.any(np.abs(roots) <= 1.0):
            raise NonStationaryCoefficients(
                f"characteristic roots {np.abs(roots)} must lie outside the unit circle"
            )
        object.__setattr__(self, "phi", phi)

    @property
    def lag_coeffs(self) -> np.ndarray:
        """Coefficients ordered by lag: index k-1 multiplies X(t-kh)."""
        return np.array(self.phi[::-1], dtype=float)


ProcessSpec = Union[GaussExpCov, StableMovingAverage, ArStudentT]


def default_kernel(alpha: float) -> np.ndarray:
    """Exponential moving-average kernel with unit stable norm.

    m(x) = e^{-0.02x} * (1-e^{-0.02})/(1-e^{-5.02})        for alpha = 1,
    m(x) = e^{-0.02x} * (1-e^{-0.01})^2/(1-e^{-2.51})^2    for alpha = 0.5,
    on integer lags x = 0..250. With 251 taps both stable norms are exactly
    one by a geometric-series identity; a 252nd tap would break it at 1e-4.
    """
    x = np.arange(KERNEL_SUPPORT, dtype=float)
    if alpha == 1.0:
        return np.exp(-0.02 * x) * (1.0 - np.exp(-0.02)) / (1.0 - np.exp(-5.02))
    if alpha == 0.5:
        return np.exp(-0.02 * x) * (1.0 - np.exp(-0.01)) ** 2 / (1.0 - np.exp(-2.51)) ** 2
    raise Unsupported(f"no default kernel for alpha={alpha}")


def _check_grid(t0, h, length):
    if not (np.isfinite(t0) and np.isfinite(h)) or h <= 0 or int(length) < 1:
        raise InvalidGrid("need finite t0, h > 0 and length >= 1")
    return float(t0), float(h), int(length)


def simulate_gauss_exp_cov(t0, h, length, rng) -> Trajectory:
    """Exact path of the Gaussian process via its Markov recursion.

    X(t+h) = r X(t) + sqrt(1-r^2) Z with r = e^{-h/2} and X(t0) ~ N(0,1).
    """
    t0, h, length = _check_grid(t0, h, length)
    r = np.exp(-h / 2.0)
    innov = rng.standard_normal(length)
    innov[1:] *= np.sqrt(1.0 - r * r)
    values = signal.lfilter([1.0], [1.0, -r], innov)
    return Trajectory(t0, h, values, Gaussian(0.0, 1.0))


def simulate_stable_ma(spec: StableMovingAverage, t0, h, length, rng) -> Trajectory:
    """Stable moving average on the lattice hZ.

    Innovations are drawn on integer sites covering
    [t0/h - (taps-1), t0/h + length - 1] and convolved with the kernel, so a
    single call yields genuinely dependent values across its whole window.
    """
    t0, h, length = _check_grid(t0, h, length)
    if abs(t0 / h - round(t0 / h)) > 1e-9:
        raise GridMisaligned(f"t0={t0} must sit on the lattice hZ (h={h})")
    taps = spec.kernel.size
    innov = spec.marginal.sample(length + taps - 1, rng)
    values = np.convolve(innov, spec.kernel, mode="valid")
    return Trajectory(t0, h, values, spec.marginal)


def simulate_ar(spec: ArStudentT, t0, h, length, burn_in, rng) -> Trajectory:
    """AR(p) path from zero initial state with the first burn_in steps dropped."""
    t0, h, length = _check_grid(t0, h, length)
    if int(burn_in) < 0:
        raise InvalidGrid("burn_in must be >= 0")
    burn_in = int(burn_in)
    innov = spec.innovation.sample(burn_in + length, rng)
    a = np.concatenate([[1.0], -spec.lag_coeffs])
    values = signal.lfilter([1.0], a, innov)[burn_in:]
    return Trajectory(t0, h, values, None)


DEFAULT_AR_BURN_IN = 10_000


def simulate(spec: ProcessSpec, t0, h, length, rng, burn_in=DEFAULT_AR_BURN_IN) -> Trajectory:
    """Dispatch on the process kind."""
    if isinstance(spec, GaussExpCov):
        return simulate_gauss_exp_cov(t0, h, length, rng)
    if isinstance(spec, StableMovingAverage):
        return simulate_stable_ma(spec, t0, h, length, rng)
    if isinstance(spec, ArStudentT):
        return simulate_ar(spec, t0, h, length, burn_in, rng)
    raise TypeError(f"unknown process spec {type(spec).__name__}")


def write_trajectory_csv(path, traj: Trajectory):
    write_csv(path, ["t", "value"], zip(traj.times, traj.values))


def read_trajectory_csv(path, marginal: Optional[Marginal] = None) -> Trajectory:
    """Rebuild a Trajectory from a "t,value" file (grid inferred from times)."""
    header, rows = read_csv(path)
    if header[:2] != ["t", "value"]:
        raise InvalidGrid(f"unexpected header {header}")
    t = np.array([float(r[0]) for r in rows])
    v = np.array([float(r[1]) for r in rows])
    h = float(t[1] - t[0]) if t.size > 1 else 1.0
    return Trajectory(float(t[0]), h, v, marginal)
