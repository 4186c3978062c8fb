"""Learning-sample extraction and the empirical prediction functionals.

A predictor with weight vector ``w`` maps the values observed at the
forecast-sample times, all shifted back by a common lag, to a guess for the
equally shifted target value. Sliding that lag along the observation window
yields N learning rows. Three per-row functionals are available:

* Q2 - unconstrained: Q2_j = 2 F(y_j v g_j) - F(g_j). Its mean equals
  mean F(y) plus the empirical excursion metric between target and
  prediction, so minimizing it is an L1-type regression in probability space.
* Q3 - adds gamma * [F(g_j)^2 - F(g_j) v Y_j] with Y_j a bootstrap copy of
  the predictor's F-value; penalizes marginal-law mismatch via a squared
  Wasserstein surrogate.
* Q4 - same penalty in a running-rank form over rows i < j; no bootstrap.

All three have exact subgradients in the weights; kinks (ties in the max
terms) use strict-inequality indicators without smoothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .distributions import Marginal
from .errors import (
    DomainError,
    GridMisaligned,
    IndexOutOfRange,
    InvalidGrid,
    LengthMismatch,
    MissingBootstrap,
    NoValidShifts,
    NonFiniteInput,
)
from .processes import Trajectory
from .rng import RngStream, as_generator

__all__ = [
    "ForecastDesign",
    "LearningSamples",
    "Predictor",
    "ObjectiveSpec",
    "extract_learning_samples",
    "predict",
    "q_value",
    "objective_value",
    "subgradient",
    "mean_subgradient",
    "centered_objective",
]

PREDICTOR_KINDS = ("linear", "squared", "max")
VARIANTS = ("Q2", "Q3", "Q4")


def _aligned_index(value, h, what):
    k = value / h
    ki = round(k)
    if abs(value - ki * h) > 1e-9:
        raise GridMisaligned(f"{what}={value} is not a multiple of h={h}")
    return int(ki)


@dataclass(frozen=True)
class ForecastDesign:
    """Forecast-sample offsets, target time, grid step, and observation window."""

    offsets: tuple
    target: float
    h: float
    window: tuple

    def __post_init__(self):
        if self.h <= 0 or not np.isfinite(self.h):
            raise InvalidGrid("h must be positive and finite")
        off = tuple(float(v) for v in self.offsets)
        if len(off) < 1:
            raise InvalidGrid("need at least one forecast offset")
        if any(not np.isfinite(v) for v in off) or not np.isfinite(self.target):
            raise NonFiniteInput("offsets and target must be finite")
        for v in off + (self.target,):
            _aligned_index(v, self.h, "offset")
        if any(abs(self.target - v) < self.h / 2 for v in off):
            raise InvalidGrid("target must not belong to the forecast sample")
        w = (float(self.window[0]), float(self.window[1]))
        if w[1] < w[0]:
            raise InvalidGrid("window upper bound below lower bound")
        object.__setattr__(self, "offsets", off)
        object.__setattr__(self, "window", w)

    @property
    def n(self) -> int:
        return len(self.offsets)


@dataclass(frozen=True)
class LearningSamples:
    """Stacked learning rows: y[j] is the target value under shift s_j and
    X[j] holds the forecast-sample values under the same shift."""

    y: np.ndarray
    X: np.ndarray
    shifts: np.ndarray

    def __post_init__(self):
        y = np.asarray(self.y, dtype=float).ravel()
        X = np.asarray(self.X, dtype=float)
        s = np.asarray(self.shifts, dtype=float).ravel()
        if X.ndim != 2 or X.shape[0] != y.size or s.size != y.size:
            raise LengthMismatch("y, X rows and shifts must agree in length")
        if y.size < 1:
            raise NoValidShifts("no learning rows")
        if not (np.all(np.isfinite(y)) and np.all(np.isfinite(X))):
            raise NonFiniteInput("learning samples contain non-finite values")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "shifts", s)

    @property
    def count(self) -> int:
        return self.y.size

    @property
    def n(self) -> int:
        return self.X.shape[1]


@dataclass(frozen=True)
class Predictor:
    """Weight vector plus the functional form it feeds.

    linear:  g = sum_i w_i x_i
    squared: g = sum_i w_i^2 x_i  (keeps coefficients nonnegative by design,
             useful on positive-support processes)
    max:     g = max_i w_i x_i
    """

    kind: str
    weights: np.ndarray

    def __post_init__(self):
        if self.kind not in PREDICTOR_KINDS:
            raise DomainError(f"kind must be one of {PREDICTOR_KINDS}")
        w = np.asarray(self.weights, dtype=float).ravel()
        if w.size < 1 or not np.all(np.isfinite(w)):
            raise NonFiniteInput("weights must be finite and non-empty")
        object.__setattr__(self, "weights", w)

    def with_weights(self, w) -> "Predictor":
        return Predictor(self.kind, w)


@dataclass(frozen=True)
class ObjectiveSpec:
    """Functional variant, penalty strength, marginal law, bootstrap stream."""

    variant: str
    marginal: Marginal
    gamma: float = 0.0
    bootstrap: Optional[RngStream] = None

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise DomainError(f"variant must be one of {VARIANTS}")
        if not np.isfinite(self.gamma) or self.gamma < 0:
            raise DomainError("gamma must be finite and >= 0")


def extract_learning_samples(traj: Trajectory, design: ForecastDesign, max_n=None, rng=None) -> LearningSamples:
    """Learning rows from every grid shift that keeps the design in-window.

    Returns rows in increasing shift order. When max_n caps the count, rows
    are subsampled uniformly without replacement and re-sorted by shift.
    """
    if abs(design.h - traj.h) > 1e-12:
        raise InvalidGrid(f"design step {design.h} differs from trajectory step {traj.h}")
    h = traj.h
    # absolute times to lattice indices relative to traj.t0
    pts = np.array([_aligned_index(v - traj.t0, h, "offset") for v in design.offsets + (design.target,)])
    w_lo, w_hi = design.window
    lo = max(0, int(np.ceil((w_lo - traj.t0) / h - 1e-9)))
    hi = min(traj.values.size - 1, int(np.floor((w_hi - traj.t0) / h + 1e-9)))
    kmin = lo - int(pts.min())
    kmax = hi - int(pts.max())
    if kmax < kmin:
        raise NoValidShifts("observation window shorter than the design span")
    ks = np.arange(kmin, kmax + 1)
    if max_n is not None and ks.size > int(max_n):
        if rng is None:
            raise DomainError("max_n subsampling needs an rng")
        g = as_generator(rng)
        ks = np.sort(g.choice(ks, size=int(max_n), replace=False))
    idx_f = pts[:-1]
    y = traj.values[pts[-1] + ks]
    X = traj.values[idx_f[None, :] + ks[:, None]]
    return LearningSamples(y, X, ks * h)


def predict(p: Predictor, x_row) -> float:
    """Predictor value on one design row."""
    x = np.asarray(x_row, dtype=float).ravel()
    if x.size != p.weights.size:
        raise LengthMismatch(f"row length {x.size} != weight length {p.weights.size}")
    if p.kind == "linear":
        return float(p.weights @ x)
    if p.kind == "squared":
        return float((p.weights * p.weights) @ x)
    return float(np.max(p.weights * x))


def _predict_rows(p: Predictor, X) -> np.ndarray:
    if p.kind == "linear":
        return X @ p.weights
    if p.kind == "squared":
        return X @ (p.weights * p.weights)
    return np.max(X * p.weights, axis=1)


def _grad_rows(p: Predictor, X) -> np.ndarray:
    """d g / d weights, one row per learning row."""
    if p.kind == "linear":
        return X
    if p.kind == "squared":
        return 2.0 * p.weights * X
    scaled = X * p.weights
    arg = np.argmax(scaled, axis=1)  # ties -> lowest index
    G = np.zeros_like(X)
    rows = np.arange(X.shape[0])
    G[rows, arg] = X[rows, arg]
    return G


def _check_row(samples, j):
    j = int(j)
    if not (0 <= j < samples.count):
        raise IndexOutOfRange(f"row {j} outside 0..{samples.count - 1}")
    return j


def _bootstrap_value(spec, p, samples, bootstrap_index):
    if bootstrap_index is None:
        raise MissingBootstrap("Q3 needs a bootstrap row index")
    b = int(bootstrap_index)
    if not (0 <= b < samples.count):
        raise IndexOutOfRange(f"bootstrap row {b} outside 0..{samples.count - 1}")
    return b


def q_value(spec: ObjectiveSpec, p: Predictor, samples: LearningSamples, j, bootstrap_index=None) -> float:
    """Per-row functional value; see the module docstring for the three forms."""
    j = _check_row(samples, j)
    F = spec.marginal.cdf
    ghat = predict(p, samples.X[j])
    fg = F(ghat)
    q2 = 2.0 * F(max(samples.y[j], ghat)) - fg
    if spec.variant == "Q2":
        return float(q2)
    if spec.variant == "Q3":
        b = _bootstrap_value(spec, p, samples, bootstrap_index)
        yb = F(predict(p, samples.X[b]))
        return float(q2 + spec.gamma * (fg * fg - max(fg, yb)))
    # Q4: running-rank penalty over rows i < j, empty sum for j = 0
    fprev = F(_predict_rows(p, samples.X[:j])) if j > 0 else np.empty(0)
    run = fg + 2.0 * float(np.sum(np.maximum(fprev, fg)))
    return float(q2 + spec.gamma * fg * fg - spec.gamma / samples.count * run)


def _q2_vector(spec, p, samples):
    F = spec.marginal.cdf
    ghat = _predict_rows(p, samples.X)
    fg = F(ghat)
    q2 = 2.0 * F(np.maximum(samples.y, ghat)) - fg
    return ghat, fg, q2


def objective_value(spec: ObjectiveSpec, p: Predictor, samples: LearningSamples, rng=None) -> float:
    """Mean of the per-row functional over all N rows.

    Q3 consumes one bootstrap resample of the N rows per evaluation, drawn
    from ``rng`` if given, else from ``spec.bootstrap``.
    """
    ghat, fg, q2 = _q2_vector(spec, p, samples)
    if spec.variant == "Q2":
        return float(np.mean(q2))
    if spec.variant == "Q3":
        g = _resolve_rng(spec, rng)
        idx = g.integers(0, samples.count, size=samples.count)
        yb = fg[idx]
        return float(np.mean(q2 + spec.gamma * (fg * fg - np.maximum(fg, yb))))
    # Q4 mean via the sorted identity:
    # sum_j [F_j + 2 sum_{i<j} max(F_i,F_j)] = sum_k (2k-1) F_(k)
    n = samples.count
    fs = np.sort(fg)
    run_total = float(np.sum((2.0 * np.arange(1, n + 1) - 1.0) * fs))
    return float(np.mean(q2) + spec.gamma * np.mean(fg * fg) - spec.gamma / (n * n) * run_total)


def _resolve_rng(spec, rng):
    if rng is not None:
        return as_generator(rng)
    if spec.bootstrap is not None:
        return spec.bootstrap.generator()
    raise MissingBootstrap("Q3 evaluation needs an rng or ObjectiveSpec.bootstrap to be set")


def subgradient(spec: ObjectiveSpec, p: Predictor, samples: LearningSamples, j, bootstrap_index=None) -> np.ndarray:
    """Exact subgradient of the per-row functional in the weights."""
    j = _check_row(samples, j)
    F, pdf = spec.marginal.cdf, spec.marginal.pdf
    xj = samples.X[j : j + 1]
    ghat = float(_predict_rows(p, xj)[0])
    gj = _grad_rows(p, xj)[0]
    base = (2.0 * (samples.y[j] < ghat) - 1.0) * pdf(ghat) * gj
    if spec.variant == "Q2":
        return base
    if spec.variant == "Q3":
        b = _bootstrap_value(spec, p, samples, bootstrap_index)
        xb = samples.X[b : b + 1]
        gb_val = float(_predict_rows(p, xb)[0])
        gb = _grad_rows(p, xb)[0]
        out = base + spec.gamma * (2.0 * F(ghat) - (gb_val < ghat)) * pdf(ghat) * gj
        out = out - spec.gamma * (gb_val >= ghat) * pdf(gb_val) * gb
        return out
    # Q4
    N = samples.count
    fg = F(ghat)
    if j > 0:
        gprev = _predict_rows(p, samples.X[:j])
        Gprev = _grad_rows(p, samples.X[:j])
        fprev = F(gprev)
        smaller = float(np.sum(fprev < fg))
        larger = fprev > fg
        cross = (pdf(gprev)[larger][:, None] * Gprev[larger]).sum(axis=0) if np.any(larger) else 0.0
    else:
        smaller, cross = 0.0, 0.0
    coeff = spec.gamma * (2.0 * fg - 1.0 / N - 2.0 / N * smaller)
    return base + coeff * pdf(ghat) * gj - 2.0 * spec.gamma / N * cross


def mean_subgradient(spec: ObjectiveSpec, p: Predictor, samples: LearningSamples, rng=None) -> np.ndarray:
    """Subgradient of the mean functional (what batch descent steps along)."""
    F, pdf = spec.marginal.cdf, spec.marginal.pdf
    X = samples.X
    N = samples.count
    ghat = _predict_rows(p, X)
    G = _grad_rows(p, X)
    pg = pdf(ghat)
    coeff = (2.0 * (samples.y < ghat) - 1.0) * pg
    if spec.variant == "Q2":
        return (coeff[:, None] * G).mean(axis=0)
    fg = F(ghat)
    if spec.variant == "Q3":
        g = _resolve_rng(spec, rng)
        idx = g.integers(0, N, size=N)
        gb = ghat[idx]
        coeff = coeff + spec.gamma * (2.0 * fg - (gb < ghat)) * pg
        cross = -spec.gamma * (gb >= ghat) * pdf(gb)
        return ((coeff[:, None] * G) + (cross[:, None] * G[idx])).mean(axis=0)
    # Q4: r_j = #{i<j: F_i < F_j}; c_i = #{j>i: F_j < F_i}
    less = fg[:, None] < fg[None, :]  # less[i, j] = F_i < F_j
    tri = np.tril(np.ones((N, N), dtype=bool), k=-1).T  # upper triangle i < j
    r = np.sum(less & tri, axis=0)
    c = np.sum(less.T & tri, axis=1)
    coeff = coeff + spec.gamma * (2.0 * fg - 1.0 / N - 2.0 / N * r) * pg
    coeff = coeff - 2.0 * spec.gamma / N * c * pg
    return (coeff[:, None] * G).mean(axis=0)


def centered_objective(spec: ObjectiveSpec, value: float) -> float:
    """Reporting scale for objective values.

    A perfect law-preserving predictor scores 1/2 on Q2 and 1/2 - gamma/3 on
    the penalized variants; subtracting those baselines makes the number
    directly comparable to the excursion metric (plus gamma times the squared
    Wasserstein mismatch), which is how summary tables quote it.
    """
    if spec.variant == "Q2":
        return float(value - 0.5)
    return float(value - 0.5 + spec.gamma / 3.0)
