"""Tour of the three simulated processes and their invariants.

Each simulator produces values on a regular grid with a known (or estimable)
stationary marginal law:

  * a Gaussian process with covariance exp(-|t|/2), simulated exactly by its
    Markov recursion;
  * moving averages of alpha-stable innovations (symmetric Cauchy for
    alpha = 1, totally skewed positive for alpha = 1/2) whose kernels have
    stable norm exactly one, so the marginal is the standard law;
  * an AR(3) recursion driven by Student-t(0.8) innovations, so heavy-tailed
    that no moment of order >= 0.8 exists.

Run: python3 demos/process_gallery.py
"""

import os

import numpy as np

from tailcast.distributions import StudentT
from tailcast.processes import (
    ArStudentT,
    GaussExpCov,
    StableMovingAverage,
    default_kernel,
    simulate,
    write_trajectory_csv,
)
from tailcast.rng import RngStream

OUT = os.path.join(os.path.dirname(__file__), "output")


def main() -> None:
    os.makedirs(OUT, exist_ok=True)
    h = 0.02
    length = 1500  # observation window [0, 29.98]

    print("Gaussian process, covariance exp(-|t|/2)")
    traj = simulate(GaussExpCov(), 0.0, h, length, RngStream(11, 0).generator())
    v = traj.values
    emp = np.corrcoef(v[:-1], v[1:])[0, 1]
    print(f"  lag-h correlation: empirical {emp:.6f}, exact exp(-h/2) = {np.exp(-h / 2):.6f}")
    print(f"  range of 1500 values: [{v.min():+.2f}, {v.max():+.2f}]  (light tails)")
    write_trajectory_csv(os.path.join(OUT, "gauss_path.csv"), traj)

    print()
    print("Stable moving averages (unit-norm exponential kernels, 251 taps)")
    for alpha in (1.0, 0.5):
        k = default_kernel(alpha)
        norm = np.sum(np.abs(k)) if alpha == 1.0 else np.sum(np.sqrt(k)) ** 2
        spec = StableMovingAverage(alpha)
        traj = simulate(spec, 0.0, h, length, RngStream(12, 0).generator())
        v = traj.values
        name = "Cauchy" if alpha == 1.0 else "positive 1/2-stable"
        print(f"  alpha = {alpha}: ||m||_alpha = {norm:.12f}, marginal = {name}")
        print(f"    median |value| = {np.median(np.abs(v)):.3f}, "
              f"max |value| = {np.max(np.abs(v)):.1f}  (no variance)")
        write_trajectory_csv(os.path.join(OUT, f"stable_{alpha}_path.csv"), traj)

    print()
    print("AR(3) with Student-t(nu = 0.8) innovations, x(t) sum of lagged values")
    ar = ArStudentT((0.1, 0.25, 0.5), StudentT(0.0, 1.0, 0.8))
    traj = simulate(ar, 0.0, 0.1, 300, RngStream(13, 0).generator())
    v = traj.values
    print(f"  coefficients by lag (h, 2h, 3h): {tuple(float(c) for c in ar.lag_coeffs)}")
    print(f"  median |value| = {np.median(np.abs(v)):.3f}, max |value| = {np.max(np.abs(v)):.1f}")
    print(f"  wrote three trajectories to {OUT}/")


if __name__ == "__main__":
    main()
