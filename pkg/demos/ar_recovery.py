"""Recovering autoregression coefficients by excursion-metric minimization.

The AR(3) recursion x(t) = 0.1 x(t-3h) + 0.25 x(t-2h) + 0.5 x(t-h) + xi(t)
with Student-t(nu = 0.8) innovations has no mean, so least squares is not
even defined — yet the one-step-ahead predictor that minimizes the plain
excursion objective should rediscover the three coefficients, because the
recursion itself is the perfect predictor.

The marginal law here is not known in closed form, so it is estimated from
the training window by quantile matching within the Student-t family; the
weighting law used by the objective is that estimate.

Run: python3 demos/ar_recovery.py        (a few seconds)
"""

import numpy as np

from tailcast.cli import _load_config
from tailcast.harness import run_fit


def main() -> None:
    spec = _load_config("ar3")
    print(f"preset {spec.name}: window [0, 29.9] at h = 0.1, "
          f"forecast sample (30.0, 30.1, 30.2)")
    fits = run_fit(spec)

    m = fits.marginal
    print(f"estimated marginal: Student-t(mu = {m.mu:.3f}, sigma = {m.sigma:.3f}, "
          f"nu = {m.nu:.3f})")

    true = np.array([0.1, 0.25, 0.5])
    print()
    print("plain (Q2) fit per prediction point — weights on lags (3h, 2h, h):")
    print(f"  {'t':>6} {'w1':>9} {'w2':>9} {'w3':>9} {'dist to truth':>14} {'centered obj':>13}")
    for k in spec.fitted_indices:
        t = round(k * spec.h, 9)
        pf = fits.fits[k]["unconstrained"]
        dist = float(np.linalg.norm(pf.weights - true)) if t == 30.3 else float("nan")
        tag = f"{dist:14.4f}" if t == 30.3 else " " * 14
        print(f"  {t:6.1f} {pf.weights[0]:9.4f} {pf.weights[1]:9.4f} "
              f"{pf.weights[2]:9.4f} {tag} {pf.centered:13.4f}")
    print(f"  truth  {true[0]:9.4f} {true[1]:9.4f} {true[2]:9.4f}")
    print()
    print("only t = 30.3 is one step ahead of the forecast sample, so only there")
    print("do the learned weights have the recursion coefficients as their target;")
    print("further points compound the recursion and mix the lags.")


if __name__ == "__main__":
    main()
