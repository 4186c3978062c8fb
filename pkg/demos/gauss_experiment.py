"""Gaussian extrapolation experiment: learned weights vs closed-form references.

Runs the ``gauss_extrap`` preset (10 observed points at spacing 0.1, then
prediction across [30, 35]) with a reduced replicate count, and prints how
the mean excursion metric grows with the forecast horizon for all four
methods. Expected picture:

  * near the window every method is accurate;
  * kriging and the plain learned predictor track each other closely;
  * far from the window the law-preserving (penalized) predictor levels off
    near 1/3, the value attained by an independent copy of the process —
    while plain minimizers drift toward the degenerate 1/4 regime.

Run: python3 demos/gauss_experiment.py        (about half a minute)
"""

import os
from dataclasses import replace

import numpy as np

from tailcast.cli import _load_config
from tailcast.harness import run_eval, run_fit, write_eval_csv

OUT = os.path.join(os.path.dirname(__file__), "output")


def main() -> None:
    os.makedirs(OUT, exist_ok=True)
    spec = replace(_load_config("gauss_extrap"), replicates=200)
    print(f"preset {spec.name}: window [0, 29.98], forecast sample 30.0..30.9, "
          f"predictions on [30, 35]")
    print(f"fitting {len(spec.fitted_indices)} points x {len(spec.methods)} methods ...")
    fits = run_fit(spec)
    report = run_eval(spec, fits)

    horizons = (30.5, 31.0, 32.0, 33.0, 34.0, 35.0)
    print()
    print(f"mean excursion metric over {report.replicates} fresh replicates")
    header = f"  {'t':>5} " + "".join(f"{m:>15}" for m in report.methods)
    print(header)
    for t in horizons:
        i = int(np.argmin(np.abs(report.times - t)))
        row = f"  {t:5.1f} " + "".join(f"{report.excursion[m][i]:15.4f}" for m in report.methods)
        print(row)
    print(f"  (independent copies of the process score 1/3 = {1 / 3:.4f})")

    print()
    print(f"2-Wasserstein distance between predicted and true rank values at t = 35")
    i35 = int(np.argmin(np.abs(report.times - 35.0)))
    for m in report.methods:
        print(f"  {m:<15} {report.wasserstein[m][i35]:.4f}")
    print("  (the penalized fit keeps the marginal law; plain L2-style fits shrink)")

    path = os.path.join(OUT, "gauss_extrap_eval.csv")
    write_eval_csv(path, report)
    print()
    print(f"full curve written to {path}")


if __name__ == "__main__":
    main()
