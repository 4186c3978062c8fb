import numpy as np
import pytest

from tailcast.distributions import (
    AlphaStableSymmetric,
    Cauchy,
    Gaussian,
    Levy,
    StudentT,
    estimate,
    from_json,
    to_json,
)
from tailcast.errors import (
    DegenerateData,
    DomainError,
    InsufficientData,
    NonFiniteInput,
    Unsupported,
)
from tailcast.rng import RngStream

ALL_MODELS = [
    Gaussian(0.0, 1.0),
    Gaussian(2.0, 3.0),
    Cauchy(0.0, 1.0),
    Cauchy(1.0, 2.0),
    Levy(1.0),
    Levy(0.5),
    AlphaStableSymmetric(1.0, 1.0),
    AlphaStableSymmetric(2.0, 1.5),
    StudentT(0.0, 1.0, 0.8),
    StudentT(0.0, 10.0, 0.7),
    StudentT(2.0, 3.0, 5.0),
]


@pytest.mark.parametrize("m", ALL_MODELS, ids=lambda m: repr(m))
def test_quantile_cdf_round_trip(m):
    p = np.linspace(0.01, 0.99, 99)
    np.testing.assert_allclose(m.cdf(m.quantile(p)), p, atol=1e-8)


@pytest.mark.parametrize("m", ALL_MODELS, ids=lambda m: repr(m))
def test_cdf_strictly_increasing_on_support(m):
    # 1000 support points via quantiles: consecutive cdf values must grow
    x = m.quantile(np.linspace(0.001, 0.999, 1000))
    c = m.cdf(x)
    assert np.all(np.diff(c) > 0)


@pytest.mark.parametrize("m", ALL_MODELS, ids=lambda m: repr(m))
def test_pdf_matches_cdf_derivative(m):
    x = m.quantile(np.linspace(0.05, 0.95, 19))
    step = 1e-6 * max(1.0, float(np.max(np.abs(x))))
    fd = (m.cdf(x + step) - m.cdf(x - step)) / (2 * step)
    np.testing.assert_allclose(m.pdf(x), fd, rtol=1e-4, atol=1e-10)


def test_sampler_against_cdf_kolmogorov_smirnov():
    """KS statistic below 1.95/sqrt(n) in at least 19 of 20 seeds."""
    n = 20000
    crit = 1.95 / np.sqrt(n)
    for m in (Gaussian(0.0, 1.0), Cauchy(0.0, 1.0), Levy(1.0),
              AlphaStableSymmetric(1.0, 1.0), StudentT(0.0, 1.0, 0.8)):
        ok = 0
        for seed in range(20):
            g = RngStream(seed, 11).generator()
            x = np.sort(m.sample(n, g))
            u = m.cdf(x)
            k = np.arange(1, n + 1)
            ks = max(np.max(k / n - u), np.max(u - (k - 1) / n))
            ok += ks < crit
        assert ok >= 19, f"{m!r}: only {ok}/20 seeds below KS threshold"


def test_gaussian_cdf_known_values():
    m = Gaussian(0.0, 1.0)
    assert m.cdf(0.0) == pytest.approx(0.5)
    assert m.cdf(1.959963984540054) == pytest.approx(0.975, abs=1e-12)


def test_cauchy_cdf_known_values():
    m = Cauchy(0.0, 1.0)
    assert m.cdf(0.0) == pytest.approx(0.5)
    assert m.cdf(1.0) == pytest.approx(0.75)
    assert m.quantile(0.75) == pytest.approx(1.0)


def test_levy_cdf_and_support():
    m = Levy(1.0)
    # P(X <= c) = erfc(1/sqrt 2); quadrature of the density gives the same mass
    assert m.cdf(1.0) == pytest.approx(0.31731050786291415, abs=1e-12)
    assert m.cdf(0.0) == 0.0
    assert m.cdf(-3.0) == 0.0
    assert m.pdf(-3.0) == 0.0
    assert m.quantile(0.5) == pytest.approx(1.0 / (2.0 * 0.4769362762044699**2), rel=1e-12)


def test_levy_sampler_is_inverse_square_normal():
    g = RngStream(3, 0).generator()
    x = Levy(2.0).sample(50000, g)
    assert np.all(x > 0)
    # median of c/Z^2 is c / quantile(Z^2, 0.5)
    med = np.median(x)
    assert med == pytest.approx(2.0 / 0.45493642311957283, rel=0.05)


def test_stable_closed_forms_match_special_cases():
    x = np.linspace(-8.0, 8.0, 41)
    np.testing.assert_allclose(AlphaStableSymmetric(1.0, 1.0).cdf(x), Cauchy(0.0, 1.0).cdf(x), atol=1e-12)
    np.testing.assert_allclose(AlphaStableSymmetric(2.0, 1.0).cdf(x),
                               Gaussian(0.0, np.sqrt(2.0)).cdf(x), atol=1e-12)


def test_stable_cdf_unsupported_for_general_alpha():
    m = AlphaStableSymmetric(1.5, 1.0)
    with pytest.raises(Unsupported):
        m.cdf(0.0)
    # sampling still works for any alpha
    g = RngStream(0, 0).generator()
    assert np.all(np.isfinite(m.sample(100, g)))


def test_student_t_matches_cauchy_at_nu_one():
    x = np.linspace(-50.0, 50.0, 100)
    np.testing.assert_allclose(StudentT(0.0, 1.0, 1.0).cdf(x), Cauchy(0.0, 1.0).cdf(x), atol=1e-9)


def test_student_t_known_quantile():
    # nu=2: quantile(0.75) = sqrt(2)/sqrt(3) * ... known closed form 0.8164965809
    assert StudentT(0.0, 1.0, 2.0).quantile(0.75) == pytest.approx(0.8164965809277261, rel=1e-10)


def test_quantile_domain_errors():
    m = Gaussian(0.0, 1.0)
    for p in (0.0, 1.0, -0.1, 1.1):
        with pytest.raises(DomainError):
            m.quantile(p)


def test_non_finite_input_rejected():
    with pytest.raises(NonFiniteInput):
        Gaussian(0.0, 1.0).cdf(np.nan)
    with pytest.raises(NonFiniteInput):
        Cauchy(0.0, 1.0).pdf(np.inf)


def test_invalid_params_rejected():
    with pytest.raises(DomainError):
        Gaussian(0.0, -1.0)
    with pytest.raises(DomainError):
        Levy(0.0)
    with pytest.raises(DomainError):
        StudentT(0.0, 1.0, -0.5)
    with pytest.raises(DomainError):
        AlphaStableSymmetric(2.5, 1.0)


def test_scalar_and_array_dispatch():
    m = Gaussian(0.0, 1.0)
    assert isinstance(m.cdf(0.3), float)
    out = m.cdf(np.array([0.1, 0.2]))
    assert out.shape == (2,)


def test_json_round_trip():
    for m in ALL_MODELS:
        m2 = from_json(to_json(m))
        assert type(m2) is type(m)
        assert to_json(m2) == to_json(m)


def test_estimate_gaussian():
    g = RngStream(1, 0).generator()
    x = Gaussian(2.0, 3.0).sample(10000, g)
    m = estimate("gaussian", x)
    assert m.mu == pytest.approx(2.0, abs=0.1)
    assert m.sigma == pytest.approx(3.0, abs=0.1)


def test_estimate_cauchy():
    g = RngStream(2, 0).generator()
    x = Cauchy(0.0, 1.0).sample(10000, g)
    m = estimate("cauchy", x)
    assert m.mu == pytest.approx(0.0, abs=0.05)
    assert m.sigma == pytest.approx(1.0, abs=0.1)


def test_estimate_levy():
    g = RngStream(3, 0).generator()
    x = Levy(1.5).sample(20000, g)
    m = estimate("levy", x)
    assert m.c == pytest.approx(1.5, rel=0.1)


def test_estimate_student_t_recovers_quantiles():
    g = RngStream(4, 0).generator()
    x = StudentT(1.0, 2.0, 3.0).sample(50000, g)
    m = estimate("student_t", x)
    assert m.mu == pytest.approx(1.0, abs=0.1)
    # the fit matches the sample quantiles it was built from
    q75, q95 = np.quantile(x, [0.75, 0.95])
    assert m.quantile(0.75) == pytest.approx(q75, rel=0.01)
    assert m.quantile(0.95) == pytest.approx(q95, rel=0.01)


def test_estimate_errors():
    with pytest.raises(InsufficientData):
        estimate("gaussian", np.arange(10.0))
    with pytest.raises(DegenerateData):
        estimate("gaussian", np.full(100, 2.0))
    with pytest.raises(Unsupported):
        estimate("alpha_stable_symmetric", np.arange(100.0))
