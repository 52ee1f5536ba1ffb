import math

import numpy as np
import pytest
from scipy import integrate, stats

from regimecast.exceptions import ParameterError
from regimecast.models.tdist import (
    StudentT,
    abs_moment,
    cdf,
    log_density,
    mixture_quantile,
    quantile,
    sample,
)


@pytest.mark.parametrize("nu", [2.5, 4.0, 7.0, 30.0])
def test_density_integrates_to_one_with_unit_variance(nu: float) -> None:
    d = StudentT(nu)

    mass, _ = integrate.quad(lambda z: math.exp(log_density(d, z)), -np.inf, np.inf)
    second, _ = integrate.quad(
        lambda z: z * z * math.exp(log_density(d, z)), -np.inf, np.inf, limit=200
    )

    assert mass == pytest.approx(1.0, abs=1e-6)
    if nu >= 7.0:
        assert second == pytest.approx(1.0, rel=1e-5)


def test_nu_must_exceed_two() -> None:
    with pytest.raises(ParameterError):
        StudentT(2.0)


def test_quantile_known_value() -> None:
    # the 5% quantile of t(5) rescaled to unit variance
    expected = stats.t.ppf(0.05, 5) * math.sqrt(3.0 / 5.0)
    assert quantile(StudentT(5.0), 0.05) == pytest.approx(expected, abs=1e-10)
    assert quantile(StudentT(5.0), 0.5) == 0.0


@pytest.mark.parametrize("p", [1e-6, 0.01, 0.05, 0.3, 0.99])
def test_quantile_inverts_cdf(p: float) -> None:
    d = StudentT(6.0)
    assert cdf(d, quantile(d, p)) == pytest.approx(p, rel=1e-7)


@pytest.mark.parametrize("p", [0.0, 1.0, -0.1])
def test_quantile_domain(p: float) -> None:
    with pytest.raises(ParameterError):
        quantile(StudentT(6.0), p)


def test_sampling_is_deterministic_per_seed() -> None:
    d = StudentT(7.0)

    first, again, other = sample(d, 11, 1000), sample(d, 11, 1000), sample(d, 12, 1000)

    np.testing.assert_array_equal(first, again)
    assert not np.array_equal(first, other)


def test_samples_have_unit_variance() -> None:
    draws = sample(StudentT(8.0), 3, 200_000)
    assert np.var(draws) == pytest.approx(1.0, rel=0.03)
    assert np.mean(np.abs(draws)) == pytest.approx(abs_moment(StudentT(8.0)), rel=0.01)


def test_abs_moment_tends_to_normal() -> None:
    assert abs_moment(StudentT(1e6)) == pytest.approx(math.sqrt(2 / math.pi), rel=1e-5)


def test_mixture_quantile_matches_weighted_cdf() -> None:
    weights, means, variances, nus = [0.3, 0.7], [0.1, -0.2], [1.0, 4.0], [5.0, 8.0]

    x = mixture_quantile(weights, means, variances, nus, 0.05)

    total = sum(
        w * cdf(StudentT(nu), (x - m) / math.sqrt(v))
        for w, m, v, nu in zip(weights, means, variances, nus, strict=True)
    )
    assert total == pytest.approx(0.05, abs=1e-10)


def test_mixture_of_identical_components_is_the_component_quantile() -> None:
    x = mixture_quantile([0.5, 0.5], [0.0, 0.0], [2.0, 2.0], [6.0, 6.0], 0.01)
    assert x == pytest.approx(math.sqrt(2.0) * quantile(StudentT(6.0), 0.01))
