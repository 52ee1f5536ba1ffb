import numpy as np
import pytest

from regimecast.estimation.transforms import (
    PERSISTENCE_CAP,
    from_unconstrained,
    near_boundary,
    to_unconstrained,
    transform_spec,
)
from regimecast.exceptions import ParameterError
from regimecast.models.interfaces import ModelKind
from regimecast.models.params import EgarchParams, GarchParams, GjrParams, MrsParams
from regimecast.models.tdist import NU_MAX


@pytest.mark.parametrize(
    "params",
    [
        GarchParams(0.05, 0.05, 0.08, 0.90, 7.0),
        GarchParams(0.05, 0.05, 0.0, 0.0, 7.0),
        GarchParams(-0.1, 0.3, 0.2, 0.5, 3.0),
    ],
)
def test_garch_validate_accepts_feasible(params: GarchParams) -> None:
    assert params.validate() is params


@pytest.mark.parametrize(
    ("params", "fragment"),
    [
        (GarchParams(0.0, 0.0, 0.1, 0.8, 7.0), "alpha0"),
        (GarchParams(0.0, 0.1, -0.1, 0.8, 7.0), "alpha1"),
        (GarchParams(0.0, 0.1, 0.2, 0.8, 7.0), "stationarity"),
        (GarchParams(0.0, 0.1, 0.1, 0.8, 2.0), "nu"),
        (GjrParams(0.0, 0.1, 0.1, -0.01, 0.8, 7.0), "xi"),
        (EgarchParams(0.0, 0.0, 0.1, 0.0, 1.0, 7.0), "beta"),
    ],
)
def test_validate_names_the_violation(params, fragment: str) -> None:
    with pytest.raises(ParameterError, match=fragment):
        params.validate()


def test_non_finite_values_are_rejected() -> None:
    with pytest.raises(ParameterError, match="non-finite"):
        GarchParams(float("nan"), 0.1, 0.1, 0.8, 7.0).validate()


def test_gjr_persistence_uses_half_loadings() -> None:
    params = GjrParams(0.0, 0.05, 0.10, 0.04, 0.88, 7.0)
    assert params.persistence == pytest.approx(0.95)
    assert params.unconditional_variance == pytest.approx(1.0)


def test_mrs_regime_views(mrs_params: MrsParams) -> None:
    assert mrs_params.regime(2).alpha0 == 0.40
    assert mrs_params.stacked()["nu"].tolist() == [8.0, 6.0]
    swapped = mrs_params.swapped()
    assert swapped.regime(1) == mrs_params.regime(2)
    assert (swapped.p, swapped.q) == (mrs_params.q, mrs_params.p)
    assert swapped.identified() == mrs_params
    with pytest.raises(ParameterError):
        mrs_params.regime(3)


def test_from_array_checks_length() -> None:
    with pytest.raises(ParameterError, match="needs 5 values"):
        GarchParams.from_array([1.0, 2.0])


@pytest.mark.parametrize(
    "params",
    [
        GarchParams(0.05, 0.05, 0.08, 0.90, 7.0),
        GjrParams(0.05, 0.05, 0.10, 0.04, 0.88, 7.0),
        EgarchParams(0.05, 0.01, 0.15, -0.05, 0.97, 7.0),
        MrsParams.from_regimes(
            GarchParams(0.05, 0.02, 0.05, 0.90, 8.0),
            GarchParams(-0.05, 0.40, 0.08, 0.88, 6.0),
            0.98,
            0.97,
        ),
    ],
)
def test_transforms_invert_interior_points(params) -> None:
    kind = {
        GarchParams: ModelKind.GARCH,
        GjrParams: ModelKind.GJR,
        EgarchParams: ModelKind.EGARCH,
        MrsParams: ModelKind.MRS,
    }[type(params)]

    u = to_unconstrained(params)
    back = from_unconstrained(kind, u)

    assert len(u) == len(transform_spec(kind))
    np.testing.assert_allclose(
        back.to_array(), params.to_array(), rtol=1e-10, atol=1e-12
    )


@pytest.mark.parametrize("kind", list(ModelKind))
def test_every_unconstrained_vector_is_feasible(kind: ModelKind) -> None:
    rng = np.random.default_rng(5)
    for _ in range(200):
        u = rng.normal(0.0, 5.0, len(transform_spec(kind)))
        params = from_unconstrained(kind, u)
        params.validate()


def test_extreme_coordinates_hit_the_caps() -> None:
    extreme = np.array([0.0, -800.0, 50.0, 0.0, 800.0])
    params = from_unconstrained(ModelKind.GARCH, extreme)

    assert params.alpha0 == pytest.approx(1e-12)
    assert params.persistence <= PERSISTENCE_CAP
    assert params.nu == NU_MAX
    assert set(near_boundary(params)) == {"persistence", "nu"}


@pytest.mark.parametrize("coordinate", [-40.0, 40.0, 800.0])
def test_saturated_transition_coordinates_stay_open(
    mrs_params: MrsParams, coordinate: float
) -> None:
    u = to_unconstrained(mrs_params)
    u[10] = coordinate
    u[11] = -coordinate

    params = from_unconstrained(ModelKind.MRS, u)

    assert 0.0 < params.p < 1.0
    assert 0.0 < params.q < 1.0
    params.validate()
    assert "p" in near_boundary(params)

def test_near_boundary_for_mrs() -> None:
    params = MrsParams.from_regimes(
        GarchParams(0.0, 0.1, 0.05, 0.9, 8.0),
        GarchParams(0.0, 0.1, 0.05, 0.9, 8.0),
        p=0.99999,
        q=0.5,
    )
    assert near_boundary(params) == ["p"]
