"""Frequency presets and numerical defaults shipped with the package."""

import datetime as dt
from functools import cache
from pathlib import Path

from pydantic import BaseModel, NonNegativeInt, PositiveFloat, PositiveInt

from regimecast.config.utils import YamlConfigLoader, get_package_file
from regimecast.data.market_data import Frequency
from regimecast.models.interfaces import ModelKind


class EstimatorOptions(BaseModel):
    """Options for the maximum likelihood engine.

    Attributes:
        restarts: Number of Nelder-Mead starts; the first is the heuristic
            start, the rest are seeded perturbations of it.
        seed: Seed for the perturbed starts.
        fatol: Simplex objective-spread tolerance.
        xatol: Simplex size tolerance.
        max_evals: Maximum objective evaluations per restart.
        gradient_tol: Per-parameter bound on the finite-difference gradient
            of the log-likelihood (transformed coordinates) for a fit to be
            flagged as converged.
        hessian_step: Relative step of the central-difference Hessian.

    """

    restarts: PositiveInt = 5
    seed: int = 0
    fatol: PositiveFloat = 1e-8
    xatol: PositiveFloat = 1e-8
    max_evals: PositiveInt = 20000
    gradient_tol: PositiveFloat = 1e-2
    hessian_step: PositiveFloat = 1e-4


class FrequencyPreset(BaseModel):
    """Horizons and default split boundary for one data frequency."""

    horizons: list[PositiveInt]
    in_sample_end: dt.date


class SimulationPreset(BaseModel):
    """Default length and generating parameters for simulations."""

    n: PositiveInt = 5000
    burn_in: NonNegativeInt = 1000
    params: dict[ModelKind, dict[str, float]] = {}


class Presets(BaseModel):
    """All presets shipped in presets.yaml."""

    frequencies: dict[Frequency, FrequencyPreset]
    estimator: EstimatorOptions = EstimatorOptions()
    simulation: SimulationPreset = SimulationPreset()

    def horizons_for(self, frequency: Frequency) -> list[int]:
        """Return the evaluation horizons for a frequency."""
        return list(self.frequencies[frequency].horizons)


def load_presets(presets_file: Path | None = None) -> Presets:
    """Load presets from a YAML file.

    Args:
        presets_file: Path to a presets file. If None, uses the package file.

    Returns:
        The validated presets.

    """
    if presets_file is None:
        return _package_presets()
    return YamlConfigLoader.load(model_class=Presets, yaml_file=presets_file)


@cache
def _package_presets() -> Presets:
    return YamlConfigLoader.load(
        model_class=Presets, yaml_file=get_package_file("presets.yaml")
    )
