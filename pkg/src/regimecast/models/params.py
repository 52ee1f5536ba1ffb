"""Parameter records for the four volatility models.

Each record is a frozen dataclass whose field order is the canonical order
used by optimizers, Hessians and reports.
"""

from dataclasses import astuple, dataclass, fields
from typing import ClassVar, Self

import numpy as np

from regimecast.exceptions import ParameterError

ALPHA0_FLOOR = 1e-12


@dataclass(frozen=True)
class _ParamRecord:
    """Shared behaviour of the parameter records."""

    labels: ClassVar[dict[str, str]] = {}

    @classmethod
    def names(cls) -> tuple[str, ...]:
        """Return the field names in canonical order."""
        return tuple(f.name for f in fields(cls))

    @classmethod
    def from_array(cls, values: np.ndarray | list[float]) -> Self:
        """Build a record from values in canonical order."""
        array = np.asarray(values, dtype=np.float64)
        if array.shape != (len(cls.names()),):
            msg = (
                f"{cls.__name__} needs {len(cls.names())} values, "
                f"got shape {array.shape}."
            )
            raise ParameterError(msg)
        return cls(*(float(v) for v in array))

    def to_array(self) -> np.ndarray:
        """Return the values in canonical order."""
        return np.array(astuple(self), dtype=np.float64)

    def as_dict(self) -> dict[str, float]:
        """Return a name → value mapping."""
        return dict(zip(self.names(), astuple(self), strict=True))

    def validate(self) -> Self:
        """Raise ParameterError unless the record satisfies its invariants."""
        values = self.to_array()
        if not np.all(np.isfinite(values)):
            msg = f"{type(self).__name__} has non-finite values: {self.as_dict()}"
            raise ParameterError(msg)
        for problem in self._violations():
            msg = f"{type(self).__name__}: {problem}."
            raise ParameterError(msg)
        return self

    def _violations(self) -> list[str]:
        return []


def _garch_violations(
    alpha0: float, alpha1: float, beta: float, nu: float, persistence: float
) -> list[str]:
    problems = []
    if alpha0 <= 0.0:
        problems.append(f"alpha0 must be positive (got {alpha0})")
    if alpha1 < 0.0:
        problems.append(f"alpha1 must be non-negative (got {alpha1})")
    if beta < 0.0:
        problems.append(f"beta must be non-negative (got {beta})")
    if persistence >= 1.0:
        problems.append(f"persistence {persistence} violates stationarity")
    if nu <= 2.0:
        problems.append(f"nu must exceed 2 (got {nu})")
    return problems


@dataclass(frozen=True)
class GarchParams(_ParamRecord):
    """GARCH(1,1) with constant mean and Student-t innovations."""

    delta: float
    alpha0: float
    alpha1: float
    beta: float
    nu: float

    labels: ClassVar[dict[str, str]] = {
        "delta": "δ",
        "alpha0": "α0",
        "alpha1": "α1",
        "beta": "β",
        "nu": "ν",
    }

    @property
    def persistence(self) -> float:
        """Return α1 + β."""
        return self.alpha1 + self.beta

    @property
    def unconditional_variance(self) -> float:
        """Return α0 / (1 − α1 − β)."""
        return self.alpha0 / (1.0 - self.persistence)

    def _violations(self) -> list[str]:
        return _garch_violations(
            self.alpha0, self.alpha1, self.beta, self.nu, self.persistence
        )


@dataclass(frozen=True)
class GjrParams(_ParamRecord):
    """GJR-GARCH(1,1); ``xi`` loads positive shocks, ``alpha1`` the rest."""

    delta: float
    alpha0: float
    alpha1: float
    xi: float
    beta: float
    nu: float

    labels: ClassVar[dict[str, str]] = {
        "delta": "δ",
        "alpha0": "α0",
        "alpha1": "α1",
        "xi": "ξ",
        "beta": "β",
        "nu": "ν",
    }

    @property
    def persistence(self) -> float:
        """Return (α1 + ξ)/2 + β, the persistence under symmetric shocks."""
        return 0.5 * (self.alpha1 + self.xi) + self.beta

    @property
    def unconditional_variance(self) -> float:
        """Return α0 / (1 − persistence)."""
        return self.alpha0 / (1.0 - self.persistence)

    def _violations(self) -> list[str]:
        problems = _garch_violations(
            self.alpha0, self.alpha1, self.beta, self.nu, self.persistence
        )
        if self.xi < 0.0:
            problems.append(f"xi must be non-negative (got {self.xi})")
        return problems


@dataclass(frozen=True)
class EgarchParams(_ParamRecord):
    """EGARCH(1,1) in log-variance form; only |β| < 1 is required."""

    delta: float
    alpha0: float
    alpha1: float
    xi: float
    beta: float
    nu: float

    labels: ClassVar[dict[str, str]] = {
        "delta": "δ",
        "alpha0": "α0",
        "alpha1": "α1",
        "xi": "ξ",
        "beta": "β1",
        "nu": "ν",
    }

    @property
    def persistence(self) -> float:
        """Return β, the AR coefficient of ln h."""
        return self.beta

    @property
    def log_variance_mean(self) -> float:
        """Return α0 / (1 − β), the shock-free fixed point of ln h."""
        return self.alpha0 / (1.0 - self.beta)

    def _violations(self) -> list[str]:
        problems = []
        if abs(self.beta) >= 1.0:
            problems.append(f"|beta| must be below 1 (got {self.beta})")
        if self.nu <= 2.0:
            problems.append(f"nu must exceed 2 (got {self.nu})")
        return problems


@dataclass(frozen=True)
class MrsParams(_ParamRecord):
    """Two-regime MRS-GARCH(1,1).

    Regime-specific GARCH parameters carry a ``_1`` / ``_2`` suffix; ``p`` and
    ``q`` are the probabilities of staying in regime 1 and regime 2.
    """

    delta_1: float
    alpha0_1: float
    alpha1_1: float
    beta_1: float
    nu_1: float
    delta_2: float
    alpha0_2: float
    alpha1_2: float
    beta_2: float
    nu_2: float
    p: float
    q: float

    labels: ClassVar[dict[str, str]] = {
        **{
            f"{name}_{i}": f"{label}({i})"
            for i in (1, 2)
            for name, label in GarchParams.labels.items()
        },
        "p": "p",
        "q": "q",
    }

    @classmethod
    def from_regimes(
        cls, regime_1: GarchParams, regime_2: GarchParams, p: float, q: float
    ) -> "MrsParams":
        """Assemble a record from two GARCH parameter sets."""
        return cls(*astuple(regime_1), *astuple(regime_2), p, q)

    def regime(self, i: int) -> GarchParams:
        """Return the GARCH parameters of regime ``i`` (1 or 2)."""
        if i not in (1, 2):
            msg = f"Regime index must be 1 or 2 (got {i})."
            raise ParameterError(msg)
        values = self.as_dict()
        return GarchParams(
            *(values[f"{name}_{i}"] for name in GarchParams.names())
        )

    def stacked(self) -> dict[str, np.ndarray]:
        """Return per-regime arrays keyed by GARCH parameter name."""
        values = self.as_dict()
        return {
            name: np.array([values[f"{name}_1"], values[f"{name}_2"]])
            for name in GarchParams.names()
        }

    def swapped(self) -> "MrsParams":
        """Relabel the regimes, exchanging ``p`` and ``q``."""
        return MrsParams.from_regimes(self.regime(2), self.regime(1), self.q, self.p)

    def identified(self) -> "MrsParams":
        """Order regimes so regime 2 has the larger unconditional variance."""
        if _variance_proxy(self.regime(1)) > _variance_proxy(self.regime(2)):
            return self.swapped()
        return self

    def _violations(self) -> list[str]:
        problems = [
            f"regime {i} {problem}"
            for i in (1, 2)
            for problem in self.regime(i)._violations()
        ]
        for name, value in (("p", self.p), ("q", self.q)):
            if not 0.0 < value < 1.0:
                problems.append(f"{name} must lie in (0, 1) (got {value})")
        return problems


def _variance_proxy(params: GarchParams) -> float:
    persistence = min(params.persistence, 1.0 - 1e-12)
    return params.alpha0 / (1.0 - persistence)


type ParamVector = GarchParams | GjrParams | EgarchParams | MrsParams
