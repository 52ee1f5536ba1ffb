"""Maps between constrained parameter records and unconstrained vectors.

The optimizer works on unconstrained vectors u; every u maps to a feasible
parameter record and every feasible record maps to a finite u.

Stationarity is enforced through a persistence level and shares:

* GARCH:  s = α1 + β = 0.9999·σ(u_s), α1 = w·s, β = (1−w)·s, w = σ(u_w)
* GJR:    s = (α1+ξ)/2 + β, a = w·s is the ARCH part, α1 = 2av, ξ = 2a(1−v)
* EGARCH: β = 0.9999·tanh(u_β); α0, α1 and ξ are unrestricted
* MRS:    the GARCH map per regime plus logits of p and q

with ν = min(2 + exp(u_ν), 500) and α0 = max(exp(u_α0), 1e-12).
"""

import math
from dataclasses import dataclass
from enum import StrEnum

import numpy as np
from scipy.special import expit, logit

from regimecast.models.interfaces import ModelKind
from regimecast.models.params import (
    ALPHA0_FLOOR,
    EgarchParams,
    GarchParams,
    GjrParams,
    MrsParams,
    ParamVector,
)
from regimecast.models.tdist import NU_MAX

PERSISTENCE_CAP = 0.9999
# shares are kept this far inside (0, 1) so their logits stay finite
SHARE_EPS = 1e-12


class TransformKind(StrEnum):
    """How one unconstrained coordinate maps to the parameter space."""

    IDENTITY = "identity"
    LOG = "log"
    LOGIT = "logit"
    SHIFTED_LOG = "shifted-log"
    SCALED_LOGIT = "scaled-logit"
    SCALED_TANH = "scaled-tanh"


@dataclass(frozen=True)
class TransformSpec:
    """Coordinate names and transform kinds for one model."""

    names: tuple[str, ...]
    kinds: tuple[TransformKind, ...]

    def __len__(self) -> int:
        return len(self.names)


_GARCH_SPEC = (
    ("delta", TransformKind.IDENTITY),
    ("log_alpha0", TransformKind.LOG),
    ("persistence", TransformKind.SCALED_LOGIT),
    ("arch_share", TransformKind.LOGIT),
    ("log_nu_minus_2", TransformKind.SHIFTED_LOG),
)


def transform_spec(kind: ModelKind) -> TransformSpec:
    """Return the transform layout of a model's unconstrained vector."""
    match kind:
        case ModelKind.GARCH:
            entries = _GARCH_SPEC
        case ModelKind.GJR:
            entries = (
                *_GARCH_SPEC[:4],
                ("alpha1_share", TransformKind.LOGIT),
                _GARCH_SPEC[4],
            )
        case ModelKind.EGARCH:
            entries = (
                ("delta", TransformKind.IDENTITY),
                ("alpha0", TransformKind.IDENTITY),
                ("alpha1", TransformKind.IDENTITY),
                ("xi", TransformKind.IDENTITY),
                ("beta", TransformKind.SCALED_TANH),
                ("log_nu_minus_2", TransformKind.SHIFTED_LOG),
            )
        case ModelKind.MRS:
            entries = (
                *((f"{name}_1", how) for name, how in _GARCH_SPEC),
                *((f"{name}_2", how) for name, how in _GARCH_SPEC),
                ("p", TransformKind.LOGIT),
                ("q", TransformKind.LOGIT),
            )
    names, kinds = zip(*entries, strict=True)
    return TransformSpec(names=tuple(names), kinds=tuple(kinds))


def _share_logit(share: float) -> float:
    return float(logit(min(max(share, SHARE_EPS), 1.0 - SHARE_EPS)))


def _prob_inverse(u: float) -> float:
    # expit saturates to exactly 0 or 1 for large |u|
    return min(max(float(expit(u)), SHARE_EPS), 1.0 - SHARE_EPS)


def _nu_forward(nu: float) -> float:
    return math.log(nu - 2.0)


def _nu_inverse(u: float) -> float:
    # exp overflow maps to the cap
    return min(2.0 + math.exp(min(u, 700.0)), NU_MAX)


def _alpha0_inverse(u: float) -> float:
    return max(math.exp(min(u, 700.0)), ALPHA0_FLOOR)


def _garch_forward(params: GarchParams) -> list[float]:
    s = params.alpha1 + params.beta
    share = params.alpha1 / s if s > 0.0 else 0.5
    return [
        params.delta,
        math.log(params.alpha0),
        _share_logit(s / PERSISTENCE_CAP),
        _share_logit(share),
        _nu_forward(params.nu),
    ]


def _garch_inverse(u: np.ndarray) -> GarchParams:
    s = PERSISTENCE_CAP * float(expit(u[2]))
    share = float(expit(u[3]))
    return GarchParams(
        delta=float(u[0]),
        alpha0=_alpha0_inverse(u[1]),
        alpha1=share * s,
        beta=(1.0 - share) * s,
        nu=_nu_inverse(u[4]),
    )


def _gjr_forward(params: GjrParams) -> list[float]:
    arch = 0.5 * (params.alpha1 + params.xi)
    s = arch + params.beta
    share = arch / s if s > 0.0 else 0.5
    split = params.alpha1 / (2.0 * arch) if arch > 0.0 else 0.5
    return [
        params.delta,
        math.log(params.alpha0),
        _share_logit(s / PERSISTENCE_CAP),
        _share_logit(share),
        _share_logit(split),
        _nu_forward(params.nu),
    ]


def _gjr_inverse(u: np.ndarray) -> GjrParams:
    s = PERSISTENCE_CAP * float(expit(u[2]))
    arch = float(expit(u[3])) * s
    split = float(expit(u[4]))
    return GjrParams(
        delta=float(u[0]),
        alpha0=_alpha0_inverse(u[1]),
        alpha1=2.0 * arch * split,
        xi=2.0 * arch * (1.0 - split),
        beta=s - arch,
        nu=_nu_inverse(u[5]),
    )


def _egarch_forward(params: EgarchParams) -> list[float]:
    ratio = params.beta / PERSISTENCE_CAP
    ratio = min(max(ratio, -1.0 + SHARE_EPS), 1.0 - SHARE_EPS)
    return [
        params.delta,
        params.alpha0,
        params.alpha1,
        params.xi,
        math.atanh(ratio),
        _nu_forward(params.nu),
    ]


def _egarch_inverse(u: np.ndarray) -> EgarchParams:
    return EgarchParams(
        delta=float(u[0]),
        alpha0=float(u[1]),
        alpha1=float(u[2]),
        xi=float(u[3]),
        beta=PERSISTENCE_CAP * math.tanh(u[4]),
        nu=_nu_inverse(u[5]),
    )


def _mrs_forward(params: MrsParams) -> list[float]:
    return [
        *_garch_forward(params.regime(1)),
        *_garch_forward(params.regime(2)),
        _share_logit(params.p),
        _share_logit(params.q),
    ]


def _mrs_inverse(u: np.ndarray) -> MrsParams:
    return MrsParams.from_regimes(
        _garch_inverse(u[0:5]),
        _garch_inverse(u[5:10]),
        p=_prob_inverse(u[10]),
        q=_prob_inverse(u[11]),
    )


def to_unconstrained(params: ParamVector) -> np.ndarray:
    """Map a feasible parameter record to its unconstrained vector."""
    match params:
        case MrsParams():
            values = _mrs_forward(params)
        case GarchParams():
            values = _garch_forward(params)
        case GjrParams():
            values = _gjr_forward(params)
        case EgarchParams():
            values = _egarch_forward(params)
    return np.array(values, dtype=np.float64)


def from_unconstrained(kind: ModelKind, u: np.ndarray) -> ParamVector:
    """Map an unconstrained vector back to a feasible parameter record."""
    u = np.asarray(u, dtype=np.float64)
    match kind:
        case ModelKind.GARCH:
            return _garch_inverse(u)
        case ModelKind.GJR:
            return _gjr_inverse(u)
        case ModelKind.EGARCH:
            return _egarch_inverse(u)
        case ModelKind.MRS:
            return _mrs_inverse(u)


def near_boundary(params: ParamVector, tol: float = 1e-4) -> list[str]:
    """Return the names of constraints the record sits within ``tol`` of."""
    hits = []
    match params:
        case MrsParams():
            for i in (1, 2):
                hits += [f"{name}_{i}" for name in near_boundary(params.regime(i), tol)]
            hits += [
                name
                for name, value in (("p", params.p), ("q", params.q))
                if value < tol or value > 1.0 - tol
            ]
        case EgarchParams():
            if abs(params.beta) > PERSISTENCE_CAP - tol:
                hits.append("beta")
        case GarchParams() | GjrParams():
            if params.persistence > PERSISTENCE_CAP - tol:
                hits.append("persistence")
    if not isinstance(params, MrsParams) and params.nu >= NU_MAX - tol:
        hits.append("nu")
    return hits
