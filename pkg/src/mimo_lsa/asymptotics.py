"""Large-system limit of the matched-filter SINR under pilot contamination.

As M, K grow with K / M = alpha fixed, the matched-filter SINR of the desired
user concentrates on

    SINR* = [rho b11 / (1 + A)] / (1 + rho [P / (1 + A) + B alpha E[beta]])

with A = kappa * sum_j b_j / b11 and P = kappa * sum_j b_j^2 / b11 over the
pilot-sharing users of the other B - 1 cells.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .geometry import GainTensor
from .receivers import SinrSample

FAVORABLE_RATIO = 0.1
WORST_CASE_FRACTION = 0.5


@dataclass(frozen=True)
class UserGainProfile:
    beta_own: float
    beta_pilot_interferers: tuple = field(default=())
    mean_beta: float = 1.0
    alpha: float = 0.0
    rho_r: float = 1.0
    kappa: int = 1

    def __post_init__(self):
        interferers = tuple(float(b) for b in np.atleast_1d(self.beta_pilot_interferers))
        object.__setattr__(self, "beta_pilot_interferers", interferers)
        if self.beta_own < 0 or any(b < 0 for b in interferers):
            raise ValueError("gains must be >= 0")
        if self.mean_beta < 0 or self.alpha < 0:
            raise ValueError("mean_beta and alpha must be >= 0")
        if self.kappa not in (0, 1):
            raise ValueError("kappa must be 0 or 1")

    @property
    def B(self) -> int:
        return 1 + len(self.beta_pilot_interferers)

    def replace(self, **changes) -> "UserGainProfile":
        values = dict(self.__dict__)
        values.update(changes)
        return UserGainProfile(**values)

    @classmethod
    def equal_power(cls, B: int, alpha: float, rho_r: float, kappa: int) -> "UserGainProfile":
        return cls(1.0, (1.0,) * (B - 1), 1.0, alpha, rho_r, kappa)

    @classmethod
    def from_gains(cls, gains: GainTensor, alpha: float, rho_r: float, kappa: int,
                   user: int = 0) -> "UserGainProfile":
        """Profile of ``user`` in the center cell as seen by base 0."""
        b = gains.at_base(0)
        return cls(float(b[0, user]), tuple(b[1:, user]), gains.mean_beta, alpha, rho_r, kappa)


def _sample(linear: float, kind: str, p: UserGainProfile) -> SinrSample:
    # M and K are unbounded in the limit; recorded as 0 by convention
    return SinrSample(linear, kind, p.kappa, 0, 0, p.B)


def _check_own(p: UserGainProfile) -> None:
    if not p.beta_own > 0:
        raise ValueError("beta_own must be > 0")


def asymptotic_sinr(p: UserGainProfile) -> SinrSample:
    _check_own(p)
    b11 = p.beta_own
    interf = np.asarray(p.beta_pilot_interferers)
    A = p.kappa * interf.sum() / b11
    P = p.kappa * np.square(interf).sum() / b11
    num = p.rho_r * b11 / (1.0 + A)
    den = 1.0 + p.rho_r * (P / (1.0 + A) + p.B * p.alpha * p.mean_beta)
    return _sample(num / den, "asymptotic", p)


def tse_hanly_sinr(p: UserGainProfile) -> SinrSample:
    """Perfect-estimate limit ``rho b11 / (1 + rho B alpha E[beta])``."""
    if p.kappa != 0:
        raise ValueError("tse_hanly_sinr applies to perfect estimates only (kappa=0)")
    _check_own(p)
    return _sample(p.rho_r * p.beta_own / (1.0 + p.rho_r * p.B * p.alpha * p.mean_beta),
                   "tse_hanly", p)


def marzetta_limit(p: UserGainProfile) -> SinrSample:
    """High-SNR, alpha = 0 ceiling ``b11^2 / sum_j b_j^2``.

    Returns ``inf`` when no interferer has positive gain.
    """
    if p.kappa != 1:
        raise ValueError("marzetta_limit describes contaminated estimates (kappa=1)")
    _check_own(p)
    sumsq = float(np.square(p.beta_pilot_interferers).sum())
    linear = math.inf if sumsq == 0.0 else p.beta_own**2 / sumsq
    return _sample(linear, "marzetta", p)


@dataclass(frozen=True)
class ScenarioClass:
    ratio_sum: float
    ratio_sumsq: float
    label: str


def classify_scenario(p: UserGainProfile) -> ScenarioClass:
    _check_own(p)
    interf = np.asarray(p.beta_pilot_interferers)
    ratio_sum = float(interf.sum() / p.beta_own)
    ratio_sumsq = float(np.square(interf).sum() / p.beta_own)
    if ratio_sum < FAVORABLE_RATIO:
        label = "favorable"
    elif ratio_sum > WORST_CASE_FRACTION * (p.B - 1):
        label = "worst_case"
    else:
        label = "intermediate"
    return ScenarioClass(ratio_sum, ratio_sumsq, label)


def alpha_sweep(profile: UserGainProfile, alphas, kappas=(0, 1)) -> list[dict]:
    """Rows of (alpha, kappa, sinr_db, sinr_linear, label) over a grid."""
    rows = []
    label = classify_scenario(profile).label
    for kappa in kappas:
        for a in alphas:
            s = asymptotic_sinr(profile.replace(alpha=float(a), kappa=kappa))
            rows.append({"alpha": float(a), "kappa": kappa, "sinr_db": s.db,
                         "sinr_linear": s.linear, "label": label})
    return rows
