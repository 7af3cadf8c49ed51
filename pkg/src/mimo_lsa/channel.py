"""Small-scale fading, composite channels, pilot-contaminated estimates and
uplink received signals, all seen from a single base station.

Columns of a channel matrix use the flattened user index ``i = j * K + k``
(0-based cell ``j``, user ``k``), so column 0 is the desired user and columns
``u * K`` for ``u = 1 .. B-1`` are its pilot-sharing twins in other cells.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .rng import Stream


def flat_index(j: int, k: int, K: int) -> int:
    return j * K + k


def split_index(i: int, K: int) -> tuple[int, int]:
    return divmod(i, K)


@dataclass(frozen=True)
class ChannelSet:
    """Channels ``g`` (M, B*K) from every user to one base station."""

    g: np.ndarray
    beta_view: np.ndarray  # (B, K)

    def __post_init__(self):
        B, K = self.beta_view.shape
        if self.g.ndim != 2 or self.g.shape[1] != B * K:
            raise ValueError(f"g has shape {self.g.shape}, expected (M, {B * K})")

    @property
    def M(self) -> int:
        return self.g.shape[0]

    @property
    def B(self) -> int:
        return self.beta_view.shape[0]

    @property
    def K(self) -> int:
        return self.beta_view.shape[1]

    def column(self, j: int, k: int) -> np.ndarray:
        return self.g[:, flat_index(j, k, self.K)]

    def pilot_group(self, k: int = 0) -> np.ndarray:
        """Columns of user ``k`` in every cell, shape (M, B)."""
        return self.g[:, k::self.K]

    def scaled(self, c: complex) -> "ChannelSet":
        return ChannelSet(c * self.g, self.beta_view)


@dataclass(frozen=True)
class PilotEstimate:
    g_hat: np.ndarray  # (M, K), estimates of the serving base's own users
    kappa_used: int

    def user(self, k: int = 0) -> np.ndarray:
        return self.g_hat[:, k]


def sample_small_scale(M: int, n: int, rng: Stream) -> np.ndarray:
    if M < 1 or n < 1:
        raise ValueError("M and n must be >= 1")
    return rng.complex_normal((M, n))


def compose_channels(h: np.ndarray, beta_view) -> ChannelSet:
    """Scale each fading column by the square root of its large-scale gain."""
    beta_view = np.asarray(beta_view, dtype=float)
    if beta_view.ndim != 2:
        raise ValueError("beta_view must be (B, K)")
    if h.ndim != 2 or h.shape[1] != beta_view.size:
        raise ValueError(f"h has shape {h.shape}, gains cover {beta_view.size} users")
    return ChannelSet(h * np.sqrt(beta_view.reshape(-1)), beta_view)


def sample_channels(M: int, beta_view, rng: Stream) -> ChannelSet:
    beta_view = np.asarray(beta_view, dtype=float)
    return compose_channels(sample_small_scale(M, beta_view.size, rng), beta_view)


def pilot_estimate(sets: ChannelSet, kappa: int, base: int = 0) -> PilotEstimate:
    """Own-user estimates: same-index users of all other cells add in when
    ``kappa == 1``. No estimation noise is added."""
    if kappa not in (0, 1):
        raise ConfigError("kappa must be 0 or 1", field="kappa")
    B, K = sets.B, sets.K
    g3 = sets.g.reshape(sets.M, B, K)
    own = g3[:, base, :]
    if kappa == 0 or B == 1:
        return PilotEstimate(own.copy(), kappa)
    return PilotEstimate(g3.sum(axis=1), kappa)


def check_unit_power(symbols: np.ndarray) -> None:
    """Reject symbol sets whose average power is clearly not one."""
    power = float(np.mean(np.abs(symbols) ** 2))
    tol = 5.0 / np.sqrt(symbols.size) + 1e-9
    if abs(power - 1.0) > tol:
        raise ConfigError(f"symbols must have unit average power, got {power:.4g}", field="symbols")


def assemble_received(sets: ChannelSet, symbols, rho_r: float, rng: Stream | None,
                      noise: bool = True) -> np.ndarray:
    """Received vector(s) ``sqrt(rho_r / M) * G q + w``.

    ``symbols`` is (B*K,) for one channel use or (B*K, T) for T uses, giving
    an (M,) or (M, T) result. ``noise=False`` drops ``w`` (tests only).
    """
    q = np.asarray(symbols)
    if q.shape[0] != sets.g.shape[1]:
        raise ValueError(f"{q.shape[0]} symbols for {sets.g.shape[1]} users")
    check_unit_power(q)
    y = np.sqrt(rho_r / sets.M) * (sets.g @ q)
    if noise:
        y = y + rng.complex_normal(y.shape)
    return y


def draw_symbols(kind: str, shape, rng: Stream) -> np.ndarray:
    if kind == "qpsk":
        return rng.qpsk(shape)
    if kind == "gaussian":
        return rng.complex_normal(shape)
    raise ConfigError(f"unknown symbol alphabet {kind!r}; use 'qpsk' or 'gaussian'", field="symbols")


def write_channel_csv(path, sets: ChannelSet) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["col_index", "antenna_index", "re", "im"])
        for i in range(sets.g.shape[1]):
            for m in range(sets.M):
                z = sets.g[m, i]
                writer.writerow([i, m, repr(float(z.real)), repr(float(z.imag))])
