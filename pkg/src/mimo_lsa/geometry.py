"""Hexagonal multi-cell layout, user drops and COST231-Hata large-scale gains.

Hexagons are pointy along the x axis (vertices at 0, 60, ... degrees), so the
six neighbours of the center cell sit at distance sqrt(3) * R in the
directions 30 + 60 * n degrees.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError
from .rng import SHADOWING, Stream

SUPPORTED_CELL_COUNTS = (1, 7)
MAX_DROP_ATTEMPTS = 10**6

_EDGE_ANGLES = np.deg2rad(30.0 + 60.0 * np.arange(6))
_EDGE_NORMALS = np.stack([np.cos(_EDGE_ANGLES), np.sin(_EDGE_ANGLES)], axis=1)


@dataclass(frozen=True)
class CellLayout:
    base_positions: np.ndarray  # (B, 2), km
    cell_radius: float  # hexagon circumradius, km

    @property
    def B(self) -> int:
        return len(self.base_positions)

    def contains(self, cell: int, points) -> np.ndarray:
        """Point-in-hexagon test for points given in absolute coordinates."""
        rel = np.atleast_2d(np.asarray(points, dtype=float)) - self.base_positions[cell]
        apothem = self.cell_radius * math.sqrt(3.0) / 2.0
        # small slack absorbs rounding on the boundary
        return np.all(rel @ _EDGE_NORMALS.T <= apothem * (1 + 1e-12), axis=1)


@dataclass(frozen=True)
class UserDrop:
    positions: np.ndarray  # (B, K, 2), km
    min_distance: float

    @property
    def K(self) -> int:
        return self.positions.shape[1]


@dataclass(frozen=True)
class LinkBudget:
    carrier_mhz: float = 1900.0
    base_height_m: float = 30.0
    mobile_height_m: float = 1.5
    clutter_db: float = 3.0
    tx_power_dbm: float = 23.0
    noise_power_dbm: float = -174.0
    shadowing_sigma_db: float = 0.0

    def __post_init__(self):
        if not 1500.0 <= self.carrier_mhz <= 2000.0:
            raise ConfigError(
                f"carrier_mhz={self.carrier_mhz} outside COST231-Hata range [1500, 2000]",
                field="carrier_mhz",
            )
        for name in ("base_height_m", "mobile_height_m", "clutter_db",
                     "tx_power_dbm", "noise_power_dbm", "shadowing_sigma_db"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ConfigError(f"{name} must be finite", field=name)
        if self.base_height_m <= 0 or self.mobile_height_m <= 0:
            raise ConfigError("antenna heights must be positive", field="base_height_m")
        if self.shadowing_sigma_db < 0:
            raise ConfigError("shadowing_sigma_db must be >= 0", field="shadowing_sigma_db")

    @property
    def rho_r_db(self) -> float:
        """Transmit-to-noise power ratio in dB (path gain is carried by beta)."""
        return self.tx_power_dbm - self.noise_power_dbm


@dataclass(frozen=True)
class GainTensor:
    """Large-scale gains ``beta[l, j, k]`` from user k of cell j to base l."""

    beta: np.ndarray  # (B, B, K)
    mean_beta: float = field(default=None)

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=float)
        if beta.ndim != 3 or beta.shape[0] != beta.shape[1]:
            raise ValueError(f"beta must have shape (B, B, K), got {beta.shape}")
        if not np.all(np.isfinite(beta)) or np.any(beta <= 0):
            raise ValueError("gains must be strictly positive and finite")
        object.__setattr__(self, "beta", beta)
        if self.mean_beta is None:
            object.__setattr__(self, "mean_beta", float(beta[0].mean()))

    @property
    def B(self) -> int:
        return self.beta.shape[0]

    @property
    def K(self) -> int:
        return self.beta.shape[2]

    def at_base(self, l: int = 0) -> np.ndarray:
        """The (B, K) slice of gains seen by base ``l``."""
        return self.beta[l]

    def first_users(self) -> "GainTensor":
        """Restrict to user index 0 of every cell (K = 1), keeping E[beta]."""
        return GainTensor(self.beta[:, :, :1].copy(), mean_beta=self.mean_beta)


def build_hex_layout(B: int = 7, R: float = 2.0) -> CellLayout:
    if B not in SUPPORTED_CELL_COUNTS:
        raise ConfigError(
            f"B={B} not supported; supported cell counts are {SUPPORTED_CELL_COUNTS}", field="B"
        )
    if not R > 0:
        raise ConfigError("cell radius must be positive", field="cell_radius")
    centers = [(0.0, 0.0)]
    if B == 7:
        spacing = math.sqrt(3.0) * R
        centers += [(spacing * math.cos(a), spacing * math.sin(a)) for a in _EDGE_ANGLES]
    return CellLayout(np.array(centers), float(R))


def drop_users(layout: CellLayout, K: int, min_distance: float, rng: Stream) -> UserDrop:
    """Place K users uniformly in each hexagon by rejection from its bounding box."""
    if K < 1:
        raise ConfigError("K must be >= 1", field="K")
    R = layout.cell_radius
    if not min_distance < R:
        raise ConfigError("min_distance must be smaller than the cell radius", field="min_distance")
    half_h = R * math.sqrt(3.0) / 2.0
    apothem = half_h
    positions = np.empty((layout.B, K, 2))
    for j in range(layout.B):
        accepted = []
        n_acc = 0
        attempts = 0
        while n_acc < K:
            # acceptance rate is 0.75, so two batches almost always suffice
            batch = max(2 * (K - n_acc), 16)
            attempts += batch
            if attempts > MAX_DROP_ATTEMPTS:
                raise RuntimeError(f"user drop for cell {j} exceeded {MAX_DROP_ATTEMPTS} attempts")
            cand = np.column_stack([rng.uniform(batch) * 2 * R - R,
                                    rng.uniform(batch) * 2 * half_h - half_h])
            inside = np.all(cand @ _EDGE_NORMALS.T <= apothem, axis=1)
            inside &= np.hypot(cand[:, 0], cand[:, 1]) >= min_distance
            keep = cand[inside][: K - n_acc]
            accepted.append(keep)
            n_acc += len(keep)
        positions[j] = np.concatenate(accepted) + layout.base_positions[j]
    return UserDrop(positions, float(min_distance))


def hata_mobile_correction(mobile_height_m: float) -> float:
    """Large-city mobile antenna correction a(h_m) for f >= 300 MHz."""
    return 3.2 * math.log10(11.75 * mobile_height_m) ** 2 - 4.97


def cost231_pathloss_db(d, budget: LinkBudget):
    """COST231-Hata path loss in dB for distance(s) ``d`` in km."""
    d = np.asarray(d, dtype=float)
    if np.any(~(d > 0)):
        raise ValueError("distance must be > 0 km")
    hb = budget.base_height_m
    pl = (
        46.3
        + 33.9 * math.log10(budget.carrier_mhz)
        - 13.82 * math.log10(hb)
        - hata_mobile_correction(budget.mobile_height_m)
        + (44.9 - 6.55 * math.log10(hb)) * np.log10(d)
        + budget.clutter_db
    )
    return float(pl) if pl.ndim == 0 else pl


def distances(layout: CellLayout, drop: UserDrop) -> np.ndarray:
    """``d[l, j, k]``: distance in km from base l to user k of cell j."""
    diff = drop.positions[None, :, :, :] - layout.base_positions[:, None, None, :]
    return np.hypot(diff[..., 0], diff[..., 1])


def compute_gains(layout: CellLayout, drop: UserDrop, budget: LinkBudget,
                  rng: Stream | None = None) -> GainTensor:
    if drop.positions.shape[0] != layout.B:
        raise ValueError("drop and layout disagree on the number of cells")
    pl_db = cost231_pathloss_db(distances(layout, drop), budget)
    if budget.shadowing_sigma_db > 0:
        if rng is None:
            raise ValueError("shadowing requires a random stream")
        pl_db = pl_db + budget.shadowing_sigma_db * rng.normal(pl_db.shape)
    return GainTensor(10.0 ** (-pl_db / 10.0))


def equal_power_gains(B: int, K: int) -> GainTensor:
    """All gains unity."""
    return GainTensor(np.ones((B, B, K)), mean_beta=1.0)


@dataclass(frozen=True)
class DropModel:
    """Recipe for drawing a fresh COST231 gain tensor from a stream."""

    layout: CellLayout
    budget: LinkBudget
    K: int
    min_distance: float = 0.035

    def draw(self, rng: Stream) -> GainTensor:
        return self.draw_with_drop(rng)[1]

    def draw_with_drop(self, rng: Stream) -> tuple[UserDrop, GainTensor]:
        drop = drop_users(self.layout, self.K, self.min_distance, rng)
        return drop, compute_gains(self.layout, drop, self.budget, rng.child(SHADOWING))

    def with_K(self, K: int) -> "DropModel":
        return DropModel(self.layout, self.budget, K, self.min_distance)


def write_drop_csv(path, drop: UserDrop) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cell_index", "user_index", "x_km", "y_km"])
        B, K, _ = drop.positions.shape
        for j in range(B):
            for k in range(K):
                x, y = drop.positions[j, k]
                writer.writerow([j, k, repr(float(x)), repr(float(y))])
