"""Finite-size SINR of linear receivers for the desired user (column 0).

All SINR expressions share one convention: with the received vector
``y = sqrt(rho/M) * G q + w`` and a filter ``c``, the decision statistic is
``c^H y`` and

    SINR = rho |c^H g_0|^2 / (M ||c||^2 + rho * sum_{i != 0} |c^H g_i|^2).

The matched filter is the special case ``c = g_hat``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from . import kernels
from .channel import ChannelSet, assemble_received
from .errors import DegenerateInputError, DivergenceError
from .rng import Stream

DIVERGENCE_BOUND = 1e6


def to_db(x):
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(x)


@dataclass(frozen=True)
class SinrSample:
    linear: float
    receiver_kind: str
    kappa: int | None
    M: int
    K: int
    B: int
    db: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "linear", float(self.linear))
        db = math.inf if math.isinf(self.linear) else float(to_db(self.linear))
        object.__setattr__(self, "db", db)


def _sample(linear, kind, kappa, sets: ChannelSet) -> SinrSample:
    return SinrSample(linear, kind, kappa, sets.M, sets.K, sets.B)


def filter_sinr(c, sets: ChannelSet, rho_r: float, kind: str = "filter",
                kappa: int | None = None) -> SinrSample:
    c = np.asarray(c)
    energy = np.vdot(c, c).real
    if energy == 0.0:
        raise DegenerateInputError("filter vector is identically zero")
    proj = np.abs(c.conj() @ sets.g) ** 2
    num = rho_r * proj[0]
    den = sets.M * energy + rho_r * (proj.sum() - proj[0])
    return _sample(num / den, kind, kappa, sets)


def matched_filter_sinr(g_hat, sets: ChannelSet, rho_r: float, kappa: int | None = None) -> SinrSample:
    """Matched filter on the (possibly pilot-contaminated) estimate ``g_hat``."""
    g_hat = np.asarray(g_hat)
    if not np.any(g_hat):
        raise DegenerateInputError("channel estimate is identically zero")
    return filter_sinr(g_hat, sets, rho_r, kind="mf", kappa=kappa)


def _covariance(g: np.ndarray, rho_r: float, M: int) -> np.ndarray:
    return (rho_r / M) * (g @ g.conj().T) + np.eye(M)


def mmse_filter(sets: ChannelSet, rho_r: float) -> np.ndarray:
    """``E[y y^H]^{-1} E[q_0^* y]`` via a Cholesky solve."""
    M = sets.M
    scale = np.sqrt(rho_r / M)
    factor = cho_factor(_covariance(sets.g, rho_r, M), lower=True)
    return cho_solve(factor, scale * sets.g[:, 0])


def mmse_sinr(sets: ChannelSet, rho_r: float) -> SinrSample:
    M = sets.M
    g0 = sets.g[:, 0]
    factor = cho_factor(_covariance(sets.g[:, 1:], rho_r, M), lower=True)
    x = cho_solve(factor, g0)
    return _sample((rho_r / M) * np.vdot(g0, x).real, "mmse", None, sets)


@dataclass
class LmsState:
    c: np.ndarray
    mu0: float
    decay_tau: float
    t: int = 0
    squared_error: np.ndarray = field(default_factory=lambda: np.empty(0))
    sinr_trace: list = field(default_factory=list)  # (t, sinr_db) checkpoints


def default_mu0(rho_r: float, beta_view, M: int) -> float:
    """Initial step size ``0.01 / (per-antenna received power)``.

    For unit gains the received power per antenna is ``rho_r * B * K / M + 1``.
    """
    return 0.01 / (rho_r * float(np.sum(beta_view)) / M + 1.0)


def step_sizes(mu0: float, decay_tau: float, t0: int, n: int) -> np.ndarray:
    """``mu_t = mu0 / (1 + t / decay_tau)`` for ``t = t0 + 1 .. t0 + n``."""
    t = np.arange(t0 + 1, t0 + n + 1, dtype=float)
    return mu0 / (1.0 + t / decay_tau)


def training_signal(sets: ChannelSet, rho_r: float, training: np.ndarray, rng: Stream) -> np.ndarray:
    """Received training vectors as rows, shape (T, M)."""
    y = assemble_received(sets, training, rho_r, rng)
    return np.ascontiguousarray(y.T)


def lms_run(state: LmsState, y_rows: np.ndarray, psi: np.ndarray,
            trace_every: int = 0, sets: ChannelSet | None = None, rho_r: float | None = None,
            backend=None) -> LmsState:
    """Advance ``state`` over the given training rows in place.

    The update is ``c <- c + mu_t * conj(psi_t - c^H y_t) * y_t``. When
    ``trace_every`` is positive the filter SINR is recorded at every multiple
    of that many steps (requires ``sets`` and ``rho_r``).
    """
    impl = backend or kernels
    T = y_rows.shape[0]
    psi = np.ascontiguousarray(psi, dtype=np.complex128)
    errors = np.empty(T)
    chunk = trace_every if trace_every > 0 else T
    start = 0
    while start < T:
        stop = min(start + chunk, T)
        mu = step_sizes(state.mu0, state.decay_tau, state.t, stop - start)
        hit = impl.lms_run(state.c, y_rows[start:stop], psi[start:stop], mu,
                           errors[start:stop], DIVERGENCE_BOUND)
        if hit >= 0:
            raise DivergenceError(
                f"LMS filter norm exceeded {DIVERGENCE_BOUND:g} at step {state.t + hit + 1}"
                f" with mu0={state.mu0:g}; reduce mu0"
            )
        state.t += stop - start
        if trace_every > 0 and state.t % trace_every == 0 and np.any(state.c):
            state.sinr_trace.append((state.t, filter_sinr(state.c, sets, rho_r).db))
        start = stop
    state.squared_error = np.concatenate([state.squared_error, errors])
    return state


def lms_train(sets: ChannelSet, rho_r: float, training: np.ndarray,
              schedule: tuple[float, float] | None, rng: Stream,
              trace_every: int = 0, backend=None) -> LmsState:
    """Train an LMS receive filter for user 0 from ``c = 0``.

    ``training`` holds one row of T symbols per user (B*K, T); every user
    transmits its row simultaneously and user 0's row is the reference.
    ``schedule`` is ``(mu0, decay_tau)``; ``None`` selects the defaults.
    """
    training = np.asarray(training)
    T = training.shape[1]
    if T < 1:
        raise ValueError("need at least one training symbol")
    if schedule is None:
        schedule = (default_mu0(rho_r, sets.beta_view, sets.M), T / 10.0)
    mu0, decay_tau = schedule
    state = LmsState(np.zeros(sets.M, dtype=np.complex128), float(mu0), float(decay_tau))
    y_rows = training_signal(sets, rho_r, training, rng)
    return lms_run(state, y_rows, training[0], trace_every, sets, rho_r, backend)
