"""Randomized trials, empirical SINR distributions and convergence checks.

Every trial draws from its own counter-based streams keyed by
``mix_seed(master_seed, trial_index)``, so results do not depend on the
number of worker processes or on the order trials complete in.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import UserGainProfile, asymptotic_sinr, tse_hanly_sinr
from .channel import ChannelSet, draw_symbols, pilot_estimate, sample_channels
from .config import SystemConfig
from .geometry import DropModel, GainTensor, equal_power_gains
from .receivers import (SinrSample, default_mu0, filter_sinr, lms_train, matched_filter_sinr,
                        mmse_sinr)
from .rng import CHANNEL, DROP, NOISE, SYMBOLS, Stream, mix_seed

RECEIVERS = ("mf", "mmse", "lms")


@dataclass(frozen=True)
class EmpiricalCdf:
    samples_db: np.ndarray

    def __post_init__(self):
        s = np.sort(np.asarray(self.samples_db, dtype=float))
        if s.size == 0:
            raise ValueError("empirical CDF needs at least one sample")
        s.setflags(write=False)
        object.__setattr__(self, "samples_db", s)

    @property
    def n(self) -> int:
        return self.samples_db.size

    def quantile(self, q):
        return np.quantile(self.samples_db, q, method="linear")

    def median(self) -> float:
        return float(self.quantile(0.5))

    def mean(self) -> float:
        return float(self.samples_db.mean())

    def std(self) -> float:
        return float(self.samples_db.std(ddof=1)) if self.n > 1 else 0.0

    def evaluate(self, x):
        """Fraction of samples <= x."""
        return np.searchsorted(self.samples_db, x, side="right") / self.n


@dataclass(frozen=True)
class LmsOptions:
    T_train: int = 10_000
    mu0: float | None = None
    decay_tau: float | None = None
    symbols: str = "qpsk"

    def schedule(self, default_mu0: float) -> tuple[float, float]:
        mu0 = default_mu0 if self.mu0 is None else self.mu0
        tau = self.T_train / 10.0 if self.decay_tau is None else self.decay_tau
        return mu0, tau


@dataclass(frozen=True)
class TrialRow:
    trial: int
    receiver: str
    kappa: int | None
    M: int
    K: int
    sinr_db: float
    sinr_linear: float

    @property
    def label(self) -> str:
        return sample_label(self.receiver, self.kappa)


def sample_label(receiver: str, kappa) -> str:
    return f"mf_k{kappa}" if receiver == "mf" else receiver


def _resolve_gains(gains, trial_stream_seed: int) -> GainTensor:
    if isinstance(gains, DropModel):
        return gains.draw(Stream(trial_stream_seed, DROP))
    return gains


def run_trial(config: SystemConfig, gains: GainTensor | DropModel, trial_index: int,
              receivers=("mf", "mmse"), kappas=None, lms: LmsOptions | None = None) -> list[SinrSample]:
    """Evaluate the requested receivers on one shared channel realization.

    ``gains`` may be a frozen :class:`GainTensor` or a :class:`DropModel`, in
    which case a fresh user drop is made from the trial's own stream.
    """
    if trial_index < 0:
        raise ValueError("trial_index must be >= 0")
    unknown = set(receivers) - set(RECEIVERS)
    if unknown:
        raise ValueError(f"unknown receivers {sorted(unknown)}")
    kappas = (config.kappa,) if kappas is None else tuple(kappas)
    seed = mix_seed(config.master_seed, trial_index)
    g = _resolve_gains(gains, seed)
    if g.B != config.B or g.K != config.K:
        raise ValueError(f"gain tensor is {g.B}x{g.K}, config expects {config.B}x{config.K}")
    beta_view = g.at_base(0)
    rho = config.rho_r
    sets = sample_channels(config.M, beta_view, Stream(seed, CHANNEL))
    out = []
    if "mf" in receivers:
        for kappa in kappas:
            est = pilot_estimate(sets, kappa)
            out.append(matched_filter_sinr(est.user(0), sets, rho, kappa=kappa))
    if "mmse" in receivers:
        out.append(mmse_sinr(sets, rho))
    if "lms" in receivers:
        opts = lms or LmsOptions()
        training = draw_symbols(opts.symbols, (beta_view.size, opts.T_train), Stream(seed, SYMBOLS))
        state = lms_train(sets, rho, training, opts.schedule(default_mu0(rho, beta_view, config.M)),
                          Stream(seed, NOISE))
        out.append(filter_sinr(state.c, sets, rho, kind="lms"))
    return out


def _run_range(args) -> list[TrialRow]:
    config, gains, indices, receivers, kappas, lms = args
    rows = []
    for t in indices:
        for s in run_trial(config, gains, t, receivers, kappas, lms):
            rows.append(TrialRow(t, s.receiver_kind, s.kappa, s.M, s.K, s.db, s.linear))
    return rows


def default_workers() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)


@dataclass
class ExperimentResult:
    config: SystemConfig
    rows: list[TrialRow]
    cdfs: dict[str, EmpiricalCdf] = field(default_factory=dict)

    def __getitem__(self, label: str) -> EmpiricalCdf:
        return self.cdfs[label]

    def __contains__(self, label) -> bool:
        return label in self.cdfs

    def keys(self):
        return self.cdfs.keys()

    def linear(self, label: str) -> np.ndarray:
        """Per-trial linear SINR for ``label`` in trial order."""
        return np.array([r.sinr_linear for r in self.rows if r.label == label])


def run_experiment(config: SystemConfig, gains: GainTensor | DropModel, n_trials: int,
                   receivers=("mf", "mmse"), kappas=None, lms: LmsOptions | None = None,
                   workers: int = 1) -> ExperimentResult:
    if n_trials < 1:
        raise ValueError("n_trials must be >= 1")
    workers = max(1, min(int(workers), n_trials))
    if workers == 1:
        rows = _run_range((config, gains, range(n_trials), receivers, kappas, lms))
    else:
        # contiguous blocks in trial order; output order is independent of scheduling
        bounds = np.linspace(0, n_trials, workers * 4 + 1).astype(int)
        jobs = [(config, gains, range(a, b), receivers, kappas, lms)
                for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = [r for chunk in pool.map(_run_range, jobs) for r in chunk]
    rows.sort(key=lambda r: (r.trial, r.receiver, -1 if r.kappa is None else r.kappa))
    by_label: dict[str, list[float]] = {}
    for r in rows:
        by_label.setdefault(r.label, []).append(r.sinr_db)
    cdfs = {label: EmpiricalCdf(v) for label, v in by_label.items()}
    return ExperimentResult(config, rows, cdfs)


def profile_for(config: SystemConfig, gains: GainTensor, kappa: int | None = None) -> UserGainProfile:
    kappa = config.kappa if kappa is None else kappa
    return UserGainProfile.from_gains(gains, config.alpha, config.rho_r, kappa)


def limit_sinr(profile: UserGainProfile) -> SinrSample:
    return tse_hanly_sinr(profile) if profile.kappa == 0 else asymptotic_sinr(profile)


# --------------------------------------------------------------------------
# convergence to the large-system limit


@dataclass(frozen=True)
class ConvergenceRow:
    M: int
    K: int
    mean_sinr_db: float
    std_sinr_db: float
    asymptote_db: float
    abs_gap_db: float


def convergence_suite(alpha: float, M_grid, config: SystemConfig, n_trials: int,
                      drop_model: DropModel | None = None, workers: int = 1) -> list[ConvergenceRow]:
    """Mean matched-filter SINR versus the limit along a grid of M at fixed alpha.

    Equal unit gains are used unless ``drop_model`` is given, in which case
    one frozen drop per grid point is made from the master seed.
    """
    M_grid = [int(m) for m in M_grid]
    if M_grid != sorted(M_grid):
        raise ValueError("M_grid must be ascending")
    if not alpha > 0:
        raise ValueError("alpha must be > 0")
    rows = []
    for M in M_grid:
        cfg = config.replace(M=M, K=max(1, round(alpha * M)))
        if drop_model is None:
            gains = equal_power_gains(cfg.B, cfg.K)
        else:
            gains = drop_model.with_K(cfg.K).draw(Stream(mix_seed(config.master_seed, M), DROP))
        res = run_experiment(cfg, gains, n_trials, receivers=("mf",), workers=workers)
        cdf = res[sample_label("mf", cfg.kappa)]
        limit = limit_sinr(profile_for(cfg, gains)).db
        rows.append(ConvergenceRow(M, cfg.K, cdf.mean(), cdf.std(), limit, abs(cdf.mean() - limit)))
    return rows


# --------------------------------------------------------------------------
# quadratic-form terms of the large-system proof

QUADFORM_TERMS = ("own_gain", "noise_energy", "interference_sum", "pilot_cross_energy",
                  "cross_zero_terms")


@dataclass(frozen=True)
class QuadformReport:
    trial: int
    M: int
    K: int
    B: int
    term_id: str
    empirical: float
    limit: float
    scale: float
    residual: float


def quadform_terms(sets: ChannelSet, kappa: int = 1) -> dict[str, float]:
    """Empirical values of the five term families for one realization.

    Pilot group p = {0, K, 2K, ...}; X[u, i] = g_{p_u}^H g_i.
      own_gain            Re(g_hat^H g_0) / M
      noise_energy        g_hat^H g_hat / M
      interference_sum    sum_{i != 0} |X[0, i]|^2 / M^2
      pilot_cross_energy  sum_{u >= 1} sum_{i != 0} |X[u, i]|^2 / M^2
      cross_zero_terms    sum_{a != b} sum_{i != 0} X[a, i] conj(X[b, i]) / M^2
    """
    M = sets.M
    P = sets.pilot_group(0)
    g_hat = pilot_estimate(sets, kappa).user(0)
    X = P.conj().T @ sets.g[:, 1:]
    absX2 = np.abs(X) ** 2
    colsum = np.abs(X.sum(axis=0)) ** 2
    return {
        "own_gain": np.vdot(g_hat, sets.g[:, 0]).real / M,
        "noise_energy": np.vdot(g_hat, g_hat).real / M,
        "interference_sum": absX2[0].sum() / M**2,
        "pilot_cross_energy": absX2[1:].sum() / M**2,
        "cross_zero_terms": (colsum.sum() - absX2.sum()) / M**2,
    }


def quadform_limits(beta_view: np.ndarray, alpha: float, mean_beta: float,
                    kappa: int = 1) -> dict[str, float]:
    B = beta_view.shape[0]
    b11 = beta_view[0, 0]
    twins = beta_view[1:, 0]
    load = B * alpha * mean_beta
    return {
        "own_gain": b11,
        "noise_energy": b11 + kappa * twins.sum(),
        "interference_sum": b11 * load,
        "pilot_cross_energy": float(np.sum(twins * load + twins**2)),
        "cross_zero_terms": 0.0,
    }


def interference_finite_mean(beta_view: np.ndarray, M: int) -> float:
    """Exact E of the interference_sum term at finite M: b11 * sum_{i != 0} b_i / M."""
    flat = beta_view.reshape(-1)
    return float(flat[0] * flat[1:].sum() / M)


def quadform_suite(M: int, alpha: float, B: int = 7, beta_mode: str | DropModel = "equal",
                   n_trials: int = 100, seed: int = 0, kappa: int = 1) -> list[QuadformReport]:
    """Per-trial reports for every term family.

    ``residual`` is ``|empirical - limit| / max(scale, 1e-9)``. For terms with
    a nonzero limit ``scale`` is ``|limit|``; the cross terms vanish in the
    limit and are measured against the interference power they perturb,
    ``limit(interference_sum) + limit(pilot_cross_energy)``. COST231 gains
    are normalized by E[beta] first, which leaves every residual unchanged.
    """
    if M < 50:
        raise ValueError("quadform_suite needs M >= 50")
    K = max(1, round(alpha * M))
    a = K / M
    if isinstance(beta_mode, DropModel):
        drop_model = beta_mode.with_K(K)
    elif beta_mode == "equal":
        drop_model = None
    else:
        raise ValueError(f"unknown beta_mode {beta_mode!r}")
    reports = []
    gains = equal_power_gains(B, K) if drop_model is None else None
    for t in range(n_trials):
        tseed = mix_seed(seed, t)
        if drop_model is not None:
            gains = drop_model.draw(Stream(tseed, DROP))
        beta_view = gains.at_base(0) / gains.mean_beta
        sets = sample_channels(M, beta_view, Stream(tseed, CHANNEL))
        emp = quadform_terms(sets, kappa)
        lim = quadform_limits(beta_view, a, 1.0, kappa)
        cross_scale = lim["interference_sum"] + lim["pilot_cross_energy"]
        for term in QUADFORM_TERMS:
            scale = cross_scale if term == "cross_zero_terms" else abs(lim[term])
            resid = abs(emp[term] - lim[term]) / max(scale, 1e-9)
            reports.append(QuadformReport(t, M, K, B, term, float(emp[term]), float(lim[term]),
                                          float(scale), float(resid)))
    return reports


@dataclass(frozen=True)
class QuadformSummary:
    term_id: str
    M: int
    n: int
    mean_empirical: float
    std_err: float
    limit: float
    median_residual: float


def summarize_quadform(reports) -> dict[str, QuadformSummary]:
    out = {}
    for term in QUADFORM_TERMS:
        sel = [r for r in reports if r.term_id == term]
        if not sel:
            continue
        emp = np.array([r.empirical for r in sel])
        se = float(emp.std(ddof=1) / np.sqrt(emp.size)) if emp.size > 1 else float("nan")
        out[term] = QuadformSummary(term, sel[0].M, emp.size, float(emp.mean()), se,
                                    float(np.mean([r.limit for r in sel])),
                                    float(np.median([r.residual for r in sel])))
    return out


# --------------------------------------------------------------------------
# CDF study: the five receiver situations compared side by side

SITUATIONS = ("mf_alpha0_k0", "mf_alpha0_k1", "mf_k0", "mf_k1", "mmse")


@dataclass
class CdfStudy:
    alpha0: ExperimentResult
    loaded: ExperimentResult
    cdfs: dict[str, EmpiricalCdf]

    @property
    def mmse_gain_db(self) -> float:
        return self.cdfs["mmse"].median() - self.cdfs["mf_k1"].median()

    @property
    def loading_loss_db(self) -> float:
        return self.cdfs["mf_alpha0_k0"].median() - self.cdfs["mf_k0"].median()

    def summary(self) -> dict[str, float]:
        out = {f"median_db_{k}": v.median() for k, v in self.cdfs.items()}
        out["mmse_gain_db"] = self.mmse_gain_db
        out["loading_loss_db"] = self.loading_loss_db
        out["contamination_loss_db"] = self.cdfs["mf_k0"].median() - self.cdfs["mf_k1"].median()
        return out


def cdf_study(config: SystemConfig, n_trials: int, drop_model: DropModel | None = None,
              alpha0_M: int = 1000, redrop: bool = False, workers: int = 1) -> CdfStudy:
    """Run the loaded system (config's M, K) and the alpha -> 0 proxy.

    The proxy keeps one user per cell (K = 1) with ``alpha0_M`` antennas, so
    only the desired user's pilot twins interfere. With a frozen drop the
    proxy reuses user 0 of each cell from the loaded drop.
    """
    cfg0 = config.replace(M=int(alpha0_M), K=1, master_seed=mix_seed(config.master_seed, 0))
    cfg1 = config.replace(master_seed=mix_seed(config.master_seed, 1))
    if drop_model is None:
        g0, g1 = equal_power_gains(config.B, 1), equal_power_gains(config.B, config.K)
    elif redrop:
        g0, g1 = drop_model.with_K(1), drop_model.with_K(config.K)
    else:
        g1 = drop_model.with_K(config.K).draw(Stream(config.master_seed, DROP))
        g0 = g1.first_users()
    r0 = run_experiment(cfg0, g0, n_trials, receivers=("mf",), kappas=(0, 1), workers=workers)
    r1 = run_experiment(cfg1, g1, n_trials, receivers=("mf", "mmse"), kappas=(0, 1), workers=workers)
    cdfs = {
        "mf_alpha0_k0": r0["mf_k0"],
        "mf_alpha0_k1": r0["mf_k1"],
        "mf_k0": r1["mf_k0"],
        "mf_k1": r1["mf_k1"],
        "mmse": r1["mmse"],
    }
    return CdfStudy(r0, r1, cdfs)
