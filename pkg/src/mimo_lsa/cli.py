"""Command-line entry point: ``mimo-lsa <subcommand> [options]``.

Every run writes CSV outputs plus a ``manifest.json`` whose ``config_echo``
can be passed back through ``--config`` to regenerate identical CSVs.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields, replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from . import montecarlo as mc
from .asymptotics import UserGainProfile, alpha_sweep
from .channel import sample_channels, write_channel_csv
from .config import DEFAULT_SEED, CoherenceBudget, SystemConfig
from .errors import ConfigError, MimoLsaError
from .geometry import (DropModel, LinkBudget, build_hex_layout, equal_power_gains,
                       write_drop_csv)
from .kernels import BACKEND
from .receivers import default_mu0, filter_sinr, lms_train, mmse_sinr
from .rng import CHANNEL, DROP, NOISE, SYMBOLS, Stream, mix_seed

SUBCOMMANDS = ("asymptotic", "montecarlo", "cdf", "convergence", "quadform", "lms")
SCENARIOS = ("equal_power", "cost231")

TOP_LEVEL_KEYS = {"B", "K", "M", "alpha", "rho_r_db", "kappa", "seed", "scenario", "link_budget",
                  "coherence", "lms", "cell_radius_km", "min_distance_km", "suite"}
LMS_KEYS = {"mu0", "decay_tau", "T_train"}
COHERENCE_KEYS = {"T_c", "N_c", "T"}

SUITE_DEFAULTS = {
    "asymptotic": {"alpha_grid": "0:1:0.02", "kappas": [0, 1]},
    "montecarlo": {"trials": 200, "receivers": ["mf", "mmse"], "kappas": [0, 1], "redrop": False},
    "cdf": {"trials": 500, "alpha0_M": 1000, "redrop": False},
    "convergence": {"alpha": 0.2, "M_grid": [50, 100, 200, 400], "trials": 200},
    "quadform": {"M_list": [200, 2000], "alpha": 0.1, "beta_mode": "equal", "trials": 100},
    "lms": {"trials": 50},
}


@dataclass(frozen=True)
class ResolvedConfig:
    system: SystemConfig
    scenario: str = "equal_power"
    link_budget: LinkBudget = field(default_factory=LinkBudget)
    lms: mc.LmsOptions = field(default_factory=mc.LmsOptions)
    cell_radius_km: float = 2.0
    min_distance_km: float = 0.035
    suite: dict = field(default_factory=dict)

    def drop_model(self) -> DropModel | None:
        if self.scenario != "cost231":
            return None
        return DropModel(build_hex_layout(self.system.B, self.cell_radius_km), self.link_budget,
                         self.system.K, self.min_distance_km)

    def echo(self) -> dict:
        s = self.system
        out = {"B": s.B, "K": s.K, "M": s.M, "rho_r_db": s.rho_r_db, "kappa": s.kappa,
               "seed": s.master_seed, "scenario": self.scenario,
               "link_budget": asdict(self.link_budget),
               "lms": {k: v for k, v in asdict(self.lms).items() if k != "symbols"},
               "cell_radius_km": self.cell_radius_km, "min_distance_km": self.min_distance_km,
               "suite": dict(self.suite)}
        if s.coherence is not None:
            out["coherence"] = asdict(s.coherence)
        return out


def _require(cond, message, field_name):
    if not cond:
        raise ConfigError(message, field=field_name)


def _as_int(raw, key):
    value = raw[key]
    _require(isinstance(value, (int, float)) and not isinstance(value, bool)
             and float(value).is_integer(), f"{key} must be an integer", key)
    return int(value)


def _as_float(raw, key):
    value = raw[key]
    _require(isinstance(value, (int, float)) and not isinstance(value, bool)
             and math.isfinite(value), f"{key} must be a finite number", key)
    return float(value)


def _check_keys(section: dict, allowed: set, prefix: str = ""):
    _require(isinstance(section, dict), f"{prefix or 'config'} must be a JSON object", prefix or "config")
    for key in section:
        _require(key in allowed, f"unknown key {prefix}{key}", prefix + key)


def parse_config(raw: dict) -> ResolvedConfig:
    """Validate a raw configuration mapping and fill in defaults."""
    _check_keys(raw, TOP_LEVEL_KEYS)
    scenario = raw.get("scenario", "equal_power")
    _require(scenario in SCENARIOS, f"scenario must be one of {SCENARIOS}", "scenario")

    budget_raw = raw.get("link_budget", {})
    _check_keys(budget_raw, {f.name for f in fields(LinkBudget)}, "link_budget.")
    for key in budget_raw:
        _as_float(budget_raw, key)
        budget_raw = {**budget_raw, key: float(budget_raw[key])}
    budget = LinkBudget(**budget_raw)

    if "kappa" in raw:
        _require(raw["kappa"] in (0, 1) and not isinstance(raw["kappa"], bool),
                 "kappa must be 0 or 1", "kappa")
    coherence = None
    if "coherence" in raw:
        c = raw["coherence"]
        _check_keys(c, COHERENCE_KEYS, "coherence.")
        for key in COHERENCE_KEYS:
            _require(key in c, f"coherence.{key} is required", f"coherence.{key}")
            _as_int(c, key)
        coherence = CoherenceBudget(int(c["T_c"]), int(c["N_c"]), int(c["T"]))

    B = _as_int(raw, "B") if "B" in raw else 7
    M = _as_int(raw, "M") if "M" in raw else 50
    K = _as_int(raw, "K") if "K" in raw else None
    alpha = _as_float(raw, "alpha") if "alpha" in raw else None
    if K is None and alpha is None:
        alpha = 1.0
    if scenario == "cost231":
        rho_db = budget.rho_r_db
        if "rho_r_db" in raw:
            _require(abs(_as_float(raw, "rho_r_db") - rho_db) < 1e-9,
                     f"rho_r_db is derived from the link budget in cost231 mode ({rho_db} dB)",
                     "rho_r_db")
    else:
        rho_db = _as_float(raw, "rho_r_db") if "rho_r_db" in raw else 20.0
    seed = _as_int(raw, "seed") if "seed" in raw else DEFAULT_SEED
    system = SystemConfig.build(B=B, M=M, K=K, alpha=alpha, rho_r_db=rho_db,
                                kappa=raw.get("kappa", 1), master_seed=seed, coherence=coherence)
    if scenario == "cost231":
        build_hex_layout(B)  # validates B

    lms_raw = raw.get("lms", {})
    _check_keys(lms_raw, LMS_KEYS, "lms.")
    lms = mc.LmsOptions(
        T_train=_as_int(lms_raw, "T_train") if "T_train" in lms_raw else 10_000,
        mu0=None if lms_raw.get("mu0") is None else _as_float(lms_raw, "mu0"),
        decay_tau=None if lms_raw.get("decay_tau") is None else _as_float(lms_raw, "decay_tau"),
    )
    _require(lms.T_train >= 1, "lms.T_train must be >= 1", "lms.T_train")
    _require(lms.mu0 is None or lms.mu0 >= 0, "lms.mu0 must be >= 0", "lms.mu0")
    _require(lms.decay_tau is None or lms.decay_tau > 0, "lms.decay_tau must be > 0", "lms.decay_tau")

    radius = _as_float(raw, "cell_radius_km") if "cell_radius_km" in raw else 2.0
    min_d = _as_float(raw, "min_distance_km") if "min_distance_km" in raw else 0.035
    _require(radius > 0, "cell_radius_km must be > 0", "cell_radius_km")
    _require(0 < min_d < radius, "min_distance_km must lie in (0, cell_radius_km)", "min_distance_km")
    suite = raw.get("suite", {})
    _require(isinstance(suite, dict), "suite must be a JSON object", "suite")
    return ResolvedConfig(system, scenario, budget, lms, radius, min_d, dict(suite))


# --------------------------------------------------------------------------
# output helpers


def fmt_db(x: float) -> str:
    return "inf" if math.isinf(x) else f"{x:.6f}"


def fmt_float(x: float) -> str:
    return repr(float(x))


def write_csv(path: Path, header, rows) -> Path:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def _trial_rows(rows):
    return [[r.trial, r.receiver, "" if r.kappa is None else r.kappa, r.M, r.K, fmt_db(r.sinr_db)]
            for r in rows]


TRIAL_HEADER = ["trial", "receiver", "kappa", "M", "K", "sinr_db"]


def parse_grid(text: str) -> np.ndarray:
    """``start:stop:step`` (inclusive) or a comma-separated list."""
    try:
        if ":" in text:
            start, stop, step = (float(v) for v in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            n = int(round((stop - start) / step)) + 1
            return np.round(start + step * np.arange(n), 12)
        return np.array([float(v) for v in text.split(",")])
    except ValueError:
        raise ConfigError(f"bad grid {text!r}; use start:stop:step or a,b,c", field="alpha_grid")


def _int_list(value, name):
    if isinstance(value, str):
        try:
            value = [int(v) for v in value.split(",")]
        except ValueError:
            raise ConfigError(f"{name} must be a comma-separated list of integers", field=name)
    return [int(v) for v in value]


def _kappas(value):
    if value in ("both", None):
        return [0, 1]
    if isinstance(value, str):
        value = [int(v) for v in value.split(",")] if value.strip() else []
    if isinstance(value, int):
        value = [value]
    if not value or any(k not in (0, 1) for k in value):
        raise ConfigError("kappa must be 0 or 1", field="kappa")
    return list(value)


# --------------------------------------------------------------------------
# subcommands; each returns (output files, results summary)


def _frozen_gains(cfg: ResolvedConfig):
    dm = cfg.drop_model()
    if dm is None:
        return equal_power_gains(cfg.system.B, cfg.system.K)
    return dm.draw(Stream(cfg.system.master_seed, DROP))


def cmd_asymptotic(cfg: ResolvedConfig, out: Path, workers: int):
    s, suite = cfg.system, cfg.suite
    alphas = parse_grid(str(suite["alpha_grid"]))
    kappas = _kappas(suite["kappas"])
    if cfg.scenario == "equal_power":
        profile = UserGainProfile.equal_power(s.B, s.alpha, s.rho_r, s.kappa)
    else:
        profile = UserGainProfile.from_gains(_frozen_gains(cfg), s.alpha, s.rho_r, s.kappa)
    rows = alpha_sweep(profile, alphas, kappas)
    path = write_csv(out / "asymptotic.csv", ["alpha", "kappa", "sinr_db", "sinr_linear", "label"],
                     [[fmt_float(r["alpha"]), r["kappa"], fmt_db(r["sinr_db"]),
                       fmt_float(r["sinr_linear"]), r["label"]] for r in rows])
    results = {}
    if set(kappas) == {0, 1}:
        gap = [a["sinr_db"] - b["sinr_db"] for a, b in zip(rows[: len(alphas)], rows[len(alphas):])]
        results = {"contamination_gap_db_min": min(gap), "contamination_gap_db_max": max(gap)}
    return [path], results


def cmd_montecarlo(cfg: ResolvedConfig, out: Path, workers: int):
    s, suite = cfg.system, cfg.suite
    receivers = suite["receivers"]
    if isinstance(receivers, str):
        receivers = receivers.split(",")
    bad = set(receivers) - set(mc.RECEIVERS)
    if bad:
        raise ConfigError(f"unknown receivers {sorted(bad)}", field="receivers")
    trials = int(suite["trials"])
    files = []
    dm = cfg.drop_model()
    if dm is not None and not suite.get("redrop", False):
        drop, gains = dm.draw_with_drop(Stream(s.master_seed, DROP))
        write_drop_csv(out / "drop.csv", drop)
        files.append(out / "drop.csv")
    elif dm is not None:
        gains = dm
    else:
        gains = equal_power_gains(s.B, s.K)
    if suite.get("export_channel"):
        tseed = mix_seed(s.master_seed, 0)
        g0 = gains if not isinstance(gains, DropModel) else gains.draw(Stream(tseed, DROP))
        sets = sample_channels(s.M, g0.at_base(0), Stream(tseed, CHANNEL))
        write_channel_csv(out / "channel_trial0.csv", sets)
        files.append(out / "channel_trial0.csv")
    res = mc.run_experiment(s, gains, trials, receivers=tuple(receivers),
                            kappas=_kappas(suite["kappas"]), lms=cfg.lms, workers=workers)
    files.append(write_csv(out / "montecarlo.csv", TRIAL_HEADER, _trial_rows(res.rows)))
    results = {f"median_db_{k}": res[k].median() for k in res.keys()}
    return files, results


def cmd_cdf(cfg: ResolvedConfig, out: Path, workers: int):
    s, suite = cfg.system, cfg.suite
    study = mc.cdf_study(s, int(suite["trials"]), cfg.drop_model(), int(suite["alpha0_M"]),
                         bool(suite.get("redrop", False)), workers)
    files = [
        write_csv(out / "cdf_alpha0.csv", TRIAL_HEADER, _trial_rows(study.alpha0.rows)),
        write_csv(out / "cdf_loaded.csv", TRIAL_HEADER, _trial_rows(study.loaded.rows)),
    ]
    qs = np.round(np.linspace(0, 1, 101), 2)
    qrows = []
    for name, cdf in study.cdfs.items():
        for q, v in zip(qs, cdf.quantile(qs)):
            qrows.append([name, f"{q:.2f}", fmt_db(v)])
    files.append(write_csv(out / "cdf_quantiles.csv", ["situation", "q", "sinr_db"], qrows))
    return files, study.summary()


def cmd_convergence(cfg: ResolvedConfig, out: Path, workers: int):
    suite = cfg.suite
    rows = mc.convergence_suite(float(suite["alpha"]), _int_list(suite["M_grid"], "M_grid"),
                                cfg.system, int(suite["trials"]), cfg.drop_model(), workers)
    path = write_csv(out / "convergence.csv",
                     ["M", "K", "mean_sinr_db", "std_sinr_db", "asymptote_db", "abs_gap_db"],
                     [[r.M, r.K, fmt_db(r.mean_sinr_db), fmt_db(r.std_sinr_db),
                       fmt_db(r.asymptote_db), fmt_db(r.abs_gap_db)] for r in rows])
    return [path], {f"abs_gap_db_M{r.M}": r.abs_gap_db for r in rows}


def cmd_quadform(cfg: ResolvedConfig, out: Path, workers: int):
    s, suite = cfg.system, cfg.suite
    mode = suite["beta_mode"]
    if mode == "cost231":
        beta_mode = DropModel(build_hex_layout(s.B, cfg.cell_radius_km), cfg.link_budget, 1,
                              cfg.min_distance_km)
    elif mode == "equal":
        beta_mode = "equal"
    else:
        raise ConfigError("beta_mode must be 'equal' or 'cost231'", field="beta_mode")
    reports, summary_rows, results = [], [], {}
    for M in _int_list(suite["M_list"], "M_list"):
        rep = mc.quadform_suite(M, float(suite["alpha"]), s.B, beta_mode, int(suite["trials"]),
                                seed=s.master_seed, kappa=s.kappa)
        reports += rep
        for term, sm in mc.summarize_quadform(rep).items():
            summary_rows.append([sm.M, term, sm.n, fmt_float(sm.mean_empirical), fmt_float(sm.std_err),
                                 fmt_float(sm.limit), fmt_float(sm.median_residual)])
            results[f"median_residual_{term}_M{M}"] = sm.median_residual
    names = [f.name for f in fields(mc.QuadformReport)]
    files = [
        write_csv(out / "quadform.csv", names,
                  [[fmt_float(v) if isinstance(v, float) else v for v in astuple_report(r)]
                   for r in reports]),
        write_csv(out / "quadform_summary.csv",
                  ["M", "term_id", "n", "mean_empirical", "std_err", "limit", "median_residual"],
                  summary_rows),
    ]
    return files, results


def astuple_report(r):
    return [getattr(r, f.name) for f in fields(r)]


def cmd_lms(cfg: ResolvedConfig, out: Path, workers: int):
    s = cfg.system
    gains = _frozen_gains(cfg)
    trials = int(cfg.suite["trials"])
    res = mc.run_experiment(s, gains, trials, receivers=("mmse", "lms"), lms=cfg.lms, workers=workers)
    files = [write_csv(out / "lms.csv", TRIAL_HEADER, _trial_rows(res.rows))]

    # learning curve of trial 0, reproduced from the same streams run_trial uses
    tseed = mix_seed(s.master_seed, 0)
    beta_view = gains.at_base(0)
    sets = sample_channels(s.M, beta_view, Stream(tseed, CHANNEL))
    opts = cfg.lms
    training = Stream(tseed, SYMBOLS).qpsk((beta_view.size, opts.T_train))
    state = lms_train(sets, s.rho_r, training,
                      opts.schedule(default_mu0(s.rho_r, beta_view, s.M)), Stream(tseed, NOISE),
                      trace_every=100)
    trace = dict(state.sinr_trace)
    curve = [[t, fmt_float(e), fmt_db(trace[t]) if t in trace else ""]
             for t, e in enumerate(state.squared_error, start=1)]
    files.append(write_csv(out / "lms_curve.csv", ["t", "squared_error", "sinr_db_every_100_steps"], curve))

    gap = 10 * np.log10(res.linear("mmse")) - 10 * np.log10(res.linear("lms"))
    results = {"median_gap_db": float(np.median(gap)), "fraction_within_1db": float(np.mean(gap <= 1.0)),
               "final_sinr_db_trial0": filter_sinr(state.c, sets, s.rho_r).db,
               "mmse_sinr_db_trial0": mmse_sinr(sets, s.rho_r).db}
    return files, results


COMMANDS = {
    "asymptotic": cmd_asymptotic,
    "montecarlo": cmd_montecarlo,
    "cdf": cmd_cdf,
    "convergence": cmd_convergence,
    "quadform": cmd_quadform,
    "lms": cmd_lms,
}


# --------------------------------------------------------------------------
# argument handling


def _common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="JSON configuration file")
    p.add_argument("--out", type=Path, default=Path("."), help="output directory")
    p.add_argument("--seed", type=int, help="master seed (unsigned 64-bit)")
    p.add_argument("--workers", type=int, default=None, help="worker processes (default: all cores)")
    p.add_argument("--B", type=int)
    p.add_argument("--K", type=int)
    p.add_argument("--M", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--rho-r-db", type=float, dest="rho_r_db")
    p.add_argument("--kappa", help="0, 1 or both")
    p.add_argument("--scenario", choices=SCENARIOS)
    p.add_argument("--trials", type=int)
    p.add_argument("--redrop", action="store_true", default=None,
                   help="draw a fresh user drop for every trial (cost231)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mimo-lsa", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"mimo-lsa {__version__}")
    sub = parser.add_subparsers(dest="subcommand", metavar="subcommand")
    sub.required = True
    p = sub.add_parser("asymptotic", help="sweep the large-system SINR over alpha")
    _common(p)
    p.add_argument("--alpha-grid", dest="alpha_grid")
    p = sub.add_parser("montecarlo", help="paired receiver trials for one configuration")
    _common(p)
    p.add_argument("--receivers", help="comma list of mf, mmse, lms")
    p.add_argument("--export-channel", action="store_true", default=None, dest="export_channel")
    p = sub.add_parser("cdf", help="SINR distributions for the five receiver situations")
    _common(p)
    p.add_argument("--alpha0-M", type=int, dest="alpha0_M", help="antennas for the alpha->0 proxy")
    p = sub.add_parser("convergence", help="finite-M matched filter versus the limit")
    _common(p)
    p.add_argument("--M-grid", dest="M_grid")
    p = sub.add_parser("quadform", help="check the quadratic-form limits term by term")
    _common(p)
    p.add_argument("--M-list", "--M-values", dest="M_list")
    p.add_argument("--beta-mode", dest="beta_mode", choices=("equal", "cost231"))
    p = sub.add_parser("lms", help="adaptive MMSE training versus exact MMSE")
    _common(p)
    p.add_argument("--T-train", type=int, dest="T_train")
    p.add_argument("--mu0", type=float)
    p.add_argument("--decay-tau", type=float, dest="decay_tau")
    return parser


def _preprocess_argv(argv):
    # `quadform --M 200,2000` lists antenna counts rather than setting M
    argv = list(argv)
    if argv and argv[0] == "quadform":
        argv = [("--M-list" if a == "--M" else a) for a in argv]
    return argv


def resolve(args) -> ResolvedConfig:
    raw = {}
    if args.config is not None:
        try:
            raw = json.loads(Path(args.config).read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"malformed JSON in {args.config}: {exc}", field="config")
        except OSError as exc:
            raise ConfigError(f"cannot read {args.config}: {exc}", field="config")
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object", field="config")
    raw = dict(raw)
    suite = dict(SUITE_DEFAULTS[args.subcommand])
    suite.update(raw.get("suite", {}))
    raw["suite"] = suite

    sys_alpha_key = "alpha"
    if args.subcommand in ("convergence", "quadform"):
        # alpha is the suite's loading factor here
        sys_alpha_key = None
        if args.alpha is not None:
            suite["alpha"] = args.alpha
    for key in ("B", "M", "rho_r_db", "scenario"):
        if getattr(args, key) is not None:
            raw[key] = getattr(args, key)
    if args.seed is not None:
        raw["seed"] = args.seed
    if args.K is not None:
        raw["K"] = args.K
        raw.pop("alpha", None)
    if sys_alpha_key and args.alpha is not None:
        raw["alpha"] = args.alpha
        if args.K is None:
            raw.pop("K", None)
    if args.M is not None and "alpha" in raw and "K" in raw and args.K is None:
        raw.pop("K")
    if args.kappa is not None:
        ks = _kappas(args.kappa if args.kappa == "both" else _parse_kappa(args.kappa))
        suite["kappas"] = ks
        if len(ks) == 1:
            raw["kappa"] = ks[0]
    for key in ("trials", "redrop", "alpha_grid", "receivers", "alpha0_M", "M_grid", "M_list",
                "beta_mode", "export_channel"):
        value = getattr(args, key, None)
        if value is not None:
            suite[key] = value
    lms = dict(raw.get("lms", {}))
    for key in ("T_train", "mu0", "decay_tau"):
        value = getattr(args, key, None)
        if value is not None:
            lms[key] = value
    if lms:
        raw["lms"] = lms
    return parse_config(raw)


def _parse_kappa(text):
    try:
        value = int(text)
    except ValueError:
        raise ConfigError("kappa must be 0 or 1", field="kappa")
    if value not in (0, 1):
        raise ConfigError("kappa must be 0 or 1", field="kappa")
    return value


def _now():
    return datetime.now(timezone.utc).isoformat()


def dispatch(subcommand: str, cfg: ResolvedConfig, out: Path, workers: int | None = None) -> dict:
    """Run one subcommand and write its outputs and manifest; returns the manifest."""
    if subcommand not in COMMANDS:
        raise ConfigError(f"unknown subcommand {subcommand!r}", field="subcommand")
    cfg = replace(cfg, suite={**SUITE_DEFAULTS[subcommand], **cfg.suite})
    out.mkdir(parents=True, exist_ok=True)
    workers = mc.default_workers() if workers is None else max(1, workers)
    started = _now()
    files, results = COMMANDS[subcommand](cfg, out, workers)
    manifest = {
        "subcommand": subcommand,
        "config_echo": cfg.echo(),
        "tool_version": __version__,
        "kernel_backend": BACKEND,
        "master_seed": cfg.system.master_seed,
        "started_at": started,
        "finished_at": _now(),
        "output_files": [str(Path(f).name) for f in files],
        "results": results,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return manifest


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    parser = build_parser()
    try:
        args = parser.parse_args(_preprocess_argv(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = resolve(args)
    except ConfigError as exc:
        where = f" [{exc.field}]" if exc.field else ""
        print(f"mimo-lsa: configuration error{where}: {exc}", file=sys.stderr)
        return 2
    try:
        manifest = dispatch(args.subcommand, cfg, args.out, args.workers)
    except ConfigError as exc:
        where = f" [{exc.field}]" if exc.field else ""
        print(f"mimo-lsa: configuration error{where}: {exc}", file=sys.stderr)
        return 2
    except (MimoLsaError, RuntimeError, ValueError, OSError) as exc:
        print(f"mimo-lsa: {exc}", file=sys.stderr)
        return 1
    for name in manifest["output_files"]:
        print(args.out / name)
    return 0


if __name__ == "__main__":
    sys.exit(main())
