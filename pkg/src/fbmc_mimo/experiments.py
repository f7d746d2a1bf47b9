"""Experiment configurations, seeded sweeps, and CSV/JSON reports."""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import platform
import time
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from .channel import PdpModel, exp_pdp, noise_var_from_snr, draw_channels, freq_response
from .combining import CombinerKind, build_combiner
from .equalizer import design_fullrate, design_lowrate, lowrate_residual, fullrate_residual
from .exceptions import ParameterError
from .filters import design_phydyas
from .simulation import PowerSums, measure_trial, ofdm_trial, simulate_waveform
from .theory import build_psi_table, saturation_sinr, sinr_theory, flattening_response

__all__ = [
    "ExperimentConfig",
    "SinrEstimate",
    "RunReport",
    "TrialSetup",
    "measure_sinr_trial",
    "sweep_estimates",
    "run_sweep",
    "ofdm_baseline",
    "trial_seeds",
    "waveform_check",
    "run_saturation",
    "run_theory_vs_sim",
    "run_snr_sweep",
    "run_spacing_sweep",
    "run_flattening",
    "write_csv",
    "EXPERIMENTS",
    "DEFAULTS",
    "QUICK_OVERRIDES",
    "selftest_checks",
    "flattening_deviation",
]

EQUALIZER_STATES = ("none", "lowrate", "fullrate")


@dataclass
class ExperimentConfig:
    """Simulation parameters; every field round-trips through JSON.

    ``decay`` defaults to ``alpha_k = (k+1)/20``.  ``subcarrier`` defaults to
    ``M // 4``.  ``spacing_subcarriers`` lists the ``M`` values of the
    spacing sweep.  ``num_data_symbols`` is used by the waveform-level path
    only.
    """

    num_subcarriers: int = 128
    overlap: int = 4
    num_terminals: int = 4
    channel_length: int = 16
    decay: list | None = None
    antennas: list = field(default_factory=lambda: [32, 64, 128, 256])
    snr_db: list = field(default_factory=lambda: [10.0])
    combiners: list = field(default_factory=lambda: ["mrc", "zf", "mmse"])
    equalizer: str = "lowrate"
    equalizer_taps: int = 9
    equalizer_method: str = "wls"
    pdp_source: str = "true"
    subcarrier: int | None = None
    target: int = 0
    subcarrier_span: int = 2
    num_trials: int = 200
    seed: int = 20170601
    n_jobs: int = 1
    cp_length: int | None = None
    spacing_subcarriers: list = field(default_factory=lambda: [1000, 500, 200, 100])
    flattening_grid: int = 257
    num_data_symbols: int = 200

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        M = self.num_subcarriers
        if M < 8 or M % 4:
            raise ParameterError("num_subcarriers must be a multiple of 4 and at least 8")
        if self.num_terminals < 1 or self.channel_length < 1:
            raise ParameterError("num_terminals and channel_length must be positive")
        if self.decay is not None and len(self.decay) != self.num_terminals:
            raise ParameterError("decay needs one value per terminal")
        if not self.antennas or min(self.antennas) < 1:
            raise ParameterError("antennas must be a non-empty list of positive integers")
        if self.equalizer not in EQUALIZER_STATES:
            raise ParameterError(f"equalizer must be one of {EQUALIZER_STATES}")
        if self.pdp_source not in ("true", "estimated"):
            raise ParameterError("pdp_source must be 'true' or 'estimated'")
        if self.pdp_source == "estimated" and self.equalizer == "fullrate":
            raise ParameterError("estimated PDPs are supported for the low-rate equalizer only")
        for c in self.combiners:
            CombinerKind(c)
        if not 0 <= self.target < self.num_terminals:
            raise ParameterError("target terminal out of range")
        if self.subcarrier is not None and not 0 <= self.subcarrier < M:
            raise ParameterError("subcarrier out of range")
        if self.num_trials < 1:
            raise ParameterError("num_trials must be positive")
        if self.equalizer_taps < 1 or self.equalizer_taps % 2 == 0:
            raise ParameterError("equalizer_taps must be a positive odd number")
        if self.cp_length is not None and self.cp_length < 0:
            raise ParameterError("cp_length must be non-negative")
        if self.num_data_symbols < 1:
            raise ParameterError("num_data_symbols must be positive")
        if any(s % 4 or s < 8 for s in self.spacing_subcarriers):
            raise ParameterError("spacing_subcarriers entries must be multiples of 4 and at least 8")

    @property
    def m(self) -> int:
        return self.num_subcarriers // 4 if self.subcarrier is None else self.subcarrier

    def pdps(self) -> list[PdpModel]:
        decay = self.decay if self.decay is not None else [(k + 1) / 20 for k in range(self.num_terminals)]
        return [exp_pdp(a, self.channel_length) for a in decay]

    def noise_vars(self) -> list[float]:
        return [noise_var_from_snr(s) for s in self.snr_db]

    def replace(self, **kw) -> "ExperimentConfig":
        return dataclasses.replace(self, **kw)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - known
        if unknown:
            raise ParameterError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(**d)
        except TypeError as exc:
            raise ParameterError(str(exc)) from exc

    @classmethod
    def from_json(cls, text: str) -> "ExperimentConfig":
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParameterError(f"invalid JSON config: {exc}") from exc
        if not isinstance(d, dict):
            raise ParameterError("config must be a JSON object")
        return cls.from_dict(d)


@dataclass(frozen=True)
class SinrEstimate:
    """Trial-averaged SINR for one ``(N, combiner, SNR, equalizer state)`` of target ``(k, m)``.

    ``sinr_db`` is the ratio of the averaged power components;
    ``trial_mean_db`` and ``stderr_db`` summarise the per-trial dB values.
    """

    n_antennas: int
    combiner: str
    snr_db: float
    equalizer: str
    sinr_db: float
    trial_mean_db: float
    stderr_db: float
    trials: int
    theory_db: float
    components: dict
    k: int = 0
    m: int = 0
    retries: int = 0


@dataclass
class RunReport:
    """Rows, configuration, seed and timing of one experiment run.

    Every CSV row ends with the seed so a file is replayable on its own.
    """

    experiment: str
    config: dict
    columns: list
    rows: list
    extra: dict = field(default_factory=dict)
    wall_clock_s: float = 0.0

    @property
    def seed(self) -> int:
        return self.config["seed"]

    def csv_text(self) -> str:
        return write_csv(list(self.columns) + ["seed"], [tuple(r) + (self.seed,) for r in self.rows])

    def to_json(self) -> str:
        env = {"python": platform.python_version(), "numpy": np.__version__}
        rec = {"experiment": self.experiment, "seed": self.seed, "config": self.config, "columns": self.columns,
               "rows": [list(r) for r in self.rows], "wall_clock_s": self.wall_clock_s, "environment": env,
               **self.extra}
        return json.dumps(rec, indent=2, default=_json_default)


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(type(o).__name__)


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.6g}"
    return str(v)


def write_csv(columns, rows) -> str:
    """CSV text with a fixed column order and floats at 6 significant digits."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def _db(x: float) -> float:
    with np.errstate(divide="ignore"):
        return float(10 * np.log10(x))


def _timed(fn):
    def wrapper(cfg):
        t0 = time.perf_counter()
        rep = fn(cfg)
        rep.wall_clock_s = time.perf_counter() - t0
        return rep
    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@dataclass
class TrialSetup:
    """Deterministic per-configuration state shared by all trials."""

    cfg: ExperimentConfig
    filt: object
    pdps: list
    tables: dict
    base: object
    states: list

    @classmethod
    def from_config(cls, cfg: ExperimentConfig, states=None) -> "TrialSetup":
        filt = design_phydyas(cfg.num_subcarriers, cfg.overlap)
        pdps = cfg.pdps()
        states = [cfg.equalizer] if states is None else list(states)
        m, k, L = cfg.m, cfg.target, cfg.channel_length
        tables = {}
        for st in states:
            if st == "none":
                eq = None
            elif st == "lowrate":
                eq = design_lowrate(pdps[k], filt.M, cfg.equalizer_taps, filt, cfg.equalizer_method, k)
            else:
                eq = design_fullrate(pdps[k], m, filt.M, terminal=k)
            tables[st] = build_psi_table(filt, m, L, eq, cfg.subcarrier_span)
        base = None
        if cfg.pdp_source == "estimated" and "lowrate" in states:
            base = build_psi_table(filt, m, L, None, cfg.subcarrier_span, guard=(cfg.equalizer_taps - 1) // 2)
        return cls(cfg, filt, pdps, tables, base, states)

    def trial(self, seed_seq):
        c = self.cfg
        return measure_trial(seed_seq, self.pdps, self.filt, c.m, c.target, c.antennas, c.combiners,
                             c.noise_vars(), self.tables, c.pdp_source, self.base, c.equalizer_taps)


def measure_sinr_trial(cfg: ExperimentConfig, trial_seed, setup: TrialSetup | None = None):
    """Power decomposition of one channel draw for target ``(cfg.target, cfg.m)``.

    Returns ``({(N, combiner, snr_index, equalizer_state): SinrValue}, retries)``.
    """
    if setup is None:
        setup = TrialSetup.from_config(cfg)
    if not isinstance(trial_seed, np.random.SeedSequence):
        trial_seed = np.random.SeedSequence(trial_seed)
    return setup.trial(trial_seed)


def _trial_chunk(setup: TrialSetup, seqs):
    return [setup.trial(s) for s in seqs]


def _chunks(seq, n):
    size = max(1, -(-len(seq) // n))
    return [seq[i:i + size] for i in range(0, len(seq), size)]


def trial_seeds(cfg: ExperimentConfig) -> list:
    """Child ``t`` of ``SeedSequence(cfg.seed)`` seeds trial ``t``."""
    return np.random.SeedSequence(cfg.seed).spawn(cfg.num_trials)


def _run_trials(cfg: ExperimentConfig, func, *args):
    seqs = trial_seeds(cfg)
    n_jobs = max(1, int(cfg.n_jobs))
    if n_jobs == 1:
        return func(*args, seqs)
    parts = Parallel(n_jobs=n_jobs)(delayed(func)(*args, c) for c in _chunks(seqs, n_jobs))
    return [r for p in parts for r in p]


def sweep_estimates(cfg: ExperimentConfig, states=None, with_theory: bool = True) -> list[SinrEstimate]:
    """Seeded Monte Carlo over ``cfg.num_trials`` channel draws.

    Trial results are reduced in trial order, so the estimates do not depend
    on ``n_jobs``.  Theory overlays use the closed forms for MRC and ZF.
    """
    K = cfg.num_terminals
    kinds = [CombinerKind(c) for c in cfg.combiners]
    if CombinerKind.ZF in kinds and min(cfg.antennas) < K:
        raise ParameterError(f"ZF needs at least K={K} antennas")
    setup = TrialSetup.from_config(cfg, states)
    results = _run_trials(cfg, _trial_chunk, setup)
    noise_vars = cfg.noise_vars()
    sums: dict = {}
    per_trial: dict = {}
    retries = 0
    for values, r in results:
        retries += r
        for key, v in values.items():
            sums.setdefault(key, PowerSums()).add(v)
            per_trial.setdefault(key, []).append(_db(v.sinr))
    out = []
    for N in cfg.antennas:
        for kind in kinds:
            for si, snr in enumerate(cfg.snr_db):
                for st in setup.states:
                    key = (N, kind.value, si, st)
                    val = sums[key].value()
                    tr = np.asarray(per_trial[key])
                    stderr = float(tr.std(ddof=1) / np.sqrt(tr.size)) if tr.size > 1 else float("nan")
                    th = float("nan")
                    closed = kind is not CombinerKind.MMSE and not (kind is CombinerKind.ZF and N < K + 1)
                    if with_theory and closed and cfg.pdp_source == "true":
                        th = sinr_theory(setup.pdps, setup.filt, setup.tables[st], kind, cfg.target, N,
                                         noise_vars[si]).sinr_db
                    out.append(SinrEstimate(N, kind.value, float(snr), st, val.sinr_db, float(tr.mean()), stderr,
                                            int(tr.size), th, val.as_dict(), cfg.target, cfg.m, retries))
    return out


_SWEEP_COLUMNS = ["N", "snr_db", "combiner", "equalizer", "sinr_db", "theory_db", "stderr_db", "trials"]


@_timed
def run_sweep(cfg: ExperimentConfig) -> RunReport:
    """Generic N x SNR x combiner sweep with the configured equalizer state."""
    est = sweep_estimates(cfg)
    rows = [(e.n_antennas, e.snr_db, e.combiner, e.equalizer, e.sinr_db, e.theory_db, e.stderr_db, e.trials)
            for e in est]
    return RunReport("sweep", cfg.to_dict(), _SWEEP_COLUMNS, rows, {"estimates": [dataclasses.asdict(e) for e in est]})


@_timed
def run_saturation(cfg: ExperimentConfig) -> RunReport:
    """SINR versus N with the equalizer bypassed, against the saturation level."""
    cfg = cfg.replace(equalizer="none", snr_db=cfg.snr_db[:1])
    est = sweep_estimates(cfg, ["none"], with_theory=False)
    filt = design_phydyas(cfg.num_subcarriers, cfg.overlap)
    sat = saturation_sinr(cfg.pdps()[cfg.target], filt, cfg.m, cfg.subcarrier_span).sinr_db
    rows = [(e.n_antennas, e.combiner, e.sinr_db, sat) for e in est]
    extra = {"estimates": [dataclasses.asdict(e) for e in est], "saturation_db": sat}
    return RunReport("saturation", cfg.to_dict(), ["N", "combiner", "sinr_db", "saturation_bound_db"], rows, extra)


@_timed
def run_theory_vs_sim(cfg: ExperimentConfig) -> RunReport:
    """Simulated and closed-form SINR versus N with the equalizer in place."""
    cfg = cfg.replace(snr_db=cfg.snr_db[:1])
    est = sweep_estimates(cfg)
    rows = [(e.n_antennas, e.combiner, e.equalizer, e.sinr_db, e.theory_db, e.stderr_db) for e in est]
    extra = {"estimates": [dataclasses.asdict(e) for e in est]}
    return RunReport("theory-vs-sim", cfg.to_dict(),
                     ["N", "combiner", "equalizer", "sinr_db", "theory_db", "stderr_db"], rows, extra)


def _ofdm_chunk(cfg: ExperimentConfig, cp: int, seqs):
    kinds = [c for c in cfg.combiners]
    return [ofdm_trial(s, cfg.pdps(), cfg.num_subcarriers, cp, cfg.m, cfg.target, cfg.antennas, kinds,
                       cfg.noise_vars()) for s in seqs]


@_timed
def ofdm_baseline(cfg: ExperimentConfig) -> RunReport:
    """CP-OFDM Monte Carlo on the same channel draws as the FBMC sweep.

    The CP length defaults to ``L_h - 1``; a shorter CP is rejected.
    """
    cp = cfg.channel_length - 1 if cfg.cp_length is None else cfg.cp_length
    if cp < cfg.channel_length - 1:
        raise ParameterError(f"cyclic prefix {cp} shorter than channel memory {cfg.channel_length - 1}")
    results = _run_trials(cfg, _ofdm_chunk, cfg, cp)
    sums: dict = {}
    per_trial: dict = {}
    for values in results:
        for key, v in values.items():
            sums.setdefault(key, PowerSums()).add(v)
            per_trial.setdefault(key, []).append(_db(v.sinr))
    rows = []
    est = []
    for N in cfg.antennas:
        for c in cfg.combiners:
            for si, snr in enumerate(cfg.snr_db):
                key = (N, c, si)
                tr = np.asarray(per_trial[key])
                stderr = float(tr.std(ddof=1) / np.sqrt(tr.size)) if tr.size > 1 else float("nan")
                val = sums[key].value()
                est.append(SinrEstimate(N, c, float(snr), "cp", val.sinr_db, float(tr.mean()), stderr, int(tr.size),
                                        float("nan"), val.as_dict(), cfg.target, cfg.m))
                rows.append((N, float(snr), c, val.sinr_db, stderr))
    return RunReport("ofdm", cfg.to_dict(), ["N", "snr_db", "combiner", "sinr_db", "stderr_db"], rows,
                     {"estimates": [dataclasses.asdict(e) for e in est], "cp_length": cp})


@_timed
def run_snr_sweep(cfg: ExperimentConfig) -> RunReport:
    """Equalized FBMC and CP-OFDM SINR versus input SNR at fixed N (paired channel draws)."""
    cfg = cfg.replace(antennas=cfg.antennas[:1], combiners=[c for c in cfg.combiners if c != "mmse"])
    est = sweep_estimates(cfg)
    ofdm = ofdm_baseline(cfg)
    rows = [(e.snr_db, "fbmc", e.combiner, e.sinr_db, e.theory_db) for e in est]
    rows += [(r[1], "ofdm", r[2], r[3], float("nan")) for r in ofdm.rows]
    extra = {"estimates": [dataclasses.asdict(e) for e in est], "ofdm_estimates": ofdm.extra["estimates"]}
    return RunReport("snr-sweep", cfg.to_dict(), ["snr_db", "waveform", "combiner", "sinr_db", "theory_db"],
                     rows, extra)


@_timed
def run_spacing_sweep(cfg: ExperimentConfig) -> RunReport:
    """SINR versus subcarrier spacing ``1/M`` at fixed N and SNR."""
    rows = []
    est_all = []
    for M in cfg.spacing_subcarriers:
        sub = cfg.replace(num_subcarriers=M, subcarrier=None, antennas=cfg.antennas[:1], snr_db=cfg.snr_db[:1],
                          combiners=[c for c in cfg.combiners if c != "mmse"])
        est = sweep_estimates(sub)
        est_all += [dict(dataclasses.asdict(e), num_subcarriers=M) for e in est]
        rows += [(M, 1.0 / M, e.combiner, e.sinr_db, e.theory_db) for e in est]
    return RunReport("spacing-sweep", cfg.to_dict(), ["M", "subcarrier_spacing", "combiner", "sinr_db", "theory_db"],
                     rows, {"estimates": est_all})


def flattening_deviation(cfg: ExperimentConfig, n_antennas: int, seed_seq) -> tuple[float, float]:
    """``max_w |C(w) - 1|`` over the passband, unequalized and PDP-equalized, for one MRC draw."""
    M, m, k = cfg.num_subcarriers, cfg.m, cfg.target
    pdps = cfg.pdps()
    ch = draw_channels(pdps, n_antennas, np.random.default_rng(seed_seq))
    W = build_combiner(freq_response(ch, m, M), "mrc", 0.0, m)
    omega = np.linspace(2 * np.pi * (m - 1) / M, 2 * np.pi * (m + 1) / M, cfg.flattening_grid)
    raw = flattening_response(ch, W, pdps[k], k, m, M, omega)
    eq = flattening_response(ch, W, pdps[k], k, m, M, omega, equalized=True)
    return float(np.max(np.abs(raw - 1))), float(np.max(np.abs(eq - 1)))


def _flat_chunk(cfg, seqs):
    return [[flattening_deviation(cfg, N, s) for N in cfg.antennas] for s in seqs]


@_timed
def run_flattening(cfg: ExperimentConfig) -> RunReport:
    """Median passband deviation of the MRC-combined channel from flat, versus N.

    The same draw (antenna prefixes) is used for every N in a trial.
    """
    devs = np.array(_run_trials(cfg, _flat_chunk, cfg))  # (trials, n_N, 2)
    rows = []
    for i, N in enumerate(cfg.antennas):
        rows.append((N, "no", float(np.median(devs[:, i, 0]))))
        rows.append((N, "yes", float(np.median(devs[:, i, 1]))))
    return RunReport("flattening", cfg.to_dict(), ["N", "equalized", "median_max_deviation"], rows)


def waveform_check(cfg: ExperimentConfig, kind: str = "zf") -> tuple[float, float]:
    """Waveform-level and coefficient-level SINR (dB) on the same channel draws.

    Both are ratio-of-averages over ``cfg.num_trials`` draws at the first
    ``N`` and SNR of ``cfg``.
    """
    setup = TrialSetup.from_config(cfg)
    N = cfg.antennas[0]
    s2 = cfg.noise_vars()[0]
    eq_state = cfg.equalizer
    eq = None
    if eq_state == "lowrate":
        eq = design_lowrate(setup.pdps[cfg.target], cfg.num_subcarriers, cfg.equalizer_taps, setup.filt,
                            cfg.equalizer_method, cfg.target)
    elif eq_state == "fullrate":
        raise ParameterError("the waveform check uses the low-rate chain")
    sig_w = err_w = 0.0
    coef = PowerSums()
    for t, s in enumerate(trial_seeds(cfg)):
        ch = draw_channels(setup.pdps, N, np.random.default_rng(s), s2)
        res = simulate_waveform(setup.pdps, setup.filt, ch, cfg.m, cfg.target, kind, cfg.num_data_symbols, eq,
                                seed=np.random.SeedSequence([cfg.seed, 3, t]))
        sig_w += res.gain ** 2 * 0.5
        err_w += res.gain ** 2 * 0.5 / res.sinr
        values, _ = measure_trial(s, setup.pdps, setup.filt, cfg.m, cfg.target, [N], [kind], [s2], setup.tables)
        coef.add(values[(N, kind, 0, eq_state)])
    return _db(sig_w / err_w), coef.value().sinr_db


def selftest_checks(cfg: ExperimentConfig) -> list[tuple[str, bool, float, float]]:
    """Fast invariant suite: ``(name, passed, value, limit)`` per check."""
    out = []
    filt = design_phydyas(cfg.num_subcarriers, cfg.overlap)
    out.append(("nyquist_deviation", filt.nyquist_deviation < 2e-3, filt.nyquist_deviation, 2e-3))
    od = filt.orthogonality_deviation()
    out.append(("orthogonality_deviation", od < 2e-3, od, 2e-3))
    pdps = cfg.pdps()
    k, m = cfg.target, cfg.m
    eq = design_lowrate(pdps[k], filt.M, cfg.equalizer_taps, filt, cfg.equalizer_method, k)
    r = lowrate_residual(eq, pdps[k], filt.M, filt)["weighted_max"]
    out.append(("lowrate_weighted_residual", r < 1e-2, r, 1e-2))
    fr = design_fullrate(pdps[k], m, filt.M, terminal=k)
    r = fullrate_residual(fr, pdps[k], filt.M, filt)["max"]
    out.append(("fullrate_residual", r < 1e-3, r, 1e-3))
    sat = saturation_sinr(pdps[k], filt, m, cfg.subcarrier_span).sinr_db
    tab = build_psi_table(filt, m, cfg.channel_length, None, cfg.subcarrier_span)
    lim = sinr_theory(pdps, filt, tab, "mrc", k, 10 ** 8, 0.0).sinr_db
    out.append(("saturation_two_paths_db", abs(sat - lim) < 0.3, abs(sat - lim), 0.3))
    flat = cfg.replace(channel_length=1, decay=None, antennas=[4 * cfg.num_terminals], combiners=["zf"],
                       equalizer="none", num_trials=50)
    e = sweep_estimates(flat, with_theory=False)[0]
    expect = _db((flat.antennas[0] - flat.num_terminals) / flat.noise_vars()[0])
    out.append(("flat_zf_db", abs(e.sinr_db - expect) < 0.5, abs(e.sinr_db - expect), 0.5))
    return out


EXPERIMENTS = {
    "saturation": run_saturation,
    "theory-vs-sim": run_theory_vs_sim,
    "snr-sweep": run_snr_sweep,
    "spacing-sweep": run_spacing_sweep,
    "flattening": run_flattening,
}

# full-scale defaults per experiment; --quick overrides on top
DEFAULTS = {
    "saturation": {"antennas": [16, 32, 64, 128, 256, 512, 1024, 2048], "equalizer": "none", "snr_db": [10.0],
                   "num_trials": 2000},
    "theory-vs-sim": {"antennas": [16, 32, 64, 128, 256, 512], "equalizer": "lowrate", "snr_db": [10.0],
                      "num_trials": 2000},
    "snr-sweep": {"num_subcarriers": 512, "num_terminals": 10, "channel_length": 50, "antennas": [100],
                  "snr_db": [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0, 40.0],
                  "combiners": ["mrc", "zf"], "num_trials": 2000},
    "spacing-sweep": {"num_terminals": 10, "channel_length": 50, "antennas": [128], "snr_db": [0.0],
                      "combiners": ["mrc", "zf"], "num_trials": 2000},
    "flattening": {"antennas": [16, 64, 256], "num_trials": 500},
    "selftest": {},
}
QUICK_OVERRIDES = {
    "saturation": {"antennas": [64, 256, 1024, 2048], "num_trials": 100},
    "theory-vs-sim": {"antennas": [32, 64, 128, 256], "num_trials": 200},
    "snr-sweep": {"num_subcarriers": 128, "num_terminals": 4, "channel_length": 16, "antennas": [64],
                  "snr_db": [0.0, 10.0, 20.0, 30.0, 40.0], "num_trials": 200},
    "spacing-sweep": {"spacing_subcarriers": [1000, 100], "num_trials": 200},
    "flattening": {"num_trials": 100},
    "selftest": {},
}
