"""Monte Carlo failure-rate estimation and solver timing."""

from __future__ import annotations

import csv
import io
import json
import math
import os
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .channel import sample_error, transmit
from .code import CodeError, HilrsCode, build_hilrs
from .decode import decoding_radius, failure_bound, gao_decode
from .ff import FieldError, make_tower

SCHEMA_VERSION = 1

# values reported for the F_{3^8}, n = (8, 8), k = 4, s = 3, t = 9 experiment
REFERENCE_EXPERIMENT = {"p": 3, "e": 1, "m": 8, "parts": (8, 8), "k": 4, "s": 3, "t": 9}
REFERENCE_OBSERVED_RATE = 1.569e-4
REFERENCE_BOUND = 6.535e-3

SOLVERS = ("gauss", "mab")


class ConfigError(ValueError):
    pass


@dataclass
class SimConfig:
    p: int = 3
    e: int = 1
    m: int = 8
    r: int = 1
    parts: tuple[int, ...] = (8, 8)
    k: int = 4
    s: int = 3
    t: tuple[int, ...] | None = None  # None means the decoding radius
    trials: int = 100
    seed: int = 0
    solver: str = "gauss"
    output: str | None = None
    fmt: str = "json"
    verbose_trials: bool = False
    random_locators: bool = False
    strict: bool = False
    timing: bool = True
    workers: int | None = None

    def solvers(self) -> tuple[str, ...]:
        if self.solver == "both":
            return SOLVERS
        if self.solver not in SOLVERS:
            raise ConfigError(f"solver must be gauss, mab or both, got {self.solver!r}")
        return (self.solver,)

    @property
    def n(self) -> int:
        return sum(self.parts)

    def t_values(self) -> tuple[int, ...]:
        if self.t is None:
            return (decoding_radius(self.n, self.k, self.s),)
        return tuple(self.t)

    def build_code(self) -> HilrsCode:
        """Re-validate every parameter and construct the code."""
        if self.trials < 0:
            raise ConfigError("trials must be non-negative")
        if self.fmt not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.fmt!r}")
        self.solvers()
        try:
            F = make_tower(self.p, self.e, self.m, self.r)
            rng = np.random.default_rng(self.seed) if self.random_locators else None
            code = build_hilrs(F, self.parts, self.k, self.s, rng)
        except (FieldError, CodeError) as exc:
            raise ConfigError(str(exc)) from exc
        t_max = decoding_radius(self.n, self.k, self.s)
        for t in self.t_values():
            if not 0 <= t <= t_max:
                raise ConfigError(f"t = {t} must lie in [0, t_max = {t_max}]")
        return code


def parse_config_text(text: str) -> dict:
    """key=value lines; '#' starts a comment."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"config line {lineno}: expected key=value")
        key, value = (x.strip() for x in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _coerce(name: str, value):
    if value is None:
        return None
    ints = {"p", "e", "m", "r", "k", "s", "trials", "seed", "workers"}
    bools = {"verbose_trials", "random_locators", "strict", "timing"}
    if name in ints:
        return int(value)
    if name in bools:
        if isinstance(value, bool):
            return value
        return str(value).lower() in ("1", "true", "yes", "on")
    if name in ("parts", "t"):
        if isinstance(value, (tuple, list)):
            return tuple(int(v) for v in value)
        return tuple(int(v) for v in str(value).split(",") if v.strip())
    return value


def make_config(file_values: dict | None = None, overrides: dict | None = None) -> SimConfig:
    """Merge config-file values with CLI overrides (overrides win)."""
    known = {f.name for f in fields(SimConfig)}
    merged = {}
    for src in (file_values or {}, overrides or {}):
        for key, value in src.items():
            if key not in known:
                raise ConfigError(f"unknown config key {key!r}")
            if value is not None:
                merged[key] = value
    try:
        return SimConfig(**{k: _coerce(k, v) for k, v in merged.items()})
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# -- trials --------------------------------------------------------------------


def trial_rng(seed: int, t: int, trial: int) -> np.random.Generator:
    """Independent stream per (seed, t, trial), independent of scheduling."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(t, trial)))


def run_trial(code: HilrsCode, t: int, trial: int, seed: int, solvers, strict=False) -> list[dict]:
    rng = trial_rng(seed, t, trial)
    msg = code.random_message(rng)
    e, _ = sample_error(code.F, code.s, code.partition, t, rng)
    y = transmit(code.F, code.encode(msg), e)
    out = []
    for solver in solvers:
        start = time.perf_counter()
        res = gao_decode(code, y, solver, strict=strict)
        ms = (time.perf_counter() - start) * 1e3
        if res.ok:
            outcome = "success" if res.messages == msg else "miscorrection"
        else:
            outcome = "failure"
        out.append(
            {
                "trial_index": trial,
                "t": t,
                "solver": solver,
                "outcome": outcome,
                "reason": res.reason or "",
                "decode_ms": round(ms, 3),
            }
        )
    return out


_WORKER: dict = {}


def _worker_init(cfg: SimConfig) -> None:
    _WORKER["code"] = cfg.build_code()
    _WORKER["cfg"] = cfg


def _worker_run(job):
    t, trial = job
    cfg = _WORKER["cfg"]
    return run_trial(_WORKER["code"], t, trial, cfg.seed, cfg.solvers(), cfg.strict)


def worker_count(requested: int | None = None) -> int:
    n = requested or os.cpu_count() or 1
    cap = os.environ.get("SUMRANK_THREADS")
    if cap:
        n = min(n, max(1, int(cap)))
    return max(1, n)


@dataclass
class SimReport:
    schema: int
    config: dict
    code_fingerprint: str
    t_max: int
    entries: list[dict] = field(default_factory=list)
    wall_clock_s: float | None = None
    trials: list[dict] | None = None

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    def summary_csv(self) -> str:
        buf = io.StringIO()
        cols = [
            "t",
            "solver",
            "trials",
            "successes",
            "miscorrections",
            "failures",
            "observed_rate",
            "bound_paper35",
            "bound_exact_kappa",
        ]
        w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for entry in self.entries:
            w.writerow(entry)
        return buf.getvalue()

    def trials_csv(self) -> str:
        buf = io.StringIO()
        cols = ["trial_index", "t", "solver", "outcome", "reason", "decode_ms"]
        w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for row in self.trials or []:
            w.writerow(row)
        return buf.getvalue()


def _matches_reference(cfg: SimConfig, t: int) -> bool:
    ref = REFERENCE_EXPERIMENT
    return (cfg.p, cfg.e, cfg.m, tuple(cfg.parts), cfg.k, cfg.s, t) == (
        ref["p"],
        ref["e"],
        ref["m"],
        ref["parts"],
        ref["k"],
        ref["s"],
        ref["t"],
    )


def run_montecarlo(cfg: SimConfig) -> SimReport:
    code = cfg.build_code()
    solvers = cfg.solvers()
    jobs = [(t, i) for t in cfg.t_values() for i in range(cfg.trials)]
    start = time.perf_counter()
    workers = worker_count(cfg.workers)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers, initializer=_worker_init, initargs=(cfg,)) as pool:
            chunks = list(pool.map(_worker_run, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        chunks = [run_trial(code, t, i, cfg.seed, solvers, cfg.strict) for t, i in jobs]
    wall = time.perf_counter() - start
    rows = [row for chunk in chunks for row in chunk]

    config = {k: (list(v) if isinstance(v, tuple) else v) for k, v in asdict(cfg).items()}
    config.pop("output", None)
    config.pop("workers", None)
    report = SimReport(
        schema=SCHEMA_VERSION,
        config=config,
        code_fingerprint=code.fingerprint(),
        t_max=decoding_radius(code.n, code.k, code.s),
        wall_clock_s=round(wall, 3) if cfg.timing else None,
    )
    for t in cfg.t_values():
        for solver in solvers:
            sel = [r for r in rows if r["t"] == t and r["solver"] == solver]
            reasons: dict[str, int] = {}
            for r in sel:
                if r["outcome"] == "failure":
                    reasons[r["reason"]] = reasons.get(r["reason"], 0) + 1
            failures = sum(reasons.values())
            mis = [r["trial_index"] for r in sel if r["outcome"] == "miscorrection"]
            entry = {
                "t": t,
                "solver": solver,
                "trials": len(sel),
                "successes": sum(r["outcome"] == "success" for r in sel),
                "miscorrections": len(mis),
                "miscorrection_trials": [
                    {"trial_index": i, "seed": cfg.seed, "spawn_key": [t, i]} for i in mis
                ],
                "failures": failures,
                "failures_by_reason": dict(sorted(reasons.items())),
                "observed_rate": failures / len(sel) if sel else None,
                "bound_paper35": failure_bound(code, t, "paper-3.5"),
                "bound_exact_kappa": failure_bound(code, t, "exact-kappa"),
            }
            if cfg.timing:
                times = sorted(r["decode_ms"] for r in sel)
                entry["decode_ms_mean"] = round(statistics.fmean(times), 3) if times else None
                entry["decode_ms_median"] = round(statistics.median(times), 3) if times else None
            if _matches_reference(cfg, t):
                entry["reference_observed_rate"] = REFERENCE_OBSERVED_RATE
                entry["reference_bound"] = REFERENCE_BOUND
            report.entries.append(entry)
    if cfg.verbose_trials:
        report.trials = rows if cfg.timing else [{**r, "decode_ms": None} for r in rows]
    return report


# -- scaling ---------------------------------------------------------------------


def partition_for(n: int, m: int, max_blocks: int) -> tuple[int, ...]:
    """Near-equal blocks of length at most m."""
    ell = math.ceil(n / m)
    if ell > max_blocks:
        raise ConfigError(f"n = {n} needs {ell} blocks of length <= {m}, only {max_blocks} allowed")
    base, extra = divmod(n, ell)
    return tuple(base + 1 if i < extra else base for i in range(ell))


def run_scaling(
    grid,
    p: int = 2,
    e: int = 8,
    m: int = 2,
    s: int = 2,
    instances: int = 20,
    seed: int = 0,
    solvers=SOLVERS,
) -> list[dict]:
    """Median decode time per (n, solver) at t = t_max, plus the gauss/mab ratio."""
    F = make_tower(p, e, m)
    table = []
    for n in grid:
        parts = partition_for(n, m, F.q - 1)
        k = max(1, n // 4)
        code = build_hilrs(F, parts, k, s)
        t = decoding_radius(n, k, s)
        times: dict[str, list[float]] = {sv: [] for sv in solvers}
        agree = True
        for i in range(instances):
            rng = trial_rng(seed, n, i)
            msg = code.random_message(rng)
            e_vec, _ = sample_error(F, s, parts, t, rng)
            y = transmit(F, code.encode(msg), e_vec)
            results = []
            for sv in solvers:
                start = time.perf_counter()
                results.append(gao_decode(code, y, sv))
                times[sv].append((time.perf_counter() - start) * 1e3)
            agree &= all(r == results[0] for r in results)
        row = {"n": n, "k": k, "s": s, "t": t, "instances": instances, "outputs_agree": agree}
        for sv in solvers:
            row[f"{sv}_median_ms"] = round(statistics.median(times[sv]), 3)
        if "gauss" in solvers and "mab" in solvers:
            row["gauss_over_mab"] = round(row["gauss_median_ms"] / row["mab_median_ms"], 3)
        table.append(row)
    return table
