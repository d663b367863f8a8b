"""Seeded experiment runner: scatter samples, theorem checks and sweeps.

Each sample ``i`` is drawn from its own stream ``make_rng(seed, i)``, so output
does not depend on chunking or evaluation order. Every run writes a CSV with a
fixed header (one row per sample or grid point) and a JSON summary next to it.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import logging
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import capacity as cap
from . import channels, correlations, qmat, states
from .channels import FullyCorrelatedPauli, NoiseSpec, UncorrelatedDepolarizing
from .optimize import DISCORD_DEFAULTS, ENCODING_DEFAULTS, OptimizerConfig
from .states import SystemLayout

log = logging.getLogger(__name__)

EXPERIMENTS = (
    "scatter_noiseless",
    "scatter_correlated",
    "scatter_uncorrelated",
    "rank2_scatter",
    "rank8_sweep",
    "noise_threshold_sweep",
    "verify_theorem1",
    "verify_theorem2",
    "verify_theorem3",
    "verify_prop1",
)
MEASURES = ("ggm", "tangle_score", "discord_score")

CASE1 = FullyCorrelatedPauli((0.485, 0.015, 0.015, 0.485))
CASE2 = FullyCorrelatedPauli((0.93, 0.01, 0.02, 0.04))
DEPOLARIZING_004 = UncorrelatedDepolarizing(0.04)

CI_SAMPLES = 10_000
FULL_SAMPLES = {
    "scatter_noiseless": 100_000,
    "rank2_scatter": 100_000,
    "scatter_correlated": 50_000,
    "scatter_uncorrelated": 50_000,
    "verify_theorem3": 50_000,
}
#: rank-8 states added to the rank-2 ones in the eigenvalue-criterion check
PROP1_RANK8_FRACTION = 0.1
PROP1_RANK8_MAX_MIXING = 0.2

#: slack before a sample counts as lying above a gGHZ bound
BOUND_TOL = {"ggm": 1e-8, "tangle_score": 1e-6, "discord_score": 1e-6}
THEOREM3_TOL = 1e-6
_CHUNK = 1000
_ENCODING_CHUNK = 400


class ConfigError(ValueError):
    """Invalid combination of experiment settings."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    samples: int | None = None
    seed: int = 0
    noise: NoiseSpec | None = None
    measure: str | None = None
    output_path: str | None = None
    full: bool = False
    encoding: OptimizerConfig = ENCODING_DEFAULTS
    discord: OptimizerConfig = DISCORD_DEFAULTS

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}")
        if self.samples is not None and self.samples < 1:
            raise ConfigError("samples must be at least 1")
        if self.measure is not None and self.measure not in MEASURES:
            raise ConfigError(f"unknown measure {self.measure!r}; choose from {MEASURES}")
        if self.experiment == "scatter_correlated" and not isinstance(self.noise, FullyCorrelatedPauli):
            raise ConfigError("scatter_correlated needs channel=correlated_pauli with q weights")
        if self.experiment == "scatter_uncorrelated" and not isinstance(self.noise, UncorrelatedDepolarizing):
            raise ConfigError("scatter_uncorrelated needs channel=depolarizing with p")
        if self.experiment == "verify_theorem3" and self.noise is not None \
                and not isinstance(self.noise, FullyCorrelatedPauli):
            raise ConfigError("verify_theorem3 only accepts correlated Pauli noise")
        if self.experiment == "rank2_scatter" and self.measure not in (None, "discord_score"):
            raise ConfigError("rank2_scatter supports only the discord_score measure")
        if self.noise is not None and self.experiment in (
                "scatter_noiseless", "rank2_scatter", "verify_theorem1", "verify_theorem2", "verify_prop1"):
            raise ConfigError(f"{self.experiment} is noiseless; drop the channel settings")

    @property
    def n_samples(self) -> int:
        if self.samples is not None:
            return self.samples
        return FULL_SAMPLES.get(self.experiment, CI_SAMPLES) if self.full else CI_SAMPLES

    @property
    def measure_or_default(self) -> str:
        if self.measure is not None:
            return self.measure
        return "discord_score" if self.experiment == "rank2_scatter" else "ggm"

    @property
    def noise_or_default(self) -> NoiseSpec | None:
        if self.noise is None and self.experiment == "verify_theorem3":
            return CASE1
        return self.noise

    def echo(self) -> dict:
        out = {
            "experiment": self.experiment,
            "samples": self.n_samples,
            "seed": self.seed,
            "measure": self.measure_or_default,
            "full": self.full,
        }
        if self.noise_or_default is not None:
            out.update(channels.noise_to_config(self.noise_or_default))
        return out

    @classmethod
    def from_mapping(cls, cfg: Mapping[str, object]) -> "ExperimentConfig":
        known = {"experiment", "samples", "seed", "measure", "out", "output_path", "full",
                 "channel", "q", "p", "lambdas"}
        unknown = set(cfg) - known
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        if "experiment" not in cfg:
            raise ConfigError("config needs an experiment")
        full = cfg.get("full", False)
        if isinstance(full, str):
            full = full.strip().lower() in ("1", "true", "yes", "on")
        try:
            noise = channels.noise_from_config(cfg)
        except (KeyError, ValueError) as exc:
            raise ConfigError(f"bad channel settings: {exc}") from exc
        return cls(
            experiment=str(cfg["experiment"]),
            samples=int(cfg["samples"]) if cfg.get("samples") not in (None, "") else None,
            seed=int(cfg.get("seed", 0)),
            noise=noise,
            measure=str(cfg["measure"]) if cfg.get("measure") else None,
            output_path=cfg.get("out") or cfg.get("output_path"),
            full=bool(full),
        )


def read_config_file(path: str | Path) -> dict[str, str]:
    """Parse ``key=value`` lines; blank lines and ``#`` comments are skipped."""
    out = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


@dataclass
class SampleRecord:
    state_id: int
    lambda_R: float
    capacity: float | None = None
    raw_capacity: float | None = None
    ggm: float | None = None
    tangle_score: float | None = None
    discord_score: float | None = None
    cond_i: bool | None = None
    cond_ii: bool | None = None
    above_gghz_curve: bool | None = None


@dataclass
class Prop1Record:
    state_id: int
    family: str
    mu1: float
    lambda1: float
    raw_capacity: float
    dense_codeable: bool
    prop1_necessary: bool


@dataclass
class RunResult:
    summary: dict
    rows: list = field(default_factory=list)
    csv_path: Path | None = None
    json_path: Path | None = None

    @property
    def passed(self) -> bool:
        return bool(self.summary.get("passed", True))


def fraction(count: int, total: int) -> dict:
    """Count, fraction and its binomial standard error."""
    if total == 0:
        return {"count": int(count), "total": 0, "fraction": None, "stderr": None}
    f = count / total
    return {"count": int(count), "total": int(total), "fraction": f,
            "stderr": math.sqrt(f * (1 - f) / total)}


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".12g")
    return str(value)


def rows_to_csv(rows: Sequence) -> str:
    """CSV text for dataclass or dict rows; the header comes from the first row."""
    buf = io.StringIO()
    if not rows:
        return ""
    dicts = [dataclasses.asdict(r) if dataclasses.is_dataclass(r) else dict(r) for r in rows]
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(list(dicts[0]))
    for d in dicts:
        writer.writerow([_fmt(v) for v in d.values()])
    return buf.getvalue()


# -- sampling helpers ---------------------------------------------------------


def sample_pure(n_qubits: int, seed: int, ids: Iterable[int]) -> np.ndarray:
    return np.array([states.haar_pure(n_qubits, states.make_rng(seed, i)) for i in ids])


def sample_rank2(n_qubits: int, seed: int, ids: Iterable[int]) -> np.ndarray:
    return np.array([states.haar_rank2_mixed(n_qubits, states.make_rng(seed, i)) for i in ids])


def _chunks(n: int, size: int):
    for lo in range(0, n, size):
        yield range(lo, min(n, lo + size))


def _top_receiver_eigenvalue(state, layout: SystemLayout) -> float:
    return float(np.linalg.eigvalsh(qmat.partial_trace(state, [layout.receiver], layout.n_qubits))[-1])


def gghz_measure(measure: str, alpha: float) -> float:
    """Value of ``measure`` on the gGHZ state with weight alpha >= 1/2."""
    if measure == "ggm":
        return 1.0 - alpha
    if measure == "tangle_score":
        return 4.0 * alpha * (1.0 - alpha)
    return qmat.binary_entropy(alpha)


# -- noiseless pure states ------------------------------------------------------


def _pure_noiseless_records(cfg: ExperimentConfig, want_discord: bool) -> list[SampleRecord]:
    layout = SystemLayout.default(3)
    measure = cfg.measure_or_default
    records = []
    for ids in _chunks(cfg.n_samples, _CHUNK):
        psis = sample_pure(3, cfg.seed, ids)
        disc = correlations.discord_score_batch(psis, layout, cfg.discord) if want_discord else None
        for k, (i, psi) in enumerate(zip(ids, psis)):
            lam = _top_receiver_eigenvalue(psi, layout)
            res = cap.noiseless_capacity(psi, layout)
            rec = SampleRecord(
                state_id=i, lambda_R=lam, capacity=res.capacity, raw_capacity=res.raw_capacity,
                ggm=correlations.ggm(psi), tangle_score=correlations.tangle_score(psi, layout),
                discord_score=None if disc is None else float(disc[k]),
            )
            value = getattr(rec, measure)
            if value is not None:
                rec.above_gghz_curve = bool(value > gghz_measure(measure, lam) + BOUND_TOL[measure])
            records.append(rec)
    return records


def _bound_violations(records: Sequence[SampleRecord], measure: str) -> int:
    return sum(
        getattr(r, measure) > gghz_measure(measure, r.lambda_R) + BOUND_TOL[measure]
        for r in records
    )


def _scatter_noiseless(cfg):
    measure = cfg.measure_or_default
    records = _pure_noiseless_records(cfg, want_discord=measure == "discord_score")
    above = sum(bool(r.above_gghz_curve) for r in records)
    summary = {"above_gghz_curve": fraction(above, len(records)),
               "below_or_on_gghz_curve": fraction(len(records) - above, len(records))}
    return summary, records


def _verify_theorem1(cfg):
    records = _pure_noiseless_records(cfg, want_discord=False)
    violations = _bound_violations(records, "ggm")
    return {"violations": {"ggm": violations}, "tolerance": BOUND_TOL["ggm"],
            "passed": violations == 0}, records


def _verify_theorem2(cfg):
    records = _pure_noiseless_records(cfg, want_discord=True)
    tangle = _bound_violations(records, "tangle_score")
    discord = _bound_violations(records, "discord_score")
    negative_tangle = sum(r.tangle_score < -1e-6 for r in records)
    return {
        "violations": {"tangle_score": tangle, "discord_score": discord,
                       "negative_tangle_score": negative_tangle},
        "tolerance": BOUND_TOL["tangle_score"],
        "passed": tangle == 0 and discord == 0 and negative_tangle == 0,
    }, records


# -- noisy pure states ------------------------------------------------------------


def _noisy_records(cfg: ExperimentConfig, spec: NoiseSpec, only_cond_ii: bool):
    """Records plus counters for the GGM bound at matched noisy capacity."""
    layout = SystemLayout.default(3)
    measure = cfg.measure_or_default
    records = []
    stats = {"eligible": 0, "excluded": 0, "violations": 0, "unconverged": 0}
    correlated = isinstance(spec, FullyCorrelatedPauli)
    bound = None
    if correlated:
        c = spec.flip_probability
        bound = max(c, 1.0 - c)
    for ids in _chunks(cfg.n_samples, _ENCODING_CHUNK):
        psis = sample_pure(3, cfg.seed, ids)
        cond_ii = np.array([cap.receiver_has_max_marginal(p, layout) for p in psis])
        todo = np.flatnonzero(cond_ii) if only_cond_ii else np.arange(len(psis))
        caps = {}
        if len(todo):
            caps = dict(zip(todo, cap.noisy_capacity_batch(psis[todo], layout, spec, cfg.encoding)))
        disc = None
        if measure == "discord_score":
            disc = correlations.discord_score_batch(psis, layout, cfg.discord)
        for k, (i, psi) in enumerate(zip(ids, psis)):
            rec = SampleRecord(
                state_id=i, lambda_R=_top_receiver_eigenvalue(psi, layout),
                ggm=correlations.ggm(psi), tangle_score=correlations.tangle_score(psi, layout),
                discord_score=None if disc is None else float(disc[k]), cond_ii=bool(cond_ii[k]),
            )
            res = caps.get(k)
            if res is not None:
                rec.capacity, rec.raw_capacity = res.capacity, res.raw_capacity
                stats["unconverged"] += not res.converged
                if correlated:
                    out = cap.encoded_output(psi, layout, spec, res.optimal_unitary_params)
                    rec.cond_i = bool(np.linalg.eigvalsh(out)[-1] <= bound + cap.STRICT_TOL)
                alpha = cap.matched_gghz_alpha(res.raw_capacity, layout, spec)
                if alpha is not None:
                    rec.above_gghz_curve = bool(
                        getattr(rec, measure) > gghz_measure(measure, alpha) + BOUND_TOL[measure])
                if correlated and rec.cond_i and rec.cond_ii and res.dense_codeable:
                    stats["eligible"] += 1
                    if alpha is None:
                        stats["excluded"] += 1
                    elif rec.ggm < (1.0 - alpha) - THEOREM3_TOL:
                        stats["violations"] += 1
            records.append(rec)
    return records, stats


def _noisy_summary(records, stats, correlated: bool) -> dict:
    n = len(records)
    cii = [r for r in records if r.cond_ii]
    summary = {"cond_ii": fraction(len(cii), n)}
    if correlated:
        summary["cond_i_given_cond_ii"] = fraction(sum(bool(r.cond_i) for r in cii), len(cii))
    matched = [r for r in cii if r.above_gghz_curve is not None]
    summary["above_gghz_curve_given_cond_ii"] = fraction(
        sum(r.above_gghz_curve for r in matched), len(matched))
    every = [r for r in records if r.above_gghz_curve is not None]
    summary["above_gghz_curve"] = fraction(sum(r.above_gghz_curve for r in every), len(every))
    summary["unmatched_capacity"] = sum(
        r.raw_capacity is not None and r.above_gghz_curve is None for r in records)
    summary["unconverged_encodings"] = stats["unconverged"]
    if correlated:
        summary["ggm_bound"] = {k: stats[k] for k in ("eligible", "excluded", "violations")}
    return summary


def _scatter_correlated(cfg):
    records, stats = _noisy_records(cfg, cfg.noise_or_default, only_cond_ii=False)
    return _noisy_summary(records, stats, True), records


def _scatter_uncorrelated(cfg):
    records, stats = _noisy_records(cfg, cfg.noise_or_default, only_cond_ii=False)
    summary = _noisy_summary(records, stats, False)
    frac = summary["above_gghz_curve_given_cond_ii"]["fraction"]
    summary["majority_above_given_cond_ii"] = frac is not None and frac > 0.5
    return summary, records


def _verify_theorem3(cfg):
    records, stats = _noisy_records(cfg, cfg.noise_or_default, only_cond_ii=True)
    summary = _noisy_summary(records, stats, True)
    summary["tolerance"] = THEOREM3_TOL
    summary["passed"] = stats["violations"] == 0
    return summary, records


# -- mixed states -----------------------------------------------------------------


def _rank2_scatter(cfg):
    """Rank-2 states in the (capacity, discord score) plane against the gGHZ line.

    The gGHZ locus is delta_D = (N+1) C - N; a sample lies below it when its
    discord score is strictly smaller than that value at its own capacity.
    """
    layout = SystemLayout.default(3)
    n = layout.n_senders
    records = []
    below = 0
    below_dense = dense = 0
    for ids in _chunks(cfg.n_samples, _CHUNK):
        rhos = sample_rank2(3, cfg.seed, ids)
        disc = correlations.discord_score_batch(rhos, layout, cfg.discord)
        for k, (i, rho) in enumerate(zip(ids, rhos)):
            res = cap.noiseless_capacity(rho, layout)
            line = (n + 1) * res.capacity - n
            is_below = bool(disc[k] < line)
            below += is_below
            dense += res.dense_codeable
            below_dense += is_below and res.dense_codeable
            records.append(SampleRecord(
                state_id=i, lambda_R=_top_receiver_eigenvalue(rho, layout), capacity=res.capacity,
                raw_capacity=res.raw_capacity, discord_score=float(disc[k]),
                above_gghz_curve=bool(disc[k] > line),
            ))
    total = len(records)
    return {
        "below_gghz_curve": fraction(below, total),
        "dense_codeable": fraction(dense, total),
        "below_gghz_curve_given_dense_codeable": fraction(below_dense, dense),
    }, records


def _verify_prop1(cfg):
    layout = SystemLayout.default(3)
    n_rank8 = max(1, int(round(cfg.n_samples * PROP1_RANK8_FRACTION)))
    records = []
    for i in range(cfg.n_samples + n_rank8):
        rng = states.make_rng(cfg.seed, i)
        rho = states.haar_rank2_mixed(3, rng)
        family = "rank2"
        if i >= cfg.n_samples:
            rho = states.rank8_family(rho, rng.uniform(0.0, PROP1_RANK8_MAX_MIXING))
            family = "rank8"
        res = cap.noiseless_capacity(rho, layout)
        records.append(Prop1Record(
            state_id=i, family=family,
            mu1=float(qmat.hermitian_eig(rho).eigenvalues[0]),
            lambda1=_top_receiver_eigenvalue(rho, layout),
            raw_capacity=res.raw_capacity, dense_codeable=res.dense_codeable,
            prop1_necessary=cap.prop1_necessary(rho, layout),
        ))
    bad = sum(r.dense_codeable and not r.prop1_necessary for r in records)
    summary = {"counterexamples": bad, "passed": bad == 0}
    for fam in ("rank2", "rank8"):
        sub = [r for r in records if r.family == fam]
        summary[fam] = {"dense_codeable": fraction(sum(r.dense_codeable for r in sub), len(sub)),
                        "prop1_necessary": fraction(sum(r.prop1_necessary for r in sub), len(sub))}
    return summary, records


def rank8_sweep(qs: Sequence[float] | None = None, ps: Sequence[float] | None = None,
                opt: OptimizerConfig = DISCORD_DEFAULTS) -> list[dict]:
    """Discord score and capacities of (1-p) rho_q + p I/8 over a (q, p) grid."""
    qs = np.round(np.linspace(0.0, 1.0, 11), 12) if qs is None else np.asarray(qs, dtype=float)
    ps = np.linspace(0.0, 0.1, 21) if ps is None else np.asarray(ps, dtype=float)
    layout = SystemLayout.default(3)
    grid = [(q, p) for q in qs for p in ps]
    rhos = np.array([states.rank8_family(states.ghz_prime_mixture(q), p) for q, p in grid])
    disc = correlations.discord_score_batch(rhos, layout, opt)
    rows = []
    for (q, p), rho, d in zip(grid, rhos, disc):
        res = cap.noiseless_capacity(rho, layout)
        rows.append({"q": float(q), "p": float(p), "discord_score": float(d),
                     "raw_capacity": res.raw_capacity, "capacity": res.capacity,
                     "dense_codeable": res.dense_codeable})
    return rows


def _rank8_sweep(cfg):
    rows = rank8_sweep(opt=cfg.discord)
    best = max(rows, key=lambda r: r["raw_capacity"])
    return {"grid_points": len(rows),
            "max_raw_capacity": {k: best[k] for k in ("q", "p", "raw_capacity", "discord_score")},
            "dense_codeable": fraction(sum(r["dense_codeable"] for r in rows), len(rows))}, rows


# -- noise thresholds ---------------------------------------------------------------


def correlated_family(c: float, family: str = "min_entropy") -> FullyCorrelatedPauli:
    """One-parameter correlated Pauli weights with q1 + q2 = c.

    ``min_entropy`` puts all flip weight on sigma_x, ``max_entropy`` spreads it
    evenly, (1-c)/2, c/2, c/2, (1-c)/2.
    """
    if family == "min_entropy":
        return FullyCorrelatedPauli((1.0 - c, c, 0.0, 0.0))
    if family == "max_entropy":
        return FullyCorrelatedPauli(((1.0 - c) / 2, c / 2, c / 2, (1.0 - c) / 2))
    raise ValueError(f"unknown correlated family {family!r}")


def _largest_dense_codeable(raw_at, hi: float, tol: float) -> float:
    """Largest x in [0, hi] with raw_at(x) > floor, for raw_at decreasing in x."""
    floor = 2.0 / 3.0
    if raw_at(hi) > floor + cap.STRICT_TOL:
        return hi
    if raw_at(0.0) <= floor + cap.STRICT_TOL:
        return 0.0
    lo = 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if raw_at(mid) > floor + cap.STRICT_TOL:
            lo = mid
        else:
            hi = mid
    return lo


def noise_threshold_sweep(alphas: Sequence[float], tol: float = 1e-6) -> list[dict]:
    """Largest noise (in bits) keeping the gGHZ state dense codeable, per alpha.

    Correlated noise is measured by H({q}) along both ``correlated_family``
    variants, uncorrelated depolarizing noise by 2 H(p) with p in [0, 1/2]. The
    encoding is the identity (any Pauli-string encoding gives the same entropy).
    """
    layout = SystemLayout.default(3)
    rows = []
    for alpha in alphas:
        psi = states.gghz(3, alpha)
        row = {"alpha": float(alpha)}
        for family in ("min_entropy", "max_entropy"):
            def corr_raw(c, family=family):
                return cap.noisy_capacity(psi, layout, correlated_family(c, family),
                                          optimize_encoding=False).raw_capacity

            c_star = _largest_dense_codeable(corr_raw, 0.5, tol)
            row[f"c_{family}"] = c_star
            row[f"threshold_{family}"] = channels.noise_entropy(correlated_family(c_star, family))

        def unc_raw(p):
            return cap.noisy_capacity(psi, layout, UncorrelatedDepolarizing(p),
                                      optimize_encoding=False).raw_capacity

        p_star = _largest_dense_codeable(unc_raw, 0.5, tol)
        row["p_uncorrelated"] = p_star
        row["threshold_uncorrelated"] = 2.0 * qmat.binary_entropy(p_star)
        rows.append(row)
    return rows


THRESHOLD_ALPHAS = np.linspace(0.5, 0.99, 20)


def _noise_threshold_sweep(cfg):
    rows = noise_threshold_sweep(THRESHOLD_ALPHAS)
    summary = {"alphas": len(rows)}
    for family in ("min_entropy", "max_entropy"):
        summary[f"{family}_not_below_uncorrelated"] = sum(
            r[f"threshold_{family}"] >= r["threshold_uncorrelated"] for r in rows)
    # the most noise a correlated channel can carry is along the max-entropy family
    summary["passed"] = summary["max_entropy_not_below_uncorrelated"] == len(rows)
    return summary, rows


_RUNNERS = {
    "scatter_noiseless": _scatter_noiseless,
    "scatter_correlated": _scatter_correlated,
    "scatter_uncorrelated": _scatter_uncorrelated,
    "rank2_scatter": _rank2_scatter,
    "rank8_sweep": _rank8_sweep,
    "noise_threshold_sweep": _noise_threshold_sweep,
    "verify_theorem1": _verify_theorem1,
    "verify_theorem2": _verify_theorem2,
    "verify_theorem3": _verify_theorem3,
    "verify_prop1": _verify_prop1,
}


def output_stem(cfg: ExperimentConfig) -> str:
    return f"{cfg.experiment}_seed{cfg.seed}_n{cfg.n_samples}"


def run(cfg: ExperimentConfig) -> RunResult:
    """Run one experiment; write CSV and JSON when ``cfg.output_path`` is set."""
    out_dir = None
    if cfg.output_path is not None:
        out_dir = Path(cfg.output_path)
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise ConfigError(f"cannot create output directory {out_dir}: {exc}") from exc
    log.info("running %s with %d samples, seed %d", cfg.experiment, cfg.n_samples, cfg.seed)
    start = time.perf_counter()
    body, rows = _RUNNERS[cfg.experiment](cfg)
    summary = {"config": cfg.echo(), "rng": states.RNG_ALGORITHM, **body,
               "runtime_seconds": round(time.perf_counter() - start, 3)}
    result = RunResult(summary, rows)
    if out_dir is not None:
        stem = output_stem(cfg)
        result.csv_path = out_dir / f"{stem}.csv"
        result.json_path = out_dir / f"{stem}.json"
        result.csv_path.write_text(rows_to_csv(rows))
        result.json_path.write_text(json.dumps(summary, indent=2, default=_json_default) + "\n")
    return result


def _json_default(obj):
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    raise TypeError(f"{type(obj).__name__} is not JSON serializable")
