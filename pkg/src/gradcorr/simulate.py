"""Seeded Monte Carlo studies of the gradient test's null behavior.

Two experiments: rejection rates of the uncorrected and corrected tests
across sample sizes (size study), and the empirical null CDF of S
against its first-order and order-1/n approximations (CDF study).

Reproducibility.  Replicate r at sample size n draws from a dedicated
Philox stream keyed by (seed, n, r), so the replicate set is a pure
function of the configuration: chunking and worker count affect neither
values nor, thanks to integer-count reduction, aggregates.  Workers
default to 1; set GRADCORR_THREADS to parallelize over chunks.

Coefficients for the corrected procedures are the analytic-route values
evaluated at the null point (tested components at theta10, nuisance at
the configured truth).  For every built-in family the A's depend only on
components that are fixed under the null, so this equals the plug-in at
the per-replicate restricted MLE exactly.

Non-convergent fits are excluded and counted, never redrawn (the
replicate-to-stream mapping stays pure); a failure rate above 5% at any
sample size aborts the study.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .correction import bartlett_factors
from .expansion import ExpansionCoefficients
from .models import ModelFamily, make_model
from .special import chi2_cdf, chi2_quantile

__all__ = ["PROCEDURES", "SimulationConfig", "SizeRow", "SimulationResult",
           "CdfStudy", "SimulationError", "run_size_study", "run_cdf_study",
           "write_size_csv", "write_cdf_csv"]

PROCEDURES = ("uncorrected", "corrected_statistic", "expanded_cdf",
              "modified_quantile")

_MAX_FAILURE_RATE = 0.05
_CHUNK_VALUES = 20_000_000        # cap on replicates*n held in memory at once


class SimulationError(RuntimeError):
    """Study-level failure (e.g. too many non-convergent fits)."""


@dataclass(frozen=True)
class SimulationConfig:
    """Size-study specification; fully determines the results."""

    model_id: str
    theta: tuple
    theta10: tuple
    sizes: tuple
    replicates: int
    alphas: tuple = (0.05,)
    seed: int = 0
    procedures: tuple = ("uncorrected", "corrected_statistic")
    constants: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "theta", tuple(float(v) for v in self.theta))
        object.__setattr__(self, "theta10",
                           tuple(float(v) for v in self.theta10))
        object.__setattr__(self, "sizes", tuple(int(v) for v in self.sizes))
        object.__setattr__(self, "alphas",
                           tuple(float(v) for v in self.alphas))
        object.__setattr__(self, "procedures", tuple(self.procedures))
        if self.replicates < 1:
            raise ValueError(f"replicates must be >= 1, got {self.replicates}")
        if not self.sizes or any(n < 2 for n in self.sizes):
            raise ValueError(f"sample sizes must all be >= 2, got {self.sizes}")
        if not self.alphas or any(not 0.0 < a < 1.0 for a in self.alphas):
            raise ValueError(f"levels must lie in (0,1), got {self.alphas}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must be a 64-bit integer, got {self.seed}")
        bad = [p for p in self.procedures if p not in PROCEDURES]
        if bad or not self.procedures:
            raise ValueError(f"procedures must be a nonempty subset of "
                             f"{PROCEDURES}, got {self.procedures}")


@dataclass(frozen=True)
class SizeRow:
    """One (n, alpha, procedure) cell of a size study."""

    n: int
    alpha: float
    procedure: str
    rejections: int
    replicates: int
    rate: float
    distortion: float
    se: float


@dataclass(frozen=True)
class SimulationResult:
    config: SimulationConfig
    rows: tuple
    failures: tuple          # (n, non-converged count) per sample size


@dataclass(frozen=True)
class CdfStudy:
    x: np.ndarray
    f_empirical: np.ndarray
    f_chisq: np.ndarray
    f_expanded: np.ndarray
    sup_chisq: float
    sup_expanded: float
    n: int
    replicates: int
    failures: int


def _stream(seed: int, n: int, r: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=[seed, (n << 32) | r]))


def _streams(seed: int, n: int, r0: int, r1: int):
    return (_stream(seed, n, r) for r in range(r0, r1))


def _null_point(model: ModelFamily, theta, theta10) -> np.ndarray:
    th = np.array(theta, dtype=float)
    th[:model.q] = theta10
    return th


def _null_coefficients(model: ModelFamily, theta,
                       theta10) -> ExpansionCoefficients:
    th = _null_point(model, theta, theta10)
    try:
        return model.specialized_coefficients(th)
    except NotImplementedError:
        return model.general_coefficients(th)


def _expanded_sf(S, coef: ExpansionCoefficients, q: int, n: int):
    """1 - expanded CDF, vectorized, raw (no clamping)."""
    tail = sum(r * chi2_cdf(S, q + 2 * i)
               for i, r in enumerate((coef.R0, coef.R1, coef.R2, coef.R3)))
    return 1.0 - (chi2_cdf(S, q) + tail / (24.0 * n))


def _rejections(S, coef, q, n, alphas, procedures) -> dict:
    """Per-(alpha, procedure) rejection counts over finite S values."""
    f = bartlett_factors(coef, q, n)
    s_star = S * (1.0 - (f.c + S * (f.b + f.a * S)))
    p_exp = (_expanded_sf(S, coef, q, n)
             if "expanded_cdf" in procedures else None)
    counts = {}
    for alpha in alphas:
        crit = chi2_quantile(1.0 - alpha, q)
        z_mod = crit * (1.0 + f.c + crit * (f.b + f.a * crit))
        for proc in procedures:
            if proc == "uncorrected":
                rej = S > crit
            elif proc == "corrected_statistic":
                rej = s_star > crit
            elif proc == "expanded_cdf":
                rej = p_exp < alpha
            else:
                rej = S > z_mod
            counts[(alpha, proc)] = int(np.count_nonzero(rej))
    return counts


def _chunk_size(n: int) -> int:
    return max(1, min(20_000, _CHUNK_VALUES // max(n, 1)))


def _size_chunk(args) -> tuple:
    (model_id, constants, theta, theta10, n, seed, r0, r1, alphas,
     procedures, a_triple, q) = args
    model = make_model(model_id, **constants)
    S, failed = model.batch_statistics(theta, theta10, n,
                                       _streams(seed, n, r0, r1), r1 - r0)
    S = S[np.isfinite(S)]
    coef = ExpansionCoefficients(*a_triple)
    return n, _rejections(S, coef, q, n, alphas, procedures), failed


def run_size_study(cfg: SimulationConfig) -> SimulationResult:
    """Null rejection rates per (n, alpha, procedure)."""
    model = make_model(cfg.model_id, **cfg.constants)
    coef = _null_coefficients(model, cfg.theta, cfg.theta10)
    a_triple = coef.as_tuple()

    tasks = []
    for n in cfg.sizes:
        step = _chunk_size(n)
        for r0 in range(0, cfg.replicates, step):
            tasks.append((cfg.model_id, cfg.constants, cfg.theta,
                          cfg.theta10, n, int(cfg.seed), r0,
                          min(r0 + step, cfg.replicates), cfg.alphas,
                          cfg.procedures, a_triple, model.q))

    workers = int(os.environ.get("GRADCORR_THREADS", "1"))
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(_size_chunk, tasks))
    else:
        partials = [_size_chunk(t) for t in tasks]

    counts = {(n, a, p): 0 for n in cfg.sizes for a in cfg.alphas
              for p in cfg.procedures}
    failures = {n: 0 for n in cfg.sizes}
    for n, chunk_counts, failed in partials:
        failures[n] += failed
        for (a, p), c in chunk_counts.items():
            counts[(n, a, p)] += c

    rows = []
    for n in cfg.sizes:
        if failures[n] > _MAX_FAILURE_RATE * cfg.replicates:
            raise SimulationError(
                f"{failures[n]} of {cfg.replicates} fits failed at n={n} "
                f"(> {_MAX_FAILURE_RATE:.0%})")
        effective = cfg.replicates - failures[n]
        for a in cfg.alphas:
            for p in cfg.procedures:
                rej = counts[(n, a, p)]
                rate = rej / effective
                rows.append(SizeRow(
                    n=n, alpha=a, procedure=p, rejections=rej,
                    replicates=effective, rate=rate, distortion=rate - a,
                    se=float(np.sqrt(rate * (1.0 - rate) / effective))))
    return SimulationResult(config=cfg, rows=tuple(rows),
                            failures=tuple(sorted(failures.items())))


def run_cdf_study(model, theta, theta10, n: int, replicates: int,
                  seed: int, grid_points: int = 512) -> CdfStudy:
    """Empirical null CDF of S against G_q and the order-1/n expansion."""
    if isinstance(model, str):
        model = make_model(model)
    if replicates < 1:
        raise ValueError(f"replicates must be >= 1, got {replicates}")
    theta = tuple(float(v) for v in np.atleast_1d(theta))
    theta10 = tuple(float(v) for v in np.atleast_1d(theta10))
    coef = _null_coefficients(model, theta, theta10)
    q = model.q

    values = []
    failed = 0
    step = _chunk_size(n)
    for r0 in range(0, replicates, step):
        r1 = min(r0 + step, replicates)
        S, f = model.batch_statistics(theta, theta10, n,
                                      _streams(int(seed), n, r0, r1), r1 - r0)
        failed += f
        values.append(S[np.isfinite(S)])
    if failed > _MAX_FAILURE_RATE * replicates:
        raise SimulationError(f"{failed} of {replicates} fits failed "
                              f"(> {_MAX_FAILURE_RATE:.0%})")
    S = np.sort(np.concatenate(values))
    m = len(S)

    # exact sup-distance of each approximation from the empirical CDF,
    # evaluated at the jump points
    grid_hi = max(chi2_quantile(0.999, q), float(np.quantile(S, 0.999)))
    steps = np.arange(m + 1) / m
    sup = {}
    approx = {"chisq": lambda x: chi2_cdf(x, q),
              "expanded": lambda x: 1.0 - _expanded_sf(x, coef, q, n)}
    for name, fn in approx.items():
        at = fn(S)
        sup[name] = float(max(np.max(at - steps[:-1]), np.max(steps[1:] - at)))

    x = np.linspace(0.0, grid_hi, grid_points)
    f_emp = np.searchsorted(S, x, side="right") / m
    return CdfStudy(x=x, f_empirical=f_emp, f_chisq=approx["chisq"](x),
                    f_expanded=approx["expanded"](x),
                    sup_chisq=sup["chisq"], sup_expanded=sup["expanded"],
                    n=int(n), replicates=int(replicates), failures=failed)


def _fmt(v) -> str:
    return f"{v:.17g}"


def write_size_csv(result: SimulationResult, path) -> None:
    with open(path, "w") as fh:
        fh.write("n,alpha,procedure,rejections,replicates,rate,distortion,se\n")
        for r in result.rows:
            fh.write(f"{r.n},{_fmt(r.alpha)},{r.procedure},{r.rejections},"
                     f"{r.replicates},{_fmt(r.rate)},{_fmt(r.distortion)},"
                     f"{_fmt(r.se)}\n")


def write_cdf_csv(study: CdfStudy, path) -> None:
    with open(path, "w") as fh:
        fh.write("x,f_empirical,f_chisq,f_expanded\n")
        for vals in zip(study.x, study.f_empirical, study.f_chisq,
                        study.f_expanded):
            fh.write(",".join(_fmt(v) for v in vals) + "\n")
