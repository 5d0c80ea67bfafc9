"""Seeded Monte Carlo harness for average-discrepancy experiments.

Reproduces the expectation identities for p = 2 under uniform and optimal
sampling, the c* weight-rescaling effect, asymptotic scaling probes for
general p, and quadrature-stability metrics.

Reproducibility contract: replication r of an experiment with seed s uses the
counter-based Philox stream keyed by (s, r), so reruns with the same config
produce bit-identical reports regardless of replication order.  Replications
run serially; aggregation order is fixed.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from .core import ProductDensity, WeightedPointSet, initial_error
from .density import Density1D, optimal_density
from .discrepancy import (
    _e2_kernel_fast,
    c_kernel,
    evaluate,
    lp_discrepancy_cells,
)
from .errors import InvalidArgumentError

__all__ = [
    "ExperimentConfig",
    "ExperimentReport",
    "run_average_discrepancy",
    "exact_nav2",
    "optimal_c_rescale",
    "c_rescale_experiment",
    "asymptotic_scaling_probe",
    "stability_metrics",
    "StabilityReport",
]

_DENSITY_KINDS = ("uniform", "optimal", "custom-file")
_EVALUATORS = ("auto", "kernel_p2", "cell_quadrature", "monte_carlo")


@dataclass(frozen=True)
class ExperimentConfig:
    """Description of one seeded average-discrepancy experiment."""

    p: float
    d: int
    N: int
    density_kind: str
    replications: int
    seed: int
    evaluator: str = "auto"
    c_rescale: str = "none"
    density_file: str | None = None

    def __post_init__(self):
        if self.p < 1.0:
            raise InvalidArgumentError(f"p must be >= 1, got {self.p}")
        if self.d < 1 or self.N < 1:
            raise InvalidArgumentError("need d >= 1 and N >= 1")
        if self.replications < 2:
            raise InvalidArgumentError("need at least 2 replications")
        if self.density_kind not in _DENSITY_KINDS:
            raise InvalidArgumentError(f"unknown density_kind {self.density_kind!r}")
        if self.evaluator not in _EVALUATORS:
            raise InvalidArgumentError(f"unknown evaluator {self.evaluator!r}")
        if self.c_rescale not in ("none", "optimal_c"):
            raise InvalidArgumentError(f"unknown c_rescale {self.c_rescale!r}")
        if self.density_kind == "custom-file" and not self.density_file:
            raise InvalidArgumentError("custom-file density needs density_file")

    @classmethod
    def from_json(cls, path) -> "ExperimentConfig":
        with open(path) as fh:
            raw = json.load(fh)
        allowed = set(cls.__dataclass_fields__)
        unknown = set(raw) - allowed
        if unknown:
            raise InvalidArgumentError(f"unknown config fields: {sorted(unknown)}")
        missing = {"p", "d", "N", "density_kind", "replications", "seed"} - set(raw)
        if missing:
            raise InvalidArgumentError(f"missing config fields: {sorted(missing)}")
        return cls(**raw)


@dataclass(frozen=True)
class ExperimentReport:
    """Statistics of one experiment; mean_Lp_p estimates E[L^p]."""

    mean_Lp_p: float
    av_p: float
    n_av_p: float
    std_error: float
    scaled: float
    replications_used: int
    resamples: int
    seed: int

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    def write_csv(self, path) -> None:
        data = asdict(self)
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(sorted(data))
            writer.writerow([data[k] for k in sorted(data)])


def _rng(seed: int, *stream) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(stream))
    return np.random.Generator(np.random.Philox(ss))


def _marginal_for(kind: str, p: float, density_file=None) -> Density1D:
    if kind == "uniform":
        return Density1D.uniform()
    if kind == "optimal":
        return optimal_density(p)
    t, rho = [], []
    with open(density_file) as fh:
        reader = csv.reader(fh)
        for row in reader:
            if not row or not row[0].strip() or row[0].lstrip()[0].isalpha():
                continue
            t.append(float(row[0]))
            rho.append(float(row[1]))
    return Density1D.from_table(np.asarray(t), np.asarray(rho))


def _sample_rep(rng, n, d, marginal):
    """One replication of N i.i.d. points with importance weights.

    Returns (points, weights, resample_count).  A draw landing where the
    density vanishes (probability zero in exact arithmetic) is redrawn and
    counted, to surface sampler bugs.
    """
    resamples = 0
    t = marginal.ppf(rng.random((n, d)).ravel()).reshape(n, d)
    np.minimum(t, np.nextafter(1.0, 0.0), out=t)
    rho = marginal.pdf_fast(t.ravel()).reshape(n, d).prod(axis=1)
    while np.any(rho <= 0.0):
        bad = rho <= 0.0
        resamples += int(bad.sum())
        nb = int(bad.sum())
        tb = marginal.ppf(rng.random((nb, d)).ravel()).reshape(nb, d)
        np.minimum(tb, np.nextafter(1.0, 0.0), out=tb)
        t[bad] = tb
        rho[bad] = marginal.pdf_fast(tb.ravel()).reshape(nb, d).prod(axis=1)
    a = 1.0 / (n * rho)
    return t, a, resamples


def _lp_pow_d1_exact(t: np.ndarray, a: np.ndarray, p: float) -> float:
    """Exact integral of |Delta|^p for d = 1 (piecewise-analytic cells)."""
    order = np.argsort(t, kind="stable")
    ts = t[order]
    cum = np.concatenate(([0.0], np.cumsum(a[order])))
    edges = np.concatenate(([0.0], ts, [1.0]))
    lo, hi = edges[:-1], edges[1:]
    pp1 = p + 1.0
    a1 = np.clip(cum - lo, 0.0, None)
    a2 = np.clip(cum - hi, 0.0, None)
    b1 = np.clip(hi - cum, 0.0, None)
    b2 = np.clip(lo - cum, 0.0, None)
    return float(np.sum(a1 ** pp1 - a2 ** pp1 + b1 ** pp1 - b2 ** pp1) / pp1)


def _lp_pow_one_rep(t, a, p, d, evaluator, rng):
    if evaluator == "kernel_p2" or (evaluator == "auto" and p == 2.0):
        return _e2_kernel_fast(t, a)
    if evaluator in ("auto", "cell_quadrature") and d == 1:
        return _lp_pow_d1_exact(t[:, 0], a, p)
    ps = WeightedPointSet(t, a)
    if evaluator in ("auto", "cell_quadrature") and d <= 4:
        return lp_discrepancy_cells(ps, p).value ** p
    samples = max(8192, 4 * t.shape[0])
    seed = int(rng.integers(0, 2 ** 63 - 1))
    return evaluate(ps, p, method="mc", samples=samples, seed=seed).value ** p


def run_average_discrepancy(cfg: ExperimentConfig) -> ExperimentReport:
    """Estimate av_p and n-av_p over M replications of N weighted points."""
    marginal = _marginal_for(cfg.density_kind, cfg.p, cfg.density_file)
    c_factor = 1.0
    if cfg.c_rescale == "optimal_c":
        kind = {"uniform": "uniform", "optimal": "optimal", "custom-file": "custom"}
        kc = c_kernel(ProductDensity(cfg.d, marginal, kind[cfg.density_kind]))
        c_factor = optimal_c_rescale(cfg.N, cfg.d, kc.C_K)
    lp_vals = np.empty(cfg.replications)
    resamples = 0
    for r in range(cfg.replications):
        rng = _rng(cfg.seed, r)
        t, a, rs = _sample_rep(rng, cfg.N, cfg.d, marginal)
        resamples += rs
        lp_vals[r] = _lp_pow_one_rep(t, c_factor * a, cfg.p, cfg.d, cfg.evaluator, rng)
    mean = float(lp_vals.mean())
    se = float(lp_vals.std(ddof=1) / math.sqrt(cfg.replications))
    av = mean ** (1.0 / cfg.p) if mean > 0.0 else 0.0
    n_av = av / initial_error(cfg.p, cfg.d)
    return ExperimentReport(
        mean_Lp_p=mean,
        av_p=av,
        n_av_p=n_av,
        std_error=se,
        scaled=math.sqrt(cfg.N) * n_av,
        replications_used=cfg.replications,
        resamples=resamples,
        seed=cfg.seed,
    )


def exact_nav2(N: int, d: int, density_kind: str) -> float:
    """Closed-form n-av_2: 3^{d/2} sqrt((C^d - 3^-d)/N) with C = 1/2 for
    uniform sampling and C = 4/9 for the optimal density."""
    if N < 1 or d < 1:
        raise InvalidArgumentError("need N >= 1 and d >= 1")
    if density_kind == "uniform":
        c1 = 0.5
    elif density_kind == "optimal":
        c1 = 4.0 / 9.0
    else:
        raise InvalidArgumentError(f"no closed form for {density_kind!r}")
    return 3.0 ** (d / 2.0) * math.sqrt((c1 ** d - 3.0 ** (-d)) / N)


def optimal_c_rescale(N: int, d: int, C_K: float) -> float:
    """Weight-rescaling constant c* = N / (N - 1 + 3^d C(K_d, rho_d))."""
    if C_K < 3.0 ** (-d) * (1.0 - 1e-12):
        raise InvalidArgumentError("C_K below the 3^-d lower bound")
    return N / (N - 1.0 + 3.0 ** d * C_K)


@dataclass(frozen=True)
class CStarReport:
    ratio: float
    std_error: float
    c_star: float
    replications: int
    seed: int


def c_rescale_experiment(
    N: int, d: int, density_kind: str, replications: int, seed: int
) -> CStarReport:
    """Paired MC estimate of E[e^2 rescaled] / E[e^2] for p = 2.

    Per replication, both squared errors are derived from the same linear and
    quadratic kernel terms, so the ratio estimate is tightly coupled; the
    standard error uses the delta method for a ratio of means.
    """
    marginal = _marginal_for(density_kind, 2.0)
    kind = "uniform" if density_kind == "uniform" else "optimal"
    kc = c_kernel(ProductDensity(d, marginal, kind))
    c_star = optimal_c_rescale(N, d, kc.C_K)
    base = 3.0 ** (-d)
    e2_plain = np.empty(replications)
    e2_resc = np.empty(replications)
    for r in range(replications):
        rng = _rng(seed, r)
        t, a, _ = _sample_rep(rng, N, d, marginal)
        h = np.prod((1.0 - t ** 2) / 2.0, axis=1)
        kmat = np.prod(1.0 - np.maximum(t[:, None, :], t[None, :, :]), axis=2)
        t1 = float(a @ h)
        t2 = float(a @ kmat @ a)
        e2_plain[r] = base - 2.0 * t1 + t2
        e2_resc[r] = base - 2.0 * c_star * t1 + c_star ** 2 * t2
    mx = float(e2_plain.mean())
    my = float(e2_resc.mean())
    ratio = my / mx
    cov = np.cov(np.vstack([e2_resc, e2_plain]), ddof=1)
    var_r = (cov[0, 0] - 2.0 * ratio * cov[0, 1] + ratio ** 2 * cov[1, 1]) / (
        mx ** 2 * replications
    )
    return CStarReport(
        ratio=ratio,
        std_error=math.sqrt(max(var_r, 0.0)),
        c_star=c_star,
        replications=replications,
        seed=seed,
    )


def asymptotic_scaling_probe(
    p: float,
    d: int,
    density_kind: str,
    N_grid,
    replications: int,
    seed: int,
):
    """Scaled averages N^{1/2} n-av_p along an increasing N grid.

    Each N gets its own Philox stream block, so rows are independent and the
    whole table is reproducible from (seed, N_grid).  Returns a list of row
    dicts {N, n_av_p, scaled, std_error_scaled}.
    """
    N_grid = list(N_grid)
    if any(b <= a for a, b in zip(N_grid, N_grid[1:])):
        raise InvalidArgumentError("N_grid must be strictly increasing")
    if N_grid[-1] > 2 ** 16:
        raise InvalidArgumentError("max N in the grid is 2^16")
    marginal = _marginal_for(density_kind, p)
    rows = []
    for block, n in enumerate(N_grid):
        lp_vals = np.empty(replications)
        for r in range(replications):
            rng = _rng(seed, block, r)
            t, a, _ = _sample_rep(rng, n, d, marginal)
            lp_vals[r] = _lp_pow_one_rep(t, a, p, d, "auto", rng)
        mean = float(lp_vals.mean())
        se_mean = float(lp_vals.std(ddof=1) / math.sqrt(replications))
        n_av = mean ** (1.0 / p) / initial_error(p, d)
        scaled = math.sqrt(n) * n_av
        se_scaled = se_mean * scaled / (p * mean) if mean > 0.0 else float("nan")
        rows.append(
            {"N": n, "n_av_p": n_av, "scaled": scaled, "std_error_scaled": se_scaled}
        )
    return rows


@dataclass(frozen=True)
class StabilityReport:
    """Classical and F_{d,q}-relative stability indicators of one rule."""

    sum_abs_weights: float
    max_term_contribution: float
    error: float
    fdq_norm_bound: float


def stability_metrics(ps: WeightedPointSet, p: float) -> StabilityReport:
    """Operator-norm surrogates: sum |a_k|, the largest single-point
    contribution sup_{|f|<=1} a_k f(t_k) = a_k sqrt(K_d(t_k,t_k)), and the
    triangle-inequality bound ||A|| <= error + initial error."""
    sum_abs = float(np.abs(ps.weights).sum())
    contrib = ps.weights * np.prod(np.sqrt(1.0 - ps.points), axis=1)
    if p == 2.0:
        err = evaluate(ps, 2.0).value
    elif ps.d <= 4:
        err = evaluate(ps, p, method="cells").value
    else:
        err = evaluate(ps, p, method="mc", samples=20000, seed=0).value
    return StabilityReport(
        sum_abs_weights=sum_abs,
        max_term_contribution=float(contrib.max()),
        error=err,
        fdq_norm_bound=err + initial_error(p, ps.d),
    )
