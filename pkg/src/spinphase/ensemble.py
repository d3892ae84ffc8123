"""Monte-Carlo tomography experiments over random state ensembles.

Reproduces the three shot-noise experiments (pointwise at the north pole,
grid-averaged pointwise, full-reconstruction L2 error) plus the 3x3
direct-versus-convolved comparison, with deterministic per-(state, point)
random streams derived from a single master seed.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .convolution import transform_s
from .errors import DomainError
from .halfint import HalfInteger
from .parity import parity_operator
from .phasespace import (
    evaluate_series,
    function_l2,
    function_max,
    phase_point,
    to_spherical_coeffs,
)
from .states import random_hs, random_pure
from .tomography import (
    GridSpec,
    full_tomography,
    multinomial_counts,
    pointwise_reconstruct,
    probabilities,
    probabilities_grid,
)

_MODULE = "tomography"

MODES = ("pointwise", "grid", "full", "compare3x3")
NORTH_POLE = phase_point(0.0, 0.0)
COMPARE_S = (1.0, 0.0, -1.0)  # P, W, Q
_S_LABEL = {1.0: "P", 0.0: "W", -1.0: "Q"}


@dataclass(frozen=True)
class ExperimentConfig:
    twice_J: int
    s: float
    n_states: int
    n_repetitions: tuple
    n_grid: int
    seed: int
    mode: str
    ensemble: str = "hs"

    def __post_init__(self):
        if self.mode not in MODES:
            raise DomainError(_MODULE, f"unknown mode {self.mode!r}, expected one of {MODES}")
        if self.ensemble not in ("hs", "pure"):
            raise DomainError(_MODULE, f"unknown ensemble {self.ensemble!r}")
        if self.n_states < 1 or not self.n_repetitions:
            raise DomainError(_MODULE, "need at least one state and one repetition count")
        if any(n < 0 for n in self.n_repetitions):
            raise DomainError(_MODULE, "repetition counts must be >= 0 (0 = exact probabilities)")

    @staticmethod
    def from_dict(d: dict) -> "ExperimentConfig":
        try:
            reps = d["N_r"]
            if isinstance(reps, (int, float)):
                reps = [reps]
            return ExperimentConfig(
                twice_J=int(d["twice_J"]),
                s=float(d["s"]),
                n_states=int(d["N_rho"]),
                n_repetitions=tuple(int(r) for r in reps),
                n_grid=int(d.get("N_p", 2 * int(d["twice_J"]) + 2)),
                seed=int(d["seed"]),
                mode=str(d["mode"]),
                ensemble=str(d.get("ensemble", "hs")),
            )
        except KeyError as exc:
            raise DomainError(_MODULE, f"experiment config missing key {exc}") from exc

    def to_dict(self) -> dict:
        return {
            "twice_J": self.twice_J,
            "s": self.s,
            "N_rho": self.n_states,
            "N_r": list(self.n_repetitions),
            "N_p": self.n_grid,
            "seed": self.seed,
            "mode": self.mode,
            "ensemble": self.ensemble,
        }


def stream(seed: int, *key: int) -> np.random.Generator:
    """Counter-based random stream: one master seed, integer spawn key."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=key))


def gaussian_fit(xs) -> tuple[float, float]:
    xs = np.asarray(xs, dtype=float)
    ddof = 1 if xs.size > 1 else 0
    return float(xs.mean()), float(xs.std(ddof=ddof))


def lognormal_fit(xs) -> tuple[float, float]:
    xs = np.asarray(xs, dtype=float)
    if xs.min() <= 0.0:
        raise DomainError(_MODULE, "log-normal fit requires strictly positive samples")
    logs = np.log(xs)
    ddof = 1 if xs.size > 1 else 0
    return float(logs.mean()), float(logs.std(ddof=ddof))


def skewness(xs) -> float:
    xs = np.asarray(xs, dtype=float)
    centered = xs - xs.mean()
    m2 = float(np.mean(centered**2))
    m3 = float(np.mean(centered**3))
    return m3 / m2**1.5 if m2 > 0 else 0.0


def loglog_slope(ns, stats) -> float:
    """Least-squares slope of log(stat) against log(n)."""
    x = np.log(np.asarray(ns, dtype=float))
    y = np.log(np.asarray(stats, dtype=float))
    x = x - x.mean()
    return float((x @ (y - y.mean())) / (x @ x))


def bootstrap_sigma_ratio(numer, denom, n_boot: int = 2000, seed: int = 0):
    """Paired bootstrap CI for std(numer)/std(denom) over matched states."""
    numer = np.asarray(numer, dtype=float)
    denom = np.asarray(denom, dtype=float)
    if numer.size != denom.size:
        raise DomainError(_MODULE, "sigma ratio needs paired samples")
    rng = stream(seed, 9)
    n = numer.size
    ratios = np.empty(n_boot)
    for b in range(n_boot):
        idx = rng.integers(0, n, size=n)
        ratios[b] = numer[idx].std(ddof=1) / denom[idx].std(ddof=1)
    point = float(numer.std(ddof=1) / denom.std(ddof=1))
    lo, hi = np.percentile(ratios, [2.5, 97.5])
    return point, float(lo), float(hi)


@dataclass
class EnsembleErrorReport:
    config: dict
    mode: str
    results: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(
            {"config": self.config, "mode": self.mode, "results": self.results},
            sort_keys=True,
            separators=(",", ":"),
        )


def _make_state(config: ExperimentConfig, index: int):
    gen = stream(config.seed, 1, index)
    J = HalfInteger(config.twice_J)
    if config.ensemble == "pure":
        return random_pure(J, gen).density()
    return random_hs(J, gen)


class _GridSampler:
    """Per-(state, grid-point) streams; successive draws advance each stream."""

    def __init__(self, probs: np.ndarray, seed: int, state_idx: int):
        self.probs = probs
        n = probs.shape[0]
        self.gens = [
            [stream(seed, 2, state_idx, k * n + q) for q in range(n)] for k in range(n)
        ]

    def draw(self, n_rep: int) -> np.ndarray:
        n, _, dim = self.probs.shape
        counts = np.empty((n, n, dim), dtype=np.int64)
        for k in range(n):
            for q in range(n):
                counts[k, q] = multinomial_counts(self.probs[k, q], n_rep, self.gens[k][q])
        return counts


def _reconstructed_values(counts: np.ndarray, n_rep: int, weights: np.ndarray) -> np.ndarray:
    return (counts @ weights) / float(n_rep)


def _pointwise_state(config: ExperimentConfig, index: int) -> dict:
    rho = _make_state(config, index)
    ideal_f = to_spherical_coeffs(rho, config.s)
    ideal_value = evaluate_series(ideal_f, NORTH_POLE)
    eta = function_max(ideal_f)
    p = probabilities(rho, NORTH_POLE)
    gen = stream(config.seed, 2, index, 0)
    errors = {}
    for n_rep in config.n_repetitions:
        if n_rep == 0:  # exact-probability mode
            estimate = pointwise_reconstruct(p, config.s)
        else:
            counts = multinomial_counts(p, n_rep, gen)
            estimate = pointwise_reconstruct(counts / float(n_rep), config.s)
        errors[n_rep] = (estimate - ideal_value) / eta
    return errors


def _grid_state(config: ExperimentConfig, index: int) -> dict:
    rho = _make_state(config, index)
    grid = GridSpec(config.n_grid).validate_for(config.twice_J)
    ideal_f = to_spherical_coeffs(rho, config.s)
    eta = function_max(ideal_f)
    weights = parity_operator(rho.J, config.s).diag
    probs = probabilities_grid(rho, grid)
    ideal_values = probs @ weights
    sampler = _GridSampler(probs, config.seed, index)
    errors = {}
    for n_rep in config.n_repetitions:
        if n_rep == 0:
            values = ideal_values
        else:
            values = _reconstructed_values(sampler.draw(n_rep), n_rep, weights)
        errors[n_rep] = float(np.abs(values - ideal_values).mean() / eta)
    return errors


def _full_state(config: ExperimentConfig, index: int) -> dict:
    rho = _make_state(config, index)
    grid = GridSpec(config.n_grid).validate_for(config.twice_J)
    ideal_f = to_spherical_coeffs(rho, config.s)
    norm = function_l2(ideal_f)
    weights = parity_operator(rho.J, config.s).diag
    probs = probabilities_grid(rho, grid)
    ideal_values = probs @ weights
    sampler = _GridSampler(probs, config.seed, index)
    errors = {}
    for n_rep in config.n_repetitions:
        if n_rep == 0:
            values = ideal_values
        else:
            values = _reconstructed_values(sampler.draw(n_rep), n_rep, weights)
        recon = full_tomography(values, grid, rho.J, config.s)
        delta = recon.coeffs - ideal_f.coeffs
        errors[n_rep] = float(
            ideal_f.sphere_radius * np.linalg.norm(delta) / norm
        )
    return errors


def _compare_state(config: ExperimentConfig, index: int) -> dict:
    rho = _make_state(config, index)
    grid = GridSpec(config.n_grid).validate_for(config.twice_J)
    n_rep = config.n_repetitions[0]
    probs = probabilities_grid(rho, grid)
    counts = _GridSampler(probs, config.seed, index).draw(n_rep)
    ideal = {s: to_spherical_coeffs(rho, s) for s in COMPARE_S}
    ideal_at_pole = {s: evaluate_series(ideal[s], NORTH_POLE) for s in COMPARE_S}
    eta = {s: function_max(ideal[s]) for s in COMPARE_S}
    l2 = {s: function_l2(ideal[s]) for s in COMPARE_S}
    out = {}
    for s_rec in COMPARE_S:
        weights = parity_operator(rho.J, s_rec).diag
        values = _reconstructed_values(counts, n_rep, weights)
        recon = full_tomography(values, grid, rho.J, s_rec)
        for s_tgt in COMPARE_S:
            mapped = recon if s_tgt == s_rec else transform_s(recon, s_tgt - s_rec + 1.0)
            point_err = (evaluate_series(mapped, NORTH_POLE) - ideal_at_pole[s_tgt]) / eta[s_tgt]
            delta = mapped.coeffs - ideal[s_tgt].coeffs
            l2_err = float(ideal[s_tgt].sphere_radius * np.linalg.norm(delta) / l2[s_tgt])
            out[(s_rec, s_tgt)] = (float(point_err), l2_err)
    return out


_STATE_WORKERS = {
    "pointwise": _pointwise_state,
    "grid": _grid_state,
    "full": _full_state,
    "compare3x3": _compare_state,
}


def run_ensemble_experiment(config: ExperimentConfig, threads: int = 1) -> EnsembleErrorReport:
    """Run the configured experiment; identical config and seed give
    identical report bytes regardless of thread count."""
    worker = _STATE_WORKERS[config.mode]
    indices = range(config.n_states)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_state = list(pool.map(lambda i: worker(config, i), indices))
    else:
        per_state = [worker(config, i) for i in indices]

    report = EnsembleErrorReport(config=config.to_dict(), mode=config.mode)
    if config.mode == "compare3x3":
        cells = {}
        for s_rec in COMPARE_S:
            for s_tgt in COMPARE_S:
                pts = [st[(s_rec, s_tgt)][0] for st in per_state]
                l2s = [st[(s_rec, s_tgt)][1] for st in per_state]
                mu, sigma = gaussian_fit(pts)
                cell = {
                    "pointwise_errors": pts,
                    "l2_errors": l2s,
                    "pointwise_mu": mu,
                    "pointwise_sigma": sigma,
                    "l2_mean": float(np.mean(l2s)),
                }
                cells[f"{_S_LABEL[s_rec]}->{_S_LABEL[s_tgt]}"] = cell
        report.results["cells"] = cells
        report.results["n_repetitions"] = config.n_repetitions[0]
        return report

    by_rep = {}
    for n_rep in config.n_repetitions:
        errs = [st[n_rep] for st in per_state]
        entry = {"errors": errs}
        if config.mode == "full":
            entry["mean"] = float(np.mean(errs))
            if min(errs) > 0.0:  # exact-mode errors can be identically zero
                mu, sigma = lognormal_fit(errs)
                entry["lognormal_mu"] = mu
                entry["lognormal_sigma"] = sigma
        else:
            mu, sigma = gaussian_fit(errs)
            entry["gaussian_mu"] = mu
            entry["gaussian_sigma"] = sigma
            entry["mean_abs"] = float(np.mean(np.abs(errs)))
            entry["skewness"] = skewness(errs)
        by_rep[str(n_rep)] = entry
    report.results["by_repetitions"] = by_rep

    ns = [n for n in config.n_repetitions if n > 0]
    if len(ns) >= 2:
        scaling = {}
        if config.mode == "full":
            scaling["mean_slope"] = loglog_slope(ns, [by_rep[str(n)]["mean"] for n in ns])
        else:
            scaling["sigma_slope"] = loglog_slope(
                ns, [by_rep[str(n)]["gaussian_sigma"] for n in ns]
            )
            scaling["mean_abs_slope"] = loglog_slope(
                ns, [by_rep[str(n)]["mean_abs"] for n in ns]
            )
        report.results["scaling"] = scaling

    if config.mode == "pointwise":
        pooled = []
        for n_rep in config.n_repetitions:
            entry = by_rep[str(n_rep)]
            sigma = entry["gaussian_sigma"]
            if sigma > 0:
                pooled.extend((np.asarray(entry["errors"]) - entry["gaussian_mu"]) / sigma)
        if pooled:
            report.results["pooled_skewness"] = skewness(pooled)
    return report
