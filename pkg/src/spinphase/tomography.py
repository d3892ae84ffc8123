"""Stern-Gerlach probability model, shot-noise sampling, and reconstruction.

Pointwise reconstruction contracts measured outcome frequencies with the
diagonal parity weights; full reconstruction recovers every spherical
harmonic coefficient from an equiangular grid with N_p >= 4J+2 samples per
axis; density-matrix recovery integrates the rotated dual parity operator
against the phase-space function with Gauss-Legendre x uniform quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, IntegrityError
from .halfint import HalfInteger, half_integer
from .parity import log_gamma_coefficients, parity_operator, radon_parity, sphere_radius
from .phasespace import (
    PhasePoint,
    SphericalFunction,
    coeff_index,
    evaluate_product_grid,
    phase_point,
    rotated_diagonal,
)
from .specialfn import _tri_index, norm_assoc_legendre, projection_values, wigner_small_d
from .states import DensityMatrix

_MODULE = "tomography"

PROB_SUM_TOL = 1e-10
PROB_NEG_TOL = 1e-10
TRACE_GATE = 1e-6


@dataclass(frozen=True)
class SternGerlachRecord:
    """Outcome counts of repeated measurements at one phase-space point."""

    point: PhasePoint
    counts: np.ndarray  # N_m for m = J..-J
    repetitions: int

    def frequencies(self) -> np.ndarray:
        return self.counts / float(self.repetitions)


@dataclass(frozen=True)
class GridSpec:
    """Equiangular grid theta_k = pi*k/N_p, phi_q = 2*pi*q/N_p, k,q < N_p."""

    n_points: int

    def __post_init__(self):
        if self.n_points % 2 != 0 or self.n_points < 2:
            raise DomainError(_MODULE, f"grid size must be even and >= 2, got {self.n_points}")

    @property
    def thetas(self) -> np.ndarray:
        return math.pi * np.arange(self.n_points) / self.n_points

    @property
    def phis(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.n_points) / self.n_points

    def validate_for(self, twice_j: int) -> "GridSpec":
        if self.n_points < 2 * twice_j + 2:
            raise DomainError(
                _MODULE,
                f"grid size {self.n_points} below the sampling bound 4J+2 = {2 * twice_j + 2}",
            )
        return self


@dataclass(frozen=True)
class GridSamples:
    grid: GridSpec
    values: np.ndarray  # shape (N_p, N_p), row-major in k then q


def probabilities(rho: DensityMatrix, point) -> np.ndarray:
    """Stern-Gerlach probabilities p_m = <Jm| R^dag rho R |Jm>, renormalized."""
    w = rotated_diagonal(rho, point)
    if w.min() < -PROB_NEG_TOL:
        raise IntegrityError(_MODULE, f"probability {w.min()} below -{PROB_NEG_TOL}")
    w = np.clip(w, 0.0, None)
    total = w.sum()
    if abs(total - 1.0) > PROB_SUM_TOL:
        raise IntegrityError(_MODULE, f"probabilities sum to {total}, expected 1")
    return w / total


def probabilities_grid(rho: DensityMatrix, grid: GridSpec) -> np.ndarray:
    """p_m at every grid node, shape (N_p, N_p, 2J+1).

    Shares one small-d matrix per theta ring; the phi dependence enters only
    through phase factors on the density matrix.
    """
    m = projection_values(rho.J)
    phis = grid.phis
    # rho with phi phases folded in: rho_ab * exp(i*(m_b - m_a)*phi_q)
    phase = np.exp(1j * phis[:, None, None] * (m[None, None, :] - m[None, :, None]))
    rho_q = rho.matrix[None, :, :] * phase
    out = np.empty((grid.n_points, grid.n_points, rho.dim))
    for k, theta in enumerate(grid.thetas):
        dt = wigner_small_d(rho.J, float(theta)).T
        w = np.einsum("ai,qab,bi->qi", dt, rho_q, dt).real
        out[k] = np.clip(w, 0.0, None)
    sums = out.sum(axis=2, keepdims=True)
    if np.abs(sums - 1.0).max() > PROB_SUM_TOL:
        raise IntegrityError(_MODULE, "grid probabilities do not sum to 1")
    return out / sums


def multinomial_counts(p: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Multinomial draw by sequential conditional binomials."""
    counts = np.zeros(p.size, dtype=np.int64)
    remaining = int(n)
    tail = 1.0
    for m in range(p.size - 1):
        q = 1.0 if tail <= 0.0 else min(1.0, max(0.0, p[m] / tail))
        c = int(rng.binomial(remaining, q)) if remaining > 0 else 0
        counts[m] = c
        remaining -= c
        tail = max(tail - p[m], 0.0)
    counts[-1] = remaining
    return counts


def sample_counts(rho: DensityMatrix, point, n_rep: int, stream) -> SternGerlachRecord:
    """Simulate n_rep Stern-Gerlach shots at one point; deterministic per stream."""
    if n_rep < 1:
        raise DomainError(_MODULE, f"sample_counts requires N_r >= 1, got {n_rep}")
    rng = stream if isinstance(stream, np.random.Generator) else np.random.default_rng(stream)
    p = probabilities(rho, point)
    pp = point if isinstance(point, PhasePoint) else phase_point(*point)
    counts = multinomial_counts(p, n_rep, rng)
    return SternGerlachRecord(pp, counts, int(n_rep))


def pointwise_reconstruct(data, s: float, radon: bool = False) -> float:
    """F_hat(Omega, s) = sum_m [M_s]_mm * (N_m / N_r) from counts or exact p_m."""
    if isinstance(data, SternGerlachRecord):
        freqs = data.frequencies()
    else:
        freqs = np.asarray(data, dtype=float)
    J = HalfInteger(freqs.size - 1)
    op = radon_parity(J, s) if radon else parity_operator(J, s)
    return float(op.diag @ freqs)


@lru_cache(maxsize=32)
def _dh_weights_cached(n_points: int) -> np.ndarray:
    k = np.arange(n_points)
    thetas = math.pi * k / n_points
    inner = np.zeros(n_points)
    for l in range(n_points // 2):
        inner += np.sin((2 * l + 1) * thetas) / (2 * l + 1)
    w = (2.0 * math.sqrt(2.0) / n_points) * np.sin(thetas) * inner
    w.setflags(write=False)
    return w

def dh_weights(n_points: int) -> np.ndarray:
    """Equiangular latitude weights alpha_k; exact for band limits < N_p/2.

    alpha_k = (2*sqrt(2)/N_p) sin(theta_k) sum_{l<N_p/2} sin((2l+1)theta_k)/(2l+1).
    """
    if n_points % 2 != 0 or n_points < 2:
        raise DomainError(_MODULE, f"weights need an even N_p >= 2, got {n_points}")
    return _dh_weights_cached(n_points)


def full_tomography(values, grid: GridSpec, J, s: float) -> SphericalFunction:
    """Spherical-harmonics coefficients from grid samples of F(theta_k, phi_q, s).

    c_jm = (2*pi*sqrt(2)/N_p) sum_kq alpha_k F[k,q] conj(Y_jm(theta_k, phi_q)),
    evaluated with an FFT over phi and a weighted Legendre contraction over
    theta.  Exact for noiseless band-limited input.
    """
    J = half_integer(J).check_magnitude("J")
    if isinstance(values, GridSamples):
        if values.grid.n_points != grid.n_points:
            raise DomainError(_MODULE, "samples were taken on a different grid")
        values = values.values
    values = np.asarray(values, dtype=float)
    n = grid.n_points
    grid.validate_for(J.twice)
    if values.shape != (n, n):
        raise DomainError(_MODULE, f"grid values have shape {values.shape}, expected ({n}, {n})")
    alpha = dh_weights(n)
    fourier = np.fft.fft(values, axis=1)  # [k, r] = sum_q F e^{-2pi i r q / n}
    lam = norm_assoc_legendre(J.twice, np.cos(grid.thetas))
    scale = 2.0 * math.pi * math.sqrt(2.0) / n
    coeffs = np.zeros((J.twice + 1) ** 2, dtype=complex)
    for j in range(J.twice + 1):
        for m in range(-j, j + 1):
            row = lam[_tri_index(j, abs(m))]
            if m < 0:
                row = (-1) ** m * row
            coeffs[coeff_index(j, m)] = scale * np.sum(alpha * row * fourier[:, m % n])
    return SphericalFunction(J.twice, sphere_radius(J), coeffs, float(s))


def grid_values(rho: DensityMatrix, grid: GridSpec, s: float, radon: bool = False) -> np.ndarray:
    """Noiseless F(theta_k, phi_q, s) on the grid via the probability route."""
    probs = probabilities_grid(rho, grid)
    op = radon_parity(rho.J, s) if radon else parity_operator(rho.J, s)
    return probs @ op.diag


def density_quadrature(twice_j: int, n_theta: int | None = None, n_phi: int | None = None):
    """Gauss-Legendre x uniform-phi nodes integrating band limit 4J exactly.

    Returns (thetas, phis, theta_weights); the phi weight is 2*pi/n_phi.
    """
    if n_theta is None:
        n_theta = twice_j + 1
    if n_phi is None:
        n_phi = 2 * twice_j + 1
    if n_theta < twice_j + 1 or n_phi < 2 * twice_j + 1:
        raise DomainError(
            _MODULE,
            f"quadrature needs >= {twice_j + 1} theta and >= {2 * twice_j + 1} phi nodes",
        )
    x, w = np.polynomial.legendre.leggauss(n_theta)
    thetas = np.arccos(x)
    phis = 2.0 * math.pi * np.arange(n_phi) / n_phi
    return thetas, phis, w


def reconstruction_conditioning(twice_j: int, s: float) -> dict:
    """Conditioning report for density recovery from a type-s function.

    The recovery contracts with the dual parity operator M_{-s}, whose rank
    weights grow like gamma_j^s; reconstruction from the Q function (s = -1,
    dual M_{+1}) is the precarious direction.
    """
    ln_gamma = float(s) * log_gamma_coefficients(twice_j)
    dual_s = 0.0 if s == 0 else -float(s)
    dual = parity_operator(HalfInteger(twice_j), dual_s)
    return {
        "s": float(s),
        "dual_s": dual_s,
        "max_abs_weight": float(np.abs(dual.diag).max()),
        "rank_weight_spread": float(math.exp(ln_gamma.max() - ln_gamma.min())),
    }


def _density_from_values(values: np.ndarray, twice_j: int, s: float,
                         thetas, phis, theta_weights,
                         renormalize: bool = False) -> DensityMatrix:
    J = HalfInteger(twice_j)
    dual = parity_operator(J, -float(s)).diag
    radius = sphere_radius(J)
    m = projection_values(J)
    dim = twice_j + 1
    acc = np.zeros((dim, dim), dtype=complex)
    phi_weight = 2.0 * math.pi / len(phis)
    for i, theta in enumerate(thetas):
        dt = wigner_small_d(J, float(theta)).T
        core = (dt * dual[None, :]) @ dt.T  # R(theta,0) M R(theta,0)^dag
        for q, phi in enumerate(phis):
            phase = np.exp(1j * m * phi)
            rotated = (phase[:, None] * core) * np.conj(phase)[None, :]
            acc += (theta_weights[i] * phi_weight * values[i, q]) * rotated
    acc *= radius**2
    acc = (acc + acc.conj().T) / 2.0
    trace = float(np.trace(acc).real)
    if renormalize:
        # shot-noise route: the quadrature trace fluctuates like the counts;
        # only structural failures are rejected, then the trace is fixed up
        if abs(trace - 1.0) > 0.5:
            raise IntegrityError(_MODULE, f"reconstructed trace {trace} is structurally wrong")
        acc = acc / trace
    elif abs(trace - 1.0) > TRACE_GATE:
        raise IntegrityError(_MODULE, f"reconstructed trace {trace} deviates from 1 beyond {TRACE_GATE}")
    return DensityMatrix(J, acc)


def reconstruct_density(f: SphericalFunction, n_theta: int | None = None,
                        n_phi: int | None = None) -> DensityMatrix:
    """Recover rho = int F(Omega, s) R(Omega) M_{-s} R^dag(Omega) dOmega."""
    if f.s_tag is None:
        raise DomainError(_MODULE, "density recovery requires an s-tagged function")
    thetas, phis, w = density_quadrature(f.twice_J, n_theta, n_phi)
    values = evaluate_product_grid(f, thetas, phis)
    return _density_from_values(values, f.twice_J, f.s_tag, thetas, phis, w)


def reconstruct_density_from_probs(records: list[SternGerlachRecord], s: float,
                                   n_theta: int | None = None,
                                   n_phi: int | None = None) -> DensityMatrix:
    """One-pass recovery from Stern-Gerlach records on the quadrature grid.

    Records must cover the density_quadrature nodes in row-major order
    (theta outer, phi inner).
    """
    if not records:
        raise DomainError(_MODULE, "no measurement records given")
    twice_j = records[0].counts.size - 1
    thetas, phis, w = density_quadrature(twice_j, n_theta, n_phi)
    if len(records) != len(thetas) * len(phis):
        raise DomainError(
            _MODULE,
            f"{len(records)} records do not cover the {len(thetas)}x{len(phis)} quadrature grid",
        )
    values = np.empty((len(thetas), len(phis)))
    idx = 0
    for i, theta in enumerate(thetas):
        for q, phi in enumerate(phis):
            rec = records[idx]
            ang = rec.point.angles
            if abs(ang.theta - theta) > 1e-9 or abs(ang.phi - phi) > 1e-9:
                raise DomainError(
                    _MODULE,
                    f"record {idx} at ({ang.theta}, {ang.phi}) does not match node ({theta}, {phi})",
                )
            values[i, q] = pointwise_reconstruct(rec, s)
            idx += 1
    return _density_from_values(values, twice_j, s, thetas, phis, w, renormalize=True)
