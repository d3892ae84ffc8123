"""Evaluation of s-parametrized phase-space functions F_rho(Omega, s).

Two independent routes exist and are cross-tested: the direct route rotates
the state and contracts with the diagonal parity operator; the coefficient
route expands the function in spherical harmonics with band limit 2J.
The direct route is canonical for tomography, the coefficient route for
convolution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConditioningError, DomainError, IntegrityError
from .halfint import HalfInteger, RotationAngles, as_angles, half_integer
from .parity import log_gamma_coefficients, parity_operator, sphere_radius, tensor_op
from .specialfn import _tri_index, norm_assoc_legendre, rotation_matrix, sph_harm_rows
from .states import DensityMatrix, make_named_state

_MODULE = "phasespace"

REALITY_TOL = 1e-10
SERIES_IMAG_TOL = 1e-9
DIRECT_IMAG_TOL = 1e-10

_LN_OVERFLOW = 300.0 * math.log(10.0)


@dataclass(frozen=True)
class PhasePoint:
    angles: RotationAngles


def phase_point(theta: float, phi: float) -> PhasePoint:
    return PhasePoint(RotationAngles.canonical(theta, phi))


def _point_angles(point) -> RotationAngles:
    if isinstance(point, PhasePoint):
        return point.angles
    return as_angles(point)


def coeff_index(j: int, m: int) -> int:
    """Position of c_jm in the packed coefficient vector: j*j + j + m."""
    return j * j + j + m


@dataclass(frozen=True)
class SphericalFunction:
    """Band-limited function on the radius-R sphere, stored as c_jm.

    coeffs is the packed complex vector over 0 <= j <= 2J, |m| <= j with
    layout coeff_index(j, m); s_tag records which s-representation this is
    (None for untagged functions).
    """

    twice_J: int
    sphere_radius: float
    coeffs: np.ndarray
    s_tag: float | None = None

    def get(self, j: int, m: int) -> complex:
        if not (0 <= j <= self.twice_J) or abs(m) > j:
            raise DomainError(_MODULE, f"coefficient (j={j}, m={m}) outside band limit {self.twice_J}")
        return complex(self.coeffs[coeff_index(j, m)])

    def with_coeffs(self, coeffs: np.ndarray, s_tag=None) -> "SphericalFunction":
        return SphericalFunction(self.twice_J, self.sphere_radius, coeffs, s_tag)


def spherical_function(twice_J: int, coeffs, s_tag=None) -> SphericalFunction:
    coeffs = np.asarray(coeffs, dtype=complex)
    expected = (twice_J + 1) ** 2
    if coeffs.shape != (expected,):
        raise DomainError(
            _MODULE,
            f"coefficient vector has length {coeffs.shape}, band limit {twice_J} needs {expected}",
        )
    radius = sphere_radius(half_integer(twice_J / 2.0))
    return SphericalFunction(twice_J, radius, coeffs, s_tag)


def validate_reality(f: SphericalFunction, tol: float = REALITY_TOL) -> SphericalFunction:
    """Check c_jm^* = (-1)^m c_{j,-m}, the reality condition of Hermitian operators."""
    scale = max(1.0, float(np.abs(f.coeffs).max()))
    for j in range(f.twice_J + 1):
        for m in range(0, j + 1):
            lhs = np.conj(f.coeffs[coeff_index(j, m)])
            rhs = (-1) ** m * f.coeffs[coeff_index(j, -m)]
            if abs(lhs - rhs) > tol * scale:
                raise IntegrityError(
                    _MODULE, f"reality condition violated at (j={j}, m={m}): |delta| = {abs(lhs - rhs)}"
                )
    return f


def _gamma_powers(twice_j: int, exponent: float) -> np.ndarray:
    """gamma_j^exponent for j = 0..2J with an overflow guard naming j."""
    ln = exponent * log_gamma_coefficients(twice_j)
    worst = int(np.argmax(ln))
    if ln[worst] > _LN_OVERFLOW:
        raise ConditioningError(
            _MODULE,
            f"gamma_j^{exponent} exceeds 1e300 at rank j = {worst} (2J = {twice_j})",
            j=worst,
        )
    return np.exp(ln)


def rotated_diagonal(rho: DensityMatrix, point) -> np.ndarray:
    """<Jm| R^dag rho R |Jm> for m = J..-J; real up to a checked residue."""
    u = rotation_matrix(rho.J, _point_angles(point))
    w = np.einsum("ai,ab,bi->i", u.conj(), rho.matrix, u)
    residue = float(np.abs(w.imag).max())
    if residue > DIRECT_IMAG_TOL:
        raise IntegrityError(_MODULE, f"rotated diagonal has imaginary residue {residue}")
    return w.real


def evaluate_direct(rho: DensityMatrix, point, s: float) -> float:
    """F_rho(Omega, s) as the expectation value of the rotated parity operator."""
    weights = parity_operator(rho.J, s).diag
    return float(weights @ rotated_diagonal(rho, point))


def to_spherical_coeffs(rho: DensityMatrix, s: float) -> SphericalFunction:
    """Expansion coefficients c_jm = (-1)^m Tr(rho T_jm) * gamma_j^{-s} / R.

    Fixed by the requirement that the series reproduces the rotated-parity
    route exactly: with the plus-sign rotation exp(i*phi*Jz) exp(i*theta*Jy)
    the rotated T_j0 expands as sqrt(4*pi/(2j+1)) sum_m (-1)^m Y_jm T_jm,
    so the coefficient of Y_jm picks up Tr(rho T_{j,-m}^dag) = (-1)^m Tr(rho T_jm).
    """
    twice_j = rho.J.twice
    radius = sphere_radius(rho.J)
    inv_weight = _gamma_powers(twice_j, -float(s)) / radius
    coeffs = np.zeros((twice_j + 1) ** 2, dtype=complex)
    for j in range(twice_j + 1):
        for m in range(-j, j + 1):
            t = tensor_op(rho.J, j, m)
            sign = -1.0 if m % 2 else 1.0
            coeffs[coeff_index(j, m)] = sign * np.einsum("ab,ba->", rho.matrix, t) * inv_weight[j]
    return SphericalFunction(twice_j, radius, coeffs, float(s))


def kernel_function(J, s: float) -> SphericalFunction:
    """Spin-up representation: axially symmetric with
    c_j0 = sqrt((2j+1)/(4*pi)) * gamma_j^{1-s} / R^2; at s = 1 this is the
    band-limited spherical delta."""
    J = half_integer(J)
    if J.twice <= 0:
        raise DomainError(_MODULE, f"kernel function requires J > 0, got {J}")
    twice_j = J.twice
    radius = sphere_radius(J)
    powers = _gamma_powers(twice_j, 1.0 - float(s))
    coeffs = np.zeros((twice_j + 1) ** 2, dtype=complex)
    for j in range(twice_j + 1):
        coeffs[coeff_index(j, 0)] = (
            math.sqrt((2 * j + 1) / (4.0 * math.pi)) * powers[j] / radius**2
        )
    return SphericalFunction(twice_j, radius, coeffs, float(s))


def evaluate_points(f: SphericalFunction, thetas, phis) -> np.ndarray:
    """Series evaluation at arbitrary point lists (vectorized)."""
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    phis = np.atleast_1d(np.asarray(phis, dtype=float))
    rows = sph_harm_rows(f.twice_J, thetas, phis)
    values = f.coeffs @ rows
    if values.size == 0:
        return values.real
    residue = float(np.abs(values.imag).max())
    scale = max(1.0, float(np.abs(values.real).max()))
    if residue > SERIES_IMAG_TOL * scale:
        raise IntegrityError(_MODULE, f"series evaluation has imaginary residue {residue}")
    return values.real


def evaluate_series(f: SphericalFunction, point) -> float:
    """F(theta, phi) from the coefficient expansion at a single point."""
    ang = _point_angles(point)
    return float(evaluate_points(f, [ang.theta], [ang.phi])[0])


def evaluate_product_grid(f: SphericalFunction, thetas, phis) -> np.ndarray:
    """Values on the product grid thetas x phis, shape (len(thetas), len(phis)).

    Separable evaluation: one Legendre pass over theta, one Fourier pass
    over phi.  Much cheaper than evaluating every grid point independently.
    """
    thetas = np.asarray(thetas, dtype=float)
    phis = np.asarray(phis, dtype=float)
    jmax = f.twice_J
    lam = norm_assoc_legendre(jmax, np.cos(thetas))
    orders = np.arange(-jmax, jmax + 1)
    g = np.zeros((orders.size, thetas.size), dtype=complex)
    for m in orders:
        m = int(m)
        gm = np.zeros(thetas.size, dtype=complex)
        sign = -1.0 if m % 2 else 1.0
        for j in range(abs(m), jmax + 1):
            row = lam[_tri_index(j, abs(m))]
            if m < 0:
                row = sign * row
            gm += f.coeffs[coeff_index(j, m)] * row
        g[m + jmax] = gm
    phase = np.exp(1j * np.outer(orders, phis))
    values = g.T @ phase
    return values.real


def integrate_sphere(f: SphericalFunction) -> float:
    """Integral over the radius-R sphere, exact in coefficients."""
    return float(f.sphere_radius**2 * math.sqrt(4.0 * math.pi) * f.coeffs[0].real)


def spherical_dot(f: SphericalFunction, g: SphericalFunction) -> complex:
    """L2 inner product int f * conj(g) dOmega = R^2 sum c_f conj(c_g)."""
    if f.twice_J != g.twice_J:
        raise DomainError(_MODULE, "inner product requires matching band limits")
    return complex(f.sphere_radius**2 * np.vdot(g.coeffs, f.coeffs))


def function_l2(f: SphericalFunction) -> float:
    return math.sqrt(max(spherical_dot(f, f).real, 0.0))


@lru_cache(maxsize=8)
def _max_grid(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.linspace(0.0, math.pi, n), np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)


def function_max(f: SphericalFunction, n: int = 512) -> float:
    """Global maximum of |f| located on a dense n x n product grid."""
    thetas, phis = _max_grid(n)
    return float(np.abs(evaluate_product_grid(f, thetas, phis)).max())


def planar_reference(name: str, alpha: complex) -> float:
    """Closed-form planar (infinite-dimensional) reference functions."""
    a2 = abs(alpha) ** 2
    if name == "vacuum_Q":
        return math.exp(-a2)
    if name == "vacuum_W":
        return 2.0 * math.exp(-2.0 * a2)
    if name == "single_photon_W":
        return 2.0 * (4.0 * a2 - 1.0) * math.exp(-2.0 * a2)
    raise DomainError(_MODULE, f"unknown planar reference {name!r}")


_LIMIT_PAIRS = {
    ("spin_up", -1.0): "vacuum_Q",
    ("spin_up", 0.0): "vacuum_W",
    ("dicke_one", 0.0): "single_photon_W",
}


def planar_limit_error(J, s: float, name: str, n_theta: int = 200) -> float:
    """Max |F_spin(theta) - F_planar(alpha(theta))| over theta in [0, pi/2].

    The planar coordinate is alpha = sqrt(pi) * a * exp(-i*phi) with arc
    length a = theta * R; comparisons are done on the phi = 0 meridian.
    """
    J = half_integer(J)
    key = (name, float(s))
    if key not in _LIMIT_PAIRS:
        raise DomainError(_MODULE, f"no planar limit defined for state {name!r} at s = {s}")
    planar_name = _LIMIT_PAIRS[key]
    if name == "spin_up":
        f = kernel_function(J, s)
    else:
        dicke = make_named_state("dicke", J, m=HalfInteger(J.twice - 2))
        f = to_spherical_coeffs(dicke.density(), s)
    radius = sphere_radius(J)
    thetas = np.linspace(0.0, math.pi / 2.0, n_theta)
    spin_values = evaluate_points(f, thetas, np.zeros_like(thetas))
    alphas = math.sqrt(math.pi) * thetas * radius
    planar_values = np.array([planar_reference(planar_name, a) for a in alphas])
    return float(np.abs(spin_values - planar_values).max())
