"""Gamma coefficients, tensor operators, and s-parametrized parity operators.

The diagonal parity operator M_s turns rotated Stern-Gerlach probabilities
into phase-space values; its Radon variant carries an extra Legendre factor
P_j(0) per rank and therefore drops all odd ranks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConditioningError, DomainError
from .halfint import HalfInteger, half_integer
from .specialfn import clebsch_gordan, legendre_sequence, log_factorial

_MODULE = "parity"

_LN_OVERFLOW = 300.0 * math.log(10.0)


def sphere_radius(J) -> float:
    """Phase-space sphere radius R = sqrt(J / (2*pi))."""
    J = half_integer(J)
    if J.twice <= 0:
        raise DomainError(_MODULE, f"sphere radius degenerates for J = {J}")
    return math.sqrt(J.value / (2.0 * math.pi))


@dataclass(frozen=True)
class GammaCoefficients:
    J: HalfInteger
    values: np.ndarray  # gamma_j for j = 0..2J
    sphere_radius: float


def log_gamma_coefficients(twice_j: int) -> np.ndarray:
    """ln(gamma_j) for j = 0..2J, assembled fully in the log domain.

    gamma_j = R * sqrt(4*pi) * (2J)! / sqrt((2J+j+1)! (2J-j)!), which reaches
    factorials of 4J+1 and therefore must never be formed directly.
    """
    if twice_j <= 0:
        raise DomainError(_MODULE, f"gamma coefficients require J > 0, got 2J = {twice_j}")
    radius = math.sqrt(twice_j / (4.0 * math.pi))
    js = np.arange(twice_j + 1)
    lf_plus = np.array([log_factorial(twice_j + j + 1) for j in js])
    lf_minus = np.array([log_factorial(twice_j - j) for j in js])
    return (
        math.log(radius)
        + 0.5 * math.log(4.0 * math.pi)
        + log_factorial(twice_j)
        - 0.5 * (lf_plus + lf_minus)
    )


def gamma(J) -> GammaCoefficients:
    J = half_integer(J)
    values = np.exp(log_gamma_coefficients(J.twice))
    values.setflags(write=False)
    return GammaCoefficients(J, values, sphere_radius(J))


def tensor_op(J, j: int, m: int) -> np.ndarray:
    """Irreducible tensor operator T_jm, orthonormal under Tr(A^dag B).

    [T_jm]_{m1 m2} = sqrt((2j+1)/(2J+1)) C^{J m1}_{J m2, j m}; nonzero only
    on the diagonal shifted by m.
    """
    J = half_integer(J).check_magnitude("J")
    if not (0 <= j <= J.twice) or abs(m) > j:
        raise DomainError(_MODULE, f"tensor_op requires 0 <= j <= 2J and |m| <= j, got (j={j}, m={m})")
    dim = J.twice + 1
    out = np.zeros((dim, dim), dtype=complex)
    scale = math.sqrt((2 * j + 1) / (J.twice + 1.0))
    for col in range(dim):
        t2m2 = J.twice - 2 * col
        t2m1 = t2m2 + 2 * m
        if abs(t2m1) > J.twice:
            continue
        row = (J.twice - t2m1) // 2
        out[row, col] = scale * clebsch_gordan(
            HalfInteger(J.twice),
            HalfInteger(t2m2),
            HalfInteger(2 * j),
            HalfInteger(2 * m),
            HalfInteger(J.twice),
            HalfInteger(t2m1),
        )
    return out


def diag_tensor_entries(twice_j: int, j: int) -> np.ndarray:
    """Diagonal of T_j0 in m = J..-J order (real)."""
    scale = math.sqrt((2 * j + 1) / (twice_j + 1.0))
    return scale * np.array(
        [
            clebsch_gordan(
                HalfInteger(twice_j),
                HalfInteger(t2m),
                HalfInteger(2 * j),
                HalfInteger(0),
                HalfInteger(twice_j),
                HalfInteger(t2m),
            )
            for t2m in range(twice_j, -twice_j - 1, -2)
        ]
    )


@dataclass(frozen=True)
class ParityOperator:
    J: HalfInteger
    s: float
    diag: np.ndarray  # [M]_mm for m = J..-J
    kind: str  # "standard" | "radon"


@lru_cache(maxsize=256)
def _parity_diag(twice_j: int, s: float, radon: bool) -> np.ndarray:
    ln_gamma = log_gamma_coefficients(twice_j)
    ln_radius = 0.5 * math.log(twice_j / (4.0 * math.pi))
    radon_factors = None
    if radon:
        radon_factors = legendre_sequence(twice_j, np.array([0.0]))[:, 0]
    diag = np.zeros(twice_j + 1)
    for j in range(twice_j + 1):
        if radon and j % 2 == 1:
            continue  # P_j(0) = 0 exactly for odd ranks
        ln_weight = 0.5 * math.log((2 * j + 1) / (4.0 * math.pi)) - s * ln_gamma[j] - ln_radius
        if ln_weight > _LN_OVERFLOW:
            raise ConditioningError(
                _MODULE,
                f"parity weight for rank j = {j} exceeds 1e300 at s = {s} (2J = {twice_j})",
                j=j,
            )
        term = math.exp(ln_weight) * diag_tensor_entries(twice_j, j)
        if radon:
            term = term * radon_factors[j]
        diag += term
    diag.setflags(write=False)
    return diag


def parity_operator(J, s: float) -> ParityOperator:
    """Diagonal parity operator M_s; M_{-1} is exactly the spin-up projector."""
    J = half_integer(J)
    if J.twice <= 0:
        raise DomainError(_MODULE, f"parity operator requires J > 0, got {J}")
    return ParityOperator(J, float(s), _parity_diag(J.twice, float(s), False), "standard")


def radon_parity(J, s: float) -> ParityOperator:
    """Radon parity operator: rank weights carry an extra P_j(0) factor."""
    J = half_integer(J)
    if J.twice <= 0:
        raise DomainError(_MODULE, f"radon parity requires J > 0, got {J}")
    return ParityOperator(J, float(s), _parity_diag(J.twice, float(s), True), "radon")
