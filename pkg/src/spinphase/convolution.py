"""Spherical convolution and the s-parameter transformation.

Convolution with an axially symmetric kernel is a per-rank multiplication in
the spherical-harmonics domain (Funk-Hecke); convolving with the spin-up
kernel of type s' maps a type-s function to type s + s' - 1.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConditioningError, ContractError, DomainError
from .parity import log_gamma_coefficients
from .phasespace import SphericalFunction, coeff_index

_MODULE = "convolution"

AXIAL_TOL = 1e-12
_LN_OVERFLOW = 300.0 * math.log(10.0)


def _axial_profile(kernel: SphericalFunction) -> np.ndarray:
    """k_j0 per rank after checking the Funk-Hecke axial-symmetry contract."""
    k0 = np.array([kernel.coeffs[coeff_index(j, 0)] for j in range(kernel.twice_J + 1)])
    off_axis = 0.0
    for j in range(kernel.twice_J + 1):
        for m in range(-j, j + 1):
            if m != 0:
                off_axis = max(off_axis, abs(kernel.coeffs[coeff_index(j, m)]))
    scale = float(np.abs(k0).max())
    if off_axis > AXIAL_TOL * max(scale, 1e-300):
        raise ContractError(
            _MODULE,
            f"kernel is not axially symmetric: max off-axis coefficient {off_axis} vs scale {scale}",
        )
    return k0


def convolve(kernel: SphericalFunction, f: SphericalFunction) -> SphericalFunction:
    """[kernel * f] with coefficients c_jm * k_j0 * R^2 * sqrt(4*pi/(2j+1))."""
    if kernel.twice_J != f.twice_J:
        raise DomainError(_MODULE, "kernel and function band limits differ")
    if abs(kernel.sphere_radius - f.sphere_radius) > 1e-12 * f.sphere_radius:
        raise DomainError(_MODULE, "kernel and function sphere radii differ")
    k0 = _axial_profile(kernel)
    out = np.array(f.coeffs, dtype=complex)
    r2 = f.sphere_radius**2
    for j in range(f.twice_J + 1):
        factor = k0[j] * r2 * math.sqrt(4.0 * math.pi / (2 * j + 1))
        sl = slice(coeff_index(j, -j), coeff_index(j, j) + 1)
        out[sl] *= factor
    s_tag = None
    if kernel.s_tag is not None and f.s_tag is not None:
        s_tag = f.s_tag + kernel.s_tag - 1.0
    return f.with_coeffs(out, s_tag)


def transform_s(f: SphericalFunction, s_prime: float) -> SphericalFunction:
    """Map a type-s function to type s + s' - 1: c_jm -> gamma_j^{1-s'} c_jm.

    Coefficient form of convolving with the spin-up kernel of type s';
    s' = 1 is the identity, s' < 1 deconvolves and amplifies high ranks.
    """
    if f.s_tag is None:
        raise DomainError(_MODULE, "transform_s requires an s-tagged function")
    exponent = 1.0 - float(s_prime)
    ln_gamma = exponent * log_gamma_coefficients(f.twice_J)
    worst = int(np.argmax(ln_gamma))
    if ln_gamma[worst] > _LN_OVERFLOW:
        raise ConditioningError(
            _MODULE,
            f"gamma_j^{exponent} exceeds 1e300 at rank j = {worst}",
            j=worst,
        )
    powers = np.exp(ln_gamma)
    out = np.array(f.coeffs, dtype=complex)
    for j in range(f.twice_J + 1):
        sl = slice(coeff_index(j, -j), coeff_index(j, j) + 1)
        out[sl] *= powers[j]
    return f.with_coeffs(out, f.s_tag + float(s_prime) - 1.0)


def deconvolution_condition(twice_J: int, s_prime: float) -> float:
    """Spread max_j / min_j of the multipliers gamma_j^{1-s'}.

    Reported as a diagnostic: large values mean high-rank noise in the input
    is inflated by the transformation.
    """
    ln_gamma = (1.0 - float(s_prime)) * log_gamma_coefficients(twice_J)
    return float(math.exp(ln_gamma.max() - ln_gamma.min()))
