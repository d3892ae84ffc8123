"""Forward and inverse spherical (Funk) Radon transform.

The forward transform is the great-circle mean: in harmonic space it
multiplies rank j by P_j(0), so all odd ranks are annihilated and only the
point-symmetric part of a function can ever be recovered.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ContractError, DomainError
from .halfint import as_angles
from .phasespace import SphericalFunction, coeff_index, evaluate_points
from .specialfn import legendre_sequence

_MODULE = "radon"

ODD_CONTENT_TOL = 1e-9


def _rank_norms(f: SphericalFunction) -> np.ndarray:
    norms = np.empty(f.twice_J + 1)
    for j in range(f.twice_J + 1):
        sl = slice(coeff_index(j, -j), coeff_index(j, j) + 1)
        norms[j] = np.linalg.norm(f.coeffs[sl])
    return norms


def radon_forward(f: SphericalFunction) -> SphericalFunction:
    """Great-circle mean of f; c_jm -> P_j(0) c_jm with exact zeros at odd j."""
    p0 = legendre_sequence(f.twice_J, np.array([0.0]))[:, 0]
    out = np.array(f.coeffs, dtype=complex)
    for j in range(f.twice_J + 1):
        sl = slice(coeff_index(j, -j), coeff_index(j, j) + 1)
        out[sl] *= p0[j]
    return f.with_coeffs(out, None)


def radon_inverse(g: SphericalFunction) -> SphericalFunction:
    """Divide even ranks by P_j(0); recovers the point-symmetric part only.

    Rejects inputs with significant odd-rank content, which cannot come from
    a forward transform.
    """
    norms = _rank_norms(g)
    total = float(np.linalg.norm(norms))
    odd = float(np.linalg.norm(norms[1::2]))
    if total > 0.0 and odd > ODD_CONTENT_TOL * total:
        raise ContractError(
            _MODULE,
            f"input has odd-rank content {odd / total:.3e} of total; not a Radon image",
        )
    p0 = legendre_sequence(g.twice_J, np.array([0.0]))[:, 0]
    out = np.array(g.coeffs, dtype=complex)
    for j in range(g.twice_J + 1):
        sl = slice(coeff_index(j, -j), coeff_index(j, j) + 1)
        if j % 2 == 1:
            out[sl] = 0.0
        else:
            out[sl] /= p0[j]
    return g.with_coeffs(out, None)


def great_circle_average(f: SphericalFunction, point, nodes: int = 4096) -> float:
    """Mean of f over the great circle orthogonal to the direction of `point`.

    Trapezoid rule on `nodes` equally spaced circle points; used as the
    quadrature oracle for the harmonic-space multiplier.
    """
    if nodes < 64:
        raise DomainError(_MODULE, f"great_circle_average needs nodes >= 64, got {nodes}")
    ang = as_angles(point.angles if hasattr(point, "angles") else point)
    st, ct = math.sin(ang.theta), math.cos(ang.theta)
    sp, cp = math.sin(ang.phi), math.cos(ang.phi)
    e1 = np.array([ct * cp, ct * sp, -st])
    e2 = np.array([-sp, cp, 0.0])
    t = 2.0 * math.pi * np.arange(nodes) / nodes
    pts = np.outer(np.cos(t), e1) + np.outer(np.sin(t), e2)
    thetas = np.arccos(np.clip(pts[:, 2], -1.0, 1.0))
    phis = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2.0 * math.pi)
    return float(evaluate_points(f, thetas, phis).mean())
