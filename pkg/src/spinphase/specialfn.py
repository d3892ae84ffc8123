"""Exact-convention special functions.

Log-factorials, Legendre polynomials, orthonormal spherical harmonics with
the Condon-Shortley phase, Clebsch-Gordan coefficients, Wigner small-d
matrices, and the two-angle rotation operator exp(i*phi*Jz) exp(i*theta*Jy).

Conventions used throughout the package:
  * index order of matrices and vectors is m = J, J-1, ..., -J;
  * Y_jm are orthonormal on the unit sphere and satisfy
    conj(Y_jm) = (-1)^m Y_{j,-m};
  * d^J_{mm'}(theta) = <Jm| exp(-i*theta*Jy) |Jm'> is real orthogonal.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import DomainError
from .halfint import HalfInteger, as_angles, half_integer

_MODULE = "specialfn"
_LOG_FACTORIAL_TABLE_SIZE = 301
_LOG_FACTORIAL_TABLE = tuple(math.lgamma(n + 1) for n in range(_LOG_FACTORIAL_TABLE_SIZE))


def log_factorial(n: int) -> float:
    """ln(n!) from a precomputed table, falling back to lgamma beyond it."""
    if n < 0:
        raise DomainError(_MODULE, f"log_factorial requires n >= 0, got {n}")
    if n < _LOG_FACTORIAL_TABLE_SIZE:
        return _LOG_FACTORIAL_TABLE[n]
    return math.lgamma(n + 1)


def legendre_p(j: int, x):
    """Legendre polynomial P_j(x) for |x| <= 1 by the three-term recurrence.

    Accepts a scalar or an ndarray of evaluation points.  At x = 0 the odd
    polynomials vanish exactly because the x * P_j term is an exact zero.
    """
    if j < 0:
        raise DomainError(_MODULE, f"legendre_p requires j >= 0, got {j}")
    arr = np.asarray(x, dtype=float)
    if np.any(np.abs(arr) > 1.0):
        raise DomainError(_MODULE, "legendre_p requires |x| <= 1")
    p_prev = np.ones_like(arr)
    if j == 0:
        return float(p_prev) if np.isscalar(x) else p_prev
    p = arr.copy()
    for n in range(2, j + 1):
        p, p_prev = ((2 * n - 1) * arr * p - (n - 1) * p_prev) / n, p
    return float(p) if np.isscalar(x) else p


def legendre_sequence(jmax: int, x) -> np.ndarray:
    """P_0..P_jmax stacked along the first axis."""
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(np.abs(arr) > 1.0):
        raise DomainError(_MODULE, "legendre_sequence requires |x| <= 1")
    out = np.empty((jmax + 1,) + arr.shape)
    out[0] = 1.0
    if jmax >= 1:
        out[1] = arr
    for n in range(2, jmax + 1):
        out[n] = ((2 * n - 1) * arr * out[n - 1] - (n - 1) * out[n - 2]) / n
    return out


def _tri_index(j: int, m: int) -> int:
    return j * (j + 1) // 2 + m


def norm_assoc_legendre(jmax: int, x: np.ndarray) -> np.ndarray:
    """Orthonormalized associated Legendre functions for 0 <= m <= j <= jmax.

    Returns an array of shape (T, len(x)) with T = (jmax+1)(jmax+2)/2 and the
    (j, m) entry at row j*(j+1)/2 + m, such that
    Y_jm(theta, phi) = row[j, m](cos theta) * exp(i*m*phi) for m >= 0.
    The Condon-Shortley phase is carried by the sectoral seed.
    """
    x = np.asarray(x, dtype=float)
    sx = np.sqrt(np.clip(1.0 - x * x, 0.0, None))
    n_rows = (jmax + 1) * (jmax + 2) // 2
    out = np.zeros((n_rows, x.size))
    out[0] = 1.0 / math.sqrt(4.0 * math.pi)
    for m in range(1, jmax + 1):
        out[_tri_index(m, m)] = (
            -math.sqrt((2 * m + 1) / (2.0 * m)) * sx * out[_tri_index(m - 1, m - 1)]
        )
    for m in range(0, jmax):
        out[_tri_index(m + 1, m)] = math.sqrt(2 * m + 3) * x * out[_tri_index(m, m)]
    for m in range(0, jmax + 1):
        for l in range(m + 2, jmax + 1):
            a = math.sqrt((4.0 * l * l - 1.0) / (l * l - m * m))
            b = math.sqrt(((l - 1.0) ** 2 - m * m) / (4.0 * (l - 1.0) ** 2 - 1.0))
            out[_tri_index(l, m)] = a * (
                x * out[_tri_index(l - 1, m)] - b * out[_tri_index(l - 2, m)]
            )
    return out


def spherical_harmonic(j: int, m: int, angles) -> complex:
    """Orthonormal Y_jm with Condon-Shortley phase at the given angles.

    Negative orders are produced through the conjugation symmetry
    Y_{j,-m} = (-1)^m conj(Y_jm), which therefore holds exactly.
    """
    if j < 0 or abs(m) > j:
        raise DomainError(_MODULE, f"spherical_harmonic requires |m| <= j, got (j={j}, m={m})")
    if m < 0:
        return (-1) ** m * np.conj(spherical_harmonic(j, -m, angles))
    ang = as_angles(angles)
    lam = norm_assoc_legendre(j, np.array([math.cos(ang.theta)]))[_tri_index(j, m)][0]
    return complex(lam * np.exp(1j * m * ang.phi))


def sph_harm_rows(jmax: int, thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """Matrix Y[(j,m) packed as j*j + j + m, point] for arbitrary point lists."""
    thetas = np.asarray(thetas, dtype=float)
    phis = np.asarray(phis, dtype=float)
    lam = norm_assoc_legendre(jmax, np.cos(thetas))
    out = np.empty(((jmax + 1) ** 2, thetas.size), dtype=complex)
    for m in range(0, jmax + 1):
        phase = np.exp(1j * m * phis)
        for j in range(m, jmax + 1):
            row = lam[_tri_index(j, m)] * phase
            out[j * j + j + m] = row
            if m > 0:
                out[j * j + j - m] = (-1) ** m * np.conj(row)
    return out


def _exact_ln(numerator: int, denominator: int = 1) -> float:
    """ln(numerator/denominator) for arbitrarily large positive integers."""

    def ln_big(n: int) -> float:
        if n.bit_length() <= 53:
            return math.log(n)
        shift = n.bit_length() - 53
        return math.log(n >> shift) + shift * math.log(2.0)

    return ln_big(numerator) - ln_big(denominator)


@lru_cache(maxsize=None)
def _cg_twice(t2a: int, t2alpha: int, t2b: int, t2beta: int, t2c: int, t2gamma: int) -> float:
    """Clebsch-Gordan coefficient C^{c gamma}_{a alpha, b beta} on twice-values.

    Racah's single-sum formula with the alternating z-sum carried out in
    exact rational arithmetic; only the final square root is floating point.
    """
    if t2gamma != t2alpha + t2beta:
        return 0.0
    if abs(t2alpha) > t2a or abs(t2beta) > t2b or abs(t2gamma) > t2c:
        return 0.0
    if t2c < abs(t2a - t2b) or t2c > t2a + t2b or (t2a + t2b - t2c) % 2 != 0:
        return 0.0

    def f(t2: int) -> int:
        return math.factorial(t2 // 2)

    # triangle coefficient squared and the projection factorials, all exact
    pref = Fraction(
        (t2c + 1)
        * f(t2a + t2b - t2c)
        * f(t2a - t2b + t2c)
        * f(-t2a + t2b + t2c)
        * f(t2c + t2gamma)
        * f(t2c - t2gamma)
        * f(t2a + t2alpha)
        * f(t2a - t2alpha)
        * f(t2b + t2beta)
        * f(t2b - t2beta),
        f(t2a + t2b + t2c + 2),
    )

    z_min = max(0, (t2b - t2c - t2alpha) // 2, (t2a - t2c + t2beta) // 2)
    z_max = min((t2a + t2b - t2c) // 2, (t2a - t2alpha) // 2, (t2b + t2beta) // 2)
    total = Fraction(0)
    for z in range(z_min, z_max + 1):
        denom = (
            math.factorial(z)
            * f(t2a + t2b - t2c - 2 * z)
            * f(t2a - t2alpha - 2 * z)
            * f(t2b + t2beta - 2 * z)
            * f(t2c - t2b + t2alpha + 2 * z)
            * f(t2c - t2a - t2beta + 2 * z)
        )
        total += Fraction(-1 if z % 2 else 1, denom)
    if total == 0:
        return 0.0
    sign = 1.0 if total > 0 else -1.0
    total = abs(total)
    ln_val = 0.5 * _exact_ln(pref.numerator, pref.denominator) + _exact_ln(
        total.numerator, total.denominator
    )
    return sign * math.exp(ln_val)


def clebsch_gordan(j1, m1, j2, m2, j, m) -> float:
    """C^{jm}_{j1 m1, j2 m2} in the Condon-Shortley convention.

    Selection-rule failures (triangle, m != m1 + m2, out-of-range
    projections) return exactly 0; malformed half-integers raise.
    """
    j1, m1 = half_integer(j1), half_integer(m1)
    j2, m2 = half_integer(j2), half_integer(m2)
    j, m = half_integer(j), half_integer(m)
    for mag, proj in ((j1, m1), (j2, m2), (j, m)):
        mag.check_magnitude("j")
        if (proj.twice - mag.twice) % 2 != 0:
            raise DomainError(
                _MODULE, f"projection {proj} has wrong parity for magnitude {mag}"
            )
    return _cg_twice(j1.twice, m1.twice, j2.twice, m2.twice, j.twice, m.twice)


@lru_cache(maxsize=128)
def _small_d_cached(twice_j: int, theta: float) -> np.ndarray:
    """All d^J_{m'm}(theta) at once via the Jacobi-polynomial representation.

    The textbook alternating sum loses all significant digits for large J;
    the Jacobi form has a single positive prefactor and a stable degree
    recurrence, run vectorized over the whole (m', m) matrix.
    """
    dim = twice_j + 1
    t2 = twice_j - 2 * np.arange(dim)
    t2mp = t2[:, None]
    t2m = t2[None, :]
    jpm = (twice_j + t2m) // 2
    jmm = (twice_j - t2m) // 2
    jpmp = (twice_j + t2mp) // 2
    jmmp = (twice_j - t2mp) // 2
    k = np.minimum(np.minimum(jpm, jmm), np.minimum(jpmp, jmmp))
    # the corner that attains k fixes the (a, b) parameters and the sign
    up = (t2mp - t2m) // 2
    down = -up
    a = np.where((k == jpm) | ((k != jmm) & (k != jpmp)), up, down)
    sign = np.where((k == jmm) | (k == jpmp), 1.0, np.where(a % 2 == 0, 1.0, -1.0))
    b = twice_j - 2 * k - a

    lf = np.array(_LOG_FACTORIAL_TABLE[: twice_j + 1])
    if twice_j >= _LOG_FACTORIAL_TABLE_SIZE:
        lf = np.array([log_factorial(n) for n in range(twice_j + 1)])
    ln_pre = 0.5 * (lf[twice_j - k] - lf[k + a] - lf[k + b] + lf[k])
    half = 0.5 * theta
    pre = sign * np.exp(ln_pre) * math.sin(half) ** a * math.cos(half) ** b

    # degree recurrence for P_k^{(a,b)}(cos theta), selecting each element's k
    x = math.cos(theta)
    p_prev = np.ones_like(pre)
    value = p_prev.copy()
    if k.max() >= 1:
        p = 0.5 * (a - b) + 0.5 * (a + b + 2) * x
        value = np.where(k == 1, p, value)
        for n in range(2, int(k.max()) + 1):
            c1 = 2.0 * n * (n + a + b) * (2 * n + a + b - 2)
            c2 = (2 * n + a + b - 1) * ((2 * n + a + b) * (2 * n + a + b - 2) * x + a * a - b * b)
            c3 = 2.0 * (n + a - 1) * (n + b - 1) * (2 * n + a + b)
            p, p_prev = (c2 * p - c3 * p_prev) / c1, p
            value = np.where(k == n, p, value)
    out = pre * value
    out.setflags(write=False)
    return out


def wigner_small_d(J, theta: float) -> np.ndarray:
    """Real orthogonal d^J_{mm'}(theta) = <Jm| exp(-i*theta*Jy) |Jm'>.

    Rows and columns are ordered m = J, J-1, ..., -J; elementwise accuracy
    is ~1e-13 through J = 50.  The returned array is read-only because
    values are cached per (J, theta).
    """
    J = half_integer(J).check_magnitude("J")
    return _small_d_cached(J.twice, float(theta))


def projection_values(J: HalfInteger) -> np.ndarray:
    """Vector (J, J-1, ..., -J) as floats."""
    return (J.twice - 2.0 * np.arange(J.twice + 1)) / 2.0


def rotation_matrix(J, angles) -> np.ndarray:
    """Unitary matrix of R(theta, phi) = exp(i*phi*Jz) exp(i*theta*Jy).

    Elementwise [R]_{mm'} = exp(i*m*phi) d^J_{m'm}(theta): the plus sign in
    the theta exponential turns the small-d matrix into its transpose.
    """
    J = half_integer(J).check_magnitude("J")
    ang = as_angles(angles)
    d = wigner_small_d(J, ang.theta)
    phases = np.exp(1j * projection_values(J) * ang.phi)
    return phases[:, None] * d.T
