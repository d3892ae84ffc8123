"""Construction and validation of spin-J quantum states.

Amplitude and matrix indices always run m = J, J-1, ..., -J.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, IntegrityError
from .halfint import HalfInteger, half_integer
from .specialfn import projection_values

_MODULE = "spinstates"

NORM_TOL = 1e-12
HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10

# Random spin-4 pure state used in the reference figure set, m = 4..-4.
RND_J4_AMPLITUDES = (
    0.06 + 0.02j,
    -0.21 - 0.19j,
    0.04 + 0.27j,
    0.15 - 0.11j,
    0.28 - 0.28j,
    -0.33 - 0.25j,
    0.04 - 0.44j,
    -0.21 - 0.24j,
    -0.43 + 0.00j,
)


@dataclass(frozen=True)
class PureState:
    J: HalfInteger
    amplitudes: np.ndarray

    @property
    def dim(self) -> int:
        return self.J.twice + 1

    def density(self) -> "DensityMatrix":
        return DensityMatrix(self.J, np.outer(self.amplitudes, np.conj(self.amplitudes)))


@dataclass(frozen=True)
class DensityMatrix:
    J: HalfInteger
    matrix: np.ndarray

    @property
    def dim(self) -> int:
        return self.J.twice + 1


def validate_pure(state: PureState) -> PureState:
    if state.amplitudes.shape != (state.dim,):
        raise IntegrityError(
            _MODULE, f"amplitude vector has shape {state.amplitudes.shape}, expected ({state.dim},)"
        )
    norm = np.linalg.norm(state.amplitudes)
    if abs(norm - 1.0) > NORM_TOL:
        raise IntegrityError(_MODULE, f"state norm {norm} deviates from 1 beyond {NORM_TOL}")
    return state


def validate_density(rho: DensityMatrix) -> DensityMatrix:
    d = rho.dim
    if rho.matrix.shape != (d, d):
        raise IntegrityError(_MODULE, f"matrix has shape {rho.matrix.shape}, expected ({d}, {d})")
    if np.abs(rho.matrix - rho.matrix.conj().T).max() > HERMITICITY_TOL:
        raise IntegrityError(_MODULE, "density matrix is not Hermitian within tolerance")
    trace = np.trace(rho.matrix)
    if abs(trace - 1.0) > TRACE_TOL:
        raise IntegrityError(_MODULE, f"trace {trace} deviates from 1 beyond {TRACE_TOL}")
    eigmin = np.linalg.eigvalsh(rho.matrix).min()
    if eigmin < -PSD_TOL:
        raise IntegrityError(_MODULE, f"negative eigenvalue {eigmin} below -{PSD_TOL}")
    return rho


def angular_momentum(J) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Matrices (Jx, Jy, Jz) in the m = J..-J basis, [Jx, Jy] = i*Jz."""
    J = half_integer(J).check_magnitude("J")
    m = projection_values(J)
    jj = J.value
    dim = J.twice + 1
    jz = np.diag(m.astype(complex))
    jplus = np.zeros((dim, dim), dtype=complex)
    for col in range(1, dim):
        # raising operator maps column state m to m+1, one superdiagonal up
        jplus[col - 1, col] = np.sqrt(jj * (jj + 1) - m[col] * (m[col] + 1))
    jminus = jplus.conj().T
    jx = (jplus + jminus) / 2.0
    jy = (jplus - jminus) / 2j
    return jx, jy, jz


def _basis_state(J: HalfInteger, m: HalfInteger) -> np.ndarray:
    amps = np.zeros(J.twice + 1, dtype=complex)
    amps[(J.twice - m.twice) // 2] = 1.0
    return amps


def make_named_state(name: str, J, **params) -> PureState:
    """Named states: spin_up, dicke(m=...), ghz, squeezed(angle=...), rnd_j4_fixture."""
    J = half_integer(J).check_magnitude("J")
    if name == "spin_up":
        amps = _basis_state(J, J)
    elif name == "dicke":
        m = half_integer(params["m"])
        if abs(m.twice) > J.twice or (m.twice - J.twice) % 2 != 0:
            raise DomainError(_MODULE, f"dicke projection m = {m} invalid for J = {J}")
        amps = _basis_state(J, m)
    elif name == "ghz":
        amps = np.zeros(J.twice + 1, dtype=complex)
        amps[0] = amps[-1] = 1.0 / np.sqrt(2.0)
    elif name == "squeezed":
        angle = float(params["angle"])
        _, jy, _ = angular_momentum(J)
        # one-axis twisting exp(-i*angle*Jy^2/2); exact exponential of the
        # Hermitian generator through its eigendecomposition
        evals, evecs = np.linalg.eigh(jy @ jy)
        unitary = (evecs * np.exp(-0.5j * angle * evals)) @ evecs.conj().T
        amps = unitary @ _basis_state(J, J)
    elif name == "rnd_j4_fixture":
        if J.twice != 8:
            raise DomainError(_MODULE, f"rnd_j4_fixture requires J = 4, got {J}")
        amps = np.array(RND_J4_AMPLITUDES, dtype=complex)
        amps = amps / np.linalg.norm(amps)
    else:
        raise DomainError(_MODULE, f"unknown named state {name!r}")
    return validate_pure(PureState(J, amps))


def random_pure(J, seed) -> PureState:
    """Haar-uniform pure state: normalized complex standard normals."""
    J = half_integer(J).check_magnitude("J")
    rng = np.random.default_rng(seed)
    dim = J.twice + 1
    amps = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureState(J, amps / np.linalg.norm(amps))


def random_hs(J, seed) -> DensityMatrix:
    """Hilbert-Schmidt random density matrix via the Ginibre construction."""
    J = half_integer(J).check_magnitude("J")
    rng = np.random.default_rng(seed)
    dim = J.twice + 1
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    w = g @ g.conj().T
    return DensityMatrix(J, w / np.trace(w).real)


def random_hermitian(J, seed, scale: float = 1.0) -> np.ndarray:
    """Random Hermitian matrix (not a state); used by pairing diagnostics."""
    J = half_integer(J).check_magnitude("J")
    rng = np.random.default_rng(seed)
    dim = J.twice + 1
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return scale * (g + g.conj().T) / 2.0


def maximally_mixed(J) -> DensityMatrix:
    J = half_integer(J).check_magnitude("J")
    dim = J.twice + 1
    return DensityMatrix(J, np.eye(dim, dtype=complex) / dim)
