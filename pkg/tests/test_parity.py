"""Gamma coefficients, tensor operators, and parity operator tests."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from spinphase.errors import ConditioningError, DomainError
from spinphase.halfint import HalfInteger
from spinphase.parity import (
    diag_tensor_entries,
    gamma,
    parity_operator,
    radon_parity,
    sphere_radius,
    tensor_op,
)
from spinphase.specialfn import legendre_p


def test_sphere_radius():
    assert sphere_radius(HalfInteger(2)) == pytest.approx(math.sqrt(1.0 / (2 * math.pi)))
    with pytest.raises(DomainError):
        sphere_radius(HalfInteger(0))


def test_gamma_spin_half_values():
    g = gamma(HalfInteger(1))
    # gamma_0 = sqrt(2J/(2J+1)); gamma_1 from the definition with R = 1/sqrt(4 pi)
    assert g.values[0] == pytest.approx(math.sqrt(0.5), rel=1e-14)
    assert g.values[1] == pytest.approx(1.0 / math.sqrt(6.0), rel=1e-14)


@pytest.mark.parametrize("twice_j", [1, 2, 7, 20, 61, 100])
def test_gamma_head_and_monotonicity(twice_j):
    g = gamma(HalfInteger(twice_j))
    assert g.values[0] == pytest.approx(math.sqrt(twice_j / (twice_j + 1.0)), rel=1e-12)
    assert np.all(np.diff(g.values) < 0.0)
    assert np.all(g.values > 0.0)


def test_gamma_matches_exact_factorial_oracle():
    # exact big-integer factorials, logs taken at the end
    for twice_j, j in ((5, 3), (20, 17), (100, 64)):
        radius = sphere_radius(HalfInteger(twice_j))
        num = math.factorial(twice_j) ** 2
        den = math.factorial(twice_j + j + 1) * math.factorial(twice_j - j)
        # gamma_j^2 = R^2 * 4pi * num / den
        shift = max(num.bit_length() - 53, 0)
        ln_num = math.log(num >> shift) + shift * math.log(2.0)
        shift_d = max(den.bit_length() - 53, 0)
        ln_den = math.log(den >> shift_d) + shift_d * math.log(2.0)
        expected = math.exp(0.5 * (ln_num - ln_den)) * radius * math.sqrt(4.0 * math.pi)
        assert gamma(HalfInteger(twice_j)).values[j] == pytest.approx(expected, rel=1e-12)


def test_gamma_requires_positive_j():
    with pytest.raises(DomainError):
        gamma(HalfInteger(0))


def test_tensor_identity_component():
    for twice_j in (1, 4, 9):
        t00 = tensor_op(HalfInteger(twice_j), 0, 0)
        assert_allclose(t00, np.eye(twice_j + 1) / math.sqrt(twice_j + 1.0), atol=1e-14)


@pytest.mark.parametrize("twice_j", [2, 5, 10])
def test_tensor_hilbert_schmidt_orthonormality(twice_j):
    # direct summation over all matrix elements
    J = HalfInteger(twice_j)
    ops = {}
    for j in range(twice_j + 1):
        for m in range(-j, j + 1):
            ops[(j, m)] = tensor_op(J, j, m)
    keys = list(ops)
    for a in keys:
        for b in keys:
            inner = np.einsum("ab,ab->", ops[a].conj(), ops[b])
            expected = 1.0 if a == b else 0.0
            assert abs(inner - expected) < 1e-12


def test_tensor_j0_diagonal_matches_entries_helper():
    J = HalfInteger(7)
    for j in (0, 2, 5, 7):
        t = tensor_op(J, j, 0)
        assert np.abs(t - np.diag(np.diag(t))).max() == 0.0
        assert_allclose(np.diag(t).real, diag_tensor_entries(7, j), atol=1e-14)


def test_tensor_domain_errors():
    with pytest.raises(DomainError):
        tensor_op(HalfInteger(4), 5, 0)
    with pytest.raises(DomainError):
        tensor_op(HalfInteger(4), 2, 3)


def test_parity_q_is_spin_up_projector():
    # [M_{-1}]_mm = delta_mJ for all J in {1/2, 1, ..., 10}
    for twice_j in range(1, 21):
        diag = parity_operator(HalfInteger(twice_j), -1.0).diag
        expected = np.zeros(twice_j + 1)
        expected[0] = 1.0
        assert np.abs(diag - expected).max() < 1e-12
        assert diag.sum() == pytest.approx(1.0, abs=1e-12)


def test_parity_wigner_top_entry_approaches_two():
    tops = []
    for twice_j in (4, 10, 20, 40, 80):
        tops.append(parity_operator(HalfInteger(twice_j), 0.0).diag[0])
    gaps = [abs(t - 2.0) for t in tops]
    assert all(a > b for a, b in zip(gaps, gaps[1:]))
    assert all(t < 2.0 for t in tops)  # approaches 2 from below


def test_parity_requires_positive_j():
    with pytest.raises(DomainError):
        parity_operator(HalfInteger(0), 0.0)


def test_parity_overflow_guard_names_rank():
    with pytest.raises(ConditioningError) as err:
        parity_operator(HalfInteger(40), 200.0)
    assert err.value.j is not None
    assert err.value.code == "conditioning"


def test_radon_parity_drops_odd_ranks():
    # building with even ranks only gives the identical diagonal
    twice_j = 7
    s = 0.0
    got = radon_parity(HalfInteger(twice_j), s).diag
    radius = sphere_radius(HalfInteger(twice_j))
    g = gamma(HalfInteger(twice_j)).values
    manual = np.zeros(twice_j + 1)
    for j in range(0, twice_j + 1, 2):
        manual += (
            math.sqrt((2 * j + 1) / (4 * math.pi))
            * legendre_p(j, 0.0)
            * g[j] ** -s
            * diag_tensor_entries(twice_j, j)
            / radius
        )
    assert_allclose(got, manual, atol=1e-14)


def test_radon_parity_brute_force_j_five_half():
    # independent sum over j in {0, 2, 4} for J = 5/2, s = 0
    got = radon_parity(HalfInteger(5), 0.0).diag
    radius = sphere_radius(HalfInteger(5))
    g = gamma(HalfInteger(5)).values
    manual = np.zeros(6)
    for j in (0, 2, 4):
        manual += (
            math.sqrt((2 * j + 1) / (4 * math.pi))
            * legendre_p(j, 0.0)
            * diag_tensor_entries(5, j)
            / radius
        )
    assert_allclose(got, manual, atol=1e-14)


@pytest.mark.parametrize("twice_j", [2, 5, 11, 20])
def test_radon_parity_symmetric_under_m_flip(twice_j):
    diag = radon_parity(HalfInteger(twice_j), 0.5).diag
    assert_allclose(diag, diag[::-1], atol=1e-13)


def test_parity_diag_is_readonly():
    op = parity_operator(HalfInteger(5), 0.0)
    with pytest.raises(ValueError):
        op.diag[0] = 99.0
