from __future__ import annotations

import mpmath
import numpy as np
import pytest

from hubbard_geometry import elliptic, lax
from hubbard_geometry.matrices import ComplexMatrix, permutation_matrix

from conftest import PREC, TOL

COUPLINGS = [1, 2, complex(1, 1)]


def test_structure_has_36_nonzeros():
    assert len(lax.lax_structure()) == 36
    w = elliptic.uniformize(elliptic.sample_lambdas(2, 1, seed=1)[0], 2, "sn", PREC)
    assert lax.lax_explicit(w.xc, w.yc, PREC).support() == {(r - 1, c - 1) for r, c in lax.lax_structure()}


def test_printed_entries():
    with mpmath.workprec(PREC + 16):
        x, y = mpmath.mpf("0.7"), mpmath.mpf("0.3")
        L = lax.lax_explicit(x, y, PREC)
        assert L.entry(4, 13) == x * x + y * y
        assert L.entry(7, 10) == 1


@pytest.mark.parametrize("U", COUPLINGS)
def test_regular_point_is_permutation(U):
    assert lax.lax_at(0, U, PREC) == permutation_matrix(4, PREC)


def test_pole_when_theta_vanishes():
    with pytest.raises(elliptic.PoleError):
        lax.lax_explicit(1, 1j, PREC)


def test_shastry_regular_point():
    L = lax.lax_shastry(lax.ShastryParams(1, 0, 1, 0, 0), PREC)
    ratio, defect = lax.proportionality_defect(L, permutation_matrix(4, PREC))
    assert defect == 0 and ratio != 0


def test_shastry_free_fermion_product():
    """h = 0, U = 0: the operator factorises into two six-vertex free-fermion Lax operators."""
    with mpmath.workprec(PREC + 16):
        a, b = mpmath.cos(mpmath.mpf("0.4")), mpmath.sin(mpmath.mpf("0.4"))
        L = lax.lax_shastry(lax.ShastryParams(a, b, 1, 0, 0), PREC).to_numpy()
        w = elliptic.uniformize(mpmath.mpf("0.4"), 0, "sn", PREC)
        ref = lax.lax_explicit(w.xc, w.yc, PREC).to_numpy()
        ratio = ref[0, 0] / L[0, 0]
        assert np.allclose(L * ratio, ref, atol=1e-14)


def test_shastry_constraint_violation():
    with pytest.raises(lax.ConstraintError):
        lax.lax_shastry(lax.ShastryParams(1, 1, 1, 0, 2), PREC)


@pytest.mark.parametrize("U", COUPLINGS + [3])
def test_shastry_equivalence(U):
    for lam in elliptic.sample_lambdas(U, 10, seed=21, prec=PREC):
        w = elliptic.uniformize(lam, U, "sn", PREC)
        A = lax.lax_shastry(lax.ShastryParams.from_weights(w.xc, w.yc, U, PREC), PREC)
        assert lax.proportionality_defect(lax.lax_explicit(w.xc, w.yc, PREC), A)[1] < TOL


def test_crossing_self_point():
    with mpmath.workprec(PREC + 16):
        K = elliptic.complete_K(mpmath.mpf(2) / mpmath.mpc(0, 4), PREC)
    assert lax.crossing_residual(K / 2, 2, PREC) < TOL


def test_crossing_random():
    for lam in elliptic.sample_lambdas(2, 20, seed=31, prec=PREC):
        assert lax.crossing_residual(lam, 2, PREC) < TOL


def test_crossing_mutated_M():
    M = lax.charge_conjugation(PREC, flip=(0, 3))
    lam = elliptic.sample_lambdas(2, 1, seed=31, prec=PREC)[0]
    assert lax.crossing_residual(lam, 2, PREC, M) > 0.1


def test_unitarity_regular_point():
    assert lax.unitarity_residual(0, 2, PREC) == 0


@pytest.mark.parametrize("U", COUPLINGS)
def test_unitarity_random(U):
    for lam in elliptic.sample_lambdas(U, 20, seed=41, prec=PREC):
        assert lax.unitarity_residual(lam, U, PREC) < TOL


@pytest.mark.parametrize("U", COUPLINGS)
def test_permuted_unitarity_fails(U):
    lams = elliptic.sample_lambdas(U, 5, seed=41, prec=PREC)
    assert max(lax.unitarity_residual(lam, U, PREC, permuted=True) for lam in lams) > 0.01


@pytest.mark.parametrize("N", [2, 3])
def test_transfer_matrices_commute(N):
    l1, l2 = elliptic.sample_lambdas(2, 2, seed=51, prec=PREC)
    T1 = lax.transfer_matrix(l1, 2, N, PREC)
    T2 = lax.transfer_matrix(l2, 2, N, PREC)
    assert lax.commutator_residual(T1, T2) < mpmath.mpf(2) ** -48


@pytest.mark.parametrize("N", [2, 3])
def test_transfer_commutes_with_hamiltonian(N):
    lam = elliptic.sample_lambdas(complex(1, 1), 1, seed=52, prec=PREC)[0]
    T = lax.transfer_matrix(lam, complex(1, 1), N, PREC)
    H = lax.spin_hamiltonian(N, complex(1, 1), PREC)
    assert lax.commutator_residual(T, H) < mpmath.mpf(2) ** -48


def test_transfer_single_site_trace():
    T = lax.transfer_matrix(0, 2, 1, PREC)
    assert T.dim == 4
    assert T.trace() == 4


def test_transfer_chain_length_limit():
    with pytest.raises(ValueError):
        lax.transfer_matrix(0.1, 2, 5, PREC)


def test_partition_symmetry():
    for lam in elliptic.sample_lambdas(2, 3, seed=61, prec=PREC):
        assert lax.partition_symmetry_residual(lam, 2, 2, PREC) < mpmath.mpf(2) ** -48


@pytest.mark.parametrize("N", [2, 3])
def test_hamiltonian_hermitian_traceless(N):
    H = lax.spin_hamiltonian(N, 3, PREC).to_numpy()
    assert np.allclose(H, H.conj().T)
    assert abs(np.trace(H)) < 1e-12


def test_hamiltonian_free_spectrum_symmetric():
    ev = np.sort(np.linalg.eigvalsh(lax.spin_hamiltonian(2, 0, PREC).to_numpy()))
    assert np.allclose(ev, -ev[::-1], atol=1e-12)


def test_matrix_type():
    assert isinstance(lax.lax_at(0.3, 2, PREC), ComplexMatrix)
