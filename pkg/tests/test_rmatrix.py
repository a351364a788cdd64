from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest

from hubbard_geometry import elliptic, rmatrix
from hubbard_geometry.matrices import permutation_matrix
from hubbard_geometry.lax import proportionality_defect

from conftest import PREC, TOL, close

COUPLINGS = [1, 2, 3, complex(1, 1)]


def _pairs(U, n, seed):
    return list(zip(elliptic.sample_lambdas(U, n, seed=seed, prec=PREC, stream=0),
                    elliptic.sample_lambdas(U, n, seed=seed, prec=PREC, stream=1)))


def test_coincident_weights():
    lam = elliptic.sample_lambdas(2, 1, seed=3, prec=PREC)[0]
    w = rmatrix.weights(lam, lam, 2, PREC)
    for name, expected in (("a", 1), ("b", 0), ("bb", 0), ("d", 0), ("g", 1), ("h", 1), ("q", 1)):
        assert close(getattr(w, name), expected), name


def test_coincident_R_is_permutation():
    lam = elliptic.sample_lambdas(2, 1, seed=3, prec=PREC)[0]
    R = rmatrix.rmatrix_assemble(rmatrix.weights(lam, lam, 2, PREC), PREC)
    assert proportionality_defect(R, permutation_matrix(4, PREC))[1] < TOL


def test_layout():
    layout = rmatrix.rmatrix_layout()
    assert len(layout) == 36
    assert layout[(4, 4)] == "h-a" and layout[(7, 7)] == "q-g"
    assert layout[(8, 8)] == "bb"
    assert rmatrix.rmatrix_layout(printed=True)[(8, 8)] == "b"


@pytest.mark.parametrize("U", COUPLINGS)
def test_weights_satisfy_quadrics(U):
    for l1, l2 in _pairs(U, 10, 5):
        w = rmatrix.weights(l1, l2, U, PREC)
        with mpmath.workprec(PREC + 16):
            scale = max(abs(v) for v in w.as_dict().values()) ** 2
            for name, val in rmatrix.quadric_values(w, mpmath.mpc(U)).items():
                assert abs(val) < TOL * scale, name


def test_swapped_arguments_recomputed():
    l1, l2 = _pairs(2, 1, 8)[0]
    w12 = rmatrix.weights(l1, l2, 2, PREC)
    w21 = rmatrix.weights(l2, l1, 2, PREC)
    assert close(w21.d, -w12.d)
    assert close(w21.b, -w12.b) and close(w21.bb, -w12.bb)
    assert close(w21.a, w12.g) and close(w21.g, w12.a)
    assert close(w21.h, w12.q) and close(w21.q, w12.h)


@pytest.mark.parametrize("U", COUPLINGS)
def test_ybe(U):
    for l1, l2 in _pairs(U, 10, 13):
        assert rmatrix.ybe_residual(l1, l2, U, PREC) < TOL


def test_ybe_coincident():
    lam = elliptic.sample_lambdas(2, 1, seed=14, prec=PREC)[0]
    assert rmatrix.ybe_residual(lam, lam, 2, PREC) < TOL


def test_ybe_mutation_and_printed_layout_fail():
    l1, l2 = _pairs(2, 1, 15)[0]
    assert rmatrix.ybe_residual(l1, l2, 2, PREC, mutate_d=True) > 0.01
    assert rmatrix.ybe_residual(l1, l2, 2, PREC, printed_layout=True) > 0.01


def test_p4_value():
    p4 = rmatrix.appendixA_p()[3]
    assert p4(x1=1, y1=0, x2=1, y2=0) == 1


def test_p5_vanishes_at_coincident_points():
    p5 = rmatrix.appendixA_p()[4]
    assert p5.subs({"x2": p5.var("x1"), "y2": p5.var("y1")}).is_zero()


def test_p_ratios_match_weights():
    ps = rmatrix.appendixA_p()
    with mpmath.workprec(PREC + 16):
        for l1, l2 in _pairs(complex(1, 1), 10, 16):
            u1 = elliptic.uniformize(l1, complex(1, 1), "sn", PREC)
            u2 = elliptic.uniformize(l2, complex(1, 1), "sn", PREC)
            point = dict(x1=u1.xc, y1=u1.yc, x2=u2.xc, y2=u2.yc)
            w = rmatrix.weights_from_xy(u1.xc, u1.yc, u2.xc, u2.yc).as_dict()
            p4 = ps[3](**point)
            for name, p in zip(rmatrix.WEIGHT_NAMES, ps):
                assert close(p(**point) / p4, w[name]), name


def test_quadrics_exact():
    for ident in rmatrix.verify_quadrics_exact():
        assert ident.holds, ident.name


def test_quadrics_mutated():
    for ident in rmatrix.verify_quadrics_exact(mutate=True):
        assert not ident.holds, ident.name


def test_Q5_mutation_is_doubled_coupling():
    q5 = rmatrix.quadric_polys()["Q5"]
    mutated = rmatrix.mutate_coefficient(q5, rmatrix.QUADRIC_MUTATIONS["Q5"])
    assert mutated == q5.subs({"U": 2 * q5.var("U")})


def test_omega_at_regular_point():
    assert rmatrix.omega(1, 0, 2) == (0, 1)
    assert rmatrix.omega(Fraction(1), Fraction(0), Fraction(5)) == (0, 1)


def test_trava_exact_and_mutated():
    assert rmatrix.verify_trava().holds
    assert not rmatrix.verify_trava(mutate=True).holds


@pytest.mark.parametrize("U", [2, complex(1, 1)])
def test_trava_numeric(U):
    with mpmath.workprec(PREC + 16):
        for lam in elliptic.sample_lambdas(U, 20, seed=17, prec=PREC):
            w = elliptic.uniformize(lam, U, "sn", PREC)
            Um = mpmath.mpc(U)
            w1, w2 = rmatrix.omega(w.xc, w.yc, Um)
            scale = max(1, abs(w1), abs(w2)) ** 4
            assert abs(rmatrix.trava_value(w1, w2, Um)) < TOL * scale


def test_I2_generators():
    idents = rmatrix.verify_I2_generators()
    names = {i.name for i in idents}
    assert {"I2(1)", "I2(4)", "I2(7)"} <= names
    for ident in idents:
        assert ident.holds, ident.name


def test_I2_first_is_Q1():
    assert rmatrix.i2_generators()["I2(1)"] == rmatrix.quadric_polys()["Q1"].with_variables(
        rmatrix.i2_generators()["I2(1)"].variables)


def test_I2_mutated():
    for ident in rmatrix.verify_I2_generators(mutate=True):
        assert not ident.holds, ident.name
