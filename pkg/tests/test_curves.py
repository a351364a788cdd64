from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hubbard_geometry import curves, elliptic, modular
from hubbard_geometry.ratpoly import RatPoly

from conftest import PREC


def test_on_curve_examples():
    assert curves.on_curve_E2(1, 0, 7) == 0
    assert curves.on_curve_E2(Fraction(1, 2), Fraction(1, 2), -3) == 0
    assert curves.on_curve_E2(1, 1, 0) == 3


def test_degenerate_coupling():
    assert curves.is_degenerate_coupling(0)
    assert curves.is_degenerate_coupling(4j)
    assert not curves.is_degenerate_coupling(2)
    with pytest.raises(curves.DegenerateCouplingError):
        curves.j_invariant("E1", 0)


def test_psi_regular_point():
    Q = curves.isogeny_psi(curves.ProjPointE2(1, 0, 1), 2).normalized()
    assert (Q.xp, Q.xm, Q.z) == (1, 0, 0)
    assert curves.e1bar_residual(Q.xp, Q.xm, Q.z, 2) == 0


@pytest.mark.parametrize("s", [1j, -1j])
def test_psi_singular_points(s):
    Q = curves.isogeny_psi(curves.ProjPointE2(1, s, 0), 2).normalized()
    assert Q.is_parallel(curves.ProjPointE1(1, 1, 0), 1e-12)


def test_psi_rejects_off_curve():
    with pytest.raises(curves.NotOnCurveError):
        curves.isogeny_psi(curves.ProjPointE2(1, 1, 1), 2)


def test_psi_exact_symbolic():
    assert curves.verify_psi_exact().holds


def test_psi_exact_specialised():
    assert curves.verify_psi_exact(U=2).holds


def test_psi_mutation_detected():
    x, y, c = (RatPoly.var(v) for v in "xyc")
    assert not curves.verify_psi_exact(psi3=x * y * c * c + c ** 4).holds


def _e2bar_point(U, lam):
    w = elliptic.uniformize(lam, U, "sn", PREC)
    return curves.ProjPointE2(w.xc, w.yc, mpmath.mpf(1))


@pytest.mark.parametrize("U", [2, 3, complex(1, 1)])
def test_fiber_has_four_points(U):
    with mpmath.workprec(PREC + 16):
        for lam in elliptic.sample_lambdas(U, 4, seed=3, prec=PREC):
            P = _e2bar_point(U, lam)
            Q = curves.isogeny_psi(P, mpmath.mpc(U), tol=mpmath.mpf(2) ** -64)
            pts = curves.fiber_count(Q, U, PREC, return_points=True)
            assert len(pts) == 4
            # c -> -c gives the same image, since psi3 and E2bar are even in c
            assert curves.isogeny_psi(curves.ProjPointE2(P.x, P.y, -P.c), mpmath.mpc(U),
                                      tol=mpmath.mpf(2) ** -64).is_parallel(Q, mpmath.mpf(2) ** -60)


def test_fiber_count_rejects_nongeneric():
    with pytest.raises(ValueError):
        curves.fiber_count(curves.ProjPointE1(1, 1, 0), 2)


def test_j_values():
    assert curves.j_invariant("E1", 4) == 287496
    assert curves.j_invariant("E1", 1) == Fraction(35937, 17)
    assert curves.j_invariant("E2", 1) == Fraction(-35937, 83521)
    assert curves.j_invariant("E3", 1) == Fraction(4353 ** 3, 17)
    assert curves.j_invariant("E1", 1) != curves.j_invariant("E2", 1)


def test_weierstrass_j():
    assert curves.j_from_weierstrass(curves.WeierstrassCurve(1, 0)) == 1728
    assert curves.j_from_weierstrass(curves.WeierstrassCurve(0, 1)) == 0
    assert curves.j_from_weierstrass(curves.WeierstrassCurve(1, 1)) == Fraction(6912, 31)
    with pytest.raises(ValueError):
        curves.j_from_weierstrass(curves.WeierstrassCurve(-3, 2))


def test_phi4_constant_term_and_checksum():
    assert modular.phi4(0, 0) == 280949374722195372109640625000000000000
    assert modular.phi4(1, 1) == modular.PHI4_CHECKSUM
    assert len(modular.PHI4_COEFFS) == 21


def test_phi4_modular_pairs():
    assert modular.phi4(curves.j_invariant("E1", 1), curves.j_invariant("E2", 1)) == 0
    assert modular.phi4(curves.j_invariant("E2", 2), curves.j_invariant("E3", 2)) == 0


def test_phi4_polynomial_matches_evaluator():
    p = modular.phi4_poly()
    assert p(x=Fraction(2, 3), y=-5) == modular.phi4(Fraction(2, 3), -5)


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=30)


@given(rationals, rationals)
def test_phi4_symmetric(a, b):
    assert modular.phi4(a, b) == modular.phi4(b, a)


@given(rationals.filter(lambda u: u != 0))
def test_modular_identities_hold_for_any_rational_coupling(U):
    j1, j2, j3 = (curves.j_invariant(e, U) for e in ("E1", "E2", "E3"))
    assert modular.phi4(j1, j2) == 0
    assert modular.phi4(j2, j3) == 0
    assert j1 != j2


def test_eight_vertex_coords_at_regular_point():
    x, y, w1, w2 = curves.eight_vertex_coords(curves.ProjPointE2(1, 0, 1), 2)
    assert (w1, w2) == (1, 0)
    assert all(r == 0 for r in curves.eight_vertex_residuals(x, y, w1, w2, 2))


def test_eight_vertex_coords_rational_point():
    # (1/2, 1/2, 1) lies on E2bar at U = -3
    P = curves.ProjPointE2(Fraction(1, 2), Fraction(1, 2), 1)
    assert curves.e2bar_residual(P.x, P.y, P.c, -3) == 0
    x, y, w1, w2 = curves.eight_vertex_coords(P, -3)
    assert all(abs(r) < 1e-15 for r in curves.eight_vertex_residuals(x, y, w1, w2, -3))


def test_eight_vertex_random_uniformized_points():
    with mpmath.workprec(PREC + 16):
        for lam in elliptic.sample_lambdas(2, 5, seed=1, prec=PREC):
            P = _e2bar_point(2, lam)
            x, y, w1, w2 = curves.eight_vertex_coords(P, mpmath.mpf(2))
            assert all(abs(r) < mpmath.mpf(2) ** -100 for r in curves.eight_vertex_residuals(x, y, w1, w2, 2))


def test_eight_vertex_needs_finite_chart():
    with pytest.raises(curves.ChartError):
        curves.eight_vertex_coords(curves.ProjPointE2(1, 1j, 0), 2)
