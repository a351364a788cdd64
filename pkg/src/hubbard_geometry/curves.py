"""The spectral curves of the covering Hubbard vertex model and the maps between them.

Curves, in the conventions used throughout the package:

* ``E2``  affine quartic ``(x^2+y^2)^2 - U x y - 1``; ``E2bar`` its
  projective closure ``(x^2+y^2)^2 - U x y c^2 - c^4``.
* ``E1bar`` ``(x+ - x-)(x+ x- - z^2) - i U x+ x- z``, the centrally
  extended su(2|2) curve.
* ``E3``  the Weierstrass curve of the generic fiber of the R-matrix
  surface (see :mod:`hubbard_geometry.fibration`).

``psi`` maps ``E2bar`` onto ``E1bar`` with degree four.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import mpmath

from .ratpoly import RatPoly, RewriteRule, as_rat, imaginary_unit_rule, reduce_mod, variables
from .results import ExactIdentity


class DegenerateCouplingError(ValueError):
    """U is 0 or +-4i: the curves degenerate or become rational."""


class NotOnCurveError(ValueError):
    pass


class ChartError(ValueError):
    pass


class FiberClusteringError(ArithmeticError):
    pass


def _is_exact(*values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


def _default_tol(*values) -> float:
    if any(isinstance(v, (mpmath.mpf, mpmath.mpc)) for v in values):
        return mpmath.mpf(2) ** (-(mpmath.mp.prec // 2))
    return 1e-10


def is_degenerate_coupling(U) -> bool:
    return U == 0 or U * U + 16 == 0


def check_coupling(U) -> None:
    if is_degenerate_coupling(U):
        raise DegenerateCouplingError(f"U = {U}: curve rationalizes/degenerates (U = 0 or U^2 + 16 = 0)")


# --- residuals --------------------------------------------------------------


def on_curve_E2(x, y, U):
    """Affine E2 residual ``(x^2+y^2)^2 - U x y - 1``."""
    t = x * x + y * y
    return t * t - U * x * y - 1


def e2bar_residual(x, y, c, U):
    t = x * x + y * y
    c2 = c * c
    return t * t - U * x * y * c2 - c2 * c2


def e1bar_residual(xp, xm, z, U, imag=1j):
    return (xp - xm) * (xp * xm - z * z) - imag * U * xp * xm * z


@dataclass(frozen=True)
class ProjPointE2:
    x: object
    y: object
    c: object

    def residual(self, U):
        return e2bar_residual(self.x, self.y, self.c, U)


@dataclass(frozen=True)
class ProjPointE1:
    xp: object
    xm: object
    z: object

    def residual(self, U):
        return e1bar_residual(self.xp, self.xm, self.z, U, _imag_like(self.xp, self.xm, self.z))

    def normalized(self) -> "ProjPointE1":
        """Scale so the first nonzero coordinate is one."""
        for v in (self.xp, self.xm, self.z):
            if v != 0:
                return ProjPointE1(self.xp / v, self.xm / v, self.z / v)
        raise ValueError("(0:0:0) is not a projective point")

    def is_parallel(self, other: "ProjPointE1", tol=0.0) -> bool:
        a = (self.xp, self.xm, self.z)
        b = (other.xp, other.xm, other.z)
        scale = max(abs(v) for v in a) * max(abs(v) for v in b)
        return all(abs(a[i] * b[j] - a[j] * b[i]) <= tol * scale for i, j in combinations(range(3), 2))


def _imag_like(*values):
    if any(isinstance(v, (mpmath.mpf, mpmath.mpc)) for v in values):
        return mpmath.mpc(0, 1)
    return 1j


# --- the isogeny ------------------------------------------------------------


def _psi_charts(x, y, c, U, i):
    """The three printed representatives of psi, in order.

    Each entry is ``(denominator, coordinates)``; ``None`` denominator for
    the polynomial chart.
    """
    t = x * x + y * y
    yield None, (i * x * x * t, -i * y * y * t, x * y * c * c)
    yield t, (x * x, -y * y, -i * x * y * c * c / t if t != 0 else None)
    d = c * c + U * x * y
    yield d, (x * x, -y * y, -i * x * y * t / d if d != 0 else None)


def isogeny_psi(P: ProjPointE2, U, tol=None) -> ProjPointE1:
    """Image of ``P`` under the degree-4 map ``E2bar -> E1bar``.

    Uses the first chart (in printed order) whose denominator is nonzero
    and whose coordinates do not all vanish.
    """
    x, y, c = P.x, P.y, P.c
    tol = _default_tol(x, y, c, U) if tol is None else tol
    res = e2bar_residual(x, y, c, U)
    scale = max(abs(x), abs(y), abs(c)) ** 4
    if (res != 0) if _is_exact(x, y, c, U) else (abs(res) > tol * max(scale, 1)):
        raise NotOnCurveError(f"point {P} is not on E2bar(U={U}); residual {res}")
    i = _imag_like(x, y, c, U)
    for den, coords in _psi_charts(x, y, c, U, i):
        if den is not None and abs(den) <= tol * max(scale, 1) ** 0.5:
            continue
        if any(v is None for v in coords):
            continue
        if all(abs(v) <= tol * max(scale, 1) for v in coords):
            continue
        return ProjPointE1(*coords)
    raise ChartError(f"no chart of psi is defined at {P}")


def psi_polynomials(U_symbol: str = "U"):
    """``(psi1, psi2, psi3)`` over Q[I] with ``I^2 = -1``."""
    x, y, c, I = variables("x", "y", "c", "I")
    t = x * x + y * y
    return I * x * x * t, -I * y * y * t, x * y * c * c


def e2bar_poly(U=None) -> RatPoly:
    x, y, c = variables("x", "y", "c")
    u = RatPoly.var("U") if U is None else U
    t = x * x + y * y
    return t * t - u * x * y * c * c - c ** 4


def e2bar_rule(U=None) -> RewriteRule:
    return RewriteRule.from_relation(e2bar_poly(U), {"x": 4})


def e1bar_poly_at(xp: RatPoly, xm: RatPoly, z: RatPoly, U=None) -> RatPoly:
    I = RatPoly.var("I")
    u = RatPoly.var("U") if U is None else U
    return (xp - xm) * (xp * xm - z * z) - I * u * xp * xm * z


def verify_psi_exact(U=None, psi3=None) -> ExactIdentity:
    """``E1bar(psi)`` modulo ``E2bar`` and ``I^2 + 1``.

    ``U=None`` keeps the coupling symbolic; a rational ``U`` specialises.
    ``psi3`` replaces the third map polynomial (mutation controls).
    """
    p1, p2, p3 = psi_polynomials()
    if psi3 is not None:
        p3 = psi3
    if U is not None:
        U = as_rat(U)
    expr = e1bar_poly_at(p1, p2, p3, U)
    rem = reduce_mod(expr, [e2bar_rule(U), imaginary_unit_rule()])
    label = "U symbolic" if U is None else f"U={U}"
    return ExactIdentity(f"E1bar(psi) mod E2bar ({label})", rem, ("E2bar(x,y,c)", "I^2+1"))


# --- fiber of psi -----------------------------------------------------------


def _mp_scalar(v):
    if isinstance(v, Fraction):
        return mpmath.mpf(v.numerator) / v.denominator
    return v


def fiber_count(Q: ProjPointE1, U, prec: int = 128, return_points: bool = False):
    """Number of distinct points of ``E2bar`` mapping onto ``Q``.

    ``Q`` must be generic: all coordinates nonzero (so not the image
    ``(1:1:0)`` of the points at infinity).  Candidates come from the
    closed-form elimination ``y = t x, t^2 = -Q2/Q1`` followed by
    ``x^2 = t Q1 / (i (1 + t^2) Q3)``; each is then checked against all
    three parallelism equations and the curve, and clustered with relative
    radius ``2^(-prec/4)``.
    """
    with mpmath.workprec(prec):
        q1, q2, q3 = (mpmath.mpc(_mp_scalar(v)) for v in (Q.xp, Q.xm, Q.z))
        U = mpmath.mpc(_mp_scalar(U))
        tol_scale = max(abs(q1), abs(q2), abs(q3))
        if min(abs(q1), abs(q2), abs(q3)) <= mpmath.mpf(2) ** (-prec // 2) * tol_scale:
            raise ValueError(f"{Q} is not a generic point (a coordinate vanishes)")
        i = mpmath.mpc(0, 1)
        accept = mpmath.mpf(2) ** (-(prec // 2) + 16)
        cluster = mpmath.mpf(2) ** (-(prec // 4))
        found = []
        s = mpmath.sqrt(-q2 / q1)
        for t in (s, -s):
            if abs(1 + t * t) < accept:
                continue
            x2 = t * q1 / (i * (1 + t * t) * q3)
            r = mpmath.sqrt(x2)
            for x in (r, -r):
                y = t * x
                psi = ProjPointE1(i * x * x * (x * x + y * y), -i * y * y * (x * x + y * y), x * y)
                if not psi.is_parallel(ProjPointE1(q1, q2, q3), accept):
                    continue
                if abs(on_curve_E2(x, y, U)) > accept * max(1, abs(x) ** 4):
                    continue
                found.append((x, y))
        distinct: list = []
        for p in found:
            dists = [max(abs(p[0] - d[0]), abs(p[1] - d[1])) / max(1, abs(p[0]), abs(p[1])) for d in distinct]
            near = [d for d in dists if d < cluster]
            grey = [d for d in dists if cluster <= d < cluster ** 0.5]
            if grey:
                raise FiberClusteringError(
                    f"ambiguous root separation {mpmath.nstr(min(grey), 5)} "
                    f"(cluster radius {mpmath.nstr(cluster, 5)}) for {Q}"
                )
            if not near:
                distinct.append(p)
        if return_points:
            return [ProjPointE2(x, y, mpmath.mpc(1)) for x, y in distinct]
        return len(distinct)


# --- J-invariants -----------------------------------------------------------


def j_invariant(curve: str, U):
    """Closed-form J-invariants of E1, E2, E3 as functions of U."""
    check_coupling(U)
    if _is_exact(U):
        U = as_rat(U)
        one = Fraction(1)
    else:
        one = 1
    U2 = U * U
    if curve == "E1":
        return one * (U2 * U2 + 16 * U2 + 16) ** 3 / (U2 * (U2 + 16))
    if curve == "E2":
        return -one * ((U2 + 16 * U + 16) ** 3 * (U2 - 16 * U + 16) ** 3) / (U2 * (U2 + 16) ** 4)
    if curve == "E3":
        return one * (U2 * U2 + 256 * U2 + 4096) ** 3 / (U2 ** 4 * (U2 + 16))
    raise ValueError(f"unknown curve {curve!r}; expected E1, E2 or E3")


@dataclass(frozen=True)
class WeierstrassCurve:
    """``y^2 = x^3 + A x + B``."""

    A: object
    B: object

    @property
    def discriminant(self):
        return 4 * self.A ** 3 + 27 * self.B ** 2


def j_from_weierstrass(W: WeierstrassCurve):
    disc = W.discriminant
    if disc == 0:
        raise ValueError(f"singular Weierstrass curve A={W.A}, B={W.B} (4A^3 + 27B^2 = 0)")
    if _is_exact(W.A, W.B):
        A = Fraction(as_rat(W.A))
        return 1728 * 4 * A ** 3 / (4 * A ** 3 + 27 * Fraction(as_rat(W.B)) ** 2)
    return 1728 * 4 * W.A ** 3 / disc


# --- eight-vertex coordinates ----------------------------------------------


def eight_vertex_coords(P: ProjPointE2, U):
    """``(x, y, w1, w2)`` with ``x^2+y^2 = w1^2+w2^2`` and ``w1 w2 = (U/4i) x y``.

    Valid in the chart ``c != 0``.
    """
    x, y, c = P.x, P.y, P.c
    if c == 0:
        raise ChartError("eight-vertex coordinates need c != 0")
    i = _imag_like(x, y, c, U)
    w = (x * x + y * y) / c
    w1 = (c + w) / 2
    w2 = (w - c) / (2 * i)
    return x, y, w1, w2


def eight_vertex_residuals(x, y, w1, w2, U):
    i = _imag_like(x, y, w1, w2, U)
    return x * x + y * y - w1 * w1 - w2 * w2, w1 * w2 - U / (4 * i) * x * y
