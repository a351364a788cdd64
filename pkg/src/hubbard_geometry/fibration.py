"""The fibration of the R-matrix surface over E2bar and its Weierstrass model.

The projection sends a weight tuple to ``(c : d : h : q)``.  The fiber
quadrics below are the restrictions of Q1, Q2, Q4 to the base point
``(c : d : h : q) = (c0 : d0 : 1 : c0^2 + d0^2)`` with
``(c0^2 + d0^2)^2 + U c0 d0 - 1 = 0``; in that chart Q3 vanishes
identically and Q5 is exactly the base-curve relation.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .curves import DegenerateCouplingError, WeierstrassCurve, j_from_weierstrass, j_invariant
from .elliptic import GUARD_BITS, to_mp
from .modular import phi4
from .ratpoly import RatPoly, RewriteRule, as_rat, imaginary_unit_rule, reduce_mod, variables
from .results import ExactIdentity

# Linear WEIF coefficient as typeset, and the value the J-invariant and
# modular-polynomial oracles single out (see resolve_weif_linear_coefficient).
WEIF_LINEAR_PRINTED = 246
WEIF_LINEAR = 256


class DegenerateBaseError(ValueError):
    """c0 d0 = 0: the Weierstrass map has a vanishing prefactor."""


def _is_exact(*values) -> bool:
    return all(isinstance(v, (int, Fraction)) for v in values)


# --- base points ------------------------------------------------------------


@dataclass(frozen=True)
class BasePoint:
    c0: object
    d0: object
    U: object

    def confi_residual(self):
        s = self.c0 * self.c0 + self.d0 * self.d0
        return s * s + self.U * self.c0 * self.d0 - 1

    def weight_coords(self):
        """``(c, d, h, q)`` of the base point in the weight space."""
        return self.c0, self.d0, 1, self.c0 * self.c0 + self.d0 * self.d0

    def require_nondegenerate(self) -> None:
        if self.c0 * self.d0 == 0:
            raise DegenerateBaseError(f"c0 d0 = 0 at base point ({self.c0}, {self.d0})")
        if self.U == 0:
            raise DegenerateCouplingError("U = 0: the alpha/beta tables contain 1/U")


def base_from(c0, d0, allow_degenerate: bool = False) -> BasePoint:
    """Base point with the coupling it induces, ``U = (1 - (c0^2+d0^2)^2) / (c0 d0)``."""
    if _is_exact(c0, d0):
        c0, d0 = as_rat(c0), as_rat(d0)
    if c0 * d0 == 0:
        if not allow_degenerate:
            raise DegenerateBaseError("c0 d0 = 0 does not determine U")
        s = c0 * c0 + d0 * d0
        if s * s != 1:
            raise ValueError(f"({c0}, {d0}) is not on the base curve for any U")
        return BasePoint(c0, d0, None)
    s = c0 * c0 + d0 * d0
    U = (1 - s * s) / (c0 * d0)
    if isinstance(U, Fraction) and U.denominator == 1:
        U = U.numerator
    return BasePoint(c0, d0, U)


def sample_base(U, c0, prec: int = 128) -> list[BasePoint]:
    """All base points with the given ``c0``: roots ``d0`` of the base-curve quartic."""
    with mpmath.workprec(prec + GUARD_BITS):
        U, c0 = to_mp(U), to_mp(c0)
        roots = mpmath.polyroots([1, 0, 2 * c0 * c0, U * c0, c0 ** 4 - 1], maxsteps=200, extraprec=prec)
        return [BasePoint(c0, d0, U) for d0 in roots]


RATIONAL_BASE_POINTS = [
    (Fraction(1, 2), Fraction(1, 2)),
    (Fraction(1, 2), Fraction(1, 3)),
    (Fraction(1, 3), Fraction(1, 4)),
    (Fraction(2, 3), Fraction(1, 5)),
    (Fraction(1, 4), Fraction(3, 5)),
    (Fraction(3, 7), Fraction(-1, 2)),
    (Fraction(-2, 5), Fraction(1, 3)),
]


# --- fiber quadrics and the quartic C ---------------------------------------


def fiber_quadrics(p: BasePoint | None = None) -> dict[str, RatPoly]:
    """Q1~, Q2~, Q4~ in ``(a, b, bb, g)``; symbolic in ``c0, d0`` when ``p`` is None."""
    a, b, bb, g = variables("a", "b", "bb", "g")
    if p is None:
        c0, d0 = variables("c0", "d0")
    else:
        c0, d0 = RatPoly.const(as_rat(p.c0)), RatPoly.const(as_rat(p.d0))
    h0 = c0 * c0 + d0 * d0
    return {
        "Q1~": b * bb + a * g - c0 * c0,
        "Q2~": b * bb + g * (a - 1) - h0 * a + c0 * c0,
        "Q4~": b * b + bb * bb + g * g - h0 * g + a * (a - 1),
    }


def fiber_quadrics_from_weights() -> dict[str, RatPoly]:
    """Q1, Q2, -Q4 restricted to the base point, as an independent route to the fiber quadrics."""
    from .rmatrix import quadric_polys

    c0, d0 = variables("c0", "d0")
    coords = {"c": c0, "d": d0, "h": RatPoly.const(1), "q": c0 * c0 + d0 * d0}
    Q = quadric_polys()
    return {"Q1~": Q["Q1"].subs(coords), "Q2~": Q["Q2"].subs(coords), "Q4~": -Q["Q4"].subs(coords)}


def quartic_C(p: BasePoint | None = None) -> RatPoly:
    a, b = variables("a", "b")
    if p is None:
        c0, d0, U = variables("c0", "d0", "U")
    else:
        c0, d0, U = (RatPoly.const(as_rat(v)) for v in (p.c0, p.d0, p.U))
    return ((a * a + b * b) ** 2
            - c0 ** 4 * (2 * a - 1) * (2 * a * a + 2 * b * b - 2 * a + 1)
            - U * c0 * d0 * a * (a ** 3 + (1 + a) * b * b)
            - 2 * c0 * c0 * d0 * d0 * ((2 * a - 1) * a * a + (2 * a + 1) * b * b))


C_MUTATION = {"U": 1, "c0": 1, "d0": 1, "a": 4}


def confi_rule() -> RewriteRule:
    c0, d0, U = variables("c0", "d0", "U")
    s = c0 * c0 + d0 * d0
    return RewriteRule.from_relation(s * s + U * c0 * d0 - 1, {"c0": 4})


def eliminated_quartic() -> RatPoly:
    """``b^2 Q4~`` after ``g = 2 c0^2 - (c0^2+d0^2) a`` (from Q2~ - Q1~) and ``b bb = c0^2 - a g`` (from Q1~)."""
    a, b, c0, d0 = variables("a", "b", "c0", "d0")
    h0 = c0 * c0 + d0 * d0
    g = 2 * c0 * c0 - h0 * a
    bbb = c0 * c0 - a * g
    return b ** 4 + bbb * bbb + b * b * (g * g - h0 * g + a * (a - 1))


def verify_quartic_exact(mutate: bool = False) -> tuple[ExactIdentity, Fraction | None]:
    """Normal forms modulo the base-curve relation of the eliminated quartic and of C.

    Returns the identity ``elim - k C`` (``k`` read off the leading terms)
    and ``k``; the identity holds iff the two agree up to the nonzero
    constant ``k``.
    """
    from .rmatrix import mutate_coefficient

    rules = [confi_rule()]
    C = quartic_C()
    if mutate:
        C = mutate_coefficient(C, C_MUTATION)
    elim = reduce_mod(eliminated_quartic(), rules)
    printed = reduce_mod(C, rules)
    if printed.is_zero():
        return ExactIdentity("quartic C", elim, ("CONFI",)), None
    names = tuple(sorted(set(elim.variables) | set(printed.variables)))
    elim, printed = elim.with_variables(names), printed.with_variables(names)
    lead = max(printed.terms)
    k = Fraction(elim.terms.get(lead, 0)) / Fraction(printed.terms[lead])
    label = "eliminated quartic = k * C" + (" [mutated]" if mutate else "")
    rem = elim - printed.scale(k)
    return ExactIdentity(label, rem, ("CONFI(c0,d0,U)",)), (k if k else None)


# --- fiber points -----------------------------------------------------------


@dataclass(frozen=True)
class FiberPoint:
    a: object
    b: object
    bb: object
    g: object

    def quadric_residuals(self, p: BasePoint, prec: int = 128):
        with mpmath.workprec(prec + GUARD_BITS):
            c0, d0 = to_mp(p.c0), to_mp(p.d0)
            h0 = c0 * c0 + d0 * d0
            a, b, bb, g = (to_mp(v) for v in (self.a, self.b, self.bb, self.g))
            return (b * bb + a * g - c0 * c0,
                    b * bb + g * (a - 1) - h0 * a + c0 * c0,
                    b * b + bb * bb + g * g - h0 * g + a * (a - 1))

    def c_residual(self, p: BasePoint, prec: int = 128):
        with mpmath.workprec(prec + GUARD_BITS):
            a, b, c0, d0, U = (to_mp(v) for v in (self.a, self.b, p.c0, p.d0, p.U))
            return ((a * a + b * b) ** 2 - c0 ** 4 * (2 * a - 1) * (2 * a * a + 2 * b * b - 2 * a + 1)
                    - U * c0 * d0 * a * (a ** 3 + (1 + a) * b * b)
                    - 2 * c0 * c0 * d0 * d0 * ((2 * a - 1) * a * a + (2 * a + 1) * b * b))


def fiber_points(p: BasePoint, a, prec: int = 128) -> list[FiberPoint]:
    """The four points of the fiber with the given ``a`` (C is quadratic in ``b^2``)."""
    with mpmath.workprec(prec + GUARD_BITS):
        a = to_mp(a)
        c0, d0, U = (to_mp(v) for v in (p.c0, p.d0, p.U))
        s = c0 * c0 * d0 * d0
        A1 = (2 * a * a - 2 * c0 ** 4 * (2 * a - 1) - U * c0 * d0 * a * (1 + a) - 2 * s * (2 * a + 1))
        A0 = (a ** 4 - c0 ** 4 * (2 * a - 1) * (2 * a * a - 2 * a + 1) - U * c0 * d0 * a ** 4
              - 2 * s * (2 * a - 1) * a * a)
        disc = mpmath.sqrt(A1 * A1 - 4 * A0)
        out = []
        h0 = c0 * c0 + d0 * d0
        g = 2 * c0 * c0 - h0 * a
        for B in ((-A1 + disc) / 2, (-A1 - disc) / 2):
            r = mpmath.sqrt(B)
            for b in (r, -r):
                if abs(b) < mpmath.mpf(2) ** (-(prec // 2)):
                    raise ValueError(f"b = 0 on the fiber at a = {mpmath.nstr(a, 8)}; pick another a")
                out.append(FiberPoint(a, b, (c0 * c0 - a * g) / b, g))
        return out


# --- alpha / beta tables and the Weierstrass map ------------------------------


def alphas(p: BasePoint) -> dict[str, object]:
    p.require_nondegenerate()
    c0, d0, U = p.c0, p.d0, p.U
    if _is_exact(c0, d0, U):
        c0, d0, U = as_rat(c0), as_rat(d0), as_rat(U)
    one = Fraction(1) if _is_exact(c0, d0, U) else 1
    return {
        "alpha1": (c0 ** 2 + d0 ** 2) * U,
        "alpha2": c0 ** 2 * U,
        "alpha3": 1 + 4 * c0 ** 4 - 12 * c0 ** 2 * d0 ** 2 - 2 * c0 * d0 * U,
        "alpha4": 32 * one * c0 * d0 / (3 * U) + 16 * c0 ** 4 + 11 * one * c0 * d0 * U / 6 - 2,
        "alpha5": 6 * c0 ** 3 - 6 * c0 * d0 ** 2 - one * d0 * U / 2,
        "alpha6": 8 * one * d0 / (3 * U) + 9 * c0 ** 3 - 3 * c0 * d0 ** 2 - one * d0 * U / 24,
        "alpha7": 16 * one * d0 / 3 + 4 * c0 ** 3 * U - 4 * c0 * d0 ** 2 * U - one * d0 * U ** 2 / 12,
    }


def betas(p: BasePoint) -> dict[str, object]:
    p.require_nondegenerate()
    c0, d0, U = p.c0, p.d0, p.U
    if _is_exact(c0, d0, U):
        c0, d0, U = as_rat(c0), as_rat(d0), as_rat(U)
    a1U = alphas(p)["alpha1"] / U
    return {
        "beta1": 2 * c0 ** 2 - 2 * d0 ** 2 - 13 * c0 ** 3 * d0 * U + 3 * c0 * d0 ** 3 * U,
        "beta2": a1U * (8 * c0 - 33 * c0 ** 2 * d0 * U - d0 ** 3 * U) + 24 * c0 * d0 ** 2 * (2 * c0 * d0 * U - 1),
        "beta3": a1U * (8 * c0 - 35 * c0 ** 2 * d0 * U - 3 * d0 ** 3 * U) + 32 * c0 * d0 ** 2 * (2 * c0 * d0 * U - 1),
        "beta4": 2 * c0 ** 2 - 2 * d0 ** 2 - 7 * c0 ** 3 * d0 * U + c0 * d0 ** 3 * U,
        "beta5": -8 * c0 + 32 * c0 ** 3 * d0 ** 2 + 32 * c0 * d0 ** 4 + 17 * c0 ** 2 * d0 * U + d0 ** 3 * U,
        "beta6": 12 * c0 ** 3 - 36 * c0 * d0 ** 2 - d0 * U - 40 * c0 ** 4 * d0 * U + 24 * c0 ** 2 * d0 ** 3 * U
        + c0 * d0 ** 2 * U ** 2,
        "beta7": 24 - 192 * c0 ** 2 * d0 ** 2 - 58 * c0 * d0 * U - 64 * c0 ** 5 * d0 * U
        + 192 * c0 ** 3 * d0 ** 3 * U + 35 * c0 ** 2 * d0 ** 2 * U ** 2 - d0 ** 4 * U ** 2,
        "beta8": -8 * c0 ** 3 + 8 * c0 * d0 ** 2 + 32 * c0 ** 5 * d0 ** 2 + 32 * c0 ** 3 * d0 ** 4 + d0 * U
        + 24 * c0 ** 4 * d0 * U - 8 * c0 ** 2 * d0 ** 3 * U - c0 * d0 ** 2 * U ** 2,
        "beta9": -8 * c0 ** 3 - 40 * c0 * d0 ** 2 + 128 * c0 ** 5 * d0 ** 2 + 128 * c0 ** 3 * d0 ** 4
        - 3 * d0 * U + 36 * c0 ** 4 * d0 * U + 36 * c0 ** 2 * d0 ** 3 * U + 2 * c0 * d0 ** 2 * U ** 2,
        "beta10": a1U * (8 * c0 ** 2 * d0 ** 2 - 1) + c0 * d0 * (3 * c0 ** 2 + d0 ** 2) * U,
    }


def map_coefficients(p: BasePoint) -> dict[str, object]:
    out = alphas(p)
    out.update(betas(p))
    return out


@dataclass(frozen=True)
class WeierstrassPoint:
    x0: object
    y0: object


def _tilde_coordinates(a, b, c0, d0, U, co, i):
    a1, a2, a3, a4, a5, a6, a7 = (co[f"alpha{k}"] for k in range(1, 8))
    b1, b2, b3, b4, b5, b6, b7, b8, b9, b10 = (co[f"beta{k}"] for k in range(1, 11))
    r = a1 * a1 / (U * U)
    xt = (2 * a1 * a1 / U * a * a * ((d0 * d0 - 5 * c0 * c0) * a + 3 * i / 2 * (d0 * d0 - 3 * c0 * c0) * b)
          + 2 * a1 * a * (a + i * b) * (b * b + r * a * a)
          + 2 * a1 * c0 * (i * a5 * b + a6 * a) * a
          - a2 * (2 * (2 * a - 1) * b * b + i * a3 * b + a4 * a)
          - i * U * (3 * c0 * c0 - d0 * d0) * b ** 3
          + a7 * c0 ** 3)
    yt = (4 * c0 * d0 * a1 * a * a * (b - i * a) * (b * b + r * a * a)
          + 2 * r * a ** 3 * ((b1 + a1 * c0 * d0) * b - i * b1 * a)
          + c0 * a1 / U * a * a * (2 * i * b2 * a - mpmath.mpf(3) / 2 * b3 * b)
          + 2 * a * b * b * ((b4 + a1 * c0 * d0) * b - i * b4 * a)
          + 4 * i * c0 * c0 * b * b * ((2 * a1 * a2 / (U * U) - 1) * (2 * a - 1) - c0 * d0 * U / 2)
          + c0 / 2 * (b5 * b ** 3 - 4 * i * b6 * c0 * c0 * a * a + b7 * c0 * a * b - 4 * i * c0 * c0 * b8 * a
                      + b9 * c0 * c0 * b + 8 * i * b10 * c0 ** 3))
    return xt, yt


def weierstrass_map(f: FiberPoint, p: BasePoint, prec: int = 128,
                    coefficients: dict[str, object] | None = None) -> WeierstrassPoint:
    """``x0 = c0 d0 x~0 / den``, ``y0 = c0 d0 U y~0 / den``, ``den = c0^2 (a-1)^2 + (d0 a)^2``."""
    p.require_nondegenerate()
    with mpmath.workprec(prec + GUARD_BITS):
        co = coefficients if coefficients is not None else map_coefficients(p)
        a, b = to_mp(f.a), to_mp(f.b)
        c0, d0, U = (to_mp(v) for v in (p.c0, p.d0, p.U))
        co = {k: to_mp(v) for k, v in co.items()}
        den = c0 * c0 * (a - 1) ** 2 + (d0 * a) ** 2
        if abs(den) < mpmath.mpf(2) ** (-(prec // 2)):
            raise ZeroDivisionError(f"c0^2 (a-1)^2 + (d0 a)^2 vanishes at a = {mpmath.nstr(a, 10)}")
        xt, yt = _tilde_coordinates(a, b, c0, d0, U, co, mpmath.mpc(0, 1))
        return WeierstrassPoint(c0 * d0 * xt / den, c0 * d0 * U * yt / den)


def weif_coefficients(p: BasePoint, linear: int = WEIF_LINEAR):
    """``(A, B)`` of ``y0^2 = x0^3 + A x0 + B`` over the base point."""
    c0, d0, U = p.c0, p.d0, p.U
    if _is_exact(c0, d0, U):
        c0, d0, U = as_rat(c0), as_rat(d0), as_rat(U)
    s = c0 * d0
    A = -(s ** 4) * (U ** 4 + linear * U ** 2 + 4096) / 48
    B = -(s ** 6) * (32 + U ** 2) * (U ** 4 - 512 * U ** 2 - 8192) / 864
    return A, B


def weif_residual(w: WeierstrassPoint, p: BasePoint, linear: int = WEIF_LINEAR, prec: int = 128):
    with mpmath.workprec(prec + GUARD_BITS):
        A, B = weif_coefficients(BasePoint(to_mp(p.c0), to_mp(p.d0), to_mp(p.U)), linear)
        x0, y0 = to_mp(w.x0), to_mp(w.y0)
        return abs(y0 * y0 - x0 ** 3 - A * x0 - B)


def scaled_weierstrass(U, linear: int = WEIF_LINEAR) -> WeierstrassCurve:
    """Base-independent model after ``x0 -> x0 c0^2 d0^2``, ``y0 -> y0 c0^3 d0^3``."""
    one = Fraction(1) if _is_exact(U) else 1
    if _is_exact(U):
        U = as_rat(U)
    return WeierstrassCurve(-one * (U ** 4 + linear * U ** 2 + 4096) / 48,
                            -one * (32 + U ** 2) * (U ** 4 - 512 * U ** 2 - 8192) / 864)


def j_generic_fiber(U, linear: int = WEIF_LINEAR):
    if U == 0 or U * U + 16 == 0:
        raise DegenerateCouplingError(f"U = {U}: curve rationalizes/degenerates")
    return j_from_weierstrass(scaled_weierstrass(U, linear))


@dataclass(frozen=True)
class LinearCoefficientVerdict:
    candidate: int
    j_matches: int
    phi4_closes: int
    samples: int

    @property
    def consistent(self) -> bool:
        return self.j_matches == self.samples and self.phi4_closes == self.samples


def resolve_weif_linear_coefficient(U_values, candidates=(WEIF_LINEAR_PRINTED, WEIF_LINEAR)):
    """Test each candidate linear WEIF coefficient against J(E3) and Phi4(J(E2), .) at rational U."""
    verdicts = []
    for cand in candidates:
        jm = pc = 0
        for U in U_values:
            j = j_generic_fiber(U, cand)
            jm += j == j_invariant("E3", U)
            pc += phi4(j_invariant("E2", U), j) == 0
        verdicts.append(LinearCoefficientVerdict(cand, jm, pc, len(U_values)))
    return verdicts


# --- coefficient isolation -------------------------------------------------------


ISOLATION_DEGREE = 9  # alpha1 enters x~0 cubically; every other entry at most linearly


def isolate_coefficient(samples, p: BasePoint, linear: int = WEIF_LINEAR, prec: int = 128,
                        coefficients: dict[str, object] | None = None):
    """Rank the alpha/beta entries by how well a single corrected value explains the WEIF residuals.

    For each entry the residual at every fiber sample is a polynomial of
    degree at most nine in that entry alone; divided differences over ten
    nodes recover it and its roots.  A transcription slip in one entry
    shows up as a root shared by all samples.  Returns
    ``[(name, spread, value)]`` sorted by spread, where ``value`` is the
    best shared root and ``spread`` its largest relative distance to the
    nearest root of any other sample.
    """
    with mpmath.workprec(2 * prec + GUARD_BITS):
        base = dict(coefficients if coefficients is not None else map_coefficients(p))
        Ab = weif_coefficients(BasePoint(to_mp(p.c0), to_mp(p.d0), to_mp(p.U)), linear)

        def residual(co, f):
            w = weierstrass_map(f, p, 2 * prec, co)
            return w.y0 ** 2 - w.x0 ** 3 - Ab[0] * w.x0 - Ab[1]

        ranking = []
        for name in base:
            centre = to_mp(base[name])
            nodes = [centre + k - ISOLATION_DEGREE // 2 for k in range(ISOLATION_DEGREE + 1)]
            root_sets = []
            for f in samples:
                co = dict(base)
                vals = []
                for x in nodes:
                    co[name] = x
                    vals.append(residual(co, f))
                poly = _interpolate(nodes, vals)
                while len(poly) > 1 and abs(poly[0]) <= mpmath.mpf(2) ** (-prec) * max(abs(c) for c in poly):
                    poly = poly[1:]
                if len(poly) < 2:
                    root_sets = None
                    break
                root_sets.append(mpmath.polyroots(poly, maxsteps=200, extraprec=2 * prec))
            if not root_sets:
                continue
            best = None
            for r in root_sets[0]:
                spread = max(min(abs(r - o) for o in others) for others in root_sets[1:]) / max(abs(r), 1) \
                    if len(root_sets) > 1 else mpmath.mpf(0)
                if best is None or spread < best[0]:
                    best = (spread, r)
            ranking.append((name, best[0], best[1]))
        ranking.sort(key=lambda t: t[1])
        return ranking


def _interpolate(nodes, values):
    """Monomial coefficients (highest degree first) of the interpolating polynomial."""
    n = len(nodes)
    coef = list(values)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (nodes[i] - nodes[i - j])
    poly = [coef[-1]]
    for k in range(n - 2, -1, -1):
        new = [0] * (len(poly) + 1)
        for idx, c in enumerate(poly):
            new[idx] += c
            new[idx + 1] -= c * nodes[k]
        new[-1] += coef[k]
        poly = new
    return poly


# --- J-invariant of an intersection of two quadrics ----------------------------


def _symmetric_matrix(poly: RatPoly, names):
    n = len(names)
    M = [[0] * n for _ in range(n)]
    for i, u in enumerate(names):
        for j, v in enumerate(names):
            mono = {u: 2} if i == j else {u: 1, v: 1}
            coef = poly.coefficient(mono)
            M[i][j] = coef if i == j else Fraction(coef) / 2
    return M


def _det(M):
    """Determinant by Gaussian elimination with partial pivoting (exact for Fractions)."""
    M = [list(r) for r in M]
    n = len(M)
    det = 1
    for col in range(n):
        piv = max(range(col, n), key=lambda r: abs(M[r][col]))
        if M[piv][col] == 0:
            return 0
        if piv != col:
            M[col], M[piv] = M[piv], M[col]
            det = -det
        det = det * M[col][col]
        for r in range(col + 1, n):
            f = M[r][col] / M[col][col]
            if f:
                for c in range(col, n):
                    M[r][c] -= f * M[col][c]
    return det


def binary_quartic_j(coeffs):
    """``j = 6912 I^3 / (4 I^3 - J^2)`` for ``a s^4 + b s^3 t + c s^2 t^2 + d s t^3 + e t^4``."""
    a, b, c, d, e = coeffs
    I = 12 * a * e - 3 * b * d + c * c
    J = 72 * a * c * e + 9 * b * c * d - 27 * a * d * d - 27 * e * b * b - 2 * c ** 3
    disc = 4 * I ** 3 - J * J
    if disc == 0:
        raise ValueError("singular pencil (vanishing discriminant)")
    return 6912 * I ** 3 / disc


def pencil_quartic(A, B):
    """Coefficients of ``det(s A + t B)`` (highest power of ``s`` first) by interpolation."""
    exact = all(isinstance(v, (int, Fraction)) for row in A + B for v in row)
    pts = list(range(5))
    vals = [_det([[s * x + y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]) for s in pts]
    return _interpolate(pts, [Fraction(v) for v in vals] if exact else vals)


def pencil_j(F1: RatPoly, F2: RatPoly, names) -> object:
    """J-invariant of the genus-one curve ``F1 = F2 = 0`` in P^3 (exact quadrics)."""
    return binary_quartic_j(pencil_quartic(_symmetric_matrix(F1, names), _symmetric_matrix(F2, names)))


def generic_fiber_pencil_j(p: BasePoint):
    """J of the fiber over a rational base point, from Q1~ and Q4~ after eliminating ``g``."""
    a, b, bb, t = variables("a", "b", "bb", "t")
    c0, d0 = as_rat(p.c0), as_rat(p.d0)
    h0 = c0 * c0 + d0 * d0
    G = t.scale(2 * c0 * c0) - a.scale(h0)
    F1 = b * bb + a * G - (t * t).scale(c0 * c0)
    F2 = b * b + bb * bb + G * G - (G * t).scale(h0) + a * (a - t)
    return pencil_j(F1, F2, ("a", "b", "bb", "t"))


def special_fiber_pencil_j(U, sign: int = 1, prec: int = 128):
    """J of the fiber over ``h = 0``: base ``(c:d:h:q) = (1 : +-i : 0 : q)``, ``q^2 = -U d``.

    There ``Q2 - Q1 = 2 - a q`` pins ``a = 2/q``; the fiber is cut out in
    ``P^3[b : bb : g : t]`` by ``b bb + a g t - t^2`` and
    ``b^2 + bb^2 + g^2 - q g t + a^2 t^2``.
    """
    # The interpolation and the invariant ratio cancel badly for small U.
    with mpmath.workprec(2 * prec + GUARD_BITS):
        U = to_mp(U)
        d = sign * mpmath.mpc(0, 1)
        q = mpmath.sqrt(-U * d)
        a = 2 / q
        z = mpmath.mpf(0)
        # variable order (b, bb, g, t)
        A = [[z, mpmath.mpf(1) / 2, z, z],
             [mpmath.mpf(1) / 2, z, z, z],
             [z, z, z, a / 2],
             [z, z, a / 2, -mpmath.mpf(1)]]
        B = [[mpmath.mpf(1), z, z, z],
             [z, mpmath.mpf(1), z, z],
             [z, z, mpmath.mpf(1), -q / 2],
             [z, z, -q / 2, a * a]]
        return binary_quartic_j(pencil_quartic(A, B))


# --- symbolic WEIF (stretch) -----------------------------------------------------


def verify_weif_symbolic(budget_seconds: float = 600.0, linear: int = WEIF_LINEAR):
    """Clear denominators in WEIF(x0(a,b), y0(a,b)) and reduce modulo C, CONFI and ``I^2 + 1``.

    With ``x0 = s X / (M D)``, ``y0 = s U Y / (N D)``, ``s = c0 d0``,
    ``M = 24 U^2``, ``N = 48 U^2`` and ``D = c0^2 (a-1)^2 + (d0 a)^2``,
    the cleared form is ``WEIF * D^3 M^3 N^2``.  Runs inside a wall-clock
    budget; returns ``(ExactIdentity | None, status)``.
    """
    start = time.monotonic()
    a, b, c0, d0, U, I = variables("a", "b", "c0", "d0", "U", "I")
    rules = [RewriteRule.from_relation(quartic_C(), {"b": 4}), confi_rule(), imaginary_unit_rule()]

    def step(poly):
        if time.monotonic() - start > budget_seconds:
            raise TimeoutError
        return reduce_mod(poly, rules)

    try:
        X, Y = _symbolic_tilde(a, b, c0, d0, U, I)
        X, Y = step(X), step(Y)
        s = c0 * d0
        D = c0 * c0 * (a - 1) ** 2 + (d0 * a) ** 2
        M = 24 * U * U
        N = 48 * U * U
        A = (s ** 4 * (U ** 4 + linear * U ** 2 + 4096)).scale(Fraction(-1, 48))
        B = (s ** 6 * (32 + U ** 2) * (U ** 4 - 512 * U ** 2 - 8192)).scale(Fraction(-1, 864))
        X2 = step(X * X)
        total = step(step(s * s * U * U * Y * Y) * D * M ** 3)
        total = total - step(step(X2 * X) * s ** 3 * N * N)
        total = total - step(step(A * s * X) * D * D * M * M * N * N)
        total = total - step(B * D ** 3 * M ** 3 * N * N)
        rem = step(total)
    except TimeoutError:
        return None, f"budget of {budget_seconds:.0f} s exceeded"
    return ExactIdentity("WEIF(x0, y0) symbolic", rem, ("C(a,b)", "CONFI(c0,d0,U)", "I^2+1"),
                         ("D^3 (24 U^2)^3 (48 U^2)^2",)), "completed"


def _symbolic_tilde(a, b, c0, d0, U, I):
    """``24 U^2 x~0`` and ``48 U^2 y~0`` as polynomials (every 1/U and fraction cleared)."""
    one = RatPoly.const(1)
    a1 = (c0 * c0 + d0 * d0) * U
    a2 = c0 * c0 * U
    a3 = 1 + 4 * c0 ** 4 - 12 * c0 * c0 * d0 * d0 - 2 * c0 * d0 * U
    # 6U alpha4, 24U alpha6, 12 alpha7, 2 alpha5
    a4_6U = 64 * c0 * d0 + 96 * c0 ** 4 * U + 11 * c0 * d0 * U * U - 12 * U
    a5_2 = 12 * c0 ** 3 - 12 * c0 * d0 * d0 - d0 * U
    a6_24U = 64 * d0 + 216 * c0 ** 3 * U - 72 * c0 * d0 * d0 * U - d0 * U * U
    a7_12 = 64 * d0 + 48 * c0 ** 3 * U - 48 * c0 * d0 * d0 * U - d0 * U * U
    h0 = c0 * c0 + d0 * d0
    # alpha1/U = h0, alpha1^2/U = h0^2 U, alpha1^2/U^2 = h0^2
    X24U2 = (
        48 * U * U * h0 * h0 * U * a * a * ((d0 * d0 - 5 * c0 * c0) * a)
        + 72 * U * U * h0 * h0 * U * a * a * I * (d0 * d0 - 3 * c0 * c0) * b
        + 48 * U * U * a1 * a * (a + I * b) * (b * b + h0 * h0 * a * a)
        + a1 * c0 * a * (24 * U * U * I * a5_2 * b + 2 * U * a6_24U * a)
        - 24 * U * U * a2 * (2 * (2 * a - 1) * b * b + I * a3 * b) - 4 * U * a2 * a4_6U * a
        - 24 * U ** 3 * I * (3 * c0 * c0 - d0 * d0) * b ** 3
        + 2 * U * U * a7_12 * c0 ** 3
    )
    bt1 = 2 * c0 * c0 - 2 * d0 * d0 - 13 * c0 ** 3 * d0 * U + 3 * c0 * d0 ** 3 * U
    bt2 = h0 * (8 * c0 - 33 * c0 * c0 * d0 * U - d0 ** 3 * U) + 24 * c0 * d0 * d0 * (2 * c0 * d0 * U - 1)
    bt3 = h0 * (8 * c0 - 35 * c0 * c0 * d0 * U - 3 * d0 ** 3 * U) + 32 * c0 * d0 * d0 * (2 * c0 * d0 * U - 1)
    bt4 = 2 * c0 * c0 - 2 * d0 * d0 - 7 * c0 ** 3 * d0 * U + c0 * d0 ** 3 * U
    bt5 = -8 * c0 + 32 * c0 ** 3 * d0 * d0 + 32 * c0 * d0 ** 4 + 17 * c0 * c0 * d0 * U + d0 ** 3 * U
    bt6 = (12 * c0 ** 3 - 36 * c0 * d0 * d0 - d0 * U - 40 * c0 ** 4 * d0 * U + 24 * c0 * c0 * d0 ** 3 * U
           + c0 * d0 * d0 * U * U)
    bt7 = (24 - 192 * c0 * c0 * d0 * d0 - 58 * c0 * d0 * U - 64 * c0 ** 5 * d0 * U + 192 * c0 ** 3 * d0 ** 3 * U
           + 35 * c0 * c0 * d0 * d0 * U * U - d0 ** 4 * U * U)
    bt8 = (-8 * c0 ** 3 + 8 * c0 * d0 * d0 + 32 * c0 ** 5 * d0 * d0 + 32 * c0 ** 3 * d0 ** 4 + d0 * U
           + 24 * c0 ** 4 * d0 * U - 8 * c0 * c0 * d0 ** 3 * U - c0 * d0 * d0 * U * U)
    bt9 = (-8 * c0 ** 3 - 40 * c0 * d0 * d0 + 128 * c0 ** 5 * d0 * d0 + 128 * c0 ** 3 * d0 ** 4 - 3 * d0 * U
           + 36 * c0 ** 4 * d0 * U + 36 * c0 * c0 * d0 ** 3 * U + 2 * c0 * d0 * d0 * U * U)
    bt10 = h0 * (8 * c0 * c0 * d0 * d0 - 1) + c0 * d0 * (3 * c0 * c0 + d0 * d0) * U
    # 2 alpha1 alpha2 / U^2 = 2 h0 c0^2
    Y48U2 = 48 * U * U * (
        4 * c0 * d0 * a1 * a * a * (b - I * a) * (b * b + h0 * h0 * a * a)
        + 2 * h0 * h0 * a ** 3 * ((bt1 + a1 * c0 * d0) * b - I * bt1 * a)
        + 2 * a * b * b * ((bt4 + a1 * c0 * d0) * b - I * bt4 * a)
        + 4 * I * c0 * c0 * b * b * ((2 * h0 * c0 * c0 - 1) * (2 * a - 1) - c0 * d0 * U * Fraction(1, 2))
        + c0 * Fraction(1, 2) * (bt5 * b ** 3 - 4 * I * bt6 * c0 * c0 * a * a + bt7 * c0 * a * b
                                 - 4 * I * c0 * c0 * bt8 * a + bt9 * c0 * c0 * b + 8 * I * bt10 * c0 ** 3)
        + c0 * h0 * a * a * (2 * I * bt2 * a - Fraction(3, 2) * bt3 * b)
    ) * one
    return X24U2, Y48U2
