"""The R-matrix intertwining two Lax operators, its quadrics, and the elimination identities.

Weight names: ``a, b, bb, c, d, g, h, q`` where ``bb`` is b-bar.  Weight
``h`` and weight ``q`` are unrelated to the Lax interaction parameter and
to the nome.
"""

from __future__ import annotations

from dataclasses import astuple, dataclass, replace

import mpmath

from .elliptic import GUARD_BITS, PoleError, to_mp, uniformize
from .lax import lax_explicit
from .matrices import ComplexMatrix, embed_pair, relative_residual
from .ratpoly import RatPoly, RewriteRule, reduce_mod, variables
from .results import ExactIdentity

WEIGHT_NAMES = ("a", "b", "bb", "c", "d", "g", "h", "q")


@dataclass(frozen=True)
class WeightTuple:
    a: object
    b: object
    bb: object
    c: object
    d: object
    g: object
    h: object
    q: object

    def as_dict(self) -> dict[str, object]:
        return dict(zip(WEIGHT_NAMES, astuple(self)))


def weights_from_xy(x1, y1, x2, y2) -> WeightTuple:
    """The eight ratios with ``c = 1``."""
    t1 = x1 * x1 + y1 * y1
    t2 = x2 * x2 + y2 * y2
    D = x1 * x1 * x2 * x2 - y1 * y1 * y2 * y2
    for name, val in (("theta(x1,y1)", t1), ("theta(x2,y2)", t2), ("x1^2 x2^2 - y1^2 y2^2", D)):
        if val == 0 or abs(val) < mpmath.mpf(2) ** (-(mpmath.mp.prec // 2)):
            raise PoleError(f"weight denominator {name} vanishes")
    return WeightTuple(
        a=y1 * y2 / t1 + x1 * x2 / t2,
        b=-x1 * y2 / t1 + y1 * x2 / t2,
        bb=y1 * x2 / t1 - x1 * y2 / t2,
        c=1,
        d=(x1 * y1 - x2 * y2) / D,
        g=x1 * x2 / t1 + y1 * y2 / t2,
        h=(x1 * x2 * t1 - y1 * y2 * t2) / D,
        q=(x1 * x2 * t2 - y1 * y2 * t1) / D,
    )


def weights(lam1, lam2, U, prec: int = 128) -> WeightTuple:
    """R-matrix weights from uniformized spectral parameters."""
    with mpmath.workprec(prec + GUARD_BITS):
        w1 = uniformize(lam1, U, "sn", prec)
        w2 = uniformize(lam2, U, "sn", prec)
        return weights_from_xy(w1.xc, w1.yc, w2.xc, w2.yc)


# --- layout ---------------------------------------------------------------

# One-based positions.  The printed display has b at (8,8); the Yang-Baxter
# relation forces b-bar there (the (8,8) entry pairs with (5,5), (9,9),
# (12,12) under the symmetries of the layout).  ``printed=True`` keeps the
# display as typeset, for comparison.
_R_LAYOUT = {
    "a": [(1, 1), (16, 16)],
    "b": [(2, 2), (3, 3), (14, 14), (15, 15)],
    "bb": [(5, 5), (8, 8), (9, 9), (12, 12)],
    "c": [(2, 5), (3, 9), (5, 2), (8, 14), (9, 3), (12, 15), (14, 8), (15, 12)],
    "d": [(4, 7), (4, 10), (7, 4), (7, 13), (10, 4), (10, 13), (13, 7), (13, 10)],
    "g": [(6, 6), (11, 11)],
    "h": [(4, 13), (13, 4)],
    "q": [(7, 10), (10, 7)],
    "h-a": [(4, 4), (13, 13)],
    "q-g": [(7, 7), (10, 10)],
}


def rmatrix_layout(printed: bool = False) -> dict[tuple[int, int], str]:
    table = {pos: name for name, positions in _R_LAYOUT.items() for pos in positions}
    if printed:
        table[(8, 8)] = "b"
    return table


def rmatrix_assemble(w: WeightTuple, prec: int = 128, printed: bool = False) -> ComplexMatrix:
    with mpmath.workprec(prec + GUARD_BITS):
        vals = {k: to_mp(v) for k, v in w.as_dict().items()}
        vals["h-a"] = vals["h"] - vals["a"]
        vals["q-g"] = vals["q"] - vals["g"]
        entries = {(r - 1, c - 1): vals[name] for (r, c), name in rmatrix_layout(printed).items()}
    return ComplexMatrix.from_entries(16, entries, prec)


def ybe_residual(lam1, lam2, U, prec: int = 128, mutate_d: bool = False, printed_layout: bool = False):
    """``max|R12 L13(l1) L23(l2) - L23(l2) L13(l1) R12| / max|R12 L13 L23|``."""
    with mpmath.workprec(prec + GUARD_BITS):
        u1 = uniformize(lam1, U, "sn", prec)
        u2 = uniformize(lam2, U, "sn", prec)
        w = weights_from_xy(u1.xc, u1.yc, u2.xc, u2.yc)
        if mutate_d:
            w = replace(w, d=-w.d)
        R12 = embed_pair(rmatrix_assemble(w, prec, printed_layout), 0, 1, 3)
        L13 = embed_pair(lax_explicit(u1.xc, u1.yc, prec), 0, 2, 3)
        L23 = embed_pair(lax_explicit(u2.xc, u2.yc, prec), 1, 2, 3)
        lhs = R12 @ (L13 @ L23)
        rhs = L23 @ (L13 @ R12)
        return relative_residual(lhs - rhs, lhs)


# --- quadrics ---------------------------------------------------------------


def quadric_polys(U=None) -> dict[str, RatPoly]:
    """Q1..Q5 in the weight variables (and ``U`` unless a value is given)."""
    a, b, bb, c, d, g, h, q = variables(*WEIGHT_NAMES)
    u = RatPoly.var("U") if U is None else U
    return {
        "Q1": -c * c + a * g + b * bb,
        "Q2": -d * d + a * g - g * h - a * q + h * q + b * bb,
        "Q3": -c * c - d * d + h * q,
        "Q4": -a * a - b * b - g * g + a * h + g * q - bb * bb,
        "Q5": u * c * d - h * h + q * q,
    }


# Single-coefficient mutation per identity: the named monomial's coefficient
# is doubled.  For Q5 this is exactly U -> 2U.
QUADRIC_MUTATIONS = {
    "Q1": {"c": 2},
    "Q2": {"d": 2},
    "Q3": {"h": 1, "q": 1},
    "Q4": {"a": 2},
    "Q5": {"U": 1, "c": 1, "d": 1},
}


def mutate_coefficient(p: RatPoly, monomial: dict[str, int], factor=2) -> RatPoly:
    coeff = p.coefficient(monomial)
    if coeff == 0:
        raise ValueError(f"monomial {monomial} does not occur in the polynomial")
    term = RatPoly.const(coeff)
    for v, e in monomial.items():
        term = term * RatPoly.var(v) ** e
    return p + term.scale(factor - 1)


def quadric_values(w: WeightTuple, U) -> dict[str, object]:
    vals = w.as_dict()
    vals["U"] = U
    return {name: poly(**vals) for name, poly in quadric_polys().items()}


def appendixA_p() -> list[RatPoly]:
    """The cleared-denominator weights ``p1..p8`` in ``(x1, y1, x2, y2)``."""
    x1, y1, x2, y2 = variables("x1", "y1", "x2", "y2")
    t1 = x1 * x1 + y1 * y1
    t2 = x2 * x2 + y2 * y2
    D = x1 * x1 * x2 * x2 - y1 * y1 * y2 * y2
    return [
        (y1 * y2 * t2 + x1 * x2 * t1) * D,
        (y1 * x2 * t1 - x1 * y2 * t2) * D,
        (y1 * x2 * t2 - x1 * y2 * t1) * D,
        t1 * t2 * D,
        (x1 * y1 - x2 * y2) * t1 * t2,
        (x1 * x2 * t2 + y1 * y2 * t1) * D,
        (x1 * x2 * t1 - y1 * y2 * t2) * t1 * t2,
        (x1 * x2 * t2 - y1 * y2 * t1) * t1 * t2,
    ]


def e2_affine_poly(x: str, y: str) -> RatPoly:
    X, Y, U = variables(x, y, "U")
    t = X * X + Y * Y
    return t * t - U * X * Y - 1


def curve_rules(which: tuple[int, ...] = (1, 2)) -> list[RewriteRule]:
    """``x_j^4 -> ...`` from ``E2(x_j, y_j)``; leading monomials are coprime."""
    return [RewriteRule.from_relation(e2_affine_poly(f"x{j}", f"y{j}"), {f"x{j}": 4}) for j in which]


def _substitute_p(poly: RatPoly) -> RatPoly:
    return poly.subs(dict(zip(WEIGHT_NAMES, appendixA_p())))


def verify_quadrics_exact(mutate: bool = False) -> list[ExactIdentity]:
    """Each Q_j with weights replaced by ``p1..p8``, reduced modulo both curve relations."""
    rules = curve_rules()
    out = []
    for name, poly in quadric_polys().items():
        if mutate:
            poly = mutate_coefficient(poly, QUADRIC_MUTATIONS[name])
        rem = reduce_mod(_substitute_p(poly), rules)
        label = f"{name}(p1..p8)" + (" [mutated]" if mutate else "")
        out.append(ExactIdentity(label, rem, ("E2(x1,y1)", "E2(x2,y2)")))
    return out


# --- omega functions, I2 generators, TRAVA ------------------------------------


def omega(x2, y2, U):
    """``(omega1, omega2)``; exact for rational input."""
    den = U * x2 * y2 + 1
    if den == 0:
        raise ZeroDivisionError("U x2 y2 + 1 vanishes")
    return U * x2 * x2 * y2 * y2 / den, x2 * x2 + y2 * y2 / den


def omega_numerators() -> tuple[RatPoly, RatPoly, RatPoly]:
    """``(W1, W2, D)`` with ``omega_i = W_i / D``."""
    x2, y2, U = variables("x2", "y2", "U")
    D = U * x2 * y2 + 1
    return U * x2 * x2 * y2 * y2, x2 * x2 * D + y2 * y2, D


def i2_generators() -> dict[str, RatPoly]:
    """Generators in the weights and the symbols ``w1, w2`` standing for the omegas."""
    a, b, bb, c, d, g, h, q, w1, w2, x2, y2, U = variables(*WEIGHT_NAMES, "w1", "w2", "x2", "y2", "U")
    return {
        "I2(1)": a * g - c * c + b * bb,
        "I2(2)": (b * b + bb * bb + a * a - a * h) * (h - a) ** 3 + a * (d * d - b * bb) ** 2
        - 2 * b * bb * (h - a) * (d * d - b * bb),
        "I2(3)": (x2 * x2 + y2 * y2) ** 2 - U * x2 * y2 - 1,
        "I2(4)": b * b + a * a - a * h + w1 * c * d,
        "I2(5)": b * c + w1 * bb * d - w2 * a * d,
        "I2(6)": w2 * b * d + w1 * w2 * bb * c - (1 + w1 * w1) * (h - a) * c,
        "I2(7)": w2 * a * d - w1 * w2 * (q - g) * c - (1 + w1 * w1) * b * c,
        "I2(6) compatibility form": (c * c - b * bb) * (d * d - b * bb) + a * (h - a) * (a * (h - a) - b * b - bb * bb),
    }


I2_MUTATIONS = {
    "I2(1)": {"a": 1, "g": 1},
    "I2(2)": {"a": 1, "d": 4},
    "I2(3)": {"U": 1, "x2": 1, "y2": 1},
    "I2(4)": {"w1": 1, "c": 1, "d": 1},
    "I2(5)": {"b": 1, "c": 1},
    "I2(6)": {"w2": 1, "b": 1, "d": 1},
    "I2(7)": {"w2": 1, "a": 1, "d": 1},
    "I2(6) compatibility form": {"c": 2, "d": 2},
}


def trava_poly() -> RatPoly:
    w1, w2, U = variables("w1", "w2", "U")
    return (w1 * w1 + w2 * w2) ** 2 - U * w1 * w2 * w2 + 2 * (w1 * w1 - w2 * w2) + 1


TRAVA_MUTATION = {"U": 1, "w1": 1, "w2": 2}


def trava_value(w1, w2, U):
    return (w1 * w1 + w2 * w2) ** 2 - U * w1 * w2 * w2 + 2 * (w1 * w1 - w2 * w2) + 1


def clear_omegas(poly: RatPoly) -> tuple[RatPoly, int]:
    """Replace ``w_i`` by ``W_i/D`` and multiply through by ``D^k``, ``k`` the omega-degree."""
    idx = [poly.variables.index(v) for v in ("w1", "w2") if v in poly.variables]
    k = max((sum(m[i] for i in idx) for m in poly.terms), default=0)
    if k == 0:
        return poly, 0
    z = RatPoly.var("_D")
    homog = RatPoly.zero(poly.variables + ("_D",))
    for m, coef in poly.terms.items():
        e = sum(m[i] for i in idx)
        term = RatPoly._raw(poly.variables, {m: coef}) * z ** (k - e)
        homog = homog + term
    W1, W2, D = omega_numerators()
    return homog.subs({"w1": W1, "w2": W2, "_D": D}), k


def _multiplier_is_nonzero(k: int, rules) -> bool:
    _, _, D = omega_numerators()
    return not reduce_mod(D ** k, rules).is_zero()


def verify_I2_generators(mutate: bool = False) -> list[ExactIdentity]:
    rules = curve_rules()
    out = []
    for name, poly in i2_generators().items():
        if mutate:
            poly = mutate_coefficient(poly, I2_MUTATIONS[name])
        cleared, k = clear_omegas(poly)
        multipliers: tuple[str, ...] = ()
        if k:
            if not _multiplier_is_nonzero(k, rules):
                raise ArithmeticError(f"denominator multiplier for {name} vanishes modulo the curve ideal")
            multipliers = (f"(U*x2*y2 + 1)^{k}",)
        rem = reduce_mod(_substitute_p(cleared), rules)
        label = name + (" [mutated]" if mutate else "")
        out.append(ExactIdentity(label, rem, ("E2(x1,y1)", "E2(x2,y2)"), multipliers))
    return out


def verify_trava(mutate: bool = False) -> ExactIdentity:
    poly = trava_poly()
    if mutate:
        poly = mutate_coefficient(poly, TRAVA_MUTATION)
    rules = curve_rules((2,))
    cleared, k = clear_omegas(poly)
    if not _multiplier_is_nonzero(k, rules):
        raise ArithmeticError("TRAVA multiplier vanishes modulo E2(x2,y2)")
    rem = reduce_mod(cleared, rules)
    return ExactIdentity("TRAVA(omega1, omega2)" + (" [mutated]" if mutate else ""), rem,
                         ("E2(x2,y2)",), (f"(U*x2*y2 + 1)^{k}",))
