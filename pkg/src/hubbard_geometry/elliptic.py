"""Complex elliptic machinery for the Lax weights.

The modulus is ``k = U/(4i)``, purely imaginary for real coupling, so every
quantity here is evaluated in full complex arithmetic on mpmath
primitives (``sqrt``, ``exp``, ``sin``, ``cos``).  mpmath's own elliptic
and theta routines are deliberately not used; the test-suite uses them as
independent oracles.

Branch conventions
------------------
* ``K(k)`` is the principal branch (cut ``k^2 in [1, oo)``).
* ``K'`` is computed as ``pi / (2 AGM(1, k))``.  For real ``U`` the
  complementary parameter ``1 - k^2 = 1 + U^2/16`` sits on the principal
  cut, so the principal ``K(k')`` is not usable.  The representative of
  ``K'`` modulo ``2iK`` is then fixed by requiring ``theta2^2/theta3^2 = k``
  for the resulting nome (not ``-k``).
* Fractional powers of the nome are defined through its exponent,
  ``q^s := exp(-s pi K'/K)``, so ``q^(1/4)`` is tied to the chosen ``K'``.
* The theta-form prefactor ``i (4 k sqrt(q))^(-1/4)`` is taken on the
  principal branch and then multiplied by the fourth root of unity that
  makes the regular point ``xc(0) = 1`` hold; the raw value is asserted
  to be a fourth root of unity away from one, so this can only fix a
  branch, never hide a wrong formula.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

GUARD_BITS = 16


class BranchCutError(ValueError):
    pass


class PoleError(ArithmeticError):
    pass


class TruncationError(ValueError):
    pass


def to_mp(value):
    """Exact-friendly conversion to an mpmath number at the current precision."""
    if isinstance(value, Fraction):
        return mpmath.mpf(value.numerator) / value.denominator
    if isinstance(value, complex):
        return mpmath.mpc(value.real, value.imag)
    if isinstance(value, (mpmath.mpf, mpmath.mpc)):
        return +value
    return mpmath.mpf(value) if isinstance(value, (int, float)) else mpmath.mpc(value)


def _eps(prec: int):
    return mpmath.mpf(2) ** (-prec)


# --- AGM and complete integrals ---------------------------------------------


def agm(a, b, prec: int | None = None):
    """Complex arithmetic-geometric mean with the "right choice" of roots.

    At each step the geometric mean is the square root closest to the new
    arithmetic mean.
    """
    prec = prec or mpmath.mp.prec
    with mpmath.workprec(prec + GUARD_BITS):
        a, b = to_mp(a), to_mp(b)
        if a == 0 or b == 0:
            return mpmath.mpf(0)
        tol = _eps(prec + 4)
        for _ in range(10 * prec):
            a1 = (a + b) / 2
            r = mpmath.sqrt(a * b)
            b1 = r if abs(r - a1) <= abs(-r - a1) else -r
            a, b = a1, b1
            if abs(a - b) <= tol * abs(a):
                return a
    raise ArithmeticError("AGM did not converge")


def _check_branch(k) -> None:
    m = k * k
    if mpmath.im(m) == 0 and mpmath.re(m) >= 1:
        raise BranchCutError(f"k^2 = {mpmath.nstr(m, 8)} lies on the branch cut [1, oo) of K")


def complete_K_series(k, prec: int):
    """``(pi/2) 2F1(1/2, 1/2; 1; k^2)`` summed directly."""
    with mpmath.workprec(prec + GUARD_BITS):
        k = to_mp(k)
        _check_branch(k)
        m = k * k
        if abs(m) > mpmath.mpf("0.9") ** 2 + _eps(prec):
            raise ValueError("series path is used only for |k| <= 0.9")
        total = mpmath.mpf(1)
        term = mpmath.mpf(1)
        tol = _eps(prec + 8)
        n = 0
        while True:
            n += 1
            term *= m * ((2 * n - 1) / mpmath.mpf(2 * n)) ** 2
            total += term
            if abs(term) <= tol * abs(total):
                break
        return mpmath.pi / 2 * total


def complete_K_agm(k, prec: int):
    """``pi / (2 AGM(1, k'))`` with the principal ``k' = sqrt(1 - k^2)``."""
    with mpmath.workprec(prec + GUARD_BITS):
        k = to_mp(k)
        _check_branch(k)
        kp = mpmath.sqrt(1 - k * k)
        return mpmath.pi / (2 * agm(1, kp, prec))


def complete_K(k, prec: int | None = None, method: str = "auto"):
    """Complete elliptic integral of the first kind, principal branch."""
    prec = prec or mpmath.mp.prec
    if method == "series" or (method == "auto" and abs(to_mp(k)) <= mpmath.mpf("0.9")):
        return complete_K_series(k, prec)
    if method in ("auto", "agm"):
        return complete_K_agm(k, prec)
    raise ValueError(f"unknown method {method!r}")


# --- theta context -----------------------------------------------------------


def truncation_order(q, prec: int) -> int:
    lq = abs(mpmath.log(abs(q)))
    return int(math.ceil(prec * math.log(2) / (2 * float(lq)))) + 8


@dataclass(frozen=True)
class ThetaContext:
    """Everything needed to evaluate the theta products for one modulus."""

    k: object
    kp: object
    K: object
    Kp: object
    q: object
    trunc: int
    prec: int
    unit: object = field(repr=False, default=1)
    shift: int = 0

    @classmethod
    def for_coupling(cls, U, prec: int = 128, trunc: int | None = None) -> "ThetaContext":
        with mpmath.workprec(prec + GUARD_BITS):
            U = to_mp(U)
            if U == 0:
                raise ValueError("U = 0 has nome 0; use the sn-form (trigonometric limit)")
            return cls.from_modulus(U / mpmath.mpc(0, 4), prec, trunc)

    @classmethod
    def from_modulus(cls, k, prec: int = 128, trunc: int | None = None) -> "ThetaContext":
        with mpmath.workprec(prec + GUARD_BITS):
            k = mpmath.mpc(to_mp(k))
            key = (mpmath.re(k), mpmath.im(k), prec, trunc)
        return _context_cached(*key)

    # fractional powers of the nome, tied to the chosen K'
    def qpow(self, s):
        return mpmath.exp(-s * mpmath.pi * self.Kp / self.K)

    def theta_constants(self):
        """``(theta2, theta3)`` at zero argument from the product formulas."""
        q = self.q
        t2 = 2 * self.qpow(mpmath.mpf(1) / 4)
        t3 = mpmath.mpf(1)
        q2j = mpmath.mpf(1)
        for j in range(1, self.trunc + 1):
            qodd = q2j * q
            q2j = qodd * q
            t2 *= (1 - q2j) * (1 + q2j) ** 2
            t3 *= (1 - q2j) * (1 + qodd) ** 2
        return t2, t3

    def check(self) -> dict:
        """Residuals of the context invariants (for reports and tests)."""
        with mpmath.workprec(self.prec + GUARD_BITS):
            t2, t3 = self.theta_constants()
            return {
                "k2_plus_kp2": abs(self.k ** 2 + self.kp ** 2 - 1),
                "nome": abs(self.q - mpmath.exp(-mpmath.pi * self.Kp / self.K)),
                "abs_q": abs(self.q),
                "modulus_from_nome": abs(t2 * t2 / (t3 * t3) - self.k),
            }


@lru_cache(maxsize=64)
def _context_cached(kre, kim, prec, trunc):
    with mpmath.workprec(prec + GUARD_BITS):
        k = mpmath.mpc(kre, kim)
        if k == 0:
            raise ValueError("k = 0: the nome vanishes; use sin directly")
        _check_branch(k)
        kp = mpmath.sqrt(1 - k * k)
        K = complete_K(k, prec + GUARD_BITS)
        Kp0 = mpmath.pi / (2 * agm(1, k, prec + GUARD_BITS))
        tol = mpmath.mpf(2) ** (-(prec // 2))
        chosen = None
        for n in (0, 1):
            Kp = Kp0 - 2 * mpmath.mpc(0, 1) * n * K
            q = mpmath.exp(-mpmath.pi * Kp / K)
            if not abs(q) < 1:
                continue
            t = truncation_order(q, prec + GUARD_BITS)
            trial = ThetaContext(k, kp, K, Kp, q, t, prec, 1, n)
            t2, t3 = trial.theta_constants()
            if abs(t2 * t2 / (t3 * t3) - k) < tol * max(1, abs(k)):
                chosen = trial
                break
        if chosen is None:
            raise ArithmeticError(f"no representative of K' reproduces k = {mpmath.nstr(k, 10)} from the nome")
        needed = truncation_order(chosen.q, prec)
        if trunc is not None:
            if abs(chosen.q) ** (2 * trunc) >= mpmath.mpf(2) ** (-prec):
                raise TruncationError(
                    f"trunc={trunc} too small for {prec} bits at |q|={mpmath.nstr(abs(chosen.q), 6)} (need {needed})"
                )
            needed = trunc
        if needed > 20000:
            raise TruncationError(f"|q| = {mpmath.nstr(abs(chosen.q), 6)} too close to 1 (trunc {needed})")
        ctx = ThetaContext(k, kp, K, chosen.Kp, chosen.q, max(needed, truncation_order(chosen.q, prec + GUARD_BITS)),
                           prec, 1, chosen.shift)
        xc0 = _theta_xc_raw(mpmath.mpf(0), ctx)
        unit = min((mpmath.mpc(0, 1) ** e for e in range(4)), key=lambda w: abs(w * xc0 - 1))
        if abs(unit * xc0 - 1) > tol:
            raise ArithmeticError(f"theta-form regular point xc(0) = {mpmath.nstr(xc0, 10)} is not a fourth root of unity")
        return ThetaContext(k, kp, K, ctx.Kp, ctx.q, ctx.trunc, prec, unit, ctx.shift)


# --- theta products ---------------------------------------------------------


def theta_H(lam, ctx: ThetaContext):
    with mpmath.workprec(ctx.prec + GUARD_BITS):
        lam = to_mp(lam)
        v = mpmath.pi * lam / ctx.K
        c = mpmath.cos(v)
        q, q2 = ctx.q, ctx.q * ctx.q
        out = 2 * ctx.qpow(mpmath.mpf(1) / 4) * mpmath.sin(v / 2)
        q2j = mpmath.mpf(1)
        for _ in range(ctx.trunc):
            q2j *= q2
            out *= (1 - 2 * q2j * c + q2j * q2j) * (1 - q2j)
        return out


def theta_Theta(lam, ctx: ThetaContext):
    with mpmath.workprec(ctx.prec + GUARD_BITS):
        lam = to_mp(lam)
        v = mpmath.pi * lam / ctx.K
        c = mpmath.cos(v)
        q, q2 = ctx.q, ctx.q * ctx.q
        out = mpmath.mpf(1)
        q2j = mpmath.mpf(1)
        for _ in range(ctx.trunc):
            qodd = q2j * q
            q2j *= q2
            out *= (1 - 2 * qodd * c + qodd * qodd) * (1 - q2j)
        return out


# --- sn ----------------------------------------------------------------------


def sn_theta(lam, ctx: ThetaContext):
    """``sn = theta3 H / (theta2 Theta)``; ``theta2/theta3`` is ``sqrt(k)`` on the branch tied to the nome."""
    with mpmath.workprec(ctx.prec + GUARD_BITS):
        th = theta_Theta(lam, ctx)
        if abs(th) < mpmath.mpf(2) ** (-(ctx.prec // 2)):
            raise PoleError(f"sn has a pole near lambda = {mpmath.nstr(lam, 10)} (|Theta| = {mpmath.nstr(abs(th), 5)})")
        t2, t3 = ctx.theta_constants()
        return t3 * theta_H(lam, ctx) / (t2 * th)


def sn_landen(lam, k, prec: int | None = None):
    """Jacobi sn by descending Gauss-Landen transformations.

    ``sn(u, k) = (1 + k1) sn(v, k1) / (1 + k1 sn(v, k1)^2)`` with
    ``k1 = (1 - k')/(1 + k')`` and ``v = u/(1 + k1)``.
    """
    prec = prec or mpmath.mp.prec
    with mpmath.workprec(prec + GUARD_BITS):
        u = to_mp(lam)
        k = to_mp(k)
        _check_branch(mpmath.mpc(k))
        mods = []
        stop = _eps(prec + GUARD_BITS)
        while abs(k) ** 2 > stop:
            kp = mpmath.sqrt(1 - k * k)
            k = (1 - kp) / (1 + kp)
            mods.append(k)
            u = u / (1 + k)
            if len(mods) > 64:
                raise ArithmeticError("Landen descent did not converge")
        s = mpmath.sin(u)
        if k != 0:
            s -= k * k / 4 * (u - s * mpmath.cos(u)) * mpmath.cos(u)
        pole_tol = mpmath.mpf(2) ** (-(prec // 2))
        for k1 in reversed(mods):
            den = 1 + k1 * s * s
            if abs(den) < pole_tol:
                raise PoleError(f"sn has a pole near lambda = {mpmath.nstr(lam, 10)}")
            s = (1 + k1) * s / den
        return s


def sn(lam, k, prec: int | None = None, method: str = "theta"):
    """Jacobi ``sn(lam, k)``; ``method`` is ``theta`` or ``landen``."""
    prec = prec or mpmath.mp.prec
    with mpmath.workprec(prec + GUARD_BITS):
        if to_mp(k) == 0:
            return mpmath.sin(to_mp(lam))
        if method == "landen":
            return sn_landen(lam, k, prec)
        return sn_theta(lam, ThetaContext.from_modulus(k, prec))


# --- uniformization ---------------------------------------------------------


@dataclass(frozen=True)
class WeightPoint:
    lam: object
    xc: object
    yc: object
    thc: object

    def curve_residual(self, U):
        t = self.xc * self.xc + self.yc * self.yc
        return t * t - U * self.xc * self.yc - 1

    def theta_residual(self):
        return self.thc - (self.xc * self.xc + self.yc * self.yc)


def _theta_xc_raw(lam, ctx: ThetaContext):
    i = mpmath.mpc(0, 1)
    half = i * ctx.Kp / 2
    pref = i * (4 * ctx.k * ctx.qpow(mpmath.mpf(1) / 2)) ** (-mpmath.mpf(1) / 4)
    den = theta_H(lam + half, ctx) * theta_H(ctx.K + half - lam, ctx)
    return pref * theta_H(ctx.K - lam, ctx) * theta_Theta(lam, ctx) / den


def theta_over_c2(lam, ctx: ThetaContext, variant: int = 1):
    """The two printed expressions for ``theta(lambda)/c(lambda)^2``."""
    with mpmath.workprec(ctx.prec + GUARD_BITS):
        lam = to_mp(lam)
        i = mpmath.mpc(0, 1)
        half = i * ctx.Kp / 2
        common = i * theta_Theta(ctx.K + half - lam, ctx) / theta_H(ctx.K + half - lam, ctx)
        if variant == 1:
            val = common * theta_Theta(lam + half, ctx) / theta_H(lam + half, ctx)
        elif variant == 2:
            val = common * theta_H(lam - half, ctx) / theta_Theta(lam - half, ctx)
        else:
            raise ValueError("variant is 1 or 2")
        return val


def uniformize(lam, U, form: str = "sn", prec: int = 128, ctx: ThetaContext | None = None) -> WeightPoint:
    """The Lax weights ``(x/c, y/c, theta/c^2)`` at spectral parameter ``lam``."""
    pole_tol = mpmath.mpf(2) ** (-(prec // 2))
    with mpmath.workprec(prec + GUARD_BITS):
        lam = to_mp(lam)
        U = to_mp(U)
        if form == "sn":
            if U == 0:
                x, y = mpmath.cos(lam), mpmath.sin(lam)
                return WeightPoint(lam, x, y, x * x + y * y)
            k = U / mpmath.mpc(0, 4)
            K = ctx.K if ctx is not None else complete_K(k, prec + GUARD_BITS)
            s1 = sn_landen(lam, k, prec)
            s2 = sn_landen(K - lam, k, prec)
            den = 1 - mpmath.mpc(0, 1) * k * s1 * s2
            if abs(den) < pole_tol:
                raise PoleError(f"weight pole near lambda = {mpmath.nstr(lam, 10)}")
            x, y = s2 / den, s1 / den
            return WeightPoint(lam, x, y, x * x + y * y)
        if form == "theta":
            ctx = ctx or ThetaContext.for_coupling(U, prec)
            i = mpmath.mpc(0, 1)
            half = i * ctx.Kp / 2
            den = theta_H(lam + half, ctx) * theta_H(ctx.K + half - lam, ctx)
            if abs(den) < pole_tol:
                raise PoleError(f"weight pole near lambda = {mpmath.nstr(lam, 10)}")
            pref = ctx.unit * i * (4 * ctx.k * ctx.qpow(mpmath.mpf(1) / 2)) ** (-mpmath.mpf(1) / 4)
            x = pref * theta_H(ctx.K - lam, ctx) * theta_Theta(lam, ctx) / den
            y = pref * theta_Theta(ctx.K - lam, ctx) * theta_H(lam, ctx) / den
            return WeightPoint(lam, x, y, theta_over_c2(lam, ctx, 1))
        raise ValueError(f"unknown form {form!r}; expected 'sn' or 'theta'")


# --- sampling ---------------------------------------------------------------


def sample_lambdas(U, count: int, seed: int = 0, prec: int = 128, stream: int = 0):
    """Deterministic spectral parameters ``s K + t i K'`` with ``|s| < 2``, ``|t| < 1/4``.

    Uses numpy's counter-based Philox generator keyed by ``(seed, stream)``;
    the doubles are converted exactly to mpmath numbers.
    """
    rng = np.random.Generator(np.random.Philox(key=[seed, stream]))
    st = rng.uniform(-1.0, 1.0, size=(count, 2))
    with mpmath.workprec(prec + GUARD_BITS):
        U = to_mp(U)
        if U == 0:
            K, Kp = mpmath.pi / 2, mpmath.mpf(1)
        else:
            ctx = ThetaContext.for_coupling(U, prec)
            K, Kp = ctx.K, ctx.Kp
        i = mpmath.mpc(0, 1)
        return [2 * mpmath.mpf(s) * K + mpmath.mpf(t) / 4 * i * Kp for s, t in st]
