"""The classical level-4 modular polynomial and J-invariant helpers."""

from __future__ import annotations

from fractions import Fraction

from .ratpoly import RatPoly, as_rat

# (i, j) -> coefficient of x^i y^j for i >= j; the polynomial is symmetric.
PHI4_COEFFS: dict[tuple[int, int], int] = {
    (6, 0): 1,
    (5, 4): -1,
    (5, 3): 2976,
    (5, 2): -2533680,
    (5, 1): 561444609,
    (5, 0): -8507430000,
    (4, 4): 7440,
    (4, 3): 80967606480,
    (4, 2): 1425220456750080,
    (4, 1): 1194227244109980000,
    (4, 0): 24125474716854750000,
    (3, 3): 2729942049541120,
    (3, 2): -914362550706103200000,
    (3, 1): 12519806366846423598750000,
    (3, 0): -22805180351548032195000000000,
    (2, 2): 26402314839969410496000000,
    (2, 1): 188656639464998455284287109375,
    (2, 0): 158010236947953767724187500000000,
    (1, 1): -94266583063223403127324218750000,
    (1, 0): -364936327796757658404375000000000000,
    (0, 0): 280949374722195372109640625000000000000,
}

# Phi4(1, 1): sum of all coefficients, off-diagonal ones counted twice.
PHI4_CHECKSUM = 280219724152247047853358587525773258240


def phi4_poly(x: str = "x", y: str = "y") -> RatPoly:
    terms = {}
    for (i, j), c in PHI4_COEFFS.items():
        terms[(i, j)] = c
        terms[(j, i)] = c
    return RatPoly((x, y), terms)


def phi4(j1, j2, coeffs: dict[tuple[int, int], int] | None = None):
    """Evaluate Phi_4(j1, j2); exact for rational arguments.

    ``coeffs`` replaces the coefficient table (mutation controls).
    """
    coeffs = PHI4_COEFFS if coeffs is None else coeffs
    if isinstance(j1, (int, Fraction, str)):
        j1 = as_rat(j1)
    if isinstance(j2, (int, Fraction, str)):
        j2 = as_rat(j2)
    p1 = [1, j1]
    p2 = [1, j2]
    for _ in range(5):
        p1.append(p1[-1] * j1)
        p2.append(p2[-1] * j2)
    total = 0
    for (i, j), c in coeffs.items():
        total += c * p1[i] * p2[j]
        if i != j:
            total += c * p1[j] * p2[i]
    return total
