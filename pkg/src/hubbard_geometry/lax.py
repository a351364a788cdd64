"""Shastry's Lax operator for the Hubbard chain and its local and global properties.

Tensor convention: the basis of ``C^4 (x) C^4`` is ordered ``4 i + j``
(zero-based) for auxiliary index ``i`` and quantum index ``j``; each
``C^4`` is ``C^2 (x) C^2`` with the sigma qubit first.  Qubit state 0 is
spin up (``sigma^z = +1``) and ``sigma^+`` maps state 1 to state 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .elliptic import GUARD_BITS, PoleError, complete_K, to_mp, uniformize
from .matrices import (
    ComplexMatrix,
    commutator,
    embed_pair,
    kron,
    partial_trace_first,
    partial_transpose_second,
    permutation_matrix,
    relative_residual,
)

MAX_CHAIN_LENGTH = 4


class ConstraintError(ValueError):
    pass


# --- explicit matrix ---------------------------------------------------------

# One-based (row, col) -> symbolic entry; c = 1 after normalization.
_LAX_PATTERN = {
    (1, 1): "xx", (2, 2): "xy", (2, 5): "x", (3, 3): "xy", (3, 9): "x",
    (4, 4): "yy", (4, 7): "y", (4, 10): "y", (4, 13): "th",
    (5, 2): "x", (5, 5): "xy/th", (6, 6): "xx/th",
    (7, 4): "y", (7, 7): "yy/th", (7, 10): "1", (7, 13): "y",
    (8, 8): "xy/th", (8, 14): "x", (9, 3): "x", (9, 9): "xy/th",
    (10, 4): "y", (10, 7): "1", (10, 10): "yy/th", (10, 13): "y",
    (11, 11): "xx/th", (12, 12): "xy/th", (12, 15): "x",
    (13, 4): "th", (13, 7): "y", (13, 10): "y", (13, 13): "yy",
    (14, 8): "x", (14, 14): "xy", (15, 12): "x", (15, 15): "xy", (16, 16): "xx",
}


def lax_structure() -> set[tuple[int, int]]:
    """One-based positions of the structurally nonzero entries."""
    return set(_LAX_PATTERN)


def lax_explicit(xc, yc, prec: int = 128) -> ComplexMatrix:
    """The 16x16 Lax operator ``L(x, y, c)/c^2`` at ``(x/c, y/c) = (xc, yc)``."""
    with mpmath.workprec(prec + GUARD_BITS):
        x, y = to_mp(xc), to_mp(yc)
        th = x * x + y * y
        if abs(th) < mpmath.mpf(2) ** (-(prec // 2)):
            raise PoleError("theta = x^2 + y^2 vanishes; Lax entries with theta in the denominator are undefined")
        vals = {
            "xx": x * x, "xy": x * y, "yy": y * y, "x": x, "y": y, "1": mpmath.mpf(1), "th": th,
            "xy/th": x * y / th, "xx/th": x * x / th, "yy/th": y * y / th,
        }
        entries = {(r - 1, c - 1): vals[s] for (r, c), s in _LAX_PATTERN.items()}
    return ComplexMatrix.from_entries(16, entries, prec)


def lax_at(lam, U, prec: int = 128, form: str = "sn") -> ComplexMatrix:
    w = uniformize(lam, U, form, prec)
    return lax_explicit(w.xc, w.yc, prec)


# --- Shastry's construction --------------------------------------------------


@dataclass(frozen=True)
class ShastryParams:
    """Free-fermion weights ``a, b, c`` and interaction parameter ``h``."""

    a: object
    b: object
    c: object
    h: object
    U: object

    def constraint_residuals(self):
        a, b, c, h, U = (to_mp(v) for v in (self.a, self.b, self.c, self.h, self.U))
        return abs(a * a + b * b - c * c), abs(mpmath.sinh(2 * h) - U * a * b / (2 * c * c))

    @classmethod
    def from_weights(cls, xc, yc, U, prec: int = 128) -> "ShastryParams":
        """Invert ``x = a e^h, y = b e^h`` with ``c = 1``: ``e^(2h) = x^2 + y^2``."""
        with mpmath.workprec(prec + GUARD_BITS):
            x, y, U = to_mp(xc), to_mp(yc), to_mp(U)
            eh = mpmath.sqrt(x * x + y * y)
            return cls(x / eh, y / eh, mpmath.mpf(1), mpmath.log(eh), U)


def _pauli(prec: int):
    one, zero = mpmath.mpf(1), mpmath.mpf(0)
    I2 = ComplexMatrix.from_dense([[one, zero], [zero, one]], prec)
    Z = ComplexMatrix.from_dense([[one, zero], [zero, -one]], prec)
    Sp = ComplexMatrix.from_dense([[zero, one], [zero, zero]], prec)
    Sm = Sp.transpose()
    return I2, Z, Sp, Sm


def _four_qubit(ops: dict[int, ComplexMatrix], I2: ComplexMatrix) -> ComplexMatrix:
    out = ops.get(0, I2)
    for pos in range(1, 4):
        out = kron(out, ops.get(pos, I2))
    return out


def lax_shastry(p: ShastryParams, prec: int = 128, tol=None) -> ComplexMatrix:
    """``exp[h/2 (s0z t0z + 1)] L^sigma L^tau exp[h/2 (s0z t0z + 1)]``.

    Qubit positions: sigma_0, tau_0 (auxiliary site), sigma_j, tau_j.
    """
    with mpmath.workprec(prec + GUARD_BITS):
        tol = mpmath.mpf(2) ** (-(prec // 2)) if tol is None else tol
        r1, r2 = p.constraint_residuals()
        if r1 > tol or r2 > tol:
            raise ConstraintError(f"Shastry constraints violated: |a^2+b^2-c^2| = {mpmath.nstr(r1, 5)}, "
                                  f"|sinh 2h - U ab/2c^2| = {mpmath.nstr(r2, 5)}")
        a, b, c, h = (to_mp(v) for v in (p.a, p.b, p.c, p.h))
        I2, Z, Sp, Sm = _pauli(prec)
        eye = ComplexMatrix.identity(16, prec)

        def six_vertex(q0: int, qj: int) -> ComplexMatrix:
            return (eye.scale((a + b) / 2)
                    + _four_qubit({q0: Z, qj: Z}, I2).scale((a - b) / 2)
                    + (_four_qubit({q0: Sp, qj: Sm}, I2) + _four_qubit({q0: Sm, qj: Sp}, I2)).scale(c))

        zz = _four_qubit({0: Z, 1: Z}, I2)
        E = ComplexMatrix(16, [{i: mpmath.exp(h / 2 * (zz[i, i] + 1))} for i in range(16)], prec)
        return E @ six_vertex(0, 2) @ six_vertex(1, 3) @ E


def proportionality_defect(A: ComplexMatrix, B: ComplexMatrix):
    """``(ratio, defect)`` with ``ratio = A[1,1]/B[1,1]`` and ``defect = max|A - ratio B| / max|A|``."""
    with mpmath.workprec(max(A.prec, B.prec) + GUARD_BITS):
        ratio = A[0, 0] / B[0, 0]
        return ratio, relative_residual(A - B.scale(ratio), A)


# --- crossing and unitarity ---------------------------------------------------


def charge_conjugation(prec: int = 128, flip: tuple[int, int] | None = None) -> ComplexMatrix:
    """The anti-diagonal 4x4 matrix M; ``flip`` negates one (zero-based) entry."""
    entries = {(i, 3 - i): 1 for i in range(4)}
    if flip is not None:
        entries[flip] = -entries[flip]
    return ComplexMatrix.from_entries(4, entries, prec)


def _inverse_4(M: ComplexMatrix) -> ComplexMatrix:
    """Inverse of a monomial (one nonzero per row) 4x4 matrix."""
    rows: list[dict[int, object]] = [dict() for _ in range(4)]
    with mpmath.workprec(M.prec + GUARD_BITS):
        for i, row in enumerate(M.rows):
            if len(row) != 1:
                raise ValueError("expected a monomial matrix")
            (j, v), = row.items()
            rows[j][i] = 1 / v
    return ComplexMatrix(4, rows, M.prec)


def crossing_residual(lam, U, prec: int = 128, M: ComplexMatrix | None = None):
    """``max|L(lam) - (M (x) 1) L(K - lam)^t2 (M^-1 (x) 1)| / max|L(lam)|``."""
    with mpmath.workprec(prec + GUARD_BITS):
        lam, U = to_mp(lam), to_mp(U)
        K = mpmath.pi / 2 if U == 0 else complete_K(U / mpmath.mpc(0, 4), prec + GUARD_BITS)
        M = M or charge_conjugation(prec)
        eye = ComplexMatrix.identity(4, prec)
        L = lax_at(lam, U, prec)
        Lt = partial_transpose_second(lax_at(K - lam, U, prec))
        rhs = kron(M, eye) @ Lt @ kron(_inverse_4(M), eye)
        return relative_residual(L - rhs, L)


def unitarity_residual(lam, U, prec: int = 128, permuted: bool = False):
    """``max|L(lam) L(-lam) - s I| / max|L(lam) L(-lam)|`` with ``s = xc(lam)^2 xc(-lam)^2``.

    ``permuted=True`` uses ``L21(-lam) = P L12(-lam) P`` for the second factor.
    """
    with mpmath.workprec(prec + GUARD_BITS):
        w1 = uniformize(lam, U, "sn", prec)
        w2 = uniformize(-to_mp(lam), U, "sn", prec)
        A = lax_explicit(w1.xc, w1.yc, prec)
        B = lax_explicit(w2.xc, w2.yc, prec)
        if permuted:
            P = permutation_matrix(4, prec)
            B = P @ B @ P
        prod = A @ B
        s = w1.xc ** 2 * w2.xc ** 2
        return relative_residual(prod - ComplexMatrix.identity(16, prec).scale(s), prod)


# --- transfer matrix and Hamiltonian -----------------------------------------


def transfer_matrix(lam, U, N: int, prec: int = 128, L: ComplexMatrix | None = None) -> ComplexMatrix:
    """``T(lam) = tr_0 [L_0N(lam) ... L_01(lam)]`` on ``(C^4)^N``."""
    if not 1 <= N <= MAX_CHAIN_LENGTH:
        raise ValueError(f"N = {N} outside the supported range 1..{MAX_CHAIN_LENGTH}")
    L = L if L is not None else lax_at(lam, U, prec)
    prod = ComplexMatrix.identity(4 ** (N + 1), prec)
    for site in range(1, N + 1):
        prod = embed_pair(L, 0, site, N + 1) @ prod
    return partial_trace_first(prod)


def spin_hamiltonian(N: int, U, prec: int = 128) -> ComplexMatrix:
    """Two XX chains coupled on-site by ``(U/4) sigma^z tau^z``, periodic."""
    if N < 2:
        raise ValueError("the Hamiltonian needs at least two sites")
    if N > MAX_CHAIN_LENGTH:
        raise ValueError(f"N = {N} outside the supported range 2..{MAX_CHAIN_LENGTH}")
    dim = 4 ** N
    with mpmath.workprec(prec + GUARD_BITS):
        U4 = to_mp(U) / 4
        rows: list[dict[int, object]] = [dict() for _ in range(dim)]

        def bit(state: int, site: int, qubit: int) -> int:
            return (state >> (2 * (N - 1 - site) + (1 - qubit))) & 1

        def flip(state: int, site: int, qubit: int) -> int:
            return state ^ (1 << (2 * (N - 1 - site) + (1 - qubit)))

        for s in range(dim):
            diag = sum((1 - 2 * bit(s, j, 0)) * (1 - 2 * bit(s, j, 1)) for j in range(N))
            if diag:
                rows[s][s] = U4 * diag
            for j in range(N):
                k = (j + 1) % N
                for qb in (0, 1):
                    bj, bk = bit(s, j, qb), bit(s, k, qb)
                    if bj != bk:
                        # sigma^+_j sigma^-_k + sigma^-_j sigma^+_k moves the excitation across the bond
                        t = flip(flip(s, j, qb), k, qb)
                        rows[t][s] = rows[t].get(s, 0) + 1
        rows = [{c: v for c, v in r.items() if v != 0} for r in rows]
    return ComplexMatrix(dim, rows, prec)


def commutator_residual(A: ComplexMatrix, B: ComplexMatrix):
    """``max|[A, B]| / (max|A| max|B|)``."""
    return relative_residual(commutator(A, B), A, B)


def partition_trace(lam, U, N: int, prec: int = 128):
    """``Z_N(lam) = Tr T(lam)^N``."""
    return (transfer_matrix(lam, U, N, prec) ** N).trace()


def partition_symmetry_residual(lam, U, N: int, prec: int = 128):
    with mpmath.workprec(prec + GUARD_BITS):
        U = to_mp(U)
        K = mpmath.pi / 2 if U == 0 else complete_K(U / mpmath.mpc(0, 4), prec + GUARD_BITS)
        z1 = partition_trace(lam, U, N, prec)
        z2 = partition_trace(K - to_mp(lam), U, N, prec)
        return abs(z1 - z2) / max(abs(z1), abs(z2))
