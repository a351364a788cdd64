"""High-precision complex square matrices on tensor powers of C^4.

Storage is row-sparse (a dict per row) because every operator in the
package (Lax, R, their embeddings, transfer matrices at N <= 3) has at
most a handful of nonzeros per row.  Semantics are those of a dense
matrix: absent entries are exact zeros and every method treats them so.
"""

from __future__ import annotations

from typing import Iterable, Mapping, TextIO

import mpmath

from .elliptic import GUARD_BITS, to_mp

FORMAT_TAG = "hubgeo-matrix"


class ComplexMatrix:
    __slots__ = ("dim", "rows", "prec")

    def __init__(self, dim: int, rows: list[dict[int, object]] | None = None, prec: int = 128):
        self.dim = dim
        self.rows = rows if rows is not None else [dict() for _ in range(dim)]
        self.prec = prec

    # construction ---------------------------------------------------------

    @classmethod
    def from_entries(cls, dim: int, entries: Mapping[tuple[int, int], object], prec: int = 128) -> "ComplexMatrix":
        """Zero-based ``(row, col) -> value`` mapping; zeros are dropped."""
        rows: list[dict[int, object]] = [dict() for _ in range(dim)]
        with mpmath.workprec(prec + GUARD_BITS):
            for (r, c), v in entries.items():
                if not (0 <= r < dim and 0 <= c < dim):
                    raise IndexError(f"entry ({r}, {c}) outside a {dim}x{dim} matrix")
                v = to_mp(v)
                if v != 0:
                    rows[r][c] = v
        return cls(dim, rows, prec)

    @classmethod
    def identity(cls, dim: int, prec: int = 128) -> "ComplexMatrix":
        return cls(dim, [{i: mpmath.mpf(1)} for i in range(dim)], prec)

    @classmethod
    def from_dense(cls, data: Iterable[Iterable[object]], prec: int = 128) -> "ComplexMatrix":
        data = [list(r) for r in data]
        return cls.from_entries(len(data), {(i, j): v for i, r in enumerate(data) for j, v in enumerate(r)}, prec)

    def to_dense(self) -> list[list[object]]:
        out = [[mpmath.mpf(0)] * self.dim for _ in range(self.dim)]
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                out[i][j] = v
        return out

    def to_numpy(self):
        import numpy as np

        out = np.zeros((self.dim, self.dim), dtype=complex)
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                out[i, j] = complex(v)
        return out

    # access ---------------------------------------------------------------

    def __getitem__(self, rc: tuple[int, int]):
        r, c = rc
        return self.rows[r].get(c, mpmath.mpf(0))

    def entry(self, r: int, c: int):
        """One-based access, matching printed matrix positions."""
        return self[r - 1, c - 1]

    def support(self) -> set[tuple[int, int]]:
        return {(i, j) for i, row in enumerate(self.rows) for j in row}

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows)

    # algebra --------------------------------------------------------------

    def _check(self, other: "ComplexMatrix") -> int:
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch {self.dim} vs {other.dim}")
        return max(self.prec, other.prec)

    def __add__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        prec = self._check(other)
        with mpmath.workprec(prec + GUARD_BITS):
            rows = [dict(r) for r in self.rows]
            for i, row in enumerate(other.rows):
                tgt = rows[i]
                for j, v in row.items():
                    s = tgt.get(j, 0) + v
                    if s == 0:
                        tgt.pop(j, None)
                    else:
                        tgt[j] = s
        return ComplexMatrix(self.dim, rows, prec)

    def __neg__(self) -> "ComplexMatrix":
        return self.scale(-1)

    def __sub__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        return self + (-other)

    def scale(self, s) -> "ComplexMatrix":
        with mpmath.workprec(self.prec + GUARD_BITS):
            s = to_mp(s)
            if s == 0:
                return ComplexMatrix(self.dim, None, self.prec)
            return ComplexMatrix(self.dim, [{j: v * s for j, v in r.items()} for r in self.rows], self.prec)

    def __matmul__(self, other: "ComplexMatrix") -> "ComplexMatrix":
        prec = self._check(other)
        orows = other.rows
        out = []
        with mpmath.workprec(prec + GUARD_BITS):
            for row in self.rows:
                acc: dict[int, object] = {}
                for k, a in row.items():
                    for j, b in orows[k].items():
                        acc[j] = acc.get(j, 0) + a * b
                out.append({j: v for j, v in acc.items() if v != 0})
        return ComplexMatrix(self.dim, out, prec)

    def transpose(self) -> "ComplexMatrix":
        rows: list[dict[int, object]] = [dict() for _ in range(self.dim)]
        for i, row in enumerate(self.rows):
            for j, v in row.items():
                rows[j][i] = v
        return ComplexMatrix(self.dim, rows, self.prec)

    def trace(self):
        with mpmath.workprec(self.prec + GUARD_BITS):
            return mpmath.fsum(row.get(i, 0) for i, row in enumerate(self.rows))

    def max_abs(self):
        with mpmath.workprec(self.prec + GUARD_BITS):
            return max((abs(v) for r in self.rows for v in r.values()), default=mpmath.mpf(0))

    def __pow__(self, n: int) -> "ComplexMatrix":
        out = ComplexMatrix.identity(self.dim, self.prec)
        for _ in range(n):
            out = out @ self
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, ComplexMatrix) or self.dim != other.dim:
            return NotImplemented
        return all(a == b for a, b in zip(self.rows, other.rows))

    __hash__ = None

    def __repr__(self) -> str:
        return f"ComplexMatrix(dim={self.dim}, nnz={self.nnz()}, prec={self.prec})"


def commutator(A: ComplexMatrix, B: ComplexMatrix) -> ComplexMatrix:
    return A @ B - B @ A


def relative_residual(diff: ComplexMatrix, *scales: ComplexMatrix):
    """``max|diff| / prod(max|S|)`` over the given scale matrices."""
    with mpmath.workprec(diff.prec + GUARD_BITS):
        denom = mpmath.mpf(1)
        for s in scales:
            denom *= s.max_abs()
        if denom == 0:
            raise ZeroDivisionError("scale matrix is zero")
        return diff.max_abs() / denom


def kron(A: ComplexMatrix, B: ComplexMatrix) -> ComplexMatrix:
    prec = max(A.prec, B.prec)
    rows = []
    with mpmath.workprec(prec + GUARD_BITS):
        for ra in A.rows:
            for rb in B.rows:
                rows.append({ja * B.dim + jb: va * vb for ja, va in ra.items() for jb, vb in rb.items()})
    return ComplexMatrix(A.dim * B.dim, rows, prec)


def embed_pair(op: ComplexMatrix, first: int, second: int, nfactors: int, local: int = 4) -> ComplexMatrix:
    """Lift an operator on ``C^local (x) C^local`` to factors ``(first, second)`` of ``nfactors``.

    Factors are numbered from zero, most significant first; ``first`` and
    ``second`` may be in either order, the operator's first tensor slot
    acting on factor ``first``.
    """
    if first == second or not (0 <= first < nfactors and 0 <= second < nfactors):
        raise ValueError("embedding needs two distinct factor positions")
    dim = local ** nfactors
    w1 = local ** (nfactors - 1 - first)
    w2 = local ** (nfactors - 1 - second)
    rows: list[dict[int, object]] = [dict() for _ in range(dim)]
    for idx in range(dim):
        d1 = (idx // w1) % local
        d2 = (idx // w2) % local
        base = idx - d1 * w1 - d2 * w2
        src = op.rows[d1 * local + d2]
        tgt = rows[idx]
        for col, v in src.items():
            e1, e2 = divmod(col, local)
            tgt[base + e1 * w1 + e2 * w2] = v
    return ComplexMatrix(dim, rows, op.prec)


def partial_transpose_second(A: ComplexMatrix, local: int = 4) -> ComplexMatrix:
    """Transpose on the second tensor factor of ``C^local (x) C^local``."""
    if A.dim != local * local:
        raise ValueError("partial transpose defined here on two factors only")
    rows: list[dict[int, object]] = [dict() for _ in range(A.dim)]
    for r, row in enumerate(A.rows):
        i, j = divmod(r, local)
        for c, v in row.items():
            k, l = divmod(c, local)
            rows[i * local + l][k * local + j] = v
    return ComplexMatrix(A.dim, rows, A.prec)


def partial_trace_first(A: ComplexMatrix, local: int = 4) -> ComplexMatrix:
    """Trace over the most significant factor of dimension ``local``."""
    rest = A.dim // local
    rows: list[dict[int, object]] = [dict() for _ in range(rest)]
    with mpmath.workprec(A.prec + GUARD_BITS):
        for a in range(local):
            for r in range(rest):
                for c, v in A.rows[a * rest + r].items():
                    ca, cr = divmod(c, rest)
                    if ca == a:
                        rows[r][cr] = rows[r].get(cr, 0) + v
        rows = [{j: v for j, v in row.items() if v != 0} for row in rows]
    return ComplexMatrix(rest, rows, A.prec)


def permutation_matrix(local: int = 4, prec: int = 128) -> ComplexMatrix:
    """``P[(i,j),(k,l)] = delta_il delta_jk`` on ``C^local (x) C^local``."""
    return ComplexMatrix(local * local,
                         [{j * local + i: mpmath.mpf(1)} for i in range(local) for j in range(local)], prec)


# --- plain-text dump --------------------------------------------------------


def dump_matrix(A: ComplexMatrix, fh: TextIO, digits: int | None = None) -> None:
    """Header line ``hubgeo-matrix dim=<n> prec=<bits>``, then one row per line.

    Each entry is a single token ``re+imj`` (Python complex literal syntax,
    full working precision), row-major.
    """
    digits = digits or int(A.prec * 0.30103) + 2
    fh.write(f"{FORMAT_TAG} dim={A.dim} prec={A.prec}\n")
    with mpmath.workprec(A.prec + GUARD_BITS):
        for r in range(A.dim):
            toks = []
            for c in range(A.dim):
                v = mpmath.mpc(A[r, c])
                re = mpmath.nstr(v.real, digits, min_fixed=1, max_fixed=0)
                im = mpmath.nstr(v.imag, digits, min_fixed=1, max_fixed=0)
                sign = "" if im.startswith("-") else "+"
                toks.append(f"{re}{sign}{im}j")
            fh.write(" ".join(toks) + "\n")


def load_matrix(fh: TextIO) -> ComplexMatrix:
    header = fh.readline().split()
    if not header or header[0] != FORMAT_TAG:
        raise ValueError("not a matrix dump (missing header)")
    fields = dict(tok.split("=", 1) for tok in header[1:])
    dim, prec = int(fields["dim"]), int(fields["prec"])
    entries = {}
    with mpmath.workprec(prec + GUARD_BITS):
        for r in range(dim):
            toks = fh.readline().split()
            if len(toks) != dim:
                raise ValueError(f"row {r}: expected {dim} entries, found {len(toks)}")
            for c, tok in enumerate(toks):
                body = tok[:-1]
                cut = max(body.rfind("+", 1), body.rfind("-", 1))
                while cut > 0 and body[cut - 1] in "eE":
                    cut = max(body.rfind("+", 1, cut), body.rfind("-", 1, cut))
                entries[(r, c)] = mpmath.mpc(mpmath.mpf(body[:cut]), mpmath.mpf(body[cut:]))
    return ComplexMatrix.from_entries(dim, entries, prec)
