"""Exact linear algebra over prime fields F_q.

Matrices are dense numpy int64 arrays with entries in [0, q).  ``MatrixFq``
is a thin validated wrapper used at module boundaries; the array-level
helpers (``rank_mod``, ``kernel_basis_mod``, ...) are what the rest of the
package calls internally.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import _kernels


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A prime field F_q."""

    q: int

    def __post_init__(self) -> None:
        if self.q < 2 or not is_prime(self.q):
            raise ValueError(f"field order must be prime, got {self.q}")


@dataclass(frozen=True)
class MatrixFq:
    """Dense matrix over a prime field."""

    field: FieldSpec
    a: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        arr = np.asarray(self.a, dtype=np.int64)
        if arr.ndim != 2:
            raise ValueError("MatrixFq requires a 2-d array")
        object.__setattr__(self, "a", arr % self.field.q)

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def q(self) -> int:
        return self.field.q

    def transpose(self) -> "MatrixFq":
        return MatrixFq(self.field, self.a.T)

    def __matmul__(self, other: "MatrixFq") -> "MatrixFq":
        if other.field != self.field:
            raise ValueError("field mismatch")
        return MatrixFq(self.field, (self.a @ other.a) % self.q)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MatrixFq)
            and other.field == self.field
            and other.a.shape == self.a.shape
            and bool(np.array_equal(other.a, self.a))
        )


@dataclass
class ReductionResult:
    """Outcome of Gaussian elimination: rank, right-kernel basis, pivots."""

    rank: int
    kernel_basis: np.ndarray  # shape (cols - rank, cols), rows are basis vectors
    pivot_columns: list[int]


# ---------------------------------------------------------------------------
# array-level helpers
# ---------------------------------------------------------------------------


def rref_mod(M: np.ndarray, q: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns (first-nonzero pivoting)."""
    M = np.atleast_2d(np.asarray(M, dtype=np.int64)) % q
    R, piv = _kernels.rref(M, q)
    return R, [int(p) for p in piv]


def rank_mod(M: np.ndarray, q: int) -> int:
    return len(rref_mod(M, q)[1])


def kernel_basis_mod(M: np.ndarray, q: int) -> np.ndarray:
    """Rows form a basis of the right kernel {v : M v = 0 mod q}."""
    M = np.atleast_2d(np.asarray(M, dtype=np.int64)) % q
    n = M.shape[1]
    R, piv = rref_mod(M, q)
    free = [j for j in range(n) if j not in piv]
    basis = np.zeros((len(free), n), dtype=np.int64)
    for bi, f in enumerate(free):
        basis[bi, f] = 1
        for ri, p in enumerate(piv):
            basis[bi, p] = (-R[ri, f]) % q
    return basis


def solve_mod(M: np.ndarray, y: np.ndarray, q: int) -> np.ndarray | None:
    """One solution of M x = y mod q, or None when inconsistent."""
    M = np.atleast_2d(np.asarray(M, dtype=np.int64)) % q
    y = np.asarray(y, dtype=np.int64).reshape(-1) % q
    aug = np.hstack([M, y[:, None]])
    R, piv = rref_mod(aug, q)
    n = M.shape[1]
    if n in piv:
        return None
    x = np.zeros(n, dtype=np.int64)
    for ri, p in enumerate(piv):
        x[p] = R[ri, n]
    return x


def in_rowspace(M: np.ndarray, v: np.ndarray, q: int) -> bool:
    """True when v lies in the row space of M."""
    return solve_mod(np.asarray(M).T, v, q) is not None


# ---------------------------------------------------------------------------
# spec operations
# ---------------------------------------------------------------------------


def gauss_reduce(M: MatrixFq) -> ReductionResult:
    """Rank, right-kernel basis and pivot columns of M.

    Deterministic for a fixed input; an empty matrix has rank 0 and the
    identity kernel basis.
    """
    basis = kernel_basis_mod(M.a, M.q)
    R, piv = rref_mod(M.a, M.q)
    return ReductionResult(rank=len(piv), kernel_basis=basis, pivot_columns=piv)


def kron(A: MatrixFq, B: MatrixFq) -> MatrixFq:
    """Kronecker product over the common field."""
    if A.field != B.field:
        raise ValueError("field mismatch in kron")
    return MatrixFq(A.field, np.kron(A.a, B.a) % A.q)


def block_assemble(
    layout: list[list[tuple[MatrixFq, int] | MatrixFq | None]],
) -> MatrixFq:
    """Assemble a block matrix from a grid of optional signed blocks.

    Each grid entry is None (zero block), a MatrixFq, or (MatrixFq, sign)
    with sign in {+1, -1}; sign -1 maps entries e to q - e.  Row/column
    dimensions must be consistent across the grid; mismatches report the
    offending block coordinates.
    """
    nrows = len(layout)
    ncols = len(layout[0]) if nrows else 0
    fld: FieldSpec | None = None
    row_heights = [-1] * nrows
    col_widths = [-1] * ncols
    norm: list[list[tuple[np.ndarray, int] | None]] = []
    for i, row in enumerate(layout):
        if len(row) != ncols:
            raise ValueError(f"ragged block grid at row {i}")
        out_row: list[tuple[np.ndarray, int] | None] = []
        for j, ent in enumerate(row):
            if ent is None:
                out_row.append(None)
                continue
            if isinstance(ent, tuple):
                mat, sign = ent
            else:
                mat, sign = ent, 1
            if sign not in (1, -1):
                raise ValueError(f"bad sign {sign} at block ({i}, {j})")
            if fld is None:
                fld = mat.field
            elif mat.field != fld:
                raise ValueError(f"field mismatch at block ({i}, {j})")
            if row_heights[i] < 0:
                row_heights[i] = mat.rows
            elif mat.rows != row_heights[i]:
                raise ValueError(
                    f"row dimension mismatch at block ({i}, {j}): "
                    f"{mat.rows} vs {row_heights[i]}"
                )
            if col_widths[j] < 0:
                col_widths[j] = mat.cols
            elif mat.cols != col_widths[j]:
                raise ValueError(
                    f"column dimension mismatch at block ({i}, {j}): "
                    f"{mat.cols} vs {col_widths[j]}"
                )
            out_row.append((mat.a, sign))
        norm.append(out_row)
    if fld is None:
        raise ValueError("block grid contains no blocks")
    if any(h < 0 for h in row_heights) or any(w < 0 for w in col_widths):
        raise ValueError("a full grid row or column is empty; dimensions unknown")
    q = fld.q
    out = np.zeros((sum(row_heights), sum(col_widths)), dtype=np.int64)
    r0 = 0
    for i, row in enumerate(norm):
        c0 = 0
        for j, ent in enumerate(row):
            if ent is not None:
                arr, sign = ent
                out[r0 : r0 + row_heights[i], c0 : c0 + col_widths[j]] = (
                    arr if sign == 1 else (-arr) % q
                )
            c0 += col_widths[j]
        r0 += row_heights[i]
    return MatrixFq(fld, out)
