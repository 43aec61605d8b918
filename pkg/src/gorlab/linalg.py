"""Exact dense linear algebra over prime fields GF(p).

All matrices are numpy int64 arrays with entries reduced into [0, p).
p < 2**16 so that products fit comfortably in 64-bit intermediates; the
blocked elimination kernel additionally exploits that panel-sized
accumulations stay below 2**53, so trailing updates can run through BLAS
(float64 matmul) while remaining exact.

Reduced row-echelon form is canonical, so every routine built on it is
deterministic and reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPrime

_BLOCK = 96


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field GF(p) for a prime p with 2 <= p < 2**16."""

    p: int

    def __post_init__(self):
        if not (2 <= self.p < 2 ** 16):
            raise NotPrime(f"modulus {self.p} out of range [2, 2^16)")
        if not _is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")

    def inv(self, a: int) -> int:
        return pow(a % self.p, self.p - 2, self.p)


class FMatrix:
    """Immutable dense matrix over a prime field, row-major."""

    __slots__ = ("field", "rows", "cols", "a")

    def __init__(self, field: PrimeField, data):
        a = np.asarray(data, dtype=np.int64) % field.p
        if a.ndim != 2:
            raise ValueError("FMatrix needs a 2-d array")
        a.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "rows", a.shape[0])
        object.__setattr__(self, "cols", a.shape[1])
        object.__setattr__(self, "a", a)

    def __setattr__(self, *_):
        raise AttributeError("FMatrix is immutable")

    @property
    def entries(self):
        return [int(x) for x in self.a.reshape(-1)]

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "FMatrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> "FMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    def __eq__(self, other):
        return (
            isinstance(other, FMatrix)
            and self.field.p == other.field.p
            and self.a.shape == other.a.shape
            and np.array_equal(self.a, other.a)
        )

    def __matmul__(self, other: "FMatrix") -> "FMatrix":
        return FMatrix(self.field, (self.a @ other.a) % self.field.p)

    def __repr__(self):
        return f"FMatrix(p={self.field.p}, {self.rows}x{self.cols})"


def rref_inplace(R: np.ndarray, p: int, block: int = _BLOCK):
    """Reduce R to reduced row-echelon form in place; return pivot columns.

    Blocked right-looking elimination: pivots are found and cleared inside a
    narrow column panel (numpy row ops on the active rows only), while the
    trailing columns and the already-finished rows above are updated once per
    panel through float64 matmuls.  The inner dimension of every matmul is at
    most `block`, so accumulations are bounded by block * (p-1)^2 < 2**53 and
    the float64 path is exact.
    """
    m, n = R.shape
    pivots: list[int] = []
    r = 0
    c0 = 0
    while c0 < n and r < m:
        b = min(block, n - c0)
        act = R[r:, c0:c0 + b]
        na = m - r
        kmax = min(b, na)
        # aug tracks, for every active row, its composition in terms of the
        # panel's pivot rows as they were at panel start
        aug = np.zeros((na, kmax), dtype=np.int64)
        local: list[int] = []
        is_piv = np.zeros(na, dtype=bool)
        for c in range(b):
            k = len(local)
            if k == kmax:
                break
            nz = np.nonzero(act[:, c] * ~is_piv)[0]
            if nz.size == 0:
                continue
            pr = int(nz[0])
            aug[pr, k] += 1
            inv = pow(int(act[pr, c]), p - 2, p)
            if inv != 1:
                act[pr] = (act[pr] * inv) % p
                aug[pr, :k + 1] = (aug[pr, :k + 1] * inv) % p
            rows = np.nonzero(act[:, c])[0]
            rows = rows[rows != pr]
            if rows.size:
                f = act[rows, c]
                act[rows] = (act[rows] - f[:, None] * act[pr][None, :]) % p
                aug[rows, :k + 1] = (
                    aug[rows, :k + 1] - f[:, None] * aug[pr][None, :k + 1]
                ) % p
            local.append(pr)
            is_piv[pr] = True
            pivots.append(c0 + c)
        k = len(local)
        if k:
            # move pivot rows (in pivot-column order) to the front, keep the
            # other active rows in stable order below them
            rest = [i for i in range(na) if not is_piv[i]]
            new_order = local + rest
            act[:] = act[new_order]
            aug = aug[new_order, :k]
            if c0 + b < n:
                T = R[r:, c0 + b:]
                T[:] = T[new_order]
                Tpiv = T[:k].astype(np.float64)
                base = T.copy()
                base[:k] = 0
                T[:] = (base + (aug.astype(np.float64) @ Tpiv).astype(np.int64)) % p
            # clear the new pivot columns in the finished rows above
            if r:
                cols_local = [pc - c0 for pc in pivots[-k:]]
                C = R[:r, c0:c0 + b][:, cols_local].copy()
                if C.any():
                    U = R[:r, c0:]
                    P = R[r:r + k, c0:].astype(np.float64)
                    U[:] = (U - (C.astype(np.float64) @ P).astype(np.int64)) % p
            r += k
        c0 += b
    return pivots


def rref_array(A: np.ndarray, p: int):
    """Reduced row-echelon form of a fresh copy; returns (R, pivots, rank)."""
    R = np.array(A, dtype=np.int64) % p
    if R.size == 0:
        return R, [], 0
    pivots = rref_inplace(R, p)
    return R, pivots, len(pivots)


def rank_array(A: np.ndarray, p: int) -> int:
    return rref_array(A, p)[2]


def row_space(A: np.ndarray, p: int, chunk: int = 2048):
    """Canonical rref basis of the row space of A: (basis rows, pivots).

    Rows are absorbed in chunks, so peak memory is bounded by the running
    basis plus one chunk instead of the full matrix; the result is identical
    to rref_array(A)[0][:rank] because the rref of a row space is unique.
    """
    A = np.asarray(A, dtype=np.int64)
    m, n = A.shape
    if A.size == 0:
        return np.zeros((0, n), dtype=np.int64), []
    B = np.zeros((0, n), dtype=np.int64)
    pivots: list[int] = []
    for lo in range(0, m, chunk):
        C = A[lo:lo + chunk] % p
        if pivots:
            # reduce against the current basis first so chunks that add no
            # new directions cost one matmul instead of a full elimination
            C = reduce_mod_rowspace(B, pivots, C, p)
            C = C[C.any(axis=1)]
        if C.shape[0] == 0:
            continue
        S = np.concatenate([B, C], axis=0)
        pivots = rref_inplace(S, p)
        B = S[: len(pivots)].copy()
    return B, pivots


def kernel_array(A: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right kernel {v : A v = 0}, one vector per row.

    Deterministic: free columns in increasing order, each set to 1 in turn.
    """
    m, n = A.shape
    R, pivots, rank = rref_array(A, p)
    free = [c for c in range(n) if c not in set(pivots)]
    K = np.zeros((len(free), n), dtype=np.int64)
    for i, c in enumerate(free):
        K[i, c] = 1
        if rank:
            K[i, pivots] = (-R[:rank, c]) % p
    return K


def solve_many(A: np.ndarray, B: np.ndarray, p: int):
    """Solve A x = b for every column b of B with one elimination.

    Returns a list with one entry per column of B: the deterministic
    particular solution (free variables 0) or None when inconsistent.
    """
    A = np.asarray(A, dtype=np.int64) % p
    B = np.asarray(B, dtype=np.int64) % p
    m, n = A.shape
    # row-reduce [A | I]; the identity block records the row transform T,
    # which stays valid even after elimination continues past A's columns
    aug = np.concatenate([A, np.eye(m, dtype=np.int64)], axis=1)
    R, pivots, _ = rref_array(aug, p)
    a_piv = [c for c in pivots if c < n]
    ra = len(a_piv)
    T = R[:, n:]
    TB = (T.astype(np.float64) @ B.astype(np.float64)) if m * n else np.zeros((m, B.shape[1]))
    # exactness of the float64 product needs m * p^2 < 2^53; fall back to
    # int64 matmul when the inner dimension is large
    if m * (p - 1) ** 2 >= 2 ** 53:
        TB = T @ B
    TB = TB.astype(np.int64) % p
    out = []
    for j in range(B.shape[1]):
        if TB[ra:, j].any():
            out.append(None)
            continue
        x = np.zeros(n, dtype=np.int64)
        x[a_piv] = TB[:ra, j]
        out.append(x)
    return out


def solve_array(A: np.ndarray, b: np.ndarray, p: int):
    """A particular solution of A x = b with free variables 0, or None."""
    return solve_many(A, np.asarray(b, dtype=np.int64).reshape(-1, 1), p)[0]


def reduce_mod_rowspace(R: np.ndarray, pivots, V: np.ndarray, p: int):
    """Reduce the rows of V modulo the row space spanned by the rref rows R."""
    if len(pivots) == 0 or V.size == 0:
        return V % p
    coeff = V[:, list(pivots)] % p
    Rp = R[: len(pivots)]
    if len(pivots) * (p - 1) ** 2 < 2 ** 53:
        prod = (coeff.astype(np.float64) @ Rp.astype(np.float64)).astype(np.int64)
    else:
        prod = coeff @ Rp
    return (V - prod) % p


def in_rowspace(R: np.ndarray, pivots, V: np.ndarray, p: int) -> bool:
    return not reduce_mod_rowspace(R, pivots, V, p).any()


# ---------------------------------------------------------------------------
# spec-level wrappers on FMatrix


def rref(A: FMatrix):
    """(reduced matrix, pivot columns, rank)."""
    R, pivots, rank = rref_array(A.a, A.field.p)
    return FMatrix(A.field, R), pivots, rank


def kernel_basis(A: FMatrix) -> FMatrix:
    return FMatrix(A.field, kernel_array(A.a, A.field.p))


def solve(A: FMatrix, b):
    x = solve_array(A.a, np.asarray(b, dtype=np.int64), A.field.p)
    return None if x is None else [int(v) for v in x]
