"""Dense exact linear algebra over prime fields F_p.

Matrices are numpy int64 arrays with entries in 0..p-1.  The core
functions take the array and the modulus; `FieldMatrix` bundles the two
for callers that want the field carried along.

Tensor-product basis order is lexicographic in the factor indices:
basis vector (i, k) of A (x) B sits at position i * dim(B) + k.  This is
exactly numpy's `np.kron` layout and every other module relies on it.
"""
from dataclasses import dataclass

import numpy as np


INCONSISTENT = None


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Field:
    p: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def inv(self, a):
        return pow(int(a) % self.p, self.p - 2, self.p)


def asmat(a, p, rows=None, cols=None):
    """Coerce to a reduced int64 2-d array."""
    m = np.array(a, dtype=np.int64)
    if m.ndim == 1 and rows is None and cols is None:
        m = m.reshape(1, -1) if m.size else m.reshape(0, 0)
    if rows is not None or cols is not None:
        m = m.reshape(rows if rows is not None else -1, cols if cols is not None else -1)
    return np.mod(m, p)


def zeros(r, c):
    return np.zeros((r, c), dtype=np.int64)


def eye(n):
    return np.eye(n, dtype=np.int64)


def matmul(a, b, p):
    if a.shape[1] == 0 or b.shape[0] == 0:
        return zeros(a.shape[0], b.shape[1])
    # entries < p: float64 (BLAS) is exact while the dot products stay
    # below 2^53, int64 while below 2^62
    if (p - 1) ** 2 * a.shape[1] < 2 ** 53 and a.size * b.shape[1] > 4096:
        out = np.asarray(a, dtype=np.float64) @ np.asarray(b, dtype=np.float64)
        return out.astype(np.int64) % p
    if p * p * a.shape[1] < 2 ** 62:
        return (a @ b) % p
    return np.array((a.astype(object) @ b.astype(object)) % p, dtype=np.int64)


def mul(p, *ms):
    out = ms[0]
    for m in ms[1:]:
        out = matmul(out, m, p)
    return out


# ---------------------------------------------------------------- rref

def _rref_generic(m, p):
    a = m.copy() % p
    rows, cols = a.shape
    pivots = []
    r = 0
    inv = [0] + [pow(x, p - 2, p) for x in range(1, p)]
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * inv[a[r, c]]) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, r, pivots


def _rref_f2(m):
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return m.copy() % 2, 0, []
    bits = np.packbits((m % 2).astype(np.uint8), axis=1)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        byte, mask = c >> 3, np.uint8(0x80 >> (c & 7))
        col = (bits[:, byte] & mask) != 0
        nz = np.flatnonzero(col[r:])
        if nz.size == 0:
            continue
        k = r + nz[0]
        if k != r:
            bits[[r, k]] = bits[[k, r]]
            col[[r, k]] = col[[k, r]]
        col[r] = False
        hit = np.flatnonzero(col)
        if hit.size:
            bits[hit] ^= bits[r]
        pivots.append(c)
        r += 1
    out = np.unpackbits(bits, axis=1, count=cols).astype(np.int64)
    return out, r, pivots



def as_rows(a, n):
    """View `a` as a stack of row vectors of length n (safe when n == 0)."""
    a = np.asarray(a, dtype=np.int64)
    if a.ndim == 2 and a.shape[1] == n:
        return a
    if a.ndim == 1 and a.shape[0] == n:
        return a.reshape(1, n)
    if a.size == 0:
        return np.zeros((a.shape[0] if a.ndim > 1 else 0, n), dtype=np.int64)
    return a.reshape(-1, n)

def rref(m, p, fast=True):
    """Reduced row echelon form with first-nonzero pivoting.

    Returns (reduced matrix, rank, pivot columns).  For p = 2 the
    bit-packed path is used unless `fast` is False; both give identical
    output.
    """
    m = np.asarray(m, dtype=np.int64)
    if p == 2 and fast:
        return _rref_f2(m)
    return _rref_generic(m, p)


rref_rank = rref


def rank(m, p):
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return 0
    if m.shape[0] > m.shape[1]:
        m = m.T
    return rref(m, p)[1]


def kernel_basis(m, p):
    """Rows spanning {x : m x = 0}."""
    m = np.asarray(m, dtype=np.int64)
    cols = m.shape[1]
    red, r, piv = rref(m, p)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = zeros(len(free), cols)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for j, pc in enumerate(piv):
            basis[i, pc] = (-red[j, f]) % p
    return basis


def left_kernel_basis(m, p):
    """Rows spanning {y : y m = 0}."""
    return kernel_basis(np.asarray(m).T, p)


def solve_linear(m, b, p):
    """A solution x of m x = b, or INCONSISTENT (None).

    `b` may be a vector or a matrix of right-hand sides (one per column).
    """
    m = np.asarray(m, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    vec = b.ndim == 1
    bb = b.reshape(-1, 1) if vec else b
    if bb.shape[0] != m.shape[0]:
        raise ValueError(f"shape mismatch: {m.shape} vs rhs {b.shape}")
    cols = m.shape[1]
    red, r, piv = rref(np.hstack([m, bb]) % p, p)
    if any(c >= cols for c in piv):
        return INCONSISTENT
    x = zeros(cols, bb.shape[1])
    for j, pc in enumerate(piv):
        x[pc] = red[j, cols:]
    return x[:, 0] if vec else x


def row_basis(m, p):
    """RREF rows of the row space (a basis)."""
    red, r, _ = rref(np.asarray(m, dtype=np.int64), p)
    return red[:r]


def complement_basis(sub, n, p):
    """Rows completing the rows of `sub` (independent) to a basis of F_p^n,
    chosen among standard basis vectors."""
    sub = as_rows(sub, n)
    _, _, piv = rref(sub, p)
    return eye(n)[[c for c in range(n) if c not in set(piv)]]


def inverse(m, p):
    n = m.shape[0]
    if m.shape != (n, n):
        raise ValueError("not square")
    red, r, _ = rref(np.hstack([m % p, eye(n)]), p)
    if r < n or not np.array_equal(red[:, :n], eye(n)):
        raise ValueError("matrix is singular")
    return red[:, n:]


def kron(a, b, p):
    return np.kron(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % p


# ------------------------------------------------- quotient bookkeeping

@dataclass(frozen=True)
class Subquotient:
    """A subquotient U/W of F_p^n, with W inside U.

    `basis` rows lift a basis of U/W; `sub` rows span W.  `coords(v)`
    writes a vector of U in the quotient basis.
    """
    p: int
    n: int
    basis: np.ndarray
    sub: np.ndarray

    @property
    def dim(self):
        return self.basis.shape[0]

    def coords(self, vecs):
        """Quotient coordinates of the rows of `vecs` (each in U)."""
        vecs = as_rows(vecs, self.n)
        stack = np.vstack([self.basis, self.sub]).T
        x = solve_linear(stack, vecs.T, self.p)
        if x is None:
            raise ValueError("vector not in the subspace")
        return x[: self.dim].T


def reduce_mod(vecs, lower_rref, pivots, p):
    """Reduce rows of `vecs` against an RREF basis: zero at its pivots."""
    vecs = np.asarray(vecs, dtype=np.int64)
    if not pivots or vecs.shape[0] == 0:
        return vecs % p
    return (vecs - matmul(vecs[:, pivots], lower_rref, p)) % p


def subquotient(upper, lower, n, p):
    """Quotient of span(upper) by span(lower); lower must lie in upper."""
    lower = row_basis(as_rows(lower, n), p)
    upper = as_rows(upper, n)
    _, _, piv = rref(lower, p)
    basis = row_basis(reduce_mod(upper, lower, piv, p), p)
    return Subquotient(p, n, basis, lower)


@dataclass(frozen=True)
class FieldMatrix:
    """A matrix tagged with its field."""
    field: Field
    entries: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.int64)
        if e.ndim != 2:
            raise ValueError("entries must be 2-d")
        if e.size and (e.min() < 0 or e.max() >= self.field.p):
            raise ValueError("entries out of range")
        object.__setattr__(self, "entries", e)

    @classmethod
    def of(cls, p, rows):
        return cls(Field(p), asmat(rows, p))

    @property
    def p(self):
        return self.field.p

    @property
    def shape(self):
        return self.entries.shape

    def rref_rank(self):
        red, r, piv = rref(self.entries, self.p)
        return FieldMatrix(self.field, red), r, piv

    def kernel_basis(self):
        return FieldMatrix(self.field, kernel_basis(self.entries, self.p))

    def solve(self, b):
        return solve_linear(self.entries, np.asarray(b) % self.p, self.p)

    def kron(self, other):
        if other.field != self.field:
            raise ValueError("field mismatch")
        return FieldMatrix(self.field, kron(self.entries, other.entries, self.p))

    def __matmul__(self, other):
        if other.field != self.field:
            raise ValueError("field mismatch")
        return FieldMatrix(self.field, matmul(self.entries, other.entries, self.p))
