"""Dense linear algebra over a prime field F_p.

Matrices are ``numpy.int64`` arrays with entries in ``0..p-1``.  Products are
routed through float64 BLAS whenever every partial sum is exactly
representable (``K * (p-1)**2 < 2**53``); otherwise an int64 path with chunked
accumulation keeps every intermediate below ``2**63``.
"""

from __future__ import annotations

import numpy as np

_FLOAT_EXACT = 2**53
_INT_SAFE = 2**62


def asmat(a, p: int, shape=None) -> np.ndarray:
    """Coerce integers (any size, any sign) to canonical representatives mod p."""
    if isinstance(a, np.ndarray) and a.dtype.kind in "iu":
        arr = np.mod(a.astype(np.int64), p)
    else:
        arr = np.mod(np.array(a, dtype=object), p).astype(np.int64)
    if shape is not None:
        arr = arr.reshape(shape)
    return arr


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def mm(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Matrix product mod p (also handles matrix-vector)."""
    k = a.shape[-1]
    if k == 0:
        shape = a.shape[:-1] + b.shape[1:]
        return np.zeros(shape, dtype=np.int64)
    if k * (p - 1) ** 2 < _FLOAT_EXACT:
        out = np.matmul(a.astype(np.float64), b.astype(np.float64))
        return np.mod(out, p).astype(np.int64)
    chunk = max(1, _INT_SAFE // ((p - 1) ** 2))
    if chunk >= k:
        return np.mod(np.matmul(a, b), p)
    out = None
    for start in range(0, k, chunk):
        part = np.mod(np.matmul(a[..., start:start + chunk], b[start:start + chunk]), p)
        out = part if out is None else np.mod(out + part, p)
    return out


def tdot(a: np.ndarray, b: np.ndarray, axes, p: int) -> np.ndarray:
    """``numpy.tensordot`` reduced mod p, exact for every prime below 2**31."""
    a_axes, b_axes = axes
    if isinstance(a_axes, int):
        a_axes, b_axes = [a_axes], [b_axes]
    a_axes = [x % a.ndim for x in a_axes]
    b_axes = [x % b.ndim for x in b_axes]
    a_free = [i for i in range(a.ndim) if i not in a_axes]
    b_free = [i for i in range(b.ndim) if i not in b_axes]
    a2 = np.transpose(a, a_free + list(a_axes))
    b2 = np.transpose(b, list(b_axes) + b_free)
    a_shape = [a.shape[i] for i in a_free]
    b_shape = [b.shape[i] for i in b_free]
    k = int(np.prod([a.shape[i] for i in a_axes])) if a_axes else 1
    rows = int(np.prod(a_shape)) if a_shape else 1
    cols = int(np.prod(b_shape)) if b_shape else 1
    out = mm(a2.reshape(rows, k), b2.reshape(k, cols), p)
    return out.reshape(a_shape + b_shape)


def chain(p: int, *mats: np.ndarray) -> np.ndarray:
    """Composite ``mats[0] @ mats[1] @ ...`` mod p."""
    out = mats[0]
    for m in mats[1:]:
        out = mm(out, m, p)
    return out


def rref(a: np.ndarray, p: int):
    """Reduced row echelon form with lowest-index pivoting.

    Returns ``(R, pivots)`` where ``R`` holds only the nonzero rows.
    """
    m = np.mod(np.array(a, dtype=np.int64), p)
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c])
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        inv = pow(int(m[r, c]), -1, p)
        if inv != 1:
            m[r] = _scale(m[r], inv, p)
        col = m[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            m[hit] = _axpy(m[hit], col[hit], m[r], p)
        pivots.append(c)
        r += 1
    return m[:r], pivots


def _scale(row: np.ndarray, s: int, p: int) -> np.ndarray:
    if (p - 1) ** 2 < _INT_SAFE:
        return np.mod(row * s, p)
    return np.array([(int(x) * s) % p for x in row], dtype=np.int64)


def _axpy(block: np.ndarray, coeffs: np.ndarray, row: np.ndarray, p: int) -> np.ndarray:
    # block - coeffs[:, None] * row  (mod p)
    if (p - 1) ** 2 < _INT_SAFE:
        return np.mod(block - np.mod(np.outer(coeffs, row), p), p)
    prod = np.array([[(int(c) * int(x)) % p for x in row] for c in coeffs], dtype=np.int64)
    return np.mod(block - prod, p)


def rank(a: np.ndarray, p: int) -> int:
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis of ``{x : a x = 0}`` as the columns of the returned matrix."""
    rows, cols = a.shape
    if rows == 0:
        return eye(cols)
    r, piv = rref(a, p)
    free = [c for c in range(cols) if c not in set(piv)]
    basis = zeros(cols, len(free))
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(piv):
            basis[pc, j] = (-int(r[i, f])) % p
    return basis


def column_space(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (columns) of the span of the columns of ``a``, in RREF order."""
    if a.size == 0:
        return zeros(a.shape[0], 0)
    r, _ = rref(a.T, p)
    return r.T.copy()


def solve(a: np.ndarray, b: np.ndarray, p: int):
    """One solution ``x`` of ``a x = b`` (``b`` a vector or matrix), or None."""
    vec = b.ndim == 1
    bb = b.reshape(-1, 1) if vec else b
    rows, cols = a.shape
    if rows == 0:
        x = zeros(cols, bb.shape[1])
        return x.ravel() if vec else x
    aug = np.concatenate([a, bb], axis=1)
    r, piv = rref(aug, p)
    if any(c >= cols for c in piv):
        return None
    x = zeros(cols, bb.shape[1])
    for i, c in enumerate(piv):
        x[c] = r[i, cols:]
    return x.ravel() if vec else x


def inverse(a: np.ndarray, p: int):
    n = a.shape[0]
    if a.shape != (n, n):
        return None
    if n == 0:
        return zeros(0, 0)
    r, piv = rref(np.concatenate([a, eye(n)], axis=1), p)
    if piv[:n] != list(range(n)):
        return None
    return r[:, n:].copy()


def left_inverse(a: np.ndarray, p: int):
    """A matrix ``L`` with ``L a = I`` for injective ``a`` (pivot-row based)."""
    rows, cols = a.shape
    if cols == 0:
        return zeros(0, rows)
    _, piv = rref(a.T, p)
    if len(piv) < cols:
        return None
    sub = a[piv, :]
    inv = inverse(sub, p)
    out = zeros(cols, rows)
    out[:, piv] = inv
    return out


def first_difference(a: np.ndarray, b: np.ndarray):
    """Index of the first column where ``a`` and ``b`` differ, or None."""
    if a.shape != b.shape:
        return -1
    diff = np.any(a != b, axis=0) if a.ndim == 2 else (a != b)
    hit = np.flatnonzero(diff)
    return int(hit[0]) if hit.size else None


class Echelon:
    """Incrementally maintained row-echelon basis of a subspace of F_p^n."""

    def __init__(self, n: int, p: int):
        self.n = n
        self.p = p
        self.rows = zeros(0, n)
        self.pivots: list[int] = []

    @property
    def dim(self) -> int:
        return len(self.pivots)

    def reduce(self, v: np.ndarray) -> np.ndarray:
        v = np.mod(np.array(v, dtype=np.int64), self.p)
        for row, c in zip(self.rows, self.pivots):
            if v[c]:
                v = np.mod(v - _scale(row, int(v[c]), self.p), self.p)
        return v

    def contains(self, v: np.ndarray) -> bool:
        return not np.any(self.reduce(v))

    def add(self, v: np.ndarray) -> bool:
        v = self.reduce(v)
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return False
        c = int(nz[0])
        v = _scale(v, pow(int(v[c]), -1, self.p), self.p)
        if self.rows.shape[0]:
            col = self.rows[:, c].copy()
            hit = np.flatnonzero(col)
            if hit.size:
                self.rows[hit] = _axpy(self.rows[hit], col[hit], v, self.p)
        self.rows = np.vstack([self.rows, v])
        self.pivots.append(c)
        return True
