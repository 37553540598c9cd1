"""Exact linear algebra over a FieldCtx.

Prime fields use numpy int64 arrays; extension fields fall back to Python
loops over encoded elements stored in object arrays.
"""
from __future__ import annotations

import numpy as np
from scipy.linalg.blas import dger

from .arith import FieldCtx

_FLOAT_EXACT = 2 ** 53


def _prime(F: FieldCtx) -> bool:
    return F.k == 1 and F.p < 2 ** 31


def asmat(A, F: FieldCtx) -> np.ndarray:
    """Copy A into the canonical array type for F."""
    if _prime(F):
        return np.array(A, dtype=np.int64).reshape(np.shape(A)) % F.p
    return np.array(A, dtype=object).reshape(np.shape(A))


def zeros(shape, F: FieldCtx) -> np.ndarray:
    if _prime(F):
        return np.zeros(shape, dtype=np.int64)
    out = np.empty(shape, dtype=object)
    out.fill(0)
    return out


def rref(A, F: FieldCtx):
    """Reduced row echelon form and pivot columns."""
    A = asmat(A, F)
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    if _prime(F):
        return _rref_prime(A, F.p)
    return _rref_generic(A, F)


def _rref_prime(A, p):
    if p < 2 ** 26:
        return _rref_float(A, p)
    return _rref_int(A, p)


def _rref_float(A, p):
    """Gauss-Jordan in float64 with delayed reduction and BLAS rank-1 updates.

    Entries stay integers of magnitude < 2^53, so every step is exact.
    """
    A = np.asfortranarray(A, dtype=np.float64)
    m, n = A.shape
    pivots = []
    r = 0
    pp = float(p) * p
    bound = float(p)
    for c in range(n):
        if r == m:
            break
        col = np.fmod(A[:, c], p)
        A[:, c] = col
        nz = np.flatnonzero(col[r:])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
            col[[r, i]] = col[[i, r]]
        inv = pow(int(col[r]) % p, -1, p)
        prow = np.fmod(np.fmod(A[r, c:], p) * inv, p)
        A[r, c:] = prow
        col[r] = 0.0
        if bound + pp >= _FLOAT_EXACT:
            A[:, c:] = np.fmod(A[:, c:], p)
            bound = float(p)
        sub_ = A[:, c:]
        out = dger(-1.0, col, prow, a=sub_, overwrite_a=True)
        if not np.shares_memory(out, sub_):
            A[:, c:] = out
        bound += pp
        pivots.append(c)
        r += 1
    A = np.fmod(A, p)
    A[A < 0] += p
    return np.ascontiguousarray(A.astype(np.int64)), pivots


def _rref_int(A, p):
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r, c:] = A[r, c:] * inv % p
        col = A[:, c].copy()
        col[r] = 0
        rows = np.flatnonzero(col)
        if rows.size:
            A[rows, c:] = (A[rows, c:] - np.outer(col[rows], A[r, c:])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def _rref_generic(A, F):
    m, n = A.shape
    pivots = []
    r = 0
    for c in range(n):
        if r == m:
            break
        i = next((i for i in range(r, m) if A[i, c] != 0), None)
        if i is None:
            continue
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = F.inv(A[r, c])
        A[r, c:] = [F.mul(v, inv) for v in A[r, c:]]
        prow = list(A[r, c:])
        for i in range(m):
            f = A[i, c]
            if i == r or f == 0:
                continue
            A[i, c:] = [F.sub(a, F.mul(f, b)) for a, b in zip(A[i, c:], prow)]
        pivots.append(c)
        r += 1
    return A, pivots


def rank(A, F: FieldCtx) -> int:
    if np.size(A) == 0:
        return 0
    return len(rref(A, F)[1])


def nullspace(A, F: FieldCtx) -> np.ndarray:
    """Basis of {v : A v = 0} as the rows of the returned matrix."""
    A = asmat(A, F)
    n = A.shape[1]
    if A.shape[0] == 0:
        return asmat(np.eye(n, dtype=np.int64), F)
    R, piv = rref(A, F)
    free = [c for c in range(n) if c not in set(piv)]
    N = zeros((len(free), n), F)
    for k, f in enumerate(free):
        N[k, f] = 1
        for j, c in enumerate(piv):
            N[k, c] = F.neg(int(R[j, f]))
    return N


def row_basis(A, F: FieldCtx) -> np.ndarray:
    """Nonzero rows of the reduced echelon form."""
    R, piv = rref(A, F)
    return R[:len(piv)]


def solve(A, B, F: FieldCtx):
    """Some X with A X = B, or None when inconsistent."""
    A = asmat(A, F)
    B = asmat(B, F)
    vec = B.ndim == 1
    if vec:
        B = B.reshape(-1, 1)
    m, n = A.shape
    R, piv = rref(np.concatenate([A, B], axis=1), F)
    if piv and piv[-1] >= n:
        return None
    X = zeros((n, B.shape[1]), F)
    for j, c in enumerate(piv):
        X[c] = R[j, n:]
    return X[:, 0] if vec else X


def inverse(A, F: FieldCtx):
    n = np.shape(A)[0]
    X = solve(A, asmat(np.eye(n, dtype=np.int64), F), F)
    if X is None or rank(A, F) != n:
        raise ZeroDivisionError("singular matrix")
    return X


def det(A, F: FieldCtx) -> int:
    A = asmat(A, F)
    n = A.shape[0]
    d = 1
    A = A.copy()
    for c in range(n):
        i = next((i for i in range(c, n) if A[i, c] != 0), None)
        if i is None:
            return 0
        if i != c:
            A[[c, i]] = A[[i, c]]
            d = F.neg(d)
        piv = int(A[c, c])
        d = F.mul(d, piv)
        inv = F.inv(piv)
        for r in range(c + 1, n):
            f = F.mul(int(A[r, c]), inv)
            if f:
                for k in range(c, n):
                    A[r, k] = F.sub(int(A[r, k]), F.mul(f, int(A[c, k])))
    return d


def matmul(A, B, F: FieldCtx) -> np.ndarray:
    A = asmat(A, F)
    B = asmat(B, F)
    if _prime(F):
        p = F.p
        inner = A.shape[-1]
        if inner * (p - 1) ** 2 < _FLOAT_EXACT:
            return (A.astype(np.float64) @ B.astype(np.float64)
                    ).astype(np.int64) % p
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for k in range(inner):
            out = (out + np.outer(A[:, k], B[k])) % p
        return out
    out = zeros((A.shape[0], B.shape[1]), F)
    for i in range(A.shape[0]):
        for j in range(B.shape[1]):
            acc = 0
            for k in range(A.shape[1]):
                if A[i, k] and B[k, j]:
                    acc = F.add(acc, F.mul(A[i, k], B[k, j]))
            out[i, j] = acc
    return out


def identity(n: int, F: FieldCtx) -> np.ndarray:
    return asmat(np.eye(n, dtype=np.int64), F)


def scale(A, c: int, F: FieldCtx) -> np.ndarray:
    A = asmat(A, F)
    if _prime(F):
        return A * c % F.p
    out = A.copy()
    for idx in np.ndindex(A.shape):
        out[idx] = F.mul(A[idx], c)
    return out


def add(A, B, F: FieldCtx) -> np.ndarray:
    A = asmat(A, F)
    B = asmat(B, F)
    if _prime(F):
        return (A + B) % F.p
    out = A.copy()
    for idx in np.ndindex(A.shape):
        out[idx] = F.add(A[idx], B[idx])
    return out


def sub(A, B, F: FieldCtx) -> np.ndarray:
    return add(A, scale(B, F.neg(1), F), F)
