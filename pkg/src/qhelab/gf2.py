"""Bit-matrix linear algebra over GF(2)."""
from __future__ import annotations

import numpy as np


def solve(mat: np.ndarray, rhs: np.ndarray) -> np.ndarray | None:
    """Solve mat @ x = rhs over GF(2); None if inconsistent."""
    m, n = mat.shape
    a = np.concatenate([mat.copy() & 1, (rhs.copy() & 1).reshape(-1, 1)],
                       axis=1).astype(np.uint8)
    pivots = []
    row = 0
    for col in range(n):
        hit = None
        for r in range(row, m):
            if a[r, col]:
                hit = r
                break
        if hit is None:
            continue
        a[[row, hit]] = a[[hit, row]]
        for r in range(m):
            if r != row and a[r, col]:
                a[r] ^= a[row]
        pivots.append(col)
        row += 1
        if row == m:
            break
    for r in range(row, m):
        if a[r, n]:
            return None
    x = np.zeros(n, np.uint8)
    for r, col in enumerate(pivots):
        x[col] = a[r, n]
    return x


def rank(mat: np.ndarray) -> int:
    a = (mat.copy() & 1).astype(np.uint8)
    m, n = a.shape
    r = 0
    for col in range(n):
        hit = None
        for i in range(r, m):
            if a[i, col]:
                hit = i
                break
        if hit is None:
            continue
        a[[r, hit]] = a[[hit, r]]
        for i in range(m):
            if i != r and a[i, col]:
                a[i] ^= a[r]
        r += 1
        if r == m:
            break
    return r
