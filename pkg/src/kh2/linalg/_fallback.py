"""Pure numpy implementations of the field kernels, used when the extension is absent."""

from __future__ import annotations

import numpy as np


def _mul_vec(row: np.ndarray, f: int, exp: np.ndarray, log: np.ndarray) -> np.ndarray:
    out = np.zeros_like(row)
    nz = row != 0
    out[nz] = exp[log[row[nz]].astype(np.int64) + int(log[f])]
    return out


def rref_inplace(a: np.ndarray, exp: np.ndarray, log: np.ndarray, order: int) -> list:
    nr, nc = a.shape
    n = order - 1
    pivots = []
    r = 0
    for c in range(nc):
        if r >= nr:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            a[[r, p]] = a[[p, r]]
        piv = int(a[r, c])
        if piv != 1:
            inv = int(exp[(n - int(log[piv])) % n])
            a[r, c:] = _mul_vec(a[r, c:], inv, exp, log)
        rows = np.flatnonzero(a[:, c])
        rows = rows[rows != r]
        if rows.size:
            if order == 2:
                a[rows, c:] ^= a[r, c:]
            else:
                # a[i, j] ^= a[r, j] * a[i, c] through log tables, all rows at once
                prow = a[r, c:]
                pnz = prow != 0
                f = log[a[rows, c]].astype(np.int64)
                prod = exp[f[:, None] + log[prow[pnz]].astype(np.int64)[None, :]]
                sub = a[rows, c:]
                sub[:, pnz] ^= prod
                a[rows, c:] = sub
        pivots.append(c)
        r += 1
    return pivots


def rank_gf2_packed(rows: np.ndarray, ncols: int) -> int:
    # Python ints as bitsets; each row is one integer
    ints = [int.from_bytes(r.tobytes(), "little") for r in rows]
    rank = 0
    basis: dict[int, int] = {}  # leading bit -> row
    for x in ints:
        while x:
            top = x.bit_length() - 1
            b = basis.get(top)
            if b is None:
                basis[top] = x
                rank += 1
                break
            x ^= b
    return rank


def matmul(a: np.ndarray, b: np.ndarray, exp: np.ndarray, log: np.ndarray) -> np.ndarray:
    n, m = a.shape
    l = b.shape[1]
    out = np.zeros((n, l), dtype=np.uint16)
    if exp.shape[0] <= 3:  # GF(2)
        return ((a.astype(np.int64) @ b.astype(np.int64)) & 1).astype(np.uint16)
    for k in range(m):
        col = a[:, k]
        row = b[k, :]
        ci = np.flatnonzero(col)
        rj = np.flatnonzero(row)
        if ci.size == 0 or rj.size == 0:
            continue
        prod = exp[log[col[ci]].astype(np.int64)[:, None] + log[row[rj]].astype(np.int64)[None, :]]
        out[np.ix_(ci, rj)] ^= prod
    return out
