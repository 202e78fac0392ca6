"""Small dense matrices over a :class:`RingDescriptor`, as lists of rows."""

from __future__ import annotations

from .rings import LaurentPoly, RingDescriptor

Matrix = list  # list[list[LaurentPoly]]


def zeros(ring: RingDescriptor, nrows: int, ncols: int) -> Matrix:
    z = ring.zero()
    return [[z] * ncols for _ in range(nrows)]


def identity(ring: RingDescriptor, n: int) -> Matrix:
    m = zeros(ring, n, n)
    for i in range(n):
        m[i][i] = ring.one()
    return m


def matmul(a: Matrix, b: Matrix, ring: RingDescriptor) -> Matrix:
    n, k = len(a), len(b)
    m = len(b[0]) if b else 0
    if a and len(a[0]) != k:
        raise ValueError(f"shape mismatch {len(a)}x{len(a[0])} @ {k}x{m}")
    out = zeros(ring, n, m)
    for i in range(n):
        row = a[i]
        for j in range(k):
            aij = row[j]
            if not aij:
                continue
            brow = b[j]
            for l in range(m):
                if brow[l]:
                    out[i][l] = out[i][l] + aij * brow[l]
    return out


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(a: Matrix, c: LaurentPoly) -> Matrix:
    return [[x * c for x in row] for row in a]


def kron(a: Matrix, b: Matrix, ring: RingDescriptor) -> Matrix:
    ra, ca = len(a), len(a[0])
    rb, cb = len(b), len(b[0])
    out = zeros(ring, ra * rb, ca * cb)
    for i in range(ra):
        for j in range(ca):
            if not a[i][j]:
                continue
            for k in range(rb):
                for l in range(cb):
                    if b[k][l]:
                        out[i * rb + k][j * cb + l] = a[i][j] * b[k][l]
    return out


def is_zero(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def det2(a: Matrix) -> LaurentPoly:
    return a[0][0] * a[1][1] + a[0][1] * a[1][0]


def to_text(a: Matrix) -> str:
    return "[" + ", ".join("[" + ", ".join(str(x) for x in row) + "]" for row in a) + "]"
