"""Dense univariate polynomials over GF(2^k), coefficient lists low degree first."""

from __future__ import annotations

from ..fields import GF2k


def trim(a: list) -> list:
    while a and a[-1] == 0:
        a.pop()
    return a


def deg(a: list) -> int:
    return len(a) - 1  # -1 for zero


def add(a: list, b: list) -> list:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] ^= x
    return trim(out)


def mul(a: list, b: list, fld: GF2k) -> list:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] ^= fld.mul(x, y)
    return trim(out)


def scale(a: list, c: int, fld: GF2k) -> list:
    if c == 0:
        return []
    return [fld.mul(x, c) for x in a]


def divmod_(a: list, b: list, fld: GF2k) -> tuple[list, list]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    db = deg(b)
    if deg(r) < db:
        return [], trim(r)
    q = [0] * (deg(r) - db + 1)
    inv_lead = fld.inv(b[-1])
    while r and deg(r) >= db:
        c = fld.mul(r[-1], inv_lead)
        s = deg(r) - db
        q[s] = c
        for i, y in enumerate(b):
            if y:
                r[i + s] ^= fld.mul(c, y)
        trim(r)
    return trim(q), r


def monic(a: list, fld: GF2k) -> list:
    if not a or a[-1] == 1:
        return list(a)
    return scale(a, fld.inv(a[-1]), fld)


def gcd(a: list, b: list, fld: GF2k) -> list:
    a, b = trim(list(a)), trim(list(b))
    while b:
        a, b = b, divmod_(a, b, fld)[1]
    return monic(a, fld)


def strip_x(a: list) -> tuple[list, int]:
    """Remove the largest power of x dividing a; return (quotient, power)."""
    n = 0
    while n < len(a) and a[n] == 0:
        n += 1
    return a[n:], n
