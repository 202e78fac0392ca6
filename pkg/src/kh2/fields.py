"""Finite fields GF(2^k), 1 <= k <= 16.

Elements are plain ints whose bits are the coefficients of a polynomial in
the residue class ``z`` of ``x`` modulo a fixed irreducible polynomial.  The
modulus for each k is the lexicographically least irreducible polynomial of
degree k (smallest integer bit pattern), so results are bit-reproducible:

    k=1  x + 1 is not used; GF(2) is represented directly (modulus 0b11)
    k=2  x^2 + x + 1        (0b111)
    k=4  x^4 + x + 1        (0b10011)
    k=8  x^8 + x^4 + x^3 + x + 1 (0x11b)

Multiplication goes through log/antilog tables built from the smallest
primitive element, which need not be ``z`` itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

MAX_DEGREE = 16


def _poly_mulmod(a: int, b: int, modulus: int, k: int) -> int:
    result = 0
    top = 1 << k
    while b:
        if b & 1:
            result ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= modulus
    return result


def _poly_mod(a: int, m: int) -> int:
    dm = m.bit_length()
    while a.bit_length() >= dm:
        a ^= m << (a.bit_length() - dm)
    return a


def is_irreducible(poly: int) -> bool:
    """Trial division by every polynomial of degree <= deg/2 over GF(2)."""
    deg = poly.bit_length() - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if not poly & 1:
        return False
    for d in range(2, 1 << (deg // 2 + 1)):
        if _poly_mod(poly, d) == 0:
            return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(k: int) -> int:
    for candidate in range(1 << k, 1 << (k + 1)):
        if is_irreducible(candidate):
            return candidate
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class GF2k:
    """The field GF(2^k); use :func:`GF` to obtain the cached instance."""

    def __init__(self, k: int):
        if not 1 <= k <= MAX_DEGREE:
            raise ValueError(f"field degree must be in 1..{MAX_DEGREE}, got {k}")
        self.k = k
        self.order = 1 << k
        self.modulus = 0b11 if k == 1 else least_irreducible(k)
        n = self.order - 1
        self.generator = self._find_primitive()
        exp = [0] * (2 * n + 1)
        log = [0] * self.order
        x = 1
        for i in range(n):
            exp[i] = x
            log[x] = i
            x = _poly_mulmod(x, self.generator, self.modulus, k) if k > 1 else 1
        for i in range(n, 2 * n + 1):
            exp[i] = exp[i - n]
        self._exp = exp
        self._log = log
        self.exp_table = np.array(exp, dtype=np.uint16)
        self.log_table = np.array(log, dtype=np.uint16)

    def _find_primitive(self) -> int:
        if self.k == 1:
            return 1
        n = self.order - 1
        factors = [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, int(p**0.5) + 1))]
        for g in range(2, self.order):
            if all(self._slow_pow(g, n // p) != 1 for p in factors):
                return g
        raise AssertionError("no primitive element")  # pragma: no cover

    def _slow_pow(self, a: int, e: int) -> int:
        result = 1
        while e:
            if e & 1:
                result = _poly_mulmod(result, a, self.modulus, self.k)
            a = _poly_mulmod(a, a, self.modulus, self.k)
            e >>= 1
        return result

    def __repr__(self):
        return f"GF(2^{self.k})"

    def __reduce__(self):
        return (GF, (self.k,))

    @property
    def zeta(self) -> int:
        """The class of x; for k=2 this is a root of z^2 + z + 1."""
        return 2 if self.k > 1 else 1

    def elements(self):
        return range(self.order)

    def nonzero_elements(self):
        return range(1, self.order)

    @staticmethod
    def add(a: int, b: int) -> int:
        return a ^ b

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in " + repr(self))
        n = self.order - 1
        return self._exp[(n - self._log[a]) % n]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 1 if e == 0 else 0
        n = self.order - 1
        return self._exp[(self._log[a] * e) % n]

    def contains(self, a: int) -> bool:
        return 0 <= a < self.order

    def embeds_into(self, other: "GF2k") -> bool:
        # only the prime-field embedding is canonical with these moduli
        return self.k == 1 or self.k == other.k

    def format(self, a: int) -> str:
        """Coefficient text as a polynomial in z, e.g. ``z+1``."""
        if self.k == 1 or a in (0, 1):
            return str(a)
        parts = []
        for i in range(a.bit_length() - 1, -1, -1):
            if a >> i & 1:
                parts.append("1" if i == 0 else ("z" if i == 1 else f"z^{i}"))
        return "+".join(parts)


@lru_cache(maxsize=None)
def GF(k: int) -> GF2k:
    return GF2k(k)


@dataclass(frozen=True)
class FieldElem:
    """An element of GF(2^k), carried with its field for user-facing results."""

    field: GF2k
    value: int

    def __post_init__(self):
        if not self.field.contains(self.value):
            raise ValueError(f"{self.value} is not an element of {self.field}")

    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field is not self.field:
                raise ValueError("field mismatch")
            return other.value
        if isinstance(other, int) and other in (0, 1):
            return other
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElem(self.field, self.value ^ v)

    __radd__ = __add__
    __sub__ = __add__

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElem(self.field, self.field.mul(self.value, v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return v
        return FieldElem(self.field, self.field.div(self.value, v))

    def __pow__(self, e: int):
        return FieldElem(self.field, self.field.pow(self.value, e))

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field.k == other.field.k and self.value == other.value
        if isinstance(other, int):
            return self.value == other
        return NotImplemented

    def __hash__(self):
        return hash((self.field.k, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FieldElem(GF(2^{self.field.k}), {self.field.format(self.value)})"
