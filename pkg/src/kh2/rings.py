"""Characteristic-2 Laurent polynomial rings, their homomorphisms, and named constants.

Every coefficient ring used by the homology engines is a ring
``GF(2^k)[x_1^(±1), ..., x_n^(±1)]`` in which each variable is either Laurent
(negative exponents allowed) or polynomial.  Arity 0 gives the field itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import NotAUnitError, ResourceLimitError, RingMismatchError
from .fields import GF, FieldElem, GF2k

EXPONENT_BOUND = 2**31


@dataclass(frozen=True)
class RingDescriptor:
    field_degree: int
    variable_names: tuple[str, ...]
    laurent_mask: tuple[bool, ...]

    def __post_init__(self):
        if len(self.variable_names) != len(self.laurent_mask):
            raise ValueError("variable_names and laurent_mask must have equal length")
        if len(set(self.variable_names)) != len(self.variable_names):
            raise ValueError("duplicate variable names")
        GF(self.field_degree)

    @property
    def arity(self) -> int:
        return len(self.variable_names)

    @property
    def field(self) -> GF2k:
        return GF(self.field_degree)

    @property
    def is_field(self) -> bool:
        return self.arity == 0

    @property
    def is_laurent(self) -> bool:
        return all(self.laurent_mask)

    def __str__(self):
        base = "F2" if self.field_degree == 1 else f"GF(2^{self.field_degree})"
        if not self.variable_names:
            return base
        vs = ",".join(f"{n}^±1" if lm else n for n, lm in zip(self.variable_names, self.laurent_mask))
        return f"{base}[{vs}]"

    # -- element constructors ---------------------------------------------
    def zero(self) -> "LaurentPoly":
        return LaurentPoly(self, {})

    def one(self) -> "LaurentPoly":
        return self.constant(1)

    def constant(self, c: int) -> "LaurentPoly":
        c = int(c)
        if not self.field.contains(c):
            raise ValueError(f"{c} is not an element of {self.field}")
        return LaurentPoly(self, {(0,) * self.arity: c} if c else {})

    def gen(self, name_or_index) -> "LaurentPoly":
        i = self.index(name_or_index)
        exps = tuple(1 if j == i else 0 for j in range(self.arity))
        return LaurentPoly(self, {exps: 1})

    def gens(self) -> tuple["LaurentPoly", ...]:
        return tuple(self.gen(i) for i in range(self.arity))

    def monomial(self, exponents: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        return LaurentPoly.from_terms(self, {tuple(exponents): coeff})

    def index(self, name_or_index) -> int:
        if isinstance(name_or_index, int):
            if not 0 <= name_or_index < self.arity:
                raise IndexError(name_or_index)
            return name_or_index
        try:
            return self.variable_names.index(name_or_index)
        except ValueError:
            raise KeyError(f"unknown variable {name_or_index!r} in {self}") from None

    def __call__(self, value) -> "LaurentPoly":
        if isinstance(value, LaurentPoly):
            if value.ring != self:
                raise RingMismatchError(f"{value.ring} is not {self}")
            return value
        if isinstance(value, FieldElem):
            return self.constant(value.value)
        return self.constant(value)


def polynomial_ring(names: Iterable[str], field_degree: int = 1) -> RingDescriptor:
    names = tuple(names)
    return RingDescriptor(field_degree, names, (False,) * len(names))


def laurent_ring(names: Iterable[str], field_degree: int = 1) -> RingDescriptor:
    names = tuple(names)
    return RingDescriptor(field_degree, names, (True,) * len(names))


def _check_exponents(exps, ring: RingDescriptor):
    for e, lm in zip(exps, ring.laurent_mask):
        if e < 0 and not lm:
            raise ValueError(f"negative exponent for polynomial variable in {ring}")
        if not -EXPONENT_BOUND <= e <= EXPONENT_BOUND:
            raise ResourceLimitError(f"exponent {e} exceeds the bound ±2^31")


class LaurentPoly:
    """Immutable finite-support polynomial; zero coefficients are never stored."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingDescriptor, terms: dict):
        # trusted constructor: terms already canonical
        self.ring = ring
        self.terms = terms
        self._hash = None

    @classmethod
    def from_terms(cls, ring: RingDescriptor, terms: Mapping[Sequence[int], int]) -> "LaurentPoly":
        fld = ring.field
        out: dict = {}
        for exps, c in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != ring.arity:
                raise ValueError(f"monomial arity {len(exps)} does not match {ring}")
            c = int(c)
            if not fld.contains(c):
                raise ValueError(f"{c} is not an element of {fld}")
            if not c:
                continue
            _check_exponents(exps, ring)
            v = out.get(exps, 0) ^ c
            if v:
                out[exps] = v
            else:
                out.pop(exps, None)
        return cls(ring, out)

    # -- predicates ---------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms.get((0,) * self.ring.arity) == 1

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and (0,) * self.ring.arity in self.terms)

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def is_unit(self) -> bool:
        """Units are single terms whose variables are all Laurent."""
        if len(self.terms) != 1:
            return False
        (exps,) = self.terms
        return all(e == 0 or lm for e, lm in zip(exps, self.ring.laurent_mask))

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return self.terms.get((0,) * self.ring.arity, 0)

    # -- arithmetic -------------------------------------------------------
    def _check(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.ring != self.ring:
                raise RingMismatchError(f"cannot combine elements of {self.ring} and {other.ring}")
            return other
        if isinstance(other, int):
            return self.ring.constant(other)
        if isinstance(other, FieldElem):
            return self.ring.constant(other.value)
        return NotImplemented

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for exps, c in other.terms.items():
            v = out.get(exps, 0) ^ c
            if v:
                out[exps] = v
            else:
                del out[exps]
        return LaurentPoly(self.ring, out)

    __radd__ = __add__
    __sub__ = __add__
    __rsub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return LaurentPoly(self.ring, {})
        fld = self.ring.field
        arity = self.ring.arity
        if arity and len(self.terms) * len(other.terms) > 64:
            return LaurentPoly(self.ring, _packed_product(self.terms, other.terms, arity, fld))
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exps = tuple(e1[i] + e2[i] for i in range(arity)) if arity else ()
                c = c1 if c2 == 1 else (c2 if c1 == 1 else fld.mul(c1, c2))
                v = out.get(exps, 0) ^ c
                if v:
                    out[exps] = v
                else:
                    del out[exps]
        for exps in out:
            for e in exps:
                if not -EXPONENT_BOUND <= e <= EXPONENT_BOUND:
                    raise ResourceLimitError(f"exponent {e} exceeds the bound ±2^31")
        return LaurentPoly(self.ring, out)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentPoly":
        if not self.is_unit():
            raise NotAUnitError(f"{self} is not a unit of {self.ring}")
        ((exps, c),) = self.terms.items()
        return LaurentPoly(self.ring, {tuple(-e for e in exps): self.ring.field.inv(c)})

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.ring.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def scale(self, c: int) -> "LaurentPoly":
        if c == 0:
            return LaurentPoly(self.ring, {})
        if c == 1:
            return self
        fld = self.ring.field
        return LaurentPoly(self.ring, {e: fld.mul(v, c) for e, v in self.terms.items()})

    def shift(self, exps: Sequence[int]) -> "LaurentPoly":
        """Multiply by the monomial with the given exponent vector."""
        out = {tuple(a + b for a, b in zip(e, exps)): c for e, c in self.terms.items()}
        for e in out:
            _check_exponents(e, self.ring)
        return LaurentPoly(self.ring, out)

    # -- comparison / hashing -----------------------------------------------
    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.ring == other.ring and self.terms == other.terms
        if isinstance(other, int):
            return self.terms == self.ring.constant(other).terms if self.ring.field.contains(other) else False
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, frozenset(self.terms.items())))
        return self._hash

    # -- structure ----------------------------------------------------------
    def sorted_terms(self, descending: bool = True):
        return sorted(self.terms.items(), reverse=descending)

    def min_exponents(self) -> tuple[int, ...]:
        if not self.terms:
            return (0,) * self.ring.arity
        return tuple(min(e[i] for e in self.terms) for i in range(self.ring.arity))

    def max_exponents(self) -> tuple[int, ...]:
        if not self.terms:
            return (0,) * self.ring.arity
        return tuple(max(e[i] for e in self.terms) for i in range(self.ring.arity))

    def variables_used(self) -> set[int]:
        return {i for e in self.terms for i, x in enumerate(e) if x}

    def evaluate(self, point: Sequence[int], fld: GF2k | None = None) -> int:
        """Evaluate at a point of GF(2^K)^n, returned as a raw field int.

        ``fld`` defaults to the ring's own field; coefficients must embed into it.
        """
        fld = fld or self.ring.field
        if len(point) != self.ring.arity:
            raise ValueError(f"point has {len(point)} coordinates, ring has {self.ring.arity} variables")
        if not self.ring.field.embeds_into(fld):
            raise RingMismatchError(f"{self.ring.field} does not embed into {fld}")
        for x, lm in zip(point, self.ring.laurent_mask):
            if not fld.contains(x):
                raise ValueError(f"{x} is not an element of {fld}")
            if lm and x == 0:
                raise ZeroDivisionError("zero coordinate for a Laurent variable")
        total = 0
        for exps, c in self.terms.items():
            v = c
            for x, e in zip(point, exps):
                if e:
                    v = fld.mul(v, fld.pow(x, e))
                    if not v:
                        break
            total ^= v
        return total

    # -- text -----------------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        fld = self.ring.field
        parts = []
        for exps, c in self.sorted_terms():
            factors = []
            for name, e in zip(self.ring.variable_names, exps):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            mono = "*".join(factors)
            if c == 1:
                parts.append(mono or "1")
            else:
                coeff = fld.format(c)
                if "+" in coeff:
                    coeff = f"({coeff})"
                parts.append(f"{coeff}*{mono}" if mono else coeff)
        return " + ".join(parts)

    def __repr__(self):
        return f"LaurentPoly({self.ring}, {self})"


def _packed_product(t1: dict, t2: dict, arity: int, fld) -> dict:
    """Product with exponent vectors packed into one int per monomial.

    Field widths come from the operands' exponent ranges, so keys stay small
    ints and sums of packed keys never carry between fields.
    """
    lo = [min(e[i] for e in t1) + min(e[i] for e in t2) for i in range(arity)]
    hi = [max(e[i] for e in t1) + max(e[i] for e in t2) for i in range(arity)]
    for a, b in zip(lo, hi):
        if not (-EXPONENT_BOUND <= a and b <= EXPONENT_BOUND):
            raise ResourceLimitError(f"exponent {a if a < -EXPONENT_BOUND else b} exceeds the bound ±2^31")
    m1 = [min(e[i] for e in t1) for i in range(arity)]
    m2 = [min(e[i] for e in t2) for i in range(arity)]
    widths = [max(1, (b - a).bit_length()) for a, b in zip(lo, hi)]
    shifts = [sum(widths[:i]) for i in range(arity)]

    def pack(e, m):
        return sum((x - mi) << sh for x, mi, sh in zip(e, m, shifts))

    if sum(widths) <= 62:
        return _numpy_product(t1, t2, m1, m2, lo, widths, shifts, fld)
    p2 = [(pack(e, m2), c) for e, c in t2.items()]
    acc: dict = {}
    get = acc.get
    for e1, c1 in t1.items():
        k1 = pack(e1, m1)
        for k2, c2 in p2:
            c = c1 if c2 == 1 else (c2 if c1 == 1 else fld.mul(c1, c2))
            k = k1 + k2
            v = get(k, 0) ^ c
            if v:
                acc[k] = v
            else:
                del acc[k]
    masks = [(1 << w) - 1 for w in widths]
    return {tuple(((k >> sh) & mk) + a for sh, mk, a in zip(shifts, masks, lo)): c for k, c in acc.items()}


def _numpy_product(t1, t2, m1, m2, lo, widths, shifts, fld) -> dict:
    e1 = np.array(list(t1), dtype=np.int64) - np.array(m1, dtype=np.int64)
    e2 = np.array(list(t2), dtype=np.int64) - np.array(m2, dtype=np.int64)
    sh = np.array(shifts, dtype=np.int64)
    k1 = (e1 << sh).sum(axis=1)
    k2 = (e2 << sh).sum(axis=1)
    keys = (k1[:, None] + k2[None, :]).ravel()
    if fld.k == 1:
        uniq, counts = np.unique(keys, return_counts=True)
        kept = uniq[counts & 1 == 1]
        coeffs = np.ones(kept.size, dtype=np.int64)
    else:
        c1 = np.array(list(t1.values()), dtype=np.int64)
        c2 = np.array(list(t2.values()), dtype=np.int64)
        logs = fld.log_table.astype(np.int64)
        vals = fld.exp_table.astype(np.int64)[(logs[c1][:, None] + logs[c2][None, :]).ravel()]
        order = np.argsort(keys, kind="stable")
        keys, vals = keys[order], vals[order]
        starts = np.flatnonzero(np.r_[True, keys[1:] != keys[:-1]])
        red = np.bitwise_xor.reduceat(vals, starts)
        nz = red != 0
        kept, coeffs = keys[starts][nz], red[nz]
    cols = [((kept >> s_) & ((1 << w) - 1)) + a for s_, w, a in zip(shifts, widths, lo)]
    exps = zip(*(c.tolist() for c in cols))
    return dict(zip(exps, coeffs.tolist()))


@dataclass(frozen=True)
class RingHom:
    """Substitution homomorphism: source variable i goes to ``images[i]``."""

    source: RingDescriptor
    target: RingDescriptor
    images: tuple[LaurentPoly, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if len(self.images) != self.source.arity:
            raise ValueError(f"need {self.source.arity} images, got {len(self.images)}")
        for img, lm, var in zip(self.images, self.source.laurent_mask, self.source.variable_names):
            if img.ring != self.target:
                raise RingMismatchError(f"image of {var} is not in {self.target}")
            if lm and not img.is_unit():
                raise NotAUnitError(f"image of Laurent variable {var} must be a unit, got {img}")
        if not self.source.field.embeds_into(self.target.field):
            raise RingMismatchError(f"{self.source.field} does not embed into {self.target.field}")

    @classmethod
    def identity(cls, ring: RingDescriptor) -> "RingHom":
        return cls(ring, ring, ring.gens(), name="id")

    def __call__(self, f: LaurentPoly) -> LaurentPoly:
        return hom_apply(self, f)

    def compose(self, inner: "RingHom") -> "RingHom":
        """``self ∘ inner``: apply ``inner`` first."""
        if inner.target != self.source:
            raise RingMismatchError("cannot compose: target/source mismatch")
        name = f"{self.name}∘{inner.name}" if self.name and inner.name else ""
        return RingHom(inner.source, self.target, tuple(self(img) for img in inner.images), name=name)

    def __str__(self):
        maps = ", ".join(f"{v}↦{img}" for v, img in zip(self.source.variable_names, self.images))
        return f"{self.source} → {self.target}: {maps}"


def hom_apply(phi: RingHom, f: LaurentPoly) -> LaurentPoly:
    if f.ring != phi.source:
        raise RingMismatchError(f"{f} is not in {phi.source}")
    tgt = phi.target
    result = tgt.zero()
    power_cache: dict = {}
    for exps, c in f.terms.items():
        term = tgt.constant(c)
        for i, e in enumerate(exps):
            if e:
                key = (i, e)
                p = power_cache.get(key)
                if p is None:
                    p = power_cache[key] = phi.images[i] ** e
                term = term * p
        result = result + term
    return result


def specialize_at_point(f: LaurentPoly, point: Sequence, fld: GF2k | None = None) -> FieldElem:
    """Evaluation homomorphism into GF(2^K); coordinates may be ints or FieldElems."""
    if fld is None:
        fields = {p.field.k for p in point if isinstance(p, FieldElem)}
        fld = GF(max(fields)) if fields else f.ring.field
    raw = [p.value if isinstance(p, FieldElem) else int(p) for p in point]
    return FieldElem(fld, f.evaluate(raw, fld))


# -- the rings and constants of the theory -------------------------------------

R5 = polynomial_ring(("h", "t"))
"""F2[h, t], the coefficient ring of the universal system F5."""

CALR = laurent_ring(("T0", "T1", "T2", "T3"))
"""The four-variable Laurent ring over F2 carrying P and Q."""

S_BN_LAURENT = laurent_ring(("T1", "T2", "T3"))
"""The three-variable Laurent ring of the Bar-Natan base change."""

S_BN = polynomial_ring(("h",))
"""F2[h], graded Bar-Natan coefficients."""

F2T = laurent_ring(("T",))
"""F2[T, T^-1]."""

F2 = RingDescriptor(1, (), ())
F4 = RingDescriptor(2, (), ())


def _build_constants():
    T0, T1, T2, T3 = CALR.gens()
    P = T1 * T2 * T3 + T1 * T2**-1 * T3**-1 + T2 * T3**-1 * T1**-1 + T3 * T1**-1 * T2**-1
    Q = CALR.zero()
    for T in (T0, T1, T2, T3):
        Q = Q + T**2 + T**-2
    U1, U2, U3 = S_BN_LAURENT.gens()
    A = U1 * (U2 * U3 + U2**-1 * U3**-1)
    A_prime = U1**-1 * (U2**-1 * U3 + U2 * U3**-1)
    V_fm = P + T0**2 + T0**-2
    return P, Q, A, A_prime, V_fm


P, Q, A, A_PRIME, V_FM = _build_constants()


@dataclass(frozen=True)
class NamedConstants:
    P: LaurentPoly
    Q: LaurentPoly
    A: LaurentPoly
    A_prime: LaurentPoly
    V_fm: LaurentPoly


CONSTANTS = NamedConstants(P, Q, A, A_PRIME, V_FM)


def _build_homs():
    T0, T1, T2, T3 = CALR.gens()
    U1, U2, U3 = S_BN_LAURENT.gens()
    r = RingHom(R5, CALR, (P, Q), name="r")
    s_bn = RingHom(CALR, S_BN_LAURENT, (U1, U1, U2, U3), name="s_bn")
    T = F2T.gen(0)
    s_T = RingHom(CALR, F2T, (F2T.one(), F2T.one(), T, T), name="s_T")
    zeta = F4.constant(GF(2).zeta)
    s_fbn = RingHom(CALR, F4, (F4.one(), F4.one(), zeta, zeta), name="s_fbn")
    tau_bn = RingHom(R5, S_BN, (S_BN.gen(0), S_BN.zero()), name="tau_bn")
    return r, s_bn, s_T, s_fbn, tau_bn


r, s_bn, s_T, s_fbn, tau_bn = _build_homs()

NAMED_RINGS = {
    "R5": R5,
    "calR": CALR,
    "S_BN": S_BN_LAURENT,
    "F2[h]": S_BN,
    "F2[T]": F2T,
    "F2": F2,
    "F4": F4,
}
