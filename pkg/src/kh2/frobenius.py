"""Rank-2 Frobenius systems in characteristic 2.

A system is a coefficient ring S with the algebra ``S[X]/(X^2 + alpha X + beta)``
and basis ``x+ = 1``, ``x- = X``.  The counit is ``eps(1) = 0, eps(X) = 1``;
the comultiplication is

    Delta(1) = 1⊗X + X⊗1 + alpha 1⊗1
    Delta(X) = X⊗X + beta 1⊗1

When a root ``A`` of ``x^2 + alpha x + beta`` is supplied the reduced theory is
available, built on the line spanned by ``m = X + A'`` with ``A' = A + alpha``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from . import matrices as mx
from .errors import ReducedTheoryUndefined, RingMismatchError
from .rings import (
    A as _A,
    F2T,
    F4,
    R5,
    S_BN,
    LaurentPoly,
    RingDescriptor,
    RingHom,
    r as _r,
    s_bn as _s_bn,
    s_fbn as _s_fbn,
    s_T as _s_T,
)


@dataclass(frozen=True)
class AlgebraElem:
    """``c1 * x+ + cX * x-``."""

    c1: LaurentPoly
    cX: LaurentPoly

    def __add__(self, other: "AlgebraElem") -> "AlgebraElem":
        return AlgebraElem(self.c1 + other.c1, self.cX + other.cX)

    def scale(self, c: LaurentPoly) -> "AlgebraElem":
        return AlgebraElem(self.c1 * c, self.cX * c)

    def as_column(self) -> list:
        return [[self.c1], [self.cX]]

    def __str__(self):
        parts = []
        for c, b in ((self.c1, "x+"), (self.cX, "x-")):
            if c.is_one():
                parts.append(b)
            elif c:
                parts.append(f"({c})*{b}")
        return " + ".join(parts) or "0"


class TensorWord(dict):
    """Sparse element of V^{⊗n}: bit-string tuple -> coefficient (bit 1 is an x- factor)."""

    def __init__(self, n: int, items=()):
        super().__init__()
        self.n = n
        for key, c in dict(items).items():
            self.add_term(key, c)

    def add_term(self, key: tuple, c: LaurentPoly):
        if len(key) != self.n:
            raise ValueError(f"tensor word of length {len(key)} in V^⊗{self.n}")
        if not c:
            return
        v = self.get(key)
        v = c if v is None else v + c
        if v:
            self[key] = v
        else:
            self.pop(key, None)

    def __eq__(self, other):
        return isinstance(other, TensorWord) and self.n == other.n and dict.__eq__(self, other)

    __hash__ = None


@dataclass(frozen=True)
class FrobeniusSystem:
    ring: RingDescriptor
    alpha: LaurentPoly
    beta: LaurentPoly
    root: Optional[LaurentPoly] = None
    name: str = field(default="custom", compare=False)
    # q-degree of each ring variable; None means the ring carries no grading
    weights: Optional[tuple[int, ...]] = field(default=None, compare=False)

    def __post_init__(self):
        for label, v in (("alpha", self.alpha), ("beta", self.beta), ("root", self.root)):
            if v is not None and v.ring != self.ring:
                raise RingMismatchError(f"{label} = {v} is not in {self.ring}")
        if self.root is not None:
            if self.root * self.root + self.alpha * self.root + self.beta:
                raise ValueError(f"root {self.root} does not satisfy A^2 + alpha A + beta = 0")
        if self.weights is not None and len(self.weights) != self.ring.arity:
            raise ValueError("one weight per ring variable required")

    # -- basic elements ---------------------------------------------------
    @property
    def one(self) -> AlgebraElem:
        return AlgebraElem(self.ring.one(), self.ring.zero())

    @property
    def X(self) -> AlgebraElem:
        return AlgebraElem(self.ring.zero(), self.ring.one())

    x_plus = one
    x_minus = X

    @property
    def has_root(self) -> bool:
        return self.root is not None

    @property
    def root_conjugate(self) -> LaurentPoly:
        """A' = A + alpha, the other root."""
        self._require_root()
        return self.root + self.alpha

    def _require_root(self):
        if self.root is None:
            raise ReducedTheoryUndefined(
                f"system {self.name!r} has no root of x^2 + alpha x + beta; the reduced theory is undefined"
            )

    # -- structure maps on basis indices (0 = x+, 1 = x-) --------------------
    def mult_table(self) -> dict:
        """(i, j) -> (coefficient of x+, coefficient of x-) for the product."""
        z, o = self.ring.zero(), self.ring.one()
        return {
            (0, 0): (o, z),
            (0, 1): (z, o),
            (1, 0): (z, o),
            (1, 1): (self.beta, self.alpha),
        }

    def comult_table(self) -> dict:
        """i -> {(j, k): coefficient} for Delta(basis i)."""
        o = self.ring.one()
        d0 = {(0, 1): o, (1, 0): o}
        if self.alpha:
            d0[(0, 0)] = self.alpha
        d1 = {(1, 1): o}
        if self.beta:
            d1[(0, 0)] = self.beta
        return {0: d0, 1: d1}

    def mu_matrix(self) -> list:
        """2x4 matrix of multiplication, columns indexed 2*i + j."""
        m = mx.zeros(self.ring, 2, 4)
        for (i, j), (c1, cX) in self.mult_table().items():
            m[0][2 * i + j] = c1
            m[1][2 * i + j] = cX
        return m

    def delta_matrix(self) -> list:
        m = mx.zeros(self.ring, 4, 2)
        for i, terms in self.comult_table().items():
            for (j, k), c in terms.items():
                m[2 * j + k][i] = c
        return m

    def counit_matrix(self) -> list:
        return [[self.ring.zero(), self.ring.one()]]

    def unit_matrix(self) -> list:
        return [[self.ring.one()], [self.ring.zero()]]

    def dot_matrix(self) -> list:
        """Multiplication by X in the basis (x+, x-): [[0, beta], [1, alpha]]."""
        return [[self.ring.zero(), self.beta], [self.ring.one(), self.alpha]]

    def iota_matrix(self) -> list:
        return [[self.ring.one(), self.alpha], [self.ring.zero(), self.ring.one()]]

    def pairing_matrix(self) -> list:
        """<x_i, y_j> with rows (x+, x-) and columns (y+, y-), y+ = eps, y- = eps(X ·)."""
        return [[self.counit(mult) for mult in (self.multiply(xi, self.one), self.multiply(xi, self.X))]
                for xi in (self.one, self.X)]

    # -- operations --------------------------------------------------------
    def _check(self, a: AlgebraElem):
        if a.c1.ring != self.ring or a.cX.ring != self.ring:
            raise RingMismatchError(f"algebra element over {a.c1.ring}, system over {self.ring}")

    def multiply(self, a: AlgebraElem, b: AlgebraElem) -> AlgebraElem:
        self._check(a)
        self._check(b)
        # (a1 + aX X)(b1 + bX X) = a1 b1 + (a1 bX + aX b1) X + aX bX (alpha X + beta)
        xx = a.cX * b.cX
        return AlgebraElem(a.c1 * b.c1 + xx * self.beta, a.c1 * b.cX + a.cX * b.c1 + xx * self.alpha)

    def comultiply(self, a: AlgebraElem) -> TensorWord:
        self._check(a)
        out = TensorWord(2)
        for i, c in ((0, a.c1), (1, a.cX)):
            if not c:
                continue
            for (j, k), v in self.comult_table()[i].items():
                out.add_term((j, k), c * v)
        return out

    def counit(self, a: AlgebraElem) -> LaurentPoly:
        self._check(a)
        return a.cX

    def dual_basis(self) -> tuple[AlgebraElem, AlgebraElem]:
        """Functionals dual to (x+, x-), each stored by its values on (x+, x-).

        They are y- + alpha y+ and y+, where y+ = eps and y- = eps(X ·).
        """
        y_plus = AlgebraElem(self.ring.zero(), self.ring.one())
        y_minus = AlgebraElem(self.ring.one(), self.alpha)
        return (y_minus + y_plus.scale(self.alpha), y_plus)

    def dot_action(self, a: AlgebraElem) -> AlgebraElem:
        return self.multiply(self.X, a)

    def orientation_reversal(self, a: AlgebraElem) -> AlgebraElem:
        """x+ -> x+, x- -> alpha x+ + x-."""
        self._check(a)
        return AlgebraElem(a.c1 + a.cX * self.alpha, a.cX)

    def handle(self) -> AlgebraElem:
        """mu ∘ Delta (1); equals alpha · 1 in characteristic 2."""
        d = self.comultiply(self.one)
        total = AlgebraElem(self.ring.zero(), self.ring.zero())
        basis = (self.one, self.X)
        for (j, k), c in d.items():
            total = total + self.multiply(basis[j], basis[k]).scale(c)
        return total

    def surface_evaluation(self, genus: int, dots: int) -> LaurentPoly:
        if genus < 0 or dots < 0:
            raise ValueError("genus and dots must be non-negative")
        elem = self.one
        h = self.handle()
        for _ in range(genus):
            elem = self.multiply(elem, h)
        for _ in range(dots):
            elem = self.multiply(elem, self.X)
        return self.counit(elem)

    def sphere_evaluations(self, max_dots: int) -> list:
        """[eps(X^d) for d = 0..max_dots] in one pass."""
        out, elem = [], self.one
        for _ in range(max_dots + 1):
            out.append(self.counit(elem))
            elem = self.multiply(self.X, elem)
        return out

    def reduced_generator(self) -> AlgebraElem:
        """m = x- + A' x+, an eigenvector of the dot action with eigenvalue A."""
        self._require_root()
        return AlgebraElem(self.root_conjugate, self.ring.one())

    def base_change(self, phi: RingHom, new_root: Optional[LaurentPoly] = None, name: str = "",
                    weights: Optional[tuple[int, ...]] = None) -> "FrobeniusSystem":
        if phi.source != self.ring:
            raise RingMismatchError(f"base change from {phi.source}, system over {self.ring}")
        root = new_root
        if root is None and self.root is not None:
            root = phi(self.root)
        return FrobeniusSystem(phi.target, phi(self.alpha), phi(self.beta), root,
                               name=name or f"{self.name}⊗{phi.name or 'φ'}", weights=weights)

    # -- grading -----------------------------------------------------------
    def element_degree(self, f: LaurentPoly) -> Optional[int]:
        """q-degree of a homogeneous element, None if inhomogeneous or ungraded."""
        if not f:
            return None
        if self.weights is None:
            return 0 if f.is_constant() else None
        degs = {sum(w * e for w, e in zip(self.weights, exps)) for exps in f.terms}
        return degs.pop() if len(degs) == 1 else None

    @property
    def is_graded(self) -> bool:
        """True when X has degree -2 and the differential preserves q exactly."""
        for v, want in ((self.alpha, -2), (self.beta, -4)):
            if v and self.element_degree(v) != want:
                return False
        return True

    @property
    def is_filtered(self) -> bool:
        """True when q is only a filtration: every term of alpha, beta has degree >= the graded value."""
        if self.weights is None and not (self.alpha.is_constant() and self.beta.is_constant()):
            return False
        for v, want in ((self.alpha, -2), (self.beta, -4)):
            for exps in v.terms:
                d = sum(w * e for w, e in zip(self.weights or (), exps))
                if d < want:
                    return False
        return True

    def __str__(self):
        s = f"{self.name}: {self.ring}, X^2 = ({self.alpha}) X + ({self.beta})"
        if self.root is not None:
            s += f", root {self.root}"
        return s


def plain_khovanov(field_degree: int = 1) -> FrobeniusSystem:
    """X^2 = 0 over GF(2^k): ordinary Khovanov homology with field coefficients."""
    ring = RingDescriptor(field_degree, (), ())
    return FrobeniusSystem(ring, ring.zero(), ring.zero(), ring.zero(), name="kh" if field_degree == 1 else f"kh-gf{field_degree}")


def _predefined():
    h, t = R5.gens()
    f5 = FrobeniusSystem(R5, h, t, None, name="f5", weights=(-2, -4))
    univ = f5.base_change(_r, name="univ")
    hb = S_BN.gen(0)
    bn = FrobeniusSystem(S_BN, hb, S_BN.zero(), S_BN.zero(), name="bn-graded", weights=(-2,))
    sbn = univ.base_change(_s_bn, new_root=_A, name="sbn")
    tring = univ.base_change(_s_T, new_root=F2T.zero(), name="t-ring")
    filt = univ.base_change(_s_fbn, new_root=F4.zero(), name="filtered-f4")
    kh = plain_khovanov(1)
    return {s.name: s for s in (f5, univ, bn, sbn, tring, filt, kh)}


SYSTEMS = _predefined()
F5 = SYSTEMS["f5"]
F_UNIV = SYSTEMS["univ"]
F_BN_GRADED = SYSTEMS["bn-graded"]
F_SBN = SYSTEMS["sbn"]
F_T = SYSTEMS["t-ring"]
F_FILTERED = SYSTEMS["filtered-f4"]
KH_F2 = SYSTEMS["kh"]

PAPER_SYSTEM_IDS = ("f5", "univ", "bn-graded", "sbn", "t-ring", "filtered-f4")


def get_system(name: str) -> FrobeniusSystem:
    try:
        return SYSTEMS[name]
    except KeyError:
        raise KeyError(f"unknown system {name!r}; choose from {sorted(SYSTEMS)}") from None
