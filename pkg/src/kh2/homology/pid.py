"""PID tier: Smith normal form over GF(2^k)[x] and GF(2^k)[x, x^-1].

Laurent matrices are first moved into the polynomial subring by multiplying
each column by a monomial (a unit).  Invariant factors are reported monic and,
over the Laurent ring, with the power of x stripped off (lowest-degree form).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..complex import GradedFreeComplex, SparseMatrix
from ..errors import UnsupportedRingError
from ..rings import LaurentPoly, RingDescriptor
from . import upoly
from .cancel import cancel_units
from .module import DegreeHomology, HomologyModule


def is_pid_ring(ring: RingDescriptor) -> bool:
    return ring.arity == 1


def _require_pid(ring: RingDescriptor):
    if not is_pid_ring(ring):
        raise UnsupportedRingError(
            f"{ring} is not a supported PID; the PID tier handles GF(2^k)[x] and GF(2^k)[x, x^-1]")


def to_upoly(f: LaurentPoly, shift: int = 0) -> list:
    """Coefficient list of ``x^shift * f``; the result must be a polynomial."""
    if not f.terms:
        return []
    top = max(e[0] for e in f.terms) + shift
    out = [0] * (top + 1)
    for (e,), c in f.terms.items():
        if e + shift < 0:
            raise ValueError("negative exponent after shift")
        out[e + shift] = c
    return out


def from_upoly(a: list, ring: RingDescriptor, shift: int = 0) -> LaurentPoly:
    """``x^shift * a`` as a ring element."""
    return LaurentPoly(ring, {(i + shift,): c for i, c in enumerate(a) if c})


@dataclass
class SNFResult:
    ring: RingDescriptor
    diagonal: list  # nonzero diagonal entries d_1 | d_2 | ... as ring elements
    shape: tuple
    U: Optional[list] = None  # nrows x nrows, row-major
    V: Optional[list] = None  # ncols x ncols

    @property
    def rank(self) -> int:
        return len(self.diagonal)

    def invariant_factors(self) -> list:
        """Non-unit diagonal entries."""
        return [d for d in self.diagonal if not _is_unit(d)]

    def diagonal_matrix(self) -> list:
        z = self.ring.zero()
        n, m = self.shape
        out = [[z] * m for _ in range(n)]
        for i, d in enumerate(self.diagonal):
            out[i][i] = d
        return out


def _is_unit(d: LaurentPoly) -> bool:
    return d.is_unit() or (d.is_constant() and bool(d))


def smith_normal_form(m, ring: Optional[RingDescriptor] = None, certificates: bool = False) -> SNFResult:
    """Smith normal form of a SparseMatrix or row-major list over a univariate ring."""
    if isinstance(m, SparseMatrix):
        ring = m.ring
        nrows, ncols = m.nrows, m.ncols
        dense = m.to_dense()
    else:
        dense = [list(r) for r in m]
        nrows = len(dense)
        ncols = len(dense[0]) if dense else 0
        if ring is None:
            ring = dense[0][0].ring if nrows and ncols else None
    if ring is None:
        raise ValueError("cannot infer the ring of an empty matrix")
    _require_pid(ring)
    fld = ring.field
    laurent = ring.is_laurent
    # column monomial normalization
    col_shift = [0] * ncols
    if laurent:
        for j in range(ncols):
            mins = [min(e[0] for e in dense[i][j].terms) for i in range(nrows) if dense[i][j]]
            col_shift[j] = -min(mins) if mins else 0
    else:
        for row in dense:
            for x in row:
                if x and min(e[0] for e in x.terms) < 0:
                    raise ValueError("negative exponent in a polynomial ring")
    a = [[to_upoly(dense[i][j], col_shift[j]) for j in range(ncols)] for i in range(nrows)]
    U = [[[1] if i == j else [] for j in range(nrows)] for i in range(nrows)] if certificates else None
    V = [[[1] if i == j else [] for j in range(ncols)] for i in range(ncols)] if certificates else None

    def row_add(dst, src, f):  # row dst += f * row src
        if not f:
            return
        rs, rd = a[src], a[dst]
        for j in range(ncols):
            if rs[j]:
                rd[j] = upoly.add(rd[j], upoly.mul(f, rs[j], fld))
        if U is not None:
            us, ud = U[src], U[dst]
            for j in range(nrows):
                if us[j]:
                    ud[j] = upoly.add(ud[j], upoly.mul(f, us[j], fld))

    def col_add(dst, src, f):
        if not f:
            return
        for i in range(nrows):
            if a[i][src]:
                a[i][dst] = upoly.add(a[i][dst], upoly.mul(f, a[i][src], fld))
        if V is not None:
            for i in range(ncols):
                if V[i][src]:
                    V[i][dst] = upoly.add(V[i][dst], upoly.mul(f, V[i][src], fld))

    def row_swap(p, q):
        a[p], a[q] = a[q], a[p]
        if U is not None:
            U[p], U[q] = U[q], U[p]

    def col_swap(p, q):
        for row in a:
            row[p], row[q] = row[q], row[p]
        if V is not None:
            for row in V:
                row[p], row[q] = row[q], row[p]

    def row_scale(p, c):
        a[p] = [upoly.scale(x, c, fld) for x in a[p]]
        if U is not None:
            U[p] = [upoly.scale(x, c, fld) for x in U[p]]

    t = 0
    diag = []
    while t < min(nrows, ncols):
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if a[i][j] and (best is None or len(a[i][j]) < best[0]):
                    best = (len(a[i][j]), i, j)
        if best is None:
            break
        _, i, j = best
        row_swap(t, i)
        col_swap(t, j)
        while True:
            done = True
            for i in range(t + 1, nrows):
                if a[i][t]:
                    q, r = upoly.divmod_(a[i][t], a[t][t], fld)
                    row_add(i, t, q)
                    if r:
                        row_swap(t, i)
                        done = False
            for j in range(t + 1, ncols):
                if a[t][j]:
                    q, r = upoly.divmod_(a[t][j], a[t][t], fld)
                    col_add(j, t, q)
                    if r:
                        col_swap(t, j)
                        done = False
            if not done:
                continue
            bad = None
            for i in range(t + 1, nrows):
                for j in range(t + 1, ncols):
                    if a[i][j] and upoly.divmod_(a[i][j], a[t][t], fld)[1]:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            row_add(t, bad, [1])
        lead = a[t][t][-1]
        if lead != 1:
            row_scale(t, fld.inv(lead))
        diag.append(a[t][t])
        t += 1

    # strip powers of x over the Laurent ring (units), moving them into V
    strip = [0] * len(diag)
    if laurent:
        for i, dpoly in enumerate(diag):
            diag[i], strip[i] = upoly.strip_x(dpoly)
    diagonal = [from_upoly(dpoly, ring) for dpoly in diag]
    res = SNFResult(ring, diagonal, (nrows, ncols))
    if certificates:
        res.U = [[from_upoly(x, ring) for x in row] for row in U]
        vcol = [col_shift[i] for i in range(ncols)]
        res.V = [[from_upoly(V[i][j], ring, vcol[i] - (strip[j] if j < len(strip) else 0))
                  for j in range(ncols)] for i in range(ncols)]
    return res


def homology_pid(c: GradedFreeComplex, cancel: bool = True) -> HomologyModule:
    """Free rank and invariant factors per degree from the SNF of consecutive differentials."""
    _require_pid(c.ring)
    cc = cancel_units(c) if cancel else c
    snfs = {k: smith_normal_form(cc.differential(k)) for k in cc.degrees if cc.differential(k).nnz}
    degrees = {}
    for k in sorted(set(c.degrees) | set(cc.degrees)):
        rk = snfs[k].rank if k in snfs else 0
        rk_in = snfs[k - 1].rank if k - 1 in snfs else 0
        free = cc.rank(k) - rk - rk_in
        torsion = snfs[k - 1].invariant_factors() if k - 1 in snfs else []
        if free or torsion:
            degrees[k] = DegreeHomology(free, torsion)
    return HomologyModule(c.ring, "pid", degrees, c.shift, {"reduced_size": {k: cc.rank(k) for k in cc.degrees}})
