"""Gröbner tier over GF(2^k)[h, t]: finite presentations of homology.

Module elements of R^n are dicts ``{(pos, a, b): coeff}`` for ``coeff * h^a t^b e_pos``.
The order is position-over-term, lower positions first, then degrevlex with
h > t.  Syzygies come from a Gröbner basis of the augmented vectors
``(f_j, e_j)``; elements whose f-part vanishes generate the syzygy module.

Per degree, ``H^k = ker d_k / im d_{k-1}`` is presented as ``coker(Rel)`` on the
kernel generators, where ``Rel`` is the projection of ``syz([K | B])`` to the
K-coordinates.  Unit entries are eliminated and the relations replaced by a
reduced Gröbner basis.
"""

from __future__ import annotations

import random
from typing import Optional

from .. import linalg
from ..complex import GradedFreeComplex
from ..errors import ResourceLimitError, UnsupportedRingError
from ..fields import GF, GF2k
from ..rings import LaurentPoly, RingDescriptor
from .cancel import cancel_units
from .module import DegreeHomology, HomologyModule, Presentation

DEFAULT_TERM_CAP = 10**6
DEFAULT_PAIR_CAP = 200_000
RANK_FIELD_DEGREE = 16


class Budget:
    def __init__(self, term_cap: int = DEFAULT_TERM_CAP, pair_cap: int = DEFAULT_PAIR_CAP):
        self.term_cap = term_cap
        self.pair_cap = pair_cap

    def check_terms(self, basis):
        n = sum(len(g) for g in basis)
        if n > self.term_cap:
            raise ResourceLimitError(f"Gröbner basis exceeded {self.term_cap} terms")

    def check_pairs(self, n):
        if n > self.pair_cap:
            raise ResourceLimitError(f"Gröbner pair queue exceeded {self.pair_cap} pairs")


def _key(term):
    pos, a, b = term
    return (-pos, a + b, a)


def leading(v: dict):
    return max(v, key=_key)


def _add_into(v: dict, w: dict, c: int, da: int, db: int, fld: GF2k):
    """v += c * h^da t^db * w, in place."""
    for (pos, a, b), x in w.items():
        t = (pos, a + da, b + db)
        y = fld.mul(x, c) if c != 1 else x
        z = v.get(t, 0) ^ y
        if z:
            v[t] = z
        else:
            v.pop(t, None)


def _divides(s, t) -> bool:
    return s[0] == t[0] and s[1] <= t[1] and s[2] <= t[2]


def reduce(v: dict, basis: list, fld: GF2k, full: bool = True) -> dict:
    """Normal form of v modulo the list of (leading term, vector) pairs."""
    v = dict(v)
    rem: dict = {}
    while v:
        t = leading(v)
        c = v[t]
        for lt, g in basis:
            if _divides(lt, t):
                f = fld.div(c, g[lt])
                _add_into(v, g, f, t[1] - lt[1], t[2] - lt[2], fld)
                break
        else:
            if not full:
                rem.update(v)
                return rem
            rem[t] = c
            del v[t]
    return rem


def _normalize(v: dict, fld: GF2k) -> dict:
    lt = leading(v)
    c = v[lt]
    if c == 1:
        return v
    inv = fld.inv(c)
    return {t: fld.mul(x, inv) for t, x in v.items()}


def groebner_basis(gens: list, fld: GF2k, budget: Optional[Budget] = None) -> list:
    """Reduced Gröbner basis of the submodule generated by ``gens`` (list of dicts)."""
    budget = budget or Budget()
    basis: list = []  # (lt, vector)
    pairs: list = []

    def add(g):
        g = _normalize(g, fld)
        lt = leading(g)
        for i, (lt2, _) in enumerate(basis):
            if lt2[0] == lt[0]:
                pairs.append((max(lt[1], lt2[1]) + max(lt[2], lt2[2]), i, len(basis)))
        basis.append((lt, g))
        budget.check_pairs(len(pairs))
        budget.check_terms(g for _, g in basis)

    for g in gens:
        r = reduce(g, basis, fld)
        if r:
            add(r)
    while pairs:
        pairs.sort(reverse=True)
        _, i, j = pairs.pop()
        (lti, gi), (ltj, gj) = basis[i], basis[j]
        la, lb = max(lti[1], ltj[1]), max(lti[2], ltj[2])
        # coprime leading monomials: S-pair reduces to zero when both live in one coordinate
        if (lti[1] + ltj[1], lti[2] + ltj[2]) == (la, lb) and _single_position(gi, gj):
            continue
        s: dict = {}
        _add_into(s, gi, 1, la - lti[1], lb - lti[2], fld)
        _add_into(s, gj, 1, la - ltj[1], lb - ltj[2], fld)
        r = reduce(s, basis, fld)
        if r:
            add(r)
    # minimize and interreduce
    lts = [lt for lt, _ in basis]
    keep = [k for k, lt in enumerate(lts)
            if not any(_divides(lts[m], lt) and (lts[m] != lt or m < k) for m in range(len(lts)) if m != k)]
    minimal = [basis[k] for k in keep]
    out = []
    for idx, (lt, g) in enumerate(minimal):
        others = [p for m, p in enumerate(minimal) if m != idx]
        r = reduce(g, others, fld)
        out.append(_normalize(r, fld))
    out.sort(key=lambda g: _key(leading(g)), reverse=True)
    return out


def _single_position(g1: dict, g2: dict) -> bool:
    # the product criterion is only valid when both vectors live in one coordinate
    return len({t[0] for t in g1}) == 1 and {t[0] for t in g1} == {t[0] for t in g2}


def syzygies(cols: list, n: int, fld: GF2k, budget: Optional[Budget] = None) -> list:
    """Generators of ``{c : Σ c_j cols_j = 0}`` for vectors in R^n (dicts)."""
    m = len(cols)
    if m == 0:
        return []
    aug = []
    for j, f in enumerate(cols):
        v = dict(f)
        v[(n + j, 0, 0)] = v.get((n + j, 0, 0), 0) ^ 1
        aug.append(v)
    gb = groebner_basis(aug, fld, budget)
    out = []
    for g in gb:
        if all(t[0] >= n for t in g):
            out.append({(pos - n, a, b): c for (pos, a, b), c in g.items()})
    return out


# -- conversion -----------------------------------------------------------------------

def column_to_vec(col: dict) -> dict:
    """SparseMatrix column {row: LaurentPoly} -> module vector."""
    v = {}
    for i, x in col.items():
        for (a, b), c in x.terms.items():
            v[(i, a, b)] = c
    return v


def vec_to_column(v: dict, n: int, ring: RingDescriptor) -> list:
    parts: list = [dict() for _ in range(n)]
    for (pos, a, b), c in v.items():
        parts[pos][(a, b)] = c
    return [LaurentPoly(ring, p) for p in parts]


def _unit_vector(i: int) -> dict:
    return {(i, 0, 0): 1}


# -- presentations ----------------------------------------------------------------------

def eliminate_units(n: int, rels: list, fld: GF2k) -> tuple[int, list, list]:
    """Remove generators killed by relations with a unit entry.

    Returns (new generator count, relations over the survivors, surviving old indices).
    """
    rels = [dict(r) for r in rels if r]
    alive = list(range(n))
    while True:
        hit = _unit_entry(rels)
        if hit is None:
            break
        ri, pos, u = hit
        r = rels.pop(ri)
        uinv = fld.inv(u)
        new = []
        for s in rels:
            coeff = {(a, b): c for (p, a, b), c in s.items() if p == pos}
            for (a, b), c in coeff.items():
                _add_into(s, r, fld.mul(c, uinv), a, b, fld)
            assert not any(p == pos for p, _, _ in s)
            if s:
                new.append(s)
        rels = new
        alive.remove(pos)
    remap = {old: i for i, old in enumerate(alive)}
    rels = [{(remap[p], a, b): c for (p, a, b), c in r.items()} for r in rels]
    return len(alive), rels, alive


def _unit_entry(rels: list):
    """(relation index, position, constant) of a coordinate that is a nonzero constant."""
    for ri, r in enumerate(rels):
        by_pos: dict = {}
        for (pos, a, b), c in r.items():
            by_pos.setdefault(pos, []).append((a, b, c))
        for pos in sorted(by_pos):
            terms = by_pos[pos]
            if len(terms) == 1 and terms[0][:2] == (0, 0):
                return ri, pos, terms[0][2]
    return None


def minimize_presentation(n: int, rels: list, fld: GF2k, budget: Optional[Budget] = None) -> tuple[int, list]:
    """Unit elimination alternated with reduced Gröbner bases until stable."""
    while True:
        n, rels, _ = eliminate_units(n, rels, fld)
        gb = groebner_basis(rels, fld, budget) if rels else []
        if _unit_entry(gb) is None:
            return n, gb
        rels = gb


def _eval_vecs(vecs: list, n: int, point, fld: GF2k):
    import numpy as np
    h, t = point
    arr = np.zeros((n, len(vecs)), dtype=np.uint16)
    for j, v in enumerate(vecs):
        for (pos, a, b), c in v.items():
            arr[pos, j] ^= fld.mul(c, fld.mul(fld.pow(h, a), fld.pow(t, b)))
    return arr


def rank_at(vecs: list, n: int, point, fld: GF2k) -> int:
    if not vecs or n == 0:
        return 0
    return linalg.rank(_eval_vecs(vecs, n, point, fld), fld)


class GroebnerDegree:
    """Presentation data of one homology module, in vector form."""

    def __init__(self, n: int, rels: list, syz: list):
        self.n = n
        self.rels = rels
        self.syz = syz

    def fiber_dim(self, point, fld) -> int:
        """dim H ⊗ k_p."""
        return self.n - rank_at(self.rels, self.n, point, fld)

    def tor_dim(self, point, fld) -> int:
        """dim Tor_1(H, k_p) = dim ker Rel(p) - rank Syz(p)."""
        m = len(self.rels)
        return m - rank_at(self.rels, self.n, point, fld) - rank_at(self.syz, m, point, fld)


def _check_ring(ring: RingDescriptor):
    if ring.arity != 2 or ring.is_laurent:
        raise UnsupportedRingError(f"the Gröbner tier handles GF(2^k)[h, t]; got {ring}")


def groebner_data(c: GradedFreeComplex, budget: Optional[Budget] = None, cancel: bool = True) -> dict:
    """{degree: GroebnerDegree} for every degree of the (cancelled) complex."""
    _check_ring(c.ring)
    budget = budget or Budget()
    fld = c.ring.field
    cc = cancel_units(c, lambda x: x.is_constant() and bool(x), budget.term_cap) if cancel else c
    out = {}
    for k in cc.degrees:
        n = cc.rank(k)
        dk = cc.differential(k)
        cols = [column_to_vec(col) for col in dk.cols]
        if dk.nnz:
            kernel = groebner_basis(syzygies(cols, dk.nrows, fld, budget), fld, budget)
        else:
            kernel = [_unit_vector(i) for i in range(n)]
        bprev = cc.differential(k - 1) if k - 1 in cc.d else None
        image = [column_to_vec(col) for col in bprev.cols] if bprev is not None else []
        image = [v for v in image if v]
        s = len(kernel)
        if image:
            joint = syzygies(kernel + image, n, fld, budget)
            rels = [{(p, a, b): x for (p, a, b), x in v.items() if p < s} for v in joint]
            rels = [r for r in rels if r]
        else:
            rels = []
        ngen, rels = minimize_presentation(s, rels, fld, budget)
        syz = syzygies(rels, ngen, fld, budget) if rels else []
        out[k] = GroebnerDegree(ngen, rels, syz)
    return out


def random_points(n: int, seed: int, fld: Optional[GF2k] = None) -> list:
    fld = fld or GF(RANK_FIELD_DEGREE)
    rnd = random.Random(seed)
    return [(rnd.randrange(1, fld.order), rnd.randrange(1, fld.order)) for _ in range(n)]


def groebner_presentation(c: GradedFreeComplex, seed: int = 0, budget: Optional[Budget] = None,
                          rank_points: int = 4) -> HomologyModule:
    """Presentation per degree plus the free rank (generic fiber dimension)."""
    data = groebner_data(c, budget)
    fld = GF(RANK_FIELD_DEGREE)
    pts = random_points(rank_points, seed, fld)
    ring = c.ring
    degrees = {}
    for k, g in data.items():
        if g.n == 0:
            continue
        free = min(g.fiber_dim(p, fld) for p in pts)
        pres = Presentation(g.n, [vec_to_column(r, g.n, ring) for r in g.rels],
                            [vec_to_column(s, len(g.rels), ring) for s in g.syz])
        degrees[k] = DegreeHomology(free, [], pres)
    mod = HomologyModule(ring, "groebner", degrees, c.shift, {"seed": seed})
    mod._groebner = data  # type: ignore[attr-defined]
    return mod


def data_of(mod: HomologyModule) -> dict:
    """Vector-form presentation data, rebuilt from the stored matrices if needed."""
    cached = getattr(mod, "_groebner", None)
    if cached is not None:
        return cached
    out = {}
    for k, h in mod.degrees.items():
        p = h.presentation
        rels = [column_to_vec({i: x for i, x in enumerate(col) if x}) for col in p.relations]
        syz = [column_to_vec({i: x for i, x in enumerate(col) if x}) for col in (p.syzygies or [])]
        out[k] = GroebnerDegree(p.n_generators, rels, syz)
    return out


def specialized_dimensions(mod: HomologyModule, point, fld: GF2k, degrees) -> dict:
    """dim H^k(C ⊗ k_p) = dim(H^k ⊗ k_p) + dim Tor_1(H^{k+1}, k_p), from the presentations."""
    data = data_of(mod)
    empty = GroebnerDegree(0, [], [])
    out = {}
    for k in degrees:
        g, g1 = data.get(k, empty), data.get(k + 1, empty)
        out[k] = g.fiber_dim(point, fld) + g1.tor_dim(point, fld)
    return out
