"""The cube-of-resolutions chain complex of a diagram over a Frobenius system.

Vertex ``v`` of the cube carries ``V^{⊗ circles(v)}``; generators are tagged
``(v, bits)`` where ``bits[i]`` refers to the i-th circle of the smoothing
(circles ordered by minimal arc label), 0 for x+ and 1 for x-.  In the reduced
complex the basepoint circle's entry is always 1 and stands for the reduced
generator ``m = x- + A' x+``.

The differential raises ``|v|`` by one; homological degree is ``|v| - n_-``.
Quantum degree of a generator is ``#x+ - #x- + |v| + n_+ - 2 n_-`` (``m``
counts as x-, and reduced complexes are shifted up by one).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .diagram import CubeEdge, LinkDiagram, SmoothedState
from .errors import ChainComplexError, ReducedTheoryUndefined, RingMismatchError
from .frobenius import FrobeniusSystem
from .rings import LaurentPoly, RingDescriptor, RingHom

Tag = tuple  # (resolution bits, circle bits)


class SparseMatrix:
    """Column-major sparse matrix; ``cols[j]`` maps row index -> nonzero entry."""

    __slots__ = ("ring", "nrows", "ncols", "cols")

    def __init__(self, ring: RingDescriptor, nrows: int, ncols: int, cols: Optional[list] = None):
        self.ring = ring
        self.nrows = nrows
        self.ncols = ncols
        self.cols = cols if cols is not None else [dict() for _ in range(ncols)]

    @classmethod
    def from_dense(cls, ring: RingDescriptor, rows: Sequence[Sequence[LaurentPoly]]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        m = cls(ring, nrows, ncols)
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                if x:
                    m.cols[j][i] = x
        return m

    @classmethod
    def identity(cls, ring: RingDescriptor, n: int) -> "SparseMatrix":
        one = ring.one()
        return cls(ring, n, n, [{j: one} for j in range(n)])

    def copy(self) -> "SparseMatrix":
        return SparseMatrix(self.ring, self.nrows, self.ncols, [dict(c) for c in self.cols])

    def add_entry(self, i: int, j: int, x: LaurentPoly):
        if not x:
            return
        col = self.cols[j]
        old = col.get(i)
        if old is None:
            col[i] = x
        else:
            s = old + x
            if s:
                col[i] = s
            else:
                del col[i]

    def get(self, i: int, j: int) -> LaurentPoly:
        return self.cols[j].get(i) or self.ring.zero()

    def entries(self) -> Iterable[tuple[int, int, LaurentPoly]]:
        for j, col in enumerate(self.cols):
            for i in sorted(col):
                yield i, j, col[i]

    @property
    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    def is_zero(self) -> bool:
        return not any(self.cols)

    def to_dense(self) -> list:
        z = self.ring.zero()
        out = [[z] * self.ncols for _ in range(self.nrows)]
        for i, j, x in self.entries():
            out[i][j] = x
        return out

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.nrows}x{self.ncols} @ {other.nrows}x{other.ncols}")
        out = SparseMatrix(self.ring, self.nrows, other.ncols)
        for j, col in enumerate(other.cols):
            acc: dict = {}
            for k, b in col.items():
                for i, a in self.cols[k].items():
                    p = a * b
                    old = acc.get(i)
                    acc[i] = p if old is None else old + p
            out.cols[j] = {i: x for i, x in acc.items() if x}
        return out

    def __add__(self, other: "SparseMatrix") -> "SparseMatrix":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch in matrix sum")
        out = self.copy()
        for i, j, x in other.entries():
            out.add_entry(i, j, x)
        return out

    def __eq__(self, other):
        return (isinstance(other, SparseMatrix) and (self.nrows, self.ncols) == (other.nrows, other.ncols)
                and self.cols == other.cols)

    __hash__ = None

    def map_entries(self, fn: Callable[[LaurentPoly], LaurentPoly], ring: RingDescriptor) -> "SparseMatrix":
        out = SparseMatrix(ring, self.nrows, self.ncols)
        for j, col in enumerate(self.cols):
            new = {}
            for i, x in col.items():
                y = fn(x)
                if y:
                    new[i] = y
            out.cols[j] = new
        return out

    def to_field_array(self, point: Sequence[int], fld) -> "list[list[int]]":
        """Dense list of raw GF(2^K) ints after evaluating every entry at ``point``."""
        out = [[0] * self.ncols for _ in range(self.nrows)]
        cache: dict = {}
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                v = cache.get(x)
                if v is None:
                    v = cache[x] = x.evaluate(point, fld)
                out[i][j] = v
        return out

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


@dataclass
class GradedFreeComplex:
    """A cochain complex of free modules: ``d[k]`` maps degree k to degree k + 1.

    ``d[k]`` has shape ``(rank(k+1), rank(k))``; its column j is the image of
    ``gens[k][j]``.
    """

    ring: RingDescriptor
    gens: dict
    d: dict
    qdeg: Optional[dict] = None
    q_kind: Optional[str] = None  # "grading" | "filtration" | None
    shift: int = 0  # raw cube degree = homological degree + shift
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for k in list(self.gens):
            self.d.setdefault(k, SparseMatrix(self.ring, self.rank(k + 1), self.rank(k)))
        for k, m in self.d.items():
            if (m.nrows, m.ncols) != (self.rank(k + 1), self.rank(k)):
                raise ChainComplexError(
                    f"d[{k}] has shape {m.nrows}x{m.ncols}, expected {self.rank(k + 1)}x{self.rank(k)}")

    @property
    def degrees(self) -> list[int]:
        return sorted(k for k, g in self.gens.items() if g)

    def rank(self, k: int) -> int:
        return len(self.gens.get(k, ()))

    @property
    def total_rank(self) -> int:
        return sum(len(g) for g in self.gens.values())

    def differential(self, k: int) -> SparseMatrix:
        m = self.d.get(k)
        if m is None:
            return SparseMatrix(self.ring, self.rank(k + 1), self.rank(k))
        return m

    def euler_characteristic(self) -> int:
        return sum((-1) ** (k % 2) * self.rank(k) for k in self.degrees)

    def shifted(self, s: int) -> "GradedFreeComplex":
        """Complex with ``C'[k] = C[k + s]``."""
        return GradedFreeComplex(
            self.ring,
            {k - s: g for k, g in self.gens.items()},
            {k - s: m for k, m in self.d.items()},
            None if self.qdeg is None else {k - s: q for k, q in self.qdeg.items()},
            self.q_kind, self.shift + s, dict(self.meta),
        )

    def base_change(self, phi: RingHom) -> "GradedFreeComplex":
        if phi.source != self.ring:
            raise RingMismatchError(f"base change from {phi.source}, complex over {self.ring}")
        cache: dict = {}

        def fn(x):
            y = cache.get(x)
            if y is None:
                y = cache[x] = phi(x)
            return y

        d = {k: m.map_entries(fn, phi.target) for k, m in self.d.items()}
        return GradedFreeComplex(phi.target, dict(self.gens), d, None, None, self.shift,
                                 dict(self.meta, base_change=phi.name))

    def verify_dsquared(self) -> "DSquaredReport":
        return verify_dsquared(self)

    def index(self, k: int) -> dict:
        return {t: i for i, t in enumerate(self.gens.get(k, ()))}

    def dump(self) -> str:
        """Diagnostic text: generator tags per degree and ``i j entry`` triplets."""
        lines = [f"ring {self.ring}", f"shift {self.shift}"]
        for k in self.degrees:
            lines.append(f"degree {k} rank {self.rank(k)}")
            for i, tag in enumerate(self.gens[k]):
                q = "" if self.qdeg is None else f" q={self.qdeg[k][i]}"
                lines.append(f"  gen {i} {format_tag(tag)}{q}")
            m = self.differential(k)
            if m.nnz:
                lines.append(f"  d {m.nrows}x{m.ncols}")
                for i, j, x in m.entries():
                    lines.append(f"    {i} {j} {x}")
        return "\n".join(lines) + "\n"


def format_tag(tag) -> str:
    if isinstance(tag, tuple) and len(tag) == 2 and all(isinstance(p, tuple) for p in tag):
        v, bits = tag
        return "".join(map(str, v)) + ":" + "".join("+-"[b] for b in bits)
    return str(tag)


@dataclass(frozen=True)
class DSquaredReport:
    passed: bool
    degree: Optional[int] = None
    row: Optional[int] = None
    col: Optional[int] = None
    entry: Optional[str] = None

    def __bool__(self):
        return self.passed


def verify_dsquared(c: GradedFreeComplex) -> DSquaredReport:
    for k in sorted(c.d):
        if c.rank(k) == 0 or c.rank(k + 2) == 0:
            continue
        prod = c.differential(k + 1) @ c.differential(k)
        for i, j, x in prod.entries():
            return DSquaredReport(False, k, i, j, str(x))
    return DSquaredReport(True)


# -- local edge maps ------------------------------------------------------------------

def merge_image(sys: FrobeniusSystem, a: int, b: int, a_is_m: bool = False):
    """Images of the local product of factors ``a`` and ``b`` as [(bit, coeff)].

    When ``a_is_m`` the first factor is the reduced generator m and the output
    bit 1 again stands for m.
    """
    if a_is_m:
        return [(1, sys.ring.one() if b == 0 else sys.root)]
    c1, cX = sys.mult_table()[(a, b)]
    return [(bit, c) for bit, c in ((0, c1), (1, cX)) if c]


def split_image(sys: FrobeniusSystem, a: int, a_is_m: bool = False):
    """Images of the local coproduct as [((bit1, bit2), coeff)].

    With ``a_is_m`` the first output factor is the basepoint circle (always m):
    ``m -> m⊗X + A' m⊗1``.
    """
    if a_is_m:
        return [((1, 1), sys.ring.one()), ((1, 0), sys.root_conjugate)]
    return list(sys.comult_table()[a].items())


def edge_images(sys: FrobeniusSystem, edge: CubeEdge, bits: tuple, n_out: int,
                bp_in: Optional[int] = None, bp_out: Optional[int] = None) -> list:
    """Image of the generator ``bits`` along one saddle, as [(out bits, coeff)].

    ``bp_in`` / ``bp_out`` are the basepoint circle indices of the reduced
    theory (None for the unreduced complex).
    """
    base = [0] * n_out
    for j_in, j_out in edge.passive:
        base[j_out] = bits[j_in]
    out = []
    if edge.kind == "merge":
        i, j = edge.circles_in
        (c,) = edge.circles_out
        if bp_in is not None and bp_in in (i, j):
            first, second = (i, j) if bp_in == i else (j, i)
            images = merge_image(sys, 1, bits[second], a_is_m=True)
        else:
            images = merge_image(sys, bits[i], bits[j])
        for bit, coeff in images:
            w = list(base)
            w[c] = bit
            out.append((tuple(w), coeff))
    else:
        (i,) = edge.circles_in
        c1, c2 = edge.circles_out
        if bp_in is not None and bp_in == i:
            first, second = (c1, c2) if bp_out == c1 else (c2, c1)
            images = split_image(sys, 1, a_is_m=True)
        else:
            first, second = c1, c2
            images = split_image(sys, bits[i])
        for (b1, b2), coeff in images:
            w = list(base)
            w[first] = b1
            w[second] = b2
            out.append((tuple(w), coeff))
    return out


# -- building -------------------------------------------------------------------------

def q_kind_of(sys: FrobeniusSystem) -> Optional[str]:
    if sys.is_graded and (sys.weights is not None or (sys.alpha.is_constant() and sys.beta.is_constant())):
        return "grading"
    if sys.is_filtered:
        return "filtration"
    return None


def vertex_generators(state: SmoothedState, reduced: bool) -> list:
    n = state.n_circles
    bp = state.basepoint_circle
    out = []
    for code in range(1 << n):
        bits = tuple((code >> (n - 1 - i)) & 1 for i in range(n))
        if reduced and bits[bp] != 1:
            continue
        out.append(bits)
    return out


def build_complex(d: LinkDiagram, sys: FrobeniusSystem, reduced: bool = False) -> GradedFreeComplex:
    """Khovanov-type complex of ``d``: merge -> multiplication, split -> comultiplication."""
    if reduced:
        if not sys.has_root:
            raise ReducedTheoryUndefined(f"system {sys.name!r} has no root; the reduced theory is undefined")
        if d.basepoint is None:
            raise ReducedTheoryUndefined("the reduced complex needs a basepoint on the diagram")
    n_minus, n_plus = d.n_minus, d.n_plus
    q_kind = q_kind_of(sys)
    gens: dict = {}
    qdeg: dict = {}
    for v in d.resolutions():
        state = d.smooth(v)
        k = sum(v) - n_minus
        for bits in vertex_generators(state, reduced):
            gens.setdefault(k, []).append((v, bits))
            if q_kind is not None:
                q = len(bits) - 2 * sum(bits) + sum(v) + n_plus - 2 * n_minus + (1 if reduced else 0)
                qdeg.setdefault(k, []).append(q)
    index = {k: {t: i for i, t in enumerate(g)} for k, g in gens.items()}
    d_mats = {k: SparseMatrix(sys.ring, len(gens.get(k + 1, ())), len(g)) for k, g in gens.items()}
    for edge in d.cube_edges():
        sv, su = d.smooth(edge.source), d.smooth(edge.target)
        k = sum(edge.source) - n_minus
        bp_in = sv.basepoint_circle if reduced else None
        bp_out = su.basepoint_circle if reduced else None
        mat = d_mats[k]
        tgt_index = index[k + 1]
        for bits in vertex_generators(sv, reduced):
            j = index[k][(edge.source, bits)]
            for w, coeff in edge_images(sys, edge, bits, su.n_circles, bp_in, bp_out):
                mat.add_entry(tgt_index[(edge.target, w)], j, coeff)
    c = GradedFreeComplex(
        sys.ring, gens, d_mats, qdeg if q_kind is not None else None, q_kind, n_minus,
        {"diagram": d.name, "system": sys.name, "reduced": reduced, "n_plus": n_plus, "n_minus": n_minus},
    )
    rep = verify_dsquared(c)
    if not rep:
        raise ChainComplexError(f"d∘d ≠ 0 at degree {rep.degree}, entry ({rep.row}, {rep.col}) = {rep.entry}")
    return c


# -- chain maps and cones -------------------------------------------------------------

@dataclass
class ChainMap:
    """Degree-preserving map ``f[k]: source[k] -> target[k]``."""

    source: GradedFreeComplex
    target: GradedFreeComplex
    maps: dict

    def component(self, k: int) -> SparseMatrix:
        m = self.maps.get(k)
        if m is None:
            return SparseMatrix(self.source.ring, self.target.rank(k), self.source.rank(k))
        return m

    def is_chain_map(self) -> bool:
        ks = set(self.source.degrees) | set(self.target.degrees)
        for k in ks:
            lhs = self.target.differential(k) @ self.component(k)
            rhs = self.component(k + 1) @ self.source.differential(k)
            if lhs != rhs:
                if not (lhs + rhs).is_zero():
                    return False
        return True

    def compose(self, inner: "ChainMap") -> "ChainMap":
        ks = set(inner.source.degrees)
        return ChainMap(inner.source, self.target, {k: self.component(k) @ inner.component(k) for k in ks})


def mapping_cone(f: ChainMap, check: bool = True) -> GradedFreeComplex:
    """``cone^k = source^{k+1} ⊕ target^k`` with ``d = [[d_s, 0], [f, d_t]]`` (char 2, no signs)."""
    if check and not f.is_chain_map():
        raise ChainComplexError("mapping cone of a map that does not commute with the differentials")
    src, tgt = f.source, f.target
    ring = src.ring
    ks = {k - 1 for k in src.degrees} | set(tgt.degrees)
    gens = {}
    for k in ks:
        g = [("s", t) for t in src.gens.get(k + 1, ())] + [("t", t) for t in tgt.gens.get(k, ())]
        if g:
            gens[k] = g
    d = {}
    for k in gens:
        ns1, nt0 = src.rank(k + 1), tgt.rank(k)
        ns2, nt1 = src.rank(k + 2), tgt.rank(k + 1)
        m = SparseMatrix(ring, ns2 + nt1, ns1 + nt0)
        for i, j, x in src.differential(k + 1).entries():
            m.cols[j][i] = x
        for i, j, x in f.component(k + 1).entries():
            m.add_entry(ns2 + i, j, x)
        for i, j, x in tgt.differential(k).entries():
            m.add_entry(ns2 + i, ns1 + j, x)
        d[k] = m
    return GradedFreeComplex(ring, gens, d, None, None, 0, {"cone": True})


def identity_map(c: GradedFreeComplex) -> ChainMap:
    return ChainMap(c, c, {k: SparseMatrix.identity(c.ring, c.rank(k)) for k in c.degrees})


def zero_map(src: GradedFreeComplex, tgt: GradedFreeComplex) -> ChainMap:
    return ChainMap(src, tgt, {})


def dot_map(d: LinkDiagram, c: GradedFreeComplex, sys: FrobeniusSystem, conjugate: bool = False) -> ChainMap:
    """Λ: multiply the basepoint circle's factor by X (by X + alpha when ``conjugate``)."""
    if d.basepoint is None:
        raise ValueError("the dot operator needs a basepoint")
    reduced = bool(c.meta.get("reduced"))
    maps = {}
    for k in c.degrees:
        idx = c.index(k)
        m = SparseMatrix(c.ring, c.rank(k), c.rank(k))
        for j, (v, bits) in enumerate(c.gens[k]):
            bp = d.smooth(v).basepoint_circle
            if reduced:
                eig = sys.root_conjugate if conjugate else sys.root
                m.add_entry(j, j, eig)
                continue
            # X·x+ = x-, X·x- = beta x+ + alpha x-
            col = sys.dot_matrix()
            for out_bit in (0, 1):
                coeff = col[out_bit][bits[bp]]
                if conjugate and out_bit == bits[bp]:
                    coeff = coeff + sys.alpha
                if coeff:
                    w = bits[:bp] + (out_bit,) + bits[bp + 1:]
                    m.add_entry(idx[(v, w)], j, coeff)
        maps[k] = m
    return ChainMap(c, c, maps)


def reduced_embedding(d: LinkDiagram, reduced: GradedFreeComplex, full: GradedFreeComplex,
                      sys: FrobeniusSystem) -> ChainMap:
    """Inclusion of the reduced complex: ``m ⊗ w -> x- ⊗ w + A' x+ ⊗ w``."""
    a_prime = sys.root_conjugate
    one = sys.ring.one()
    maps = {}
    for k in reduced.degrees:
        idx = full.index(k)
        m = SparseMatrix(sys.ring, full.rank(k), reduced.rank(k))
        for j, (v, bits) in enumerate(reduced.gens[k]):
            bp = d.smooth(v).basepoint_circle
            m.add_entry(idx[(v, bits)], j, one)
            m.add_entry(idx[(v, bits[:bp] + (0,) + bits[bp + 1:])], j, a_prime)
        maps[k] = m
    return ChainMap(reduced, full, maps)
