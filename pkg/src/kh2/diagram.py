"""Planar link diagrams given by PD codes, and their cube of smoothings.

PD convention: each crossing ``X(a, b, c, d)`` lists its four arc labels
counterclockwise starting from the incoming under-strand, so the under-strand
runs a -> c and the over-strand joins b and d.  A crossing is positive when
the over-strand runs d -> b.

Smoothing convention (Khovanov / Bar-Natan): the 0-smoothing joins a with b
and c with d; the 1-smoothing joins a with d and b with c.  At a positive
crossing the 0-smoothing is the oriented one.

Crossingless unknotted components ("free loops") are written ``O`` and get
arc labels ``2N+1, 2N+2, ...`` after the crossing arcs.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Optional, Sequence

from .errors import DiagramError, ParseError

Crossing = tuple  # (a, b, c, d)


@dataclass(frozen=True)
class PDCode:
    crossings: tuple[Crossing, ...]
    loops: int = 0

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def n_arcs(self) -> int:
        return 2 * len(self.crossings) + self.loops

    def __str__(self):
        return serialize_pd(self)


_TOKEN = re.compile(r"\s*(?:(?P<x>[Xx])\s*[\(\[]\s*(?P<args>[^\)\]]*)[\)\]]|(?P<o>[Oo])\b|(?P<sep>[,;]))")


def parse_pd(text: str) -> PDCode:
    """Parse ``X(1,4,2,5) X(3,6,4,1) ...``; also accepts ``PD[...]`` and ``[[1,5,2,4], ...]``."""
    s = text.strip()
    if s.startswith("PD[") and s.endswith("]"):
        s = s[3:-1]
    if s.startswith("[") or s.startswith("{"):
        return _parse_nested_list(s)
    crossings = []
    loops = 0
    pos = 0
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(s, pos)
        if not m and s[pos] in "Xx":
            raise ParseError("malformed crossing; expected X(a,b,c,d)", pos)
        if not m:
            raise ParseError(f"unexpected character {s[pos]!r} in PD code", pos)
        if m.group("x"):
            try:
                args = tuple(int(a) for a in m.group("args").split(","))
            except ValueError:
                raise ParseError("crossing labels must be integers", m.start("args")) from None
            if len(args) != 4:
                raise ParseError(f"a crossing needs 4 labels, got {len(args)}", m.start())
            crossings.append(args)
        elif m.group("o"):
            loops += 1
        pos = m.end()
    pd = PDCode(tuple(crossings), loops)
    validate_pd(pd)
    return pd


def _parse_nested_list(s: str) -> PDCode:
    inner = re.findall(r"[\[\{]\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*[\]\}]", s)
    stripped = re.sub(r"[\[\{]\s*-?\d+\s*,\s*-?\d+\s*,\s*-?\d+\s*,\s*-?\d+\s*[\]\}]", "", s)
    if re.search(r"\d", stripped):
        raise ParseError("malformed nested-list PD code")
    pd = PDCode(tuple(tuple(int(x) for x in t) for t in inner))
    validate_pd(pd)
    return pd


def validate_pd(pd: PDCode) -> None:
    counts: dict[int, int] = {}
    for x in pd.crossings:
        if len(x) != 4:
            raise DiagramError(f"crossing {x} does not have 4 labels")
        for a in x:
            counts[a] = counts.get(a, 0) + 1
    bad = sorted(a for a, c in counts.items() if c != 2)
    if bad:
        raise DiagramError(f"arc labels must appear exactly twice; offending labels {bad}")
    expected = set(range(1, 2 * len(pd.crossings) + 1))
    if set(counts) != expected:
        raise DiagramError(f"arc labels must be exactly 1..{2 * len(pd.crossings)}")
    if pd.loops < 0:
        raise DiagramError("negative loop count")


def serialize_pd(pd: PDCode) -> str:
    parts = [f"X({a},{b},{c},{d})" for a, b, c, d in pd.crossings]
    parts.extend("O" * pd.loops)
    return " ".join(parts)


@dataclass(frozen=True)
class Resolution:
    bits: tuple[int, ...]

    def __len__(self):
        return len(self.bits)

    @property
    def height(self) -> int:
        return sum(self.bits)


@dataclass(frozen=True)
class SmoothedState:
    resolution: Resolution
    circles: tuple[frozenset, ...]  # arc-label sets, ordered by minimal label
    circle_of_arc: dict = field(compare=False, hash=False)
    basepoint_circle: Optional[int] = None

    @property
    def n_circles(self) -> int:
        return len(self.circles)


@dataclass(frozen=True)
class CubeEdge:
    source: tuple[int, ...]  # bit c is 0
    target: tuple[int, ...]  # bit c is 1
    crossing: int
    kind: str  # "merge" | "split"
    circles_in: tuple[int, ...]
    circles_out: tuple[int, ...]
    passive: tuple[tuple[int, int], ...]  # unaffected circles: (index in source, index in target)


class LinkDiagram:
    """A validated, oriented PD diagram with an optional basepoint arc."""

    def __init__(self, pd: PDCode, basepoint: Optional[int] = None, name: str = ""):
        validate_pd(pd)
        self.pd = pd
        self.name = name
        if basepoint is not None and not 1 <= basepoint <= pd.n_arcs:
            raise DiagramError(f"basepoint arc {basepoint} does not exist")
        self.basepoint = basepoint
        self._orient()

    # -- construction helpers -----------------------------------------------
    @classmethod
    def from_text(cls, text: str, basepoint: Optional[int] = None, name: str = "") -> "LinkDiagram":
        pd = parse_pd(text)
        if basepoint is None and pd.n_arcs:
            basepoint = 1
        return cls(pd, basepoint, name)

    @classmethod
    def unlink(cls, n: int, basepoint: bool = True) -> "LinkDiagram":
        return cls(PDCode((), n), 1 if (basepoint and n) else None, name=f"U{n}")

    @classmethod
    def reoriented(cls, crossings: Sequence[Crossing], loops: int, basepoint: Optional[int] = None,
                   name: str = "") -> "LinkDiagram":
        """Build from crossings whose under-strand is slots 0/2 but whose direction may be wrong.

        Each component is given an orientation and tuples are rotated by two
        slots where the under-strand runs backwards; this preserves both
        smoothings.
        """
        crossings = [tuple(x) for x in crossings]
        validate_pd(PDCode(tuple(crossings), loops))
        fixed = list(crossings)
        for comp in _trace_components(crossings):
            for ci, sin, _ in comp:
                if sin == 2:
                    a, b, c, d = fixed[ci]
                    fixed[ci] = (c, d, a, b)
        return cls(PDCode(tuple(fixed), loops), basepoint, name)

    # -- orientation ----------------------------------------------------------
    def _orient(self):
        pd = self.pd
        comps = _trace_components(pd.crossings)
        n = len(pd.crossings)
        over_in = [None] * n
        component_of_arc = {}
        arc_tail = {}  # label -> (crossing, slot) where the arc leaves
        arc_head = {}  # label -> (crossing, slot) where the arc arrives
        for k, comp in enumerate(comps):
            directions = {("u", sin) for ci, sin, sout in comp if sin in (0, 2)}
            if ("u", 0) in directions and ("u", 2) in directions:
                raise DiagramError("inconsistent orientation: an under-strand runs backwards relative to another")
            if ("u", 2) in directions:
                comp = _reverse(comp)
            elif not directions:
                comp = self._orient_over_only(comp)
            for ci, sin, sout in comp:
                if sin in (1, 3):
                    over_in[ci] = sin
            for idx, (ci, sin, sout) in enumerate(comp):
                lab_out = pd.crossings[ci][sout]
                nci, nsin, _ = comp[(idx + 1) % len(comp)]
                arc_tail[lab_out] = (ci, sout)
                arc_head[lab_out] = (nci, nsin)
                component_of_arc[lab_out] = k
        ncomp = len(comps)
        for j in range(pd.loops):
            component_of_arc[2 * n + 1 + j] = ncomp + j
        self.over_in = tuple(over_in)
        self.signs = tuple(1 if o == 3 else -1 for o in over_in)
        self.component_of_arc = component_of_arc
        self.n_components = ncomp + pd.loops
        self.arc_tail = arc_tail
        self.arc_head = arc_head

    def _orient_over_only(self, comp):
        # no under-passage fixes the direction: prefer the one along which labels increase
        ci, sin, sout = comp[0]
        a_in = self.pd.crossings[ci][sin]
        a_out = self.pd.crossings[ci][sout]
        if a_out == a_in + 1 or (a_in > a_out + 1):
            return comp
        return _reverse(comp)

    # -- basic invariants -------------------------------------------------------
    @property
    def n_crossings(self) -> int:
        return len(self.pd.crossings)

    @property
    def n_plus(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    @property
    def writhe(self) -> int:
        return self.n_plus - self.n_minus

    def __repr__(self):
        nm = f"{self.name}: " if self.name else ""
        return f"LinkDiagram({nm}{serialize_pd(self.pd) or '∅'}, basepoint={self.basepoint})"

    def __eq__(self, other):
        return isinstance(other, LinkDiagram) and self.pd == other.pd and self.basepoint == other.basepoint

    def __hash__(self):
        return hash((self.pd, self.basepoint))

    def with_basepoint(self, basepoint: Optional[int]) -> "LinkDiagram":
        return LinkDiagram(self.pd, basepoint, self.name)

    # -- smoothing --------------------------------------------------------------
    def smooth(self, v: Sequence[int]) -> SmoothedState:
        v = tuple(v)
        cached = self._smoothings.get(v)
        if cached is not None:
            return cached
        if len(v) != self.n_crossings:
            raise DiagramError(f"resolution of length {len(v)} for {self.n_crossings} crossings")
        parent = list(range(self.pd.n_arcs + 1))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)

        for (a, b, c, d), bit in zip(self.pd.crossings, v):
            if bit:
                union(a, d)
                union(b, c)
            else:
                union(a, b)
                union(c, d)
        groups: dict[int, set] = {}
        for lab in range(1, self.pd.n_arcs + 1):
            groups.setdefault(find(lab), set()).add(lab)
        circles = tuple(frozenset(g) for _, g in sorted(groups.items()))
        circle_of_arc = {}
        for i, g in enumerate(circles):
            for lab in g:
                circle_of_arc[lab] = i
        bp = circle_of_arc[self.basepoint] if self.basepoint is not None else None
        state = SmoothedState(Resolution(v), circles, circle_of_arc, bp)
        self._smoothings[v] = state
        return state

    @cached_property
    def _smoothings(self) -> dict:
        return {}

    def resolutions(self) -> Iterable[tuple[int, ...]]:
        return product((0, 1), repeat=self.n_crossings)

    def cube_edges(self) -> list[CubeEdge]:
        edges = []
        for v in self.resolutions():
            for i, bit in enumerate(v):
                if bit:
                    continue
                u = v[:i] + (1,) + v[i + 1:]
                edges.append(self.edge(v, u, i))
        return edges

    def edge(self, v: tuple, u: tuple, i: int) -> CubeEdge:
        sv, su = self.smooth(v), self.smooth(u)
        a, b, c, d = self.pd.crossings[i]
        diff = su.n_circles - sv.n_circles
        if diff == -1:
            kind = "merge"
            cin = tuple(sorted({sv.circle_of_arc[a], sv.circle_of_arc[c]}))
            cout = (su.circle_of_arc[a],)
        elif diff == 1:
            kind = "split"
            cin = (sv.circle_of_arc[a],)
            cout = tuple(sorted({su.circle_of_arc[a], su.circle_of_arc[b]}))
        else:
            raise DiagramError(f"circle counts differ by {diff} along edge {v}->{u}; diagram is not planar")
        if len(cin) + len(cout) != 3:
            raise DiagramError(f"degenerate saddle at crossing {i}")
        passive = tuple(
            (j, su.circle_of_arc[min(circ)]) for j, circ in enumerate(sv.circles) if j not in cin
        )
        return CubeEdge(v, u, i, kind, cin, cout, passive)

    # -- constructions ----------------------------------------------------------
    def mirror(self) -> "LinkDiagram":
        """Exchange over and under at every crossing, keeping the orientation."""
        new = []
        for (a, b, c, d), oi in zip(self.pd.crossings, self.over_in):
            new.append((b, c, d, a) if oi == 1 else (d, a, b, c))
        name = f"mirror({self.name})" if self.name else ""
        return LinkDiagram(PDCode(tuple(new), self.pd.loops), self.basepoint, name)

    def relabel(self, mapping: dict) -> "LinkDiagram":
        new = tuple(tuple(mapping[x] for x in c) for c in self.pd.crossings)
        bp = mapping.get(self.basepoint, self.basepoint) if self.basepoint is not None else None
        return LinkDiagram(PDCode(new, self.pd.loops), bp, self.name)

    def canonical_pd(self) -> PDCode:
        """Lexicographically least code over cyclic arc relabelings and crossing orders."""
        n2 = 2 * self.n_crossings
        if not n2:
            return self.pd
        best = None
        for s in range(n2):
            rel = tuple(sorted(tuple((x - 1 + s) % n2 + 1 for x in c) for c in self.pd.crossings))
            if best is None or rel < best:
                best = rel
        return PDCode(best, self.pd.loops)

    def smooth_crossing(self, i: int, bit: int) -> tuple["LinkDiagram", dict]:
        """Diagram with crossing ``i`` replaced by its ``bit``-smoothing, and the old->new arc map."""
        crossings = list(self.pd.crossings)
        a, b, c, d = crossings.pop(i)
        parent = {lab: lab for lab in range(1, self.pd.n_arcs + 1)}

        def find(x):
            while parent[x] != x:
                x = parent[x]
            return x

        def union(x, y):
            rx, ry = find(x), find(y)
            if rx != ry:
                parent[max(rx, ry)] = min(rx, ry)

        if bit:
            union(a, d)
            union(b, c)
        else:
            union(a, b)
            union(c, d)
        remaining = {lab for x in crossings for lab in x}
        groups: dict[int, set] = {}
        for lab in parent:
            groups.setdefault(find(lab), set()).add(lab)
        arcs = sorted((min(g), g) for g in groups.values() if g & remaining)
        loops = sorted((min(g), g) for g in groups.values() if not g & remaining)
        arc_map = {}
        for new, (_, g) in enumerate(arcs, start=1):
            for lab in g:
                arc_map[lab] = new
        for new, (_, g) in enumerate(loops, start=len(arcs) + 1):
            for lab in g:
                arc_map[lab] = new
        new_crossings = [tuple(arc_map[lab] for lab in x) for x in crossings]
        bp = arc_map[self.basepoint] if self.basepoint is not None else None
        return LinkDiagram.reoriented(new_crossings, len(loops), bp), arc_map

    def add_kink(self, arc: int, positive: bool = True) -> "LinkDiagram":
        """Reidemeister I: insert a curl on ``arc`` (a crossing arc, not a free loop)."""
        if arc not in self.arc_head:
            raise DiagramError(f"arc {arc} is not a crossing arc")
        n2 = 2 * self.n_crossings
        y, z = n2 + 1, n2 + 2
        hc, hs = self.arc_head[arc]
        crossings = [list(x) for x in self.pd.crossings]
        crossings[hc][hs] = z
        crossings.append([arc, z, y, y] if positive else [arc, y, y, z])
        shift = {n2 + 1 + j: n2 + 3 + j for j in range(self.pd.loops)}
        bp = shift.get(self.basepoint, self.basepoint)
        return LinkDiagram(PDCode(tuple(tuple(x) for x in crossings), self.pd.loops), bp, self.name)

    def add_loop_kink(self, positive: bool = True) -> "LinkDiagram":
        """Replace one free loop by a one-crossing curl."""
        if not self.pd.loops:
            raise DiagramError("no free loop to curl")
        n2 = 2 * self.n_crossings
        crossings = [tuple(x) for x in self.pd.crossings]
        y, z = n2 + 1, n2 + 2
        crossings.append((y, y, z, z) if positive else (y, z, z, y))
        loop_label = n2 + 1
        remap = {n2 + 1 + j: n2 + 2 + j for j in range(1, self.pd.loops)}
        bp = self.basepoint
        if bp == loop_label:
            bp = y
        else:
            bp = remap.get(bp, bp)
        return LinkDiagram(PDCode(tuple(crossings), self.pd.loops - 1), bp, self.name)


def _trace_components(crossings: Sequence[Crossing]):
    """Components as cyclic lists of (crossing, in_slot, out_slot), arbitrary direction."""
    where: dict[int, list] = {}
    for ci, x in enumerate(crossings):
        for slot, lab in enumerate(x):
            where.setdefault(lab, []).append((ci, slot))
    seen = set()
    comps = []
    for ci0 in range(len(crossings)):
        for start_slot in (0, 1):
            if (ci0, start_slot) in seen:
                continue
            comp = []
            ci, sin = ci0, start_slot
            while (ci, sin) not in seen:
                sout = (sin + 2) % 4
                seen.add((ci, sin))
                seen.add((ci, sout))
                comp.append((ci, sin, sout))
                lab = crossings[ci][sout]
                ends = where[lab]
                if ends[0] == (ci, sout):
                    ci, sin = ends[1]
                else:
                    ci, sin = ends[0]
            comps.append(comp)
    return comps


def _reverse(comp):
    return [(ci, sout, sin) for ci, sin, sout in reversed(comp)]


def connected_sum(d1: LinkDiagram, d2: LinkDiagram) -> LinkDiagram:
    """Splice ``d2`` into ``d1`` at the two basepoints; the result keeps ``d1``'s basepoint."""
    if d1.basepoint is None or d2.basepoint is None:
        raise DiagramError("connected sum needs a basepoint on both diagrams")
    n1, n2 = 2 * d1.n_crossings, 2 * d2.n_crossings
    shift = {lab: lab + n1 for lab in range(1, n2 + 1)}
    c1 = [list(x) for x in d1.pd.crossings]
    c2 = [[shift[lab] for lab in x] for x in d2.pd.crossings]
    x, y = d1.basepoint, d2.basepoint
    x_loop, y_loop = x > n1, y > n2
    loops = d1.pd.loops + d2.pd.loops - (1 if x_loop or y_loop else 0)
    if x_loop and y_loop:
        bp = n1 + n2 + 1  # the two loops fuse into one free loop
    elif y_loop:
        bp = x
    elif x_loop:
        bp = shift[y]
    else:
        hc1, hs1 = d1.arc_head[x]
        hc2, hs2 = d2.arc_head[y]
        c1[hc1][hs1] = shift[y]
        c2[hc2][hs2] = x
        bp = x
    crossings = c1 + c2
    name = f"{d1.name}#{d2.name}" if d1.name and d2.name else ""
    return LinkDiagram(PDCode(tuple(tuple(c) for c in crossings), loops), bp, name)


def from_braid(word: Sequence[int], n_strands: int, name: str = "") -> LinkDiagram:
    """Closure of a braid word; ``+i`` means strand i passes over strand i+1 (a positive crossing)."""
    labels = list(range(1, n_strands + 1))
    start = list(labels)
    next_label = n_strands + 1
    crossings = []
    for g in word:
        i = abs(g) - 1
        if not 0 <= i < n_strands - 1 or g == 0:
            raise DiagramError(f"generator {g} out of range for {n_strands} strands")
        a_left, a_right = labels[i], labels[i + 1]
        b_left, b_right = next_label, next_label + 1
        next_label += 2
        if g > 0:
            crossings.append([a_right, b_right, b_left, a_left])
        else:
            crossings.append([a_left, a_right, b_right, b_left])
        labels[i], labels[i + 1] = b_left, b_right
    closing = {end: st for end, st in zip(labels, start)}
    # follow identifications to a fixed point (strands that never cross map to themselves)
    def resolve(lab):
        seen = set()
        while lab in closing and closing[lab] != lab and lab not in seen:
            seen.add(lab)
            lab = closing[lab]
        return lab

    crossings = [[resolve(lab) for lab in x] for x in crossings]
    used = sorted({lab for x in crossings for lab in x})
    free = sum(1 for st in start if closing.get(st) == st)
    mapping = {lab: k for k, lab in enumerate(used, start=1)}
    pd = PDCode(tuple(tuple(mapping[lab] for lab in x) for x in crossings), free)
    return LinkDiagram(pd, 1 if pd.n_arcs else None, name)


def trace_circle_counts(d: LinkDiagram) -> dict:
    return {v: d.smooth(v).n_circles for v in d.resolutions()}
