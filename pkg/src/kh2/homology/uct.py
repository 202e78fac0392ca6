"""Universal-coefficient consistency between F5 homology and its base changes.

Pipeline A computes the F5 presentation over GF(2)[h, t] once and evaluates it
at the image point (phi(h)(p), phi(t)(p)); pipeline B base-changes the system,
builds the complex over the target ring and computes field homology at p.
Both give dim H^k(C ⊗ k_p); the presentation side uses
``dim(H^k ⊗ k_p) + dim Tor_1(H^{k+1}, k_p)``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from ..complex import build_complex
from ..diagram import LinkDiagram
from ..fields import GF, GF2k
from ..frobenius import F5, FrobeniusSystem
from ..rings import RingHom
from .field import field_dimensions
from .groebner import groebner_presentation, specialized_dimensions

DEFAULT_FIELD_DEGREE = 16


@dataclass
class UCTReport:
    name: str
    passed: bool
    seed: int
    points: list = field(default_factory=list)
    mismatches: list = field(default_factory=list)

    def __bool__(self):
        return self.passed


def sample_points(phi: RingHom, n: int, seed: int, fld: Optional[GF2k] = None) -> tuple[list, GF2k]:
    ring = phi.target
    if ring.arity == 0:
        return [()], GF(ring.field_degree)
    if fld is None:
        fld = GF(DEFAULT_FIELD_DEGREE if ring.field_degree == 1 else ring.field_degree)
    # the all-ones point and its neighbours first: T_i = 1 sends (P, Q) to (0, 0),
    # where the homology jumps and Tor terms show up; random points are generic
    m = ring.arity
    pts = [tuple([1] * m)] + [tuple(fld.zeta if i == j else 1 for i in range(m)) for j in range(m)]
    pts = pts[:n]
    rnd = random.Random(seed)
    while len(pts) < n:
        pts.append(tuple(rnd.randrange(1 if lm else 0, fld.order) for lm in ring.laurent_mask))
    return pts, fld


def uct_check(d: LinkDiagram, phi: RingHom, points: int = 20, seed: int = 0, reduced: bool = False,
              source: FrobeniusSystem = F5, target: Optional[FrobeniusSystem] = None,
              fld: Optional[GF2k] = None) -> UCTReport:
    if phi.source != source.ring:
        raise ValueError(f"base change must start at {source.ring}")
    target = target or source.base_change(phi)
    pres = groebner_presentation(build_complex(d, source, reduced), seed=seed)
    cb = build_complex(d, target, reduced)
    pts, fld = sample_points(phi, points, seed, fld)
    degrees = sorted(set(cb.degrees))
    report = UCTReport(f"uct:{d.name or 'diagram'}:{phi.name}", True, seed)
    for p in pts:
        image = tuple(img.evaluate(p, fld) for img in phi.images)
        a = specialized_dimensions(pres, image, fld, degrees)
        b = field_dimensions(cb, p, fld)
        report.points.append({"point": [fld.format(x) for x in p], "dims": b})
        if a != b:
            report.passed = False
            report.mismatches.append({"point": [fld.format(x) for x in p], "presentation": a, "direct": b})
    return report
