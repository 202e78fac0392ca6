"""Homology modules: the per-degree answer of every tier, and its serialization."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from ..rings import RingDescriptor


@dataclass
class Presentation:
    """``coker(relations)`` on ``n_generators`` generators.

    ``relations`` holds columns, each a list of ``n_generators`` ring elements.
    ``syzygies`` optionally holds the columns generating the relations' syzygy
    module; both are used to evaluate ``dim H ⊗ k_p`` and ``dim Tor_1(H, k_p)``.
    """

    n_generators: int
    relations: list
    syzygies: Optional[list] = None

    def relation_matrix(self) -> list:
        """Row-major ``n_generators x len(relations)`` matrix."""
        return [[col[i] for col in self.relations] for i in range(self.n_generators)]

    def to_json(self) -> dict:
        out = {
            "generators": self.n_generators,
            "relations": [[str(x) for x in col] for col in self.relations],
        }
        if self.syzygies is not None:
            out["syzygies"] = [[str(x) for x in col] for col in self.syzygies]
        return out


@dataclass
class DegreeHomology:
    free_rank: int
    torsion: list = field(default_factory=list)  # invariant factors, divisibility ordered
    presentation: Optional[Presentation] = None
    q_ranks: Optional[dict] = None  # quantum degree -> dimension (field tier, graded complexes)

    @property
    def is_zero(self) -> bool:
        if self.presentation is not None:
            p = self.presentation
            return p.n_generators == 0
        return self.free_rank == 0 and not self.torsion

    def to_json(self) -> dict:
        out: dict = {"free_rank": self.free_rank, "torsion": [str(t) for t in self.torsion]}
        if self.presentation is not None:
            out["presentation"] = self.presentation.to_json()
        if self.q_ranks is not None:
            out["q_ranks"] = {str(q): n for q, n in sorted(self.q_ranks.items())}
        return out

    def signature(self) -> tuple:
        q = tuple(sorted(self.q_ranks.items())) if self.q_ranks is not None else None
        return (self.free_rank, tuple(str(t) for t in self.torsion), q)


@dataclass
class HomologyModule:
    ring: RingDescriptor
    tier: str  # "field" | "pid" | "groebner"
    degrees: dict  # homological degree -> DegreeHomology (zero degrees omitted)
    shift: int = 0  # raw cube degree = degree + shift
    meta: dict = field(default_factory=dict)

    def __getitem__(self, k: int) -> DegreeHomology:
        return self.degrees.get(k) or DegreeHomology(0)

    def nonzero_degrees(self) -> list[int]:
        return sorted(k for k, h in self.degrees.items() if not h.is_zero)

    def ranks(self) -> dict:
        """Free rank per nonzero degree (the dimension in the field tier)."""
        return {k: self.degrees[k].free_rank for k in self.nonzero_degrees() if self.degrees[k].free_rank}

    @property
    def total_rank(self) -> int:
        return sum(h.free_rank for h in self.degrees.values())

    def poincare(self) -> dict:
        """(homological degree, q) -> dimension, when q-ranks are present."""
        out = {}
        for k, h in self.degrees.items():
            for q, n in (h.q_ranks or {}).items():
                if n:
                    out[(k, q)] = n
        return out

    def signature(self) -> tuple:
        return tuple((k, self.degrees[k].signature()) for k in self.nonzero_degrees())

    def same_as(self, other: "HomologyModule") -> bool:
        return self.signature() == other.signature()

    def to_json(self) -> dict:
        return {
            "ring": str(self.ring),
            "tier": self.tier,
            "degrees": {str(k): self.degrees[k].to_json() for k in self.nonzero_degrees()},
            "shift": self.shift,
            **({"meta": self.meta} if self.meta else {}),
        }

    def summary(self) -> str:
        parts = []
        for k in self.nonzero_degrees():
            h = self.degrees[k]
            s = f"H^{k}: "
            terms = []
            if h.free_rank:
                terms.append(f"{self.ring}^{h.free_rank}" if h.free_rank > 1 else str(self.ring))
            for t in h.torsion:
                terms.append(f"{self.ring}/({t})")
            if h.presentation is not None and not terms:
                terms.append(f"<{h.presentation.n_generators} gens | {len(h.presentation.relations)} rels>")
            elif h.presentation is not None and h.presentation.relations:
                terms.append(f"+ presentation <{h.presentation.n_generators} | {len(h.presentation.relations)}>")
            parts.append(s + " ⊕ ".join(terms))
        return "\n".join(parts) if parts else "0"
