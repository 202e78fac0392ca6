"""Homology of free cochain complexes in three coefficient tiers."""

from __future__ import annotations

from typing import Optional, Sequence

from ..complex import GradedFreeComplex
from ..errors import UnsupportedRingError
from .field import field_dimensions, homology_field
from .groebner import Budget, groebner_presentation
from .module import DegreeHomology, HomologyModule, Presentation
from .pid import SNFResult, homology_pid, is_pid_ring, smith_normal_form
from .uct import UCTReport, uct_check
from .cancel import cancel_units

TIERS = ("field", "pid", "groebner")


def default_tier(c: GradedFreeComplex) -> str:
    if c.ring.arity == 0:
        return "field"
    if is_pid_ring(c.ring):
        return "pid"
    if c.ring.arity == 2 and not c.ring.is_laurent:
        return "groebner"
    raise UnsupportedRingError(f"no exact tier for {c.ring}; specialize with a point")


def compute_homology(c: GradedFreeComplex, tier: Optional[str] = None, at: Optional[Sequence] = None,
                     seed: int = 0, budget: Optional[Budget] = None) -> HomologyModule:
    if at is not None:
        if tier not in (None, "field"):
            raise ValueError("a specialization point implies the field tier")
        return homology_field(c, at)
    if tier is None:
        try:
            tier = default_tier(c)
        except UnsupportedRingError:
            free = free_after_cancellation(c)
            if free is None:
                raise
            return free
    if tier == "field":
        return homology_field(c)
    if tier == "pid":
        return homology_pid(c)
    if tier == "groebner":
        return groebner_presentation(c, seed=seed, budget=budget)
    raise ValueError(f"unknown tier {tier!r}; choose from {TIERS}")


__all__ = [
    "Budget", "DegreeHomology", "HomologyModule", "Presentation", "SNFResult", "TIERS", "UCTReport",
    "compute_homology", "default_tier", "field_dimensions", "groebner_presentation", "homology_field",
    "homology_pid", "smith_normal_form", "uct_check",
]


def free_after_cancellation(c: GradedFreeComplex) -> Optional[HomologyModule]:
    """Free homology when cancelling units leaves zero differentials (any ring), else None."""
    red = cancel_units(c)
    if any(red.differential(k).nnz for k in red.degrees):
        return None
    degrees = {k: DegreeHomology(red.rank(k)) for k in red.degrees if red.rank(k)}
    return HomologyModule(c.ring, "cancel", degrees, c.shift)
