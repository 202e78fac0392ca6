"""Hypothesis strategies shared by the property tests."""

from hypothesis import strategies as st

from kh2.rings import CALR, F2T, R5, S_BN, RingDescriptor, LaurentPoly

GF4_XY = RingDescriptor(2, ("x", "y"), (False, True))
RINGS = {"R5": R5, "calR": CALR, "F2[h]": S_BN, "F2[T]": F2T, "GF4[x,y^±]": GF4_XY}


def polys(ring, max_terms=5, max_exp=3):
    def exps():
        return st.tuples(*[st.integers(-max_exp if lm else 0, max_exp) for lm in ring.laurent_mask])

    coeff = st.integers(1, ring.field.order - 1)
    return st.dictionaries(exps(), coeff, max_size=max_terms).map(lambda d: LaurentPoly.from_terms(ring, d))


def units(ring):
    """Nonzero constant times a monomial (Laurent variables only)."""
    exps = st.tuples(*[st.integers(-3, 3) if lm else st.just(0) for lm in ring.laurent_mask])
    return st.builds(lambda e, c: ring.monomial(e, c), exps, st.integers(1, ring.field.order - 1))


def field_points(ring, k=16):
    lo = 1
    return st.tuples(*[st.integers(lo, (1 << k) - 1) for _ in range(ring.arity)])
