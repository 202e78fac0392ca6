"""Parser for polynomial expressions and ring descriptors typed on the command line.

Expressions are sums of products of powers: ``T1*T2^-1 + (h+1)^2 + z*t``.
``-`` is accepted and means ``+`` (characteristic 2); integer literals are
reduced mod 2; ``z`` is the generator of GF(2^K) unless the ring declares a
variable of that name.  Negative powers are allowed only on Laurent variables
and on parenthesized units.
"""

from __future__ import annotations

import re

from .errors import ParseError
from .rings import NAMED_RINGS, LaurentPoly, RingDescriptor

_TOKENS = re.compile(r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))")


def _tokenize(text: str) -> list:
    toks, pos = [], 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKENS.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        toks.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, ring: RingDescriptor):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i]

    def take(self, value=None):
        tok = self.toks[self.i]
        if value is not None and tok[1] != value:
            raise ParseError(f"expected {value!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> LaurentPoly:
        if self.peek()[1] in "+-" and self.peek()[0] == "op":
            self.take()
        acc = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            self.take()
            acc = acc + self.term()
        return acc

    def term(self) -> LaurentPoly:
        acc = self.factor()
        while self.peek()[1] == "*":
            self.take()
            acc = acc * self.factor()
        return acc

    def factor(self) -> LaurentPoly:
        start = self.peek()[2]
        base, is_var = self.atom()
        if self.peek()[1] != "^":
            return base
        self.take()
        neg = False
        if self.peek()[1] == "-":
            self.take()
            neg = True
        kind, val, pos = self.take()
        if kind != "num":
            raise ParseError("exponent must be an integer", pos)
        e = int(val)
        if not neg:
            return base ** e
        if is_var is not None and not self.ring.laurent_mask[is_var]:
            raise ParseError(f"negative power of polynomial variable {self.ring.variable_names[is_var]!r}", start)
        if not base.is_unit():
            raise ParseError("negative power of a non-unit", start)
        return base.inverse() ** e

    def atom(self):
        kind, val, pos = self.take()
        ring = self.ring
        if kind == "num":
            return ring.constant(int(val) % 2), None
        if kind == "name":
            if val in ring.variable_names:
                i = ring.index(val)
                return ring.gen(i), i
            if val == "z" and ring.field_degree > 1:
                return ring.constant(ring.field.zeta), None
            raise ParseError(f"unknown variable {val!r} (ring {ring})", pos)
        if val == "(":
            inner = self.expr()
            self.take(")")
            return inner, None
        raise ParseError(f"unexpected {val or 'end of input'!r}", pos)


def parse_expression(text: str, ring: RingDescriptor) -> LaurentPoly:
    p = _Parser(text, ring)
    if p.peek()[0] == "end":
        raise ParseError("empty expression", 0)
    out = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ParseError(f"unexpected {val!r}", pos)
    return out


_RING = re.compile(r"^\s*(?:F2|GF\(2\^(?P<k>\d+)\)|F(?P<q>\d+))\s*(?:\[(?P<vars>[^\]]*)\])?\s*$")


def parse_ring(text: str) -> RingDescriptor:
    """``F2[h,t]``, ``F2[T^±1]`` (also ``T^-1`` or ``T±``), ``GF(2^2)[x]``, ``F4`` or a named ring."""
    if text in NAMED_RINGS:
        return NAMED_RINGS[text]
    m = _RING.match(text)
    if not m:
        raise ParseError(f"cannot read ring descriptor {text!r}", 0)
    if m.group("k"):
        k = int(m.group("k"))
    elif m.group("q"):
        q = int(m.group("q"))
        if q & (q - 1) or q < 2:
            raise ParseError(f"F{q} is not a field of characteristic 2", 0)
        k = q.bit_length() - 1
    else:
        k = 1
    names, mask = [], []
    body = (m.group("vars") or "").strip()
    for part in filter(None, (s.strip() for s in body.split(","))):
        laurent = False
        for suffix in ("^±1", "^+-1", "^-1", "±"):
            if part.endswith(suffix):
                part, laurent = part[: -len(suffix)].strip(), True
                break
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", part):
            raise ParseError(f"bad variable name {part!r}", text.find(part))
        names.append(part)
        mask.append(laurent)
    try:
        return RingDescriptor(k, tuple(names), tuple(mask))
    except ValueError as e:
        raise ParseError(str(e), 0) from None
