"""Order-aware packed monomial keys used inside the reduction engines.

A key ``K`` is an unsigned integer made of 16-bit fields, most significant
first, laid out so that integer comparison *is* the monomial order:

* a grevlex block contributes a total-degree field followed by complemented
  exponents ``MAXE - e`` of its variables, last variable first;
* a lex block contributes its raw exponents, first variable first.

Every field is linear in the exponent vector, so ``K(a*b) = K(a) + K(b) - BIAS``
where ``BIAS`` is the key of the monomial 1.  Bit 15 of each field is a guard
bit kept clear; divisibility is two guarded subtractions.  Keys are padded to
a whole number of 64-bit words so the compiled kernel can work word by word on
exactly the same integers.
"""

from __future__ import annotations

from typing import Sequence

from .polyring import MonomialOrder

FB = 16
MAXE = (1 << (FB - 1)) - 1   # complement base
DEG_LIMIT = (1 << (FB - 2)) - 1  # max exponent/degree inside a grevlex block
FIELDS_PER_WORD = 64 // FB


class MonomialCodec:
    def __init__(self, nvars: int, order: MonomialOrder):
        self.nvars = nvars
        self.order = order
        if order.kind == "lex":
            blocks = [(tuple(range(nvars)), "lex")]
        elif order.kind == "grevlex":
            blocks = [(tuple(range(nvars)), "grevlex")]
        else:
            blocks = [(tuple(v), inner) for v, inner in order.blocks if v]
        # fields from most significant: (kind, var or block vars)
        fields: list[tuple[str, object]] = []
        for vars_, inner in blocks:
            if inner == "grevlex":
                fields.append(("deg", vars_))
                for v in reversed(vars_):
                    fields.append(("comp", v))
            else:
                for v in vars_:
                    fields.append(("plain", v))
        pad = (-len(fields)) % FIELDS_PER_WORD
        fields = [("pad", None)] * pad + fields
        self.fields = fields
        self.nfields = len(fields)
        self.words = self.nfields // FIELDS_PER_WORD
        self.bits = FB * self.nfields

        guard = bias = gplain = gcomp = ovf = 0
        self._layout = []  # (shift, kind, payload)
        for idx, (kind, payload) in enumerate(fields):
            shift = FB * (self.nfields - 1 - idx)
            g = 1 << (shift + FB - 1)
            guard |= g
            if kind == "comp":
                bias |= MAXE << shift
                gcomp |= g
            elif kind == "plain":
                gplain |= g
                ovf |= g
            elif kind == "deg":
                ovf |= g | (1 << (shift + FB - 2))
            self._layout.append((shift, kind, payload))
        self.BIAS = bias
        self.GUARD = guard
        self.GPLAIN = gplain
        self.GCOMP = gcomp
        self.OVF = ovf
        self.one = bias

    # --- conversions
    def encode(self, exps: Sequence[int]) -> int:
        k = 0
        for shift, kind, payload in self._layout:
            if kind == "comp":
                e = exps[payload]
                if e > DEG_LIMIT:
                    raise OverflowError("exponent too large for packed key")
                k |= (MAXE - e) << shift
            elif kind == "plain":
                e = exps[payload]
                if e > MAXE:
                    raise OverflowError("exponent too large for packed key")
                k |= e << shift
            elif kind == "deg":
                d = sum(exps[v] for v in payload)
                if d > DEG_LIMIT:
                    raise OverflowError("degree too large for packed key")
                k |= d << shift
        return k

    def decode(self, k: int) -> tuple[int, ...]:
        out = [0] * self.nvars
        mask = (1 << FB) - 1
        for shift, kind, payload in self._layout:
            if kind == "comp":
                out[payload] = MAXE - ((k >> shift) & mask)
            elif kind == "plain":
                out[payload] = (k >> shift) & mask
        return tuple(out)

    # --- arithmetic on keys (pure Python reference; engines inline these)
    def mul(self, a: int, b: int) -> int:
        k = a + b - self.BIAS
        if k & self.OVF:
            raise OverflowError("exponent overflow")
        return k

    def div(self, b: int, a: int) -> int:
        """``b / a`` for ``a | b``."""
        return b - a + self.BIAS

    def divides(self, a: int, b: int) -> bool:
        g = self.GUARD
        if self.GPLAIN and (((b | g) - a) & self.GPLAIN) != self.GPLAIN:
            return False
        if self.GCOMP and (((a | g) - b) & self.GCOMP) != self.GCOMP:
            return False
        return True

    def lcm(self, a: int, b: int) -> int:
        ea, eb = self.decode(a), self.decode(b)
        return self.encode([x if x > y else y for x, y in zip(ea, eb)])

    def degree(self, k: int) -> int:
        return sum(self.decode(k))

    def to_words(self, k: int) -> list[int]:
        m = (1 << 64) - 1
        return [(k >> (64 * (self.words - 1 - i))) & m for i in range(self.words)]
