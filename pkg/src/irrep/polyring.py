"""Exact scalars and sparse commutative polynomials over QQ and GF(p).

Polynomials store their terms in a dict keyed by a *packed* exponent vector:
a Python int holding one 16-bit field per variable (variable ``i`` at bit
``16*i``) topped by a total-degree field.  Packing makes monomial
multiplication a single integer addition and keeps dict hashing cheap; the
:class:`Monomial` value type gives the sparse view used at the API surface.
"""

from __future__ import annotations

import enum
import functools
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

try:  # gmpy2 rationals are an order of magnitude faster than Fraction
    from gmpy2 import mpq as _mpq
except ImportError:  # pragma: no cover - exercised only without gmpy2
    _mpq = None

_SCALAR_TYPES: tuple = (int, Fraction) if _mpq is None else (int, Fraction, type(_mpq(0)))

FIELD_BITS = 16
MAX_EXPONENT = (1 << (FIELD_BITS - 1)) - 1
_FIELD_MASK = (1 << FIELD_BITS) - 1


class FieldMismatch(TypeError):
    """Raised when values from different coefficient fields meet."""


class ContextMismatch(ValueError):
    """Raised when polynomials from different rings are combined."""


class ExponentOverflow(OverflowError):
    pass


# --------------------------------------------------------------------------
# scalars


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    small = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
    for q in small:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic for n < 3.3e24
    for a in small:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class Residue:
    """An element of GF(p)."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: int):
        self.value = value % modulus
        self.modulus = modulus

    def _coerce(self, other):
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise FieldMismatch(f"GF({self.modulus}) vs GF({other.modulus})")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            raise FieldMismatch("cannot mix rational and residue scalars")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value - o, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(o - self.value, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(self.value * o, self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Residue(-self.value, self.modulus)

    def inverse(self) -> "Residue":
        if self.value == 0:
            raise ZeroDivisionError("inverse of zero in GF(%d)" % self.modulus)
        return Residue(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * Residue(o, self.modulus).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Residue(o, self.modulus) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return Residue(pow(self.value, e, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, Residue):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return (other - self.value) % self.modulus == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"Residue({self.value}, {self.modulus})"

    def __str__(self):
        return str(self.value)


class RationalField:
    """The field QQ.  Native coefficients are gmpy2 ``mpq`` when available."""

    char = 0
    name = "QQ"

    def __init__(self):
        self.native = _mpq if _mpq is not None else Fraction
        self.zero = self.native(0)
        self.one = self.native(1)

    def convert(self, x):
        if isinstance(x, Residue):
            raise FieldMismatch("residue given where a rational was expected")
        if isinstance(x, str):
            x = Fraction(x)
        if _mpq is not None and isinstance(x, Fraction):
            return _mpq(x.numerator, x.denominator)
        return self.native(x)

    def scalar(self, c) -> Fraction:
        """Public scalar (a reduced :class:`Fraction`) for a native coefficient."""
        return Fraction(int(c.numerator), int(c.denominator))

    def inv(self, c):
        return self.one / c

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class PrimeField:
    """GF(p); native coefficients are ints in ``[0, p)``."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"non-prime modulus {p}")
        self.char = p
        self.name = f"GF({p})"
        self.zero = 0
        self.one = 1

    def convert(self, x) -> int:
        p = self.char
        if isinstance(x, Residue):
            if x.modulus != p:
                raise FieldMismatch(f"GF({x.modulus}) element used in GF({p})")
            return x.value
        if isinstance(x, int):
            return x % p
        if isinstance(x, str):
            x = Fraction(x)
        x = Fraction(x)
        if x.denominator % p == 0:
            raise ZeroDivisionError(f"denominator {x.denominator} vanishes mod {p}")
        return x.numerator * pow(x.denominator, -1, p) % p

    def scalar(self, c) -> Residue:
        return Residue(c, self.char)

    def inv(self, c):
        return pow(c, -1, self.char)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.char == self.char

    def __hash__(self):
        return hash(("GF", self.char))

    def __repr__(self):
        return self.name


QQ = RationalField()


@functools.lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


def parse_field(spec: str):
    """``"QQ"`` or ``"GF(p)"`` -> field object."""
    s = spec.strip().replace(" ", "")
    if s in ("QQ", "Q"):
        return QQ
    if s.startswith("GF(") and s.endswith(")"):
        try:
            p = int(s[3:-1])
        except ValueError:
            raise ValueError(f"bad field spec {spec!r}") from None
        return GF(p)
    raise ValueError(f"bad field spec {spec!r}")


# --------------------------------------------------------------------------
# monomials and orders


class Ordering(enum.IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


class Monomial:
    """Sparse exponent vector ``((var, exp), ...)`` sorted by variable."""

    __slots__ = ("exponents", "degree")

    def __init__(self, exponents: Iterable[tuple[int, int]] = ()):
        items = sorted((int(v), int(e)) for v, e in exponents if e)
        for i in range(1, len(items)):
            if items[i][0] == items[i - 1][0]:
                raise ValueError("repeated variable in monomial")
        if any(e < 0 for _, e in items):
            raise ValueError("negative exponent")
        self.exponents = tuple(items)
        self.degree = sum(e for _, e in items)

    @classmethod
    def from_dense(cls, exps: Sequence[int]) -> "Monomial":
        return cls((i, e) for i, e in enumerate(exps) if e)

    def dense(self, nvars: int) -> tuple[int, ...]:
        out = [0] * nvars
        for v, e in self.exponents:
            out[v] = e
        return tuple(out)

    def __mul__(self, other: "Monomial") -> "Monomial":
        d = dict(self.exponents)
        for v, e in other.exponents:
            d[v] = d.get(v, 0) + e
        return Monomial(d.items())

    def divides(self, other: "Monomial") -> bool:
        d = dict(other.exponents)
        return all(d.get(v, 0) >= e for v, e in self.exponents)

    def __eq__(self, other):
        return isinstance(other, Monomial) and self.exponents == other.exponents

    def __hash__(self):
        return hash(self.exponents)

    def __repr__(self):
        return f"Monomial({self.exponents!r})"


class MonomialOrder:
    """lex, grevlex, or a block order made of lex/grevlex blocks.

    A block order compares the exponents of its first block first (by that
    block's inner order), then the next block, and so on.  Blocks may name
    variables by index or by name; names are resolved by :meth:`bind`.
    """

    def __init__(self, kind: str, blocks=None):
        if kind not in ("lex", "grevlex", "block"):
            raise ValueError(f"unknown monomial order {kind!r}")
        self.kind = kind
        self.blocks = blocks  # ((vars, inner), ...) for block orders

    @classmethod
    def block(cls, eliminate, inner: str = "grevlex", rest_inner: str | None = None):
        """Block order in which monomials containing ``eliminate`` variables
        exceed every monomial in the remaining variables."""
        return cls("block", ((tuple(eliminate), inner), (None, rest_inner or inner)))

    def bind(self, names: Sequence[str]) -> "MonomialOrder":
        if self.kind != "block":
            return self
        index = {nm: i for i, nm in enumerate(names)}
        used: list[int] = []
        bound = []
        rest_inner = None
        for vars_, inner in self.blocks:
            if inner not in ("lex", "grevlex"):
                raise ValueError(f"unknown inner order {inner!r}")
            if vars_ is None:
                rest_inner = inner
                continue
            idx = []
            for v in vars_:
                i = index[v] if isinstance(v, str) else int(v)
                if not 0 <= i < len(names):
                    raise ValueError(f"block variable {v!r} not in ring")
                idx.append(i)
            idx = sorted(set(idx))
            used.extend(idx)
            bound.append((tuple(idx), inner))
        if len(set(used)) != len(used):
            raise ValueError("blocks overlap")
        rest = tuple(i for i in range(len(names)) if i not in set(used))
        if rest:
            bound.append((rest, rest_inner or "grevlex"))
        return MonomialOrder("block", tuple(bound))

    @property
    def eliminated(self) -> tuple[int, ...]:
        if self.kind != "block":
            return ()
        return self.blocks[0][0]

    def key(self, exps: Sequence[int]):
        """Sort key on dense exponent tuples: bigger key = bigger monomial."""
        if self.kind == "lex":
            return tuple(exps)
        if self.kind == "grevlex":
            return (sum(exps), tuple(-e for e in reversed(exps)))
        out = []
        for vars_, inner in self.blocks:
            sub = [exps[i] for i in vars_]
            if inner == "lex":
                out.append(tuple(sub))
            else:
                out.append((sum(sub), tuple(-e for e in reversed(sub))))
        return tuple(out)

    def compare(self, a: Sequence[int], b: Sequence[int]) -> Ordering:
        ka, kb = self.key(a), self.key(b)
        return Ordering((ka > kb) - (ka < kb))

    def __eq__(self, other):
        return (isinstance(other, MonomialOrder) and self.kind == other.kind
                and self.blocks == other.blocks)

    def __hash__(self):
        return hash((self.kind, self.blocks))

    def __repr__(self):
        if self.kind != "block":
            return self.kind
        return f"block({self.blocks!r})"


lex = MonomialOrder("lex")
grevlex = MonomialOrder("grevlex")


def _as_order(order) -> MonomialOrder:
    if isinstance(order, MonomialOrder):
        return order
    if order in ("lex", "grevlex"):
        return MonomialOrder(order)
    raise ValueError(f"unknown monomial order {order!r}")


def compare_monomials(m1: Monomial, m2: Monomial, order, nvars: int | None = None) -> Ordering:
    order = _as_order(order)
    if nvars is None:
        top = [v for v, _ in m1.exponents + m2.exponents]
        nvars = max(top) + 1 if top else 0
    if order.kind == "block" and order.blocks and nvars < 1 + max(
            max(vs) for vs, _ in order.blocks if vs):
        raise ValueError("monomial narrower than the bound block order")
    return order.compare(m1.dense(nvars), m2.dense(nvars))


# --------------------------------------------------------------------------
# ring context


class RingContext:
    """Coefficient field + ordered variable registry + default order.

    Immutable; polynomials remember the context they were built in and refuse
    to mix with polynomials from another one.
    """

    def __init__(self, field, names: Sequence[str], order="grevlex"):
        names = tuple(names)
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValueError(f"duplicate variable name(s): {', '.join(dup)}")
        for nm in names:
            if not nm or not (nm[0].isalpha() or nm[0] == "_") or not all(
                    ch.isalnum() or ch == "_" for ch in nm):
                raise ValueError(f"invalid variable name {nm!r}")
        self.field = field
        self.names = names
        self.nvars = len(names)
        self.order = _as_order(order).bind(names)
        self._index = {nm: i for i, nm in enumerate(names)}
        self._deg_shift = FIELD_BITS * self.nvars
        # guard bits of every field (incl. the degree field) flag overflow
        self._guards = sum(1 << (FIELD_BITS * i + FIELD_BITS - 1) for i in range(self.nvars + 1))

    # registry
    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        return self is other or (isinstance(other, RingContext) and self.field == other.field
                                 and self.names == other.names and self.order == other.order)

    def __hash__(self):
        return hash((self.field, self.names, self.order))

    def __repr__(self):
        return f"RingContext({self.field!r}, {len(self.names)} vars, {self.order!r})"

    def with_order(self, order) -> "RingContext":
        return RingContext(self.field, self.names, order)

    def with_field(self, field) -> "RingContext":
        return RingContext(field, self.names, self.order)

    def extend(self, names: Sequence[str]) -> "RingContext":
        return RingContext(self.field, self.names + tuple(names), self.order)

    # packing
    def pack(self, exps: Sequence[int]) -> int:
        if len(exps) != self.nvars:
            raise ValueError("exponent vector has wrong length")
        packed = 0
        deg = 0
        for i, e in enumerate(exps):
            if e < 0 or e > MAX_EXPONENT:
                raise ExponentOverflow(f"exponent {e} out of range")
            if e:
                packed |= e << (FIELD_BITS * i)
                deg += e
        if deg > MAX_EXPONENT:
            raise ExponentOverflow(f"total degree {deg} out of range")
        return packed | (deg << self._deg_shift)

    def unpack(self, packed: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.nvars):
            out.append(packed & _FIELD_MASK)
            packed >>= FIELD_BITS
        return tuple(out)

    def packed_degree(self, packed: int) -> int:
        return packed >> self._deg_shift

    def monomial(self, packed: int) -> Monomial:
        return Monomial.from_dense(self.unpack(packed))

    def sort_key(self, order: MonomialOrder | None = None):
        """Key function on packed monomials for ``order`` (default: the ring's)."""
        order = self.order if order is None else _as_order(order).bind(self.names)
        if order.kind == "grevlex":
            shift = self._deg_shift
            # ties on degree: larger exponent in the last variable loses, and the
            # last variable occupies the most significant field
            return lambda m: ((m >> shift) << (shift + 1)) - m
        unpack = self.unpack
        okey = order.key
        return lambda m: okey(unpack(m))

    # construction
    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return Polynomial(self, {0: self.field.one})

    def constant(self, c) -> "Polynomial":
        c = self.field.convert(c)
        return Polynomial(self, {0: c} if c else {})

    def var(self, name) -> "Polynomial":
        i = self.index(name) if isinstance(name, str) else int(name)
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range")
        return Polynomial(self, {(1 << (FIELD_BITS * i)) | (1 << self._deg_shift): self.field.one})

    def gens(self) -> list["Polynomial"]:
        return [self.var(i) for i in range(self.nvars)]

    def from_terms(self, terms: Iterable[tuple[object, object]]) -> "Polynomial":
        """Build from ``(coeff, monomial)`` pairs; a monomial may be a
        :class:`Monomial`, a dense exponent tuple, or a ``{name: exp}`` dict."""
        conv = self.field.convert
        out: dict[int, object] = {}
        p = self.field.char
        for c, m in terms:
            if isinstance(m, Monomial):
                if m.exponents and m.exponents[-1][0] >= self.nvars:
                    raise ValueError("monomial variable outside the ring")
                exps = m.dense(self.nvars)
            elif isinstance(m, Mapping):
                e = [0] * self.nvars
                for nm, k in m.items():
                    e[self.index(nm) if isinstance(nm, str) else nm] += k
                exps = e
            else:
                exps = tuple(m)
            key = self.pack(exps)
            val = out.get(key, self.field.zero) + conv(c)
            if p:
                val %= p
            if val:
                out[key] = val
            else:
                out.pop(key, None)
        return Polynomial(self, out)

    def from_packed(self, terms: dict) -> "Polynomial":
        return Polynomial(self, {k: v for k, v in terms.items() if v})


def register_ring(field, names: Sequence[str], order="grevlex") -> RingContext:
    """Create an immutable :class:`RingContext`.

    ``field`` is a field object or a spec string (``"QQ"``, ``"GF(p)"``).
    """
    if isinstance(field, str):
        field = parse_field(field)
    elif isinstance(field, int):
        field = GF(field)
    return RingContext(field, names, order)


# --------------------------------------------------------------------------
# polynomials


class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps packed monomial -> coefficient."""

    __slots__ = ("ctx", "terms", "_hash")

    def __init__(self, ctx: RingContext, terms: dict):
        self.ctx = ctx
        self.terms = terms
        self._hash = None

    # --- helpers
    def _check(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ContextMismatch("polynomials from different rings")
            return other
        if isinstance(other, (Residue,) + _SCALAR_TYPES):
            return self.ctx.constant(other)
        return NotImplemented

    # --- predicates
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ctx == other.ctx and self.terms == other.terms
        o = self._check(other)
        if o is NotImplemented:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # --- arithmetic
    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = dict(a)
        p = self.ctx.field.char
        for m, c in b.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = (v + c) % p if p else v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.field.char
        if p:
            return Polynomial(self.ctx, {m: p - c for m, c in self.terms.items()})
        return Polynomial(self.ctx, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c) -> "Polynomial":
        c = self.ctx.field.convert(c)
        if not c:
            return self.ctx.zero()
        p = self.ctx.field.char
        if p:
            return Polynomial(self.ctx, {m: v * c % p for m, v in self.terms.items()})
        return Polynomial(self.ctx, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self.terms, other.terms
        if not a or not b:
            return self.ctx.zero()
        if len(a) < len(b):
            a, b = b, a
        p = self.ctx.field.char
        guards = self.ctx._guards
        out: dict[int, object] = {}
        get = out.get
        bi = list(b.items())
        for ma, ca in a.items():
            for mb, cb in bi:
                m = ma + mb
                v = get(m)
                out[m] = ca * cb if v is None else v + ca * cb
        if any(m & guards for m in out):
            raise ExponentOverflow("exponent overflow in product")
        if p:
            return Polynomial(self.ctx, {m: v % p for m, v in out.items() if v % p})
        return Polynomial(self.ctx, {m: v for m, v in out.items() if v})

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = self.ctx.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # --- inspection
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        shift = self.ctx._deg_shift
        return max(m >> shift for m in self.terms)

    def variables(self) -> set[int]:
        acc = 0
        for m in self.terms:
            acc |= m
        return {i for i, e in enumerate(self.ctx.unpack(acc)) if e}

    def sorted_packed(self, order=None) -> list[tuple[int, object]]:
        """``(packed monomial, native coeff)`` pairs, descending under ``order``."""
        key = self.ctx.sort_key(order)
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def term_list(self, order=None) -> list[tuple[object, Monomial]]:
        """``(scalar, Monomial)`` pairs strictly descending under ``order``."""
        sc = self.ctx.field.scalar
        return [(sc(c), self.ctx.monomial(m)) for m, c in self.sorted_packed(order)]

    def leading_term(self, order=None) -> tuple[object, Monomial]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = self.ctx.sort_key(order)
        m = max(self.terms, key=key)
        return self.ctx.field.scalar(self.terms[m]), self.ctx.monomial(m)

    def leading_packed(self, order=None) -> int:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        return max(self.terms, key=self.ctx.sort_key(order))

    def coefficient(self, monomial) -> object:
        if isinstance(monomial, Monomial):
            packed = self.ctx.pack(monomial.dense(self.ctx.nvars))
        else:
            packed = self.ctx.pack(tuple(monomial))
        return self.ctx.field.scalar(self.terms.get(packed, self.ctx.field.zero))

    def monic(self, order=None) -> "Polynomial":
        if not self.terms:
            return self
        lc = self.terms[self.leading_packed(order)]
        return self.scale(self.ctx.field.scalar(self.ctx.field.inv(lc)))

    def primitive(self) -> "Polynomial":
        """Over QQ: divide by the content (gcd of numerators / lcm of
        denominators), keeping the sign.  Over GF(p): identity."""
        if self.ctx.field.char or not self.terms:
            return self
        from math import gcd, lcm
        nums = [int(c.numerator) for c in self.terms.values()]
        dens = [int(c.denominator) for c in self.terms.values()]
        g = functools.reduce(gcd, nums)
        l = functools.reduce(lcm, dens)
        return self.scale(Fraction(l, g))

    def to_field(self, ctx: RingContext) -> "Polynomial":
        """Map coefficients into ``ctx`` (same variable names).  QQ -> GF(p)
        raises ``ZeroDivisionError`` when a denominator vanishes mod p."""
        if ctx.names != self.ctx.names:
            raise ContextMismatch("variable registries differ")
        src, dst = self.ctx.field, ctx.field
        if src == dst:
            return Polynomial(ctx, dict(self.terms))
        out = {}
        for m, c in self.terms.items():
            v = dst.convert(src.scalar(c))
            if v:
                out[m] = v
        return Polynomial(ctx, out)

    def rename(self, ctx: RingContext, mapping: Sequence[int] | None = None) -> "Polynomial":
        """Move into another context by variable name (or explicit index map)."""
        if mapping is None:
            mapping = [ctx.index(nm) for nm in self.ctx.names]
        out = {}
        for m, c in self.terms.items():
            exps = self.ctx.unpack(m)
            new = [0] * ctx.nvars
            for i, e in enumerate(exps):
                if e:
                    new[mapping[i]] += e
            out[ctx.pack(new)] = ctx.field.convert(self.ctx.field.scalar(c))
        return Polynomial(ctx, out)

    def substitute(self, values: Mapping[int, "Polynomial"]) -> "Polynomial":
        """Replace variables (by index) with polynomials of the same ring."""
        if not values:
            return self
        ctx = self.ctx
        result = ctx.zero()
        cache: dict[tuple[int, int], Polynomial] = {}
        for m, c in self.terms.items():
            exps = list(ctx.unpack(m))
            factor = Polynomial(ctx, {0: c})
            for i, v in values.items():
                e = exps[i]
                if e:
                    exps[i] = 0
                    pw = cache.get((i, e))
                    if pw is None:
                        pw = cache[(i, e)] = v ** e
                    factor = factor * pw
            result = result + factor * Polynomial(ctx, {ctx.pack(exps): ctx.field.one})
        return result

    # --- evaluation
    def evaluate(self, assignment):
        """Substitute values for variables.

        ``assignment`` maps variable names or indices to elements of a
        commutative ring containing the coefficient field (scalars, tower
        residues, ...), or is a sequence indexed by variable.
        """
        ctx = self.ctx
        if isinstance(assignment, Mapping):
            vals = {}
            for k, v in assignment.items():
                vals[ctx.index(k) if isinstance(k, str) else int(k)] = v
        else:
            vals = dict(enumerate(assignment))
        needed = self.variables()
        missing = [ctx.names[i] for i in sorted(needed) if i not in vals]
        if missing:
            raise KeyError(f"unassigned variable(s): {', '.join(missing)}")
        sc = ctx.field.scalar
        powers: dict[tuple[int, int], object] = {}
        total = None
        for m, c in self.terms.items():
            term = sc(c)
            exps = ctx.unpack(m)
            for i, e in enumerate(exps):
                if e:
                    pw = powers.get((i, e))
                    if pw is None:
                        pw = powers[(i, e)] = vals[i] ** e
                    term = term * pw
            total = term if total is None else total + term
        if total is None:
            return sc(ctx.field.zero)
        return total

    # --- printing
    def __str__(self):
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({format_polynomial(self)!r})"


def format_scalar(c) -> str:
    if isinstance(c, Residue):
        return str(c.value)
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"
    return str(c)


def format_polynomial(f: Polynomial, order=None) -> str:
    """Render in the expression grammar (``*``, ``^``, ``a/b`` literals)."""
    if not f.terms:
        return "0"
    ctx = f.ctx
    field = ctx.field
    p = field.char
    parts = []
    for m, c in f.sorted_packed(order):
        if p:
            neg = False
            mag = Fraction(c)
        else:
            q = field.scalar(c)
            neg = q < 0
            mag = -q if neg else q
        exps = ctx.unpack(m)
        factors = []
        for i, e in enumerate(exps):
            if e == 1:
                factors.append(ctx.names[i])
            elif e:
                factors.append(f"{ctx.names[i]}^{e}")
        if not factors:
            body = format_scalar(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = format_scalar(mag) + "*" + "*".join(factors)
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


def poly_add(f: Polynomial, g: Polynomial) -> Polynomial:
    return f + g


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    return f * g


def leading_term(f: Polynomial, order=None) -> tuple[object, Monomial]:
    return f.leading_term(order)


def evaluate(f: Polynomial, assignment):
    return f.evaluate(assignment)
