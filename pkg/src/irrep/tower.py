"""Towers of simple extensions with dynamic evaluation.

A tower over ``k`` is a sequence of levels ``t_i`` with monic squarefree
defining polynomials ``m_i(t_i)`` whose coefficients live in the previous
level.  The levels need not be irreducible, so the tower is a product of
fields rather than a field.  Arithmetic is exact; when an inversion meets a
nonzero zero divisor ``a`` at level ``i``, :class:`SplitRequired` is raised
carrying a proper factor of ``m_i`` (from ``gcd(a, m_i)``).  Callers replace
the tower by :meth:`ExtensionTower.split` and project their elements with
:meth:`ExtensionTower.project`, which amounts to following one branch.

Raw element representation at height ``h``: a base-field native scalar for
``h == 0``, else a tuple of ``deg m_h`` raw elements of height ``h - 1``
(coefficients of ``1, t_h, t_h^2, ...``).
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Sequence

from .polyring import QQ, GF, Residue, format_scalar, is_prime


class SplitRequired(ArithmeticError):
    """Inversion hit a zero divisor; ``factor`` (monic, raw coefficients one
    level down) is the proper factor of level ``level``'s polynomial to keep."""

    def __init__(self, level: int, factor: tuple):
        super().__init__(f"zero divisor at tower level {level}")
        self.level = level
        self.factor = factor


class ExtensionTower:
    """Immutable tower; ``levels`` is a tuple of ``(name, modulus)`` where
    ``modulus`` is the raw coefficient tuple (low degree first, monic)."""

    def __init__(self, field=QQ, levels: Sequence = ()):
        self.field = field
        self.levels = tuple((nm, tuple(m)) for nm, m in levels)
        self.depth = len(self.levels)
        self._one_cache: dict[int, object] = {}

    # ------------------------------------------------------------ identity
    def __eq__(self, other):
        return (isinstance(other, ExtensionTower) and self.field == other.field
                and self.levels == other.levels)

    def __hash__(self):
        return hash((self.field, self.levels))

    def __repr__(self):
        return f"ExtensionTower({self.field!r}, {[nm for nm, _ in self.levels]})"

    def names(self) -> list[str]:
        return [nm for nm, _ in self.levels]

    def degrees(self) -> list[int]:
        return [len(m) - 1 for _, m in self.levels]

    def is_prefix_of(self, other: "ExtensionTower") -> bool:
        return (self.field == other.field and self.depth <= other.depth
                and other.levels[:self.depth] == self.levels)

    # ------------------------------------------------------------ raw ops
    def _p(self):
        return self.field.char

    def rzero(self, h: int):
        if h == 0:
            return self.field.zero
        d = len(self.levels[h - 1][1]) - 1
        z = self.rzero(h - 1)
        return (z,) * d

    def rone(self, h: int):
        if h == 0:
            return self.field.one
        r = self._one_cache.get(h)
        if r is None:
            d = len(self.levels[h - 1][1]) - 1
            z = self.rzero(h - 1)
            r = (self.rone(h - 1),) + (z,) * (d - 1)
            self._one_cache[h] = r
        return r

    def rembed(self, x, h: int, from_h: int = 0):
        """Raise a raw element of height ``from_h`` to height ``h``."""
        while from_h < h:
            d = len(self.levels[from_h][1]) - 1
            x = (x,) + (self.rzero(from_h),) * (d - 1)
            from_h += 1
        return x

    def riszero(self, a, h: int) -> bool:
        if h == 0:
            return not a
        return all(self.riszero(c, h - 1) for c in a)

    def radd(self, a, b, h: int):
        if h == 0:
            p = self._p()
            return (a + b) % p if p else a + b
        return tuple(self.radd(x, y, h - 1) for x, y in zip(a, b))

    def rneg(self, a, h: int):
        if h == 0:
            p = self._p()
            return (-a) % p if p else -a
        return tuple(self.rneg(x, h - 1) for x in a)

    def rsub(self, a, b, h: int):
        if h == 0:
            p = self._p()
            return (a - b) % p if p else a - b
        return tuple(self.rsub(x, y, h - 1) for x, y in zip(a, b))

    def rmul(self, a, b, h: int):
        if h == 0:
            p = self._p()
            return a * b % p if p else a * b
        prod = self._pmul(list(a), list(b), h - 1)
        return self._reduce_mod(prod, h)

    def _reduce_mod(self, coeffs: list, h: int):
        """Reduce a raw polynomial (height ``h-1`` coefficients) mod ``m_h``."""
        m = self.levels[h - 1][1]
        d = len(m) - 1
        c = list(coeffs)
        g = h - 1
        for k in range(len(c) - 1, d - 1, -1):
            lead = c[k]
            if self.riszero(lead, g):
                continue
            for i in range(d):
                c[k - d + i] = self.rsub(c[k - d + i], self.rmul(lead, m[i], g), g)
            c[k] = self.rzero(g)
        c = c[:d] + [self.rzero(g)] * (d - len(c))
        return tuple(c)

    def _pmul(self, a: list, b: list, g: int) -> list:
        out = [self.rzero(g)] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if self.riszero(x, g):
                continue
            for j, y in enumerate(b):
                if self.riszero(y, g):
                    continue
                out[i + j] = self.radd(out[i + j], self.rmul(x, y, g), g)
        return out

    def rscale(self, c, a, h: int):
        """Multiply a raw height-``h`` element by a base-field native."""
        if h == 0:
            p = self._p()
            return c * a % p if p else c * a
        return tuple(self.rscale(c, x, h - 1) for x in a)

    def rinv(self, a, h: int):
        """Inverse of ``a`` at height ``h``; raises ``ZeroDivisionError`` on 0
        and :class:`SplitRequired` on a nonzero zero divisor."""
        if h == 0:
            if not a:
                raise ZeroDivisionError("inverse of zero")
            return self.field.inv(a)
        if self.riszero(a, h):
            raise ZeroDivisionError("inverse of zero")
        g = h - 1
        m = list(self.levels[h - 1][1])
        # extended Euclid on (a, m) over height g
        r0, r1 = m, self._trim(list(a), g)
        s0, s1 = [], [self.rone(g)]
        while len(r1) > 1:
            q, r = self._pdivmod(r0, r1, g)
            r0, r1 = r1, r
            s0, s1 = s1, self._psub(s0, self._pmul_trim(q, s1, g), g)
        if not r1:
            # r0 = gcd is a proper factor
            gcd = self._monic(r0, g)
            cof, rem = self._pdivmod(m, gcd, g)
            assert not rem
            cof = self._monic(cof, g)
            keep = gcd if len(gcd) <= len(cof) else cof
            raise SplitRequired(h - 1, tuple(keep))
        # r1 is a nonzero constant (may itself be a zero divisor one level down)
        c = self.rinv(r1[0], g)
        inv = [self.rmul(c, x, g) for x in s1]
        return self._reduce_mod(inv, h)

    # polynomials over height g, lists low degree first, trimmed
    def _trim(self, a: list, g: int) -> list:
        while a and self.riszero(a[-1], g):
            a.pop()
        return a

    def _psub(self, a, b, g):
        n = max(len(a), len(b))
        z = self.rzero(g)
        out = [self.rsub(a[i] if i < len(a) else z, b[i] if i < len(b) else z, g) for i in range(n)]
        return self._trim(out, g)

    def _pmul_trim(self, a, b, g):
        if not a or not b:
            return []
        return self._trim(self._pmul(a, b, g), g)

    def _pdivmod(self, a, b, g):
        """Division by ``b`` (trimmed, nonempty); inverts the leading coefficient."""
        a = self._trim(list(a), g)
        inv = self.rinv(b[-1], g)
        db = len(b) - 1
        q = [self.rzero(g)] * max(len(a) - db, 0)
        while len(a) - 1 >= db and a:
            k = len(a) - 1 - db
            c = self.rmul(a[-1], inv, g)
            q[k] = c
            for i in range(db + 1):
                a[k + i] = self.rsub(a[k + i], self.rmul(c, b[i], g), g)
            a = self._trim(a, g)
        return self._trim(q, g), a

    def _monic(self, a, g):
        inv = self.rinv(a[-1], g)
        return [self.rmul(inv, x, g) for x in a]

    # ------------------------------------------------------------ elements
    def element(self, raw) -> "TowerElement":
        return TowerElement(self, raw)

    def scalar(self, c) -> "TowerElement":
        """Embed a base-field scalar (int, Fraction, Residue, native)."""
        return TowerElement(self, self.rembed(self.field.convert(c), self.depth))

    def zero(self) -> "TowerElement":
        return TowerElement(self, self.rzero(self.depth))

    def one(self) -> "TowerElement":
        return TowerElement(self, self.rone(self.depth))

    def gen(self, i: int) -> "TowerElement":
        """The level variable ``t_i`` (0-based level index)."""
        h = i + 1
        d = len(self.levels[i][1]) - 1
        z = self.rzero(i)
        raw = self._reduce_mod([z, self.rone(i)], h) if d == 1 else \
            (z, self.rone(i)) + (z,) * (d - 2)
        return TowerElement(self, self.rembed(raw, self.depth, h))

    def gens(self) -> list["TowerElement"]:
        return [self.gen(i) for i in range(self.depth)]

    # ------------------------------------------------------------ structure
    def add_level(self, name: str, poly: Sequence["TowerElement"], check: bool = True) -> "ExtensionTower":
        """New tower with a level ``name`` defined by ``poly`` (coefficients low
        degree first, elements of this tower).  Made monic; must be squarefree."""
        if name in self.names():
            raise ValueError(f"duplicate tower variable {name!r}")
        coeffs = [self.coerce(c) for c in poly]
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        if len(coeffs) < 2:
            raise ValueError("level polynomial must have degree >= 1")
        lead_inv = coeffs[-1].inverse()
        coeffs = [c * lead_inv for c in coeffs]
        if check and not is_squarefree(coeffs):
            raise ValueError(f"level polynomial for {name!r} is not squarefree")
        raw = tuple(c.raw for c in coeffs)
        return ExtensionTower(self.field, self.levels + ((name, raw),))

    def split(self, err: SplitRequired) -> "ExtensionTower":
        """Follow the branch ``err.factor`` of level ``err.level``."""
        lv = err.level
        levels = list(self.levels)
        levels[lv] = (levels[lv][0], tuple(err.factor))
        new = ExtensionTower(self.field, levels[:lv + 1])
        for k in range(lv + 1, self.depth):
            nm, m = self.levels[k]
            pm = tuple(new._project_raw(self, c, k) for c in m)
            new = ExtensionTower(self.field, list(new.levels) + [(nm, pm)])
        return new

    def _project_raw(self, old: "ExtensionTower", x, h: int):
        """Map a raw height-``h`` element of ``old`` into this tower."""
        if h == 0:
            return x
        coeffs = [self._project_raw(old, c, h - 1) for c in x]
        return self._reduce_mod(coeffs, h)

    def project(self, e: "TowerElement") -> "TowerElement":
        """Image of an element of an ancestor tower (before splits/extensions)."""
        if e.tower is self:
            return e
        old = e.tower
        if old.depth > self.depth:
            raise ValueError("cannot project onto a shallower tower")
        raw = self._project_raw(old, e.raw, old.depth) if old.depth else e.raw
        return TowerElement(self, self.rembed(raw, self.depth, old.depth))

    def coerce(self, x) -> "TowerElement":
        if isinstance(x, TowerElement):
            if x.tower is self or x.tower == self:
                return x if x.tower is self else TowerElement(self, x.raw)
            if x.tower.is_prefix_of(self):
                return TowerElement(self, self.rembed(x.raw, self.depth, x.tower.depth))
            raise ValueError("elements from incompatible towers")
        return self.scalar(x)

    # ------------------------------------------------------------ printing
    def expand(self, raw, h: int | None = None) -> dict:
        """``{exponent tuple over levels: base scalar}`` for a raw element."""
        if h is None:
            h = self.depth
        if h == 0:
            return {(): raw} if raw else {}
        out = {}
        for i, c in enumerate(raw):
            for exps, v in self.expand(c, h - 1).items():
                out[exps + (i,)] = v
        return out

    def format_raw(self, raw) -> str:
        terms = self.expand(raw)
        if not terms:
            return "0"
        names = self.names()
        parts = []
        for exps in sorted(terms, key=lambda e: (sum(e), e), reverse=True):
            c = self.field.scalar(terms[exps])
            if self.field.char:
                neg, mag = False, c
            else:
                neg = c < 0
                mag = -c if neg else c
            factors = [names[i] if e == 1 else f"{names[i]}^{e}"
                       for i, e in enumerate(exps) if e]
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

    def level_polynomial_text(self, i: int) -> str:
        """Level ``i``'s defining polynomial written with ``t`` for its variable."""
        nm, m = self.levels[i]
        sub = ExtensionTower(self.field, self.levels[:i])
        parts = []
        for k in range(len(m) - 1, -1, -1):
            s = sub.format_raw(m[k])
            if s == "0":
                continue
            mono = "" if k == 0 else ("t" if k == 1 else f"t^{k}")
            if not mono:
                parts.append(f"({s})" if " " in s else s)
            elif s == "1":
                parts.append(mono)
            else:
                parts.append(f"({s})*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


class TowerElement:
    """An element of an :class:`ExtensionTower` (a commutative ring)."""

    __slots__ = ("tower", "raw")

    def __init__(self, tower: ExtensionTower, raw):
        self.tower = tower
        self.raw = raw

    def _other(self, other):
        if isinstance(other, TowerElement):
            t = self.tower
            if other.tower is t:
                return self, other
            if other.tower.is_prefix_of(t):
                return self, t.coerce(other)
            if t.is_prefix_of(other.tower):
                return other.tower.coerce(self), other
            raise ValueError("elements from incompatible towers")
        if isinstance(other, (int, Fraction, Residue)) or type(other).__name__ == "mpq":
            return self, self.tower.scalar(other)
        return None, None

    def __add__(self, other):
        a, b = self._other(other)
        if a is None:
            return NotImplemented
        t = a.tower
        return TowerElement(t, t.radd(a.raw, b.raw, t.depth))

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._other(other)
        if a is None:
            return NotImplemented
        t = a.tower
        return TowerElement(t, t.rsub(a.raw, b.raw, t.depth))

    def __rsub__(self, other):
        a, b = self._other(other)
        if a is None:
            return NotImplemented
        t = a.tower
        return TowerElement(t, t.rsub(b.raw, a.raw, t.depth))

    def __neg__(self):
        t = self.tower
        return TowerElement(t, t.rneg(self.raw, t.depth))

    def __mul__(self, other):
        a, b = self._other(other)
        if a is None:
            return NotImplemented
        t = a.tower
        if not isinstance(other, TowerElement):
            return TowerElement(t, t.rscale(t.field.convert(other), a.raw, t.depth))
        return TowerElement(t, t.rmul(a.raw, b.raw, t.depth))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = self.tower.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self) -> "TowerElement":
        t = self.tower
        return TowerElement(t, t.rinv(self.raw, t.depth))

    def __truediv__(self, other):
        a, b = self._other(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        a, b = self._other(other)
        if a is None:
            return NotImplemented
        return b * a.inverse()

    def __bool__(self):
        return not self.tower.riszero(self.raw, self.tower.depth)

    def __eq__(self, other):
        a, b = self._other(other)
        if a is None:
            return NotImplemented
        return not (a - b)

    def __hash__(self):
        return hash(self.raw)

    def is_scalar(self) -> bool:
        terms = self.tower.expand(self.raw)
        return all(not any(e) for e in terms)

    def scalar_value(self):
        """Public base-field scalar for an element with no level variables."""
        terms = self.tower.expand(self.raw)
        if any(any(e) for e in terms):
            raise ValueError("element involves tower variables")
        v = next(iter(terms.values()), self.tower.field.zero)
        return self.tower.field.scalar(v)

    def __str__(self):
        return self.tower.format_raw(self.raw)

    def __repr__(self):
        return f"TowerElement({self})"


# --------------------------------------------------------------------------
# univariate polynomials over a tower: lists of TowerElement, low degree first


def utrim(a: list) -> list:
    a = list(a)
    while a and not a[-1]:
        a.pop()
    return a


def udivmod(a: list, b: list) -> tuple[list, list]:
    a, b = utrim(a), utrim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv = b[-1].inverse()
    db = len(b) - 1
    zero = b[-1] - b[-1]
    q = [zero] * max(len(a) - db, 0)
    while a and len(a) - 1 >= db:
        k = len(a) - 1 - db
        c = a[-1] * inv
        q[k] = c
        for i in range(db + 1):
            a[k + i] = a[k + i] - c * b[i]
        a = utrim(a)
    return utrim(q), a


def umonic(a: list) -> list:
    a = utrim(a)
    inv = a[-1].inverse()
    return [c * inv for c in a]


def ugcd(a: list, b: list) -> list:
    """Monic gcd (may raise :class:`SplitRequired` on a zero-divisor pivot)."""
    a, b = utrim(a), utrim(b)
    while b:
        _, r = udivmod(a, b)
        a, b = b, r
    if not a:
        return a
    return umonic(a)


def uderiv(a: list) -> list:
    return utrim([a[i] * i for i in range(1, len(a))])


def squarefree_part(a: list) -> list:
    a = umonic(a)
    d = uderiv(a)
    if not d:
        if len(a) > 1:
            raise NotImplementedError("inseparable polynomial (p-th power)")
        return a
    g = ugcd(a, d)
    if len(g) <= 1:
        return a
    q, r = udivmod(a, g)
    return umonic(q)


def is_squarefree(a: list) -> bool:
    a = utrim(a)
    d = uderiv(a)
    if not d:
        return len(a) <= 1
    return len(ugcd(a, d)) <= 1


def ueval(a: list, x):
    acc = None
    for c in reversed(a):
        acc = c if acc is None else acc * x + c
    return acc


# --------------------------------------------------------------------------
# roots in the base field


def _small_factor(n: int, bound: int = 10 ** 6) -> dict[int, int] | None:
    """Factor ``n > 0`` by trial division; ``None`` if a cofactor stays unknown."""
    out: dict[int, int] = {}
    d = 2
    while d * d <= n and d <= bound:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        if d * d <= n and not is_prime(n):
            return None
        out[n] = out.get(n, 0) + 1
    return out


def _divisors(n: int, cap: int = 200000) -> list[int] | None:
    fac = _small_factor(n)
    if fac is None:
        return None
    divs = [1]
    for q, e in fac.items():
        divs = [d * q ** k for d in divs for k in range(e + 1)]
        if len(divs) > cap:
            return None
    return sorted(divs)


def rational_roots(coeffs: Sequence[Fraction]) -> list[Fraction]:
    """Rational roots of a polynomial given low degree first (may miss roots
    only when a coefficient is too hard to factor)."""
    c = [Fraction(x) for x in coeffs]
    while c and c[-1] == 0:
        c.pop()
    if len(c) <= 1:
        return []
    roots = set()
    while c[0] == 0:
        roots.add(Fraction(0))
        c = c[1:]
        if len(c) <= 1:
            return sorted(roots, key=_root_key)
    den = 1
    for x in c:
        den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in c]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    ints = [x // g for x in ints]
    if len(ints) == 2:
        roots.add(Fraction(-ints[0], ints[1]))
        return sorted(roots, key=_root_key)
    num_divs = _divisors(abs(ints[0]))
    den_divs = _divisors(abs(ints[-1]))
    if num_divs is None or den_divs is None:
        return sorted(roots, key=_root_key)
    for q in den_divs:
        for p in num_divs:
            if math.gcd(p, q) != 1:
                continue
            for s in (p, -p):
                # Horner on q^deg * f(s/q) in integers
                acc = 0
                qp = 1
                for a in reversed(ints):
                    acc = acc * s + a * qp
                    qp *= q
                if acc == 0:
                    roots.add(Fraction(s, q))
    return sorted(roots, key=_root_key)


def _root_key(r: Fraction):
    return (abs(r.numerator) + r.denominator, r.denominator, r < 0, abs(r))


def _pmod_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod_divmod(a, b, p):
    a = list(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    q = [0] * max(len(a) - db, 0)
    while len(a) - 1 >= db and a:
        k = len(a) - 1 - db
        c = a[-1] * inv % p
        q[k] = c
        for i in range(db + 1):
            a[k + i] = (a[k + i] - c * b[i]) % p
        _pmod_trim(a)
    return _pmod_trim(q), a


def _pmod_gcd(a, b, p):
    a, b = _pmod_trim(list(a)), _pmod_trim(list(b))
    while b:
        _, r = _pmod_divmod(a, b, p)
        a, b = b, r
    if a:
        inv = pow(a[-1], -1, p)
        a = [x * inv % p for x in a]
    return a


def _pmod_mulmod(a, b, m, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod_divmod(_pmod_trim(out), m, p)[1]


def _pmod_powmod(base, e, m, p):
    result = [1]
    base = _pmod_divmod(base, m, p)[1]
    while e:
        if e & 1:
            result = _pmod_mulmod(result, base, m, p)
        e >>= 1
        if e:
            base = _pmod_mulmod(base, base, m, p)
    return result


def gfp_roots(coeffs: Sequence[int], p: int, seed: int = 0) -> list[int]:
    """Roots in GF(p) of a polynomial given low degree first.

    Takes ``gcd(f, t^p - t)`` and splits it into linear factors with the
    Cantor-Zassenhaus equal-degree method (odd ``p``).
    """
    f = _pmod_trim([c % p for c in coeffs])
    if len(f) <= 1:
        return []
    roots = set()
    if f[0] == 0:
        roots.add(0)
    if p == 2:
        for x in (0, 1):
            acc = 0
            for c in reversed(f):
                acc = (acc * x + c) % p
            if acc == 0:
                roots.add(x)
        return sorted(roots)
    tp = _pmod_powmod([0, 1], p, f, p)
    g = _pmod_gcd(f, _pmod_trim(_sub_poly(tp, [0, 1], p)), p)
    rng = random.Random(seed)
    stack = [g] if len(g) > 1 else []
    while stack:
        h = stack.pop()
        if len(h) == 2:
            roots.add((-h[0]) * pow(h[1], -1, p) % p)
            continue
        while True:
            a = rng.randrange(p)
            w = _pmod_powmod([a, 1], (p - 1) // 2, h, p)
            d = _pmod_gcd(h, _pmod_trim(_sub_poly(w, [1], p)), p)
            if 1 < len(d) < len(h):
                stack.append(d)
                stack.append(_pmod_divmod(h, d, p)[0])
                break
    return sorted(roots)


def _sub_poly(a, b, p):
    n = max(len(a), len(b))
    return [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)]


def base_roots(coeffs: Sequence, field) -> list:
    """Roots in the base field (public scalars), preferred ones first."""
    if field.char:
        vals = [field.convert(c) for c in coeffs]
        return [Residue(r, field.char) for r in gfp_roots(vals, field.char)]
    return rational_roots([field.scalar(field.convert(c)) for c in coeffs])
