"""The free associative algebra: words, noncommutative polynomials, the
standard polynomial, matrix evaluation and finitely presented algebras."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import permutations
from typing import Sequence

from . import matrices as mx
from .polyring import QQ, format_scalar, parse_field

Word = tuple  # tuple of generator indices; () is the identity word


def word_key(w: Word):
    """Graded lex: shorter words first, then lexicographic by index."""
    return (len(w), w)


class NcPolynomial:
    """Element of k{X_1..X_s}: a map from words to nonzero field scalars."""

    __slots__ = ("generators", "field", "terms")

    def __init__(self, generators: Sequence[str], field=QQ, terms: dict | None = None):
        self.generators = tuple(generators)
        self.field = field
        self.terms = {} if terms is None else terms

    # --- construction
    @classmethod
    def word(cls, generators, w: Word, coeff=1, field=QQ) -> "NcPolynomial":
        c = field.convert(coeff)
        s = len(generators)
        if any(not 0 <= i < s for i in w):
            raise ValueError("word uses an undeclared generator")
        return cls(generators, field, {tuple(w): c} if c else {})

    @classmethod
    def constant(cls, generators, c, field=QQ) -> "NcPolynomial":
        return cls.word(generators, (), c, field)

    @classmethod
    def gen(cls, generators, name, field=QQ) -> "NcPolynomial":
        idx = generators.index(name) if isinstance(name, str) else name
        return cls.word(generators, (idx,), 1, field)

    def _check(self, other) -> "NcPolynomial":
        if isinstance(other, NcPolynomial):
            if other.generators != self.generators:
                raise ValueError("generator sets differ")
            if other.field != self.field:
                raise ValueError("coefficient fields differ")
            return other
        return NcPolynomial.constant(self.generators, other, self.field)

    def _norm(self, v):
        p = self.field.char
        return v % p if p else v

    # --- arithmetic
    def __add__(self, other):
        other = self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = self._norm(out.get(w, self.field.zero) + c)
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return NcPolynomial(self.generators, self.field, out)

    __radd__ = __add__

    def __neg__(self):
        return NcPolynomial(self.generators, self.field,
                            {w: self._norm(-c) for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) + (-self)

    def __mul__(self, other):
        other = self._check(other)
        out: dict = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, self.field.zero) + c1 * c2
        return NcPolynomial(self.generators, self.field,
                            {w: self._norm(c) for w, c in out.items() if self._norm(c)})

    def __rmul__(self, other):
        return self._check(other) * self

    def __pow__(self, e: int):
        if not isinstance(e, int) or e < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = NcPolynomial.constant(self.generators, 1, self.field)
        for _ in range(e):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, NcPolynomial):
            return NotImplemented
        return (self.generators == other.generators and self.field == other.field
                and self.terms == other.terms)

    def __hash__(self):
        return hash((self.generators, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def sorted_terms(self) -> list[tuple[Word, object]]:
        return sorted(self.terms.items(), key=lambda t: word_key(t[0]))

    def letters(self) -> set[int]:
        return {i for w in self.terms for i in w}

    def to_field(self, field) -> "NcPolynomial":
        out = {}
        for w, c in self.terms.items():
            v = field.convert(self.field.scalar(c))
            if v:
                out[w] = v
        return NcPolynomial(self.generators, field, out)

    def __str__(self):
        return format_nc(self)

    def __repr__(self):
        return f"NcPolynomial({format_nc(self)!r})"


def format_word(w: Word, names: Sequence[str]) -> str:
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        run = j - i
        parts.append(names[w[i]] if run == 1 else f"{names[w[i]]}^{run}")
        i = j
    return "*".join(parts)


def format_nc(f: NcPolynomial) -> str:
    """Render in the expression grammar, graded-lex word order."""
    if not f.terms:
        return "0"
    out = []
    for w, c in f.sorted_terms():
        q = f.field.scalar(c)
        if f.field.char:
            neg, mag = False, q
        else:
            neg = q < 0
            mag = -q if neg else q
        body = format_word(w, f.generators)
        if not body:
            body = format_scalar(mag)
        elif mag != 1:
            body = format_scalar(mag) + "*" + body
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append(("- " if neg else "+ ") + body)
    return " ".join(out)


def nc_add(f: NcPolynomial, g: NcPolynomial) -> NcPolynomial:
    return f + g


def nc_mul(f: NcPolynomial, g: NcPolynomial) -> NcPolynomial:
    return f * g


# --------------------------------------------------------------------------
# standard polynomial


def permutation_sign(perm: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


MAX_EXPANDED = 8


def standard_polynomial(m: int, field=QQ, names: Sequence[str] | None = None) -> NcPolynomial:
    """``sum_sigma sgn(sigma) Y_sigma(1) ... Y_sigma(m)`` as an explicit polynomial
    in slots ``Y1..Ym`` (only for ``m <= 8``; use :func:`standard_eval` below)."""
    if m < 1:
        raise ValueError("standard polynomial needs m >= 1")
    if m > MAX_EXPANDED:
        raise ValueError(f"refusing to expand s_{m} ({math.factorial(m)} words)")
    names = tuple(names) if names is not None else tuple(f"Y{i}" for i in range(1, m + 1))
    if len(names) != m:
        raise ValueError("need exactly m slot names")
    terms = {}
    for perm in permutations(range(m)):
        terms[perm] = field.convert(permutation_sign(perm))
    return NcPolynomial(names, field, terms)


def standard_eval(mats: Sequence[mx.Matrix], modulus: int | None = None,
                  reduce=None) -> mx.Matrix:
    """Evaluate ``s_k`` at ``k`` matrices without expanding it.

    Dynamic programming over subsets: ``F(S)`` is the signed sum of all
    products of the matrices in ``S`` (each used once, any order), with the
    sign of the partial permutation.  Appending ``A_j`` to a product over
    ``S`` flips the sign once per index in ``S`` larger than ``j``.
    ``reduce`` (for instance a normal form) is applied to every entry of
    every partial result.
    """
    k = len(mats)
    if k == 0:
        raise ValueError("standard polynomial needs m >= 1")
    mx.same_size(mats)
    if k == 1:
        return [row[:] for row in mats[0]]
    table: dict[int, mx.Matrix] = {}
    for j in range(k):
        table[1 << j] = mats[j]
    for size in range(1, k):
        nxt: dict[int, mx.Matrix] = {}
        for s, fs in table.items():
            for j in range(k):
                bit = 1 << j
                if s & bit:
                    continue
                prod = mx.mat_mul(fs, mats[j], modulus)
                if bin(s >> (j + 1)).count("1") & 1:
                    prod = mx.mat_neg(prod, modulus)
                prev = nxt.get(s | bit)
                nxt[s | bit] = prod if prev is None else mx.mat_add(prev, prod, modulus)
        if reduce is not None:
            nxt = {s: [[reduce(x) for x in row] for row in m] for s, m in nxt.items()}
        table = nxt
    return table[(1 << k) - 1]


# --------------------------------------------------------------------------
# evaluation at matrices


def evaluate_nc(f: NcPolynomial, mats: Sequence[mx.Matrix], modulus: int | None = None,
                word_cache: dict | None = None) -> mx.Matrix:
    """Substitute matrices for the generator slots (identity for the empty word).

    Entries may live in any commutative ring containing the coefficients;
    with ``modulus`` the entries are ints mod that prime.  Word products are
    shared by prefix through ``word_cache``.
    """
    if len(mats) != len(f.generators):
        raise ValueError(f"need {len(f.generators)} matrices, got {len(mats)}")
    n = mx.same_size(mats)
    sample = mats[0][0][0]
    zero = mx.zero_of(sample)
    one = zero + 1
    cache = {} if word_cache is None else word_cache
    cache.setdefault((), mx.identity(n, zero, one))

    def word_matrix(w):
        m = cache.get(w)
        if m is None:
            m = mx.mat_mul(word_matrix(w[:-1]), mats[w[-1]], modulus)
            cache[w] = m
        return m

    acc = [[zero] * n for _ in range(n)]
    for w, c in f.sorted_terms():
        if modulus:
            if f.field.char != modulus:
                c = _to_mod(f.field.scalar(c), modulus)
            acc = mx.mat_add(acc, mx.mat_scale(c, word_matrix(w), modulus), modulus)
        else:
            acc = mx.mat_add(acc, mx.mat_scale(f.field.scalar(c), word_matrix(w)))
    return acc


def _to_mod(q, p: int) -> int:
    from fractions import Fraction
    q = Fraction(q)
    return q.numerator * pow(q.denominator, -1, p) % p


# --------------------------------------------------------------------------
# presentations


@dataclass
class Presentation:
    """``R = k{X_1..X_s} / <f_1..f_t>`` together with the target dimension.

    ``hints`` holds ``("alternating", (i, j))`` and ``("omit", (i,))`` tuples
    that restrict word formation (see :func:`irrep.genmat.word_set`), and at
    most one ``("triangular", (i,))`` (see :func:`irrep.pipeline.prepare`).
    """

    field: object
    dimension: int
    generators: tuple
    relations: list = field(default_factory=list)
    hints: list = field(default_factory=list)

    def __post_init__(self):
        self.generators = tuple(self.generators)
        if isinstance(self.field, str):
            self.field = parse_field(self.field)
        if not self.generators:
            raise ValueError("a presentation needs at least one generator")
        if len(set(self.generators)) != len(self.generators):
            raise ValueError("duplicate generator name")
        if not isinstance(self.dimension, int) or self.dimension < 1:
            raise ValueError("dimension must be a positive integer")
        for r in self.relations:
            if r.generators != self.generators:
                raise ValueError("relation over a different generator set")
        for kind, idx in self.hints:
            if kind not in ("alternating", "omit", "triangular"):
                raise ValueError(f"unknown hint {kind!r}")
            if any(not 0 <= i < len(self.generators) for i in idx):
                raise ValueError("hint references an unknown generator")
        if sum(1 for kind, _ in self.hints if kind == "triangular") > 1:
            raise ValueError("only one generator may be triangular")

    @property
    def s(self) -> int:
        return len(self.generators)

    def with_field(self, field) -> "Presentation":
        if isinstance(field, str):
            field = parse_field(field)
        return Presentation(field, self.dimension, self.generators,
                            [r.to_field(field) for r in self.relations], list(self.hints))

    def with_dimension(self, n: int) -> "Presentation":
        return Presentation(self.field, n, self.generators, list(self.relations), list(self.hints))

    def to_text(self) -> str:
        """Canonical presentation file."""
        lines = [f"field: {self.field.name}", f"dimension: {self.dimension}",
                 "generators: " + " ".join(self.generators)]
        for r in self.relations:
            lines.append(f"relation: {format_nc(r)}")
        for kind, idx in self.hints:
            lines.append(f"hint: {kind} " + " ".join(self.generators[i] for i in idx))
        return "\n".join(lines) + "\n"


def parse_presentation(text: str) -> Presentation:
    """Parse the line-oriented presentation format (see :mod:`irrep.parser`)."""
    from .parser import parse_presentation as _parse
    return _parse(text)
