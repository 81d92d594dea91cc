"""Generic matrices, the relation ideal, spanning word sets and the candidate
polynomials whose common zeros are the reducible representations.

Candidate deduplication for the trace strategy: for even ``k`` the
polynomial ``tr(Y0 * s_k(Y1..Yk))`` is, up to the factor ``k+1``, the trace
of ``s_{k+1}(Y0..Yk)``, which alternates in all ``k+1`` arguments.  Over the
integers (hence over every field) this gives

    tr(Y_{σ0} * s_k(Y_{σ1}..Y_{σk})) = sgn(σ) * tr(Y0 * s_k(Y1..Yk)),

so every choice ``(m0; m1 < ... < mk)`` drawn from the same ``(k+1)``-set
is the same polynomial up to sign, and choices with ``m0`` among the
``m_i`` vanish.  The stream therefore emits one candidate per set, written
with ``m0`` the smallest index; sets containing the identity word vanish
too (the trace of an even standard polynomial is zero).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Callable, Iterator, Sequence

from . import matrices as mx
from .freealg import NcPolynomial, Presentation, Word, evaluate_nc, format_word, \
    permutation_sign, standard_eval, word_key
from .groebner import EncodedReduction
from .polyring import Polynomial, RingContext, register_ring


# --------------------------------------------------------------------------
# generic matrices


def variable_name(i: int, j: int, l: int) -> str:
    """Canonical 1-based name of entry ``(i, j)`` of generic matrix ``l``."""
    return f"x_{i}_{j}_{l}"


def variable_names(n: int, s: int) -> list[str]:
    return [variable_name(i, j, l) for l in range(1, s + 1)
            for i in range(1, n + 1) for j in range(1, n + 1)]


def generic_ring(field, n: int, s: int, extra: Sequence[str] = (), order="grevlex") -> RingContext:
    return register_ring(field, variable_names(n, s) + list(extra), order)


@dataclass
class GenericMatrix:
    generator: int            # 1-based generator index
    rows: list                # n x n Polynomials

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def n(self) -> int:
        return len(self.rows)


def generic_matrices(ctx: RingContext, n: int, s: int) -> list[GenericMatrix]:
    out = []
    for l in range(1, s + 1):
        rows = []
        for i in range(1, n + 1):
            row = []
            for j in range(1, n + 1):
                nm = variable_name(i, j, l)
                if nm not in ctx:
                    raise KeyError(f"ring has no variable {nm}")
                row.append(ctx.var(nm))
            rows.append(row)
        out.append(GenericMatrix(l, rows))
    return out


# --------------------------------------------------------------------------
# relation ideal


@dataclass
class RelIdeal:
    """Entries of every relation evaluated at the generic matrices.

    ``provenance`` lists ``(relation index, i, j, polynomial or None)`` for
    all ``t * n^2`` entries (0-based); zero entries are recorded with None and
    left out of ``polys``.
    """

    ctx: RingContext
    polys: list
    provenance: list

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    @property
    def dropped(self) -> int:
        return sum(1 for *_, f in self.provenance if f is None)


def evaluate_relations(pres: Presentation, mats: Sequence[mx.Matrix]) -> list[mx.Matrix]:
    cache: dict = {}
    return [evaluate_nc(r, mats, word_cache=cache) for r in pres.relations]


def rel_ideal(pres: Presentation, ctx: RingContext | None = None,
              mats: Sequence[mx.Matrix] | None = None) -> RelIdeal:
    n = pres.dimension
    if ctx is None:
        ctx = generic_ring(pres.field, n, pres.s)
    if mats is None:
        mats = [g.rows for g in generic_matrices(ctx, n, pres.s)]
    polys = []
    prov = []
    seen = set()
    for r, m in enumerate(evaluate_relations(pres, mats)):
        for i in range(n):
            for j in range(n):
                f = m[i][j]
                if f:
                    prov.append((r, i, j, f))
                    if f not in seen:
                        seen.add(f)
                        polys.append(f)
                else:
                    prov.append((r, i, j, None))
    return RelIdeal(ctx, polys, prov)


# --------------------------------------------------------------------------
# word sets


def length_bound(n: int) -> int:
    """Largest word length needed to span the algebra generated by n x n
    matrices: 0 for n = 1, 3 for n = 2, and for n >= 3 the largest integer
    ``m`` below ``n*sqrt(2n^2/(n-1) + 1/4) + n/2 - 2`` (exact integer test)."""
    if n < 1:
        raise ValueError("n must be positive")
    if n == 1:
        return 0
    if n == 2:
        return 3
    # m < n*sqrt(q) + n/2 - 2  with q = 2n^2/(n-1) + 1/4
    # <=> a < n*sqrt(q) where a = m - n/2 + 2; compare 4a^2 (n-1) < n^2 (8n^2 + n - 1)
    def below(m: int) -> bool:
        a2 = 2 * m - n + 4          # 2a
        if a2 < 0:
            return True
        return a2 * a2 * (n - 1) < n * n * (8 * n * n + n - 1)

    m = 0
    while below(m + 1):
        m += 1
    return m


@dataclass
class WordBasisSet:
    words: list               # graded-lex sorted tuples of generator indices
    bound: int                # maximal word length L
    generators: tuple
    pruned_ch: int = 0        # words dropped by Cayley-Hamilton pruning
    pruned_hints: int = 0     # words dropped by hints

    def __len__(self):
        return len(self.words)

    def __iter__(self):
        return iter(self.words)

    def label(self, idx: int) -> str:
        w = self.words[idx]
        return format_word(w, self.generators) or "1"


def _has_run(w: Word, n: int) -> bool:
    run = 1
    for a, b in zip(w, w[1:]):
        run = run + 1 if a == b else 1
        if run >= n:
            return True
    return n == 1 and len(w) > 0


def word_set(pres: Presentation, n: int | None = None, ch_prune: bool = True,
             bound: int | None = None) -> WordBasisSet:
    """All words of length <= L (see :func:`length_bound`), pruned.

    Cayley-Hamilton pruning drops words with a letter repeated ``n`` times in
    a row.  ``hint: omit G`` removes ``G`` from word formation; with one or
    more ``hint: alternating G H`` lines only words alternating between the
    letters of one declared pair are kept.
    """
    n = pres.dimension if n is None else n
    L = length_bound(n) if bound is None else bound
    s = pres.s
    omit = {i for kind, idx in pres.hints if kind == "omit" for i in idx}
    pairs = [idx for kind, idx in pres.hints if kind == "alternating"]
    letters = [i for i in range(s) if i not in omit]
    words: list[Word] = [()]
    pruned_ch = pruned_h = 0
    frontier: list[Word] = [()]
    for _ in range(L):
        nxt = []
        for w in frontier:
            for a in letters:
                nxt.append(w + (a,))
        frontier = nxt
        for w in frontier:
            if pairs and not any(_alternates(w, pr) for pr in pairs):
                pruned_h += 1
                continue
            if ch_prune and n > 1 and _has_run(w, n):
                pruned_ch += 1
                continue
            words.append(w)
    if n == 1:
        words = [()]
    pruned_h += sum(s ** k - len(letters) ** k for k in range(1, L + 1)) if omit else 0
    words.sort(key=word_key)
    return WordBasisSet(words, L if n > 1 else 0, pres.generators, pruned_ch, pruned_h)


def _alternates(w: Word, pair) -> bool:
    a, b = pair
    if any(x not in (a, b) for x in w):
        return False
    return all(x != y for x, y in zip(w, w[1:]))


# --------------------------------------------------------------------------
# candidates


@dataclass
class Candidate:
    index: int                 # position in the stream (0-based)
    descriptor: str            # e.g. "tr[M1 * s2(M3,M7)]"
    words: str                 # same thing spelled with generator names
    polynomial: Polynomial
    indices: tuple = ()        # S indices used (0-based)
    degree_bound: int = 0


@dataclass
class StreamCounts:
    raw: int = 0               # candidates before any dedup (N*C(N,k) for trace)
    distinct: int = 0          # after dedup
    deduped: int = 0           # dropped as sign-equivalent to a retained one
    repeated_zero: int = 0     # m0 repeated in the tuple (vanish identically)
    identity_zero: int = 0     # sets containing the identity word (vanish)
    zero: int = 0              # computed and found to be the zero polynomial
    emitted: int = 0

    def as_dict(self):
        return dict(self.__dict__)


class WordMatrices:
    """Matrices of words over a set of generator matrices, shared by prefix;
    ``reduce`` (e.g. a normal form modulo Rel) is applied to every entry.

    ``reduce`` may also be an :class:`EncodedReduction`, in which case word
    matrices are kept in the engine's encoding and only traces and
    requested matrices are decoded.
    """

    def __init__(self, mats: Sequence[mx.Matrix], reduce=None):
        self.mats = [[list(r) for r in m] for m in mats]
        n = mx.same_size(self.mats)
        self.n = n
        self.traces: dict = {}
        if isinstance(reduce, EncodedReduction):
            self.enc = reduce
            self.reduce = lambda f: reduce.decode(reduce.reduce(reduce.encode(f)))
            # generator entries as encoded dicts; reduction only ever sees products
            self.emats = [[[reduce.encode(x) for x in row] for row in m] for m in self.mats]
            one = reduce.one()
            self.ecache = {(): [[dict(one) if i == j else {} for j in range(n)] for i in range(n)]}
        else:
            self.enc = None
            self.reduce = reduce
        z = mx.zero_of(self.mats[0][0][0])
        self.cache = {(): mx.identity(n, z, z + 1)}

    def __call__(self, w: Word) -> mx.Matrix:
        m = self.cache.get(w)
        if m is None:
            if self.enc is not None:
                m = [[self.enc.decode(x) for x in row] for row in self._encoded(w)]
            else:
                m = mx.mat_mul(self(w[:-1]), self.mats[w[-1]])
                if self.reduce is not None:
                    m = [[self.reduce(x) for x in row] for row in m]
            self.cache[w] = m
        return m

    def _encoded(self, w: Word) -> list:
        m = self.ecache.get(w)
        if m is None:
            left, g, enc, n = self._encoded(w[:-1]), self.emats[w[-1]], self.enc, self.n
            m = []
            for i in range(n):
                row = []
                for j in range(n):
                    acc: dict = {}
                    for k in range(n):
                        if left[i][k] and g[k][j]:
                            enc.mul_add(acc, left[i][k], g[k][j])
                    row.append(enc.reduce(acc))
                m.append(row)
            self.ecache[w] = m
        return m

    def trace(self, w: Word):
        """``tr`` of the word's matrix, cached under its least rotation."""
        key = min(w[i:] + w[:i] for i in range(len(w))) if w else w
        t = self.traces.get(key)
        if t is None:
            if not key:
                t = mx.trace(self(()))
            elif self.enc is not None:
                left, g, enc = self._encoded(key[:-1]), self.emats[key[-1]], self.enc
                acc: dict = {}
                for i in range(self.n):
                    for k in range(self.n):
                        if left[i][k] and g[k][i]:
                            enc.mul_add(acc, left[i][k], g[k][i])
                t = enc.decode(enc.reduce(acc))
            else:
                t = mx.trace_of_product(self(key[:-1]), self.mats[key[-1]])
                if self.reduce is not None:
                    t = self.reduce(t)
            self.traces[key] = t
        return t


def _combos_by_weight(weights: Sequence[int], r: int, skip_first: bool) -> Iterator[tuple]:
    """All r-subsets of indices (sorted tuples), by total weight then
    lexicographically.  ``weights`` must be nondecreasing."""
    N = len(weights)
    lo = 1 if skip_first else 0
    if r > N - lo:
        return
    prefix = [0]
    for w in weights:
        prefix.append(prefix[-1] + w)
    max_total = sum(sorted(weights[lo:])[-r:]) if r else 0
    min_total = sum(weights[lo:lo + r])

    def rec(start, left, total, acc):
        if left == 0:
            if total == 0:
                yield tuple(acc)
            return
        for i in range(start, N - left + 1):
            # smallest achievable with i as next pick
            smallest = prefix[i + left] - prefix[i]
            if smallest > total:
                break
            acc.append(i)
            yield from rec(i + 1, left - 1, total - weights[i], acc)
            acc.pop()

    for total in range(min_total, max_total + 1):
        yield from rec(lo, r, total, [])


class CandidateStream:
    """Lazy, cheapest-first stream of candidate defining equations.

    Iterating yields :class:`Candidate` objects with nonzero polynomials
    (all of them, zero included, when ``include_zero`` is set); ``counts``
    is updated as the stream advances.
    """

    def __init__(self, wordset: WordBasisSet, n: int, strategy: str = "trace",
                 mats: Sequence[mx.Matrix] | None = None, ctx: RingContext | None = None,
                 reduce: Callable | None = None, det_limit: int = 10 ** 6,
                 field=None, include_zero: bool = False):
        if strategy not in ("trace", "det", "commutator"):
            raise ValueError(f"unknown strategy {strategy!r}")
        s = len(wordset.generators)
        if mats is None:
            if ctx is None:
                ctx = generic_ring(field if field is not None else "QQ", n, s)
            mats = [g.rows for g in generic_matrices(ctx, n, s)]
        self.ctx = ctx if ctx is not None else mats[0][0][0].ctx
        self.wordset = wordset
        self.n = n
        self.strategy = strategy
        self.k = 2 * (n - 1)
        self.wm = WordMatrices(mats, reduce)
        self.reduce = self.wm.reduce
        self.counts = StreamCounts()
        self.include_zero = include_zero
        self.seen: set = set()
        N = len(wordset)
        if strategy == "commutator":
            if n != 2 or s != 2:
                raise ValueError("commutator strategy needs n = 2 and two generators")
            self.counts.raw = 1
        elif strategy == "trace":
            if n == 1:
                raise ValueError("trace strategy needs n >= 2")
            if N < self.k:
                raise ValueError(f"trace strategy needs |S| >= {self.k}")
            self.counts.raw = N * math.comb(N, self.k)
            has_id = bool(wordset.words) and wordset.words[0] == ()
            self.counts.repeated_zero = self.k * math.comb(N, self.k)
            self.counts.identity_zero = math.comb(N - 1, self.k) if has_id else 0
            sets = math.comb(N, self.k + 1)
            self.counts.deduped = self.k * sets
            self.counts.distinct = sets - self.counts.identity_zero
        else:
            d = n * n
            q = N
            while q > d and math.comb(q, d) > det_limit:
                q -= 1
            self.det_q = q
            self.counts.raw = math.comb(q, d) if q >= d else 0
            self.counts.distinct = self.counts.raw
        self._it = self._generate()

    def __iter__(self):
        return self

    def __next__(self) -> Candidate:
        return next(self._it)

    # descriptors
    def _m(self, i: int) -> str:
        return f"M{i + 1}"

    def trace_descriptor(self, m0: int, rest: Sequence[int]) -> str:
        inner = ",".join(self._m(i) for i in rest)
        return f"tr[{self._m(m0)} * s{len(rest)}({inner})]"

    def trace_words(self, m0: int, rest: Sequence[int]) -> str:
        inner = ",".join(self.wordset.label(i) for i in rest)
        return f"tr[{self.wordset.label(m0)} * s{len(rest)}({inner})]"

    # polynomials
    def trace_polynomial(self, m0: int, rest: Sequence[int]) -> Polynomial:
        """``tr(M_m0 * s_k(M_rest...))`` computed literally (any index tuple).

        Modulo an ideal this is the signed sum of the traces of the ``k!``
        concatenated words, each built one letter at a time and reduced as
        it grows (cheap, and shared between candidates); otherwise the
        subset recursion of :func:`irrep.freealg.standard_eval` is used.
        """
        words = self.wordset.words
        if self.reduce is None:
            A = [self.wm(words[i]) for i in rest]
            return mx.trace_of_product(self.wm(words[m0]), standard_eval(A))
        acc = None
        for perm in permutations(range(len(rest))):
            w = words[m0] + tuple(x for j in perm for x in words[rest[j]])
            t = self.wm.trace(w)
            if permutation_sign(perm) < 0:
                t = -t
            acc = t if acc is None else acc + t
        return acc

    def canonical(self, m0: int, rest: Sequence[int]) -> tuple[int, tuple] | None:
        """``(sign, sorted index set)`` of the retained candidate equal to
        ``sign * trace_polynomial(m0, rest)``; None when it vanishes."""
        full = (m0,) + tuple(rest)
        if len(set(full)) != len(full):
            return None
        order = sorted(range(len(full)), key=lambda t: full[t])
        sign = permutation_sign(order)
        return sign, tuple(sorted(full))

    def det_polynomial(self, cols: Sequence[int]) -> Polynomial:
        words = self.wordset.words
        vecs = [mx.flatten(self.wm(words[i])) for i in cols]
        M = [list(r) for r in zip(*vecs)]
        val = mx.det(M)
        return self.reduce(val) if self.reduce is not None else val

    def commutator_polynomial(self) -> Polynomial:
        x1, x2 = self.wm((0,)), self.wm((1,))
        c = mx.mat_sub(mx.mat_mul(x1, x2), mx.mat_mul(x2, x1))
        val = mx.det(c)
        return self.reduce(val) if self.reduce is not None else val

    def _emit(self, idx, desc, words, poly, indices, bound):
        if not poly:
            self.counts.zero += 1
            if not self.include_zero:
                return None
        self.counts.emitted += 1
        return Candidate(idx, desc, words, poly, indices, bound)

    def _generate(self) -> Iterator[Candidate]:
        idx = 0
        ws = self.wordset
        lengths = [len(w) for w in ws.words]
        names = ws.generators
        if self.strategy == "commutator":
            g = names
            a = self._m(ws.words.index((0,))) if (0,) in ws.words else "X1"
            b = self._m(ws.words.index((1,))) if (1,) in ws.words else "X2"
            desc = f"det[{a}*{b} - {b}*{a}]"
            words = f"det[{g[0]}*{g[1]} - {g[1]}*{g[0]}]"
            c = self._emit(0, desc, words, self.commutator_polynomial(), (0, 1), 4)
            if c is not None:
                yield c
            return
        if self.strategy == "trace":
            has_id = bool(ws.words) and ws.words[0] == ()
            for combo in _combos_by_weight(lengths, self.k + 1, skip_first=has_id):
                m0, rest = combo[0], combo[1:]
                key = combo
                if key in self.seen:
                    continue
                self.seen.add(key)
                poly = self.trace_polynomial(m0, rest)
                bound = sum(lengths[i] for i in combo)
                c = self._emit(idx, self.trace_descriptor(m0, rest), self.trace_words(m0, rest),
                               poly, combo, bound)
                idx += 1
                if c is not None:
                    yield c
            return
        d = self.n * self.n
        for combo in _combos_by_weight(lengths[:self.det_q], d, skip_first=False):
            poly = self.det_polynomial(combo)
            desc = "det[" + ",".join(self._m(i) for i in combo) + "]"
            words = "det[" + ",".join(ws.label(i) for i in combo) + "]"
            bound = sum(lengths[i] for i in combo)
            c = self._emit(idx, desc, words, poly, combo, bound)
            idx += 1
            if c is not None:
                yield c


def candidate_stream(wordset: WordBasisSet, n: int, strategy: str = "trace", **kw) -> CandidateStream:
    return CandidateStream(wordset, n, strategy, **kw)


# --------------------------------------------------------------------------
# span rank


def span_basis(mats: Sequence[mx.Matrix], L: int | None = None, modulus: int | None = None):
    """Echelon basis (as flattened vectors) of the span of all words of length
    <= ``L`` in ``mats`` (``L=None``: the whole generated algebra).

    Grows the span by multiplying only newly independent words by the
    generators, which reaches the same span as enumerating all words.  Over
    a tower a zero-divisor pivot raises
    :class:`irrep.tower.SplitRequired`; :func:`span_rank` handles it.
    """
    n = mx.same_size(mats)
    sample = mats[0][0][0]
    zero = mx.zero_of(sample)
    one = zero + 1
    if modulus:
        zero, one = 0, 1
    ident = mx.identity(n, zero, one)
    basis: dict[int, list] = {}   # pivot column -> normalized row

    def inv(x):
        return pow(x, -1, modulus) if modulus else one / x

    def insert(vec) -> bool:
        v = list(vec)
        for col in range(len(v)):
            if not v[col]:
                continue
            row = basis.get(col)
            if row is None:
                c = inv(v[col])
                if modulus:
                    v = [x * c % modulus for x in v]
                else:
                    v = [x * c for x in v]
                basis[col] = v
                return True
            f = v[col]
            if modulus:
                v = [(x - f * y) % modulus for x, y in zip(v, row)]
            else:
                v = [x - f * y for x, y in zip(v, row)]
        return False

    insert(mx.flatten(ident))
    frontier = [ident]
    rounds = 0
    while frontier and (L is None or rounds < L):
        rounds += 1
        nxt = []
        for w in frontier:
            for g in mats:
                prod = mx.mat_mul(w, g, modulus)
                if insert(mx.flatten(prod)):
                    nxt.append(prod)
        frontier = nxt
    return basis


def span_rank(mats: Sequence[mx.Matrix], L: int | None = None, modulus: int | None = None) -> int:
    """Dimension of the span of the words of length <= ``L`` in ``mats``.

    Entries may be field scalars, ints mod ``modulus`` or tower elements; in
    a tower a zero-divisor pivot splits the tower and the computation is
    repeated on the chosen branch.
    """
    return span_rank_detail(mats, L, modulus)[0]


def span_rank_detail(mats, L=None, modulus=None):
    """``(rank, mats, splits)``: the matrices actually used (projected onto the
    final tower branch when splits happened)."""
    from .tower import SplitRequired, TowerElement
    splits = 0
    while True:
        try:
            return len(span_basis(mats, L, modulus)), mats, splits
        except SplitRequired as e:
            sample = next((x for m in mats for r in m for x in r if isinstance(x, TowerElement)))
            tower = sample.tower.split(e)
            mats = [[[tower.project(tower.coerce(x) if not isinstance(x, TowerElement) else x)
                      for x in r] for r in m] for m in mats]
            splits += 1
