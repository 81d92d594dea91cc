"""Buchberger's algorithm and the membership / elimination routines built on it.

The driver works on engine handles (see :mod:`irrep.kernels`): polynomials are
converted once into the order-aware packed keys of :mod:`irrep._codec`, all
S-pair reductions happen inside the engine, and the reduced basis is converted
back at the end.  Pair bookkeeping follows Gebauer and Moeller (coprime and
chain criteria); pairs are selected by the normal strategy with ties broken by
pair index, so runs are reproducible.
"""

from __future__ import annotations

import enum
import heapq
import threading
import time
from dataclasses import dataclass, field, asdict
from typing import Iterable, Sequence

from ._codec import MonomialCodec
from .kernels import make_engine
from .polyring import (
    MonomialOrder, Polynomial, RingContext, _as_order, lex, grevlex,
)


class Membership(enum.Enum):
    YES = "Yes"
    NO = "No"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


@dataclass
class Budget:
    """Resource limits for one Groebner computation.  ``None`` = unlimited.

    ``deadline`` is an absolute ``time.monotonic()`` value; ``seconds`` is
    relative to the start of each run.  ``cancel`` is a
    :class:`threading.Event` polled at S-pair boundaries.
    """

    max_spairs: int | None = None
    max_polys: int | None = None
    seconds: float | None = None
    deadline: float | None = None
    cancel: threading.Event | None = None

    def __post_init__(self):
        for name in ("max_spairs", "max_polys", "seconds"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise ValueError(f"budget {name} must be positive")

    def limit_time(self, start: float) -> float | None:
        ends = [t for t in (self.deadline, None if self.seconds is None else start + self.seconds)
                if t is not None]
        return min(ends) if ends else None


UNLIMITED = Budget()


@dataclass
class GBStats:
    spairs: int = 0
    zero_reductions: int = 0
    coprime_skipped: int = 0
    chain_skipped: int = 0
    reduction_steps: int = 0
    max_degree: int = 0
    polys_created: int = 0
    basis_size: int = 0
    wall_time: float = 0.0
    engine: str = ""

    def as_dict(self) -> dict:
        return asdict(self)


class BudgetExceeded(Exception):
    """A budget limit was hit; ``stats`` describes the partial run."""

    def __init__(self, reason: str, stats: GBStats):
        super().__init__(reason)
        self.reason = reason
        self.stats = stats


class PositiveDimensional(Exception):
    """The ideal has positive dimension; ``free`` names independent variables."""

    def __init__(self, free: Sequence[str]):
        super().__init__(f"positive-dimensional; free variables {list(free)}")
        self.free = tuple(free)


class Inconsistent(Exception):
    """The ideal is the unit ideal (no points at all)."""


# --------------------------------------------------------------------------
# conversion between ring polynomials and engine term lists


class _Frame:
    """One ring + order as seen by an engine."""

    def __init__(self, ctx: RingContext, order: MonomialOrder, compiled=None):
        self.ctx = ctx
        self.order = order
        self.codec = MonomialCodec(ctx.nvars, order)
        self.p = ctx.field.char
        self.engine = make_engine(self.codec, self.p, compiled)
        self._enc: dict[int, int] = {}
        self._dec: dict[int, int] = {}

    def encode_terms(self, f: Polynomial) -> list:
        enc = self._enc
        out = []
        for m, c in f.terms.items():
            k = enc.get(m)
            if k is None:
                k = enc[m] = self.codec.encode(self.ctx.unpack(m))
                self._dec[k] = m
            out.append((k, c))
        out.sort(reverse=True)
        return out

    def decode_terms(self, terms) -> Polynomial:
        dec = self._dec
        ctx = self.ctx
        out = {}
        for k, c in terms:
            m = dec.get(k)
            if m is None:
                m = dec[k] = ctx.pack(self.codec.decode(k))
            out[m] = c
        return Polynomial(ctx, out)

    def add(self, f: Polynomial) -> int:
        return self.engine.add(self.encode_terms(f))

    def poly(self, h: int) -> Polynomial:
        return self.decode_terms(self.engine.terms(h))


def _bind(ctx: RingContext, order) -> MonomialOrder:
    return ctx.order if order is None else _as_order(order).bind(ctx.names)


def _check_ring(polys: Sequence[Polynomial], ctx: RingContext | None = None) -> RingContext:
    if ctx is None:
        if not polys:
            raise ValueError("need at least one polynomial or an explicit ring")
        ctx = polys[0].ctx
    for f in polys:
        if f.ctx != ctx:
            raise ValueError("polynomials from different rings")
    return ctx


# --------------------------------------------------------------------------
# results


class GroebnerBasis:
    """A reduced Groebner basis: monic elements sorted by leading monomial
    ascending, together with the order used and run statistics."""

    def __init__(self, ctx: RingContext, order: MonomialOrder, polys: list[Polynomial],
                 stats: GBStats):
        self.ctx = ctx
        self.order = order
        self.polys = polys
        self.stats = stats
        self._frame = None
        self._lock = threading.Lock()

    def __iter__(self):
        return iter(self.polys)

    def __len__(self):
        return len(self.polys)

    def __getitem__(self, i):
        return self.polys[i]

    def __repr__(self):
        return f"GroebnerBasis({len(self.polys)} elements, {self.order!r})"

    def is_unit(self) -> bool:
        return len(self.polys) == 1 and self.polys[0].is_constant()

    def leading_monomials(self) -> list[tuple[int, ...]]:
        key = self.ctx.sort_key(self.order)
        return [self.ctx.unpack(max(g.terms, key=key)) for g in self.polys]

    def normal_form(self, f: Polynomial) -> Polynomial:
        """Remainder modulo the basis; the encoded reducers are kept between calls."""
        if not f or not self.polys:
            return f
        if f.ctx != self.ctx:
            raise ValueError("polynomial from a different ring")
        with self._lock:
            frame = self._reducer_frame()
            return frame.decode_terms(frame.engine.normal_form(frame.encode_terms(f)))

    def _reducer_frame(self) -> _Frame:
        if self._frame is None:
            frame = _Frame(self.ctx, self.order)
            frame.engine.set_reducers([frame.add(g) for g in self.polys])
            self._frame = frame
        return self._frame

    def contains(self, f: Polynomial) -> bool:
        return not self.normal_form(f)

    def encoded(self) -> "EncodedReduction":
        """Arithmetic on engine-encoded polynomials with reduction modulo the basis."""
        with self._lock:
            return EncodedReduction(self._reducer_frame(), self._lock, bool(self.polys))


class EncodedReduction:
    """Polynomials as ``{key: coefficient}`` dicts in an engine's monomial
    encoding.  Long chains of products and reductions stay encoded and only
    the final results are decoded."""

    def __init__(self, frame: _Frame, lock, active: bool = True):
        self.frame = frame
        self.ctx = frame.ctx
        self._lock = lock
        self._active = active
        self._bias = frame.codec.BIAS
        self._ovf = frame.codec.OVF
        self._p = frame.p

    def encode(self, f: Polynomial) -> dict:
        with self._lock:
            return dict(self.frame.encode_terms(f))

    def decode(self, d: dict) -> Polynomial:
        with self._lock:
            return self.frame.decode_terms(d.items())

    def one(self) -> dict:
        return {self._bias: self.ctx.field.one}

    def mul_add(self, acc: dict, a: dict, b: dict) -> None:
        """``acc += a*b`` in place (coefficients not yet normalized)."""
        bias, ovf = self._bias, self._ovf
        get = acc.get
        for kb, cb in b.items():
            shift = kb - bias
            for ka, ca in a.items():
                k = ka + shift
                acc[k] = get(k, 0) + ca * cb
        if any(k & ovf for k in acc):
            raise OverflowError("exponent overflow")

    def clean(self, acc: dict) -> dict:
        p = self._p
        if p:
            return {k: c % p for k, c in acc.items() if c % p}
        return {k: c for k, c in acc.items() if c}

    def reduce(self, d: dict) -> dict:
        d = self.clean(d)
        if not d or not self._active:
            return d
        with self._lock:
            return dict(self.frame.engine.normal_form(sorted(d.items(), reverse=True)))


# --------------------------------------------------------------------------
# normal forms


def normal_form(f: Polynomial, basis: Sequence[Polynomial], order=None,
                compiled=None) -> Polynomial:
    """Remainder of ``f`` on division by ``basis`` (divisors tried in list order)."""
    basis = [g for g in basis if g]
    ctx = _check_ring([f] + basis)
    if not f or not basis:
        return f
    frame = _Frame(ctx, _bind(ctx, order), compiled)
    handles = [frame.add(g) for g in basis]
    frame.engine.set_reducers(handles)
    return frame.decode_terms(frame.engine.normal_form(frame.encode_terms(f)))


# --------------------------------------------------------------------------
# Buchberger


class _Pair:
    __slots__ = ("i", "j", "lcm", "lexps", "deg", "alive")

    def __init__(self, i, j, lcm, lexps, deg):
        self.i, self.j, self.lcm, self.lexps, self.deg = i, j, lcm, lexps, deg
        self.alive = True


class _Run:
    """State of one Buchberger computation."""

    def __init__(self, frame: _Frame, budget: Budget):
        self.frame = frame
        self.eng = frame.engine
        self.codec = frame.codec
        self.budget = budget
        self.stats = GBStats(engine="compiled" if self.eng.compiled else "python")
        self.start = time.monotonic()
        self.t_end = budget.limit_time(self.start)
        self.exps: dict[int, tuple] = {}     # handle -> exponent tuple of the lead
        self.support: dict[int, int] = {}    # handle -> bitmask of lead support
        self.G: list[int] = []               # current (non-redundant) basis handles
        self.pairs: list[_Pair] = []         # live pairs (also indexed by heap)
        self.heap: list = []
        self.unit = False

    # budget
    def check(self):
        b = self.budget
        st = self.stats
        if b.cancel is not None and b.cancel.is_set():
            self._fail("cancelled")
        if b.max_spairs is not None and st.spairs > b.max_spairs:
            self._fail("S-pair limit reached")
        if b.max_polys is not None and len(self.eng) > b.max_polys:
            self._fail("polynomial limit reached")
        if self.t_end is not None and time.monotonic() > self.t_end:
            self._fail("time limit reached")

    def _fail(self, reason):
        self.stats.wall_time = time.monotonic() - self.start
        self.stats.reduction_steps = self.eng.steps
        raise BudgetExceeded(reason, self.stats)

    # helpers
    def _register(self, h: int):
        k = self.eng.lead(h)
        e = self.codec.decode(k)
        self.exps[h] = e
        mask = 0
        for idx, v in enumerate(e):
            if v:
                mask |= 1 << idx
        self.support[h] = mask
        d = sum(e)
        if d > self.stats.max_degree:
            self.stats.max_degree = d
        if d == 0:
            self.unit = True

    def _lcm(self, a: tuple, b: tuple):
        ex = tuple(x if x > y else y for x, y in zip(a, b))
        return self.codec.encode(ex), ex

    def _push(self, pr: _Pair):
        heapq.heappush(self.heap, (pr.deg, pr.lcm, pr.i, pr.j, pr))

    def insert(self, h: int, pairs_with_old: bool = True):
        """Gebauer-Moeller update with the new basis element ``h``."""
        self._register(h)
        if self.unit:
            return
        eh = self.exps[h]
        sh = self.support[h]
        divides = self.codec.divides
        if pairs_with_old:
            cand = []
            for g in self.G:
                lk, le = self._lcm(self.exps[g], eh)
                cand.append((g, lk, le, (self.support[g] & sh) == 0))
            # chain criterion among the new pairs: drop (g, h) when another new
            # pair's lcm properly divides it; among equal lcms keep one, preferring
            # a coprime one (whose pair is then dropped by the coprime criterion)
            keep = []
            n = len(cand)
            for a in range(n):
                g, lk, le, cop = cand[a]
                drop = False
                for b in range(n):
                    if b == a:
                        continue
                    lk2 = cand[b][1]
                    if lk2 == lk:
                        if cand[b][3] and not cop:
                            drop = True
                            break
                        if cand[b][3] == cop and b < a:
                            drop = True
                            break
                    elif divides(lk2, lk):
                        drop = True
                        break
                if drop:
                    self.stats.chain_skipped += 1
                elif cop:
                    self.stats.coprime_skipped += 1
                else:
                    keep.append((g, lk, le))
            # chain criterion on old pairs
            for pr in self.pairs:
                if not pr.alive:
                    continue
                if divides(self.eng.lead(h), pr.lcm):
                    l1, _ = self._lcm(self.exps[pr.i], eh)
                    l2, _ = self._lcm(self.exps[pr.j], eh)
                    if l1 != pr.lcm and l2 != pr.lcm:
                        pr.alive = False
                        self.stats.chain_skipped += 1
            self.pairs = [pr for pr in self.pairs if pr.alive]
            for g, lk, le in keep:
                pr = _Pair(g, h, lk, le, sum(le))
                self.pairs.append(pr)
                self._push(pr)
        lead_h = self.eng.lead(h)
        self.G = [g for g in self.G if not divides(lead_h, self.eng.lead(g))]
        self.G.append(h)
        self.eng.set_reducers(self.G)

    def add_generator(self, f_handle: int):
        """Reduce an input generator against the current basis and insert it."""
        self.check()
        h = self.eng.reduce(f_handle)
        if h >= 0:
            self.stats.polys_created += 1
            self.insert(h)

    def run(self):
        eng = self.eng
        while self.heap and not self.unit:
            _, _, _, _, pr = heapq.heappop(self.heap)
            if not pr.alive:
                continue
            pr.alive = False
            self.stats.spairs += 1
            self.check()
            h = eng.spoly_reduce(pr.i, pr.j, pr.lcm)
            if h < 0:
                self.stats.zero_reductions += 1
                continue
            self.stats.polys_created += 1
            self.insert(h)
        self.pairs = []

    def reduced_basis(self) -> list[Polynomial]:
        frame = self.frame
        ctx = frame.ctx
        if self.unit:
            return [ctx.one()]
        eng = self.eng
        G = sorted(self.G, key=eng.lead)
        out = []
        for idx, g in enumerate(G):
            eng.set_reducers(G[:idx] + G[idx + 1:])
            r = eng.reduce(g)
            out.append(frame.poly(r))
        eng.set_reducers(G)
        return out


def buchberger(generators: Iterable[Polynomial], order=None, budget: Budget | None = None,
               start: "GroebnerBasis | Sequence[Polynomial] | None" = None,
               ctx: RingContext | None = None, compiled=None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``generators``.

    ``start`` is an optional list already known to be a Groebner basis under
    the same order (for instance a basis computed earlier in a subring); its
    mutual S-pairs are skipped.  Raises :class:`BudgetExceeded` when the budget
    runs out.  Returns ``{1}`` as soon as a constant appears.
    """
    gens = [g for g in generators if g]
    start_polys = [g for g in (start or []) if g]
    ctx = _check_ring(gens + start_polys, ctx)
    order = _bind(ctx, order)
    budget = budget or UNLIMITED
    frame = _Frame(ctx, order, compiled)
    run = _Run(frame, budget)
    eng = run.eng
    if start_polys:
        hs = sorted((frame.add(g) for g in start_polys), key=eng.lead)
        for h in hs:
            run.insert(h, pairs_with_old=False)
            if run.unit:
                break
    if not run.unit:
        raw = sorted((frame.add(g) for g in gens), key=eng.lead)
        for h in raw:
            run.add_generator(h)
            if run.unit:
                break
            run.run()
    polys = run.reduced_basis()
    st = run.stats
    st.basis_size = len(polys)
    st.reduction_steps = eng.steps
    st.wall_time = time.monotonic() - run.start
    return GroebnerBasis(ctx, order, polys, st)


def is_groebner(basis: Sequence[Polynomial], order=None) -> bool:
    """Buchberger's criterion checked directly (every S-polynomial reduces to 0)."""
    basis = [g for g in basis if g]
    if not basis:
        return True
    ctx = _check_ring(basis)
    frame = _Frame(ctx, _bind(ctx, order))
    hs = [frame.add(g) for g in basis]
    frame.engine.set_reducers(hs)
    codec = frame.codec
    for a in range(len(hs)):
        for b in range(a + 1, len(hs)):
            la, lb = frame.engine.lead(hs[a]), frame.engine.lead(hs[b])
            lcm = codec.lcm(la, lb)
            if frame.engine.spoly_reduce(hs[a], hs[b], lcm) >= 0:
                return False
    return True


# --------------------------------------------------------------------------
# membership


def ideal_membership(f: Polynomial, generators: Sequence[Polynomial], order=None,
                     budget: Budget | None = None) -> Membership:
    gens = [g for g in generators if g]
    if not f:
        return Membership.YES
    if not gens:
        return Membership.NO
    try:
        gb = buchberger(gens, order, budget)
    except BudgetExceeded:
        return Membership.UNKNOWN
    return Membership.YES if not gb.normal_form(f) else Membership.NO


def rabinowitsch_ring(ctx: RingContext, name: str = "z") -> RingContext:
    """``ctx`` plus one fresh trailing variable, under grevlex."""
    while name in ctx:
        name = name + "_"
    return RingContext(ctx.field, ctx.names + (name,), grevlex)


@dataclass
class RadicalResult:
    verdict: Membership
    stats: GBStats | None = None
    reason: str = ""


def radical_test(g: Polynomial, generators: Sequence[Polynomial], budget: Budget | None = None,
                 start: "GroebnerBasis | None" = None, compiled=None) -> RadicalResult:
    """Radical membership with statistics.

    Adjoins a fresh variable ``z`` and decides whether ``generators + {1 - z*g}``
    generate the unit ideal.  When ``start`` is a grevlex Groebner basis of the
    generators, ``g`` is first reduced modulo it and the basis seeds the run.
    """
    gens = [f for f in generators if f]
    ctx = g.ctx
    _check_ring(gens + ([] if start is None else list(start.polys)), ctx)
    if start is not None:
        if start.is_unit():
            return RadicalResult(Membership.YES, start.stats)
        g = start.normal_form(g)
    if not g:
        return RadicalResult(Membership.YES)
    if g.is_constant():
        return _constant_case(g, gens, start, budget, compiled)
    big = rabinowitsch_ring(ctx)
    z = big.var(big.nvars - 1)
    rab = big.one() - z * g.rename(big)
    try:
        if start is not None and start.order.kind == "grevlex":
            gb = buchberger([rab], grevlex, budget,
                            start=[f.rename(big) for f in start.polys], ctx=big, compiled=compiled)
        else:
            gb = buchberger([f.rename(big) for f in gens] + [rab], grevlex, budget,
                            ctx=big, compiled=compiled)
    except BudgetExceeded as e:
        return RadicalResult(Membership.UNKNOWN, e.stats, e.reason)
    return RadicalResult(Membership.YES if gb.is_unit() else Membership.NO, gb.stats)


def _constant_case(g, gens, start, budget, compiled) -> RadicalResult:
    """A nonzero constant lies in the radical iff the ideal is the unit ideal."""
    if start is not None:
        return RadicalResult(Membership.YES if start.is_unit() else Membership.NO, start.stats)
    if not gens:
        return RadicalResult(Membership.NO)
    try:
        gb = buchberger(gens, grevlex, budget, compiled=compiled)
    except BudgetExceeded as e:
        return RadicalResult(Membership.UNKNOWN, e.stats, e.reason)
    return RadicalResult(Membership.YES if gb.is_unit() else Membership.NO, gb.stats)


def radical_membership(g: Polynomial, generators: Sequence[Polynomial],
                       budget: Budget | None = None) -> Membership:
    """Is ``g`` in the radical of the ideal generated by ``generators``?"""
    return radical_test(g, generators, budget).verdict


# --------------------------------------------------------------------------
# elimination


def elimination(generators: Sequence[Polynomial], keep: Iterable, budget: Budget | None = None,
                inner: str = "grevlex") -> list[Polynomial]:
    """Generators of the elimination ideal ``I ∩ k[keep]``.

    Computes a Groebner basis under a block order that puts the eliminated
    variables first and returns its elements free of those variables.
    """
    gens = [g for g in generators if g]
    ctx = _check_ring(gens)
    keep_idx = {ctx.index(v) if isinstance(v, str) else int(v) for v in keep}
    drop = [i for i in range(ctx.nvars) if i not in keep_idx]
    if not drop:
        return list(buchberger(gens, ctx.order, budget))
    order = MonomialOrder.block(drop, inner, inner).bind(ctx.names)
    gb = buchberger(gens, order, budget)
    out = []
    for f in gb:
        if not (f.variables() & set(drop)):
            out.append(Polynomial(ctx, f.terms))
    return out


# --------------------------------------------------------------------------
# dimension helpers


def independent_variables(lead_exps: Sequence[Sequence[int]], nvars: int,
                          prefer: Sequence[int] | None = None) -> list[int]:
    """A maximal set ``U`` of variables such that no leading monomial lies in
    ``k[U]`` (greedy, in ``prefer`` order).  Empty iff zero-dimensional or unit."""
    supports = []
    for e in lead_exps:
        m = 0
        for i, v in enumerate(e):
            if v:
                m |= 1 << i
        supports.append(m)
    if any(s == 0 for s in supports):
        return []
    chosen = 0
    out = []
    for i in (prefer if prefer is not None else range(nvars - 1, -1, -1)):
        trial = chosen | (1 << i)
        if all(s & ~trial for s in supports):
            chosen = trial
            out.append(i)
    return sorted(out)


def is_zero_dimensional(gb: GroebnerBasis) -> bool:
    pure = set()
    for e in gb.leading_monomials():
        nz = [i for i, v in enumerate(e) if v]
        if len(nz) == 1:
            pure.add(nz[0])
    return len(pure) == gb.ctx.nvars


# --------------------------------------------------------------------------
# solving zero-dimensional systems


@dataclass
class LiftedPoint:
    """A point of a zero-dimensional variety: tower + value per variable."""

    tower: object
    assignment: dict          # variable name -> TowerElement
    splits: int = 0
    stats: GBStats | None = None


def _specialize(f: Polynomial, k: int, values: dict, tower) -> list:
    """``f`` with variables ``> k`` replaced by their values, as a univariate
    polynomial in variable ``k`` (list of tower elements, low degree first)."""
    ctx = f.ctx
    coeffs: dict[int, object] = {}
    powers: dict[tuple[int, int], object] = {}
    sc = ctx.field.scalar
    for m, c in f.terms.items():
        exps = ctx.unpack(m)
        term = tower.scalar(sc(c))
        for j in range(k + 1, len(exps)):
            e = exps[j]
            if e:
                pw = powers.get((j, e))
                if pw is None:
                    pw = powers[(j, e)] = values[j] ** e
                term = term * pw
        d = exps[k]
        prev = coeffs.get(d)
        coeffs[d] = term if prev is None else prev + term
    top = max(coeffs)
    zero = tower.zero()
    return [coeffs.get(i, zero) for i in range(top + 1)]


def lift_point(generators: Sequence[Polynomial], budget: Budget | None = None,
               prefer_rational: bool = True, level_prefix: str = "t",
               gb: GroebnerBasis | None = None) -> LiftedPoint:
    """One point of ``V(generators)`` over a tower of simple extensions.

    Computes the reduced lex basis; if some variable has no pure-power leading
    monomial the ideal is positive-dimensional and :class:`PositiveDimensional`
    is raised with a set of free variables.  Otherwise variables are solved
    from the last one up: the specialised basis elements are combined by gcd,
    made squarefree, and a base-field root is used when one exists; else a new
    tower level is opened.  Zero divisors met along the way split the tower.
    """
    from .tower import (ExtensionTower, SplitRequired, base_roots, squarefree_part, ugcd,
                        utrim)
    gens = [g for g in generators if g]
    if not gens:
        raise PositiveDimensional(())
    ctx = _check_ring(gens)
    if gb is None:
        gb = buchberger(gens, lex, budget)
    if gb.is_unit():
        raise Inconsistent("the ideal is the unit ideal")
    if not is_zero_dimensional(gb):
        free = independent_variables(gb.leading_monomials(), ctx.nvars)
        raise PositiveDimensional([ctx.names[i] for i in free])
    groups: dict[int, list[Polynomial]] = {}
    for f in gb:
        k = min(f.variables())
        groups.setdefault(k, []).append(f)
    tower = ExtensionTower(ctx.field)
    values: dict[int, object] = {}
    splits = 0
    k = ctx.nvars - 1
    while k >= 0:
        try:
            u = []
            for f in groups.get(k, []):
                sp = utrim(_specialize(f, k, values, tower))
                u = sp if not u else ugcd(u, sp)
            if len(u) < 2:
                raise Inconsistent(f"no value for {ctx.names[k]}")
            u = squarefree_part(u)
            if len(u) == 2:
                val = -u[0] * u[1].inverse()
            else:
                roots = []
                if prefer_rational and all(c.is_scalar() for c in u):
                    roots = base_roots([c.scalar_value() for c in u], ctx.field)
                if roots:
                    val = tower.scalar(roots[0])
                else:
                    name = f"{level_prefix}{tower.depth + 1}"
                    tower = tower.add_level(name, u)
                    val = tower.gen(tower.depth - 1)
                    values = {j: tower.coerce(v) for j, v in values.items()}
            values[k] = val
            k -= 1
        except SplitRequired as e:
            splits += 1
            tower = tower.split(e)
            values = {j: tower.project(v) for j, v in values.items()}
    assignment = {ctx.names[j]: tower.coerce(v) for j, v in values.items()}
    return LiftedPoint(tower, assignment, splits, gb.stats)
