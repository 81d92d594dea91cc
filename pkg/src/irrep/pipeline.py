"""Deciding, constructing and verifying irreducible representations.

``decide`` streams candidate polynomials and stops at the first one outside
the radical of the relation ideal.  ``construct`` finds an actual point of
the representation variety at which that polynomial is invertible, and
``verify`` checks any proposed point directly (relations and spanning).
"""

from __future__ import annotations

import enum
import random
import re
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from . import matrices as mx
from .freealg import Presentation, evaluate_nc, standard_eval
from .genmat import (RelIdeal, candidate_stream, generic_matrices, generic_ring, length_bound,
                     rel_ideal, span_rank_detail, word_set)
from .groebner import (Budget, BudgetExceeded, GroebnerBasis, GBStats, Inconsistent, Membership,
                       PositiveDimensional, buchberger, independent_variables, lift_point,
                       radical_test, rabinowitsch_ring)
from .parser import ParseError, PointSpec, parse_expression, parse_point
from .polyring import GF, Polynomial, RingContext, format_polynomial, grevlex, register_ring
from .tower import ExtensionTower, SplitRequired, TowerElement

PROBE_PRIME = 2 ** 31 - 1
MAX_RETRIES = 32


class Status(enum.Enum):
    EXISTS = "Exists"
    NOT_EXISTS = "NotExists"
    UNKNOWN = "Unknown"

    def __str__(self):
        return self.value


class ConstructionFailed(Exception):
    """No point found within the retry limit (existence is unaffected)."""


class ConstructionBudgetExceeded(Exception):
    """A Groebner run inside ``construct`` ran out of budget."""


# --------------------------------------------------------------------------
# the generic system, with linear relations solved away


@dataclass
class GenericSystem:
    """Relation ideal and generic matrices over a ring of kept variables.

    Relation entries of the form ``c*v + h`` with ``v`` absent from ``h``
    (for instance those of ``A - X^2``) are solved for ``v``; ``substitution``
    maps each removed variable to its value in the kept ring.  Membership in
    the radical is unchanged by this, since the quotient rings agree.

    With ``hint: triangular G`` the generic matrix of ``G`` is upper
    triangular.  Every matrix is conjugate to a triangular one and all
    candidates are invariant under simultaneous conjugation, so a candidate
    vanishes on all representations iff it vanishes on this slice.
    """

    presentation: Presentation
    full_ctx: RingContext
    rel: RelIdeal
    ctx: RingContext
    mats: list
    polys: list
    substitution: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.presentation.dimension

    def full_assignment(self, values: dict) -> dict:
        """Extend values of kept variables to all variables of the full ring."""
        out = dict(values)
        for nm, f in self.substitution.items():
            out[nm] = f.evaluate(values)
        return out


def _linear_variable(f: Polynomial):
    """``(index, coefficient)`` of a variable occurring in ``f`` only as a
    degree-one monomial, preferring the highest index; None if none."""
    ctx = f.ctx
    counts: dict[int, int] = {}
    linear: dict[int, object] = {}
    for m, c in f.terms.items():
        exps = ctx.unpack(m)
        nz = [i for i, e in enumerate(exps) if e]
        for i in nz:
            counts[i] = counts.get(i, 0) + 1
        if len(nz) == 1 and exps[nz[0]] == 1:
            linear[nz[0]] = c
    best = [i for i in linear if counts[i] == 1]
    if not best:
        return None
    i = max(best)
    return i, linear[i]


def prepare(pres: Presentation, presubstitute: bool = True) -> GenericSystem:
    n, s = pres.dimension, pres.s
    full = generic_ring(pres.field, n, s)
    rel = rel_ideal(pres, full)
    polys = list(rel.polys)
    subs: dict[int, Polynomial] = {}
    tri = [idx[0] for kind, idx in pres.hints if kind == "triangular"]
    if tri:
        # entries below the diagonal of the chosen generator are set to zero
        for l in tri:
            for i in range(2, n + 1):
                for j in range(1, i):
                    subs[full.index(f"x_{i}_{j}_{l + 1}")] = full.zero()
        polys = [g for g in (f.substitute(subs) for f in polys) if g]
        polys = list(dict.fromkeys(polys))
    if presubstitute:
        fld = full.field
        changed = True
        while changed:
            changed = False
            for k, f in enumerate(polys):
                hit = _linear_variable(f)
                if hit is None:
                    continue
                v, c = hit
                # c*v + rest = 0  gives  v = -rest/c
                rest = f - full.var(v).scale(c)
                val = rest.scale(fld.inv(c)).scale(fld.convert(-1))
                mapping = {v: val}
                subs = {i: g.substitute(mapping) for i, g in subs.items()}
                subs[v] = val
                new = []
                seen = set()
                for j, g in enumerate(polys):
                    if j == k:
                        continue
                    g2 = g.substitute(mapping)
                    if g2 and g2 not in seen:
                        seen.add(g2)
                        new.append(g2)
                polys = new
                changed = True
                break
    kept = [nm for i, nm in enumerate(full.names) if i not in subs]
    ctx = register_ring(full.field, kept, "grevlex") if subs else full
    sub_named = {full.names[i]: g.rename(ctx, _rename_map(full, ctx)) for i, g in subs.items()}
    polys = [g.rename(ctx, _rename_map(full, ctx)) for g in polys] if subs else polys
    mats = []
    for gm in generic_matrices(full, n, s):
        rows = []
        for row in gm.rows:
            out = []
            for e in row:
                nm = full.names[next(iter(e.variables()))]
                out.append(sub_named[nm] if nm in sub_named else ctx.var(nm))
            rows.append(out)
        mats.append(rows)
    return GenericSystem(pres, full, rel, ctx, mats, polys, sub_named)


def _rename_map(src: RingContext, dst: RingContext) -> list:
    return [dst.index(nm) if nm in dst else -1 for nm in src.names]


# --------------------------------------------------------------------------
# decide


@dataclass
class CandidateRecord:
    index: int
    descriptor: str
    words: str
    verdict: str
    degree: int
    terms: int
    stats: dict | None = None
    reason: str = ""


@dataclass
class DecisionReport:
    status: Status
    field: str
    dimension: int
    strategy: str
    hints: list
    seed: int
    witness: str | None = None
    witness_words: str | None = None
    witness_polynomial: Polynomial | None = None
    certificate: str | None = None
    counts: dict = field(default_factory=dict)
    candidates: list = field(default_factory=list)
    rel_stats: dict | None = None
    ring: dict = field(default_factory=dict)
    wall_time: float = 0.0
    reason: str = ""

    def as_dict(self, timings: bool = True) -> dict:
        d = {
            "status": str(self.status),
            "field": self.field,
            "dimension": self.dimension,
            "strategy": self.strategy,
            "hints": list(self.hints),
            "seed": self.seed,
            "witness": self.witness,
            "witness_words": self.witness_words,
            "witness_polynomial": None if self.witness_polynomial is None
            else format_polynomial(self.witness_polynomial),
            "certificate": self.certificate,
            "counts": dict(self.counts),
            "candidates": [dict(c.__dict__) for c in self.candidates],
            "rel_stats": self.rel_stats,
            "ring": dict(self.ring),
            "wall_time": self.wall_time,
            "reason": self.reason,
        }
        if not timings:
            d["wall_time"] = 0.0
            for c in d["candidates"]:
                if c["stats"]:
                    c["stats"] = {k: v for k, v in c["stats"].items() if k != "wall_time"}
            if d["rel_stats"]:
                d["rel_stats"] = {k: v for k, v in d["rel_stats"].items() if k != "wall_time"}
        return d


def _hint_text(pres: Presentation) -> list:
    return [f"{kind} " + " ".join(pres.generators[i] for i in idx) for kind, idx in pres.hints]


def _run_budget(budget: Budget | None, deadline: float | None, cancel=None) -> Budget:
    b = budget or Budget()
    ends = [t for t in (b.deadline, deadline) if t is not None]
    return Budget(b.max_spairs, b.max_polys, None, min(ends) if ends else None, cancel or b.cancel)


def decide(pres: Presentation, strategy: str = "trace", budget: Budget | None = None, *,
           seed: int = 0, max_candidates: int | None = None, workers: int = 1,
           compiled=None, presubstitute: bool = True, system: GenericSystem | None = None,
           skip: int = 0, stride: int = 1) -> DecisionReport:
    """Is there an irreducible representation of dimension ``pres.dimension``?

    ``budget.max_spairs``/``max_polys`` bound each Groebner run and
    ``budget.seconds`` bounds the whole decision.  ``max_candidates`` stops
    after that many membership tests (the verdict is then Unknown unless a
    witness was found); ``skip`` and ``stride`` select a regular sample of
    the stream.
    """
    t0 = time.monotonic()
    budget = budget or Budget()
    deadline = None if budget.seconds is None else t0 + budget.seconds
    if budget.deadline is not None:
        deadline = budget.deadline if deadline is None else min(deadline, budget.deadline)
    n = pres.dimension
    report = DecisionReport(Status.UNKNOWN, pres.field.name, n, strategy, _hint_text(pres), seed)

    def finish(status, reason=""):
        report.status = status
        report.reason = reason
        report.wall_time = time.monotonic() - t0
        return report

    sysm = system or prepare(pres, presubstitute)
    report.ring = {"variables": sysm.full_ctx.nvars, "kept": sysm.ctx.nvars,
                   "substituted": len(sysm.substitution), "relations": len(sysm.rel.polys),
                   "relation_entries": len(sysm.rel.provenance)}
    try:
        if sysm.polys:
            gb = buchberger(sysm.polys, grevlex, _run_budget(budget, deadline), ctx=sysm.ctx,
                            compiled=compiled)
        else:
            gb = GroebnerBasis(sysm.ctx, grevlex.bind(sysm.ctx.names), [], GBStats())
    except BudgetExceeded as e:
        report.rel_stats = e.stats.as_dict()
        return finish(Status.UNKNOWN, f"relation basis: {e.reason}")
    report.rel_stats = gb.stats.as_dict()
    if gb.is_unit():
        return finish(Status.NOT_EXISTS, "no representations of this dimension")
    if n == 1:
        report.witness = report.witness_words = "1"
        report.witness_polynomial = sysm.ctx.one()
        report.certificate = "groebner"
        return finish(Status.EXISTS, "1x1 matrices span M_1")

    ws = word_set(pres)
    if strategy != "commutator" and len(ws) < n * n:
        report.counts = {"words": len(ws)}
        return finish(Status.NOT_EXISTS, f"only {len(ws)} words, fewer than n^2 = {n * n}")
    reduce = gb.encoded() if gb.polys else None
    stream = candidate_stream(ws, n, strategy, mats=sysm.mats, ctx=sysm.ctx, reduce=reduce)
    tested = yes = unknown = 0
    cancel = threading.Event()
    witness = None

    def test(c):
        if deadline is not None and time.monotonic() > deadline:
            return CandidateRecord(c.index, c.descriptor, c.words, "Unknown", c.polynomial.degree(),
                                   len(c.polynomial), None, "deadline")
        res = radical_test(c.polynomial, sysm.polys, _run_budget(budget, deadline, cancel),
                           start=gb, compiled=compiled)
        return CandidateRecord(c.index, c.descriptor, c.words, str(res.verdict),
                               c.polynomial.degree(), len(c.polynomial),
                               None if res.stats is None else res.stats.as_dict(), res.reason)

    def selected():
        pos = 0
        for c in stream:
            if c.polynomial.degree() > c.degree_bound:
                raise AssertionError(f"{c.descriptor}: degree above the additive bound")
            if pos >= skip and (pos - skip) % stride == 0:
                yield c
            pos += 1

    it = selected()
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    limit_hit = False
    try:
        while witness is None:
            batch = []
            for c in it:
                batch.append(c)
                if len(batch) >= max(1, workers):
                    break
            if max_candidates is not None and len(batch) > max_candidates - tested:
                batch = batch[:max(0, max_candidates - tested)]
                limit_hit = True
            if not batch:
                break
            recs = list(pool.map(test, batch)) if pool else [test(c) for c in batch]
            for c, r in zip(batch, recs):
                tested += 1
                report.candidates.append(r)
                if r.verdict == "No":
                    witness = c
                    cancel.set()
                    break
                if r.verdict == "Yes":
                    yes += 1
                else:
                    unknown += 1
            if max_candidates is not None and tested >= max_candidates and witness is None:
                limit_hit = True
                break
    finally:
        if pool:
            pool.shutdown(wait=True)
    counts = stream.counts.as_dict()
    counts.update(words=len(ws), tested=tested, in_radical=yes, unknown=unknown)
    report.counts = counts
    if witness is not None:
        report.witness = witness.descriptor
        report.witness_words = witness.words
        report.witness_polynomial = witness.polynomial
        report.certificate = "groebner"
        return finish(Status.EXISTS)
    if limit_hit:
        return finish(Status.UNKNOWN, f"stopped after {tested} candidates")
    if unknown:
        return finish(Status.UNKNOWN, f"{unknown} candidate(s) undecided within budget")
    if skip or stride != 1:
        return finish(Status.UNKNOWN, "only a sample of candidates was tested")
    return finish(Status.NOT_EXISTS, "every candidate lies in the radical")


# --------------------------------------------------------------------------
# points


@dataclass
class RepresentationPoint:
    tower: ExtensionTower
    generators: tuple
    matrices: dict                 # generator name -> rows of TowerElement
    witness: str | None = None
    witness_value: TowerElement | None = None
    seed: int = 0
    attempts: int = 0
    splits: int = 0
    assignment: dict = field(default_factory=dict)

    def matrix_list(self) -> list:
        return [self.matrices[g] for g in self.generators]

    def to_text(self) -> str:
        """Point file accepted by :func:`load_point`."""
        lines = [f"field: {self.tower.field.name}"]
        for i, nm in enumerate(self.tower.names()):
            lines.append(f"tower: {nm} = {self.tower.level_polynomial_text(i)}")
        for g in self.generators:
            rows = ", ".join("[" + ", ".join(str(x) for x in r) + "]" for r in self.matrices[g])
            lines.append(f"matrix {g}: [{rows}]")
        return "\n".join(lines) + "\n"

    def as_dict(self) -> dict:
        return {
            "field": self.tower.field.name,
            "tower": [{"name": nm, "polynomial": self.tower.level_polynomial_text(i)}
                      for i, nm in enumerate(self.tower.names())],
            "matrices": {g: [[str(x) for x in r] for r in self.matrices[g]]
                         for g in self.generators},
            "witness": self.witness,
            "witness_value": None if self.witness_value is None else str(self.witness_value),
            "seed": self.seed,
            "attempts": self.attempts,
            "splits": self.splits,
        }


def load_point(spec: PointSpec | str, pres: Presentation) -> RepresentationPoint:
    """Build tower and matrices from a parsed point file."""
    if isinstance(spec, str):
        spec = parse_point(spec, pres.field)
    if spec.field != pres.field:
        raise ParseError(f"point field {spec.field.name} differs from {pres.field.name}", 1, 1)
    tower = ExtensionTower(pres.field)
    for nm, f in spec.tower:
        k = len(tower.names())
        gens = tower.gens()
        coeffs: dict[int, TowerElement] = {}
        for w, c in f.terms.items():
            d = sum(1 for i in w if i >= k)
            term = tower.scalar(f.field.scalar(c))
            for i in w:
                if i < k:
                    term = term * gens[i]
            coeffs[d] = coeffs[d] + term if d in coeffs else term
        top = max(coeffs) if coeffs else 0
        try:
            tower = tower.add_level(nm, [coeffs.get(i, tower.zero()) for i in range(top + 1)])
        except ValueError as e:
            raise ParseError(f"tower {nm}: {e}", 1, 1) from None
    gens = tower.gens()

    def entry(f):
        acc = tower.zero()
        for w, c in f.terms.items():
            term = tower.scalar(f.field.scalar(c))
            for i in w:
                term = term * gens[i]
            acc = acc + term
        return acc

    missing = [g for g in pres.generators if g not in spec.matrices]
    if missing:
        raise ParseError(f"no matrix for generator {missing[0]!r}", 1, 1)
    extra = [g for g in spec.matrices if g not in pres.generators]
    if extra:
        line, col = spec.positions[extra[0]]
        raise ParseError(f"matrix for unknown generator {extra[0]!r}", line, col)
    mats = {}
    for g in pres.generators:
        rows = spec.matrices[g]
        if len(rows) != pres.dimension:
            line, col = spec.positions[g]
            raise ParseError(f"matrix {g!r} is {len(rows)}x{len(rows)}, expected "
                             f"{pres.dimension}x{pres.dimension}", line, col)
        mats[g] = [[entry(e) for e in r] for r in rows]
    return RepresentationPoint(tower, pres.generators, mats)


def point_from_matrices(pres: Presentation, mats: Sequence, tower: ExtensionTower | None = None
                        ) -> RepresentationPoint:
    """Wrap plain matrices (ints, Fractions or tower elements) as a point."""
    tower = tower or ExtensionTower(pres.field)
    conv = {g: [[tower.coerce(x) for x in r] for r in m] for g, m in zip(pres.generators, mats)}
    return RepresentationPoint(tower, pres.generators, conv)


def point_assignment(pt: RepresentationPoint, n: int) -> dict:
    """Variable assignment ``x_i_j_l -> entry`` of a point."""
    out = {}
    for l, g in enumerate(pt.generators, start=1):
        m = pt.matrices[g]
        for i in range(n):
            for j in range(n):
                out[f"x_{i + 1}_{j + 1}_{l}"] = m[i][j]
    return out


def _invertible(x) -> bool:
    try:
        if isinstance(x, TowerElement):
            x.inverse()
            return True
        return bool(x)
    except (SplitRequired, ZeroDivisionError):
        return False


def certify_by_point(y: Polynomial, rel: RelIdeal | Sequence[Polynomial], point) -> bool:
    """True iff every relation generator vanishes at ``point`` and ``y`` is
    invertible there (a sound certificate that ``y`` is outside the radical).

    ``point`` is a :class:`RepresentationPoint` or a variable assignment."""
    polys = rel.polys if isinstance(rel, RelIdeal) else list(rel)
    if isinstance(point, RepresentationPoint):
        n = len(point.matrices[point.generators[0]])
        point = point_assignment(point, n)
    for f in polys:
        if f.evaluate(point):
            return False
    return _invertible(y.evaluate(point))


# --------------------------------------------------------------------------
# construct


def _specialize_ring(polys: Sequence[Polynomial], values: dict, ctx: RingContext) -> list:
    """Substitute field values for some variables (by index) and move the
    result into ``ctx`` (the remaining variables, by name)."""
    src = polys[0].ctx
    fld = src.field
    keep = [(i, ctx.index(nm)) for i, nm in enumerate(src.names) if i not in values]
    out = []
    for f in polys:
        terms: dict = {}
        p = fld.char
        for m, c in f.terms.items():
            exps = src.unpack(m)
            v = c
            for i, val in values.items():
                if exps[i]:
                    v = v * val ** exps[i]
            if p:
                v %= p
            new = [0] * ctx.nvars
            for i, j in keep:
                new[j] = exps[i]
            k = ctx.pack(new)
            s = terms.get(k, fld.zero) + v
            terms[k] = s % p if p else s
        g = Polynomial(ctx, {k: v for k, v in terms.items() if v})
        if g:
            out.append(g)
    return out


def _modular_free_variables(polys: Sequence[Polynomial], budget) -> list[int]:
    """Independent variables of the ideal, read from a grevlex basis mod a
    large prime (a probe; the exact run double-checks).  The last variable
    is tried last."""
    ctx = polys[0].ctx
    if ctx.field.char:
        mctx = ctx
        mpolys = list(polys)
    else:
        mctx = RingContext(GF(PROBE_PRIME), ctx.names, grevlex)
        try:
            mpolys = [f.to_field(mctx) for f in polys]
        except ZeroDivisionError:
            return []
    gb = buchberger(mpolys, grevlex, budget)
    if gb.is_unit():
        return []
    prefer = list(range(ctx.nvars - 2, -1, -1)) + [ctx.nvars - 1]
    return independent_variables(gb.leading_monomials(), ctx.nvars, prefer)


def construct(pres: Presentation, witness: Polynomial | None = None, budget: Budget | None = None,
              *, seed: int = 0, retries: int = MAX_RETRIES, report: DecisionReport | None = None,
              system: GenericSystem | None = None, strategy: str = "trace",
              compiled=None, rational_attempts: int = 8) -> RepresentationPoint:
    """A point of the representation variety where ``witness`` is invertible.

    Solves ``Rel + {witness*z - 1}``: free variables (found by a modular
    probe, then confirmed by the exact lex basis) are set to random small
    values drawn from ``random.Random(seed)``, and the remaining zero
    dimensional system is solved by :func:`irrep.groebner.lift_point`.
    The first ``rational_attempts`` attempts look for a point with entries in
    the base field; after that the first point found over a tower is kept.
    """
    sysm = system or prepare(pres)
    if witness is None:
        if report is None:
            report = decide(pres, strategy, budget, seed=seed, system=sysm, compiled=compiled)
        if report.status is not Status.EXISTS:
            raise ConstructionFailed(f"decision is {report.status}")
        witness = report.witness_polynomial
    desc = report.witness_words if report is not None else None
    if witness.ctx != sysm.ctx:
        witness = witness.rename(sysm.ctx)
    big = rabinowitsch_ring(sysm.ctx)
    zname = big.names[-1]
    z = big.var(zname)
    ideal = [f.rename(big) for f in sysm.polys] + [witness.rename(big) * z - 1]
    rng = random.Random(seed)
    fld = sysm.ctx.field
    b = budget or Budget()

    def draw():
        if fld.char:
            return fld.convert(rng.randrange(fld.char))
        return fld.convert(rng.randint(-20, 20))

    try:
        free = _modular_free_variables(ideal, Budget(b.max_spairs, b.max_polys, b.seconds))
    except BudgetExceeded as e:
        raise ConstructionBudgetExceeded(e.reason) from None
    last_error = "no attempt made"
    fallback = None
    for attempt in range(1, retries + 1):
        values = {i: draw() for i in free}
        extra: list[int] = []
        while True:
            fixed = {**values, **{i: draw() for i in extra if i not in values}}
            values = fixed
            rest = [nm for i, nm in enumerate(big.names) if i not in values]
            rctx = register_ring(fld, rest, "grevlex")
            spec = _specialize_ring(ideal, values, rctx)
            if any(g.is_constant() for g in spec):
                last_error = "specialization is inconsistent"
                lifted = None
                break
            try:
                lifted = lift_point(spec, Budget(b.max_spairs, b.max_polys, b.seconds))
            except PositiveDimensional as e:
                more = [big.index(nm) for nm in e.free]
                if not more:
                    lifted = None
                    last_error = "no equations left"
                    break
                extra = more
                continue
            except Inconsistent as e:
                last_error = str(e) or "inconsistent"
                lifted = None
                break
            except BudgetExceeded as e:
                raise ConstructionBudgetExceeded(e.reason) from None
            break
        if lifted is None:
            continue
        tower = lifted.tower
        vals = {big.names[i]: tower.scalar(fld.scalar(v)) for i, v in values.items()}
        vals.update(lifted.assignment)
        kept = {nm: tower.coerce(vals[nm]) for nm in sysm.ctx.names}
        full = sysm.full_assignment(kept)
        n = sysm.n
        mats = {}
        for l, g in enumerate(pres.generators, start=1):
            mats[g] = [[tower.coerce(full[f"x_{i}_{j}_{l}"]) for j in range(1, n + 1)]
                       for i in range(1, n + 1)]
        wval = witness.evaluate(kept)
        pt = RepresentationPoint(tower, pres.generators, mats, desc, tower.coerce(wval), seed,
                                 attempt, lifted.splits, full)
        if not certify_by_point(witness, sysm.polys, kept) or not certify_by_point(
                sysm.ctx.one(), sysm.rel, full):
            last_error = "point failed certification"
            continue
        if tower.depth == 0:
            return pt
        fallback = fallback or pt
        if attempt >= rational_attempts:
            return fallback
    if fallback is not None:
        return fallback
    raise ConstructionFailed(f"no point after {retries} attempts ({last_error})")


# --------------------------------------------------------------------------
# verify


@dataclass
class VerificationReport:
    relations_hold: bool
    failure: dict | None
    span_rank: int
    dimension: int
    irreducible: bool
    witnesses: list = field(default_factory=list)     # (descriptor, value text)
    splits: int = 0

    def as_dict(self) -> dict:
        return {
            "relations_hold": self.relations_hold,
            "failure": self.failure,
            "span_rank": self.span_rank,
            "dimension": self.dimension,
            "irreducible": self.irreducible,
            "witnesses": [{"descriptor": d, "value": v} for d, v in self.witnesses],
            "splits": self.splits,
        }


_TRACE_STD = re.compile(r"^\s*(.*?)\s*\*\s*s(\d+)\s*\((.*)\)\s*$", re.S)


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return parts


def evaluate_witness(text: str, pres: Presentation, mats: Sequence):
    """Evaluate a witness descriptor such as ``tr[X * s4(Y, Z, X*Y, X*Z)]``,
    ``tr[X*Y - Y*X]`` or ``det[X*Y - Y*X]`` at concrete matrices."""
    m = re.fullmatch(r"\s*(tr|det)\s*\[(.*)\]\s*", text, re.S)
    if m is None:
        raise ParseError("witness must look like tr[...] or det[...]", 1, 1)
    kind, body = m.groups()

    def ev(src):
        f = parse_expression(src.strip(), pres.generators, pres.field)
        return evaluate_nc(f, mats)

    sm = _TRACE_STD.match(body)
    if sm is not None:
        head, k, args = sm.groups()
        args = _split_top(args)
        if len(args) != int(k):
            raise ParseError(f"s{k} needs {k} arguments, got {len(args)}", 1, 1)
        inner = mx.mat_mul(ev(head), standard_eval([ev(a) for a in args]))
    else:
        inner = ev(body)
    return mx.trace(inner) if kind == "tr" else mx.det(inner)


def verify(pres: Presentation, point: RepresentationPoint, witnesses: Sequence[str] = ()
           ) -> VerificationReport:
    n = pres.dimension
    mats = point.matrix_list()
    for g, m in zip(point.generators, mats):
        if len(m) != n or any(len(r) != n for r in m):
            raise ValueError(f"matrix {g} is not {n}x{n}")
    failure = None
    cache: dict = {}
    for r, f in enumerate(pres.relations):
        val = evaluate_nc(f, mats, word_cache=cache)
        for i in range(n):
            for j in range(n):
                if val[i][j]:
                    failure = {"relation": r + 1, "row": i + 1, "column": j + 1,
                               "value": str(val[i][j])}
                    break
            if failure:
                break
        if failure:
            break
    rank, _, splits = span_rank_detail(mats, length_bound(n))
    wit = [(w, str(evaluate_witness(w, pres, mats))) for w in witnesses]
    return VerificationReport(failure is None, failure, rank, n, rank == n * n, wit, splits)
