import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from irrep.groebner import (Budget, BudgetExceeded, Inconsistent, Membership, PositiveDimensional,
                            buchberger, elimination, ideal_membership, is_groebner,
                            lift_point, normal_form, radical_membership, radical_test)
from irrep.polyring import GF, QQ, MonomialOrder, evaluate, grevlex, lex, register_ring
from irrep.tower import ExtensionTower, is_squarefree


def ring(names="x y", field=QQ, order=lex):
    ctx = register_ring(field, names.split(), order)
    return (ctx, *ctx.gens())


# --------------------------------------------------------------------------
# examples


def test_normal_form_examples():
    ctx, x, y = ring()
    assert normal_form(x ** 2 * y, [x ** 2 - 1], lex) == y
    assert not normal_form(x ** 2 - 1, [x ** 2 - 1], lex)
    assert normal_form(x, [y], lex) == x


def test_buchberger_examples():
    ctx, x, y = ring()
    gb = buchberger([x ** 2 + y ** 2 - 1, x - y], lex)
    univariate = [g for g in gb if g.variables() == {1}]
    assert univariate == [(2 * y ** 2 - 1).monic()]
    assert list(buchberger([ctx.one()], lex)) == [ctx.one()]
    assert list(buchberger([x - y, y ** 2], lex)) == [y ** 2, x - y]


def test_membership_examples():
    ctx, x, y = ring()
    assert ideal_membership(x ** 2, [x - y, y ** 2], lex) is Membership.YES
    assert ideal_membership(x, [y], lex) is Membership.NO
    assert ideal_membership(ctx.one(), [x, x - 1], lex) is Membership.YES


def test_radical_examples():
    ctx, x, y = ring(order=grevlex)
    assert radical_membership(x, [x ** 2]) is Membership.YES
    assert radical_membership(x, [y]) is Membership.NO
    assert radical_membership(x + y, [x ** 2, y ** 2]) is Membership.YES
    assert radical_membership(x + y, [x ** 2, y ** 2]) is Membership.YES


def test_elimination_examples():
    ctx, x, y = ring()
    assert elimination([x - y ** 2, y - 1], ["x"]) == [x - 1]
    circle = [x ** 2 + y ** 2 - 1, x - y]
    assert elimination(circle, ["y"]) == [y ** 2 - ctx.constant(Fraction(1, 2))]
    full = elimination(circle, ["x", "y"])
    assert full == list(buchberger(circle, ctx.order))


def test_lift_point_examples():
    ctx, x = ring("x")
    pt = lift_point([x ** 2 - 2])
    assert pt.tower.depth == 1 and pt.assignment["x"] == pt.tower.gen(0)
    ctx, x, y = ring()
    pt = lift_point([x - 1, y - x])
    assert pt.tower.depth == 0
    assert pt.assignment["x"] == pt.tower.scalar(1) and pt.assignment["y"] == pt.tower.scalar(1)
    pt = lift_point([x ** 2 - 1, y - x])
    vx, vy = pt.assignment["x"], pt.assignment["y"]
    assert vx == vy and vx in (pt.tower.scalar(1), pt.tower.scalar(-1))


def test_lift_point_outcomes():
    ctx, x, y = ring()
    with pytest.raises(PositiveDimensional) as e:
        lift_point([x - y])
    assert e.value.free == ("y",)
    with pytest.raises(Inconsistent):
        lift_point([x, x - 1])


def test_budget_exhaustion_is_reported():
    ctx, x, y, z = ring("x y z", order=grevlex)
    gens = [x ** 2 * y - z ** 2 + 1, x * y ** 2 - x * z - 2, x * y * z - y + 3]
    with pytest.raises(BudgetExceeded) as e:
        buchberger(gens, grevlex, Budget(max_spairs=1))
    assert e.value.stats.spairs >= 1
    r = radical_test(x, gens, Budget(max_spairs=1))
    assert r.verdict is Membership.UNKNOWN
    with pytest.raises(ValueError):
        Budget(max_spairs=0)


def test_tower_splits_and_squarefree():
    ctx, x, y = ring()
    # x^2 - 3x + 2 = (x-1)(x-2) has rational roots; (x^2-2)(x^2-3) does not
    pt = lift_point([(x ** 2 - 2) * (x ** 2 - 3), y ** 2 - x])
    for _, mod in pt.tower.levels:
        assert len(mod) >= 2
    for g in [(x ** 2 - 2) * (x ** 2 - 3), y ** 2 - x]:
        assert not evaluate(g, pt.assignment)


# --------------------------------------------------------------------------
# properties

coef = st.integers(-3, 3)
term = st.tuples(coef, st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2)))
polys = st.lists(term, min_size=1, max_size=4)


@given(st.lists(polys, min_size=1, max_size=3), st.sampled_from(["lex", "grevlex"]),
       st.sampled_from([QQ, GF(7), GF(32003)]))
def test_buchberger_criterion(gen_terms, kind, field):
    ctx = register_ring(field, ["x", "y", "z"], MonomialOrder(kind))
    gens = [g for g in (ctx.from_terms(t) for t in gen_terms) if g]
    if not gens:
        return
    gb = buchberger(gens, ctx.order, Budget(max_spairs=400))
    assert is_groebner(list(gb), ctx.order)
    for g in gens:
        assert not gb.normal_form(g)
    lead = gb.leading_monomials()
    for i, g in enumerate(gb):
        c, _ = g.leading_term(ctx.order)
        assert c == 1
        for j, m in enumerate(lead):
            if i != j:
                for _, mono in g.term_list(ctx.order):
                    assert not all(a <= b for a, b in zip(m, mono.dense(ctx.nvars)))
    assert lead == sorted(lead, key=lambda e: ctx.sort_key(ctx.order)(ctx.pack(e)))


@given(polys, st.lists(polys, min_size=1, max_size=3))
def test_normal_form_idempotent(f_terms, gen_terms):
    ctx = register_ring(GF(11), ["x", "y", "z"], grevlex)
    f = ctx.from_terms(f_terms)
    basis = [g for g in (ctx.from_terms(t) for t in gen_terms) if g]
    if not basis:
        return
    r = normal_form(f, basis)
    assert normal_form(r, basis) == r


def _maximal(ctx, point):
    return [v - c for v, c in zip(ctx.gens(), point)]


def product_ideal(ctx, points):
    gens = [ctx.one()]
    for pt in points:
        gens = [g * h for g in gens for h in _maximal(ctx, pt)]
    return gens


def radical_oracle_check(nvars, degree, points, polys_iter):
    """Compare the Groebner verdict with "vanishes at every point"."""
    ctx = register_ring(GF(5), ["x", "y", "z"][:nvars], grevlex)
    gens = product_ideal(ctx, points)
    gb = buchberger(gens, grevlex)
    mons = [m for m in itertools.product(range(degree + 1), repeat=nvars) if sum(m) <= degree]
    basis = [ctx.from_terms([(1, m)]) for m in mons]
    checked = 0
    for coeffs in polys_iter(len(basis)):
        g = ctx.from_terms((c, m) for c, m in zip(coeffs, mons))
        expected = all(evaluate(g, dict(zip(ctx.names, p))) == 0 for p in points)
        got = radical_test(g, gens, start=gb).verdict
        assert got is (Membership.YES if expected else Membership.NO), (g, points)
        checked += 1
    return checked


def exhaustive(k):
    return itertools.product(range(5), repeat=k)


def sampled(count, seed):
    def gen(k):
        rng = random.Random(seed)
        for _ in range(count):
            yield [rng.randrange(5) for _ in range(k)]
    return gen


ORACLE_IDEALS = [
    (1, [(2,)]),
    (1, [(0,), (3,)]),
    (1, [(1,), (2,), (4,)]),
    (2, [(1, 2)]),
    (2, [(1, 2), (3, 3), (0, 4)]),
    (3, [(1, 0, 2), (4, 4, 1)]),
]


@pytest.mark.parametrize("nvars,points", ORACLE_IDEALS[:3])
def test_radical_oracle_univariate(nvars, points):
    assert radical_oracle_check(nvars, 2, points, exhaustive) == 125


def test_radical_oracle_without_start_basis():
    ctx = register_ring(GF(5), ["x", "y"], grevlex)
    pts = [(1, 2), (3, 3)]
    gens = product_ideal(ctx, pts)
    x, y = ctx.gens()
    for g in [x - 1, (x - 1) * (x - 3), (x - 1) * (y - 3), x + y - 3, x * y - 2 * y - 1 + x]:
        expected = all(evaluate(g, dict(zip("xy", p))) == 0 for p in pts)
        assert radical_membership(g, gens) is (Membership.YES if expected else Membership.NO)


lin = st.tuples(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))


@given(lin, lin, st.integers(2, 3))
def test_lift_point_sound(a, b, d):
    ctx, x, y = ring()
    f = x ** d + a[0] * x + a[1] * y + a[2]
    g = y ** 2 + b[0] * x + b[1] * y + b[2]
    pt = lift_point([f, g])
    for h in (f, g):
        assert not evaluate(h, pt.assignment)
    if pt.tower.depth:
        base = ExtensionTower(QQ)
        _, mod = pt.tower.levels[0]
        assert len(mod) >= 2 and is_squarefree([base.scalar(c) for c in mod])


@given(st.lists(st.tuples(st.integers(0, 6), st.integers(0, 6)), min_size=1, max_size=3,
                unique=True))
def test_elimination_matches_brute_force(points):
    ctx = register_ring(GF(7), ["x", "y"], lex)
    gens = product_ideal(ctx, points)
    elim = elimination(gens, ["y"])
    assert len(elim) == 1
    u = elim[0]
    roots = {v for v in range(7) if not evaluate(u, {"y": v})}
    brute = {(a, b) for a in range(7) for b in range(7)
             if all(not evaluate(g, {"x": a, "y": b}) for g in gens)}
    assert brute == set(points)
    assert roots == {b for _, b in brute}
