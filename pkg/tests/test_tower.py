from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from irrep.polyring import GF, QQ
from irrep.tower import (ExtensionTower, SplitRequired, gfp_roots, is_squarefree,
                         rational_roots, squarefree_part)


def sqrt2():
    base = ExtensionTower(QQ)
    return base.add_level("t1", [base.scalar(-2), base.zero(), base.one()])


def test_quadratic_level_arithmetic():
    T = sqrt2()
    t = T.gen(0)
    assert t * t == T.scalar(2)
    inv = (t + 1).inverse()
    assert inv * (t + 1) == T.one()
    assert inv == t - 1           # 1/(1+sqrt2) = sqrt2 - 1


def test_two_levels():
    T = sqrt2()
    t1 = T.gen(0)
    # t2^2 = t1  (a fourth root of 2)
    T2 = T.add_level("t2", [-t1, T.zero(), T.one()])
    t1, t2 = T2.gen(0), T2.gen(1)
    assert t2 ** 4 == T2.scalar(2)
    assert (t2 + t1).inverse() * (t2 + t1) == T2.one()


def test_non_squarefree_level_rejected():
    base = ExtensionTower(QQ)
    with pytest.raises(ValueError):
        base.add_level("t1", [base.one(), base.scalar(2), base.one()])  # (t+1)^2


def test_zero_divisor_splits():
    base = ExtensionTower(QQ)
    T = base.add_level("t1", [base.scalar(-1), base.zero(), base.one()])  # t^2 - 1
    t = T.gen(0)
    with pytest.raises(SplitRequired) as e:
        (t - 1).inverse()
    S = T.split(e.value)
    assert S.degrees() == [1]
    u = S.project(t)
    assert u in (S.scalar(1), S.scalar(-1))
    # after following the branch, t - 1 is either zero or invertible
    v = S.project(t - 1)
    assert not v or v.inverse() * v == S.one()


def test_root_finders():
    assert sorted(rational_roots([Fraction(-6), Fraction(1), Fraction(1)])) == [-3, 2]
    assert rational_roots([Fraction(-2), Fraction(0), Fraction(1)]) == []
    assert sorted(gfp_roots([1, 0, 1], 5)) == [2, 3]


rat = st.builds(Fraction, st.integers(-49, 49), st.integers(1, 9))


@given(st.lists(rat, min_size=2, max_size=5))
def test_squarefree_part_is_squarefree(coeffs):
    base = ExtensionTower(QQ)
    a = [base.scalar(c) for c in coeffs]
    while a and not a[-1]:
        a.pop()
    if len(a) < 2:
        return
    prod = [base.zero()] * (2 * len(a) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(a):
            prod[i + j] = prod[i + j] + x * y
    assert is_squarefree(squarefree_part(prod))
    assert not is_squarefree(prod)


@given(rat, rat, rat)
def test_field_laws_in_tower(a, b, c):
    T = sqrt2()
    t = T.gen(0)
    x, y, z = a + b * t, b - c * t, c + a * t
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    if x:
        assert x * x.inverse() == T.one()


def test_prime_field_tower():
    base = ExtensionTower(GF(7))
    T = base.add_level("t1", [base.one(), base.zero(), base.one()])  # t^2 + 1 irreducible mod 7
    t = T.gen(0)
    assert t * t == T.scalar(-1)
    assert (t + 3).inverse() * (t + 3) == T.one()
