import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from irrep import matrices as mx
from irrep.freealg import (NcPolynomial, Presentation, evaluate_nc, format_nc, nc_add, nc_mul,
                           standard_eval, standard_polynomial)
from irrep.parser import ParseError, parse_expression, parse_presentation
from irrep.polyring import GF, QQ

XY = ("X", "Y")
P = 101


def words(f):
    return {w: c for w, c in f.terms.items()}


def test_parse_square_of_commutator():
    f = parse_expression("(X*Y - Y*X)^2", XY)
    assert words(f) == {(0, 1, 0, 1): 1, (0, 1, 1, 0): -1, (1, 0, 0, 1): -1, (1, 0, 1, 0): 1}
    assert all(len(w) == 4 for w in f.terms)


def test_parse_misc():
    assert words(parse_expression("X^0", XY)) == {(): 1}
    assert words(parse_expression("3/4*X - -Y", XY)) == {(0,): QQ.convert("3/4"), (1,): 1}
    assert parse_expression("X - Y - X", XY) == -parse_expression("Y", XY)
    assert parse_expression("2*X^2*Y", XY) == parse_expression("2*(X*X)*Y", XY)


@pytest.mark.parametrize("text,line,col", [
    ("X*Q", 1, 3),
    ("(X + Y", 1, 1),
    ("X^Y", 1, 3),
    ("X $ Y", 1, 3),
])
def test_parse_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as e:
        parse_expression(text, XY)
    assert (e.value.line, e.value.column) == (line, col)


def test_presentation_errors_report_line():
    text = "field: QQ\ndimension: 2\ngenerators: X Y\nrelation: X*Q\n"
    with pytest.raises(ParseError) as e:
        parse_presentation(text)
    assert e.value.line == 4 and "Q" in str(e.value)
    with pytest.raises(ParseError):
        parse_presentation("field: QQ\ndimension: 2\ngenerators: X\nhint: omit Y\n")
    with pytest.raises(ParseError):
        parse_presentation("field: QQ\ndimension: 0\ngenerators: X\n")


def test_nc_products():
    x, y = NcPolynomial.gen(XY, "X"), NcPolynomial.gen(XY, "Y")
    assert words(nc_mul(x, y)) == {(0, 1): 1}
    assert nc_mul(x, y) != nc_mul(y, x)
    assert words(nc_mul(nc_add(x, y), x - y)) == {(0, 0): 1, (0, 1): -1, (1, 0): 1, (1, 1): -1}
    one = NcPolynomial.constant(XY, 1)
    f = x * y - 3 * y
    assert f * one == f and one * f == f
    with pytest.raises(ValueError):
        nc_mul(x, NcPolynomial.gen(("X", "Z"), "X"))


def test_standard_polynomial_examples():
    s2 = standard_polynomial(2)
    assert words(s2) == {(0, 1): 1, (1, 0): -1}
    assert words(standard_polynomial(1)) == {(0,): 1}
    s4 = standard_polynomial(4)
    assert len(s4) == 24
    assert sorted(s4.terms.values()).count(1) == 12
    with pytest.raises(ValueError):
        standard_polynomial(0)


def unit(n, i, j, p=P):
    m = [[0] * n for _ in range(n)]
    m[i][j] = 1
    return m


def test_evaluate_nc_examples():
    f = parse_expression("X*Y - Y*X", XY)
    assert evaluate_nc(f, [unit(2, 0, 1), unit(2, 1, 0)], P) == [[1, 0], [0, P - 1]]
    g = [[2, 3], [5, 7]]
    assert evaluate_nc(parse_expression("X", XY), [g, unit(2, 0, 0)]) == g
    rng = random.Random(4)
    mats = [[[rng.randrange(P) for _ in range(2)] for _ in range(2)] for _ in range(4)]
    assert mx.is_zero_matrix(evaluate_nc(standard_polynomial(4, GF(P)), mats, P))
    with pytest.raises(ValueError):
        evaluate_nc(f, [g], P)


def rand_mats(rng, k, n, p=P):
    return [[[rng.randrange(p) for _ in range(n)] for _ in range(n)] for _ in range(k)]


@given(st.integers(0, 2 ** 32), st.integers(2, 5), st.integers(1, 3))
def test_standard_eval_matches_expansion(seed, m, n):
    rng = random.Random(seed)
    mats = rand_mats(rng, m, n)
    assert standard_eval(mats, P) == evaluate_nc(standard_polynomial(m, GF(P)), mats, P)


@given(st.integers(0, 2 ** 32), st.integers(2, 5))
def test_standard_polynomial_alternating(seed, m):
    rng = random.Random(seed)
    mats = rand_mats(rng, m, 2)
    i, j = rng.sample(range(m), 2)
    dup = list(mats)
    dup[j] = dup[i]
    assert mx.is_zero_matrix(standard_eval(dup, P))
    swapped = list(mats)
    swapped[i], swapped[j] = swapped[j], swapped[i]
    assert standard_eval(swapped, P) == mx.mat_neg(standard_eval(mats, P), P)


@given(st.integers(0, 2 ** 32), st.integers(1, 4))
def test_standard_polynomial_multilinear(seed, m):
    rng = random.Random(seed)
    mats = rand_mats(rng, m, 3)
    extra = rand_mats(rng, 1, 3)[0]
    a, b = rng.randrange(P), rng.randrange(P)
    slot = rng.randrange(m)
    combo = list(mats)
    combo[slot] = mx.mat_add(mx.mat_scale(a, mats[slot], P), mx.mat_scale(b, extra, P), P)
    other = list(mats)
    other[slot] = extra
    lhs = standard_eval(combo, P)
    rhs = mx.mat_add(mx.mat_scale(a, standard_eval(mats, P), P),
                     mx.mat_scale(b, standard_eval(other, P), P), P)
    assert lhs == rhs


@pytest.mark.parametrize("m", [1, 2, 3])
def test_amitsur_levitzky(m):
    rng = random.Random(100 + m)
    for _ in range(500):
        assert mx.is_zero_matrix(standard_eval(rand_mats(rng, 2 * m, m), P))


def test_s2_does_not_vanish_on_2x2():
    assert not mx.is_zero_matrix(standard_eval([unit(2, 0, 1), unit(2, 1, 0)], P))


gens3 = ("A", "B", "C")
nc_terms = st.dictionaries(st.lists(st.integers(0, 2), max_size=4).map(tuple),
                           st.builds(Fraction, st.integers(1, 99) | st.integers(-99, -1), st.integers(1, 7)),
                           max_size=5)


@given(nc_terms)
def test_print_parse_round_trip(terms):
    f = NcPolynomial(gens3, QQ, {w: QQ.convert(c) for w, c in terms.items()})
    assert parse_expression(format_nc(f), gens3) == f


def test_presentation_round_trip():
    text = ("field: GF(7)\ndimension: 3\ngenerators: a b X Y\nrelation: X^2 - a\n"
            "relation: 1/3*X*Y + 2\nhint: alternating X Y\nhint: omit a\nhint: triangular X\n")
    pres = parse_presentation(text)
    again = parse_presentation(pres.to_text())
    assert again.to_text() == pres.to_text()
    assert again.relations == pres.relations and again.hints == pres.hints
    assert isinstance(pres, Presentation) and pres.field == GF(7)
