import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from irrep import matrices as mx
from irrep.freealg import evaluate_nc
from irrep.genmat import (CandidateStream, candidate_stream, generic_matrices, generic_ring,
                          length_bound, rel_ideal, span_rank, variable_names, word_set)
from irrep.parser import parse_presentation
from irrep.polyring import GF, QQ, evaluate, register_ring

from conftest import read

P = 32003


def pres(gens, rels=(), n=2, field="QQ", hints=()):
    text = f"field: {field}\ndimension: {n}\ngenerators: {' '.join(gens)}\n"
    text += "".join(f"relation: {r}\n" for r in rels)
    text += "".join(f"hint: {h}\n" for h in hints)
    return parse_presentation(text)


SQC2 = parse_presentation(read("sqcomm2.pres"))
SQC2_POINT = [[[2, 0], [0, -2]], [[2, 2], [0, -2]], [[1, 0], [2, 2]]]


def test_generic_matrices():
    ctx = generic_ring(QQ, 2, 1)
    (g,) = generic_matrices(ctx, 2, 1)
    assert [[str(x) for x in row] for row in g.rows] == [["x_1_1_1", "x_1_2_1"],
                                                         ["x_2_1_1", "x_2_2_1"]]
    mats = generic_matrices(generic_ring(QQ, 2, 3), 2, 3)
    assert len({x for m in mats for row in m.rows for x in row}) == 12
    assert len(generic_matrices(generic_ring(QQ, 1, 2), 1, 2)) == 2
    with pytest.raises(KeyError):
        generic_matrices(register_ring(QQ, ["x_1_1_1"]), 1, 2)


def test_variable_order():
    assert variable_names(2, 2)[:5] == ["x_1_1_1", "x_1_2_1", "x_2_1_1", "x_2_2_1", "x_1_1_2"]


def test_rel_ideal_examples():
    assert not rel_ideal(pres("XY", ["X*Y - Y*X"], n=1)).polys
    rel = rel_ideal(pres("X", ["X^2 - 1"]))
    ctx = rel.ctx
    a, b, c, d = (ctx.var(nm) for nm in ("x_1_1_1", "x_1_2_1", "x_2_1_1", "x_2_2_1"))
    assert rel.polys == [a * a + b * c - 1, a * b + b * d, c * a + d * c, c * b + d * d - 1]
    rsq = rel_ideal(SQC2)
    assert len(rsq.provenance) == 12
    assert all(f.degree() == 4 for f in rsq.polys)
    # C^2 = -det(C) I for traceless C: 3 distinct nonzero polynomials
    assert len(rsq.polys) == 3


def test_rel_ideal_provenance_round_trip():
    p = pres("XYZ", ["X*Y*Z - Z*Y*X + 2", "X^2 - Y", "(X*Y - Y*X)^2"], n=2)
    rel = rel_ideal(p)
    assert len(rel.provenance) == len(p.relations) * 4
    mats = [g.rows for g in generic_matrices(rel.ctx, 2, 3)]
    for r, i, j, poly in rel.provenance:
        val = evaluate_nc(p.relations[r], mats)[i][j]
        assert (val if val else None) == poly


def test_length_bound():
    assert [length_bound(n) for n in range(1, 7)] == [0, 3, 8, 13, 18, 23]
    for n in range(3, 30):
        p = n * math.sqrt(2 * n * n / (n - 1) + 0.25) + n / 2 - 2
        assert length_bound(n) == math.ceil(p) - 1


def test_word_set_counts():
    assert len(word_set(SQC2, ch_prune=False)) == 40
    ws = word_set(SQC2)
    assert len(ws) == 22
    for w in ws.words:
        assert not any(w[i] == w[i + 1] for i in range(len(w) - 1))
    assert word_set(SQC2, n=1).words == [()]


def test_word_set_central_roots():
    ws = word_set(parse_presentation(read("central_roots3.pres")))
    labels = [ws.label(i) for i in range(len(ws))]
    assert len(ws) == 17 and ws.bound == 8
    expected = ["1", "X", "Y"]
    for k in range(2, 9):
        for start in ("X", "Y"):
            other = "Y" if start == "X" else "X"
            expected.append("*".join(start if t % 2 == 0 else other for t in range(k)))
    assert sorted(labels) == sorted(expected)


def test_word_set_omit():
    p = pres("aX", [], n=2, hints=["omit a"])
    assert all(0 not in w for w in word_set(p).words)


@given(st.integers(1, 4), st.integers(2, 3))
def test_no_cayley_hamilton_factor(s, n):
    gens = "ABCD"[:s]
    ws = word_set(pres(gens, n=n), n=n, bound=min(length_bound(n), 5))
    for w in ws.words:
        for i in range(len(w) - n + 1):
            assert len(set(w[i:i + n])) > 1
    assert ws.words[0] == ()


def test_commutator_candidate():
    p = pres("XY")
    stream = candidate_stream(word_set(p), 2, "commutator", field=QQ)
    cands = list(stream)
    assert len(cands) == 1
    c = cands[0]
    assert c.polynomial.degree() == 4 and len(c.polynomial.variables()) == 8
    assert c.words == "det[X*Y - Y*X]"
    with pytest.raises(ValueError):
        candidate_stream(word_set(SQC2), 2, "commutator")


def test_trace_counts_and_first_candidate():
    ws = word_set(SQC2)
    stream = candidate_stream(ws, 2, "trace", field=QQ)
    N = len(ws)
    assert stream.counts.raw == N * math.comb(N, 2)
    first = next(stream)
    assert first.words == "tr[X * s2(Y,Z)]"
    ctx = first.polynomial.ctx
    env = {variable_names(2, 3)[4 * l + 2 * i + j]: SQC2_POINT[l][i][j]
           for l in range(3) for i in range(2) for j in range(2)}
    assert evaluate(first.polynomial, env) == 16
    assert ctx.nvars == 12


def test_trace_candidates_degree_bound_and_nonzero():
    ws = word_set(SQC2)
    stream = candidate_stream(ws, 2, "trace", field=GF(P))
    for c, _ in zip(stream, range(60)):
        assert c.polynomial
        assert c.polynomial.degree() <= c.degree_bound <= 3 * ws.bound


def test_dedup_soundness():
    ws = word_set(SQC2)
    stream = CandidateStream(ws, 2, "trace", field=GF(P))
    rng = random.Random(7)
    checked = 0
    while checked < 100:
        idx = rng.sample(range(1, len(ws)), 3)
        m0, rest = idx[0], idx[1:]
        sign, kept = stream.canonical(m0, rest)
        if (m0, *rest) == kept:
            continue
        skipped = stream.trace_polynomial(m0, rest)
        retained = stream.trace_polynomial(kept[0], kept[1:])
        assert skipped == (retained if sign > 0 else -retained)
        checked += 1


def test_identity_and_repeated_sets_vanish():
    ws = word_set(SQC2)
    stream = CandidateStream(ws, 2, "trace", field=GF(P))
    assert not stream.trace_polynomial(0, (1, 2))
    assert not stream.trace_polynomial(1, (0, 2))
    assert not stream.trace_polynomial(1, (1, 2))


def test_span_rank_examples():
    e12, e21 = [[0, 1], [0, 0]], [[0, 0], [1, 0]]
    assert span_rank([e12, e21], 3) == 4
    for n in (1, 2, 3):
        ident = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
        assert span_rank([ident], 5) == 1
    assert span_rank([[[1, 0], [0, 2]], [[3, 0], [0, 5]]], 3) <= 2
    assert span_rank([[[1, 2], [0, 3]], [[0, 1], [0, 4]]], 3) <= 3


def rand_pair(rng, kind):
    def m():
        a = [[rng.randrange(P) for _ in range(2)] for _ in range(2)]
        if kind == "triangular":
            a[1][0] = 0
        return a
    if kind == "commuting":
        a = m()
        c0, c1 = rng.randrange(P), rng.randrange(P)
        return [a, mx.mat_add(mx.mat_scale(c0, a, P), mx.mat_scale(c1, mx.identity(2, 0, 1), P), P)]
    return [m(), m()]


def test_trace_criterion_matches_span_rank():
    p = pres("XY", field=f"GF({P})")
    ws = word_set(p)
    cands = [c.polynomial for c in candidate_stream(ws, 2, "trace", field=GF(P))]
    names = variable_names(2, 2)
    rng = random.Random(11)
    outcomes = set()
    for t in range(50):
        mats = rand_pair(rng, ("random", "triangular", "commuting")[t % 3])
        env = {names[4 * l + 2 * i + j]: mats[l][i][j]
               for l in range(2) for i in range(2) for j in range(2)}
        full = span_rank(mats, 3, P) == 4
        nonzero = any(evaluate(c, env) for c in cands)
        assert full == nonzero
        outcomes.add(full)
    assert outcomes == {True, False}


def test_commutator_matches_span_rank():
    rng = random.Random(12)
    outcomes = set()
    for t in range(240):
        a, b = rand_pair(rng, ("random", "triangular", "commuting", "random")[t % 4])
        c = mx.mat_sub(mx.mat_mul(a, b, P), mx.mat_mul(b, a, P), P)
        full = span_rank([a, b], 3, P) == 4
        assert (mx.det(c, P) % P != 0) == full
        outcomes.add(full)
    assert outcomes == {True, False}
