import os
import random
from fractions import Fraction

import pytest

from irrep import matrices as mx
from irrep.genmat import rel_ideal, span_rank
from irrep.groebner import Membership, radical_membership
from irrep.parser import parse_presentation
from irrep.pipeline import (Status, certify_by_point, construct, decide, load_point,
                            point_from_matrices, prepare, verify)

from conftest import DATA, read

CORPUS = sorted((DATA / "corpus").glob("*.pres"))

# Hand-derived verdicts.  NotExists: a single matrix or a commuting pair
# generates a commutative algebra of dimension < 4; a square-zero commutator
# is nilpotent, so det(XY - YX) = 0 and the pair is reducible; tr(XY - YX) = 0
# rules out XY - YX = I in characteristic 0.  Exists: each has an explicit
# irreducible point (split quaternions by hand, the others via construct).
EXPECTED = {
    "anticommuting_roots": Status.EXISTS,
    "commuting_pair": Status.NOT_EXISTS,
    "squared_commutators": Status.EXISTS,
    "free_pair": Status.EXISTS,
    "hamilton_quaternions": Status.EXISTS,
    "idempotent_and_involution": Status.EXISTS,
    "scalar_involution": Status.EXISTS,
    "single_generator": Status.NOT_EXISTS,
    "split_quaternions": Status.EXISTS,
    "split_quaternions_gf7": Status.EXISTS,
    "square_zero_commutator": Status.NOT_EXISTS,
    "square_zero_pair": Status.EXISTS,
    "weyl": Status.NOT_EXISTS,
}


def corpus(name):
    return parse_presentation((DATA / "corpus" / f"{name}.pres").read_text())


def pres(gens, rels=(), n=2, field="QQ"):
    text = f"field: {field}\ndimension: {n}\ngenerators: {' '.join(gens)}\n"
    return parse_presentation(text + "".join(f"relation: {r}\n" for r in rels))


SQC2 = parse_presentation(read("sqcomm2.pres"))
SQC3 = parse_presentation(read("sqcomm3.pres"))
WITNESS2 = "tr[X * s2(Y,Z)]"


def test_corpus_is_complete():
    assert {p.stem for p in CORPUS} == set(EXPECTED)


def test_decide_squared_commutators():
    rep = decide(SQC2)
    assert rep.status is Status.EXISTS
    assert rep.witness == "tr[M2 * s2(M3,M4)]" and rep.witness_words == WITNESS2
    assert rep.candidates[-1].verdict == "No"


def test_decide_commuting_pair_commutator():
    rep = decide(pres("XY", ["X*Y - Y*X"]), "commutator")
    assert rep.status is Status.NOT_EXISTS
    # det(XY - YX) lies in the ideal of the entries of XY - YX, so it
    # reduces to zero modulo the relation basis and is never tested
    assert rep.counts["zero"] == 1 and not rep.candidates


def test_decide_n1():
    assert decide(pres("X", ["X^2 - 1"], n=1)).status is Status.EXISTS
    assert decide(pres("X", ["X^2 - 1", "X - 2"], n=1)).status is Status.NOT_EXISTS


def test_report_invariants():
    rep = decide(corpus("square_zero_commutator"))
    assert rep.status is Status.NOT_EXISTS
    assert all(c.verdict == "Yes" for c in rep.candidates)
    assert rep.counts["tested"] == len(rep.candidates) == rep.counts["in_radical"]
    assert rep.counts["zero"] + rep.counts["tested"] == rep.counts["distinct"]
    rep = decide(corpus("weyl"))
    assert rep.status is Status.NOT_EXISTS and rep.reason == "no representations of this dimension"
    rep = decide(corpus("free_pair"))
    assert rep.witness and rep.witness_polynomial is not None
    assert [c.verdict for c in rep.candidates][-1] == "No"


def test_construct_split_quaternions_rational():
    p = corpus("split_quaternions")
    pt = construct(p)
    assert not pt.tower.names()
    rep = verify(p, pt)
    assert rep.relations_hold and rep.irreducible


def test_construct_n1():
    p = pres("X", ["X^2 - 1"], n=1)
    pt = construct(p)
    assert str(pt.matrices["X"][0][0]) in ("1", "-1")


def test_hand_point_split_quaternions():
    p = corpus("split_quaternions")
    pt = point_from_matrices(p, [[[0, 1], [-1, 0]], [[1, 0], [0, -1]]])
    rep = verify(p, pt, ["det[X*Y - Y*X]"])
    assert rep.relations_hold and rep.irreducible and rep.witnesses[0][1] == "-4"


def test_verify_squared_commutators():
    pt = load_point(read("sqcomm2.point"), SQC2)
    rep = verify(SQC2, pt, [WITNESS2, "tr[X*(Y*Z - Z*Y)]"])
    assert rep.relations_hold and rep.span_rank == 4 and rep.irreducible
    assert [v for _, v in rep.witnesses] == ["16", "16"]


def test_verify_squared_commutators_dim3():
    # The reference 3x3 matrices do not satisfy the relations: an
    # independent sympy evaluation gives 128 at entry (1, 3) of
    # (XY - YX)^2.  Rank and witness value still match.
    pt = load_point(read("sqcomm3.point"), SQC3)
    rep = verify(SQC3, pt, ["tr[X * s4(Y, Z, X*Y, X*Z)]"])
    assert rep.failure == {"relation": 1, "row": 1, "column": 3, "value": "128"}
    assert rep.span_rank == 9 and rep.irreducible
    assert rep.witnesses[0][1] == "8192"


def test_verify_triangular_pair():
    p = pres("XY")
    rep = verify(p, point_from_matrices(p, [[[1, 2], [0, 3]], [[4, 5], [0, 6]]]))
    assert rep.relations_hold and rep.span_rank <= 3 and not rep.irreducible


def test_verify_failure_and_dimension():
    p = corpus("split_quaternions")
    rep = verify(p, point_from_matrices(p, [[[1, 0], [0, 1]], [[1, 0], [0, -1]]]))
    assert not rep.relations_hold and rep.failure["relation"] == 1
    with pytest.raises(ValueError):
        verify(p, point_from_matrices(p, [[[1]], [[1]]]))


def test_certify_by_point_examples():
    rel = rel_ideal(SQC2)
    pt = load_point(read("sqcomm2.point"), SQC2)
    sysm = prepare(SQC2)
    rep = decide(SQC2, system=sysm)
    assert certify_by_point(rep.witness_polynomial, rel, pt)
    bad = point_from_matrices(SQC2, [[[0, 1], [0, 0]], [[0, 0], [1, 0]], [[1, 0], [0, 1]]])
    assert not certify_by_point(rel.ctx.one(), rel, bad)
    assert not certify_by_point(rel.polys[0], rel, pt)


def test_certificate_implies_groebner_no():
    p = pres("XY", field="GF(101)")
    rel = rel_ideal(p)
    ctx = rel.ctx
    rng = random.Random(5)
    names = ctx.names
    for _ in range(20):
        y = ctx.zero()
        for _ in range(3):
            term = ctx.constant(rng.randrange(1, 101))
            for _ in range(rng.randrange(3)):
                term = term * ctx.var(rng.choice(names))
            y = y + term
        point = {nm: rng.randrange(101) for nm in names}
        if certify_by_point(y, rel, point):
            assert radical_membership(y, rel.polys) is Membership.NO


@pytest.mark.parametrize("path", CORPUS, ids=lambda p: p.stem)
def test_soundness_coupling(path):
    p = parse_presentation(path.read_text())
    sysm = prepare(p)
    rep = decide(p, system=sysm, seed=3)
    assert rep.status is EXPECTED[path.stem]
    if rep.status is not Status.EXISTS:
        return
    pt = construct(p, report=rep, system=sysm, seed=3)
    out = verify(p, pt)
    assert out.relations_hold and out.irreducible
    assert certify_by_point(rep.witness_polynomial, sysm.rel, pt)


TWO_GENERATOR = [p for p in CORPUS if parse_presentation(p.read_text()).dimension == 2
                 and len(parse_presentation(p.read_text()).generators) == 2]


@pytest.mark.parametrize("path", TWO_GENERATOR, ids=lambda p: p.stem)
def test_trace_and_commutator_agree(path):
    p = parse_presentation(path.read_text())
    assert decide(p, "trace").status is decide(p, "commutator").status


def _random_points(kind, rng, prime):
    def rnd():
        return [[rng.randrange(prime) for _ in range(2)] for _ in range(2)]
    out = []
    while len(out) < 50:
        a = rnd()
        if kind == "single":
            out.append([a])
            continue
        if len(out) % 2:
            c0, c1 = rng.randrange(prime), rng.randrange(prime)
            b = [[(c0 * a[i][j] + c1 * (i == j)) % prime for j in range(2)] for i in range(2)]
        else:
            a[1][0] = 0
            b = rnd()
            b[1][0] = 0
        out.append([a, b])
    return out


@pytest.mark.parametrize("name,kind", [("commuting_pair", "pair"),
                                       ("square_zero_commutator", "pair"),
                                       ("single_generator", "single")])
def test_not_exists_stability(name, kind):
    prime = 32003
    p = corpus(name).with_field(__import__("irrep.polyring", fromlist=["GF"]).GF(prime))
    assert decide(p).status is Status.NOT_EXISTS
    rng = random.Random(9)
    for mats in _random_points(kind, rng, prime):
        if kind == "pair" and name == "commuting_pair":
            a, b = mats
            if mx.mat_mul(a, b, prime) != mx.mat_mul(b, a, prime):
                continue
        pt = point_from_matrices(p, mats)
        rep = verify(p, pt)
        assert rep.relations_hold
        assert span_rank(mats, 3, prime) < 4 and not rep.irreducible


def test_determinism():
    for name in ("free_pair", "square_zero_commutator", "hamilton_quaternions"):
        p = corpus(name)
        a, b = decide(p, seed=4), decide(p, seed=4)
        assert a.as_dict(timings=False) == b.as_dict(timings=False)
        if a.status is Status.EXISTS:
            assert construct(p, report=a, seed=4).to_text() == construct(p, report=b, seed=4).to_text()


def test_budget_unknown():
    from irrep.groebner import Budget
    rep = decide(SQC2, budget=Budget(max_spairs=1))
    assert rep.status is Status.UNKNOWN
    rep = decide(SQC2, max_candidates=0)
    assert rep.status is Status.UNKNOWN


def test_workers_same_verdict():
    p = corpus("free_pair")
    one, two = decide(p), decide(p, workers=2)
    assert one.witness == two.witness and one.status is two.status


@pytest.mark.slow
@pytest.mark.skipif(not os.environ.get("IRREP_SLOW"), reason="hours of radical tests; set IRREP_SLOW=1")
def test_decide_central_roots_not_exists():
    p = parse_presentation(read("central_roots3.pres"))
    assert decide(p).status is Status.NOT_EXISTS
