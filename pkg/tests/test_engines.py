import os
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from irrep import kernels
from irrep.groebner import Budget, BudgetExceeded, buchberger, normal_form
from irrep.polyring import GF, MonomialOrder, register_ring

pytestmark = pytest.mark.skipif(not kernels.HAVE_COMPILED, reason="compiled engine not built")

term = st.tuples(st.integers(0, 10 ** 6),
                 st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2),
                           st.integers(0, 1)))
poly = st.lists(term, min_size=1, max_size=4)


@given(st.lists(poly, min_size=1, max_size=4), poly, st.sampled_from([3, 101, 32003, 2 ** 31 - 1]),
       st.sampled_from(["lex", "grevlex", "block"]))
def test_compiled_matches_pure(gen_terms, f_terms, p, kind):
    order = MonomialOrder.block(["a", "b"], "grevlex", "lex") if kind == "block" \
        else MonomialOrder(kind)
    ctx = register_ring(GF(p), ["a", "b", "c", "d"], order)
    gens = [g for g in (ctx.from_terms(t) for t in gen_terms) if g]
    f = ctx.from_terms(f_terms)
    if not gens:
        return
    out = []
    for compiled in (True, False):
        try:
            gb = buchberger(gens, ctx.order, Budget(max_spairs=40), compiled=compiled)
        except BudgetExceeded as e:
            out.append(("budget", e.stats.spairs))
            continue
        out.append(([g.terms for g in gb], gb.stats.spairs, gb.stats.reduction_steps,
                    gb.stats.zero_reductions, normal_form(f, gens, compiled=compiled).terms,
                    normal_form(f, list(gb), compiled=compiled).terms))
    assert out[0] == out[1]


@given(st.lists(poly, min_size=1, max_size=3), st.lists(poly, min_size=1, max_size=3))
def test_encoded_products_match_normal_form(gen_terms, fs):
    ctx = register_ring(GF(32003), ["a", "b", "c", "d"], MonomialOrder("grevlex"))
    gens = [g for g in (ctx.from_terms(t) for t in gen_terms) if g]
    if not gens:
        return
    try:
        gb = buchberger(gens, ctx.order, Budget(max_spairs=40))
    except BudgetExceeded:
        return
    enc = gb.encoded()
    polys = [ctx.from_terms(t) for t in fs]
    acc = {}
    expected = ctx.zero()
    for f in polys:
        enc.mul_add(acc, enc.encode(f), enc.encode(f))
        expected = expected + f * f
    assert enc.decode(enc.reduce(acc)) == gb.normal_form(expected)


def test_environment_forces_pure_engine():
    code = "from irrep import kernels; print(kernels.HAVE_COMPILED)"
    env = dict(os.environ, IRREP_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True)
    assert out.stdout.strip() == "False"


def test_large_modulus_uses_pure_engine():
    from irrep._codec import MonomialCodec
    from irrep.polyring import grevlex
    codec = MonomialCodec(2, grevlex)
    assert kernels.make_engine(codec, 32003).compiled
    assert not getattr(kernels.make_engine(codec, (1 << 61) - 1), "compiled", False)
    assert not getattr(kernels.make_engine(codec, 0), "compiled", False)


def test_seeded_systems_agree():
    import random
    from irrep.polyring import grevlex, lex
    rng = random.Random(1)
    for _ in range(40):
        nv = rng.randint(2, 4)
        p = rng.choice([5, 7, 32003])
        ctx = register_ring(GF(p), [f"v{i}" for i in range(nv)], rng.choice([grevlex, lex]))

        def rp(d, t):
            f = ctx.zero()
            for _ in range(t):
                m = ctx.one()
                for _ in range(rng.randint(0, d)):
                    m = m * ctx.var(rng.randrange(nv))
                f = f + m * rng.randrange(p)
            return f

        gens = [g for g in (rp(3, 4) for _ in range(rng.randint(1, 3))) if g]
        h = rp(5, 8)
        if not gens:
            continue
        res = []
        for compiled in (True, False):
            gb = buchberger(gens, ctx.order, compiled=compiled)
            res.append(([g.terms for g in gb], gb.stats.reduction_steps,
                        normal_form(h, list(gb), compiled=compiled).terms,
                        normal_form(h, gens, compiled=compiled).terms))
        assert res[0] == res[1]
