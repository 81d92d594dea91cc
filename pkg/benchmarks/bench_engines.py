"""Compare the compiled and pure-Python GF(p) engines.

    python3 benchmarks/bench_engines.py [--repeat N]

Each case runs once per engine; the best of ``--repeat`` runs is reported
along with a check that both engines produced the same result.
"""

import argparse
import itertools
import time
from pathlib import Path

from irrep.genmat import CandidateStream, word_set
from irrep.groebner import buchberger, radical_test
from irrep.kernels import GFpEngine
from irrep.parser import parse_presentation
from irrep.pipeline import decide, prepare
from irrep.polyring import GF, grevlex

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def rel_basis_roots(compiled):
    p = parse_presentation((DATA / "central_roots3.pres").read_text())
    sysm = prepare(p)
    gb = buchberger(sysm.polys, grevlex, ctx=sysm.ctx, compiled=compiled)
    return [str(f) for f in gb.polys]


def decide_sqcomm(compiled):
    p = parse_presentation((DATA / "sqcomm2.pres").read_text()).with_field(GF(32003))
    rep = decide(p, compiled=compiled)
    return rep.status, rep.witness, [c.verdict for c in rep.candidates]


def candidates_roots(compiled, count=20):
    p = parse_presentation((DATA / "central_roots3.pres").read_text())
    sysm = prepare(p)
    gb = buchberger(sysm.polys, grevlex, ctx=sysm.ctx, compiled=compiled)
    stream = CandidateStream(word_set(p), 3, "trace", mats=sysm.mats, ctx=sysm.ctx,
                             reduce=gb.encoded(), include_zero=True)
    return [str(radical_test(c.polynomial, sysm.polys, start=gb, compiled=compiled).verdict)
            for c in itertools.islice(stream, count)]


CASES = [("Rel basis, central roots, n = 3", rel_basis_roots),
         ("decide squared commutators, GF(32003)", decide_sqcomm),
         ("first 20 trace candidates, central roots", candidates_roots)]


def best_of(fn, compiled, repeat):
    times, result = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(compiled)
        times.append(time.perf_counter() - t0)
    return min(times), result


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=1)
    args = ap.parse_args()
    if GFpEngine is None:
        raise SystemExit("compiled engine not built; run pip install -e . first")
    print(f"{'case':40} {'compiled':>10} {'pure':>10} {'ratio':>7}  same")
    for name, fn in CASES:
        tc, rc = best_of(fn, True, args.repeat)
        tp, rp = best_of(fn, False, args.repeat)
        print(f"{name:40} {tc:9.2f}s {tp:9.2f}s {tp / tc:6.1f}x  {rc == rp}", flush=True)


if __name__ == "__main__":
    main()
