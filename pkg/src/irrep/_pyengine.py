"""Pure-Python reduction engine (reference implementation and fallback).

An engine owns a pool of monic polynomials addressed by integer handles and
an ordered *reducer list*.  Polynomials are lists of ``(key, coeff)`` sorted
by descending key (see :mod:`irrep._codec`).  Reduction always rewrites the
largest remaining term with the first reducer (in list order) whose leading
monomial divides it, so any engine following the same rule produces
identical remainders and identical step counts.
"""

from __future__ import annotations

from heapq import heappop, heappush, heapify

from ._codec import MonomialCodec


class PyEngine:
    """Reduction engine over GF(p) (``p > 0``) or QQ (``p == 0``)."""

    compiled = False

    def __init__(self, codec: MonomialCodec, p: int):
        self.codec = codec
        self.p = p
        self.polys: list[list[tuple[int, object]]] = []
        self.reducers: list[int] = []
        self._red_leads: list[tuple[int, int, list]] = []
        self._divcache: dict[int, int] = {}
        self.steps = 0

    # --- pool management
    def __len__(self):
        return len(self.polys)

    def add(self, terms) -> int:
        """Store ``terms`` (descending distinct keys, nonzero coefficients)
        made monic; returns the handle."""
        terms = list(terms)
        if not terms:
            raise ValueError("cannot store the zero polynomial")
        self.polys.append(self._monic(terms))
        return len(self.polys) - 1

    def _monic(self, terms):
        lc = terms[0][1]
        p = self.p
        if p:
            if lc != 1:
                inv = pow(lc, -1, p)
                terms = [(k, c * inv % p) for k, c in terms]
        elif lc != 1:
            terms = [(k, c / lc) for k, c in terms]
        return terms

    def terms(self, h: int):
        return list(self.polys[h])

    def lead(self, h: int) -> int:
        return self.polys[h][0][0]

    def nterms(self, h: int) -> int:
        return len(self.polys[h])

    def truncate(self, n: int) -> None:
        if any(r >= n for r in self.reducers):
            raise ValueError("cannot drop a polynomial still used as reducer")
        del self.polys[n:]

    def set_reducers(self, handles) -> None:
        handles = list(handles)
        self.reducers = handles
        self._red_leads = [(self.polys[h][0][0], h) for h in handles]
        self._divcache = {}

    # --- reduction
    def _find(self, k: int) -> int:
        cache = self._divcache
        r = cache.get(k)
        if r is not None:
            return r
        c = self.codec
        g, gp, gc = c.GUARD, c.GPLAIN, c.GCOMP
        r = -1
        if gp and gc:
            for lk, h in self._red_leads:
                if (((k | g) - lk) & gp) == gp and (((lk | g) - k) & gc) == gc:
                    r = h
                    break
        elif gc:
            for lk, h in self._red_leads:
                if (((lk | g) - k) & gc) == gc:
                    r = h
                    break
        else:
            for lk, h in self._red_leads:
                if (((k | g) - lk) & gp) == gp:
                    r = h
                    break
        cache[k] = r
        return r

    def _reduce(self, acc: dict) -> list:
        """Fully reduce the polynomial held in ``acc`` (key -> coeff)."""
        p = self.p
        ovf = self.codec.OVF
        polys = self.polys
        find = self._find
        heap = [-k for k in acc]
        heapify(heap)
        rem = []
        steps = 0
        get = acc.get
        while heap:
            k = -heappop(heap)
            c = acc.pop(k, None)
            if c is None:
                continue
            r = find(k)
            if r < 0:
                rem.append((k, c))
                continue
            steps += 1
            g = polys[r]
            shift = k - g[0][0]
            if p:
                q = p - c
                for gk, gc in g[1:]:
                    nk = gk + shift
                    old = get(nk)
                    if old is None:
                        if nk & ovf:
                            raise OverflowError("exponent overflow during reduction")
                        acc[nk] = q * gc % p
                        heappush(heap, -nk)
                    else:
                        v = (old + q * gc) % p
                        if v:
                            acc[nk] = v
                        else:
                            del acc[nk]
            else:
                for gk, gc in g[1:]:
                    nk = gk + shift
                    old = get(nk)
                    if old is None:
                        if nk & ovf:
                            raise OverflowError("exponent overflow during reduction")
                        acc[nk] = -c * gc
                        heappush(heap, -nk)
                    else:
                        v = old - c * gc
                        if v:
                            acc[nk] = v
                        else:
                            del acc[nk]
        self.steps += steps
        return rem

    def spoly_reduce(self, i: int, j: int, lcm: int) -> int:
        """Fully reduce S(i, j) by the reducers; store it (monic) and return
        its handle, or -1 when it reduces to zero."""
        p = self.p
        ovf = self.codec.OVF
        fi, fj = self.polys[i], self.polys[j]
        si = lcm - fi[0][0]
        sj = lcm - fj[0][0]
        acc: dict = {}
        for k, c in fi[1:]:
            nk = k + si
            if nk & ovf:
                raise OverflowError("exponent overflow in S-polynomial")
            acc[nk] = c
        for k, c in fj[1:]:
            nk = k + sj
            if nk & ovf:
                raise OverflowError("exponent overflow in S-polynomial")
            old = acc.get(nk)
            if old is None:
                acc[nk] = (p - c) if p else -c
            else:
                v = (old - c) % p if p else old - c
                if v:
                    acc[nk] = v
                else:
                    del acc[nk]
        rem = self._reduce(acc)
        if not rem:
            return -1
        self.polys.append(self._monic(rem))
        return len(self.polys) - 1

    def reduce(self, h: int) -> int:
        """Normal form of stored polynomial ``h``; new handle or -1."""
        rem = self._reduce(dict(self.polys[h]))
        if not rem:
            return -1
        self.polys.append(self._monic(rem))
        return len(self.polys) - 1

    def normal_form(self, terms) -> list:
        """Normal form of an arbitrary (not necessarily monic) term list."""
        return self._reduce(dict(terms))

