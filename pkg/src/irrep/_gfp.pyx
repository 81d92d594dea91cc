# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled GF(p) reduction engine.

Same contract as :class:`irrep._pyengine.PyEngine` (and the same results,
step for step): a pool of monic polynomials, an ordered reducer list, and
full reduction that always rewrites the largest remaining term with the
first reducer whose leading monomial divides it.  Monomials are the packed
keys of :mod:`irrep._codec` split into 64-bit words, most significant first.
Reductions run without the GIL.
"""

from libc.stdint cimport uint64_t, int64_t
from libc.stdlib cimport malloc, realloc, free
from libc.string cimport memcpy

cdef struct Poly:
    Py_ssize_t n
    Py_ssize_t cap
    uint64_t* m
    uint64_t* c


cdef int reserve(Poly* f, Py_ssize_t cap, Py_ssize_t W) noexcept nogil:
    cdef Py_ssize_t newcap
    cdef uint64_t* m
    cdef uint64_t* c
    if cap <= f.cap:
        return 0
    newcap = 2 * f.cap
    if newcap < cap:
        newcap = cap
    if newcap < 16:
        newcap = 16
    m = <uint64_t*> realloc(f.m, newcap * W * sizeof(uint64_t))
    if m == NULL:
        return -1
    f.m = m
    c = <uint64_t*> realloc(f.c, newcap * sizeof(uint64_t))
    if c == NULL:
        return -1
    f.c = c
    f.cap = newcap
    return 0


cdef inline int cmpmono(const uint64_t* a, const uint64_t* b, Py_ssize_t W) noexcept nogil:
    cdef Py_ssize_t i
    for i in range(W):
        if a[i] != b[i]:
            return 1 if a[i] > b[i] else -1
    return 0


cdef uint64_t modinv(uint64_t a, uint64_t p) noexcept nogil:
    cdef int64_t t = 0, newt = 1, q, tmp
    cdef int64_t r = <int64_t> p, newr = <int64_t> a
    while newr != 0:
        q = r // newr
        tmp = t - q * newt
        t = newt
        newt = tmp
        tmp = r - q * newr
        r = newr
        newr = tmp
    if t < 0:
        t += <int64_t> p
    return <uint64_t> t


cdef class GFpEngine:
    cdef readonly object codec
    cdef readonly uint64_t p
    cdef Py_ssize_t W
    cdef uint64_t* bias
    cdef uint64_t* guard
    cdef uint64_t* gplain
    cdef uint64_t* gcomp
    cdef uint64_t* ovf
    cdef bint has_plain
    cdef bint has_comp
    cdef Poly* pool
    cdef Py_ssize_t npool
    cdef Py_ssize_t poolcap
    cdef Py_ssize_t* red
    cdef Py_ssize_t nred
    cdef Poly work
    cdef Poly tmp
    cdef Poly rem
    cdef uint64_t* sh
    cdef uint64_t* mono
    cdef long long _steps
    # reducer multiples pending in a max-heap (one stream per reduction step)
    cdef Py_ssize_t stcap
    cdef Py_ssize_t* st_r
    cdef Py_ssize_t* st_b
    cdef uint64_t* st_q
    cdef uint64_t* st_sh
    cdef uint64_t* st_m
    cdef Py_ssize_t* heap

    compiled = True

    def __cinit__(self, codec, p):
        cdef Py_ssize_t i
        if p <= 1 or p >= (1 << 32):
            raise ValueError("compiled engine needs 1 < p < 2**32")
        self.codec = codec
        self.p = p
        self.W = codec.words
        W = self.W
        self.bias = <uint64_t*> malloc(W * sizeof(uint64_t))
        self.guard = <uint64_t*> malloc(W * sizeof(uint64_t))
        self.gplain = <uint64_t*> malloc(W * sizeof(uint64_t))
        self.gcomp = <uint64_t*> malloc(W * sizeof(uint64_t))
        self.ovf = <uint64_t*> malloc(W * sizeof(uint64_t))
        self.sh = <uint64_t*> malloc(W * sizeof(uint64_t))
        self.mono = <uint64_t*> malloc(W * sizeof(uint64_t))
        if (self.bias == NULL or self.guard == NULL or self.gplain == NULL or self.gcomp == NULL
                or self.ovf == NULL or self.sh == NULL or self.mono == NULL):
            raise MemoryError()
        for i, w in enumerate(codec.to_words(codec.BIAS)):
            self.bias[i] = w
        for i, w in enumerate(codec.to_words(codec.GUARD)):
            self.guard[i] = w
        for i, w in enumerate(codec.to_words(codec.GPLAIN)):
            self.gplain[i] = w
        for i, w in enumerate(codec.to_words(codec.GCOMP)):
            self.gcomp[i] = w
        for i, w in enumerate(codec.to_words(codec.OVF)):
            self.ovf[i] = w
        self.has_plain = codec.GPLAIN != 0
        self.has_comp = codec.GCOMP != 0
        self.pool = NULL
        self.npool = 0
        self.poolcap = 0
        self.red = NULL
        self.nred = 0
        self.work.n = self.work.cap = 0
        self.work.m = self.work.c = NULL
        self.tmp.n = self.tmp.cap = 0
        self.tmp.m = self.tmp.c = NULL
        self.rem.n = self.rem.cap = 0
        self.rem.m = self.rem.c = NULL
        self._steps = 0
        self.stcap = 0
        self.st_r = self.st_b = self.heap = NULL
        self.st_q = self.st_sh = self.st_m = NULL

    def __dealloc__(self):
        cdef Py_ssize_t i
        if self.pool != NULL:
            for i in range(self.npool):
                free(self.pool[i].m)
                free(self.pool[i].c)
            free(self.pool)
        free(self.red)
        free(self.work.m); free(self.work.c)
        free(self.tmp.m); free(self.tmp.c)
        free(self.rem.m); free(self.rem.c)
        free(self.bias); free(self.guard); free(self.gplain); free(self.gcomp)
        free(self.ovf); free(self.sh); free(self.mono)
        free(self.st_r); free(self.st_b); free(self.st_q); free(self.st_sh); free(self.st_m)
        free(self.heap)

    property steps:
        def __get__(self):
            return self._steps

    def __len__(self):
        return self.npool

    # ------------------------------------------------------------------ io
    cdef void _load_key(self, object k, uint64_t* out) except *:
        cdef Py_ssize_t i
        cdef bytes b = (<object> k).to_bytes(8 * self.W, "big")
        cdef const unsigned char* s = b
        cdef uint64_t w
        cdef int j
        for i in range(self.W):
            w = 0
            for j in range(8):
                w = (w << 8) | s[8 * i + j]
            out[i] = w

    cdef object _key(self, const uint64_t* m):
        cdef Py_ssize_t i
        r = 0
        for i in range(self.W):
            r = (r << 64) | m[i]
        return r

    cdef Py_ssize_t _new_slot(self) except -1:
        cdef Poly* np_
        if self.npool == self.poolcap:
            newcap = 2 * self.poolcap if self.poolcap else 64
            np_ = <Poly*> realloc(self.pool, newcap * sizeof(Poly))
            if np_ == NULL:
                raise MemoryError()
            self.pool = np_
            self.poolcap = newcap
        self.pool[self.npool].n = 0
        self.pool[self.npool].cap = 0
        self.pool[self.npool].m = NULL
        self.pool[self.npool].c = NULL
        self.npool += 1
        return self.npool - 1

    cdef Py_ssize_t _store_monic(self, Poly* src) except -1:
        """Copy ``src`` into a new pool slot, scaled to be monic."""
        cdef Py_ssize_t h = self._new_slot()
        cdef Poly* f = &self.pool[h]
        cdef Py_ssize_t i
        cdef uint64_t inv, p = self.p
        if reserve(f, src.n, self.W) != 0:
            raise MemoryError()
        memcpy(f.m, src.m, src.n * self.W * sizeof(uint64_t))
        inv = modinv(src.c[0], p)
        for i in range(src.n):
            f.c[i] = src.c[i] * inv % p
        f.n = src.n
        return h

    def add(self, terms):
        """Store ``(key, coeff)`` terms (descending, distinct, nonzero) monic."""
        cdef Py_ssize_t n = len(terms), i
        if n == 0:
            raise ValueError("cannot store the zero polynomial")
        if reserve(&self.tmp, n, self.W) != 0:
            raise MemoryError()
        for i in range(n):
            k, c = terms[i]
            self._load_key(k, self.tmp.m + i * self.W)
            self.tmp.c[i] = <uint64_t> (c % self.p)
        self.tmp.n = n
        return self._store_monic(&self.tmp)

    def terms(self, Py_ssize_t h):
        self._check(h)
        cdef Poly* f = &self.pool[h]
        return [(self._key(f.m + i * self.W), f.c[i]) for i in range(f.n)]

    def lead(self, Py_ssize_t h):
        self._check(h)
        return self._key(self.pool[h].m)

    def nterms(self, Py_ssize_t h):
        self._check(h)
        return self.pool[h].n

    cdef int _check(self, Py_ssize_t h) except -1:
        if h < 0 or h >= self.npool:
            raise IndexError("bad polynomial handle")
        return 0

    def truncate(self, Py_ssize_t n):
        cdef Py_ssize_t i
        for i in range(self.nred):
            if self.red[i] >= n:
                raise ValueError("cannot drop a polynomial still used as reducer")
        while self.npool > n:
            self.npool -= 1
            free(self.pool[self.npool].m)
            free(self.pool[self.npool].c)

    def set_reducers(self, handles):
        cdef Py_ssize_t i, n = len(handles)
        cdef Py_ssize_t* r = <Py_ssize_t*> realloc(self.red, (n + 1) * sizeof(Py_ssize_t))
        if r == NULL:
            raise MemoryError()
        self.red = r
        for i in range(n):
            self._check(handles[i])
            self.red[i] = handles[i]
        self.nred = n

    # ------------------------------------------------------------ kernels
    cdef inline bint _divides(self, const uint64_t* a, const uint64_t* b) noexcept nogil:
        """Does monomial ``a`` divide ``b``?"""
        cdef Py_ssize_t i
        cdef uint64_t g
        for i in range(self.W):
            g = self.guard[i]
            if self.has_plain and (((b[i] | g) - a[i]) & self.gplain[i]) != self.gplain[i]:
                return False
            if self.has_comp and (((a[i] | g) - b[i]) & self.gcomp[i]) != self.gcomp[i]:
                return False
        return True

    cdef inline Py_ssize_t _find(self, const uint64_t* t) noexcept nogil:
        cdef Py_ssize_t k
        for k in range(self.nred):
            if self._divides(self.pool[self.red[k]].m, t):
                return self.red[k]
        return -1

    cdef inline bint _mulmono(self, const uint64_t* a, uint64_t* out) noexcept nogil:
        """out = a * shift; False on exponent overflow."""
        cdef Py_ssize_t i
        cdef bint ok = True
        for i in range(self.W):
            out[i] = a[i] + self.sh[i] - self.bias[i]
            if out[i] & self.ovf[i]:
                ok = False
        return ok

    cdef inline void _push(self, Poly* f, const uint64_t* m, uint64_t c) noexcept nogil:
        memcpy(f.m + f.n * self.W, m, self.W * sizeof(uint64_t))
        f.c[f.n] = c
        f.n += 1

    cdef int _grow_streams(self, Py_ssize_t need) noexcept nogil:
        cdef Py_ssize_t cap = self.stcap, W = self.W
        cdef void* q
        if need <= cap:
            return 0
        cap = 2 * cap if cap else 256
        while cap < need:
            cap *= 2
        q = realloc(self.st_r, cap * sizeof(Py_ssize_t))
        if q == NULL:
            return -2
        self.st_r = <Py_ssize_t*> q
        q = realloc(self.st_b, cap * sizeof(Py_ssize_t))
        if q == NULL:
            return -2
        self.st_b = <Py_ssize_t*> q
        q = realloc(self.heap, cap * sizeof(Py_ssize_t))
        if q == NULL:
            return -2
        self.heap = <Py_ssize_t*> q
        q = realloc(self.st_q, cap * sizeof(uint64_t))
        if q == NULL:
            return -2
        self.st_q = <uint64_t*> q
        q = realloc(self.st_sh, cap * W * sizeof(uint64_t))
        if q == NULL:
            return -2
        self.st_sh = <uint64_t*> q
        q = realloc(self.st_m, cap * W * sizeof(uint64_t))
        if q == NULL:
            return -2
        self.st_m = <uint64_t*> q
        self.stcap = cap
        return 0

    cdef inline bint _stream_mono(self, Py_ssize_t s) noexcept nogil:
        """Current monomial of stream ``s``; False on exponent overflow."""
        cdef Py_ssize_t i, W = self.W
        cdef const uint64_t* gm = self.pool[self.st_r[s]].m + self.st_b[s] * W
        cdef uint64_t* out = self.st_m + s * W
        cdef const uint64_t* sh = self.st_sh + s * W
        cdef bint ok = True
        for i in range(W):
            out[i] = gm[i] + sh[i] - self.bias[i]
            if out[i] & self.ovf[i]:
                ok = False
        return ok

    cdef inline void _heap_push(self, Py_ssize_t* n, Py_ssize_t s) noexcept nogil:
        cdef Py_ssize_t i = n[0], up, W = self.W
        cdef Py_ssize_t* h = self.heap
        n[0] += 1
        while i > 0:
            up = (i - 1) >> 1
            if cmpmono(self.st_m + h[up] * W, self.st_m + s * W, W) >= 0:
                break
            h[i] = h[up]
            i = up
        h[i] = s

    cdef inline void _heap_pop(self, Py_ssize_t* n) noexcept nogil:
        cdef Py_ssize_t i = 0, c, W = self.W, last
        cdef Py_ssize_t* h = self.heap
        n[0] -= 1
        if n[0] == 0:
            return
        last = h[n[0]]
        while True:
            c = 2 * i + 1
            if c >= n[0]:
                break
            if c + 1 < n[0] and cmpmono(self.st_m + h[c + 1] * W, self.st_m + h[c] * W, W) > 0:
                c += 1
            if cmpmono(self.st_m + h[c] * W, self.st_m + last * W, W) <= 0:
                break
            h[i] = h[c]
            i = c
        h[i] = last

    cdef int _reduce(self) noexcept nogil:
        """Fully reduce ``work`` into ``rem``.  0 ok, -1 overflow, -2 memory.

        The input is walked in descending order; each reduction step opens a
        stream of reducer terms kept in a heap, so the cost per term is
        logarithmic instead of a full merge per step.
        """
        cdef Py_ssize_t W = self.W, a = 0, nst = 0, nh = 0, s, i
        cdef uint64_t p = self.p, c
        cdef const uint64_t* t
        cdef Poly* g
        cdef Py_ssize_t r
        cdef int cm
        cdef bint have
        self.rem.n = 0
        while a < self.work.n or nh > 0:
            # largest pending monomial
            if nh == 0:
                cm = 1
            elif a >= self.work.n:
                cm = -1
            else:
                cm = cmpmono(self.work.m + a * W, self.st_m + self.heap[0] * W, W)
            if cm >= 0:
                memcpy(self.mono, self.work.m + a * W, W * sizeof(uint64_t))
                c = self.work.c[a]
                a += 1
            else:
                memcpy(self.mono, self.st_m + self.heap[0] * W, W * sizeof(uint64_t))
                c = 0
            while nh > 0 and cmpmono(self.st_m + self.heap[0] * W, self.mono, W) == 0:
                s = self.heap[0]
                self._heap_pop(&nh)
                g = &self.pool[self.st_r[s]]
                c = (c + self.st_q[s] * g.c[self.st_b[s]]) % p
                self.st_b[s] += 1
                if self.st_b[s] < g.n:
                    if not self._stream_mono(s):
                        return -1
                    self._heap_push(&nh, s)
            if c == 0:
                continue
            r = self._find(self.mono)
            if r < 0:
                if reserve(&self.rem, self.rem.n + 1, W) != 0:
                    return -2
                self._push(&self.rem, self.mono, c)
                continue
            self._steps += 1
            g = &self.pool[r]
            if g.n == 1:
                continue
            if self._grow_streams(nst + 1) != 0:
                return -2
            s = nst
            nst += 1
            self.st_r[s] = r
            self.st_b[s] = 1
            self.st_q[s] = p - c
            for i in range(W):
                self.st_sh[s * W + i] = self.mono[i] - g.m[i] + self.bias[i]
            if not self._stream_mono(s):
                return -1
            self._heap_push(&nh, s)
        return 0

    cdef int _spoly(self, Py_ssize_t i, Py_ssize_t j, const uint64_t* lcm) noexcept nogil:
        """Build S(i, j) into ``work``.  0 ok, -1 overflow, -2 memory."""
        cdef Py_ssize_t W = self.W, a = 1, b = 1, k
        cdef Poly* fi = &self.pool[i]
        cdef Poly* fj = &self.pool[j]
        cdef uint64_t p = self.p, v
        cdef int cm
        if reserve(&self.work, fi.n + fj.n, W) != 0:
            return -2
        if reserve(&self.tmp, fi.n + fj.n, W) != 0:
            return -2
        self.work.n = 0
        # tmp holds the shifted j-tail; mono/sh are reused for the i-tail
        for k in range(W):
            self.sh[k] = lcm[k] - fj.m[k] + self.bias[k]
        self.tmp.n = 0
        for k in range(1, fj.n):
            if not self._mulmono(fj.m + k * W, self.mono):
                return -1
            self._push(&self.tmp, self.mono, p - fj.c[k])
        for k in range(W):
            self.sh[k] = lcm[k] - fi.m[k] + self.bias[k]
        b = 0
        while a < fi.n and b < self.tmp.n:
            if not self._mulmono(fi.m + a * W, self.mono):
                return -1
            cm = cmpmono(self.mono, self.tmp.m + b * W, W)
            if cm > 0:
                self._push(&self.work, self.mono, fi.c[a])
                a += 1
            elif cm < 0:
                self._push(&self.work, self.tmp.m + b * W, self.tmp.c[b])
                b += 1
            else:
                v = (fi.c[a] + self.tmp.c[b]) % p
                if v:
                    self._push(&self.work, self.mono, v)
                a += 1
                b += 1
        while a < fi.n:
            if not self._mulmono(fi.m + a * W, self.mono):
                return -1
            self._push(&self.work, self.mono, fi.c[a])
            a += 1
        while b < self.tmp.n:
            self._push(&self.work, self.tmp.m + b * W, self.tmp.c[b])
            b += 1
        return 0

    cdef object _finish(self, int rc):
        if rc == -1:
            raise OverflowError("exponent overflow during reduction")
        if rc == -2:
            raise MemoryError()
        if self.rem.n == 0:
            return -1
        return self._store_monic(&self.rem)

    def spoly_reduce(self, Py_ssize_t i, Py_ssize_t j, lcm):
        cdef int rc
        self._check(i)
        self._check(j)
        cdef uint64_t* l = <uint64_t*> malloc(self.W * sizeof(uint64_t))
        if l == NULL:
            raise MemoryError()
        try:
            self._load_key(lcm, l)
            with nogil:
                rc = self._spoly(i, j, l)
                if rc == 0:
                    rc = self._reduce()
        finally:
            free(l)
        return self._finish(rc)

    def reduce(self, Py_ssize_t h):
        cdef int rc
        self._check(h)
        cdef Poly* f = &self.pool[h]
        if reserve(&self.work, f.n, self.W) != 0:
            raise MemoryError()
        memcpy(self.work.m, f.m, f.n * self.W * sizeof(uint64_t))
        memcpy(self.work.c, f.c, f.n * sizeof(uint64_t))
        self.work.n = f.n
        with nogil:
            rc = self._reduce()
        return self._finish(rc)

    def normal_form(self, terms):
        cdef Py_ssize_t n = len(terms), i
        cdef int rc
        if n == 0:
            return []
        if reserve(&self.work, n, self.W) != 0:
            raise MemoryError()
        for i in range(n):
            k, c = terms[i]
            self._load_key(k, self.work.m + i * self.W)
            self.work.c[i] = <uint64_t> (c % self.p)
        self.work.n = n
        with nogil:
            rc = self._reduce()
        if rc == -1:
            raise OverflowError("exponent overflow during reduction")
        if rc == -2:
            raise MemoryError()
        return [(self._key(self.rem.m + i * self.W), self.rem.c[i]) for i in range(self.rem.n)]
