"""Dense square matrices over an arbitrary commutative ring.

Matrices are lists of row lists.  Entries may be field scalars, ring
polynomials or tower elements; the only requirement is ``+``, ``-``, ``*``
and mixing with Python ints.  When ``modulus`` is given, entries are plain
ints reduced mod that prime, which keeps randomized GF(p) checks fast.
"""

from __future__ import annotations

from typing import Sequence

Matrix = list


def size(a: Matrix) -> int:
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix is not square")
    return n


def zero_of(x):
    return x - x


def identity(n: int, zero, one) -> Matrix:
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def identity_like(a: Matrix) -> Matrix:
    z = zero_of(a[0][0])
    return identity(len(a), z, z + 1)


def mat_mul(a: Matrix, b: Matrix, modulus: int | None = None) -> Matrix:
    n = len(a)
    if len(b) != n:
        raise ValueError("dimension mismatch")
    bt = list(zip(*b))
    out = []
    for row in a:
        new = []
        for col in bt:
            acc = row[0] * col[0]
            for k in range(1, n):
                acc = acc + row[k] * col[k]
            new.append(acc % modulus if modulus else acc)
        out.append(new)
    return out


def mat_add(a: Matrix, b: Matrix, modulus: int | None = None) -> Matrix:
    if len(a) != len(b):
        raise ValueError("dimension mismatch")
    if modulus:
        return [[(x + y) % modulus for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Matrix, b: Matrix, modulus: int | None = None) -> Matrix:
    if len(a) != len(b):
        raise ValueError("dimension mismatch")
    if modulus:
        return [[(x - y) % modulus for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c, a: Matrix, modulus: int | None = None) -> Matrix:
    if modulus:
        return [[c * x % modulus for x in row] for row in a]
    return [[c * x for x in row] for row in a]


def mat_neg(a: Matrix, modulus: int | None = None) -> Matrix:
    if modulus:
        return [[-x % modulus for x in row] for row in a]
    return [[-x for x in row] for row in a]


def trace(a: Matrix):
    acc = a[0][0]
    for i in range(1, len(a)):
        acc = acc + a[i][i]
    return acc


def trace_of_product(a: Matrix, b: Matrix):
    """``trace(a*b)`` without forming the product."""
    n = len(a)
    acc = None
    for i in range(n):
        for k in range(n):
            t = a[i][k] * b[k][i]
            acc = t if acc is None else acc + t
    return acc


def is_zero_matrix(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def det(a: Matrix, modulus: int | None = None):
    """Determinant by expansion over column subsets (division free).

    ``D(S)`` is the determinant of the top ``|S|`` rows restricted to the
    columns ``S``; ``D(S + j)`` collects ``± D(S) * a[|S|][j]``.  Cost is
    ``O(2^n n)`` ring multiplications, fine for the sizes used here.
    """
    n = size(a)
    if n == 0:
        return 1
    zero = zero_of(a[0][0])
    table = {0: zero + 1}
    for r in range(n):
        nxt: dict[int, object] = {}
        for s, v in table.items():
            if not v:
                continue
            above = 0
            for j in range(n - 1, -1, -1):
                bit = 1 << j
                if s & bit:
                    above += 1
                    continue
                x = a[r][j]
                if not x:
                    continue
                t = v * x
                if above & 1:
                    t = -t
                prev = nxt.get(s | bit)
                t = t if prev is None else prev + t
                nxt[s | bit] = t % modulus if modulus else t
        table = nxt
    return table.get((1 << n) - 1, zero)


def flatten(a: Matrix) -> list:
    return [x for row in a for x in row]


def same_size(mats: Sequence[Matrix]) -> int:
    if not mats:
        raise ValueError("no matrices")
    n = size(mats[0])
    for m in mats:
        if size(m) != n:
            raise ValueError("dimension mismatch")
    return n
