"""Exact integer/rational matrix helpers.

Matrices are tuples of row tuples of Python ints (arbitrary precision).
Nothing here touches floating point.
"""
from fractions import Fraction
from math import gcd

from .errors import DimensionError


def as_matrix(rows):
    m = tuple(tuple(int(x) for x in row) for row in rows)
    if m and any(len(r) != len(m[0]) for r in m):
        raise DimensionError("ragged matrix")
    return m


def shape(A):
    return (len(A), len(A[0]) if A else 0)


def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(n, m=None):
    m = n if m is None else m
    return tuple((0,) * m for _ in range(n))


def transpose(A):
    return tuple(zip(*A)) if A else ()


def matmul(A, B):
    if shape(A)[1] != shape(B)[0]:
        raise DimensionError(f"cannot multiply {shape(A)} by {shape(B)}")
    Bt = transpose(B)
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in Bt) for row in A)


def matvec(A, v):
    if shape(A)[1] != len(v):
        raise DimensionError(f"cannot apply {shape(A)} matrix to length-{len(v)} vector")
    return tuple(sum(a * b for a, b in zip(row, v)) for row in A)


def matadd(A, B):
    return tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(A, B))


def matscale(c, A):
    return tuple(tuple(c * a for a in r) for r in A)


def matpow(A, n):
    """A**n by binary exponentiation, n >= 0."""
    if n < 0:
        raise ValueError("negative exponent")
    result = identity(len(A))
    base = A
    while n:
        if n & 1:
            result = matmul(result, base)
        n >>= 1
        if n:
            base = matmul(base, base)
    return result


def bilinear(u, Q, v):
    return sum(ui * qv for ui, qv in zip(u, matvec(Q, v)))


def is_symmetric(A):
    return all(A[i][j] == A[j][i] for i in range(len(A)) for j in range(i))


def max_abs_entry(A):
    return max((abs(x) for row in A for x in row), default=0)


def det(A):
    """Determinant by Bareiss fraction-free elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    M[k], M[i] = M[i], M[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def rank(A):
    """Rank over the rationals (fraction-free row reduction)."""
    M = [list(r) for r in A]
    if not M:
        return 0
    rows, cols = len(M), len(M[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if M[i][c] != 0), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        for i in range(r + 1, rows):
            if M[i][c]:
                a, b = M[r][c], M[i][c]
                row = [a * x - b * y for x, y in zip(M[i], M[r])]
                g = 0
                for x in row:
                    g = gcd(g, x)
                M[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == rows:
            break
    return r


def inverse_rational(A):
    """Inverse over Q as a tuple of Fraction rows; raises if singular."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(A)]
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c] != 0), None)
        if piv is None:
            raise DimensionError("matrix is singular")
        M[c], M[piv] = M[piv], M[c]
        inv = 1 / M[c][c]
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and M[i][c] != 0:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return tuple(tuple(row[n:]) for row in M)


def inverse_integer(A):
    """Inverse of a unimodular integer matrix; None if not integral."""
    inv = inverse_rational(A)
    if any(x.denominator != 1 for row in inv for x in row):
        return None
    return tuple(tuple(int(x) for x in row) for row in inv)


def primitive_kernel_basis(w, prefer=None):
    """Integral basis of {x in Z^d : w.x = 0} for a primitive row vector w.

    When some |w_i| = 1 the basis is e_k - w_k w_i e_i (k != i), which keeps
    coordinates close to the original ones; otherwise a unimodular column
    reduction by the extended Euclidean algorithm is used.
    """
    d = len(w)
    g = 0
    for x in w:
        g = gcd(g, x)
    if g != 1:
        raise DimensionError("row vector is not primitive")
    units = [i for i in range(d) if abs(w[i]) == 1]
    if units:
        i = prefer if prefer in units else units[-1]
        basis = []
        for k in range(d):
            if k == i:
                continue
            v = [0] * d
            v[k] = 1
            v[i] = -w[k] * w[i]
            basis.append(tuple(v))
        return basis
    # Column operations on U (starting at identity) that drive w to (1, 0, ..., 0).
    row = list(w)
    U = [[int(i == j) for j in range(d)] for i in range(d)]

    def colop(dst, src, q):
        row[dst] -= q * row[src]
        for r in U:
            r[dst] -= q * r[src]

    def swap(a, b):
        row[a], row[b] = row[b], row[a]
        for r in U:
            r[a], r[b] = r[b], r[a]

    for k in range(1, d):
        while row[k] != 0:
            q = row[0] // row[k]
            colop(0, k, q)
            swap(0, k)
    # row[0] is now +-1 and the remaining columns of U span the kernel.
    return [tuple(U[r][k] for r in range(d)) for k in range(1, d)]


def random_unimodular(d, rng, steps=None):
    """Product of random elementary integer matrices; det = +-1."""
    steps = 3 * d if steps is None else steps
    U = [list(r) for r in identity(d)]
    for _ in range(steps):
        if d == 1:
            U[0][0] = -U[0][0]
            continue
        i, j = rng.sample(range(d), 2)
        c = rng.choice([-2, -1, 1, 2])
        for r in U:
            r[i] += c * r[j]
        if rng.random() < 0.2:
            for r in U:
                r[i] = -r[i]
    return as_matrix(U)
