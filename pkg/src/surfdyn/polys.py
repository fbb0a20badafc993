"""Univariate polynomials with exact coefficients.

A polynomial is a tuple of coefficients, highest degree first, with no
leading zeros (the zero polynomial is ``()``).  Integer inputs stay integer;
Sturm chains are built over :class:`fractions.Fraction`.
"""
from fractions import Fraction


def trim(p):
    p = tuple(p)
    i = 0
    while i < len(p) and p[i] == 0:
        i += 1
    return p[i:]


def degree(p):
    return len(trim(p)) - 1


def evaluate(p, x):
    acc = 0
    for c in p:
        acc = acc * x + c
    return acc


def derivative(p):
    n = len(p) - 1
    return trim(c * (n - i) for i, c in enumerate(p[:-1]))


def sub(p, q):
    n = max(len(p), len(q))
    p = (0,) * (n - len(p)) + tuple(p)
    q = (0,) * (n - len(q)) + tuple(q)
    return trim(a - b for a, b in zip(p, q))


def mul(p, q):
    if not p or not q:
        return ()
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return trim(out)


def divmod_poly(p, q):
    """Quotient and remainder over Q."""
    p = [Fraction(c) for c in trim(p)]
    q = [Fraction(c) for c in trim(q)]
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    if len(p) < len(q):
        return (), trim(p)
    quot = [Fraction(0)] * (len(p) - len(q) + 1)
    lead = q[0]
    for i in range(len(quot)):
        c = p[i] / lead
        quot[i] = c
        if c:
            for j, b in enumerate(q):
                p[i + j] -= c * b
    return trim(quot), trim(p[len(quot):])


def to_string(p, var="x"):
    p = trim(p)
    if not p:
        return "0"
    n = len(p) - 1
    terms = []
    for i, c in enumerate(p):
        e = n - i
        if c == 0:
            continue
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            coef = "" if mag == 1 else f"{mag}*"
            body = f"{coef}{var}" + (f"^{e}" if e > 1 else "")
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    first_sign, first = terms[0]
    out = ("-" if first_sign == "-" else "") + first
    for s, b in terms[1:]:
        out += f" {s} {b}"
    return out


def charpoly_berkowitz(A):
    """det(xI - A) for a square integer matrix, division-free.

    Berkowitz's algorithm: grow the leading principal submatrix one row and
    column at a time, multiplying by a lower-triangular Toeplitz matrix built
    from -r A^k c.  Only ring operations are used, so integer input gives the
    exact integer characteristic polynomial.
    """
    n = len(A)
    poly = [1]
    for k in range(n):
        a = A[k][k]
        r = [A[k][i] for i in range(k)]
        c = [A[i][k] for i in range(k)]
        sub_ = [[A[i][j] for j in range(k)] for i in range(k)]
        col = [1, -a]
        v = c
        for _ in range(k):
            col.append(-sum(x * y for x, y in zip(r, v)))
            v = [sum(row[j] * v[j] for j in range(k)) for row in sub_]
        # Toeplitz (k+2) x (k+1) times poly (length k+1).
        new = [0] * (k + 2)
        for i in range(k + 2):
            s = 0
            for j in range(min(i, k) + 1):
                s += col[i - j] * poly[j]
            new[i] = s
        poly = new
    return tuple(poly)


def _raw_chain(p0):
    chain = [p0, tuple(Fraction(c) for c in derivative(p0))]
    while chain[-1] and degree(chain[-1]) > 0:
        _, rem = divmod_poly(chain[-2], chain[-1])
        if not trim(rem):
            break
        chain.append(tuple(-c for c in trim(rem)))
    return [q for q in chain if trim(q)]


def sturm_chain(p):
    """Sturm chain of the square-free part of p.

    Consecutive members then share no root, so only p itself can vanish at
    an endpoint and the count over (lo, hi] is exact even when lo or hi is
    a (multiple) root.
    """
    p0 = tuple(Fraction(c) for c in trim(p))
    chain = _raw_chain(p0)
    g = chain[-1]
    if len(chain) > 1 and degree(g) > 0:
        p0, _ = divmod_poly(p0, g)
        chain = _raw_chain(trim(p0))
    return chain


def _sign_changes(values):
    signs = [v for v in values if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def _sign_at_inf(q, positive=True):
    lead = q[0]
    if positive or (len(q) - 1) % 2 == 0:
        return lead
    return -lead


def count_real_roots(p, lo=None, hi=None, chain=None):
    """Number of distinct real roots of p in (lo, hi]; None means infinite.

    Roots at lo are excluded and roots at hi included, multiplicity ignored.
    """
    chain = sturm_chain(p) if chain is None else chain
    if lo is None:
        v_lo = _sign_changes([_sign_at_inf(q, positive=False) for q in chain])
    else:
        v_lo = _sign_changes([evaluate(q, Fraction(lo)) for q in chain])
    if hi is None:
        v_hi = _sign_changes([_sign_at_inf(q) for q in chain])
    else:
        v_hi = _sign_changes([evaluate(q, Fraction(hi)) for q in chain])
    return v_lo - v_hi


def descartes_sign_changes(p):
    """Sign changes of the coefficient sequence.

    Equals the number of positive roots counted with multiplicity when all
    roots of p are real, as for characteristic polynomials of symmetric
    matrices.
    """
    return _sign_changes(list(trim(p)))


def count_positive_roots(p):
    return count_real_roots(p, 0, None)


def bisect_root(p, lo, hi, width=Fraction(1, 10**15)):
    """Shrink (lo, hi] to width <= ``width`` around a simple root, by signs.

    Requires p(lo) and p(hi) of opposite signs (or p(hi) = 0); cheaper than
    Sturm counts because only p itself is evaluated.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    s_lo = evaluate(p, lo)
    if evaluate(p, hi) == 0:
        return hi, hi
    if s_lo == 0 or (s_lo > 0) == (evaluate(p, hi) > 0):
        raise ValueError("no sign change on the interval")
    while hi - lo > width:
        mid = (lo + hi) / 2
        v = evaluate(p, mid)
        if v == 0:
            return mid, mid
        if (v > 0) == (s_lo > 0):
            lo = mid
        else:
            hi = mid
    return lo, hi


def isolate_root(p, lo, hi, width=Fraction(1, 10**15)):
    """Shrink (lo, hi] containing exactly one root of p to width <= ``width``.

    Returns exact rational endpoints; an exact rational root is returned as a
    degenerate interval.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    chain = sturm_chain(p)
    if count_real_roots(p, lo, hi, chain) != 1:
        raise ValueError("interval does not isolate a single root")
    # chain[0] is the square-free part: its only root here is simple.
    return bisect_root(chain[0], lo, hi, width)
