"""Subspace products in the function field Q(t) of the projective line.

A finite-dimensional subspace V of Q(t) is stored as a scalar g in Q(t)
times a polynomial space V0 whose elements have content-free, coprime
numerators.  Such a V0 is "normalized": the sheaf V O generated on P^1 is
O(deg) with deg the maximal degree in V0, and products of normalized spaces
are again normalized, so no gcd bookkeeping is ever needed after the
first step.

Sparse polynomials are dicts {exponent: int coefficient}.
"""
from dataclasses import dataclass, field
from functools import reduce
from math import ceil, exp, gcd, log, log1p, sqrt
import random

import numpy as np
import sympy

from .errors import DataConsistencyError, PreconditionError

_T = sympy.Symbol("t")

# -- sparse integer polynomials ------------------------------------------------


def _deg(p):
    return max(p) if p else -1


def _content(p):
    return reduce(gcd, p.values(), 0)


def _primitive(p):
    """Content-free with positive leading coefficient."""
    if not p:
        return p
    c = _content(p)
    if p[_deg(p)] < 0:
        c = -c
    return {e: a // c for e, a in p.items()} if c != 1 else dict(p)


def _pmul(p, q):
    out = {}
    for e1, a in p.items():
        for e2, b in q.items():
            e = e1 + e2
            v = out.get(e, 0) + a * b
            if v:
                out[e] = v
            else:
                out.pop(e, None)
    return out


def _combine(a, p, b, q):
    """a*p - b*q."""
    out = {e: a * c for e, c in p.items()}
    for e, c in q.items():
        v = out.get(e, 0) - b * c
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _to_sympy(p):
    return sympy.Poly.from_dict({(e,): c for e, c in p.items()}, _T) if p else sympy.Poly(0, _T)


def _from_sympy(P):
    return {int(m[0]): int(c) for m, c in P.terms() if c}


def _pgcd(p, q):
    return _primitive(_from_sympy(sympy.gcd(_to_sympy(p), _to_sympy(q))))


def _pdiv_exact(p, q):
    quo, rem = sympy.div(_to_sympy(p), _to_sympy(q))
    if not rem.is_zero:
        raise DataConsistencyError("inexact polynomial division")
    return {int(m[0]): int(c) for m, c in quo.terms() if c}


def poly_to_string(p):
    if not p:
        return "0"
    return str(_to_sympy(p).as_expr())


class Echelon:
    """Row echelon basis keyed by leading exponent; rows are primitive."""

    def __init__(self):
        self.rows = {}

    def insert(self, p):
        p = dict(p)
        while p:
            lead = _deg(p)
            r = self.rows.get(lead)
            if r is None:
                self.rows[lead] = _primitive(p)
                return True
            a, b = r[lead], p[lead]
            g = gcd(a, b)
            p = _primitive(_combine(a // g, p, b // g, r))
        return False

    def __len__(self):
        return len(self.rows)

    def basis(self):
        return [self.rows[k] for k in sorted(self.rows)]

    @property
    def max_degree(self):
        return max(self.rows) if self.rows else -1

    @property
    def min_lead(self):
        return min(self.rows) if self.rows else -1


# -- parsing -----------------------------------------------------------------


def _coerce(x):
    """(numerator, denominator) sparse integer polynomials of a rational function."""
    if isinstance(x, dict):
        return {int(e): int(c) for e, c in x.items() if c}, {0: 1}
    if isinstance(x, tuple) and len(x) == 2 and all(isinstance(y, (dict, list, tuple)) for y in x):
        num, den = (_coerce_poly(y) for y in x)
        return num, den
    expr = sympy.sympify(x, locals={"t": _T}) if isinstance(x, str) else sympy.sympify(x)
    num, den = sympy.fraction(sympy.together(expr))
    pn, pd = sympy.Poly(num, _T), sympy.Poly(den, _T)
    # clear rational coefficients
    L = sympy.ilcm(*[sympy.Rational(c).q for c in pn.coeffs() + pd.coeffs()])
    pn, pd = pn * L, pd * L
    return ({int(m[0]): int(c) for m, c in pn.terms() if c},
            {int(m[0]): int(c) for m, c in pd.terms() if c})


def _coerce_poly(y):
    if isinstance(y, dict):
        return {int(e): int(c) for e, c in y.items() if c}
    # coefficient list, lowest degree first
    return {e: int(c) for e, c in enumerate(y) if c}


# -- subspaces ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RationalSubspace:
    """V = (scale_num / scale_den) * span(core); ``core`` is normalized."""

    core: tuple
    scale_num: dict = field(default_factory=lambda: {0: 1})
    scale_den: dict = field(default_factory=lambda: {0: 1})

    @classmethod
    def span(cls, elements):
        """Subspace spanned by rational functions (strings, sympy, or (num, den) pairs)."""
        pairs = [_coerce(x) for x in elements]
        if not pairs or all(not n for n, _ in pairs):
            raise PreconditionError("zero subspace")
        pairs = [(n, d) for n, d in pairs if n]
        # common denominator: lcm of the denominators
        D = reduce(lambda a, b: _pmul(a, _pdiv_exact(b, _pgcd(a, b))), [d for _, d in pairs], {0: 1})
        polys_ = [_pmul(n, _pdiv_exact(D, d)) for n, d in pairs]
        G = reduce(_pgcd, polys_)
        core = [_pdiv_exact(p, G) for p in polys_]
        ech = Echelon()
        for p in core:
            if not ech.insert(p):
                raise DataConsistencyError("basis elements are linearly dependent")
        return cls(tuple(_freeze(p) for p in ech.basis()), G, D)

    @classmethod
    def monomials(cls, exponents):
        exps = sorted(set(int(e) for e in exponents))
        lo = exps[0]
        return cls(tuple(((e - lo, 1),) for e in exps), {lo: 1}, {0: 1})

    @property
    def basis_polys(self):
        return [dict(p) for p in self.core]

    @property
    def dim(self):
        return len(self.core)

    @property
    def normalized(self):
        return self.scale_num == {0: 1} and self.scale_den == {0: 1}

    def elements(self):
        """Basis as (numerator, denominator) pairs in lowest terms."""
        out = []
        for p in self.basis_polys:
            num = _pmul(p, self.scale_num)
            den = dict(self.scale_den)
            g = _pgcd(num, den)
            num, den = _pdiv_exact(num, g), _pdiv_exact(den, g)
            if den[_deg(den)] < 0:
                num, den = {e: -c for e, c in num.items()}, {e: -c for e, c in den.items()}
            out.append((num, den))
        return out

    def __repr__(self):
        parts = []
        for n, d in self.elements():
            parts.append(poly_to_string(n) if d == {0: 1} else f"({poly_to_string(n)})/({poly_to_string(d)})")
        return "span{" + ", ".join(parts) + "}"


def _freeze(p):
    return tuple(sorted(p.items()))


def normalize(V):
    """The normalized representative: polynomial basis with coprime, content-free entries."""
    return RationalSubspace(V.core)


def sheaf_degree(V):
    """deg V O on P^1: the maximal degree of the normalized basis."""
    return max(_deg(p) for p in V.basis_polys)


def product(V, W):
    ech = Echelon()
    for p in V.basis_polys:
        for q in W.basis_polys:
            ech.insert(_pmul(p, q))
    return RationalSubspace(tuple(_freeze(p) for p in ech.basis()),
                            _pmul(V.scale_num, W.scale_num), _pmul(V.scale_den, W.scale_den))


def _product_echelon(ech, V):
    out = Echelon()
    for p in ech.basis():
        for q in V.basis_polys:
            out.insert(_pmul(p, q))
    return out


# -- generic element and the recurrence witness ------------------------------


def generic_element(V, B, b, max_height=100, tries=20, seed=0):
    """f in V0 with gcd(f, B) = 1, deg f = deg V and d(f / b) = deg V.

    ``B`` collects the finite poles of the rescaled product space and ``b``
    is the element rescaled to 1.  Candidates are integer combinations of
    the basis with coefficients of height h = 1, 2, ... drawn from a seeded
    generator; None if nothing of height <= max_height works.
    """
    basis = V.basis_polys
    d = sheaf_degree(V)
    top = [i for i, p in enumerate(basis) if _deg(p) == d][0]
    rng = random.Random(seed)
    for h in range(1, max_height + 1):
        for _ in range(tries):
            coeffs = [rng.randint(-h, h) for _ in basis]
            if coeffs[top] == 0:
                coeffs[top] = h
            f = {}
            for c, p in zip(coeffs, basis):
                if c:
                    f = _combine(1, f, -c, p)
            if B and _deg(_pgcd(f, B)) > 0:
                continue
            g = _pgcd(f, b)
            if max(_deg(_pdiv_exact(f, g)), _deg(_pdiv_exact(b, g))) != d:
                continue
            return f
    return None


@dataclass
class ProductGrowth:
    e: list
    d: list
    m: list
    deg_w: list
    dims_v: list
    checked: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)
    no_generic: list = field(default_factory=list)
    genus0_violations: list = field(default_factory=list)

    @property
    def ok(self):
        return not self.violations and not self.genus0_violations

    def rows(self):
        for n in range(len(self.e)):
            status = "violated" if n in self.violations else ("ok" if n in self.checked else "n/a")
            d = self.d[n] if n < len(self.d) else ""
            m = self.m[n] if n < len(self.m) else ""
            yield n, d, self.e[n], m, status


def product_growth(spaces, n_max, witness=True, witness_limit=5000, max_height=100):
    """e_n = dim W_n, d_n = deg V_n O and m(n) for W_n = V_0 ... V_{n-1}.

    ``spaces`` is a sequence or a function n -> RationalSubspace.  Whenever
    dim V_n >= 2 and d_n > 0 the inequality e_{n+1} >= e_n + e_{m(n)} is
    asserted; with ``witness`` the direct sum W_m c + W_n f inside W_{n+1}
    (f generic in V_n, c = b_m ... b_n) is also verified while e_n stays
    below ``witness_limit``.
    """
    get = spaces if callable(spaces) else (lambda n: spaces[n])
    Vs = [get(n) for n in range(n_max + 1)]
    W = [Echelon()]
    W[0].insert({0: 1})
    for n in range(n_max + 1):
        W.append(_product_echelon(W[n], Vs[n]))
    e = [len(w) for w in W[:n_max + 1]]
    deg_w = [w.max_degree for w in W[:n_max + 1]]
    d = [sheaf_degree(V) for V in Vs]
    dims_v = [V.dim for V in Vs]
    e_next = [len(w) for w in W[1:n_max + 2]]
    # b_n: lowest-degree element of V_n (rescaled to 1 in the proof)
    b = [min(V.basis_polys, key=_deg) for V in Vs]
    res = ProductGrowth(e, d, [], deg_w, dims_v)
    for n in range(n_max + 1):
        cands = [m for m in range(n + 1) if deg_w[m] < d[n]]
        m = max(cands) if cands else None
        res.m.append(m)
        if sum(d[:n]) + 1 < e[n]:
            res.genus0_violations.append(n)
        if m is None or dims_v[n] < 2 or d[n] <= 0:
            continue
        res.checked.append(n)
        if e_next[n] < e[n] + e[m]:
            res.violations.append(n)
            continue
        if witness and e[n] <= witness_limit:
            Bn = reduce(_pmul, b[:n], {0: 1})
            f = generic_element(Vs[n], Bn, b[n], max_height, seed=n)
            if f is None:
                res.no_generic.append(n)
                continue
            c = reduce(_pmul, b[m:n + 1], {0: 1})
            ech = Echelon()
            for p in W[m].basis():
                ech.insert(_pmul(p, c))
            for p in W[n].basis():
                ech.insert(_pmul(p, f))
            res.witnesses[n] = (poly_to_string(f), len(ech))
            if len(ech) != e[n] + e[m]:
                res.violations.append(n)
    return res


# -- the scalar recurrence ---------------------------------------------------


@dataclass(frozen=True)
class RecurrenceSequence:
    """log f(k) for k = 1..n_max with growth readouts at the end of the range.

    ``exponent`` and ``rate`` are local: the discrete log-derivative
    log(f(n)/f(n-1)) / log(n/(n-1)) and the ratio f(n)/f(n-1) at n = n_max.
    The ``*_fit`` values are least-squares slopes over the tail; for slowly
    converging rules such as m(n) = ceil(sqrt n), where f ~ c n^2 / log n,
    they lag the local value.
    """

    log_values: tuple
    exponent: float
    rate: float
    exponent_fit: float
    rate_fit: float

    def value(self, k):
        return exp(self.log_values[k - 1])

    def local_exponent(self, k):
        return (self.log_values[k - 1] - self.log_values[k - 2]) / log(k / (k - 1))


def recurrence_lower_bound(f0, m_rule, n_max, tail=None):
    """Extremal sequence f(1) = f0, f(k) = f(k-1) + f(m(k)), m clamped to [1, k-1].

    Values are kept as logarithms so exponential rules do not overflow.
    The tail for the fitted readouts defaults to the last half of the range.
    """
    if f0 <= 0:
        raise PreconditionError("f0 must be positive")
    if n_max < 3:
        raise PreconditionError("n_max must be at least 3")
    lf = [0.0, log(f0)]  # lf[k] = log f(k); index 0 unused
    for k in range(2, n_max + 1):
        m = min(max(int(m_rule(k)), 1), k - 1)
        a, c = lf[k - 1], lf[m]
        lf.append(a + log1p(exp(c - a)))
    lo = tail if tail is not None else max(2, n_max // 2)
    ns = np.arange(lo, n_max + 1, dtype=float)
    exponent_fit = float(np.polyfit(np.log(ns), lf[lo:], 1)[0])
    rate_fit = float(np.exp(np.polyfit(ns, lf[lo:], 1)[0]))
    step = lf[n_max] - lf[n_max - 1]
    return RecurrenceSequence(tuple(lf[1:]), step / log(n_max / (n_max - 1)), exp(step),
                              exponent_fit, rate_fit)


def sqrt_rule(n):
    return ceil(sqrt(n))


def power_rule(beta):
    """m(n) = ceil(n^(beta/(beta+1)))."""
    return lambda n: ceil(n ** (beta / (beta + 1)))


def shift_rule(q):
    return lambda n: n - q
