"""Rational self-maps of the projective plane in coordinates.

Forms are homogeneous integer polynomials in three variables stored as
sparse dicts {(i, j, k): coefficient}.  Points are primitive integer
triples.  Fundamental points and contracted curves are inputs, checked for
consistency (Jacobian divisibility, images at sample points), never solved
for.  Stability and unbalancedness are certified only up to a finite
horizon.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import ceil, gcd
import random

import sympy

from .errors import CapabilityError, DataConsistencyError, ResourceError
from .lattice import projective_plane
from .maps import PullbackMapData, Stability

_VARS = sympy.symbols("x y z")
_ALIASES = {"a": _VARS[0], "b": _VARS[1], "c": _VARS[2],
            "x": _VARS[0], "y": _VARS[1], "z": _VARS[2]}

MAX_DEGREE = 4096
MAX_DIGITS = 10**6


# -- points ------------------------------------------------------------------


class ProjPoint(tuple):
    """Primitive integer triple, first nonzero coordinate positive."""

    def __new__(cls, coords):
        fr = [Fraction(c) for c in coords]
        if len(fr) != 3 or not any(fr):
            raise ValueError("a projective point needs three coordinates, not all zero")
        den = reduce(lambda a, b: a * b // gcd(a, b), (f.denominator for f in fr), 1)
        ints = [int(f * den) for f in fr]
        g = reduce(gcd, ints, 0)
        ints = [v // g for v in ints]
        if next(v for v in ints if v) < 0:
            ints = [-v for v in ints]
        return super().__new__(cls, ints)

    def __repr__(self):
        return "({}:{}:{})".format(*self)


# -- sparse trivariate forms -------------------------------------------------


def _fmul(p, q):
    out = {}
    for m1, a in p.items():
        for m2, b in q.items():
            m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
            v = out.get(m, 0) + a * b
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _fadd_into(acc, p, c=1):
    for m, a in p.items():
        v = acc.get(m, 0) + c * a
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)


def form_degree(f):
    degs = {sum(m) for m in f}
    if len(degs) != 1:
        raise DataConsistencyError("form is not homogeneous")
    return degs.pop()


def _to_sympy(f):
    return sympy.Poly.from_dict(dict(f), *_VARS)


def _from_sympy(P):
    return {tuple(int(e) for e in m): int(c) for m, c in P.terms() if c}


def parse_form(s):
    if isinstance(s, dict):
        return {tuple(int(e) for e in m): int(c) for m, c in s.items() if c}
    P = sympy.Poly(sympy.sympify(s, locals=_ALIASES), *_VARS)
    return _from_sympy(P)


def form_to_string(f):
    return str(_to_sympy(f).as_expr()).replace("x", "a").replace("y", "b").replace("z", "c")


def _eval_form(f, vals, mul, add, zero, one):
    """Evaluate a form on ring elements with caller-supplied ring operations."""
    cache = [{0: one}, {0: one}, {0: one}]

    def power(i, e):
        c = cache[i]
        if e not in c:
            k = max(k for k in c if k <= e)
            v = c[k]
            while k < e:
                v = mul(v, vals[i])
                k += 1
                c[k] = v
        return c[e]

    acc = zero
    for (i, j, k), a in f.items():
        acc = add(acc, a, mul(mul(power(0, i), power(1, j)), power(2, k)))
    return acc


def _eval_int(f, p):
    return sum(a * p[0] ** i * p[1] ** j * p[2] ** k for (i, j, k), a in f.items())


def _digits(f):
    return max((len(str(abs(a))) for a in f.values()), default=1)


# -- maps --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class RationalMapP2:
    forms: tuple
    fundamental_points: tuple = ()
    contracted_curves: tuple = ()  # (label, form, ProjPoint)
    name: str = ""
    validate: bool = field(default=True, repr=False)

    @classmethod
    def build(cls, forms, fundamental_points=(), contracted_curves=(), name="", validate=True):
        fs = tuple(parse_form(f) for f in forms)
        pts = tuple(ProjPoint(p) for p in fundamental_points)
        curves = []
        for item in contracted_curves:
            if len(item) == 3:
                label, f, img = item
            else:
                f, img = item
                label = None
            f = parse_form(f)
            curves.append((label or form_to_string(f), f, ProjPoint(img)))
        return cls(fs, pts, tuple(curves), name, validate)

    def __post_init__(self):
        if len(self.forms) != 3:
            raise DataConsistencyError("a map of P^2 needs three forms")
        degs = {form_degree(f) for f in self.forms if f}
        if len(degs) != 1 or not all(self.forms):
            raise DataConsistencyError("forms must be nonzero, homogeneous, of one degree")
        if not self.validate:
            return
        g = reduce(sympy.gcd, [_to_sympy(f) for f in self.forms])
        if g.total_degree() > 0:
            raise DataConsistencyError(f"forms share the factor {g.as_expr()}")
        for p in self.fundamental_points:
            if evaluate(self, p) is not None:
                raise DataConsistencyError(f"listed fundamental point {p} is a point of definition")
        if self.contracted_curves:
            J = self.jacobian()
            rng = random.Random(0)
            for label, f, img in self.contracted_curves:
                if not sympy.div(J, _to_sympy(f))[1].is_zero:
                    raise DataConsistencyError(
                        f"contracted curve {label} does not divide the Jacobian determinant")
                for q in _points_on(f, rng, 3):
                    v = evaluate(self, q)
                    if v is not None and v != img:
                        raise DataConsistencyError(
                            f"curve {label} maps {q} to {v}, not to the listed image {img}")

    @property
    def degree(self):
        return form_degree(self.forms[0])

    def jacobian(self):
        Ps = [_to_sympy(f) for f in self.forms]
        M = sympy.Matrix([[P.diff(v).as_expr() for v in _VARS] for P in Ps])
        return sympy.Poly(M.det(method="berkowitz"), *_VARS)

    def describe(self):
        return "(" + " : ".join(form_to_string(f) for f in self.forms) + ")"


def _points_on(f, rng, count):
    """Sample rational points on the curve f = 0 when f is linear in some variable."""
    P = _to_sympy(f)
    for idx, v in enumerate(_VARS):
        if P.degree(v) != 1:
            continue
        A = P.diff(v)
        B = (P - A * sympy.Poly(v, *_VARS))
        out, tries = [], 0
        while len(out) < count and tries < 50:
            tries += 1
            others = [rng.randint(-9, 9) for _ in range(2)]
            sub = {}
            it = iter(others)
            for j, w in enumerate(_VARS):
                if j != idx:
                    sub[w] = next(it)
            a = A.as_expr().subs(sub)
            b = B.as_expr().subs(sub)
            if a == 0:
                continue
            pt = [0, 0, 0]
            for j, w in enumerate(_VARS):
                pt[j] = sympy.Rational(-b, a) if j == idx else sub[w]
            if any(pt):
                out.append(ProjPoint(sympy.Rational(c) for c in pt))
        return out
    return []


def identity_map():
    return RationalMapP2.build(["x", "y", "z"], name="identity")


def evaluate(M, p):
    """Image point, or None where all three forms vanish."""
    vals = [_eval_int(f, p) for f in M.forms]
    if not any(vals):
        return None
    return ProjPoint(vals)


def _compose_forms(F, G):
    """F(G1, G2, G3) for form triples F, G."""

    def add(acc, a, term):
        out = dict(acc)
        _fadd_into(out, term, a)
        return out

    one = {(0, 0, 0): 1}
    return [_eval_form(f, G, _fmul, add, {}, one) for f in F]


def compose_reduce(M1, M2, budget=(MAX_DEGREE, MAX_DIGITS)):
    """M1 o M2 (substitute M2 into M1), divided by the gcd of the results."""
    max_deg, max_digits = budget
    if M1.degree * M2.degree > max_deg:
        raise ResourceError(f"composition degree {M1.degree * M2.degree} exceeds {max_deg}")
    raw = _compose_forms(M1.forms, M2.forms)
    g = reduce(sympy.gcd, [_to_sympy(f) for f in raw])
    if g.total_degree() > 0 or abs(g.LC()) != 1:
        raw = [_from_sympy(sympy.div(_to_sympy(f), g)[0]) for f in raw]
    content = reduce(gcd, (a for f in raw for a in f.values()), 0)
    if content > 1:
        raw = [{m: a // content for m, a in f.items()} for f in raw]
    if max(_digits(f) for f in raw) > max_digits:
        raise ResourceError(f"coefficients exceed {max_digits} digits")
    return RationalMapP2(tuple(raw), validate=False)


def degree_sequence(M, n_max, budget=(MAX_DEGREE, MAX_DIGITS)):
    """[deg sigma^n for n = 1..n_max]; on budget overrun the partial list rides on the error."""
    degs, cur = [M.degree], M
    for n in range(2, n_max + 1):
        try:
            cur = compose_reduce(M, cur, budget)
        except ResourceError as exc:
            raise ResourceError(f"degree sequence stopped at n = {n}: {exc}", partial=degs) from exc
        degs.append(cur.degree)
    return degs[:n_max]


def orbit(M, p, steps):
    """[(k, point or None)] for k = 0..steps; stops after the first undefined step."""
    out = [(0, ProjPoint(p))]
    q = out[0][1]
    for k in range(1, steps + 1):
        q = evaluate(M, q)
        out.append((k, q))
        if q is None:
            break
    return out


# -- stability ---------------------------------------------------------------


def _forward_check(M, horizon):
    """First (curve label, n) with sigma^n(C) undefined-for-sigma, else None."""
    if not M.contracted_curves:
        return None, []
    trail = []
    for label, _, img in M.contracted_curves:
        q = img
        for n in range(1, horizon + 1):
            if evaluate(M, q) is None:
                return {"curve": label, "n": n, "point": list(q)}, trail
            q = evaluate(M, q)
        trail.append((label, list(q)))
    return None, trail


def stability_check(M, M_inv, horizon):
    """Stability certificate up to ``horizon`` from orbits of contracted curves.

    A curve C contracted by sigma to p witnesses instability when
    sigma^(n-1)(p) is a fundamental point for some n <= horizon.  The same
    check runs on sigma^-1, and the two verdicts must agree.
    """
    for name, F in (("map", M), ("inverse", M_inv)):
        if F.degree > 1 and not F.contracted_curves:
            raise CapabilityError(f"stability check needs the contracted curves of the {name}")
        if F.degree > 1 and not F.fundamental_points:
            raise CapabilityError(f"stability check needs the fundamental points of the {name}")
    w, _ = _forward_check(M, horizon)
    w_inv, _ = _forward_check(M_inv, horizon)
    if (w is None) != (w_inv is None):
        raise DataConsistencyError(
            f"stability verdicts disagree within horizon {horizon}: map {w}, inverse {w_inv}")
    if w is not None:
        return Stability("known_unstable", source=f"orbit check, horizon {horizon}", witness=w)
    if M.degree == 1:
        return Stability.automorphism("linear map of P^2")
    return Stability.stable(horizon, f"orbit check of contracted curves, horizon {horizon}")


# -- unbalanced points -------------------------------------------------------


def _series_mul(N):
    def mul(a, b):
        out = [0] * N
        for i, x in enumerate(a):
            if x:
                for j in range(N - i):
                    out[i + j] += x * b[j]
        return out
    return mul


def _series_add(acc, c, term):
    return [x + c * y for x, y in zip(acc, term)]


def _arc_limit(M, k, p, dirs, N):
    """lim_{s->0} sigma^k(p + s v1 + s^2 v2 + s^3 v3), or None if N terms run out."""
    mul = _series_mul(N)
    zero, one = [0] * N, [1] + [0] * (N - 1)
    vals = []
    for i in range(3):
        s = [0] * N
        s[0] = p[i]
        for e, v in enumerate(dirs, start=1):
            if e < N:
                s[e] = v[i]
        vals.append(s)
    avail = N
    for _ in range(k):
        vals = [_eval_form(f, vals, mul, _series_add, zero, one) for f in M.forms]
        val = min((next((i for i, c in enumerate(s) if c), N) for s in vals))
        if val >= avail:
            return None
        avail -= val
        vals = [s[val:] + [0] * val for s in vals]
        g = reduce(gcd, (c for s in vals for c in s), 0)
        if g > 1:
            vals = [[c // g for c in s] for s in vals]
    return ProjPoint([s[0] for s in vals])


def undefined_iterate(M, p, k, arcs=3, seed=0, N=8, N_max=256):
    """True when sigma^k is certifiably undefined at p.

    Limits along random polynomial arcs through p are computed with
    truncated power series; two distinct limits prove sigma^k has no value
    at p.  Agreement of all limits is reported as False (no certificate).
    """
    rng = random.Random(seed)
    dirs = [[[rng.randint(-5, 5) for _ in range(3)] for _ in range(3)] for _ in range(arcs)]
    while True:
        limits = [_arc_limit(M, k, p, d, N) for d in dirs]
        if all(L is not None for L in limits):
            return len(set(limits)) > 1
        N *= 2
        if N > N_max:
            raise ResourceError(f"arc limits of sigma^{k} need more than {N_max} series terms")


@dataclass(frozen=True)
class UnbalancedEvidence:
    point: ProjPoint
    backward_orbit: tuple
    undefined_at: tuple
    horizon: int

    @property
    def flagged(self):
        return (len(self.backward_orbit) == self.horizon + 1
                and len(self.undefined_at) >= ceil(self.horizon / 2))


@dataclass(frozen=True)
class UnbalancedScan:
    applicable: bool
    reason: str
    evidence: tuple = ()
    caveat: str = "finite-horizon evidence, not a proof of unbalancedness"

    @property
    def points(self):
        return [e.point for e in self.evidence if e.flagged]


def unbalanced_scan(M, M_inv, horizon, seed=0):
    """Evidence that the images p of curves contracted by sigma^-1 are unbalanced.

    For each such p: the backward orbit sigma^-n(p), n <= horizon, must be
    defined pointwise, and sigma^k must be certifiably undefined at p for at
    least ceil(horizon / 2) of the k <= horizon.
    """
    cert = stability_check(M, M_inv, horizon)
    if cert.kind == "known_unstable":
        return UnbalancedScan(False, f"map is unstable: {cert.witness}")
    if cert.kind == "certified_automorphism":
        return UnbalancedScan(True, "automorphism: no fundamental points")
    out = []
    for _, _, p in M_inv.contracted_curves:
        back = [p]
        q = p
        for _ in range(horizon):
            q = evaluate(M_inv, q)
            if q is None:
                break
            back.append(q)
        undefined = tuple(k for k in range(1, horizon + 1) if undefined_iterate(M, p, k, seed=seed + k))
        out.append(UnbalancedEvidence(p, tuple(back), undefined, horizon))
    return UnbalancedScan(True, "", tuple(out))


# -- bridge to the lattice model ---------------------------------------------


def pullback_number(M):
    return M.degree


def to_pullback_data(M, M_inv, horizon=12, stability=None):
    """Rank-one pullback data on N^1(P^2): P = [deg], E_i = degrees of curves contracted by sigma^-1."""
    L = projective_plane()
    stab = stability or stability_check(M, M_inv, horizon)
    exc = [(form_degree(f),) for _, f, _ in M_inv.contracted_curves]
    return PullbackMapData.build(L, [[M.degree]], [[M_inv.degree]], exc, exc, stab)


# -- catalog maps ------------------------------------------------------------


def standard_cremona():
    return RationalMapP2.build(
        ["y*z", "x*z", "x*y"], [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
        [("a=0", "x", (1, 0, 0)), ("b=0", "y", (0, 1, 0)), ("c=0", "z", (0, 0, 1))],
        name="cremona")


def tau_phi():
    """sigma = tau o phi with phi(a, b, c) = (a + b, b + c, a + c)."""
    y1, y2, y3 = "(x + y)", "(y + z)", "(x + z)"
    return RationalMapP2.build(
        [f"{y2}*{y3}", f"{y1}*{y3}", f"{y1}*{y2}"],
        [(1, 1, -1), (-1, 1, 1), (1, -1, 1)],
        [("a+b=0", y1, (1, 0, 0)), ("b+c=0", y2, (0, 1, 0)), ("a+c=0", y3, (0, 0, 1))],
        name="tau-phi")


def tau_phi_inverse():
    """sigma^-1 = phi^-1 o tau, with 2 phi^-1 = [[1,-1,1],[1,1,-1],[-1,1,1]]."""
    t = ("y*z", "x*z", "x*y")
    rows = ((1, -1, 1), (1, 1, -1), (-1, 1, 1))
    forms = [" + ".join(f"({c})*{t[i]}" for i, c in enumerate(r)) for r in rows]
    return RationalMapP2.build(
        forms, [(1, 0, 0), (0, 1, 0), (0, 0, 1)],
        [("a=0", "x", (1, 1, -1)), ("b=0", "y", (-1, 1, 1)), ("c=0", "z", (1, -1, 1))],
        name="tau-phi-inverse")
