"""Growth data (rho, j) of a pullback matrix and the resulting verdicts.

rho is the spectral radius of P and j + 1 the size of the largest Jordan
block at an eigenvalue of modulus rho.  rho is never carried as a bare
float: it is an irreducible integer polynomial together with an isolating
interval with rational endpoints, so that the questions "rho = 1?" and
"rho > 1?" are settled exactly.
"""
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import isqrt, log
import warnings

import mpmath
import sympy

from . import intmat, polys
from .errors import (FormalResultWarning, InternalError, PrecisionError, PreconditionError,
                     StructureError)

_X, _Y = sympy.symbols("x y")

# Modulus comparison tolerance, then 4 more digits per escalation step.
TOL_START = 1e-8
TOL_FLOOR = 1e-40
RHO_WIDTH = Fraction(1, 10**15)
FIT_RANGE = (20, 60)
WIDE_FIT = tuple(2**k for k in range(4, 13))


class Case(str, Enum):
    BOUNDED = "Case1_bounded"
    LINEAR_FIBRATION = "Case2_linear_fibration"
    QUADRATIC = "Case3_quadratic"
    EXPONENTIAL = "Case4_exponential"


class Geometric(str, Enum):
    YES = "yes"
    NO = "no"
    NOT_DETERMINED = "not_determined"


class GK(str, Enum):
    GK3 = "gk3"
    GK4 = "gk4"
    GK5 = "gk5"
    EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class SpectralRadius:
    """rho as (irreducible factor, rational isolating interval).

    ``exact`` holds the integer value when rho is rational (then lo = hi).
    ``factors`` lists every irreducible factor of the characteristic
    polynomial having a root of modulus exactly rho.
    """

    minpoly: tuple
    lo: Fraction
    hi: Fraction
    exact: object = None
    factors: tuple = ()
    tolerance: float = TOL_START

    @property
    def value(self):
        return float((self.lo + self.hi) / 2)

    def is_one(self):
        return self.exact == 1

    def exceeds_one(self):
        return self.lo > 1 or (self.exact is not None and self.exact > 1)

    def describe(self):
        if self.exact is not None:
            return f"{self.exact} (root of {polys.to_string(self.minpoly)})"
        return f"{mpmath.nstr(mpmath.mpf(self.lo.numerator) / self.lo.denominator, 15)} " \
               f"(root modulus of {polys.to_string(self.minpoly)})"


@dataclass(frozen=True)
class GrowthData:
    rho: SpectralRadius
    j: int
    case: Case
    geometric: Geometric
    gk_verdict: GK
    formal: bool = False
    certificates: tuple = ()
    fibration_flag: bool = False
    notes: tuple = field(default=())

    @property
    def pair(self):
        return (self.rho.exact if self.rho.exact is not None else self.rho.value, self.j)


def char_poly(P):
    """det(xI - P), integer coefficients highest degree first."""
    return polys.charpoly_berkowitz(intmat.as_matrix(P))


def _factor_int(p):
    """Irreducible factors over Q of an integer polynomial, with multiplicities."""
    _, facs = sympy.Poly(list(p), _X).factor_list()
    out = []
    for f, mult in facs:
        c = [int(a) for a in f.all_coeffs()]
        if c[0] < 0:
            c = [-a for a in c]
        out.append((tuple(c), mult))
    return out


def _max_modulus(f, dps):
    if len(f) == 2:
        return mpmath.mpf(abs(f[1])) / abs(f[0])
    for steps in (100, 400, 1600):
        try:
            with mpmath.workdps(dps):
                roots = mpmath.polyroots(list(f), maxsteps=steps, extraprec=2 * dps)
                return max(abs(r) for r in roots)
        except mpmath.libmp.NoConvergence:
            continue
    raise PrecisionError(f"root finding did not converge for {polys.to_string(f)} at {dps} digits")


def _modulus_resultant(f):
    """Res_y(f(y), y^n f(x/y)); its roots are all products of two roots of f."""
    n = len(f) - 1
    fy = sum(c * _Y ** (n - i) for i, c in enumerate(f))
    g = sum(c * _X ** (n - i) * _Y ** i for i, c in enumerate(f))
    r = sympy.Poly(sympy.resultant(fy, g, _Y), _X)
    return tuple(int(a) for a in r.all_coeffs())


def _to_fraction(x):
    m, e = mpmath.mpf(x).man_exp
    return Fraction(int(m)) * (Fraction(2) ** e if e >= 0 else Fraction(1, 2 ** -e))


def _isolate_near(p, guess, width):
    """Interval of width <= ``width`` around the unique root of p near ``guess``."""
    g = _to_fraction(guess)
    delta = Fraction(1, 10**6) * max(1, abs(g))
    chain = polys.sturm_chain(p)
    for _ in range(200):
        if polys.evaluate(p, g) == 0:
            return g, g
        cnt = polys.count_real_roots(p, g - delta, g + delta, chain)
        if cnt == 1:
            return polys.isolate_root(p, g - delta, g + delta, width)
        if cnt == 0:
            delta *= 2
        else:
            delta /= 16
    raise PrecisionError("could not isolate the root near the numerical estimate")


def _isolate_on_factors(R, guess, width):
    """As :func:`_isolate_near`, on the irreducible factor of R vanishing near ``guess``.

    R has degree n^2, too large for a Fraction Sturm chain; its factors are
    counted with sympy and the root is then bisected by signs.
    """
    g = _to_fraction(guess)
    delta = Fraction(1, 10**6) * max(1, abs(g))
    facs = [sympy.Poly(list(f), _X) for f, _ in _factor_int(R)]
    for _ in range(200):
        lo, hi = g - delta, g + delta
        counts = [F.count_roots(sympy.Rational(lo.numerator, lo.denominator),
                                sympy.Rational(hi.numerator, hi.denominator)) for F in facs]
        if sum(counts) == 1:
            F = facs[counts.index(1)]
            f = tuple(int(c) for c in F.all_coeffs())
            if polys.evaluate(f, lo) == 0:
                delta /= 16
                continue
            return polys.bisect_root(f, lo, hi, width)
        delta = delta * 2 if sum(counts) == 0 else delta / 16
    raise PrecisionError("could not isolate rho^2 among the roots of the modulus resultant")


def _sqrt_interval(lo, hi):
    S = 10**24
    down = Fraction(isqrt(lo.numerator * S * S // lo.denominator), S)
    up_sq = -(-(hi.numerator * S * S) // hi.denominator)
    r = isqrt(up_sq)
    up = Fraction(r if r * r == up_sq else r + 1, S)
    return down, up


def _is_cyclotomic(f):
    return sympy.Poly(list(f), _X).is_cyclotomic


def _confirm_tie(factors, rho_sq_guess):
    """True iff all factors share the same maximal root modulus (exactly)."""
    res = [_modulus_resultant(f) for f in factors]
    gcd = sympy.Poly(list(res[0]), _X)
    for r in res[1:]:
        gcd = sympy.gcd(gcd, sympy.Poly(list(r), _X))
    gcd = tuple(int(a) for a in sympy.Poly(gcd, _X).all_coeffs())
    if len(gcd) < 2:
        return False
    g = _to_fraction(rho_sq_guess)
    delta = Fraction(1, 10**6) * max(1, g)
    if polys.count_real_roots(gcd, g - delta, g + delta) != 1:
        return False
    return all(polys.count_real_roots(r, g - delta, g + delta) == 1 for r in res)


def spectral_radius(P, tol=TOL_START):
    """rho(P) as a :class:`SpectralRadius`.

    Roots of each irreducible factor are located with mpmath; factors whose
    maximal modulus is within ``tol`` of the maximum are confirmed as exact
    ties (cyclotomic test at rho = 1, a common root of the product
    resultants otherwise) or the tolerance is tightened.  When no separation
    is reached at 1e-40 a :class:`PrecisionError` is raised.
    """
    P = intmat.as_matrix(P)
    cp = char_poly(P)
    factors = [f for f, _ in _factor_int(cp)]
    while True:
        dps = int(-mpmath.log10(tol)) * 2 + 20
        moduli = [_max_modulus(f, dps) for f in factors]
        top = max(moduli)
        group = [f for f, m in zip(factors, moduli) if top - m < tol]
        ok = True
        if top < tol:
            return SpectralRadius((1, 0), Fraction(0), Fraction(0), 0, ((1, 0),), tol)
        if len(group) > 1:
            if all(_is_cyclotomic(f) for f in group):
                ok = True
            elif abs(top - 1) < tol:
                ok = False
            else:
                with mpmath.workdps(dps):
                    ok = _confirm_tie(group, top * top)
        if ok:
            break
        tol /= 10**4
        if tol < TOL_FLOOR:
            raise PrecisionError("moduli of eigenvalues not separated at tolerance 1e-40")
    return _pin_rho(group, top, tol)


def _pin_rho(group, top, tol):
    linear = [f for f in group if len(f) == 2]
    if linear:
        f = linear[0]
        r = abs(Fraction(-f[1], f[0]))
        assert r.denominator == 1, "monic factor with rational root"
        r = int(r)
        return SpectralRadius(f, Fraction(r), Fraction(r), r, tuple(group), tol)
    if all(_is_cyclotomic(f) for f in group):
        return SpectralRadius(group[0], Fraction(1), Fraction(1), 1, tuple(group), tol)
    f = group[0]
    top_f = float(top)
    near = (Fraction(top_f) - Fraction(1, 10**6), Fraction(top_f) + Fraction(1, 10**6))
    chain_pos = polys.count_real_roots(f, *near)
    neg = tuple(c if (len(f) - 1 - i) % 2 == 0 else -c for i, c in enumerate(f))
    r_int = int(mpmath.nint(top))
    if chain_pos == 1:
        lo, hi = _isolate_near(f, top, RHO_WIDTH)
    elif polys.count_real_roots(neg, *near) == 1:
        lo, hi = _isolate_near(neg, top, RHO_WIDTH)
    else:
        R = _modulus_resultant(f)
        rr = r_int * r_int
        if r_int > 0 and polys.evaluate(R, rr) == 0 and abs(top - r_int) < tol:
            return SpectralRadius(f, Fraction(r_int), Fraction(r_int), r_int, tuple(group), tol)
        slo, shi = _isolate_on_factors(R, top * top, RHO_WIDTH * max(1, int(top)))
        lo, hi = _sqrt_interval(slo, shi)
    if lo == hi and lo.denominator == 1:
        return SpectralRadius(f, lo, hi, int(lo), tuple(group), tol)
    return SpectralRadius(f, lo, hi, None, tuple(group), tol)


def _poly_at_matrix(f, P):
    d = len(P)
    acc = intmat.zeros(d)
    for c in f:
        acc = intmat.matadd(intmat.matmul(acc, P), intmat.matscale(c, intmat.identity(d)))
    return acc


def minpoly_exponent(f, P):
    """Exponent of the irreducible f in the minimal polynomial of P.

    The smallest k with rank f(P)^k = rank f(P)^(k+1): from there on the
    kernel is the whole generalized eigenspace of the roots of f.
    """
    A = _poly_at_matrix(f, P)
    power, r, k = A, intmat.rank(A), 1
    if r == len(P):
        return 0
    while True:
        nxt = intmat.matmul(power, A)
        r2 = intmat.rank(nxt)
        if r2 == r:
            return k
        power, r, k = nxt, r2, k + 1


def norm_growth(P, n_max):
    """[max-abs entry of P^n for n = 1..n_max]."""
    P = intmat.as_matrix(P)
    out, A = [], P
    for n in range(1, n_max + 1):
        if n > 1:
            A = intmat.matmul(A, P)
        out.append(intmat.max_abs_entry(A))
    return out


def _best_index(ys, ls, j_max):
    best, best_res = None, None
    for j in range(0, j_max + 1):
        r = [y - j * l for y, l in zip(ys, ls)]
        m = sum(r) / len(r)
        res = sum((x - m) ** 2 for x in r)
        if best_res is None or res < best_res:
            best, best_res = j, res
    return best


def fitted_norm_index(P, rho, n_range=FIT_RANGE, j_max=None, ns=None):
    """Integer j minimizing the spread of log(|P^n|/rho^n) - j log n.

    ``ns`` overrides the contiguous ``n_range`` with explicit exponents.
    """
    P = intmat.as_matrix(P)
    ns = list(range(n_range[0], n_range[1] + 1)) if ns is None else list(ns)
    if ns == list(range(ns[0], ns[-1] + 1)):
        all_norms = norm_growth(P, ns[-1])
        norms = [all_norms[n - 1] for n in ns]
    else:
        norms = [intmat.max_abs_entry(intmat.matpow(P, n)) for n in ns]
    if any(v == 0 for v in norms):
        return None
    lr = log(rho)
    ys = [log(v) - n * lr for v, n in zip(norms, ns)]
    return _best_index(ys, [log(n) for n in ns], j_max if j_max is not None else len(P))


def jordan_index(P, rho_data=None, cross_check=True):
    """j with j + 1 the largest Jordan block size at eigenvalues of modulus rho.

    The exact value comes from ranks of f(P)^k.  The cross-check fits norm
    growth on n = 20..60 and, if that window disagrees (large constants in
    a conjugated basis can mask a ``n`` factor there), on n = 2^4..2^12.
    """
    P = intmat.as_matrix(P)
    rho_data = rho_data or spectral_radius(P)
    j = max(minpoly_exponent(f, P) for f in rho_data.factors) - 1
    if cross_check and rho_data.value > 0:
        fit = fitted_norm_index(P, rho_data.value)
        if fit is not None and fit != j:
            fit = fitted_norm_index(P, rho_data.value, ns=WIDE_FIT)
        if fit is not None and fit != j:
            raise InternalError(
                f"minimal-polynomial index j = {j} disagrees with norm-growth fit j = {fit}")
    return j


def power_iteration_rho(L, M, ample, n_max):
    """Exact ratios (P^{n+1}E.E)/(P^nE.E) for n = 0..n_max-1."""
    if L.intersect(ample, ample) <= 0:
        raise PreconditionError("power iteration needs (E.E) > 0")
    if L.known_curves and not L.is_nef_against(ample, [C for _, C in L.known_curves]):
        raise PreconditionError("probe class is not nef against the known curves")
    if not M.stability.certified:
        warnings.warn("ratios computed from the formal power of P", FormalResultWarning, stacklevel=2)
    vals, v = [], ample.coeffs
    for _ in range(n_max + 1):
        vals.append(intmat.bilinear(v, L.intersection, ample.coeffs))
        v = intmat.matvec(M.P, v)
    out = []
    for n in range(n_max):
        if vals[n] == 0:
            raise PreconditionError(f"(P^{n}E.E) = 0; ratio undefined")
        out.append(Fraction(vals[n + 1], vals[n]))
    return out


def gk_for(rho, j):
    if rho.exceeds_one():
        return GK.EXPONENTIAL
    return {0: GK.GK3, 1: GK.GK4, 2: GK.GK5}[j]


def classify(P, stability=None, fibration_flag=False):
    """Growth data, case, geometricity and GK verdict of a pullback matrix."""
    P = intmat.as_matrix(P)
    certificates, formal = [], True
    if stability is not None:
        certificates.append(stability.describe())
        formal = not stability.certified
    if formal:
        warnings.warn("stability not certified: (rho, j) read off P only formally",
                      FormalResultWarning, stacklevel=2)
    rho = spectral_radius(P)
    j = jordan_index(P, rho)
    notes = []
    if rho.exceeds_one():
        case, geo = Case.EXPONENTIAL, Geometric.NOT_DETERMINED
    elif rho.is_one():
        if j > 2:
            raise StructureError(f"rho = 1 with j = {j}: not the growth data of a surface map")
        case = (Case.BOUNDED, Case.LINEAR_FIBRATION, Case.QUADRATIC)[j]
        geo = Geometric.NO if j == 1 else Geometric.YES
    else:
        raise StructureError("rho < 1: P is not the pullback of a birational map")
    if fibration_flag and case is not Case.LINEAR_FIBRATION:
        notes.append("fibration data supplied outside the linear-growth case")
    return GrowthData(rho, j, case, geo, gk_for(rho, j), formal, tuple(certificates),
                      bool(fibration_flag), tuple(notes))


def verdict_report(g):
    """Flat mapping of a :class:`GrowthData` for table or JSON output."""
    return {
        "rho": g.rho.describe(),
        "rho_decimal": f"{g.rho.value:.15g}",
        "rho_minpoly": polys.to_string(g.rho.minpoly),
        "rho_interval": [str(g.rho.lo), str(g.rho.hi)],
        "j": g.j,
        "case": g.case.value,
        "geometric": g.geometric.value,
        "gk": g.gk_verdict.value,
        "formal": g.formal,
        "certificates": list(g.certificates),
        "notes": list(g.notes),
    }
