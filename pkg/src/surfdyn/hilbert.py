"""Riemann-Roch dimension sequences of twisted sums D_n = sum_{i<n} P^i D.

h(n) = (D_n.D_n)/2 - (D_n.K)/2 + 1 + p_a is the dimension of the degree n
piece of the twisted section ring only under the assumption that the sheaf
is sigma-positive; that assumption is an input and is never verified, and
every sequence carries a caveat flag saying so.
"""
from dataclasses import dataclass
from math import log
import warnings

import numpy as np

from . import intmat
from .errors import (FormalResultWarning, InsufficientDataError, ParityError,
                     PreconditionError, DataConsistencyError)

SIGMA_POSITIVE_CAVEAT = ("h(n) equals the section-ring dimension only if the sheaf is "
                         "sigma-positive; this is assumed, not checked")
SNAP = 0.02
MIN_TAIL = 8


def _warn_if_formal(M):
    if not M.stability.certified:
        warnings.warn(f"twisted sums use the formal powers of P (stability {M.stability.kind})",
                      FormalResultWarning, stacklevel=3)


def twisted_sum(M, D, n):
    _warn_if_formal(M)
    M.lattice._own(D)
    total, v = [0] * D.rank, D.coeffs
    for _ in range(n):
        total = [a + b for a, b in zip(total, v)]
        v = intmat.matvec(M.P, v)
    return M.lattice.divisor(total)


def rr_dimension(L, Dn):
    dd = L.intersect(Dn, Dn)
    dk = L.intersect(Dn, L.canonical)
    if (dd - dk) % 2:
        raise ParityError(f"(D.D) - (D.K) = {dd - dk} is odd for {Dn.coeffs}: "
                          f"Riemann-Roch value is not an integer")
    return (dd - dk) // 2 + 1 + L.pa


@dataclass(frozen=True)
class DivisorSequence:
    D: object
    terms: tuple
    self_ints: tuple
    k_ints: tuple
    h: tuple  # h[0] = 1 by convention; Riemann-Roch for n >= 1
    caveat: str = SIGMA_POSITIVE_CAVEAT

    def __post_init__(self):
        if not self.terms[0].is_zero():
            raise DataConsistencyError("D_0 must be zero")
        for n, (s, k) in enumerate(zip(self.self_ints, self.k_ints)):
            if (s - k) % 2:
                raise ParityError(f"parity fails at n = {n}: (D_n.D_n) - (D_n.K) is odd")

    @property
    def n_max(self):
        return len(self.terms) - 1

    def rows(self):
        for n in range(len(self.terms)):
            yield n, self.terms[n].coeffs, self.self_ints[n], self.k_ints[n], self.h[n]


def hilbert_sequence(L, M, D, n_max):
    """D_n, (D_n.D_n), (D_n.K) and h(n) for n = 0..n_max."""
    if L.intersect(D, D) <= 0:
        raise PreconditionError("D must have (D.D) > 0")
    if L.known_curves and not L.is_nef_against(D, [C for _, C in L.known_curves]):
        raise PreconditionError(f"D = {D.coeffs} is not nef against the known curves")
    _warn_if_formal(M)
    terms, selfs, kints, hs = [], [], [], []
    total, v = [0] * L.rank, D.coeffs
    for n in range(n_max + 1):
        Dn = L.divisor(total)
        terms.append(Dn)
        selfs.append(L.intersect(Dn, Dn))
        kints.append(L.intersect(Dn, L.canonical))
        hs.append(1 if n == 0 else rr_dimension(L, Dn))
        total = [a + b for a, b in zip(total, v)]
        v = intmat.matvec(M.P, v)
    return DivisorSequence(D, tuple(terms), tuple(selfs), tuple(kints), tuple(hs))


@dataclass(frozen=True)
class RecurrenceReport:
    applicable: bool
    reason: str
    N: int
    checked: int

    @property
    def ok(self):
        return self.applicable


def selfint_recurrence_check(L, M, D, b_max):
    """(P^b D . P^a D) = (P^{b-a} D . D) + a N for 0 <= a <= b <= b_max.

    N = sum_i (D.E_i)^2.  Only meaningful when P E_i = E_i and the E_i are
    pairwise orthogonal; otherwise the check is skipped and the report says
    why.
    """
    holds, why = M.satisfies_standard_hypothesis()
    if not holds:
        return RecurrenceReport(False, why, 0, 0)
    N = sum(L.intersect(D, E) ** 2 for E in M.exceptional)
    powers, v = [], D.coeffs
    for _ in range(b_max + 1):
        powers.append(v)
        v = intmat.matvec(M.P, v)
    Q = L.intersection
    base = [intmat.bilinear(p, Q, D.coeffs) for p in powers]
    checked = 0
    for b in range(b_max + 1):
        for a in range(b + 1):
            lhs = intmat.bilinear(powers[b], Q, powers[a])
            if lhs != base[b - a] + a * N:
                raise DataConsistencyError(
                    f"(P^{b}D.P^{a}D) = {lhs} but (P^{b - a}D.D) + {a}N = {base[b - a] + a * N}")
            checked += 1
    return RecurrenceReport(True, "", N, checked)


def fit_growth(seq, tail_start=None, first_index=1, snap=SNAP, min_tail=MIN_TAIL):
    """Read (rho_hat, j_hat) off a positive sequence with a_n ~ n^j rho^n.

    ``seq[k]`` is a_{first_index + k}.  On the tail n >= tail_start (default:
    the upper half) ln a_n is fitted jointly as c + n ln rho + k ln n.  If
    |rho_hat - 1| < snap then rho_hat = 1 and j_hat is the rounded slope of
    ln a_n against ln n; otherwise j_hat is the rounded slope of
    ln a_n - n ln rho_hat against ln n.
    """
    ns = np.arange(first_index, first_index + len(seq), dtype=float)
    if tail_start is None:
        tail_start = first_index + len(seq) // 2
    mask = ns >= tail_start
    if mask.sum() < min_tail:
        raise InsufficientDataError(f"tail has {int(mask.sum())} points, need at least {min_tail}")
    tail = [a for a, keep in zip(seq, mask) if keep]
    if any(a <= 0 for a in tail):
        raise PreconditionError("sequence must be positive on the tail")
    n = ns[mask]
    y = np.array([log(a) for a in tail])  # math.log accepts ints beyond float range
    ln = np.log(n)
    A = np.column_stack([np.ones_like(n), n, ln])
    coef = np.linalg.lstsq(A, y, rcond=None)[0]
    rho_hat = float(np.exp(coef[1]))
    if abs(rho_hat - 1) < snap:
        slope = np.polyfit(ln, y, 1)[0]
        return 1.0, int(round(slope))
    slope = np.polyfit(ln, y - n * np.log(rho_hat), 1)[0]
    return rho_hat, int(round(slope))
