"""Pullback and pushforward of a birational self-map on N^1(X).

The map is known only through its action on the lattice: the matrix of
sigma^* on column vectors, optionally the matrix of sigma_* = (sigma^-1)^*,
the exceptional classes E_i measuring the failure of sigma^* to preserve the
form, and the classes of curves contracted by sigma^-1.  Those inputs are
trusted only after the excess-intersection identity

    (P C . P D) = (C . D) + sum_i (C . E_i)(D . E_i)

has been checked on every pair of basis vectors.
"""
from dataclasses import dataclass, field, replace
from typing import Optional
import warnings

from . import intmat
from .errors import (CapabilityError, DataConsistencyError, DimensionError,
                     FormalResultWarning, StructureError)
from .lattice import DivisorClass, PolarizedLattice

STABILITY_KINDS = ("certified_automorphism", "certified_stable", "unknown", "known_unstable")


@dataclass(frozen=True)
class Stability:
    kind: str = "unknown"
    horizon: Optional[int] = None
    source: str = ""
    witness: Optional[dict] = None

    def __post_init__(self):
        if self.kind not in STABILITY_KINDS:
            raise ValueError(f"unknown stability kind {self.kind!r}")
        if self.kind == "certified_stable" and self.horizon is None:
            raise ValueError("certified_stable needs a horizon")

    @property
    def certified(self):
        return self.kind in ("certified_automorphism", "certified_stable")

    def describe(self):
        if self.kind == "certified_stable":
            text = f"certified_stable(horizon={self.horizon})"
        elif self.kind == "known_unstable" and self.witness:
            text = f"known_unstable(witness={self.witness})"
        else:
            text = self.kind
        return f"{text} [{self.source}]" if self.source else text

    @classmethod
    def automorphism(cls, source=""):
        return cls("certified_automorphism", source=source)

    @classmethod
    def stable(cls, horizon, source=""):
        return cls("certified_stable", int(horizon), source)


@dataclass(frozen=True)
class PullbackMapData:
    lattice: PolarizedLattice
    P: tuple
    P_inv: Optional[tuple] = None
    exceptional: tuple = ()
    contracted: tuple = ()
    stability: Stability = field(default_factory=Stability)
    # Optional nonnegative coefficients writing each E_i over ``contracted``.
    decomposition: Optional[tuple] = None

    @classmethod
    def build(cls, lattice, P, P_inv=None, exceptional=(), contracted=(), stability=None,
              decomposition=None):
        mk = lattice.divisor
        return cls(lattice, intmat.as_matrix(P),
                   intmat.as_matrix(P_inv) if P_inv is not None else None,
                   tuple(mk(c) for c in exceptional), tuple(mk(c) for c in contracted),
                   stability or Stability(),
                   tuple(tuple(int(x) for x in row) for row in decomposition)
                   if decomposition is not None else None)

    def __post_init__(self):
        d = self.lattice.rank
        if intmat.shape(self.P) != (d, d):
            raise DimensionError(f"P must be {d}x{d}")
        if self.P_inv is not None and intmat.shape(self.P_inv) != (d, d):
            raise DimensionError(f"P_inv must be {d}x{d}")
        for C in self.exceptional + self.contracted:
            self.lattice._own(C)
        self._check_excess_identity()
        if self.stability.kind == "certified_automorphism":
            if self.exceptional:
                raise DataConsistencyError("automorphism data must have no exceptional classes")
            if self.P_inv is not None and intmat.matmul(self.P, self.P_inv) != intmat.identity(d):
                raise DataConsistencyError("automorphism data: P * P_inv != identity")
        if self.decomposition is not None:
            self._check_decomposition()

    # -- validation -------------------------------------------------------
    def _check_excess_identity(self):
        L = self.lattice
        basis = L.basis()
        for a, C in enumerate(basis):
            for b, D in enumerate(basis[a:], start=a):
                lhs = L.intersect(self.pullback(C), self.pullback(D)) - L.intersect(C, D)
                rhs = sum(L.intersect(C, E) * L.intersect(D, E) for E in self.exceptional)
                if lhs != rhs:
                    raise DataConsistencyError(
                        f"excess-intersection identity fails on basis pair "
                        f"({L.basis_labels[a]}, {L.basis_labels[b]}): "
                        f"(PC.PD)-(C.D) = {lhs}, sum (C.E)(D.E) = {rhs}")

    def _check_decomposition(self):
        if len(self.decomposition) != len(self.exceptional):
            raise DataConsistencyError("decomposition needs one row per exceptional class")
        for i, (E, row) in enumerate(zip(self.exceptional, self.decomposition)):
            if len(row) != len(self.contracted) or any(c < 0 for c in row):
                raise DataConsistencyError(f"decomposition row {i} is not a nonnegative combination")
            total = self.lattice.divisor((0,) * self.lattice.rank)
            for c, V in zip(row, self.contracted):
                total = total + c * V
            if total != E:
                raise DataConsistencyError(f"decomposition row {i} does not sum to E_{i}")

    # -- actions ----------------------------------------------------------
    def pullback(self, D):
        self.lattice._own(D)
        return DivisorClass(D.lattice_id, intmat.matvec(self.P, D.coeffs))

    def pushforward(self, D):
        if self.P_inv is None:
            raise CapabilityError("pushforward needs inverse pullback data P_inv")
        self.lattice._own(D)
        return DivisorClass(D.lattice_id, intmat.matvec(self.P_inv, D.coeffs))

    def excess_intersection(self, C, D):
        """(PC.PD) - (C.D), checked against sum_i (C.E_i)(D.E_i)."""
        L = self.lattice
        excess = L.intersect(self.pullback(C), self.pullback(D)) - L.intersect(C, D)
        expected = sum(L.intersect(C, E) * L.intersect(D, E) for E in self.exceptional)
        if excess != expected:
            raise DataConsistencyError(
                f"excess-intersection identity fails for pair ({C.coeffs}, {D.coeffs}): "
                f"{excess} != {expected}")
        return excess

    def check_adjointness(self, samples=None):
        """Verify (P C . D) = (C . P_inv D); returns an :class:`AdjointnessReport`."""
        if self.P_inv is None:
            raise CapabilityError("adjointness check needs P_inv")
        L = self.lattice
        if samples is None:
            B = L.basis()
            samples = [(C, D) for C in B for D in B]
        failures = []
        for C, D in samples:
            lhs = L.intersect(self.pullback(C), D)
            rhs = L.intersect(C, self.pushforward(D))
            if lhs != rhs:
                failures.append((C.coeffs, D.coeffs, lhs, rhs))
        return AdjointnessReport(len(samples), tuple(failures))

    def satisfies_standard_hypothesis(self):
        """P E_i = E_i and (E_i . E_l) = 0 for all i, l."""
        L = self.lattice
        for E in self.exceptional:
            if self.pullback(E) != E:
                return False, f"P fixes no exceptional class {E.coeffs}"
        for E in self.exceptional:
            for F in self.exceptional:
                if L.intersect(E, F) != 0:
                    return False, f"(E.E') = {L.intersect(E, F)} != 0 for {E.coeffs}, {F.coeffs}"
        return True, ""


@dataclass(frozen=True)
class AdjointnessReport:
    checked: int
    failures: tuple

    @property
    def ok(self):
        return not self.failures


@dataclass(frozen=True)
class DiscrepancyReport:
    """f^*g^*(D) - (gf)^*(D) on each nef probe D."""

    probes: tuple
    differences: tuple
    nonnegative: Optional[tuple]  # None when no decomposition was supplied
    notes: tuple = ()

    @property
    def ok(self):
        return self.nonnegative is None or all(self.nonnegative)


def iterate(M, n):
    """Matrix of (sigma^*)^n by binary exponentiation.

    This is (sigma^n)^* only for stable maps; without a certificate a
    :class:`FormalResultWarning` is issued and the power is purely formal.
    """
    if n <= 0:
        raise ValueError("iterate needs n >= 1")
    if not M.stability.certified:
        warnings.warn(f"formal power: stability is {M.stability.kind}", FormalResultWarning,
                      stacklevel=2)
    return intmat.matpow(M.P, n)


def compose(M1, M2, nef_probes=(), reference=None, decompositions=None):
    """Formal product data for g o f where M1 = f and M2 = g.

    Returns ``(product, report)``.  The product's matrix is P1 P2 (that is
    f^* g^*).  Its exceptional classes are those of g together with g_* of
    those of f, which makes the excess identity hold by construction.  When
    ``reference`` data for (g o f)^* is given the report lists
    f^*g^*(D) - (gf)^*(D) on each probe; with ``decompositions`` (one
    coefficient list per probe over M1.contracted + M2.contracted) each
    difference is also checked to be that nonnegative combination.  Equality
    of f^*g^* and (gf)^* is never assumed.
    """
    L = M1.lattice
    if M2.lattice != L:
        raise DimensionError("compose needs maps on the same lattice")
    if M2.P_inv is None:
        raise CapabilityError("compose needs P_inv of the outer map to transport exceptional classes")
    P = intmat.matmul(M1.P, M2.P)
    P_inv = intmat.matmul(M2.P_inv, M1.P_inv) if M1.P_inv is not None else None
    exceptional = M2.exceptional + tuple(
        E for E in (M2.pushforward(F) for F in M1.exceptional) if not E.is_zero())
    contracted = M2.contracted + tuple(
        V for V in (M2.pushforward(W) for W in M1.contracted) if not V.is_zero())
    s1, s2 = M1.stability, M2.stability
    if s1.kind == s2.kind == "certified_automorphism":
        stab = Stability.automorphism("composition of automorphisms")
    elif M1.P == M2.P and s1.kind == s2.kind == "certified_stable" and s1.source == s2.source:
        stab = Stability.stable(min(s1.horizon, s2.horizon) // 2, f"square of: {s1.source}")
    else:
        stab = Stability("unknown", source="formal product")
    product = PullbackMapData(L, P, P_inv, exceptional, contracted, stab)

    notes = []
    diffs, nonneg = [], None
    for D in nef_probes:
        if L.known_curves and not L.is_nef_against(D, [C for _, C in L.known_curves]):
            notes.append(f"probe {D.coeffs} fails the nef test against known curves")
    if reference is not None:
        if reference.lattice != L:
            raise DimensionError("reference map lives on another lattice")
        diffs = [product.pullback(D) - reference.pullback(D) for D in nef_probes]
        if decompositions is not None:
            pool = M1.contracted + M2.contracted
            nonneg = []
            for diff, coeffs in zip(diffs, decompositions):
                total = L.divisor((0,) * L.rank)
                for c, V in zip(coeffs, pool):
                    total = total + c * V
                nonneg.append(all(c >= 0 for c in coeffs) and total == diff)
            nonneg = tuple(nonneg)
    else:
        notes.append("no reference (g o f)^* supplied; discrepancy not evaluated")
    report = DiscrepancyReport(tuple(nef_probes), tuple(diffs), nonneg, tuple(notes))
    return product, report


def normalize_model(L, M):
    """Contract (-1)-classes contracted by sigma^-1 until none is left.

    Each step splits off a contracted class V with (V.V) = -1 and conjugates
    P and P_inv through the projection/embedding pair.  Returns
    ``(L', M', log)``; the log records contracted classes and, when only
    (V.V) = 0 classes remain, the rational-fibration case.
    """
    if M.P_inv is None:
        raise CapabilityError("normalize_model needs P_inv")
    log = []
    while True:
        target = next((V for V in M.contracted if L.intersect(V, V) == -1), None)
        if target is None:
            zeros = [V.coeffs for V in M.contracted if L.intersect(V, V) == 0]
            if zeros:
                log.append({"event": "fibration", "classes": zeros,
                            "note": "remaining contracted classes have (V.V) = 0; "
                                    "they are fibres of a rational fibration"})
            elif M.contracted:
                log.append({"event": "stop", "note": "no contracted class with (V.V) = -1"})
            return L, M, log
        R, Kmat = L.contraction_maps(target)
        L2, project = L.contract(target)

        def conj(A):
            return intmat.matmul(intmat.matmul(R, A), Kmat)

        P2 = conj(M.P)
        P2_inv = conj(M.P_inv)
        exc = tuple(E for E in (project(E) for E in M.exceptional) if not E.is_zero())
        con = tuple(V for V in (project(V) for V in M.contracted) if not V.is_zero())
        try:
            M = PullbackMapData(L2, P2, P2_inv, exc, con,
                                replace(M.stability, source=(M.stability.source + " ; after contraction").strip(" ;")))
        except DataConsistencyError as exc_:
            raise StructureError(
                f"contracting {target.coeffs} does not give a consistent model: {exc_}") from exc_
        log.append({"event": "contract", "class": target.coeffs, "rank": L2.rank})
        L = L2
