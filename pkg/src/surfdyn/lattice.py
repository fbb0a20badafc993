"""Neron-Severi lattices of surfaces with their intersection form.

A :class:`PolarizedLattice` is N^1(X) in a fixed basis: the Gram matrix of
the intersection pairing, the canonical class K and the constant p_a that
enters Riemann-Roch.  All arithmetic is exact integer arithmetic.
"""
from dataclasses import dataclass, field
import hashlib

from . import intmat, polys
from .errors import DataConsistencyError, DimensionError, PreconditionError, StructureError


def _lattice_fingerprint(intersection, labels):
    h = hashlib.sha1(repr((intersection, tuple(labels))).encode()).hexdigest()
    return f"L{len(intersection)}-{h[:10]}"


@dataclass(frozen=True)
class DivisorClass:
    lattice_id: str
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def rank(self):
        return len(self.coeffs)

    def _check(self, other):
        if not isinstance(other, DivisorClass) or other.lattice_id != self.lattice_id:
            raise DimensionError("divisor classes live in different lattices")

    def __add__(self, other):
        self._check(other)
        return DivisorClass(self.lattice_id, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        self._check(other)
        return DivisorClass(self.lattice_id, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return DivisorClass(self.lattice_id, tuple(-a for a in self.coeffs))

    def __mul__(self, k):
        return DivisorClass(self.lattice_id, tuple(int(k) * a for a in self.coeffs))

    __rmul__ = __mul__

    def is_zero(self):
        return not any(self.coeffs)

    def __repr__(self):
        return f"DivisorClass{self.coeffs}"


@dataclass(frozen=True)
class PolarizedLattice:
    """N^1(X) with its intersection form.

    Construction enforces symmetry, nondegeneracy, Hodge signature (1, d-1)
    (counted by Descartes' rule on the real-rooted characteristic polynomial
    of the Gram matrix) and adjunction parity of every listed curve.
    """

    intersection: tuple
    canonical: DivisorClass
    pa: int = 0
    basis_labels: tuple = ()
    known_curves: tuple = ()
    lattice_id: str = field(default="", compare=False)

    @classmethod
    def build(cls, intersection, canonical, pa=0, basis_labels=None, known_curves=()):
        """Convenience constructor from plain integer sequences.

        ``known_curves`` is a sequence of ``(label, coeffs)`` pairs.
        """
        Q = intmat.as_matrix(intersection)
        labels = tuple(basis_labels) if basis_labels else tuple(f"e{i}" for i in range(len(Q)))
        lid = _lattice_fingerprint(Q, labels)
        K = DivisorClass(lid, canonical)
        curves = tuple((str(lab), DivisorClass(lid, c)) for lab, c in known_curves)
        return cls(Q, K, int(pa), labels, curves, lid)

    def __post_init__(self):
        Q = self.intersection
        d = len(Q)
        if d == 0 or any(len(r) != d for r in Q):
            raise DimensionError("intersection matrix must be square and nonempty")
        if not self.lattice_id:
            object.__setattr__(self, "lattice_id", _lattice_fingerprint(Q, self.basis_labels))
        if len(self.basis_labels) != d:
            raise DimensionError("basis_labels length differs from rank")
        if not intmat.is_symmetric(Q):
            raise DataConsistencyError("intersection matrix is not symmetric")
        if intmat.det(Q) == 0:
            raise DataConsistencyError("intersection form is degenerate")
        pos = polys.descartes_sign_changes(polys.charpoly_berkowitz(Q))
        if pos != 1:
            raise DataConsistencyError(
                f"Hodge index violated: {pos} positive eigenvalues, expected exactly 1")
        self._own(self.canonical)
        for label, C in self.known_curves:
            self._own(C)
            if (self.intersect(C, C) + self.intersect(C, self.canonical)) % 2:
                raise DataConsistencyError(
                    f"adjunction parity fails for curve {label!r}: (C.C)+(C.K) is odd")

    @property
    def rank(self):
        return len(self.intersection)

    @property
    def K(self):
        return self.canonical

    def divisor(self, coeffs):
        if len(coeffs) != self.rank:
            raise DimensionError(f"expected {self.rank} coefficients, got {len(coeffs)}")
        return DivisorClass(self.lattice_id, coeffs)

    def basis(self):
        return [self.divisor(r) for r in intmat.identity(self.rank)]

    def curve(self, label):
        for lab, C in self.known_curves:
            if lab == label:
                return C
        raise KeyError(label)

    def _own(self, D):
        if not isinstance(D, DivisorClass) or D.lattice_id != self.lattice_id or D.rank != self.rank:
            raise DimensionError("divisor class does not belong to this lattice")

    def intersect(self, C, D):
        self._own(C)
        self._own(D)
        return intmat.bilinear(C.coeffs, self.intersection, D.coeffs)

    def signature(self):
        """(number of positive, number of negative) eigenvalues of the form."""
        pos = polys.descartes_sign_changes(polys.charpoly_berkowitz(self.intersection))
        return pos, self.rank - pos

    def is_nef_against(self, D, curves):
        """True iff (D.C) >= 0 for every supplied class C.

        Only a necessary condition for nefness: the answer is relative to the
        finite curve list given, not to the whole cone of curves.
        """
        return all(self.intersect(D, C) >= 0 for C in curves)

    def blowup(self, label=None):
        """Blow up one point.

        Returns the rank d+1 lattice with Gram matrix diag(Q, -1) and the
        embedding pi^*: N^1(X) -> N^1(X~).  The canonical class becomes
        pi^*K + F and p_a is unchanged.
        """
        d = self.rank
        Q = tuple(tuple(row) + (0,) for row in self.intersection) + ((0,) * d + (-1,),)
        label = label or _fresh_label(self.basis_labels, "F")
        labels = self.basis_labels + (label,)
        lid = _lattice_fingerprint(Q, labels)
        K = DivisorClass(lid, self.canonical.coeffs + (1,))
        curves = tuple((lab, DivisorClass(lid, C.coeffs + (0,))) for lab, C in self.known_curves)
        curves += ((label, DivisorClass(lid, (0,) * d + (1,))),)
        big = PolarizedLattice(Q, K, self.pa, labels, curves, lid)

        def embed(D):
            self._own(D)
            return DivisorClass(lid, D.coeffs + (0,))

        return big, embed

    def contract(self, V):
        """Blow down a (-1)-class V.

        Splits Z^d = V^perp (+) Z V, which is an integral decomposition
        whenever (V.V) = -1, and returns the lattice on V^perp together with
        the projection N^1(X) -> N^1(X') that kills V.  Requires (K.V) = -1 so
        that the canonical class descends with pi^*K' = K - V.
        """
        self._own(V)
        vv = self.intersect(V, V)
        if vv != -1:
            raise PreconditionError(f"contract needs (V.V) = -1, got {vv}")
        if self.intersect(self.canonical, V) != -1:
            raise StructureError("(K.V) != -1: V is not the class of an exceptional curve")
        proj_rows, kernel, Qp = _split_off(self.intersection, V.coeffs)
        j = _position(V.coeffs)
        labels = tuple(l for i, l in enumerate(self.basis_labels) if i != j) if j is not None \
            else tuple(f"e{i}" for i in range(self.rank - 1))
        lid = _lattice_fingerprint(Qp, labels)

        def project(D):
            self._own(D)
            return DivisorClass(lid, intmat.matvec(proj_rows, D.coeffs))

        def lift(D):
            return DivisorClass(self.lattice_id, intmat.matvec(kernel, D.coeffs))

        Kp = project(self.canonical)
        curves = []
        for lab, C in self.known_curves:
            P = project(C)
            if not P.is_zero() and C != V:
                curves.append((lab, P))
        small = PolarizedLattice(Qp, Kp, self.pa, labels, tuple(curves), lid)
        if lift(Kp) != self.canonical - V:
            raise StructureError("canonical class does not descend as K - V")
        return small, project

    def contraction_maps(self, V):
        """Matrices (projection R, embedding Kmat) used to conjugate pullbacks."""
        proj_rows, kernel, _ = _split_off(self.intersection, V.coeffs)
        return proj_rows, kernel


def _position(v):
    """Index i when v is a signed standard basis vector, else None."""
    nz = [i for i, c in enumerate(v) if c]
    if len(nz) == 1 and abs(v[nz[0]]) == 1:
        return nz[0]
    return None


def _split_off(Q, v):
    w = intmat.matvec(Q, v)  # functional x -> (x.V); primitive since w.v = -1
    kbasis = intmat.primitive_kernel_basis(w, prefer=_position(v))
    kernel = intmat.transpose(kbasis)  # d x (d-1), columns span V^perp
    B = tuple(tuple(kernel[i]) + (v[i],) for i in range(len(v)))
    Binv = intmat.inverse_integer(B)
    if Binv is None:
        raise StructureError("no integral splitting off V")
    proj_rows = Binv[:-1]
    Qp = intmat.matmul(intmat.matmul(intmat.transpose(kernel), Q), kernel)
    check = intmat.matmul(intmat.matmul(intmat.transpose(B), Q), B)
    d = len(v)
    if any(check[i][d - 1] != (-1 if i == d - 1 else 0) for i in range(d)):
        raise StructureError("form does not split as diag(Q', -1)")
    return proj_rows, kernel, Qp


def _fresh_label(labels, stem):
    k = 1
    while f"{stem}{k}" in labels:
        k += 1
    return f"{stem}{k}"


def projective_plane():
    return PolarizedLattice.build([[1]], [-3], 0, ["H"], [("H", [1])])


def quadric_surface():
    """P^1 x P^1 with basis (fibre class F, section class S)."""
    return PolarizedLattice.build([[0, 1], [1, 0]], [-2, -2], 0, ["F", "S"],
                                  [("F", [1, 0]), ("S", [0, 1])])
