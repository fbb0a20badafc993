import random

from hypothesis import given, strategies as st
import pytest

from surfdyn import intmat
from surfdyn.errors import DataConsistencyError, DimensionError, PreconditionError, StructureError
from surfdyn.lattice import PolarizedLattice, projective_plane, quadric_surface


def blown_up_plane(k, seed=None):
    """P^2 blown up k times, optionally in a scrambled integral basis."""
    L = projective_plane()
    for _ in range(k):
        L, _ = L.blowup()
    if seed is None:
        return L
    d = L.rank
    U = intmat.random_unimodular(d, random.Random(seed))
    Ui = intmat.inverse_integer(U)
    Q = intmat.matmul(intmat.matmul(intmat.transpose(U), L.intersection), U)
    K = intmat.matvec(Ui, L.canonical.coeffs)
    curves = [(lab, intmat.matvec(Ui, C.coeffs)) for lab, C in L.known_curves]
    return PolarizedLattice.build(Q, K, 0, None, curves)


surfaces = st.builds(blown_up_plane, st.integers(0, 5), st.one_of(st.none(), st.integers(0, 10**6)))


def test_plane_and_quadric():
    P2, Q = projective_plane(), quadric_surface()
    H = P2.curve("H")
    assert P2.intersect(H, H) == 1 and P2.intersect(H, P2.K) == -3
    assert Q.signature() == (1, 1)
    F, S = Q.curve("F"), Q.curve("S")
    assert Q.intersect(F, S) == 1 and Q.intersect(Q.K, Q.K) == 8


@given(surfaces)
def test_hodge_signature_and_parity(L):
    assert L.signature() == (1, L.rank - 1)
    for _, C in L.known_curves:
        assert (L.intersect(C, C) + L.intersect(C, L.K)) % 2 == 0


@given(surfaces)
def test_noether_k_squared(L):
    # K^2 = 10 - rank for rational surfaces.
    assert L.intersect(L.K, L.K) == 10 - L.rank


@given(surfaces)
def test_blowup_contract_round_trip(L):
    B, embed = L.blowup()
    assert B.rank == L.rank + 1
    F = B.basis()[-1]
    assert B.intersect(F, F) == -1 and B.intersect(F, B.K) == -1
    for D in L.basis():
        assert B.intersect(embed(D), F) == 0
    S, project = B.contract(F)
    assert S.intersection == L.intersection
    assert S.canonical.coeffs == L.canonical.coeffs
    for C in L.basis():
        for D in L.basis():
            assert S.intersect(project(embed(C)), project(embed(D))) == L.intersect(C, D)


@given(st.integers(1, 5), st.integers(0, 10**6))
def test_contract_in_scrambled_basis(k, seed):
    L = blown_up_plane(k, seed)
    _, E = L.known_curves[-1]
    S, project = L.contract(E)
    assert S.rank == L.rank - 1
    assert S.signature() == (1, S.rank - 1)
    assert S.intersect(S.K, S.K) == L.intersect(L.K, L.K) + 1
    assert project(E).is_zero()


def test_rejects_bad_forms():
    with pytest.raises(DataConsistencyError, match="symmetric"):
        PolarizedLattice.build([[1, 2], [0, -1]], [0, 0])
    with pytest.raises(DataConsistencyError, match="degenerate"):
        PolarizedLattice.build([[1, 1], [1, 1]], [0, 0])
    with pytest.raises(DataConsistencyError, match="Hodge"):
        PolarizedLattice.build([[1, 0, 0], [0, 1, 0], [0, 0, -1]], [0, 0, 0])
    with pytest.raises(DataConsistencyError, match="Hodge"):
        PolarizedLattice.build([[-1]], [0])
    with pytest.raises(DataConsistencyError, match="parity"):
        PolarizedLattice.build([[1]], [-2], 0, ["H"], [("H", [1])])


def test_divisor_ownership():
    P2, Q = projective_plane(), quadric_surface()
    with pytest.raises(DimensionError):
        P2.intersect(P2.divisor([1]), Q.divisor([1, 0]))
    with pytest.raises(DimensionError):
        P2.divisor([1, 0])


def test_contract_preconditions():
    Q = quadric_surface()
    with pytest.raises(PreconditionError):
        Q.contract(Q.curve("F"))
    L = PolarizedLattice.build([[1, 0], [0, -1]], [-3, -1])
    with pytest.raises(StructureError):
        L.contract(L.divisor([0, 1]))


def test_divisor_arithmetic():
    L = blown_up_plane(1)
    H, F = L.basis()
    assert (H - F).coeffs == (1, -1)
    assert (H * 3 + F).coeffs == (3, 1)
    assert (-(H - F)).coeffs == (-1, 1)
    assert L.intersect(H - F, H - F) == 0
