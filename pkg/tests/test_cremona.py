import random

from hypothesis import given, settings, strategies as st
import pytest

from surfdyn import cremona as cr, intmat
from surfdyn.cremona import (ProjPoint, RationalMapP2, compose_reduce, degree_sequence, evaluate,
                             stability_check, standard_cremona, tau_phi, tau_phi_inverse,
                             unbalanced_scan, undefined_iterate)
from surfdyn.errors import CapabilityError, DataConsistencyError, ResourceError
from surfdyn.growth import classify

C = standard_cremona()
S, Si = tau_phi(), tau_phi_inverse()


def linear(rows):
    names = ("x", "y", "z")
    return RationalMapP2.build([" + ".join(f"({c})*{v}" for c, v in zip(r, names)) for r in rows])


def test_points_are_normalized():
    assert ProjPoint((2, 4, -6)) == ProjPoint((-1, -2, 3))
    assert ProjPoint((1, 2, 3))[0] > 0
    with pytest.raises(Exception):
        ProjPoint((0, 0, 0))


def test_cremona_values():
    assert evaluate(C, (1, 2, 3)) == ProjPoint((6, 3, 2))
    for p in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]:
        assert evaluate(C, p) is None
    assert evaluate(C, (0, 1, 1)) == ProjPoint((1, 0, 0))


def test_cremona_squares_to_identity():
    CC = compose_reduce(C, C)
    assert CC.degree == 1 and CC.forms == cr.identity_map().forms
    assert degree_sequence(C, 8) == [2, 1] * 4


def test_cremona_is_unstable_with_line_witness():
    cert = stability_check(C, C, 10)
    assert cert.kind == "known_unstable"
    assert cert.witness == {"curve": "a=0", "n": 1, "point": [1, 0, 0]}


def test_tau_phi_degrees_and_inverse():
    assert degree_sequence(S, 4) == [2, 4, 8, 16]
    assert compose_reduce(S, Si).forms == cr.identity_map().forms
    assert compose_reduce(Si, S).forms == cr.identity_map().forms
    cert = stability_check(S, Si, 12)
    assert cert.kind == "certified_stable" and cert.horizon == 12


@settings(deadline=None, max_examples=30)
@given(st.lists(st.integers(-30, 30), min_size=3, max_size=3).filter(any))
def test_composition_agrees_pointwise(p):
    SS = compose_reduce(S, S)
    q = evaluate(S, p)
    if q is None or evaluate(S, q) is None:
        return
    assert evaluate(SS, p) == evaluate(S, q)


@settings(deadline=None, max_examples=15)
@given(st.integers(0, 10**6))
def test_degrees_of_generic_quadratic_maps(seed):
    rng = random.Random(seed)
    A = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
    if intmat.det(A) == 0:
        return
    M = compose_reduce(linear(A), C)
    degs = degree_sequence(M, 4)
    assert degs[0] == 2
    for a in range(1, 4):
        for b in range(1, 5 - a):
            assert degs[a + b - 1] <= degs[a - 1] * degs[b - 1]


def test_budget_overrun_carries_partial_sequence():
    with pytest.raises(ResourceError) as info:
        degree_sequence(S, 6, budget=(10, 10**6))
    assert info.value.partial == [2, 4, 8]


def test_build_validation():
    with pytest.raises(DataConsistencyError, match="share"):
        RationalMapP2.build(["x*y", "x*z", "x*x"])
    with pytest.raises(DataConsistencyError, match="point of definition"):
        RationalMapP2.build(["y*z", "x*z", "x*y"], [(1, 1, 1)])
    with pytest.raises(DataConsistencyError, match="Jacobian"):
        RationalMapP2.build(["y*z", "x*z", "x*y"], [], [("bad", "x + y", (1, 0, 0))])
    with pytest.raises(DataConsistencyError, match="listed image"):
        RationalMapP2.build(["y*z", "x*z", "x*y"], [], [("a=0", "x", (0, 1, 0))])
    with pytest.raises(DataConsistencyError, match="one degree"):
        RationalMapP2.build(["x", "y*z", "z"])


def test_stability_needs_curve_data():
    bare = RationalMapP2.build(["y*z", "x*z", "x*y"])
    with pytest.raises(CapabilityError):
        stability_check(bare, bare, 5)


def test_mismatched_inverse_data_is_caught():
    with pytest.raises(DataConsistencyError, match="disagree"):
        stability_check(C, S, 10)


def test_undefined_iterate_by_arc_limits():
    assert undefined_iterate(C, (1, 0, 0), 1)
    assert not undefined_iterate(C, (1, 2, 3), 1)
    # sigma^2 = identity is defined everywhere, although the formal square is not.
    assert not undefined_iterate(C, (1, 0, 0), 2)


def test_unbalanced_scan_on_tau_phi():
    scan = unbalanced_scan(S, Si, 10)
    assert scan.applicable
    assert set(scan.points) == {ProjPoint(p) for p in [(1, 1, -1), (1, -1, -1), (1, -1, 1)]}
    for ev in scan.evidence:
        assert len(ev.backward_orbit) == 11 and ev.undefined_at == tuple(range(1, 11))
    assert "not a proof" in scan.caveat


def test_unbalanced_scan_other_cases():
    assert not unbalanced_scan(C, C, 6).applicable
    ident = cr.identity_map()
    scan = unbalanced_scan(ident, ident, 6)
    assert scan.applicable and scan.points == []


def test_bridge_to_pullback_data():
    M = cr.to_pullback_data(S, Si)
    assert M.P == ((2,),) and [E.coeffs for E in M.exceptional] == [(1,)] * 3
    g = classify(M.P, M.stability)
    assert g.rho.exact == 2 and g.gk_verdict.value == "exponential"


def test_form_round_trip():
    f = cr.parse_form("a**2 + 3*b*c - c**2")
    assert cr.parse_form(cr.form_to_string(f)) == f
    assert cr.form_degree(f) == 2
