from itertools import product
from math import comb

from hypothesis import given, settings, strategies as st
import pytest

from surfdyn.errors import InsufficientDataError, ParityError, PreconditionError
from surfdyn.hilbert import (SIGMA_POSITIVE_CAVEAT, fit_growth, hilbert_sequence, rr_dimension,
                             selfint_recurrence_check, twisted_sum)
from surfdyn.io import Catalog


def monomials_of_degree(n, nvars=3):
    """Oracle: count exponent vectors directly."""
    return sum(1 for e in product(range(n + 1), repeat=nvars - 1) if sum(e) <= n)


def load(catalog, name):
    e = catalog[name]
    return e.lattice(), e.pullback(), e.ample()


def test_plane_matches_monomial_count(catalog):
    L, M, D = load(catalog, "identity-p2")
    seq = hilbert_sequence(L, M, D, 20)
    assert seq.h[1:5] == (3, 6, 10, 15)
    assert list(seq.h[1:]) == [monomials_of_degree(n) for n in range(1, 21)]
    assert seq.caveat == SIGMA_POSITIVE_CAVEAT


def test_fibration_matches_bidegree_count(catalog):
    L, M, D = load(catalog, "fibration-j1")
    seq = hilbert_sequence(L, M, D, 40)
    for n, coeffs, dd, dk, h in seq.rows():
        if n == 0:
            assert h == 1
            continue
        a, b = coeffs
        assert (a, b) == (n * (n + 1) // 2, n)
        assert h == (a + 1) * (b + 1) == (n**3 + 2 * n**2 + 3 * n) // 2 + 1
        assert dd == n**3 + n**2


def test_nongeometric_model_closed_form(catalog):
    L, M, D = load(catalog, "nongeom-rho2")
    seq = hilbert_sequence(L, M, D, 20)
    for n in range(1, 21):
        m = 2**n - 1
        assert seq.terms[n].coeffs == (m,)
        assert seq.self_ints[n] == m * m
        assert seq.h[n] == comb(m + 2, 2)


def test_twisted_sum_matches_sequence(catalog):
    L, M, D = load(catalog, "parabolic-j2")
    seq = hilbert_sequence(L, M, D, 12)
    for n in range(13):
        assert twisted_sum(M, D, n) == seq.terms[n]


def test_selfint_recurrence_on_fibration(catalog):
    L, M, D = load(catalog, "fibration-j1")
    r = selfint_recurrence_check(L, M, D, 30)
    assert r.applicable and r.N == 2 and r.checked == 31 * 32 // 2


def test_selfint_recurrence_skipped_without_hypothesis(catalog):
    L, M, D = load(catalog, "nongeom-rho2")
    r = selfint_recurrence_check(L, M, D, 10)
    assert not r.applicable and "fixes no" in r.reason


def test_parity_fixture(data_dir):
    e = Catalog(data_dir / "parity")["identity-oddK"]
    L, M, D = e.lattice(), e.pullback(), e.ample()
    with pytest.raises(ParityError, match="odd"):
        rr_dimension(L, D)
    with pytest.raises(ParityError):
        hilbert_sequence(L, M, D, 3)


def test_preconditions(catalog):
    L, M, _ = load(catalog, "fibration-j1")
    with pytest.raises(PreconditionError):
        hilbert_sequence(L, M, L.divisor([1, 0]), 5)
    with pytest.raises(PreconditionError):
        hilbert_sequence(L, M, L.divisor([3, -1]), 5)


@given(st.integers(0, 4), st.floats(0.5, 20))
def test_fit_recovers_polynomial_growth(j, c):
    seq = [c * n**j + 1 for n in range(1, 61)]
    assert fit_growth(seq) == (1.0, j)


@settings(max_examples=60)
@given(st.sampled_from([1.5, 2.0, 3.0, 4.0]), st.integers(0, 2), st.floats(0.5, 20))
def test_fit_recovers_exponential_growth(rho, j, c):
    seq = [c * n**j * rho**n for n in range(1, 41)]
    rho_hat, j_hat = fit_growth(seq)
    assert abs(rho_hat - rho) < 0.01 * rho
    assert j_hat == j


def test_fit_needs_enough_tail():
    with pytest.raises(InsufficientDataError):
        fit_growth([1, 2, 3, 4, 5, 6, 7, 8, 9, 10])
    assert fit_growth(list(range(1, 11)), tail_start=2) == (1.0, 1)


def test_fit_on_catalog_sequences(catalog):
    for name, n_max, want in [("identity-p2", 60, (1.0, 2)), ("fibration-j1", 60, (1.0, 3)),
                              ("parabolic-j2", 60, (1.0, 4))]:
        L, M, D = load(catalog, name)
        assert fit_growth(hilbert_sequence(L, M, D, n_max).h[1:]) == want
    L, M, D = load(catalog, "nongeom-rho2")
    rho_hat, j_hat = fit_growth(hilbert_sequence(L, M, D, 20).h[1:])
    assert abs(rho_hat - 4) < 0.04 and j_hat == 0
