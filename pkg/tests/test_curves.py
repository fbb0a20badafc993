from math import sqrt

from hypothesis import given, settings, strategies as st
import pytest

from surfdyn import curves
from surfdyn.curves import (Echelon, RationalSubspace, generic_element, normalize, product,
                            product_growth, recurrence_lower_bound, sheaf_degree)
from surfdyn.errors import DataConsistencyError, PreconditionError


def same_span(V, W):
    ech = Echelon()
    for p in V.basis_polys + W.basis_polys:
        ech.insert(p)
    return len(ech) == V.dim == W.dim


def sumset_sizes(sets):
    """Oracle: |A_0 + ... + A_{n-1}| for each n, with the empty sum {0}."""
    acc, out = {0}, [1]
    for A in sets:
        acc = {a + b for a in acc for b in A}
        out.append(len(acc))
    return out


exponent_sets = st.lists(st.sets(st.integers(0, 6), min_size=1, max_size=4), min_size=2, max_size=7)


@settings(deadline=None, max_examples=60)
@given(exponent_sets)
def test_monomial_products_are_sumsets(sets):
    spaces = [RationalSubspace.monomials(A) for A in sets]
    n_max = len(sets) - 1
    r = product_growth(spaces, n_max)
    assert r.e == sumset_sizes(sets)[:n_max + 1]
    assert r.d == [max(A) - min(A) for A in sets]
    assert not r.violations and not r.genus0_violations


@settings(deadline=None, max_examples=30)
@given(st.lists(st.lists(st.integers(-3, 3), min_size=2, max_size=4).filter(any), min_size=2, max_size=5))
def test_random_polynomial_families_obey_the_recurrence(coeff_lists):
    # V_n = span{1, p_n(t)} for random nonconstant p_n.
    spaces = []
    for cs in coeff_lists:
        p = {e: c for e, c in enumerate(cs) if c}
        if max(p) == 0:
            p[1] = 1
        p.pop(0, None)
        spaces.append(RationalSubspace.span(["1", p]))
    r = product_growth(spaces, len(spaces) - 1)
    assert not r.violations and not r.genus0_violations and not r.no_generic


def test_catalog_families_match_closed_forms(catalog):
    r = product_growth(catalog["curve-constant"].family(), 30)
    assert r.e == [n + 1 for n in range(31)] and r.violations == []
    r = product_growth(catalog["curve-doubling"].family(), 14)
    assert r.e == [2**n for n in range(15)] and r.violations == []
    r = product_growth(catalog["curve-linear"].family(), 15)
    assert r.e == [n * (n + 1) // 2 + 1 for n in range(16)]
    assert r.d == [n + 1 for n in range(16)]


def test_nonmonomial_family_has_witnesses(catalog):
    r = product_growth(catalog["curve-nonmonomial"].family(), 10)
    assert r.ok and not r.no_generic
    for n, (f, dim) in r.witnesses.items():
        assert dim == r.e[n] + r.e[r.m[n]]


def test_span_normalization_and_degree():
    V = RationalSubspace.span(["1/t", "1"])
    assert V.dim == 2 and not V.normalized
    assert sheaf_degree(V) == 1
    assert same_span(normalize(V), RationalSubspace.span(["1", "t"]))
    W = RationalSubspace.span(["(t+1)/t", "1"])
    assert same_span(normalize(W), RationalSubspace.span(["t", "t+1"]))
    assert sheaf_degree(RationalSubspace.span(["1", "t**2+1", "t**3"])) == 3


def test_span_errors():
    with pytest.raises(DataConsistencyError):
        RationalSubspace.span(["t", "2*t"])
    with pytest.raises(PreconditionError):
        RationalSubspace.span(["0"])


def test_product_of_spans():
    V = RationalSubspace.span(["1", "t"])
    W = RationalSubspace.span(["1", "t**2"])
    assert product(V, W).dim == 4
    assert product(V, V).dim == 3


def test_generic_element_conditions():
    V = RationalSubspace.span(["1", "t", "t**2"])
    f = generic_element(V, {0: 1, 1: 1}, {0: 1})
    assert f is not None and curves._deg(f) == 2
    assert curves._deg(curves._pgcd(f, {0: 1, 1: 1})) == 0


def test_recurrence_linear_rules():
    r = recurrence_lower_bound(1, curves.shift_rule(1), 60)
    assert abs(r.rate - 2) < 1e-12
    r = recurrence_lower_bound(1, curves.shift_rule(2), 60)
    assert abs(r.rate - (1 + sqrt(5)) / 2) < 1e-10


def test_recurrence_values_are_exact_for_small_n():
    # f(1) = 1, f(k) = f(k-1) + f(ceil(sqrt k)) computed directly.
    f = {1: 1}
    for k in range(2, 200):
        m = min(max(curves.sqrt_rule(k), 1), k - 1)
        f[k] = f[k - 1] + f[m]
    r = recurrence_lower_bound(1, curves.sqrt_rule, 199)
    for k in (2, 10, 100, 199):
        assert abs(r.value(k) - f[k]) < 1e-9 * f[k]


def test_power_rule_exponent_increases():
    a = recurrence_lower_bound(1, curves.power_rule(1.0), 20000)
    b = recurrence_lower_bound(1, curves.power_rule(3.0), 20000)
    assert 1 < a.exponent < b.exponent


def test_recurrence_preconditions():
    with pytest.raises(PreconditionError):
        recurrence_lower_bound(0, curves.sqrt_rule, 10)
    with pytest.raises(PreconditionError):
        recurrence_lower_bound(1, curves.sqrt_rule, 2)
