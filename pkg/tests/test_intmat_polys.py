from fractions import Fraction
import math
import random

from hypothesis import given, settings, strategies as st
import pytest
import sympy

from surfdyn import intmat, polys
from surfdyn.errors import DimensionError

small = st.integers(-6, 6)


def square(d):
    return st.lists(st.lists(small, min_size=d, max_size=d), min_size=d, max_size=d)


matrices = st.integers(1, 5).flatmap(square)


@given(matrices)
def test_berkowitz_matches_sympy_charpoly(A):
    x = sympy.Symbol("x")
    want = sympy.Matrix(A).charpoly(x).all_coeffs()
    assert list(polys.charpoly_berkowitz(A)) == [int(c) for c in want]


@given(matrices)
def test_bareiss_det_and_rank_match_sympy(A):
    M = sympy.Matrix(A)
    assert intmat.det(A) == M.det()
    assert intmat.rank(A) == M.rank()


@given(matrices)
def test_rational_inverse(A):
    if intmat.det(A) == 0:
        return
    inv = intmat.inverse_rational(A)
    d = len(A)
    prod = [[sum(Fraction(A[i][k]) * inv[k][j] for k in range(d)) for j in range(d)] for i in range(d)]
    assert prod == [[int(i == j) for j in range(d)] for i in range(d)]


@given(st.integers(1, 6), st.integers(0, 10**6))
def test_random_unimodular_has_integer_inverse(d, seed):
    U = intmat.random_unimodular(d, random.Random(seed))
    assert abs(intmat.det(U)) == 1
    assert intmat.matmul(U, intmat.inverse_integer(U)) == intmat.identity(d)


def test_matpow_agrees_with_repeated_product():
    A = [[1, 1], [1, 0]]
    assert intmat.matpow(A, 10) == ((89, 55), (55, 34))


def test_inverse_integer_is_none_off_unimodular():
    assert intmat.inverse_integer([[2, 0], [0, 1]]) is None


def test_kernel_basis_needs_primitive_vector():
    with pytest.raises(DimensionError):
        intmat.primitive_kernel_basis([0, 2])


@given(st.lists(small, min_size=2, max_size=5).filter(lambda w: math.gcd(*w) == 1))
def test_primitive_kernel_basis_spans_the_orthogonal(w):
    K = intmat.primitive_kernel_basis(w)
    assert len(K) == len(w) - 1
    for v in K:
        assert sum(a * b for a, b in zip(v, w)) == 0
    assert intmat.rank(K) == len(w) - 1


@given(st.lists(st.integers(-4, 4), min_size=1, max_size=5))
def test_sturm_count_matches_sympy_real_roots(roots):
    x = sympy.Symbol("x")
    p = sympy.Poly(sympy.prod([x - r for r in roots]) * (x**2 + 1), x)
    coeffs = tuple(int(c) for c in p.all_coeffs())
    assert polys.count_real_roots(coeffs) == len(set(roots))
    assert polys.count_positive_roots(coeffs) == len({r for r in roots if r > 0})
    assert polys.count_real_roots(coeffs, -2, 2) == len({r for r in roots if -2 < r <= 2})


def test_isolate_root_of_x2_minus_2():
    lo, hi = polys.isolate_root((1, 0, -2), Fraction(1), Fraction(2))
    assert hi - lo <= Fraction(1, 10**15)
    assert lo * lo < 2 < hi * hi


def test_poly_arithmetic():
    p, q = (1, -3, 2), (1, -1)
    quo, rem = polys.divmod_poly(p, q)
    assert quo == (1, -2) and polys.trim(rem) in ((), (0,))
    assert polys.mul(q, (1, -2)) == p
    assert polys.derivative(p) == (2, -3)
    assert polys.evaluate(p, 3) == 2
    assert polys.to_string((1, 0, -2)) == "x^2 - 2"
