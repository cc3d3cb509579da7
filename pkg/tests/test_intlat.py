import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import int_matrices, seeded
from looijenga import samplers
from looijenga.intlat import (
    AltForm,
    DimensionError,
    as_matrix,
    contract,
    det,
    identity,
    invariant_factors,
    is_unimodular,
    lambda2_induced,
    matmul,
    matrix_from_json,
    matrix_to_json,
    rational_inverse,
    smith_normal_form,
    unimodular_inverse,
    wedge_basis,
)


def determinantal_divisors(b):
    """gcd of all k x k minors, k = 1..min(rows, cols); brute force."""
    rows, cols = len(b), len(b[0])
    out = []
    for k in range(1, min(rows, cols) + 1):
        g = 0
        for rs in itertools.combinations(range(rows), k):
            for cs in itertools.combinations(range(cols), k):
                g = math.gcd(g, det(tuple(tuple(b[i][j] for j in cs) for i in rs)))
        out.append(g)
    return out


def factors_from_divisors(divs):
    out, prev = [], 1
    for g in divs:
        if g == 0:
            out.append(0)
            prev = 0
            continue
        out.append(g // prev)
        prev = g
    return out


@pytest.mark.parametrize("a,expected", [
    (((1, 1), (0, 1)), True),
    (((2, 0), (0, 1)), False),
    (((0, 1), (1, 0)), True),
])
def test_is_unimodular_examples(a, expected):
    assert is_unimodular(a) is expected


def test_is_unimodular_rejects_non_square():
    with pytest.raises(DimensionError):
        is_unimodular(((1, 0, 0), (0, 1, 0)))


@pytest.mark.parametrize("b,diag", [
    (((2, 1), (0, 3)), (1, 6)),
    (identity(3), (1, 1, 1)),
    (((2, -1), (-1, 2)), (1, 3)),
])
def test_smith_examples(b, diag):
    u, d, v = smith_normal_form(b)
    assert matmul(matmul(u, b), v) == d
    assert invariant_factors(b) == diag


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_smith_matches_determinantal_divisors(rows, cols, data):
    b = data.draw(int_matrices(rows, cols, bound=9))
    u, d, v = smith_normal_form(b)
    assert is_unimodular(u) and is_unimodular(v)
    assert matmul(matmul(u, b), v) == d
    n = min(rows, cols)
    diag = [d[i][i] for i in range(n)]
    assert all(d[i][j] == 0 for i in range(rows) for j in range(cols) if i != j)
    assert all(x >= 0 for x in diag)
    for i in range(n - 1):
        if diag[i]:
            assert diag[i + 1] % diag[i] == 0
        else:
            assert diag[i + 1] == 0
    assert diag == factors_from_divisors(determinantal_divisors(b))
    if rows == cols:
        assert abs(det(b)) == math.prod(diag)


def test_smith_is_deterministic():
    b = ((4, 6, 2), (2, 8, 10), (6, 0, 4))
    assert smith_normal_form(b) == smith_normal_form(b)


def test_zero_matrix_smith():
    assert invariant_factors(((0, 0), (0, 0))) == (0, 0)


def test_as_matrix_is_strict():
    assert as_matrix([["3", "-4"], [1, 2.0]]) == ((3, -4), (1, 2))
    with pytest.raises(ValueError):
        as_matrix([[1.5]])
    with pytest.raises(TypeError):
        as_matrix([[True]])
    with pytest.raises(DimensionError):
        as_matrix([[1, 2], [3]])


def test_matrix_json_roundtrip():
    m = ((1, -2), (30000000000000000000, 0))
    assert matrix_to_json(m) == [["1", "-2"], ["30000000000000000000", "0"]]
    assert matrix_from_json(matrix_to_json(m)) == m
    with pytest.raises(ValueError):
        matrix_from_json({"a": 1})


@given(seeded(), st.integers(1, 4))
def test_unimodular_inverse(rng, n):
    a = samplers.unimodular(rng, n)
    assert matmul(a, unimodular_inverse(a)) == identity(n)
    assert rational_inverse(a) == tuple(tuple(Fraction(x) for x in row) for row in unimodular_inverse(a))


def test_unimodular_inverse_rejects():
    with pytest.raises(ValueError):
        unimodular_inverse(((2, 0), (0, 1)))


# -- contraction ----------------------------------------------------------------

def test_contract_examples():
    n = AltForm(2, 1, ((1,),))
    assert contract(n, (7, 11)) == ((-11, 7),)
    assert contract(AltForm(2, 1, ((5,),)), (2, 3)) == ((-15, 10),)
    assert contract(AltForm(2, 1, ((5,),)), (0, 0)) == ((0, 0),)


def test_contract_rank_mismatch():
    with pytest.raises(DimensionError):
        contract(AltForm.zero(3, 1), (1, 2))


@given(seeded(), st.integers(2, 4), st.integers(0, 3), st.integers(-5, 5), st.integers(-5, 5))
def test_contract_bilinear_and_alternating(rng, r, e, a, b):
    n, n2 = samplers.alt_form(rng, r, e), samplers.alt_form(rng, r, e)
    t, t2 = samplers.int_vector(rng, r), samplers.int_vector(rng, r)
    lhs = contract(n, tuple(a * x + b * y for x, y in zip(t, t2)))
    c1, c2 = contract(n, t), contract(n, t2)
    assert lhs == tuple(tuple(a * x + b * y for x, y in zip(r1, r2)) for r1, r2 in zip(c1, c2))
    s = contract(n + n2, t)
    assert s == tuple(tuple(x + y for x, y in zip(r1, r2)) for r1, r2 in zip(c1, contract(n2, t)))
    # n(t ^ t) = 0
    for k in range(e):
        assert sum(c1[k][j] * t[j] for j in range(r)) == 0


def test_altform_antisymmetry_and_matrix():
    n = AltForm(3, 2, ((1, 2), (3, 4), (5, 6)))
    assert n(0, 1) == (1, 2) and n(1, 0) == (-1, -2) and n(2, 2) == (0, 0)
    assert n(2, 1) == (-5, -6)
    assert AltForm.from_matrix(3, n.as_matrix()) == n
    assert wedge_basis(3) == ((0, 1), (0, 2), (1, 2))
    with pytest.raises(DimensionError):
        AltForm(3, 1, ((1,),))


# -- exterior square -----------------------------------------------------------

def test_lambda2_rank2_is_det():
    a = ((3, 1), (5, 2))
    assert lambda2_induced(a) == ((det(a),),)
    assert lambda2_induced(identity(3)) == identity(3)


def _wedge_value(a, i, j, k, l):
    # coefficient of e_i ^ e_j in (a e_k) ^ (a e_l)
    return a[i][k] * a[j][l] - a[i][l] * a[j][k]


@given(seeded(), st.integers(2, 4))
def test_lambda2_functorial_and_minors(rng, r):
    a, b = samplers.unimodular(rng, r), samplers.unimodular(rng, r)
    assert lambda2_induced(matmul(a, b)) == matmul(lambda2_induced(a), lambda2_induced(b))
    m = samplers.int_matrix(rng, r, r)
    basis = wedge_basis(r)
    l2 = lambda2_induced(m)
    for row, (i, j) in enumerate(basis):
        for col, (k, l) in enumerate(basis):
            assert l2[row][col] == _wedge_value(m, i, j, k, l)


@given(seeded(), st.integers(2, 4), st.integers(1, 2))
def test_pullback_is_contravariant(rng, r, e):
    n = samplers.alt_form(rng, r, e)
    a, b = samplers.unimodular(rng, r), samplers.unimodular(rng, r)
    assert n.pullback(a).pullback(b) == n.pullback(matmul(a, b))
