from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import seeded
from looijenga import samplers
from looijenga.intlat import AltForm, DimensionError, det
from looijenga.polyring import Polynomial
from looijenga.qform import (
    DegenerateFormError,
    QuadraticForm,
    default_extension,
    dual_coset_reps,
    eval_beta,
    eval_phi,
    is_positive_definite,
    omega_wedge,
    phi_polynomials,
    regular_sequence_check,
)
from looijenga.wreath import antisymmetrized_cocycle, hessian_cocycle


def test_phi_examples(a1, a2):
    assert eval_phi(a1, (3,)) == (9,)
    assert eval_phi(a2, (0, 0)) == (0,)
    assert eval_phi(a2, (1, 1)) == (1,)
    assert eval_phi(a1, (Fraction(1, 2),)) == (Fraction(1, 4),)


def test_beta_examples(a1, a2):
    assert eval_beta(a1, (1,), (1,)) == (2,)
    assert eval_beta(a2, (1, 0), (0, 1)) == (-1,)


def test_length_mismatch(a2):
    with pytest.raises(DimensionError):
        eval_phi(a2, (1,))


@pytest.mark.parametrize("c,dext", [
    ([[2]], ((1,),)),
    ([[2, -1], [-1, 2]], ((1, -1), (0, 1))),
    ([[4]], ((2,),)),
])
def test_default_extension(c, dext):
    assert default_extension([c]) == (dext,)


def test_invalid_forms():
    with pytest.raises(ValueError):
        default_extension([[[3]]])
    with pytest.raises(ValueError):
        QuadraticForm.from_matrix([[2, 1], [0, 2]])
    with pytest.raises(ValueError):
        QuadraticForm.from_matrix([[2]], dext=[[2]])


def test_json_roundtrip():
    q = QuadraticForm.from_json({"d": 2, "e": 1, "c": [[["2", "-1"], ["-1", "2"]]],
                                 "dext": [[["1", "0"], ["-1", "1"]]]})
    assert q.dext == (((1, 0), (-1, 1)),)
    assert QuadraticForm.from_json(q.to_json()) == q
    with pytest.raises(ValueError):
        QuadraticForm.from_json({"d": 1})


@given(seeded(), st.integers(0, 4), st.integers(0, 3), st.integers(-10, 10))
def test_phi_beta_omega_identities(rng, d, e, n):
    q = samplers.quadratic_form(rng, d, e)
    y, y2 = samplers.int_vector(rng, d), samplers.int_vector(rng, d)
    s = tuple(a + b for a, b in zip(y, y2))
    beta = q.beta(y, y2)
    assert tuple(p - a - b for p, a, b in zip(q.phi(s), q.phi(y), q.phi(y2))) == beta
    assert beta == q.beta(y2, y)
    assert q.phi(tuple(n * v for v in y)) == tuple(n * n * v for v in q.phi(y))
    assert q.omega(y, y) == q.phi(y)
    assert q.beta(y, y) == tuple(2 * v for v in q.phi(y))


def test_omega_wedge_example(a1):
    val = omega_wedge(a1, ((1, 0),), ((0, 1),))
    assert val == AltForm(2, 1, ((1,),))
    assert omega_wedge(a1, ((1, 0),), ((0, 0),)) == AltForm.zero(2, 1)


@given(seeded(), st.integers(2, 4), st.integers(1, 3), st.integers(1, 2))
def test_antisymmetrization_depends_only_on_phi(rng, r, d, e):
    q = samplers.quadratic_form(rng, d, e)
    m, m2 = samplers.int_matrix(rng, d, r), samplers.int_matrix(rng, d, r)
    hess = hessian_cocycle(q, m, m2)
    assert omega_wedge(q, m, m2) - omega_wedge(q, m2, m) == hess
    # a different extension of the same phi changes the cocycle but not its antisymmetrization
    alt = [[0] * d for _ in range(d)]
    for i in range(d):
        for j in range(i + 1, d):
            alt[i][j] = rng.randint(-3, 3)
            alt[j][i] = -alt[i][j]
    q2 = q.with_extension([[[dk[i][j] + alt[i][j] for j in range(d)] for i in range(d)] for dk in q.dext])
    assert antisymmetrized_cocycle(q2, m, m2) == hess


def test_dual_coset_examples(a1, a2, diag22):
    assert [u.u for u in dual_coset_reps(a1)] == [(0,), (Fraction(1, 2),)]
    assert len(dual_coset_reps(a2)) == 3
    assert len(dual_coset_reps(diag22)) == 4
    with pytest.raises(DegenerateFormError):
        dual_coset_reps(QuadraticForm.from_matrix([[2, 2], [2, 2]]))


@given(seeded(), st.integers(1, 3))
def test_dual_cosets_complete(rng, d):
    q = samplers.quadratic_form(rng, d, 1)
    if det(q.matrix) == 0:
        return
    reps = dual_coset_reps(q)
    assert len(reps) == abs(det(q.matrix))
    assert len({u.u for u in reps}) == len(reps)
    for u in reps:
        assert all(0 <= x < 1 for x in u.u)
        assert all(sum(q.matrix[i][j] * u.u[j] for j in range(d)).denominator == 1 for i in range(d))


def test_positive_definite_examples(a1, a2):
    assert is_positive_definite(a1)
    assert is_positive_definite(a2)
    assert not is_positive_definite(QuadraticForm.from_matrix([[2, -3], [-3, 2]]))


def test_regular_sequence_examples(a1):
    t1, t2, x1, x2 = (Polynomial.variable(4, i) for i in range(4))
    assert regular_sequence_check([t1 * x1 + t2 * x2], 4)
    y1, y2 = Polynomial.variable(2, 0), Polynomial.variable(2, 1)
    assert not regular_sequence_check([y1 * y2, y1 * y2], 2)
    nv = 5
    t = [Polynomial.variable(nv, i) for i in range(2)]
    x = [Polynomial.variable(nv, 3 + i) for i in range(2)]
    sharp = phi_polynomials(a1, nv, offset=2)[0] + t[0] * x[0] + t[1] * x[1]
    assert regular_sequence_check([sharp], nv, max_degree=8)


def test_regular_sequence_rejects_bad_input():
    x = Polynomial.variable(2, 0)
    with pytest.raises(ValueError):
        regular_sequence_check([x * x + x], 2)
    with pytest.raises(ValueError):
        regular_sequence_check([x * x], 2, max_degree=5)
