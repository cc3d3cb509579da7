"""Quadratic functions between free abelian groups.

A quadratic function ``phi: Z^d -> Z^e`` is given by ``e`` symmetric integer
matrices ``c^k`` with even diagonal, ``phi_k(y) = 1/2 y^T c^k y``.  Its Hessian
is ``beta_k(y, y') = y^T c^k y'`` and a bilinear extension is any family of
integer matrices ``d^k`` with ``c^k = d^k + (d^k)^T``; then
``omega_k(y, y') = y^T d^k y'`` satisfies ``omega(y, y) = phi(y)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from operator import mul
from typing import Sequence

from .intlat import (
    AltForm,
    DimensionError,
    as_matrix,
    det,
    matrix_from_json,
    matrix_to_json,
    shape,
    smith_normal_form,
    wedge_basis,
)
from .polyring import Polynomial, complete_intersection_series, graded_quotient_dimensions


class DegenerateFormError(ValueError):
    """The form is singular where a nondegenerate one is required."""


def _half(s):
    if isinstance(s, int):
        return s // 2 if s % 2 == 0 else Fraction(s, 2)
    if isinstance(s, Rational):
        return Fraction(s) / 2
    return s / 2


def _bilinear(mat, y, y2):
    return sum((mat[i][j] * y[i] * y2[j]
                for i in range(len(y)) for j in range(len(y2)) if mat[i][j]), 0)


def default_extension(c: Sequence) -> tuple:
    """Upper-triangular bilinear extension of each symmetric matrix in ``c``."""
    out = []
    for mat in c:
        mat = as_matrix(mat)
        n, cols = shape(mat)
        if n != cols:
            raise DimensionError("quadratic form matrix must be square")
        _check_even_symmetric(mat)
        out.append(tuple(
            tuple(mat[i][j] if i < j else (mat[i][i] // 2 if i == j else 0) for j in range(n))
            for i in range(n)))
    return tuple(out)


def _check_even_symmetric(mat):
    n = len(mat)
    for i in range(n):
        if mat[i][i] % 2:
            raise ValueError(f"diagonal entry c[{i}][{i}] = {mat[i][i]} is odd")
        for j in range(i):
            if mat[i][j] != mat[j][i]:
                raise ValueError("quadratic form matrix is not symmetric")


@dataclass(frozen=True)
class QuadraticForm:
    """Quadratic function Z^d -> Z^e with a chosen bilinear extension."""

    d: int
    e: int
    c: tuple
    dext: tuple

    def __post_init__(self):
        if len(self.c) != self.e or len(self.dext) != self.e:
            raise DimensionError("need e matrices for c and for dext")
        for ck, dk in zip(self.c, self.dext):
            if len(ck) != self.d or any(len(row) != self.d for row in ck):
                raise DimensionError("c matrices must be d x d")
            if len(dk) != self.d or any(len(row) != self.d for row in dk):
                raise DimensionError("dext matrices must be d x d")
            _check_even_symmetric(ck)
            for i in range(self.d):
                for j in range(self.d):
                    if ck[i][j] != dk[i][j] + dk[j][i]:
                        raise ValueError("dext is not a bilinear extension of c")

    @classmethod
    def from_matrices(cls, c, dext=None, d: int | None = None) -> "QuadraticForm":
        c = tuple(as_matrix(m) for m in c)
        if d is None:
            d = len(c[0]) if c else 0
        if d == 0:
            return cls(0, len(c), tuple(() for _ in c), tuple(() for _ in c))
        dext = default_extension(c) if dext is None else tuple(as_matrix(m) for m in dext)
        return cls(d, len(c), c, dext)

    @classmethod
    def from_matrix(cls, c, dext=None) -> "QuadraticForm":
        """Single-component form (e = 1)."""
        return cls.from_matrices([c], None if dext is None else [dext])

    @classmethod
    def zero(cls, d: int) -> "QuadraticForm":
        """The form with e = 0 (no quadratic part at all)."""
        return cls(d, 0, (), ())

    @classmethod
    def from_json(cls, data: dict) -> "QuadraticForm":
        try:
            d, e = int(data["d"]), int(data["e"])
            c = [matrix_from_json(m) for m in data["c"]]
            dext = data.get("dext")
            dext = None if dext is None else [matrix_from_json(m) for m in dext]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed form description: {exc}") from exc
        if len(c) != e:
            raise DimensionError("'c' must contain e matrices")
        return cls.from_matrices(c, dext, d=d)

    def to_json(self) -> dict:
        return {"d": self.d, "e": self.e,
                "c": [matrix_to_json(m) for m in self.c],
                "dext": [matrix_to_json(m) for m in self.dext]}

    def with_extension(self, dext) -> "QuadraticForm":
        return QuadraticForm(self.d, self.e, self.c, tuple(as_matrix(m) for m in dext))

    def _check(self, *vectors):
        for v in vectors:
            if len(v) != self.d:
                raise DimensionError(f"expected a vector of length {self.d}, got {len(v)}")

    def phi(self, y) -> tuple:
        self._check(y)
        return tuple(_half(_bilinear(ck, y, y)) for ck in self.c)

    def beta(self, y, y2) -> tuple:
        self._check(y, y2)
        return tuple(_bilinear(ck, y, y2) for ck in self.c)

    def omega(self, y, y2) -> tuple:
        self._check(y, y2)
        return tuple(_bilinear(dk, y, y2) for dk in self.dext)

    @property
    def matrix(self):
        """The single Hessian matrix of an e = 1 form."""
        if self.e != 1:
            raise DimensionError("form has more than one component")
        return self.c[0]


def eval_phi(q: QuadraticForm, y) -> tuple:
    return q.phi(y)


def eval_beta(q: QuadraticForm, y, y2) -> tuple:
    return q.beta(y, y2)


def omega_wedge(q: QuadraticForm, m, m2, r: int | None = None) -> AltForm:
    """The alternating form ``e_i ^ e_j -> omega(m e_i, m2 e_j) - omega(m e_j, m2 e_i)``.

    ``m`` and ``m2`` are d x r matrices (homomorphisms Z^r -> Z^d); pass ``r``
    explicitly when d = 0.
    """
    m, m2 = as_matrix(m), as_matrix(m2)
    if len(m) != q.d or len(m2) != q.d:
        raise DimensionError("homomorphisms must have d rows")
    if r is None:
        if not q.d:
            raise DimensionError("rank of L cannot be inferred when d = 0")
        r = shape(m)[1]
    if q.d and (shape(m)[1] != r or shape(m2)[1] != r):
        raise DimensionError("homomorphisms must have the same source rank")
    return _omega_wedge(q, m, m2, r)


def _omega_wedge(q: QuadraticForm, m, m2, r: int) -> AltForm:
    # m and m2 are normalized d x r matrices
    if not q.d:
        return AltForm.zero(r, q.e)
    cols = list(zip(*m))
    cols2 = list(zip(*m2))
    # columns of dext_k m2, then omega_k(m e_i, m2 e_j) = <m e_i, dext_k m2 e_j>
    images = [[tuple(sum(map(mul, row, c)) for row in dk) for c in cols2] for dk in q.dext]
    return AltForm(r, q.e, tuple(
        tuple(sum(map(mul, cols[i], im[j])) - sum(map(mul, cols[j], im[i])) for im in images)
        for i, j in wedge_basis(r)))


@dataclass(frozen=True)
class DualCosetRep:
    """A vector ``u`` with rational entries in [0, 1) and ``c u`` integral."""

    u: tuple

    def __str__(self):
        return "(" + ", ".join(str(x) for x in self.u) + ")"


def dual_coset_reps(q: QuadraticForm) -> list[DualCosetRep]:
    """Representatives of the discriminant group ``c^{-1} Z^d / Z^d``.

    With ``U c V = D`` in Smith form, ``u = V D^{-1} a`` for ``0 <= a_i < d_i``
    runs over the cosets.  Each is reduced to [0, 1)^d and the list sorted.
    """
    c = q.matrix
    n = q.d
    if det(c) == 0:
        raise DegenerateFormError("Hessian matrix is singular")
    _, dmat, v = smith_normal_form(c)
    diag = [dmat[i][i] for i in range(n)]
    reps = set()
    for a in itertools.product(*(range(di) for di in diag)):
        scaled = [Fraction(a[i], diag[i]) for i in range(n)]
        u = tuple((sum(v[i][k] * scaled[k] for k in range(n))) % 1 for i in range(n))
        reps.add(u)
    return [DualCosetRep(u) for u in sorted(reps)]


def is_positive_definite(q: QuadraticForm) -> bool:
    """Leading principal minors test, in exact integer arithmetic."""
    c = q.matrix
    return all(det(tuple(row[:k] for row in c[:k])) > 0 for k in range(1, q.d + 1))


def regular_sequence_check(forms: Sequence[Polynomial], nvars: int, max_degree: int = 12) -> bool:
    """Hilbert-function certificate that quadratic ``forms`` are a regular sequence.

    ``max_degree`` is cohomological (generators in degree 2), so the graded
    pieces up to polynomial degree ``max_degree // 2`` of the quotient are
    compared with ``(1 - q^2)^e / (1 - q)^nvars``.  Agreement is necessary
    for regularity and certifies it through that degree.
    """
    if max_degree % 2 or max_degree < 4:
        raise ValueError("max_degree must be even and at least 4")
    for f in forms:
        if f.nvars != nvars:
            raise DimensionError("form lives in the wrong polynomial ring")
        if not f.is_homogeneous() or f.degree != 2:
            raise ValueError("forms must be homogeneous quadratics")
    top = max_degree // 2
    actual = graded_quotient_dimensions(forms, nvars, top)
    expected = complete_intersection_series(nvars, [2] * len(forms), top)
    return actual == expected


def phi_polynomials(q: QuadraticForm, nvars: int | None = None, offset: int = 0) -> list[Polynomial]:
    """The components ``phi_k`` as polynomials in variables ``offset .. offset+d-1``."""
    nvars = q.d if nvars is None else nvars
    ys = [Polynomial.variable(nvars, offset + i) for i in range(q.d)]
    return [Polynomial(nvars) + sum(Fraction(ck[i][j], 2) * ys[i] * ys[j]
                                    for i in range(q.d) for j in range(q.d) if ck[i][j])
            for ck in q.c]
