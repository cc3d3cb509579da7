"""Exact integer linear algebra for lattices.

Matrices are plain nested tuples of Python ints (row-major), so entries never
overflow.  Alternating forms on a lattice of rank ``r`` are stored by their
values on the basis wedges ``e_i ^ e_j`` with ``i < j`` in lexicographic order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from operator import add, mul, sub
from typing import Sequence

IntMatrix = tuple  # tuple[tuple[int, ...], ...]


class DimensionError(ValueError):
    """Operand shapes do not fit together."""


_TUPLE = frozenset((tuple,))
_INT = frozenset((int,))


def as_matrix(rows) -> IntMatrix:
    """Normalize a nested sequence into a tuple-of-tuples integer matrix."""
    if (type(rows) is tuple and set(map(type, rows)) <= _TUPLE
            and set(map(type, itertools.chain.from_iterable(rows))) <= _INT):
        m = rows
    else:
        m = tuple(tuple(_exact_int(x) for x in row) for row in rows)
    if m and len({len(row) for row in m}) != 1:
        raise DimensionError("ragged matrix")
    return m


def _exact_int(x) -> int:
    if isinstance(x, bool):
        raise TypeError("booleans are not matrix entries")
    if isinstance(x, str):
        return int(x.strip())
    i = int(x)
    if i != x:
        raise ValueError(f"non-integer entry {x!r}")
    return i


def shape(m: IntMatrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(rows: int, cols: int) -> IntMatrix:
    return tuple((0,) * cols for _ in range(rows))


def matmul(a, b):
    """Product of two matrices with arbitrary (exact or complex) entries."""
    if not a:
        return ()
    inner = len(a[0])
    if inner != len(b):
        raise DimensionError(f"cannot multiply {len(a)}x{inner} by {len(b)}x?")
    cols = list(zip(*b))
    return tuple(tuple(sum(map(mul, row, col)) for col in cols) for row in a)


def matvec(a, v):
    if a and len(a[0]) != len(v):
        raise DimensionError("matrix/vector size mismatch")
    return tuple(sum(map(mul, row, v)) for row in a)


def transpose(m):
    return tuple(zip(*m)) if m else ()


def det(m) -> int:
    """Determinant of a square integer matrix (Bareiss, fraction-free)."""
    n, cols = shape(m)
    if n != cols:
        raise DimensionError("determinant of a non-square matrix")
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    if n == 2:
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]
    if n == 3:
        (a0, a1, a2), (b0, b1, b2), (c0, c1, c2) = m
        return a0 * (b1 * c2 - b2 * c1) - a1 * (b0 * c2 - b2 * c0) + a2 * (b0 * c1 - b1 * c0)
    a = [list(row) for row in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(m) -> bool:
    n, cols = shape(m)
    if n != cols:
        raise DimensionError("unimodularity test needs a square matrix")
    return _cached_det(as_matrix(m)) in (1, -1)


@lru_cache(maxsize=4096)
def _cached_det(m: IntMatrix) -> int:
    return det(m)


def rational_inverse(m) -> tuple:
    """Inverse over Q by Gauss-Jordan elimination; entries are Fractions."""
    n, cols = shape(m)
    if n != cols:
        raise DimensionError("inverse of a non-square matrix")
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[col], a[piv] = a[piv], a[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def _minor(m, i: int, j: int):
    return tuple(row[:j] + row[j + 1:] for k, row in enumerate(m) if k != i)


def adjugate(m) -> IntMatrix:
    """Transposed cofactor matrix, so that ``m adj(m) = det(m) I``."""
    n, cols = shape(m)
    if n != cols:
        raise DimensionError("adjugate of a non-square matrix")
    if n == 1:
        return ((1,),)
    if n == 2:
        (a, b), (c, d) = m
        return ((d, -b), (-c, a))
    return tuple(tuple((-1) ** (i + j) * det(_minor(m, j, i)) for j in range(n)) for i in range(n))


@lru_cache(maxsize=4096)
def _unimodular_inverse(m: IntMatrix) -> IntMatrix:
    dt = det(m)
    if dt not in (1, -1):
        raise ValueError("matrix is not unimodular")
    return tuple(tuple(dt * x for x in row) for row in adjugate(m))


def unimodular_inverse(m) -> IntMatrix:
    return _unimodular_inverse(as_matrix(m))


def is_integral(m) -> bool:
    return all(Fraction(x).denominator == 1 for row in m for x in row)


# -- Smith normal form ------------------------------------------------------

def _swap_rows(a, i, j):
    a[i], a[j] = a[j], a[i]


def _swap_cols(a, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]


def smith_normal_form(b) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ B @ V == D`` in Smith normal form.

    ``U`` and ``V`` are unimodular, ``D`` is diagonal with non-negative
    entries ``d_1 | d_2 | ...``.  The pivot at each stage is the nonzero entry
    of smallest absolute value in the remaining block, ties broken in
    row-major order, so the output is deterministic.
    """
    a = [list(row) for row in as_matrix(b)]
    m, n = len(a), (len(a[0]) if a else 0)
    u = [list(row) for row in identity(m)]
    v = [list(row) for row in identity(n)]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    x = a[i][j]
                    if x and (best is None or abs(x) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return as_matrix(u), as_matrix(a), as_matrix(v)
            i, j = best
            _swap_rows(a, t, i)
            _swap_rows(u, t, i)
            _swap_cols(a, t, j)
            _swap_cols(v, t, j)
            p = a[t][t]

            clean = True
            for i in range(t + 1, m):
                q = a[i][t] // p
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                clean = clean and a[i][t] == 0
            for j in range(t + 1, n):
                q = a[t][j] // p
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                    for row in v:
                        row[j] -= q * row[t]
                clean = clean and a[t][j] == 0
            if not clean:
                continue

            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if a[i][j] % p), None)
            if bad is None:
                break
            i = bad[0]
            a[t] = [x + y for x, y in zip(a[t], a[i])]
            u[t] = [x + y for x, y in zip(u[t], u[i])]

        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]

    return as_matrix(u), as_matrix(a), as_matrix(v)


def invariant_factors(b) -> tuple[int, ...]:
    _, d, _ = smith_normal_form(b)
    return tuple(d[i][i] for i in range(min(shape(d))))


# -- exterior square --------------------------------------------------------

@lru_cache(maxsize=None)
def wedge_basis(r: int) -> tuple[tuple[int, int], ...]:
    """Index pairs ``(i, j)``, ``i < j``, labelling the basis of Lambda^2 Z^r."""
    return tuple(itertools.combinations(range(r), 2))


def lambda2_induced(a) -> IntMatrix:
    """Matrix of the map induced by ``a`` on the exterior square.

    Entry ``[(i,j), (k,l)]`` is the 2x2 minor on rows ``i,j`` and columns
    ``k,l``, so that ``Lambda^2(AB) = Lambda^2(A) Lambda^2(B)``.
    """
    return _lambda2_induced(as_matrix(a))


@lru_cache(maxsize=4096)
def _lambda2_columns(a: IntMatrix) -> tuple:
    return tuple(zip(*_lambda2_induced(a)))


@lru_cache(maxsize=4096)
def _lambda2_induced(a: IntMatrix) -> IntMatrix:
    r, cols = shape(a)
    if r != cols:
        raise DimensionError("lambda2_induced needs a square matrix")
    basis = wedge_basis(r)
    return tuple(
        tuple(a[i][k] * a[j][l] - a[i][l] * a[j][k] for (k, l) in basis)
        for (i, j) in basis
    )


@dataclass(frozen=True)
class AltForm:
    """An alternating form ``Lambda^2 Z^r -> Z^e``.

    ``values[w][k]`` is the k-th component of the value on the w-th basis
    wedge of :func:`wedge_basis`.  Entries may be any exact ring elements.
    """

    r: int
    e: int
    values: tuple

    def __post_init__(self):
        if len(self.values) != len(wedge_basis(self.r)):
            raise DimensionError("AltForm needs one value per basis wedge")
        if any(len(v) != self.e for v in self.values):
            raise DimensionError("AltForm values must have e components")

    @classmethod
    def _trusted(cls, r: int, e: int, values: tuple) -> "AltForm":
        # skips validation for values computed from already valid forms
        obj = object.__new__(cls)
        object.__setattr__(obj, "r", r)
        object.__setattr__(obj, "e", e)
        object.__setattr__(obj, "values", values)
        return obj

    @classmethod
    def zero(cls, r: int, e: int) -> "AltForm":
        return cls(r, e, tuple((0,) * e for _ in wedge_basis(r)))

    @classmethod
    def from_function(cls, r: int, e: int, f) -> "AltForm":
        """Build from ``f(i, j) -> sequence of e values`` on basis wedges."""
        return cls(r, e, tuple(tuple(f(i, j)) for i, j in wedge_basis(r)))

    def __call__(self, i: int, j: int) -> tuple:
        """Value on ``e_i ^ e_j`` for any ``i, j`` (antisymmetry applied)."""
        if i == j:
            return (0,) * self.e
        if i < j:
            return self.values[_wedge_position(self.r, i, j)]
        return tuple(-x for x in self.values[_wedge_position(self.r, j, i)])

    def __add__(self, other: "AltForm") -> "AltForm":
        self._check(other)
        return AltForm._trusted(self.r, self.e, tuple(
            tuple(map(add, a, b)) for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "AltForm":
        return AltForm._trusted(self.r, self.e, tuple(tuple(-x for x in a) for a in self.values))

    def __sub__(self, other: "AltForm") -> "AltForm":
        self._check(other)
        return AltForm._trusted(self.r, self.e, tuple(
            tuple(map(sub, a, b)) for a, b in zip(self.values, other.values)))

    def as_matrix(self) -> tuple:
        """The e x C(r,2) matrix whose columns are the wedge values."""
        return tuple(tuple(v[k] for v in self.values) for k in range(self.e))

    @classmethod
    def from_matrix(cls, r: int, mat) -> "AltForm":
        e = len(mat)
        return cls(r, e, tuple(tuple(mat[k][w] for k in range(e))
                               for w in range(len(wedge_basis(r)))))

    def pullback(self, a) -> "AltForm":
        """The form ``n o Lambda^2(a)``."""
        if shape(a) != (self.r, self.r):
            raise DimensionError("pullback matrix has wrong rank")
        if self.e == 0:
            return self
        return self._pullback(as_matrix(a))

    def _pullback(self, a) -> "AltForm":
        # a is a normalized r x r matrix
        if self.e == 0:
            return self
        cols = _lambda2_columns(a)
        return AltForm._trusted(self.r, self.e, tuple(
            tuple(sum(map(mul, comp, col)) for comp in zip(*self.values)) for col in cols))

    def _check(self, other):
        if (self.r, self.e) != (other.r, other.e):
            raise DimensionError("AltForm ranks differ")


def _wedge_position(r: int, i: int, j: int) -> int:
    # lexicographic rank of (i, j) among pairs of range(r)
    return i * r - i * (i + 1) // 2 + (j - i - 1)


def contract(n: AltForm, t: Sequence) -> tuple:
    """The homomorphism ``t' -> n(t ^ t')`` as an e x r matrix."""
    if len(t) != n.r:
        raise DimensionError("vector rank does not match the form")
    cols = []
    for k in range(n.r):
        col = [0] * n.e
        for i, ti in enumerate(t):
            if ti and i != k:
                val = n(i, k)
                for c in range(n.e):
                    col[c] = col[c] + ti * val[c]
        cols.append(col)
    return tuple(tuple(cols[k][c] for k in range(n.r)) for c in range(n.e))


# -- serialization ----------------------------------------------------------

def matrix_to_json(m) -> list:
    return [[str(x) for x in row] for row in m]


def matrix_from_json(data) -> IntMatrix:
    if not isinstance(data, list) or not all(isinstance(row, list) for row in data):
        raise ValueError("matrix must be a JSON array of arrays")
    return as_matrix(data)
