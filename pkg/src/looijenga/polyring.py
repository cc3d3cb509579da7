"""Sparse multivariate polynomials over Q and graded linear algebra.

Only what the quotient-ring computations need: arithmetic, linear
substitution, graded pieces of a quotient by homogeneous relations, and
membership of a polynomial in the span of others.  Everything is exact.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence


class Polynomial:
    """Polynomial in ``nvars`` variables with Fraction coefficients.

    Terms map exponent tuples to nonzero coefficients.  Supports the ring
    operations with other polynomials and with ints/Fractions, so it can be
    pushed through generic formulas written for numbers.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | None = None):
        self.nvars = nvars
        clean = {}
        for mono, coef in (terms or {}).items():
            if len(mono) != nvars:
                raise ValueError("exponent tuple has wrong length")
            if type(coef) is not Fraction:
                coef = Fraction(coef)
            if coef:
                clean[tuple(mono)] = coef
        self.terms = clean

    @classmethod
    def variable(cls, nvars: int, i: int) -> "Polynomial":
        mono = [0] * nvars
        mono[i] = 1
        return cls(nvars, {tuple(mono): 1})

    @classmethod
    def constant(cls, nvars: int, c) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: c})

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise ValueError("polynomials live in different rings")
            return other
        return Polynomial.constant(self.nvars, other)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, 0) + c
        return Polynomial(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            c = Fraction(other)
            return Polynomial(self.nvars, {m: a * c for m, a in self.terms.items()})
        other = self._coerce(other)
        out: dict = {}
        for m1, a in self.terms.items():
            for m2, b in other.terms.items():
                mono = tuple(x + y for x, y in zip(m1, m2))
                out[mono] = out.get(mono, 0) + a * b
        return Polynomial(self.nvars, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (1 / Fraction(other))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.nvars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.terms!r})"

    def degrees(self) -> set[int]:
        return {sum(m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    @property
    def degree(self) -> int:
        return max(self.degrees(), default=-1)

    def subs(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute ``images[i]`` for the i-th variable."""
        if len(images) != self.nvars:
            raise ValueError("need one image per variable")
        target = images[0].nvars if images else 0
        acc: dict = {}
        powers: dict = {}
        for mono, coef in self.terms.items():
            term = None
            for i, k in enumerate(mono):
                if k:
                    key = (i, k)
                    if key not in powers:
                        p = images[i]
                        for _ in range(k - 1):
                            p = p * images[i]
                        powers[key] = p
                    term = powers[key] if term is None else term * powers[key]
            if term is None:
                acc[(0,) * target] = acc.get((0,) * target, 0) + coef
                continue
            for m, c in term.terms.items():
                acc[m] = acc.get(m, 0) + coef * c
        return Polynomial(target, acc)

    def sorted_monomials(self, key=None) -> list:
        """Monomials in display order: descending exponent tuples unless ``key`` is given."""
        if key is None:
            return sorted(self.terms, reverse=True)
        return sorted(self.terms, key=key)

    def format(self, names: Sequence[str], key=None) -> str:
        if not self.terms:
            return "0"
        parts = []
        for mono in self.sorted_monomials(key):
            coef = self.terms[mono]
            factors = []
            for name, k in zip(names, mono):
                if k == 1:
                    factors.append(name)
                elif k > 1:
                    factors.append(f"{name}^{k}")
            body = "*".join(factors)
            if not body:
                parts.append(str(coef))
            elif coef == 1:
                parts.append(body)
            elif coef == -1:
                parts.append("-" + body)
            else:
                parts.append(f"{coef}*{body}")
        return " + ".join(parts).replace("+ -", "- ")


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """All exponent tuples of the given total degree, in a fixed order."""
    if nvars == 0:
        return ((),) if degree == 0 else ()
    out = []
    for bars in itertools.combinations(range(degree + nvars - 1), nvars - 1):
        prev, mono = -1, []
        for b in bars:
            mono.append(b - prev - 1)
            prev = b
        mono.append(degree + nvars - 2 - prev)
        out.append(tuple(mono))
    return tuple(out)


class EchelonBasis:
    """Incrementally reduced row space over Q with sparse rows."""

    def __init__(self):
        self.pivots: dict = {}

    def reduce(self, row: dict) -> dict:
        row = {k: Fraction(v) for k, v in row.items() if v}
        while row:
            lead = min(row)
            piv = self.pivots.get(lead)
            if piv is None:
                return row
            f = row[lead]
            for k, v in piv.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        return row

    def add(self, row: dict) -> bool:
        """Insert a row; return True iff it raised the rank."""
        row = self.reduce(row)
        if not row:
            return False
        lead = min(row)
        f = row[lead]
        self.pivots[lead] = {k: v / f for k, v in row.items()}
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def rank(rows: Iterable[Mapping]) -> int:
    basis = EchelonBasis()
    for row in rows:
        basis.add(dict(row))
    return basis.rank


def graded_quotient_dimensions(relations: Sequence[Polynomial], nvars: int,
                               max_degree: int) -> list[int]:
    """Dimensions of the degree-k pieces, k = 0..max_degree, of Q[x]/(relations).

    Degree counts polynomial degree.  The degree-k piece of the ideal is
    spanned by relation * monomial products; its dimension is found by exact
    elimination.
    """
    for rel in relations:
        if not rel.is_homogeneous():
            raise ValueError("relations must be homogeneous")
    dims = []
    for k in range(max_degree + 1):
        basis = EchelonBasis()
        for rel in relations:
            dr = rel.degree
            if dr < 0 or dr > k:
                continue
            for mono in monomials(nvars, k - dr):
                row = {}
                for m, c in rel.terms.items():
                    key = tuple(x + y for x, y in zip(m, mono))
                    row[key] = row.get(key, 0) + c
                basis.add(row)
        dims.append(comb(k + nvars - 1, nvars - 1) - basis.rank if nvars else int(k == 0))
    return dims


def complete_intersection_series(nvars: int, relation_degrees: Sequence[int],
                                 max_degree: int) -> list[int]:
    """Coefficients of prod(1 - q^a) / (1 - q)^nvars up to q^max_degree."""
    coeffs = [comb(k + nvars - 1, nvars - 1) if nvars else int(k == 0)
              for k in range(max_degree + 1)]
    for a in relation_degrees:
        coeffs = [coeffs[k] - (coeffs[k - a] if k >= a else 0) for k in range(max_degree + 1)]
    return coeffs


def express_in_span(target: Polynomial, spanning: Sequence[Polynomial]):
    """Rational coefficients ``a`` with ``target == sum(a_i * spanning_i)``, or None."""
    monos = sorted({m for p in (target, *spanning) for m in p.terms})
    n = len(spanning)
    # augmented columns: one per spanning polynomial, last is the target
    rows = [[p.terms.get(m, Fraction(0)) for p in spanning] + [target.terms.get(m, Fraction(0))]
            for m in monos]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][col]
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    if any(rows[i][n] != 0 for i in range(r, len(rows))):
        return None
    coeffs = [Fraction(0)] * n
    for i, col in enumerate(pivots):
        coeffs[col] = rows[i][n]
    return coeffs
