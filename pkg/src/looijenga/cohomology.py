"""Graded quotient presentations and the group action on their generators.

All generators sit in cohomological degree 2, so cohomological degree ``2k``
is polynomial degree ``k`` throughout.  For a form ``phi: Z^d -> Z^e`` and rank
``r`` the ring is ``Q[t_1..t_r, y_1..y_d, x_ik] / (phi_k(y) + sum_i t_i x_ik)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .intlat import DimensionError
from .polyring import (
    Polynomial,
    complete_intersection_series,
    express_in_span,
    graded_quotient_dimensions,
)
from .qform import QuadraticForm, phi_polynomials
from .wreath import Pi2Element, WreathElement, act_pi2, wreath_inv


class EquivarianceError(RuntimeError):
    """A substitution failed to permute a family of relations."""


@dataclass(frozen=True)
class GradedPresentation:
    names: tuple
    degrees: tuple
    relations: tuple

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError("generator names must be distinct")
        for rel in self.relations:
            if rel.nvars != len(self.names):
                raise DimensionError("relation lives in the wrong ring")
            if not rel.is_homogeneous():
                raise ValueError("relations must be homogeneous")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def variable(self, name: str) -> Polynomial:
        return Polynomial.variable(self.nvars, self.names.index(name))

    def term_order(self, mono) -> tuple:
        # pure y-monomials first, then descending exponents
        rest = sum(k for n, k in zip(self.names, mono) if not n.startswith("y"))
        return (rest, tuple(-k for k in mono))

    def format_relations(self) -> list[str]:
        return [rel.format(self.names, self.term_order) for rel in self.relations]

    def to_json(self) -> dict:
        def mono_key(mono):
            parts = [n if k == 1 else f"{n}^{k}" for n, k in zip(self.names, mono) if k]
            return "*".join(parts) or "1"

        return {
            "generators": [{"name": n, "degree": dg} for n, dg in zip(self.names, self.degrees)],
            "relations": [{mono_key(m): str(rel.terms[m]) for m in rel.sorted_monomials(self.term_order)}
                          for rel in self.relations],
        }


def _generator_names(r: int, d: int, e: int) -> tuple:
    ts = [f"t{i + 1}" for i in range(r)]
    ys = ["y"] if d == 1 else [f"y{i + 1}" for i in range(d)]
    if e == 1:
        xs = [f"x{i + 1}" for i in range(r)]
    else:
        xs = [f"x{i + 1}_{k + 1}" for i in range(r) for k in range(e)]
    return tuple(ts + ys + xs)


def _x_index(r: int, d: int, e: int, i: int, k: int) -> int:
    return r + d + i * e + k


def presentation(q: QuadraticForm, r: int) -> GradedPresentation:
    """``phi_k#(t, y, x) = phi_k(y) + sum_i t_i x_ik`` for k = 1..e."""
    if r < 0:
        raise ValueError("rank must be non-negative")
    d, e = q.d, q.e
    names = _generator_names(r, d, e)
    n = len(names)
    phis = phi_polynomials(q, n, offset=r)
    rels = []
    for k in range(e):
        rel = phis[k]
        for i in range(r):
            rel = rel + Polynomial.variable(n, i) * Polynomial.variable(n, _x_index(r, d, e, i, k))
        rels.append(rel)
    return GradedPresentation(names, (2,) * n, tuple(rels))


def hilbert_function(p: GradedPresentation, max_degree: int) -> list[int]:
    """Dimensions in cohomological degrees 0, 2, ..., ``max_degree``."""
    if max_degree % 2 or max_degree < 0:
        raise ValueError("max_degree must be even and non-negative")
    return graded_quotient_dimensions(p.relations, p.nvars, max_degree // 2)


def expected_hilbert_function(p: GradedPresentation, max_degree: int) -> list[int]:
    """Series of a complete intersection with the same generator and relation degrees."""
    return complete_intersection_series(p.nvars, [rel.degree for rel in p.relations], max_degree // 2)


# -- substitutions ---------------------------------------------------------------

@dataclass(frozen=True)
class RingSubstitution:
    """Generator ``g_i`` maps to the linear form ``images[i]``."""

    names: tuple
    images: tuple

    def __post_init__(self):
        if len(self.images) != len(self.names):
            raise DimensionError("need one image per generator")
        for img in self.images:
            if img.nvars != len(self.names):
                raise DimensionError("image lives in the wrong ring")
            if img and img.degrees() != {1}:
                raise ValueError("images must be linear forms")

    @classmethod
    def identity(cls, names) -> "RingSubstitution":
        n = len(names)
        return cls(tuple(names), tuple(Polynomial.variable(n, i) for i in range(n)))

    def apply(self, f: Polynomial) -> Polynomial:
        return f.subs(self.images)

    def compose(self, other: "RingSubstitution") -> "RingSubstitution":
        """``(self o other)(g) = other(g) with self substituted``: apply ``other`` first."""
        if self.names != other.names:
            raise DimensionError("substitutions act on different rings")
        return RingSubstitution(self.names, tuple(img.subs(self.images) for img in other.images))

    def format(self) -> dict:
        return {n: img.format(self.names) for n, img in zip(self.names, self.images)}


def substitution_from_wreath(q: QuadraticForm, w: WreathElement) -> RingSubstitution:
    """Pull back the coordinate functions along ``p -> w.p``.

    Functoriality is contravariant: ``subst(w w') = subst(w') o subst(w)``.
    """
    r, d, e = w.ext.r, q.d, q.e
    names = _generator_names(r, d, e)
    n = len(names)
    var = [Polynomial.variable(n, i) for i in range(n)]
    t = var[:r]
    y = var[r:r + d]
    x = [[var[_x_index(r, d, e, i, k)] for i in range(r)] for k in range(e)]
    image = act_pi2(q, w, Pi2Element(t, y, x))
    zero = Polynomial(n)
    flat = list(image.t) + list(image.y) + [image.x[k][i] for i in range(r) for k in range(e)]
    return RingSubstitution(names, tuple(zero + f for f in flat))


@dataclass(frozen=True)
class InvarianceReport:
    invariant: bool
    on_the_nose: bool
    coefficients: tuple


def ideal_invariance_report(p: GradedPresentation, s: RingSubstitution) -> InvarianceReport:
    """Whether every substituted relation lies in the span of the relations.

    Relations are homogeneous quadrics in the generators and the substitution
    is linear, so membership in the ideal in that degree is membership in the
    Q-span of the relations themselves.
    """
    if s.names != p.names:
        raise DimensionError("substitution and presentation use different generators")
    coeffs = []
    nose = True
    for rel in p.relations:
        image = s.apply(rel)
        nose = nose and image == rel
        sol = express_in_span(image, p.relations)
        if sol is None:
            return InvarianceReport(False, False, ())
        coeffs.append(tuple(sol))
    return InvarianceReport(True, nose, tuple(coeffs))


def ideal_invariance_check(p: GradedPresentation, s: RingSubstitution) -> bool:
    return ideal_invariance_report(p, s).invariant


# -- orbit module -----------------------------------------------------------------

ORBIT_NAMES = ("t1", "t2", "y")


def orbit_relation(n_level: int, index) -> Polynomial:
    n1, n2 = index
    t1, t2, y = (Polynomial.variable(3, i) for i in range(3))
    return y - Fraction(n1, n_level) * t1 - Fraction(n2, n_level) * t2


def orbit_module(n_level: int, index) -> GradedPresentation:
    """The factor ``Q[t1, t2, y] / (y - (n1/N) t1 - (n2/N) t2)``."""
    if n_level < 1:
        raise ValueError("N must be a positive integer")
    return GradedPresentation(ORBIT_NAMES, (2, 2, 2), (orbit_relation(n_level, index),))


def _relation_index(n_level: int, rel: Polynomial):
    # rel is a multiple of y - a t1 - b t2; normalize by the y coefficient
    cy = rel.terms.get((0, 0, 1))
    if not cy or set(rel.terms) - {(1, 0, 0), (0, 1, 0), (0, 0, 1)}:
        return None
    a = -rel.terms.get((1, 0, 0), 0) / cy * n_level
    b = -rel.terms.get((0, 1, 0), 0) / cy * n_level
    if a.denominator != 1 or b.denominator != 1:
        return None
    return int(a), int(b)


def _orbit_substitution(w: WreathElement) -> RingSubstitution:
    if w.ext.r != 2 or w.ext.d != 1 or w.ext.e != 0:
        raise DimensionError("orbit action needs r = 2, d = 1 and no central part")
    return substitution_from_wreath(QuadraticForm.zero(1), w)


def _index_under(n_level: int, s: RingSubstitution, index) -> tuple:
    j = _relation_index(n_level, s.apply(orbit_relation(n_level, index)))
    if j is None:
        raise EquivarianceError(f"relation {tuple(index)} is not sent to another relation")
    return j


def orbit_index_map(n_level: int, w: WreathElement, index) -> tuple:
    """The index ``j`` with ``subst(w)(R_index)`` a multiple of ``R_j``."""
    return _index_under(n_level, _orbit_substitution(w), index)


def orbit_equivariance_check(n_level: int, w: WreathElement, window: int | None = None) -> dict:
    """Index permutation induced by ``w`` on ``|n_i| <= window`` (default 5N).

    Raises :class:`EquivarianceError` unless the map is injective on the window
    and undone by the inverse element.
    """
    if n_level < 1:
        raise ValueError("N must be a positive integer")
    window = 5 * n_level if window is None else window
    s = _orbit_substitution(w)
    s_inv = _orbit_substitution(wreath_inv(QuadraticForm.zero(1), w))
    rng = range(-window, window + 1)
    perm = {}
    for n1 in rng:
        for n2 in rng:
            j = _index_under(n_level, s, (n1, n2))
            if _index_under(n_level, s_inv, j) != (n1, n2):
                raise EquivarianceError(f"inverse element does not undo the map at {(n1, n2)}")
            perm[(n1, n2)] = j
    if len(set(perm.values())) != len(perm):
        raise EquivarianceError("index map is not injective")
    return perm
