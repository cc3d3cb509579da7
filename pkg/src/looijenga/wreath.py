"""The discrete group Aut(L) x| E and its action on pi_2 and pi_3.

Conventions, with L = Z^r, B = Z^d, C = Z^e:

* ``m`` in Hom(L, B) is a d x r integer matrix; ``x`` in Hom(L, C) is e x r.
* ``n`` in Hom(Lambda^2 L, C) is an :class:`~looijenga.intlat.AltForm`.
* E has the law ``(m, n)(m', n') = (m + m', omega(m (x) m') + n + n')``.
* Aut(L) acts on E by ``A.(m, n) = (m A^-1, n o Lambda^2 A^-1)``.
* A wreath element ``(A, g)`` is the product ``A g``, with the semidirect law
  ``(A, g)(A', g') = (A A', (A'^-1 . g) g')``.  It therefore acts on pi_2 by
  first applying ``g`` and then ``A``.

The action formulas only use ring operations, so ``t``, ``y``, ``x`` of a
:class:`Pi2Element` may hold ints, Fractions, complex numbers or
:class:`~looijenga.polyring.Polynomial` objects.
"""

from __future__ import annotations

from dataclasses import dataclass

from .intlat import (
    AltForm,
    _unimodular_inverse,
    DimensionError,
    as_matrix,
    contract,
    identity,
    is_unimodular,
    matmul,
    matrix_from_json,
    matrix_to_json,
    matvec,
    unimodular_inverse,
    wedge_basis,
    zeros,
)
from .qform import QuadraticForm, _omega_wedge, omega_wedge


@dataclass(frozen=True)
class ExtElement:
    m: tuple
    n: AltForm

    def __post_init__(self):
        object.__setattr__(self, "m", as_matrix(self.m))
        if any(len(row) != self.n.r for row in self.m):
            raise DimensionError("m must be a d x r matrix")

    @property
    def r(self) -> int:
        return self.n.r

    @property
    def d(self) -> int:
        return len(self.m)

    @property
    def e(self) -> int:
        return self.n.e


@dataclass(frozen=True)
class WreathElement:
    A: tuple
    ext: ExtElement

    def __post_init__(self):
        object.__setattr__(self, "A", as_matrix(self.A))
        if len(self.A) != self.ext.r or not is_unimodular(self.A):
            raise ValueError("A must be a unimodular r x r matrix")

    @property
    def m(self):
        return self.ext.m

    @property
    def n(self) -> AltForm:
        return self.ext.n

    def to_json(self) -> dict:
        return {
            "A": matrix_to_json(self.A),
            "m": matrix_to_json(self.m),
            "n": {f"{i},{j}": [str(v) for v in self.n(i, j)] for i, j in wedge_basis(self.ext.r)},
        }

    @classmethod
    def from_json(cls, data: dict, e: int | None = None) -> "WreathElement":
        a = matrix_from_json(data["A"])
        r = len(a)
        m = matrix_from_json(data.get("m", []))
        raw = data.get("n", {})
        if e is None:
            e = len(next(iter(raw.values()))) if raw else 0

        def value(i, j):
            v = raw.get(f"{i},{j}", ["0"] * e)
            v = v if isinstance(v, list) else [v]
            if len(v) != e:
                raise DimensionError("n values must have e components")
            return tuple(int(x) for x in v)

        return cls(a, ExtElement(m, AltForm.from_function(r, e, value)))


@dataclass(frozen=True)
class Pi2Element:
    """A point ``(t, y, x)`` of L x B x Hom(L, C) (tensored with any ring)."""

    t: tuple
    y: tuple
    x: tuple

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(self.t))
        object.__setattr__(self, "y", tuple(self.y))
        object.__setattr__(self, "x", tuple(tuple(row) for row in self.x))
        if any(len(row) != len(self.t) for row in self.x):
            raise DimensionError("x must be an e x r matrix")


def _ext(m, n: AltForm) -> ExtElement:
    # for results of the group law, whose shapes are already known to agree
    g = object.__new__(ExtElement)
    object.__setattr__(g, "m", m)
    object.__setattr__(g, "n", n)
    return g


def _wreath(a, g: ExtElement) -> WreathElement:
    w = object.__new__(WreathElement)
    object.__setattr__(w, "A", a)
    object.__setattr__(w, "ext", g)
    return w


def ext_identity(r: int, d: int, e: int) -> ExtElement:
    return ExtElement(zeros(d, r), AltForm.zero(r, e))


def _check_ambient(q: QuadraticForm, *elements: ExtElement):
    r = elements[0].r
    for g in elements:
        if g.d != q.d or g.e != q.e or g.r != r:
            raise DimensionError("element does not match the ambient (r, d, e)")


def _add_m(m, m2):
    return tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(m, m2))


def _neg_m(m):
    return tuple(tuple(-a for a in row) for row in m)


def ext_mul(q: QuadraticForm, g: ExtElement, g2: ExtElement) -> ExtElement:
    _check_ambient(q, g, g2)
    return _ext(_add_m(g.m, g2.m), _omega_wedge(q, g.m, g2.m, g.r) + g.n + g2.n)


def ext_inv(q: QuadraticForm, g: ExtElement) -> ExtElement:
    # (m, n)^-1 = (-m, omega(m (x) m) - n)
    _check_ambient(q, g)
    return _ext(_neg_m(g.m), _omega_wedge(q, g.m, g.m, g.r) - g.n)


def aut_on_ext(q: QuadraticForm, a, g: ExtElement) -> ExtElement:
    a = as_matrix(a)
    if len(a) != g.r:
        raise DimensionError("automorphism has the wrong rank")
    return _act_by_inverse(g, _unimodular_inverse(a))


def _act_by_inverse(g: ExtElement, a_inv) -> ExtElement:
    # A acting on (m, n), given the normalized matrix A^-1
    m = matmul(g.m, a_inv) if g.d else g.m
    return _ext(m, g.n._pullback(a_inv))


def wreath_identity(r: int, d: int, e: int) -> WreathElement:
    return WreathElement(identity(r), ext_identity(r, d, e))


def wreath_mul(q: QuadraticForm, w: WreathElement, w2: WreathElement) -> WreathElement:
    # A2^-1 acts through the inverse of A2^-1, which is A2 itself
    return _wreath(matmul(w.A, w2.A), ext_mul(q, _act_by_inverse(w.ext, w2.A), w2.ext))


def wreath_inv(q: QuadraticForm, w: WreathElement) -> WreathElement:
    a_inv = _unimodular_inverse(w.A)
    return _wreath(a_inv, ext_inv(q, _act_by_inverse(w.ext, a_inv)))


def pure_aut(a, d: int, e: int) -> WreathElement:
    a = as_matrix(a)
    return WreathElement(a, ext_identity(len(a), d, e))


def pure_ext(g: ExtElement) -> WreathElement:
    return WreathElement(identity(g.r), g)


def _check_point(q: QuadraticForm, w: WreathElement, p: Pi2Element):
    if len(p.t) != w.ext.r or len(p.y) != q.d or len(p.x) != q.e:
        raise DimensionError("pi_2 element does not match the ambient (r, d, e)")
    if w.ext.d != q.d or w.ext.e != q.e:
        raise DimensionError("group element does not match the form")


def ext_act_pi2(q: QuadraticForm, g: ExtElement, p: Pi2Element) -> Pi2Element:
    """``(m, n).(t, y, x) = (t, y + mt, x - beta(y, m) - omega(mt, m) + n contracted with t)``."""
    r = g.r
    mt = matvec(g.m, p.t) if q.d else ()
    y = tuple(a + b for a, b in zip(p.y, mt))
    cols = [tuple(row[j] for row in g.m) for j in range(r)]
    nt = contract(g.n, p.t)
    shift = [[nt[k][j] for j in range(r)] for k in range(q.e)]
    if q.d:
        for j in range(r):
            for k, (b, o) in enumerate(zip(q.beta(p.y, cols[j]), q.omega(mt, cols[j]))):
                shift[k][j] = shift[k][j] - b - o
    x = tuple(tuple(p.x[k][j] + shift[k][j] for j in range(r)) for k in range(q.e))
    return Pi2Element(p.t, y, x)


def aut_act_pi2(a, p: Pi2Element) -> Pi2Element:
    """``A.(t, y, x) = (At, y, x A^-1)``."""
    a_inv = unimodular_inverse(a)
    return Pi2Element(matvec(a, p.t), p.y, matmul(p.x, a_inv) if p.x else ())


def act_pi2(q: QuadraticForm, w: WreathElement, p: Pi2Element) -> Pi2Element:
    _check_point(q, w, p)
    return aut_act_pi2(w.A, ext_act_pi2(q, w.ext, p))


def act_pi3(q: QuadraticForm, w: WreathElement, c: tuple) -> tuple:
    """The whole group fixes pi_3 = C."""
    if len(c) != q.e:
        raise DimensionError("pi_3 element must have e components")
    return tuple(c)


def quad_invariant_sharp(q: QuadraticForm, p: Pi2Element) -> tuple:
    """``phi#(t, y, x) = phi(y) + x t`` in C."""
    phi = q.phi(p.y) if q.d else (0,) * q.e
    xt = matvec(p.x, p.t) if p.x else ()
    return tuple(a + b for a, b in zip(phi, xt))


def specialize_rank2(q: QuadraticForm, w: WreathElement, p: Pi2Element) -> Pi2Element:
    """Rank-2 action written out coordinate by coordinate (e = 1).

    ``n: x1 - n t2, x2 + n t1``; ``m: y + m1 t1 + m2 t2,
    x_i - beta(y, m_i) - omega(m1 t1 + m2 t2, m_i)``; then
    ``A: (a t1 + b t2, c t1 + d t2), ((d x1 - c x2)/det A, (-b x1 + a x2)/det A)``.
    """
    if w.ext.r != 2 or q.e != 1:
        raise DimensionError("specialization needs r = 2 and e = 1")
    _check_point(q, w, p)
    t1, t2 = p.t
    x1, x2 = p.x[0]
    n = w.n(0, 1)[0]
    m1 = tuple(row[0] for row in w.m)
    m2 = tuple(row[1] for row in w.m)

    x1, x2 = x1 - n * t2, x2 + n * t1

    mt = tuple(a * t1 + b * t2 for a, b in zip(m1, m2))
    y = tuple(yi + s for yi, s in zip(p.y, mt))
    if q.d:
        x1 = x1 - q.beta(p.y, m1)[0] - q.omega(mt, m1)[0]
        x2 = x2 - q.beta(p.y, m2)[0] - q.omega(mt, m2)[0]

    (a, b), (c, d) = w.A
    det_a = a * d - b * c  # 1/det = det for det = +-1
    return Pi2Element((a * t1 + b * t2, c * t1 + d * t2), y,
                      ((det_a * (d * x1 - c * x2), det_a * (-b * x1 + a * x2)),))


def ext_cocycle(q: QuadraticForm, m, m2, r: int | None = None) -> AltForm:
    """The 2-cocycle ``(m, m') -> omega(m (x) m')`` defining E."""
    return omega_wedge(q, m, m2, r)


def antisymmetrized_cocycle(q: QuadraticForm, m, m2, r: int | None = None) -> AltForm:
    """``gamma(m, m') - gamma(m', m)`` computed from the chosen extension."""
    return omega_wedge(q, m, m2, r) - omega_wedge(q, m2, m, r)


def hessian_cocycle(q: QuadraticForm, m, m2, r: int | None = None) -> AltForm:
    """``e_i ^ e_j -> beta(m e_i, m' e_j) - beta(m e_j, m' e_i)``; depends on phi only."""
    m, m2 = as_matrix(m), as_matrix(m2)
    if r is None:
        r = len(m[0])
    cols = [tuple(row[i] for row in m) for i in range(r)]
    cols2 = [tuple(row[i] for row in m2) for i in range(r)]
    return AltForm.from_function(r, q.e, lambda i, j: tuple(
        a - b for a, b in zip(q.beta(cols[i], cols2[j]), q.beta(cols[j], cols2[i]))))
