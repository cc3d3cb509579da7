"""Framed lattices in C, the actions on them, and isogeny arithmetic.

A framed lattice is a pair ``(t1, t2)`` with ``R t1 + R t2 = C``; GL_2(Z)
acts by ``A.(t1, t2) = (a t1 + b t2, c t1 + d t2)`` and C^x by scaling.
Points of the total space over a product of curves carry ``y in C^d`` and,
for the extended group, ``x = (x1, x2)`` on the locus
``t1 x1 + t2 x2 = -phi(y)``; that locus descends to coordinates
``(tau, z, u) = (t1/t2, y/t2, exp(2 pi i x1/t2))``.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .intlat import (
    as_matrix,
    det,
    is_integral,
    is_unimodular,
    matmul,
    rational_inverse,
    smith_normal_form,
    transpose,
    unimodular_inverse,
)
from .qform import QuadraticForm
from .wreath import Pi2Element, WreathElement, act_pi2

TWO_PI_I = 2j * math.pi


class LocusError(ValueError):
    """A point is off the locus t1 x1 + t2 x2 = -phi(y)."""


@dataclass(frozen=True)
class FramedLattice:
    t1: complex
    t2: complex

    def __post_init__(self):
        object.__setattr__(self, "t1", complex(self.t1))
        object.__setattr__(self, "t2", complex(self.t2))
        if (self.t1 * self.t2.conjugate()).imag == 0:
            raise ValueError("t1 and t2 do not span C over R")

    @property
    def tau(self) -> complex:
        return self.t1 / self.t2

    def to_json(self) -> dict:
        return {"t1": [self.t1.real, self.t1.imag], "t2": [self.t2.real, self.t2.imag]}

    @classmethod
    def from_json(cls, data: dict) -> "FramedLattice":
        return cls(complex(*data["t1"]), complex(*data["t2"]))


@dataclass(frozen=True)
class CurveTuple:
    lattice: FramedLattice
    y: tuple

    def __post_init__(self):
        object.__setattr__(self, "y", tuple(complex(v) for v in self.y))


@dataclass(frozen=True)
class DescendedPoint:
    tau: complex
    z: tuple
    u: complex

    def __post_init__(self):
        object.__setattr__(self, "z", tuple(complex(v) for v in self.z))
        if self.tau.imag == 0:
            raise ValueError("tau must not be real")
        if self.u == 0:
            raise ValueError("u must be nonzero")


def _check_gl2(a):
    a = as_matrix(a)
    if len(a) != 2 or not is_unimodular(a):
        raise ValueError("expected an element of GL_2(Z)")
    return a


def act_gl2(a, lat: FramedLattice) -> FramedLattice:
    (p, q), (r, s) = _check_gl2(a)
    return FramedLattice(p * lat.t1 + q * lat.t2, r * lat.t1 + s * lat.t2)


def act_scale(lam: complex, obj):
    """Scale a framed lattice, curve tuple or descended-free object by ``lam``."""
    if lam == 0:
        raise ValueError("scaling factor must be nonzero")
    if isinstance(obj, FramedLattice):
        return FramedLattice(lam * obj.t1, lam * obj.t2)
    if isinstance(obj, CurveTuple):
        return CurveTuple(act_scale(lam, obj.lattice), tuple(lam * v for v in obj.y))
    raise TypeError(f"cannot scale {type(obj).__name__}")


def act_translate(m, p: CurveTuple) -> CurveTuple:
    """``y -> y + m1 t1 + m2 t2`` where ``m = (m1, m2)``, each of length d."""
    m1, m2 = m
    t1, t2 = p.lattice.t1, p.lattice.t2
    return CurveTuple(p.lattice, tuple(y + a * t1 + b * t2 for y, a, b in zip(p.y, m1, m2)))


def mobius(a, tau: complex) -> complex:
    (p, q), (r, s) = a
    return (p * tau + q) / (r * tau + s)


_T = ((1, 1), (0, 1))
_S = ((0, -1), (1, 0))
_FLIP = ((-1, 0), (0, 1))


def reduce_tau(tau: complex, eps: float = 1e-12) -> tuple[complex, tuple]:
    """Move ``tau`` into the standard fundamental domain.

    Returns ``(tau_red, A)`` with ``A.tau == tau_red`` (Mobius action),
    ``Im tau_red > 0``, ``-1/2 <= Re tau_red < 1/2``, ``|tau_red| >= 1`` and
    ``Re tau_red <= 0`` when ``|tau_red| == 1``.  A point in the lower half
    plane is first reflected by ``diag(-1, 1)`` (det -1).
    """
    tau = complex(tau)
    if tau.imag == 0:
        raise ValueError("tau must not be real")
    a = ((1, 0), (0, 1))
    if tau.imag < 0:
        a = _FLIP
        tau = -tau
    for _ in range(10_000):
        n = math.floor(tau.real + 0.5)
        if tau.real - n >= 0.5:
            n += 1
        elif tau.real - n < -0.5:
            n -= 1
        if n:
            a = matmul(((1, -n), (0, 1)), a)
            tau = tau - n
        if abs(tau) < 1 - eps:
            a = matmul(_S, a)
            tau = -1 / tau
            continue
        break
    else:
        raise RuntimeError("reduction did not terminate")
    if abs(abs(tau) - 1) <= eps and tau.real > eps:
        a = matmul(_S, a)
        tau = -1 / tau
    if abs(tau.real + 0.5) <= eps:
        # snap the left edge exactly so repeated reduction is stable
        tau = complex(-0.5, tau.imag)
    return tau, a


def curves_isomorphic(lat: FramedLattice, lat2: FramedLattice, tol: float = 1e-9):
    """Return ``(A, lam)`` with ``lam * (A . lat) == lat2`` within ``tol``, or None."""
    tau1, a1 = reduce_tau(lat.tau)
    tau2, a2 = reduce_tau(lat2.tau)
    # boundary points may land on either side; try the identifications
    candidates = [(tau2, ((1, 0), (0, 1))), (tau2 + 1, ((1, 1), (0, 1))),
                  (tau2 - 1, ((1, -1), (0, 1))), (-1 / tau2, _S)]
    for target, g in candidates:
        if abs(target - tau1) <= tol * max(1.0, abs(tau1)):
            # g . tau2 ~ tau1 so (a2^-1 g^-1 a1) . tau ~ tau'
            a = matmul(unimodular_inverse(a2), matmul(unimodular_inverse(g), a1))
            moved = act_gl2(a, lat)
            lam = lat2.t2 / moved.t2
            if abs(lam * moved.t1 - lat2.t1) <= tol * max(1.0, abs(lat2.t1)):
                return a, lam
    return None


# -- descent to (tau, z, u) ------------------------------------------------

def on_locus(q: QuadraticForm, lat: FramedLattice, y, x, tol: float = 1e-9) -> bool:
    lhs = lat.t1 * x[0] + lat.t2 * x[1]
    rhs = -q.phi(tuple(y))[0] if q.d else 0
    return abs(lhs - rhs) <= tol * max(1.0, abs(lhs), abs(rhs))


def locus_point(q: QuadraticForm, lat: FramedLattice, y, x1: complex) -> tuple:
    """Complete ``x1`` to ``(x1, x2)`` on the locus."""
    phi = q.phi(tuple(y))[0] if q.d else 0
    return x1, (-phi - lat.t1 * x1) / lat.t2


def descend(q: QuadraticForm, lat: FramedLattice, y, x, tol: float = 1e-9) -> DescendedPoint:
    if q.e != 1:
        raise ValueError("descent needs a single quadratic form (e = 1)")
    if not on_locus(q, lat, y, x, tol):
        raise LocusError("point violates t1 x1 + t2 x2 = -phi(y)")
    t2 = lat.t2
    return DescendedPoint(lat.t1 / t2, tuple(v / t2 for v in y), cmath.exp(TWO_PI_I * x[0] / t2))


def act_upstairs(q: QuadraticForm, w: WreathElement, lat: FramedLattice, y, x):
    """The group action on ``(t, y, x)`` with complex coordinates (rank 2, e = 1)."""
    p = act_pi2(q, w, Pi2Element((lat.t1, lat.t2), tuple(y), (tuple(x),)))
    return FramedLattice(*p.t), p.y, p.x[0]


def descended_translate(q: QuadraticForm, m, p: DescendedPoint) -> DescendedPoint:
    """``(tau, z + m1 tau + m2, u exp(2 pi i [-beta(z, m1) - phi(m1) tau]))``."""
    m1, m2 = (tuple(v) for v in m)
    z = tuple(zi + a * p.tau + b for zi, a, b in zip(p.z, m1, m2))
    expo = -q.beta(p.z, m1)[0] - q.phi(m1)[0] * p.tau if q.d else 0
    return DescendedPoint(p.tau, z, p.u * cmath.exp(TWO_PI_I * expo))


def descended_gl2(q: QuadraticForm, a, p: DescendedPoint) -> DescendedPoint:
    """``(A tau, z / (c tau + d), u^(1/det) exp(2 pi i / det [c phi(z) / (c tau + d)]))``."""
    (pa, pb), (pc, pd) = _check_gl2(a)
    j = pc * p.tau + pd
    if j == 0:
        raise ZeroDivisionError("c tau + d vanishes")
    sign = det(a)
    phi_z = q.phi(p.z)[0] if q.d else 0
    u = p.u if sign == 1 else 1 / p.u
    factor = cmath.exp(TWO_PI_I * sign * pc * phi_z / j)
    return DescendedPoint(mobius(((pa, pb), (pc, pd)), p.tau), tuple(v / j for v in p.z), u * factor)


def descended_act(q: QuadraticForm, w: WreathElement, p: DescendedPoint) -> DescendedPoint:
    """Action of ``w = A (m, n)``: translate by ``m``, then apply ``A``; ``n`` acts trivially."""
    if w.ext.r != 2:
        raise ValueError("descended coordinates need rank 2")
    m = (tuple(row[0] for row in w.m), tuple(row[1] for row in w.m))
    return descended_gl2(q, w.A, descended_translate(q, m, p))


# -- isogenies --------------------------------------------------------------

def _nonsingular(b):
    b = as_matrix(b)
    if len(b) != 2 or len(b[0]) != 2:
        raise ValueError("isogeny matrix must be 2 x 2")
    if det(b) == 0:
        raise ValueError("isogeny matrix is singular")
    return b


def gamma_B_conjugate(b, a):
    """``B^-1 A B`` with exact rational entries."""
    b = _nonsingular(b)
    return matmul(rational_inverse(b), matmul(as_matrix(a), b))


def gamma_B_member(b, a) -> bool:
    """Membership of ``A`` in Gamma_B = GL_2(Z) n B GL_2(Z) B^-1.

    ``A`` is a member iff ``B^-1 A B`` is again integral (its determinant is
    automatically +-1).  For ``B = diag(M, MN)`` this is Gamma_0(N).
    """
    a = _check_gl2(a)
    return is_integral(gamma_B_conjugate(b, a))


def isogeny_degree(b) -> int:
    return abs(det(_nonsingular(b)))


def isogeny_normal_form(b) -> tuple[int, int]:
    """``(M, N)`` with ``B ~ diag(M, MN)`` under change of bases."""
    _, dmat, _ = smith_normal_form(_nonsingular(b))
    return dmat[0][0], dmat[1][1] // dmat[0][0]


def source_lattice(b, lat: FramedLattice) -> FramedLattice:
    """The sublattice spanned by ``B t``."""
    (p, q), (r, s) = _nonsingular(b)
    return FramedLattice(p * lat.t1 + q * lat.t2, r * lat.t1 + s * lat.t2)


def _frac_part(v: float, eps: float = 1e-12) -> float:
    # coordinates within eps of an integer count as that integer
    n = round(v)
    if abs(v - n) <= eps * max(1.0, abs(v)):
        return 0.0
    return v - math.floor(v)


def reduce_mod_lattice(y: complex, lat: FramedLattice) -> complex:
    """Representative of ``y`` in the half-open parallelogram ``[0,1) t1 + [0,1) t2``."""
    t1, t2 = lat.t1, lat.t2
    d = (t1.conjugate() * t2).imag
    a = (y.conjugate() * t2).imag / d
    b = (t1.conjugate() * y).imag / d
    a, b = _frac_part(a), _frac_part(b)
    p = a * t1 + b * t2
    return complex(p.real + 0.0, p.imag + 0.0)


def isogeny_map(b, lat: FramedLattice, y: complex) -> complex:
    """Image of ``y`` under C/(Bt lattice) -> C/(t lattice), reduced in the target."""
    _nonsingular(b)
    return reduce_mod_lattice(complex(y), lat)


def isogeny_kernel(b, lat: FramedLattice) -> list[complex]:
    """Representatives of the kernel, the t-lattice modulo the Bt-lattice.

    The Bt-lattice has coordinates ``B^T Z^2`` relative to ``(t1, t2)``; with
    ``U B^T V = D`` the cosets are ``U^-1 (i, j)``, ``0 <= i < d1``, ``0 <= j < d2``.
    """
    bt = transpose(_nonsingular(b))
    u, dmat, _ = smith_normal_form(bt)
    u_inv = unimodular_inverse(u)
    src = source_lattice(b, lat)
    points = []
    for i, j in itertools.product(range(dmat[0][0]), range(dmat[1][1])):
        k1 = u_inv[0][0] * i + u_inv[0][1] * j
        k2 = u_inv[1][0] * i + u_inv[1][1] * j
        points.append(reduce_mod_lattice(k1 * lat.t1 + k2 * lat.t2, src))
    return points


def kernel_coordinates(b) -> list[tuple[Fraction, Fraction]]:
    """Kernel cosets as exact coordinates relative to the Bt basis, in [0, 1)^2."""
    bt = transpose(_nonsingular(b))
    u, dmat, _ = smith_normal_form(bt)
    u_inv = unimodular_inverse(u)
    inv = rational_inverse(bt)
    out = []
    for i, j in itertools.product(range(dmat[0][0]), range(dmat[1][1])):
        k = (u_inv[0][0] * i + u_inv[0][1] * j, u_inv[1][0] * i + u_inv[1][1] * j)
        s = tuple((inv[r][0] * k[0] + inv[r][1] * k[1]) % 1 for r in range(2))
        out.append(s)
    return out
