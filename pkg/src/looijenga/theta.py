"""Line-bundle data on C^d / (Z^d tau + Z^d) built from a positive definite form.

The factor of automorphy for ``u = m1 tau + m2`` is ``exp(2 pi i f_u(z))`` with
``f_u(z) = -beta(z, m1) - phi(m1) tau``.  Theta functions with characteristic
``u in c^-1 Z^d`` are the lattice sums

    theta_u(tau, z) = sum_v exp(2 pi i [-beta(z, u + v) + phi(u + v) tau]),

truncated to ``|v|_inf <= R`` with ``R`` chosen from a Gaussian tail bound.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .intlat import det, matvec
from .qform import DegenerateFormError, DualCosetRep, QuadraticForm, dual_coset_reps, is_positive_definite

TWO_PI = 2 * math.pi


class ConvergenceError(ArithmeticError):
    """The truncation cap was reached before the tail bound fell below tolerance."""

    def __init__(self, message: str, bound: float, radius: int):
        super().__init__(message)
        self.bound = bound
        self.radius = radius


@dataclass(frozen=True)
class LatticeVector:
    """The period ``m1 tau + m2`` with integer vectors ``m1``, ``m2``."""

    m1: tuple
    m2: tuple

    def __post_init__(self):
        object.__setattr__(self, "m1", tuple(int(v) for v in self.m1))
        object.__setattr__(self, "m2", tuple(int(v) for v in self.m2))
        if len(self.m1) != len(self.m2):
            raise ValueError("m1 and m2 must have the same length")

    def __add__(self, other: "LatticeVector") -> "LatticeVector":
        return LatticeVector(tuple(a + b for a, b in zip(self.m1, other.m1)),
                             tuple(a + b for a, b in zip(self.m2, other.m2)))

    def point(self, tau: complex) -> tuple:
        return tuple(a * tau + b for a, b in zip(self.m1, self.m2))


# -- exact affine forms in (tau, z) -----------------------------------------

@dataclass(frozen=True)
class AffineForm:
    """``tau_coef * tau + sum z_coef[i] z_i + const`` with rational coefficients."""

    tau_coef: Fraction
    z_coef: tuple
    const: Fraction

    def __add__(self, other: "AffineForm") -> "AffineForm":
        return AffineForm(self.tau_coef + other.tau_coef,
                          tuple(a + b for a, b in zip(self.z_coef, other.z_coef)),
                          self.const + other.const)

    def __neg__(self) -> "AffineForm":
        return AffineForm(-self.tau_coef, tuple(-a for a in self.z_coef), -self.const)

    def __sub__(self, other: "AffineForm") -> "AffineForm":
        return self + (-other)

    def shifted(self, u: LatticeVector) -> "AffineForm":
        """The form ``z -> self(z + m1 tau + m2)``."""
        tau = self.tau_coef + sum((a * m for a, m in zip(self.z_coef, u.m1)), Fraction(0))
        const = self.const + sum((a * m for a, m in zip(self.z_coef, u.m2)), Fraction(0))
        return AffineForm(tau, self.z_coef, const)

    def is_constant(self) -> bool:
        return self.tau_coef == 0 and not any(self.z_coef)

    def __call__(self, tau: complex, z: Sequence[complex]) -> complex:
        return self.tau_coef * tau + sum(a * zi for a, zi in zip(self.z_coef, z)) + self.const


def _check_form(q: QuadraticForm, *vectors):
    if q.e != 1:
        raise ValueError("a single quadratic form (e = 1) is required")
    for v in vectors:
        if len(v) != q.d:
            raise ValueError(f"expected length {q.d}, got {len(v)}")


def cocycle_f_symbolic(q: QuadraticForm, u: LatticeVector) -> AffineForm:
    _check_form(q, u.m1)
    c = q.matrix
    cm1 = matvec(c, u.m1)
    return AffineForm(-Fraction(q.phi(u.m1)[0]), tuple(Fraction(-v) for v in cm1), Fraction(0))


def cocycle_f(q: QuadraticForm, u: LatticeVector, tau: complex, z: Sequence[complex]) -> complex:
    """``f_u(z) = -beta(z, m1) - phi(m1) tau``."""
    _check_form(q, u.m1, z)
    return -q.beta(tuple(z), u.m1)[0] - q.phi(u.m1)[0] * tau


def automorphy_factor(q: QuadraticForm, u: LatticeVector, tau: complex, z) -> complex:
    return cmath.exp(2j * math.pi * cocycle_f(q, u, tau, z))


def cocycle_defect(q: QuadraticForm, u: LatticeVector, u2: LatticeVector) -> AffineForm:
    """``f_u(z + u') + f_u'(z) - f_(u+u')(z)`` as an exact affine form."""
    return (cocycle_f_symbolic(q, u).shifted(u2) + cocycle_f_symbolic(q, u2)
            - cocycle_f_symbolic(q, u + u2))


def chern_form(q: QuadraticForm, u: LatticeVector, u2: LatticeVector) -> int:
    """``E(u, u') = beta(m1, m2') - beta(m2, m1')``."""
    _check_form(q, u.m1, u2.m1)
    return q.beta(u.m1, u2.m2)[0] - q.beta(u.m2, u2.m1)[0]


def chern_form_four_term(q: QuadraticForm, u: LatticeVector, u2: LatticeVector) -> AffineForm:
    """``f_u'(z + u) + f_u(z) - f_u(z + u') - f_u'(z)``, computed symbolically."""
    fu, fu2 = cocycle_f_symbolic(q, u), cocycle_f_symbolic(q, u2)
    return fu2.shifted(u) + fu - fu.shifted(u2) - fu2


def hermitian_form(q: QuadraticForm, x, x2, tau: complex) -> complex:
    """``H(x, x') = (Im tau)^-1 sum c_ij x_i conj(x'_j)``."""
    _check_form(q, x, x2)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    return q.beta(tuple(x), tuple(complex(v).conjugate() for v in x2))[0] / tau.imag


def hermitian_norm(q: QuadraticForm, x, tau: complex) -> float:
    return hermitian_form(q, x, x, tau).real


def modular_factor(q: QuadraticForm, a, tau: complex, z) -> complex:
    """``exp(2 pi i c (c tau + d)^-1 phi(z))`` for ``A = [[a, b], [c, d]]`` in SL_2(Z)."""
    (_, _), (c, d) = a
    if det(a) != 1:
        raise ValueError("A must lie in SL_2(Z)")
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    _check_form(q, z)
    if c == 0:
        return 1 + 0j
    return cmath.exp(2j * math.pi * c * q.phi(tuple(complex(v) for v in z))[0] / (c * tau + d))


def section_dimension(q: QuadraticForm) -> int:
    _check_form(q)
    if not is_positive_definite(q):
        raise DegenerateFormError("form is not positive definite")
    return det(q.matrix)


# -- theta series --------------------------------------------------------------

def _is_positive_definite_exact(mat) -> bool:
    n = len(mat)
    a = [list(row) for row in mat]
    # Gaussian elimination without pivoting; all pivots > 0 iff definite
    for k in range(n):
        if a[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] -= f * a[k][j]
    return True


def certified_min_eigenvalue(c) -> Fraction:
    """A rational lower bound for the smallest eigenvalue of the symmetric matrix ``c``."""
    guess = float(np.linalg.eigvalsh(np.array(c, dtype=float)).min())
    lam = Fraction(guess * 0.99).limit_denominator(10**6)
    for _ in range(200):
        if lam <= 0:
            break
        shifted = [[Fraction(c[i][j]) - (lam if i == j else 0) for j in range(len(c))]
                   for i in range(len(c))]
        if _is_positive_definite_exact(shifted):
            return lam
        lam /= 2
    raise DegenerateFormError("could not certify a positive eigenvalue bound")


def _shell_size(d: int, k: int) -> int:
    return (2 * k + 1) ** d - (2 * k - 1) ** d if k else 1


@dataclass(frozen=True)
class ThetaValue:
    value: complex
    radius: int
    tail_bound: float
    terms: int


@dataclass(frozen=True)
class ThetaContext:
    form: QuadraticForm
    tau: complex
    tol: float = 1e-10
    max_radius: int = 64

    def __post_init__(self):
        object.__setattr__(self, "tau", complex(self.tau))
        if self.form.e != 1:
            raise ValueError("theta functions need e = 1")
        if self.tau.imag <= 0:
            raise ValueError("tau must lie in the upper half plane")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.max_radius < 0:
            raise ValueError("max_radius must be non-negative")
        if not is_positive_definite(self.form):
            raise DegenerateFormError("form is not positive definite")

    @cached_property
    def lambda_min(self) -> float:
        return float(certified_min_eigenvalue(self.form.matrix))

    def with_tol(self, tol: float) -> "ThetaContext":
        return ThetaContext(self.form, self.tau, tol, self.max_radius)


def tail_bound(ctx: ThetaContext, u, z, radius: int) -> float:
    """Upper bound for the sum of ``|term|`` over ``|v|_inf > radius``.

    With ``w* = Im z / Im tau`` each term has modulus
    ``C exp(-2 pi Im(tau) phi(u + v - w*))`` where ``log C = pi Im(z).c.Im(z) / Im(tau)``,
    so on the shell ``|v|_inf = k`` it is at most ``C exp(-pi Im(tau) lam s^2)``
    with ``s = max(0, k - |u|_inf - |w*|_inf)`` and ``lam`` a lower bound for the
    smallest eigenvalue of ``c``.  Shells are summed in log space until their
    ratio is at most 1/2 and provably decreasing, then closed off geometrically.
    """
    d = ctx.form.d
    c = ctx.form.matrix
    im_tau = ctx.tau.imag
    im_z = [complex(v).imag for v in z]
    log_c = math.pi * sum(c[i][j] * im_z[i] * im_z[j] for i in range(d) for j in range(d)) / im_tau
    a = math.pi * im_tau * ctx.lambda_min
    shift = float(max((abs(x) for x in u), default=0)) + max((abs(x) for x in im_z), default=0.0) / im_tau

    def log_term(k):
        s = max(0.0, k - shift)
        return math.log(_shell_size(d, k)) + log_c - a * s * s

    logs = []
    k = radius + 1
    prev = log_term(k)
    while True:
        cur = log_term(k + 1)
        logs.append(prev)
        # past the peak both the shell growth and the Gaussian ratio decrease
        if k > shift and cur - prev <= -math.log(2):
            logs.append(cur + math.log(2))
            break
        k += 1
        prev = cur
        if k > radius + 100_000:
            return math.inf
    top = max(logs)
    total = top + math.log(math.fsum(math.exp(x - top) for x in logs))
    return math.exp(total) if total < 709 else math.inf


def truncation_radius(ctx: ThetaContext, u, z) -> tuple[int, float]:
    """Smallest ``R <= max_radius`` with ``tail_bound < tol``."""
    bound = math.inf
    for r in range(ctx.max_radius + 1):
        bound = tail_bound(ctx, u, z, r)
        if bound < ctx.tol:
            return r, bound
    raise ConvergenceError(
        f"tail bound {bound:.3e} still above tol {ctx.tol:.1e} at radius {ctx.max_radius}",
        bound, ctx.max_radius)


def _characteristic(q: QuadraticForm, u) -> tuple:
    if isinstance(u, DualCosetRep):
        u = u.u
    u = tuple(Fraction(x) for x in u)
    if len(u) != q.d:
        raise ValueError("characteristic has the wrong length")
    for i in range(q.d):
        if sum(q.matrix[i][j] * u[j] for j in range(q.d)).denominator != 1:
            raise ValueError("characteristic u must satisfy beta(u, Z^d) in Z")
    return u


def theta_sum(ctx: ThetaContext, u, z, radius: int) -> complex:
    """The lattice sum over ``|v|_inf <= radius`` (compensated, order independent)."""
    q = ctx.form
    d = q.d
    c = q.matrix
    tau = ctx.tau
    z = tuple(complex(v) for v in z)
    uf = [float(x) for x in u]
    cz = [sum(c[i][j] * z[j] for j in range(d)) for i in range(d)]
    re, im = [], []
    for v in itertools.product(range(-radius, radius + 1), repeat=d):
        w = [uf[i] + v[i] for i in range(d)]
        phi = 0.5 * sum(c[i][j] * w[i] * w[j] for i in range(d) for j in range(d))
        beta = sum(cz[i] * w[i] for i in range(d))
        t = cmath.exp(2j * math.pi * (phi * tau - beta))
        re.append(t.real)
        im.append(t.imag)
    return complex(math.fsum(re), math.fsum(im))


def theta_eval_detailed(ctx: ThetaContext, u, z, radius: int | None = None) -> ThetaValue:
    u = _characteristic(ctx.form, u)
    if len(z) != ctx.form.d:
        raise ValueError("z has the wrong length")
    if radius is None:
        radius, bound = truncation_radius(ctx, u, z)
    else:
        bound = tail_bound(ctx, u, z, radius)
    value = theta_sum(ctx, u, z, radius)
    return ThetaValue(value, radius, bound, (2 * radius + 1) ** ctx.form.d)


def theta_eval(ctx: ThetaContext, u, z, radius: int | None = None) -> complex:
    return theta_eval_detailed(ctx, u, z, radius).value


def translation_check(ctx: ThetaContext, u, z, m1, m2, floor: float = 1e-30) -> float:
    """Relative residual of ``theta(z + m1 tau + m2) = theta(z) exp(2 pi i f_u(z))``."""
    q = ctx.form
    z = tuple(complex(v) for v in z)
    shift = LatticeVector(m1, m2)
    _check_form(q, shift.m1, z)
    # the tail bound is absolute; tighten it so the relative residual stays below tol
    fine = ctx.with_tol(ctx.tol * 1e-3)
    lhs = theta_eval(fine, u, tuple(a + b for a, b in zip(z, shift.point(ctx.tau))))
    rhs = theta_eval(fine, u, z) * automorphy_factor(q, shift, ctx.tau, z)
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), floor)


def theta_matrix(ctx: ThetaContext, points) -> np.ndarray:
    reps = dual_coset_reps(ctx.form)
    return np.array([[theta_eval(ctx, u, z) for z in points] for u in reps])


def theta_basis_gram_rank(ctx: ThetaContext, points, rel_threshold: float = 1e-6) -> int:
    """Numerical rank of ``[theta_u(tau, z_j)]`` over all characteristics ``u``."""
    if not len(points):
        return 0
    sv = np.linalg.svd(theta_matrix(ctx, points), compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > rel_threshold * sv[0]))
