"""Seeded random generators for property checks.

Every sampler takes a ``random.Random`` instance so a single seed fixes a run.
"""

from __future__ import annotations

import random

from .intlat import AltForm, det, wedge_basis
from .qform import QuadraticForm
from .wreath import ExtElement, Pi2Element, WreathElement


_STEPS = (-2, -1, 1, 2)


def unimodular(rng: random.Random, n: int, bound: int = 5, steps: int = 12) -> tuple:
    """A matrix in GL_n(Z) with entries in ``[-bound, bound]``.

    Random walk from a signed permutation matrix by elementary row and column
    operations; steps leaving the box are skipped.
    """
    perm = list(range(n))
    rng.shuffle(perm)
    a = [[0] * n for _ in range(n)]
    for i, j in enumerate(perm):
        a[i][j] = rng.choice((-1, 1))
    if n < 2:
        return tuple(tuple(row) for row in a)
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    moves = zip(rng.choices(pairs, k=steps), rng.choices(_STEPS, k=steps),
                rng.choices((True, False), k=steps))
    for (i, j), k, on_rows in moves:
        if on_rows:
            row = [x + k * y for x, y in zip(a[i], a[j])]
            if max(map(abs, row)) <= bound:
                a[i] = row
        else:
            col = [a[r][i] + k * a[r][j] for r in range(n)]
            if max(map(abs, col)) <= bound:
                for r in range(n):
                    a[r][i] = col[r]
    return tuple(tuple(row) for row in a)


def special_linear(rng: random.Random, n: int = 2, bound: int = 5) -> tuple:
    a = unimodular(rng, n, bound)
    if det(a) < 0:
        a = (tuple(-x for x in a[0]),) + a[1:]
    return a


def int_vector(rng: random.Random, n: int, bound: int = 5) -> tuple:
    """Entries drawn uniformly from ``[-bound, bound]``."""
    return tuple(rng.choices(range(-bound, bound + 1), k=n))


def int_matrix(rng: random.Random, rows: int, cols: int, bound: int = 5) -> tuple:
    flat = int_vector(rng, rows * cols, bound)
    return tuple(flat[i * cols:(i + 1) * cols] for i in range(rows))


def quadratic_form(rng: random.Random, d: int, e: int, bound: int = 3) -> QuadraticForm:
    """Random ``dext`` with entries in ``[-bound, bound]`` and ``c = dext + dext^T``."""
    dext = [int_matrix(rng, d, d, bound) for _ in range(e)]
    c = [tuple(tuple(m[i][j] + m[j][i] for j in range(d)) for i in range(d)) for m in dext]
    return QuadraticForm.from_matrices(c, dext, d=d)


def alt_form(rng: random.Random, r: int, e: int, bound: int = 5) -> AltForm:
    return AltForm(r, e, tuple(int_vector(rng, e, bound) for _ in wedge_basis(r)))


def ext_element(rng: random.Random, r: int, d: int, e: int, bound: int = 5) -> ExtElement:
    return ExtElement(int_matrix(rng, d, r, bound), alt_form(rng, r, e, bound))


def wreath_element(rng: random.Random, r: int, d: int, e: int, bound: int = 5) -> WreathElement:
    return WreathElement(unimodular(rng, r, bound), ext_element(rng, r, d, e, bound))


def pi2_element(rng: random.Random, r: int, d: int, e: int, bound: int = 5) -> Pi2Element:
    return Pi2Element(int_vector(rng, r, bound), int_vector(rng, d, bound), int_matrix(rng, e, r, bound))


def nonsingular(rng: random.Random, n: int = 2, bound: int = 5, max_det: int | None = None) -> tuple:
    while True:
        b = int_matrix(rng, n, n, bound)
        dt = abs(det(b))
        if dt and (max_det is None or dt <= max_det):
            return b


def complex_number(rng: random.Random, scale: float = 1.0) -> complex:
    return complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale))


def upper_half_plane(rng: random.Random, im_low: float = 0.5, im_high: float = 2.0,
                     re_scale: float = 1.0) -> complex:
    return complex(rng.uniform(-re_scale, re_scale), rng.uniform(im_low, im_high))

