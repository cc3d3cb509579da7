"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line; the lines are printed at the end of a
pytest run (see ``conftest.py``) or directly with
``python tests/test_acceptance.py``.
"""

import functools
import itertools
import random
import sys
import time
import traceback
from fractions import Fraction
from pathlib import Path

import mpmath

sys.path.insert(0, str(Path(__file__).resolve().parent))

from looijenga import samplers  # noqa: E402
from looijenga.checks import run_suite  # noqa: E402
from looijenga.cohomology import (  # noqa: E402
    expected_hilbert_function,
    hilbert_function,
    orbit_equivariance_check,
    orbit_module,
    presentation,
)
from looijenga.intlat import AltForm, det, identity  # noqa: E402
from looijenga.moduli import (  # noqa: E402
    FramedLattice,
    act_upstairs,
    descend,
    descended_act,
    gamma_B_member,
    isogeny_kernel,
    isogeny_normal_form,
    kernel_coordinates,
    locus_point,
)
from looijenga.qform import QuadraticForm, dual_coset_reps  # noqa: E402
from looijenga.theta import (  # noqa: E402
    ThetaContext,
    section_dimension,
    theta_basis_gram_rank,
    theta_eval,
    translation_check,
)
from looijenga.wreath import ExtElement, WreathElement, pure_aut  # noqa: E402

SEED = 20240611

# tolerances and budgets
AXIOM_BUDGET_S = 5.0
TRANSLATION_RESIDUAL = 1e-9
TRANSLATION_BUDGET_S = 10.0
GRAM_THRESHOLD = 1e-6
JACOBI_REL_ERR = 1e-10
HILBERT_BUDGET_S = 5.0
DESCENT_TOL = 1e-9

A1 = ((2,),)
A2 = ((2, -1), (-1, 2))
DIAG22 = ((2, 0), (0, 2))

RESULTS: list = []


def criterion(number: int, title: str):
    """Record PASS/FAIL (with the detail string the test returns) for one criterion."""
    def wrap(fn):
        @functools.wraps(fn)
        def run():
            start = time.perf_counter()
            try:
                detail = fn()
            except BaseException as exc:
                RESULTS.append((number, title, False, f"{type(exc).__name__}: {exc}".strip()))
                raise
            took = time.perf_counter() - start
            RESULTS.append((number, title, True, f"{detail}; {took:.2f} s" if detail else f"{took:.2f} s"))
        run.criterion = number
        return run
    return wrap


def summary_lines() -> list[str]:
    lines = []
    for number, title, ok, detail in sorted(RESULTS):
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {title}: {detail}")
    return lines


def _suite(name: str, cases: int):
    report = run_suite(name, seed=SEED, cases=cases)
    assert report.passed, report.to_json()["failures"]
    return report


@criterion(1, "group and action axioms, 1000 cases per configuration, under 5 s")
def test_axiom_suites():
    start = time.perf_counter()
    reports = [_suite("group-axioms", 1000), _suite("action-axioms", 1000)]
    took = time.perf_counter() - start
    assert all(r.cases == 3000 for r in reports)
    assert took < AXIOM_BUDGET_S, f"took {took:.2f} s"
    return f"{sum(r.cases for r in reports)} cases in {took:.2f} s"


@criterion(2, "phi-sharp invariance, exact")
def test_phi_sharp_invariance():
    report = _suite("phi-sharp-invariance", 1000)
    assert report.cases == 3000
    return f"{report.cases} cases"


@criterion(3, "rank-2 coordinate formulas agree with the general action")
def test_specialization():
    report = _suite("specialize", 1000)
    assert report.cases >= 1000
    return f"{report.cases} cases"


@criterion(4, "cocycle defect is the integer constant -beta(m2', m1)")
def test_cocycle_integrality():
    report = _suite("cocycle", 500)
    assert report.cases >= 500
    return f"{report.cases} cases"


@criterion(5, "four-term Chern expression equals beta(m1,m2') - beta(m2,m1')")
def test_chern_form():
    report = _suite("chern", 500)
    assert report.cases >= 500
    return f"{report.cases} cases"


@criterion(6, "theta translation law for A1 and A2, residual < 1e-9, under 10 s")
def test_theta_translation():
    start = time.perf_counter()
    worst = 0.0
    for c in (A1, A2):
        q = QuadraticForm.from_matrix(c)
        reps = dual_coset_reps(q)
        rng = random.Random(f"{SEED}/translation/{c}")
        for _ in range(50):
            ctx = ThetaContext(q, samplers.upper_half_plane(rng, 0.8, 2.0))
            u = rng.choice(reps)
            z = tuple(samplers.complex_number(rng, 0.5) for _ in range(q.d))
            m1, m2 = samplers.int_vector(rng, q.d, 2), samplers.int_vector(rng, q.d, 2)
            worst = max(worst, translation_check(ctx, u, z, m1, m2))
    took = time.perf_counter() - start
    assert worst < TRANSLATION_RESIDUAL, f"worst residual {worst:.3g}"
    assert took < TRANSLATION_BUDGET_S, f"took {took:.2f} s"
    return f"worst residual {worst:.2e}"


@criterion(7, "det c = dual-coset count = theta Gram rank")
def test_section_dimension():
    found = []
    for c, want in ((A1, 2), (A2, 3), (DIAG22, 4)):
        q = QuadraticForm.from_matrix(c)
        rng = random.Random(f"{SEED}/gram/{c}")
        points = [tuple(samplers.complex_number(rng, 0.5) for _ in range(q.d)) for _ in range(3 * want)]
        rank = theta_basis_gram_rank(ThetaContext(q, 0.1 + 1.0j), points, rel_threshold=GRAM_THRESHOLD)
        counts = (det(c), len(dual_coset_reps(q)), section_dimension(q), rank)
        assert counts == (want,) * 4, counts
        found.append(want)
    return "dimensions " + ", ".join(map(str, found))


def jacobi_theta(tau: complex, z: complex) -> complex:
    """sum over v of exp(2 pi i (tau v^2 - 2 v z)), through mpmath's jtheta."""
    mpmath.mp.dps = 30
    nome = mpmath.exp(2j * mpmath.pi * tau)
    return complex(mpmath.jtheta(3, -2 * mpmath.pi * z, nome))


@criterion(8, "one-variable theta agrees with the Jacobi series, rel. err < 1e-10")
def test_jacobi_oracle():
    q = QuadraticForm.from_matrix(A1)
    rng = random.Random(f"{SEED}/jacobi")
    worst = 0.0
    for _ in range(20):
        tau = samplers.upper_half_plane(rng, 0.5, 2.0)
        z = samplers.complex_number(rng, 0.5)
        ref = jacobi_theta(tau, z)
        worst = max(worst, abs(theta_eval(ThetaContext(q, tau), (0,), (z,)) - ref) / abs(ref))
    assert worst < JACOBI_REL_ERR, f"worst relative error {worst:.3g}"
    return f"worst relative error {worst:.2e}"


@criterion(9, "Hilbert functions of the quotient presentation, under 5 s")
def test_hilbert_functions():
    start = time.perf_counter()
    p211 = presentation(QuadraticForm.from_matrix(A1), 2)
    p201 = presentation(QuadraticForm.from_matrices([[]], d=0), 2)
    h211, h201 = hilbert_function(p211, 8), hilbert_function(p201, 8)
    took = time.perf_counter() - start
    assert h211 == [1, 5, 14, 30, 55] == expected_hilbert_function(p211, 8)
    assert h201 == [1, 4, 9, 16, 25] == expected_hilbert_function(p201, 8)
    assert took < HILBERT_BUDGET_S, f"took {took:.2f} s"
    return f"{h211} and {h201}"


@criterion(10, "ideal invariance under random wreath elements, exact")
def test_ideal_invariance():
    report = _suite("ideal-invariance", 100)
    assert report.cases == 300
    return f"{report.cases} cases"


@criterion(11, "isogeny arithmetic: Gamma0 membership, normal form, kernel sizes")
def test_isogeny_arithmetic():
    rng = random.Random(f"{SEED}/isogeny")
    for n in (2, 3, 5):
        b = ((1, 0), (0, n))
        for _ in range(200):
            a = samplers.unimodular(rng, 2)
            assert gamma_B_member(b, a) == (a[1][0] % n == 0), (n, a)
    assert isogeny_normal_form(((2, 1), (0, 3))) == (1, 6)
    for _ in range(50):
        b = samplers.nonsingular(rng, 2, bound=4, max_det=12)
        lat = FramedLattice(samplers.upper_half_plane(rng), 1)
        assert len(set(kernel_coordinates(b))) == len(isogeny_kernel(b, lat)) == abs(det(b)), b
    return "600 memberships, 50 kernels"


def _close(a: complex, b: complex) -> bool:
    return abs(a - b) <= DESCENT_TOL * max(1.0, abs(a), abs(b))


@criterion(12, "descent commutes with the action, within 1e-9")
def test_descent_square():
    rng = random.Random(f"{SEED}/descent")
    for i in range(100):
        q = QuadraticForm.from_matrix(A1 if i % 2 else A2)
        t2 = samplers.complex_number(rng, 2.0) or 1.0
        lat = FramedLattice(samplers.upper_half_plane(rng) * t2, t2)
        y = tuple(samplers.complex_number(rng, 0.5) for _ in range(q.d))
        x = locus_point(q, lat, y, samplers.complex_number(rng, 0.3))
        if i % 4 < 2:
            w = WreathElement(identity(2), ExtElement(samplers.int_matrix(rng, q.d, 2, 2), AltForm.zero(2, 1)))
        else:
            w = pure_aut(samplers.special_linear(rng, 2, 3), q.d, 1)
        below = descend(q, *act_upstairs(q, w, lat, y, x), tol=DESCENT_TOL)
        across = descended_act(q, w, descend(q, lat, y, x))
        assert _close(below.tau, across.tau) and _close(below.u, across.u), i
        assert all(_close(a, b) for a, b in zip(below.z, across.z)), i
    return "100 cases"


@criterion(13, "orbit relations y - (n1/N) t1 - (n2/N) t2 and bijective index maps")
def test_orbit_example():
    for n_level in (1, 2, 3):
        for n1, n2 in itertools.product(range(-2 * n_level, 2 * n_level + 1), repeat=2):
            (rel,) = orbit_module(n_level, (n1, n2)).relations
            want = {(0, 0, 1): Fraction(1), (1, 0, 0): Fraction(-n1, n_level), (0, 1, 0): Fraction(-n2, n_level)}
            assert rel.terms == {k: v for k, v in want.items() if v}, (n_level, n1, n2)
    assert orbit_module(2, (1, 0)).format_relations() == ["y - 1/2*t1"]
    report = _suite("orbit", 50)
    rng = random.Random(f"{SEED}/orbit-window")
    for n_level in (1, 2, 3):
        w = WreathElement(samplers.unimodular(rng, 2, 3), ExtElement((samplers.int_vector(rng, 2, 3),), AltForm.zero(2, 0)))
        perm = orbit_equivariance_check(n_level, w)
        assert len(set(perm.values())) == len(perm) == (10 * n_level + 1) ** 2
    return f"{report.cases} group elements"


def main() -> int:
    tests = sorted((fn for name, fn in globals().items() if name.startswith("test_") and callable(fn)),
                   key=lambda fn: fn.criterion)
    for fn in tests:
        try:
            fn()
        except BaseException:
            traceback.print_exc(file=sys.stderr)
    print("\n".join(summary_lines()))
    return 0 if all(ok for _, _, ok, _ in RESULTS) else 1


if __name__ == "__main__":
    sys.exit(main())
