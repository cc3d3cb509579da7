"""Named property suites over seeded random inputs.

Each suite draws ``cases`` random instances per configuration and returns the
counterexamples it finds.  Configurations run on a thread pool whose size is
capped by the ``LOOIJENGA_THREADS`` environment variable; every configuration
has its own generator derived from the seed, so results do not depend on the
number of workers.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from .cohomology import (
    EquivarianceError,
    ideal_invariance_report,
    orbit_equivariance_check,
    presentation,
    substitution_from_wreath,
)
from .intlat import AltForm, matmul
from .qform import QuadraticForm
from . import samplers
from .theta import (
    LatticeVector,
    chern_form,
    chern_form_four_term,
    cocycle_defect,
    hermitian_form,
)
from .wreath import (
    ExtElement,
    WreathElement,
    act_pi2,
    act_pi3,
    aut_on_ext,
    ext_identity,
    ext_inv,
    ext_mul,
    pure_ext,
    quad_invariant_sharp,
    specialize_rank2,
    wreath_identity,
    wreath_inv,
    wreath_mul,
)

ALGEBRA_CONFIGS = ((2, 1, 1), (2, 2, 1), (3, 2, 2))
RANK2_CONFIGS = ((2, 1, 1), (2, 2, 1))
COCYCLE_DIMS = (1, 2, 3)
ORBIT_LEVELS = (1, 2, 3)
MAX_REPORTED = 10


def worker_count() -> int:
    raw = os.environ.get("LOOIJENGA_THREADS")
    if raw is None or raw.strip() == "":
        return min(4, os.cpu_count() or 1)
    n = int(raw)
    if n < 1:
        raise ValueError("LOOIJENGA_THREADS must be a positive integer")
    return n


@dataclass
class SuiteReport:
    name: str
    seed: int
    cases: int = 0
    failures: list = field(default_factory=list)
    failure_count: int = 0

    @property
    def passed(self) -> bool:
        return self.failure_count == 0 and self.cases > 0

    def to_json(self) -> dict:
        return {"suite": self.name, "seed": self.seed, "cases": self.cases,
                "passed": self.passed, "failure_count": self.failure_count,
                "failures": self.failures}


def _form_json(q: QuadraticForm) -> dict:
    return q.to_json()


def _pi2_json(p) -> dict:
    return {"t": [str(v) for v in p.t], "y": [str(v) for v in p.y],
            "x": [[str(v) for v in row] for row in p.x]}


def _ext_json(g: ExtElement) -> dict:
    return pure_ext(g).to_json()


# -- per-case checks; each returns None or a description of the failure ----

def _case_group_axioms(rng, config):
    r, d, e = config
    q = samplers.quadratic_form(rng, d, e)
    g1, g2, g3 = (samplers.ext_element(rng, r, d, e) for _ in range(3))
    w1, w2, w3 = (samplers.wreath_element(rng, r, d, e) for _ in range(3))
    a, a2 = samplers.unimodular(rng, r), samplers.unimodular(rng, r)
    one, wone = ext_identity(r, d, e), wreath_identity(r, d, e)
    g1_inv, w1_inv = ext_inv(q, g1), wreath_inv(q, w1)
    checks = {
        "ext_associativity": ext_mul(q, ext_mul(q, g1, g2), g3) == ext_mul(q, g1, ext_mul(q, g2, g3)),
        "ext_identity": ext_mul(q, one, g1) == g1 == ext_mul(q, g1, one),
        "ext_inverse": ext_mul(q, g1, g1_inv) == one == ext_mul(q, g1_inv, g1),
        "aut_is_homomorphism": aut_on_ext(q, a, ext_mul(q, g1, g2))
        == ext_mul(q, aut_on_ext(q, a, g1), aut_on_ext(q, a, g2)),
        "aut_is_action": aut_on_ext(q, a, aut_on_ext(q, a2, g1)) == aut_on_ext(q, matmul(a, a2), g1),
        "wreath_associativity": wreath_mul(q, wreath_mul(q, w1, w2), w3)
        == wreath_mul(q, w1, wreath_mul(q, w2, w3)),
        "wreath_identity": wreath_mul(q, wone, w1) == w1 == wreath_mul(q, w1, wone),
        "wreath_inverse": wreath_mul(q, w1, w1_inv) == wone == wreath_mul(q, w1_inv, w1),
    }
    bad = [k for k, ok in checks.items() if not ok]
    if bad:
        return {"failed": bad, "form": _form_json(q), "w1": w1.to_json(), "w2": w2.to_json(),
                "w3": w3.to_json(), "g1": _ext_json(g1), "g2": _ext_json(g2), "g3": _ext_json(g3)}
    return None


def _case_action_axioms(rng, config):
    r, d, e = config
    q = samplers.quadratic_form(rng, d, e)
    w1, w2 = samplers.wreath_element(rng, r, d, e), samplers.wreath_element(rng, r, d, e)
    p = samplers.pi2_element(rng, r, d, e)
    c = samplers.int_vector(rng, e)
    checks = {
        "composition": act_pi2(q, wreath_mul(q, w1, w2), p) == act_pi2(q, w1, act_pi2(q, w2, p)),
        "identity": act_pi2(q, wreath_identity(r, d, e), p) == p,
        "pi3_trivial": act_pi3(q, w1, c) == c,
    }
    bad = [k for k, ok in checks.items() if not ok]
    if bad:
        return {"failed": bad, "form": _form_json(q), "w1": w1.to_json(), "w2": w2.to_json(),
                "p": _pi2_json(p)}
    return None


def _case_phi_sharp(rng, config):
    r, d, e = config
    q = samplers.quadratic_form(rng, d, e)
    w = samplers.wreath_element(rng, r, d, e)
    p = samplers.pi2_element(rng, r, d, e)
    before, after = quad_invariant_sharp(q, p), quad_invariant_sharp(q, act_pi2(q, w, p))
    if before != after:
        return {"form": _form_json(q), "w": w.to_json(), "p": _pi2_json(p),
                "before": [str(v) for v in before], "after": [str(v) for v in after]}
    return None


def _case_specialize(rng, config):
    r, d, e = config
    q = samplers.quadratic_form(rng, d, e)
    w = samplers.wreath_element(rng, r, d, e)
    p = samplers.pi2_element(rng, r, d, e)
    general, explicit = act_pi2(q, w, p), specialize_rank2(q, w, p)
    if general != explicit:
        return {"form": _form_json(q), "w": w.to_json(), "p": _pi2_json(p),
                "general": _pi2_json(general), "explicit": _pi2_json(explicit)}
    return None


def _lattice_vector(rng, d):
    return LatticeVector(samplers.int_vector(rng, d), samplers.int_vector(rng, d))


def _lv_json(u: LatticeVector) -> dict:
    return {"m1": list(u.m1), "m2": list(u.m2)}


def _case_cocycle(rng, d):
    q = samplers.quadratic_form(rng, d, 1)
    u, u2 = _lattice_vector(rng, d), _lattice_vector(rng, d)
    defect = cocycle_defect(q, u, u2)
    expected = -q.beta(u2.m2, u.m1)[0]
    if not defect.is_constant() or defect.const != expected or defect.const.denominator != 1:
        return {"form": _form_json(q), "u": _lv_json(u), "u2": _lv_json(u2),
                "defect": {"tau": str(defect.tau_coef), "z": [str(v) for v in defect.z_coef],
                           "const": str(defect.const)}, "expected": expected}
    return None


def _case_chern(rng, d):
    q = samplers.quadratic_form(rng, d, 1)
    u, u2, u3 = (_lattice_vector(rng, d) for _ in range(3))
    four = chern_form_four_term(q, u, u2)
    e12 = chern_form(q, u, u2)
    tau = samplers.upper_half_plane(rng)
    x, x2 = u.point(tau), u2.point(tau)
    h = hermitian_form(q, x, x2, tau)
    scale = sum(abs(q.matrix[i][j] * x[i] * x2[j]) for i in range(d) for j in range(d)) / tau.imag
    checks = {
        "four_term": four.is_constant() and four.const == e12,
        "alternating": chern_form(q, u, u) == 0 and chern_form(q, u2, u) == -e12,
        "additive": chern_form(q, u + u3, u2) == e12 + chern_form(q, u3, u2),
        "imaginary_part": abs(h.imag - e12) <= 1e-12 * max(1.0, scale),
    }
    bad = [k for k, ok in checks.items() if not ok]
    if bad:
        return {"failed": bad, "form": _form_json(q), "u": _lv_json(u), "u2": _lv_json(u2),
                "chern": e12, "four_term_const": str(four.const), "tau": [tau.real, tau.imag]}
    return None


def _case_ideal(rng, config):
    r, d, e = config
    q = samplers.quadratic_form(rng, d, e)
    w = samplers.wreath_element(rng, r, d, e)
    report = ideal_invariance_report(presentation(q, r), substitution_from_wreath(q, w))
    if not (report.invariant and report.on_the_nose):
        return {"form": _form_json(q), "w": w.to_json(), "invariant": report.invariant,
                "on_the_nose": report.on_the_nose}
    return None


def _case_orbit(rng, n_level):
    a = samplers.unimodular(rng, 2)
    m = samplers.int_matrix(rng, 1, 2, 3)
    w = WreathElement(a, ExtElement(m, AltForm.zero(2, 0)))
    try:
        perm = orbit_equivariance_check(n_level, w)
    except EquivarianceError as exc:
        return {"N": n_level, "w": w.to_json(), "error": str(exc)}
    # compare against the closed form j = n A - N m (row vectors)
    for (n1, n2), j in perm.items():
        want = (n1 * a[0][0] + n2 * a[1][0] - n_level * m[0][0],
                n1 * a[0][1] + n2 * a[1][1] - n_level * m[0][1])
        if j != want:
            return {"N": n_level, "w": w.to_json(), "index": [n1, n2], "got": list(j),
                    "expected": list(want)}
    return None


@dataclass(frozen=True)
class Suite:
    name: str
    case: Callable
    configs: tuple
    description: str


SUITES = {
    s.name: s for s in (
        Suite("group-axioms", _case_group_axioms, ALGEBRA_CONFIGS,
              "associativity, identities and inverses in E and in Aut(L) x| E"),
        Suite("action-axioms", _case_action_axioms, ALGEBRA_CONFIGS,
              "the pi_2 action respects products and the identity; pi_3 is fixed"),
        Suite("phi-sharp-invariance", _case_phi_sharp, ALGEBRA_CONFIGS,
              "phi#(t, y, x) = phi(y) + x t is preserved exactly"),
        Suite("cocycle", _case_cocycle, COCYCLE_DIMS,
              "the defect of f_u is the integer constant -beta(m2', m1)"),
        Suite("chern", _case_chern, COCYCLE_DIMS,
              "four-term expression equals E; E alternating, additive, Im H = E"),
        Suite("ideal-invariance", _case_ideal, ALGEBRA_CONFIGS,
              "substituted relations equal the original relations"),
        Suite("specialize", _case_specialize, RANK2_CONFIGS,
              "general action equals the explicit rank-2 coordinate formulas"),
        Suite("orbit", _case_orbit, ORBIT_LEVELS,
              "the action permutes the relations y - (n/N) t on the index window"),
    )
}


def _run_config(suite: Suite, seed: int, config, cases: int) -> tuple[int, list]:
    rng = random.Random(f"{seed}/{suite.name}/{config}")
    failures = []
    for i in range(cases):
        try:
            bad = suite.case(rng, config)
        except Exception as exc:  # a crash is a counterexample too
            bad = {"error": f"{type(exc).__name__}: {exc}"}
        if bad is not None:
            bad = {"config": list(config) if isinstance(config, tuple) else config, "case": i, **bad}
            failures.append(bad)
    return cases, failures


def run_suite(name: str, seed: int = 0, cases: int = 100, threads: int | None = None) -> SuiteReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if cases < 1:
        raise ValueError("cases must be positive")
    suite = SUITES[name]
    threads = worker_count() if threads is None else threads
    report = SuiteReport(name, seed)
    with ThreadPoolExecutor(max_workers=max(1, min(threads, len(suite.configs)))) as pool:
        results = list(pool.map(lambda cfg: _run_config(suite, seed, cfg, cases), suite.configs))
    for n, failures in results:
        report.cases += n
        report.failure_count += len(failures)
        room = MAX_REPORTED - len(report.failures)
        report.failures.extend(failures[:max(room, 0)])
    return report

