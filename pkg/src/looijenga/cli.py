"""Command-line interface: ``looijenga <command> ...``.

Exit codes: 0 success, 1 a verification failed, 2 bad usage or input,
3 a theta sum did not converge within its radius cap.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import random
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from . import samplers
from .checks import SUITES, run_suite, worker_count
from .cohomology import (
    EquivarianceError,
    expected_hilbert_function,
    hilbert_function,
    ideal_invariance_report,
    orbit_equivariance_check,
    orbit_module,
    presentation,
    substitution_from_wreath,
)
from .intlat import DimensionError, det, matrix_to_json
from .moduli import (
    FramedLattice,
    LocusError,
    curves_isomorphic,
    descend,
    gamma_B_member,
    isogeny_degree,
    isogeny_kernel,
    isogeny_normal_form,
    reduce_tau,
)
from .qform import (
    DegenerateFormError,
    QuadraticForm,
    dual_coset_reps,
    is_positive_definite,
)
from .theta import (
    ConvergenceError,
    ThetaContext,
    section_dimension,
    theta_basis_gram_rank,
    theta_eval_detailed,
    translation_check,
)
from .wreath import WreathElement

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CONVERGENCE = 0, 1, 2, 3


class UsageError(Exception):
    pass


# -- formatting ---------------------------------------------------------------

def fmt_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return json.dumps(str(x))
    return format(x, ".17g")


def to_plain(x):
    """Convert results into JSON-ready values (floats stay floats)."""
    if isinstance(x, bool) or x is None or isinstance(x, (str, int, float)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, dict):
        return {str(k): to_plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_plain(v) for v in x]
    return str(x)


def dump_json(obj, indent: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (str, int)):
        return json.dumps(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dump_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if not obj:
        return "[]"
    if all(isinstance(v, (str, int, float)) and not isinstance(v, bool) for v in obj):
        return "[" + ", ".join(dump_json(v) for v in obj) + "]"
    return "[\n" + ",\n".join(inner + dump_json(v, indent + 1) for v in obj) + "\n" + pad + "]"


def text_value(x) -> str:
    if isinstance(x, float):
        return fmt_float(x)
    if isinstance(x, complex):
        return f"{fmt_float(x.real)} {'+' if x.imag >= 0 else '-'} {fmt_float(abs(x.imag))}i"
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(text_value(v) for v in x) + "]"
    if isinstance(x, dict):
        return "{" + ", ".join(f"{k}: {text_value(v)}" for k, v in x.items()) + "}"
    return str(x)


@dataclass
class RunReport:
    command: list
    inputs: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    wall_time: float = 0.0

    def check(self, name: str, passed: bool, **detail):
        self.checks.append({"name": name, "passed": bool(passed), **detail})

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.checks)

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(json.dumps(self.command).encode())
        for item in self.inputs:
            h.update(item.encode() if isinstance(item, str) else item)
        return h.hexdigest()

    def to_json(self) -> dict:
        # wall time is left out so identical runs give identical bytes
        return {"command": self.command, "inputs_digest": self.digest(),
                "results": to_plain(self.results), "checks": to_plain(self.checks),
                "passed": self.passed}

    def render_text(self) -> str:
        lines = [f"$ looijenga {' '.join(self.command)}"]
        for k, v in self.results.items():
            if isinstance(v, list) and v and isinstance(v[0], (dict, list)):
                lines.append(f"{k}:")
                lines.extend(f"  {text_value(item)}" for item in v)
            else:
                lines.append(f"{k}: {text_value(v)}")
        for c in self.checks:
            extra = {k: v for k, v in c.items() if k not in ("name", "passed")}
            tail = f"  {text_value(extra)}" if extra else ""
            lines.append(f"[{'PASS' if c['passed'] else 'FAIL'}] {c['name']}{tail}")
        lines.append(f"wall time: {self.wall_time:.3f}s")
        return "\n".join(lines)


# -- input parsing ------------------------------------------------------------

def read_json(path: str, report: RunReport):
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from exc
    report.inputs.append(raw)
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def load_form(path: str, report: RunReport) -> tuple[QuadraticForm, dict]:
    data = read_json(path, report)
    if not isinstance(data, dict):
        raise UsageError("form file must hold a JSON object")
    extra = {}
    if "form" in data:
        extra, data = data, data["form"]
    try:
        return QuadraticForm.from_json(data), extra
    except (ValueError, TypeError) as exc:
        raise UsageError(f"invalid form in {path}: {exc}") from exc


def parse_complex(s: str) -> complex:
    parts = s.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"expected a complex number as 're' or 're,im', got {s!r}")


def parse_ints(s: str) -> tuple:
    try:
        return tuple(int(x) for x in s.split(",") if x.strip() != "")
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {s!r}") from exc


def parse_matrix2(s: str) -> tuple:
    v = parse_ints(s)
    if len(v) != 4:
        raise UsageError(f"expected four integers a,b,c,d for a 2x2 matrix, got {s!r}")
    return (v[0], v[1]), (v[2], v[3])


def parse_lattice(s: str) -> FramedLattice:
    v = [float(x) for x in s.split(",")] if s and not s.lstrip().startswith("{") else None
    try:
        if v is None:
            return FramedLattice.from_json(json.loads(s))
        if len(v) != 4:
            raise UsageError("a lattice is given as t1re,t1im,t2re,t2im")
        return FramedLattice(complex(v[0], v[1]), complex(v[2], v[3]))
    except (ValueError, KeyError, TypeError) as exc:
        raise UsageError(f"invalid lattice {s!r}: {exc}") from exc


def _vector_arg(value, d: int, what: str, parse=parse_complex) -> tuple:
    """Split a vector argument: complex coordinates by ';', exact ones by ','."""
    if value is None:
        return tuple(parse("0") for _ in range(d))
    sep = ";" if parse is parse_complex else ","
    try:
        out = tuple(parse(v.strip()) for v in value.split(sep) if v.strip() != "")
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"invalid {what} {value!r}") from exc
    if len(out) != d:
        raise UsageError(f"{what} needs {d} components, got {len(out)}")
    return out


# -- commands -----------------------------------------------------------------

def cmd_qform(args, report: RunReport) -> int:
    q, _ = load_form(args.form, report)
    r = report.results
    r["d"], r["e"] = q.d, q.e
    if args.action == "eval":
        y = _vector_arg(args.y, q.d, "--y", lambda s: Fraction(s))
        r["y"] = [str(v) for v in y]
        r["phi"] = [str(v) for v in q.phi(y)]
    elif args.action == "hessian":
        r["c"] = [matrix_to_json(m) for m in q.c]
        r["dext"] = [matrix_to_json(m) for m in q.dext]
        if args.y is not None or args.y2 is not None:
            y = _vector_arg(args.y, q.d, "--y", lambda s: Fraction(s))
            y2 = _vector_arg(args.y2, q.d, "--y2", lambda s: Fraction(s))
            r["beta"] = [str(v) for v in q.beta(y, y2)]
            r["omega"] = [str(v) for v in q.omega(y, y2)]
    elif args.action == "dual-cosets":
        reps = dual_coset_reps(q)
        r["count"] = len(reps)
        r["representatives"] = [[str(x) for x in u.u] for u in reps]
        report.check("count_equals_det", len(reps) == abs(det(q.matrix)), det=det(q.matrix))
    elif args.action == "definiteness":
        r["positive_definite"] = is_positive_definite(q)
        r["det"] = det(q.matrix)
    return EXIT_OK


def cmd_verify(args, report: RunReport) -> int:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(SUITES)}")
    if args.cases < 1:
        raise UsageError("--cases must be positive")
    suite = run_suite(args.suite, args.seed, args.cases, worker_count())
    report.results.update({"suite": suite.name, "seed": suite.seed, "cases": suite.cases,
                           "description": SUITES[args.suite].description})
    report.check(args.suite, suite.passed, failure_count=suite.failure_count)
    if suite.failures:
        report.results["counterexamples"] = suite.failures
    return EXIT_OK if suite.passed else EXIT_FAIL


def _theta_context(args, report: RunReport):
    q, extra = load_form(args.form, report)
    tau = parse_complex(args.tau) if args.tau else complex(*extra.get("tau", (0.0, 1.0)))
    tol = args.tol if args.tol is not None else float(extra.get("tol", 1e-10))
    try:
        ctx = ThetaContext(q, tau, tol, args.max_radius)
    except (ValueError, DegenerateFormError) as exc:
        raise UsageError(str(exc)) from exc
    if args.z is not None:
        z = _vector_arg(args.z, q.d, "--z")
    elif "z" in extra:
        z = tuple(complex(*v) for v in extra["z"])
    else:
        z = (0j,) * q.d
    if len(z) != q.d:
        raise UsageError(f"z needs {q.d} components")
    u_index = args.u_index if args.u_index is not None else int(extra.get("u_index", 0))
    return ctx, z, u_index


def cmd_theta(args, report: RunReport) -> int:
    r = report.results
    if args.action == "dim":
        q, _ = load_form(args.form, report)
        try:
            dim = section_dimension(q)
        except (ValueError, DegenerateFormError) as exc:
            raise UsageError(str(exc)) from exc
        r["dimension"] = dim
        report.check("det_equals_dual_coset_count", dim == len(dual_coset_reps(q)))
        return EXIT_OK
    ctx, z, u_index = _theta_context(args, report)
    reps = dual_coset_reps(ctx.form)
    if not 0 <= u_index < len(reps):
        raise UsageError(f"u index must be in [0, {len(reps)})")
    u = reps[u_index]
    r["tau"] = ctx.tau
    r["u"] = [str(x) for x in u.u]
    if args.action == "eval":
        val = theta_eval_detailed(ctx, u, z)
        r["z"] = list(z)
        r["value"] = val.value
        r["radius"] = val.radius
        r["tail_bound"] = val.tail_bound
    elif args.action == "translation-check":
        m1 = _vector_arg(args.m1, ctx.form.d, "--m1", int)
        m2 = _vector_arg(args.m2, ctx.form.d, "--m2", int)
        res = translation_check(ctx, u, z, m1, m2)
        r["z"] = list(z)
        r["m1"], r["m2"] = list(m1), list(m2)
        r["residual"] = res
        report.check("translation_law", res < 10 * ctx.tol, threshold=10 * ctx.tol)
    elif args.action == "gram-rank":
        rng = random.Random(args.seed)
        n = args.points if args.points else 4 * len(reps)
        points = [tuple(samplers.complex_number(rng, 0.5) for _ in range(ctx.form.d))
                  for _ in range(n)]
        rank = theta_basis_gram_rank(ctx, points)
        r["points"], r["rank"] = n, rank
        r["dimension"] = section_dimension(ctx.form)
        report.check("rank_equals_dimension", rank == r["dimension"])
    return EXIT_OK


def cmd_moduli(args, report: RunReport) -> int:
    r = report.results
    if args.action == "reduce-tau":
        tau = parse_complex(args.tau)
        try:
            red, a = reduce_tau(tau)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        r["tau"], r["reduced"], r["A"] = tau, red, matrix_to_json(a)
    elif args.action == "isomorphic":
        lat, lat2 = parse_lattice(args.lattice), parse_lattice(args.lattice2)
        found = curves_isomorphic(lat, lat2, args.tol)
        r["isomorphic"] = found is not None
        if found:
            r["A"], r["lambda"] = matrix_to_json(found[0]), found[1]
    elif args.action == "isogeny":
        b = parse_matrix2(args.B)
        try:
            if args.what == "normal-form":
                r["M"], r["N"] = isogeny_normal_form(b)
            elif args.what == "degree":
                r["degree"] = isogeny_degree(b)
            else:
                lat = parse_lattice(args.lattice)
                kernel = isogeny_kernel(b, lat)
                r["kernel"] = kernel
                report.check("kernel_size_equals_degree", len(kernel) == isogeny_degree(b),
                             size=len(kernel))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    elif args.action == "gamma-member":
        b, a = parse_matrix2(args.B), parse_matrix2(args.A)
        try:
            r["member"] = gamma_B_member(b, a)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    elif args.action == "descend":
        q, _ = load_form(args.form, report)
        lat = FramedLattice(parse_complex(args.t1), parse_complex(args.t2))
        y = _vector_arg(args.y, q.d, "--y")
        x = _vector_arg(args.x, 2, "--x")
        try:
            p = descend(q, lat, y, x, args.tol)
        except (LocusError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
        r["tau"], r["z"], r["u"] = p.tau, list(p.z), p.u
    return EXIT_OK


def _cohomology_form(args, report: RunReport) -> QuadraticForm:
    if args.form:
        q, _ = load_form(args.form, report)
        if args.d is not None and args.d != q.d:
            raise UsageError(f"--d {args.d} does not match the form (d = {q.d})")
        return q
    if args.d == 0:
        return QuadraticForm(0, args.e, ((),) * args.e, ((),) * args.e)
    if args.d is not None and args.e == 0:
        return QuadraticForm.zero(args.d)
    raise UsageError("give a form file, or --d 0, or --d with --e 0")


def cmd_cohomology(args, report: RunReport) -> int:
    r = report.results
    if args.action == "orbit":
        idx = parse_ints(args.index)
        if len(idx) != 2:
            raise UsageError("--index takes two integers n1,n2")
        try:
            pres = orbit_module(args.N, idx)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
        r["generators"] = list(pres.names)
        r["relation"] = pres.format_relations()[0]
        r["presentation"] = pres.to_json()
        if args.w:
            w = _load_wreath(args.w, 0, report)
            try:
                perm = orbit_equivariance_check(args.N, w)
            except EquivarianceError as exc:
                report.check("orbit_equivariance", False, error=str(exc))
                return EXIT_FAIL
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
            r["image_index"] = list(perm.get(idx, ()))
            report.check("orbit_equivariance", True, window=5 * args.N, size=len(perm))
        return EXIT_OK if report.passed else EXIT_FAIL

    q = _cohomology_form(args, report)
    pres = presentation(q, args.r)
    if args.action == "presentation":
        r["generators"] = list(pres.names)
        r["relations"] = pres.format_relations()
        r["presentation"] = pres.to_json()
    elif args.action == "hilbert":
        if args.max % 2 or args.max < 0:
            raise UsageError("--max must be even and non-negative")
        got = hilbert_function(pres, args.max)
        want = expected_hilbert_function(pres, args.max)
        r["degrees"] = list(range(0, args.max + 1, 2))
        r["dimensions"], r["expected"] = got, want
        report.check("complete_intersection_series", got == want)
    elif args.action == "action-check":
        rng = random.Random(args.seed)
        if args.w:
            elements = [_load_wreath(args.w, q.e, report)]
        else:
            elements = [samplers.wreath_element(rng, args.r, q.d, q.e) for _ in range(args.cases)]
        failures = []
        for w in elements:
            try:
                rep = ideal_invariance_report(pres, substitution_from_wreath(q, w))
            except DimensionError as exc:
                raise UsageError(str(exc)) from exc
            if not rep.invariant or not rep.on_the_nose:
                failures.append({"w": w.to_json(), "invariant": rep.invariant,
                                 "on_the_nose": rep.on_the_nose})
        r["elements"] = len(elements)
        if failures:
            r["counterexamples"] = failures[:10]
        report.check("ideal_invariance", not failures, failure_count=len(failures))
    return EXIT_OK if report.passed else EXIT_FAIL


def _load_wreath(path: str, e: int, report: RunReport) -> WreathElement:
    data = read_json(path, report)
    try:
        return WreathElement.from_json(data, e=e)
    except (ValueError, TypeError, KeyError) as exc:
        raise UsageError(f"invalid group element in {path}: {exc}") from exc


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="looijenga", description=__doc__.splitlines()[0])
    parser.add_argument("--json", action="store_true", help="print a machine-readable report")
    # also accept --json after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("qform", parents=[common], help="evaluate and inspect a quadratic form file")
    p.add_argument("action", choices=("eval", "hessian", "dual-cosets", "definiteness"))
    p.add_argument("form")
    p.add_argument("--y", help="comma-separated integers or rationals")
    p.add_argument("--y2", help="second vector for beta and omega")
    p.set_defaults(func=cmd_qform)

    p = sub.add_parser("verify", parents=[common], help="run a named property suite")
    p.add_argument("suite", help=", ".join(SUITES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=100, help="cases per configuration")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("theta", parents=[common], help="theta functions of a positive definite form")
    p.add_argument("action", choices=("eval", "translation-check", "dim", "gram-rank"))
    p.add_argument("form", help="form file or theta context file")
    p.add_argument("--tau", help="re,im")
    p.add_argument("--z", help="re,im per coordinate, coordinates separated by ';'")
    p.add_argument("--u-index", type=int, dest="u_index")
    p.add_argument("--tol", type=float)
    p.add_argument("--max-radius", type=int, default=64, dest="max_radius")
    p.add_argument("--m1")
    p.add_argument("--m2")
    p.add_argument("--points", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("moduli", parents=[common], help="lattices, reduction, isogenies, descent")
    msub = p.add_subparsers(dest="action", required=True)
    m = msub.add_parser("reduce-tau", parents=[common])
    m.add_argument("tau", help="re,im")
    m = msub.add_parser("isomorphic", parents=[common])
    m.add_argument("lattice", help="t1re,t1im,t2re,t2im or JSON")
    m.add_argument("lattice2")
    m.add_argument("--tol", type=float, default=1e-9)
    m = msub.add_parser("isogeny", parents=[common])
    m.add_argument("--B", required=True, help="a,b,c,d")
    m.add_argument("what", choices=("normal-form", "degree", "kernel"))
    m.add_argument("--lattice", default="0,1,1,0")
    m = msub.add_parser("gamma-member", parents=[common])
    m.add_argument("--B", required=True)
    m.add_argument("--A", required=True)
    m = msub.add_parser("descend", parents=[common])
    m.add_argument("form")
    m.add_argument("--t1", required=True)
    m.add_argument("--t2", required=True)
    m.add_argument("--y")
    m.add_argument("--x")
    m.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_moduli)

    p = sub.add_parser("cohomology", parents=[common], help="quotient presentations and the action on them")
    csub = p.add_subparsers(dest="action", required=True)
    for name in ("presentation", "hilbert", "action-check"):
        c = csub.add_parser(name, parents=[common])
        c.add_argument("form", nargs="?", help="form file; omit for d = 0 or e = 0")
        c.add_argument("--r", type=int, default=2)
        c.add_argument("--d", type=int)
        c.add_argument("--e", type=int, default=1)
        if name == "hilbert":
            c.add_argument("--max", type=int, default=8, help="top cohomological degree")
        if name == "action-check":
            c.add_argument("--w", help="group element JSON file; random elements otherwise")
            c.add_argument("--seed", type=int, default=0)
            c.add_argument("--cases", type=int, default=20)
    c = csub.add_parser("orbit", parents=[common])
    c.add_argument("--N", type=int, default=1)
    c.add_argument("--index", default="0,0")
    c.add_argument("--w", help="group element (d = 1, no n part) to check equivariance")
    p.set_defaults(func=cmd_cohomology)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    report = RunReport([a for a in argv if a != "--json"])
    start = time.perf_counter()
    try:
        code = args.func(args, report)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        report.check("convergence", False, bound=exc.bound, radius=exc.radius)
        code = EXIT_CONVERGENCE
    except (ValueError, KeyError, DegenerateFormError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report.wall_time = time.perf_counter() - start
    if code == EXIT_OK and not report.passed:
        code = EXIT_FAIL
    print(dump_json(report.to_json()) if args.json else report.render_text())
    return code


if __name__ == "__main__":
    sys.exit(main())
