"""Command-line front end: ``qfix check | solve | demo | list-demos``.

Exit codes: 0 when every requested check passed, 1 when one failed, 2 on a
malformed description.  ``--json`` prints a machine-readable report; the
same input always yields the same bytes unless ``--timing`` is given.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from contextlib import contextmanager
from typing import Optional

from .cauchy import check_cauchy_adjoint_equivalence
from .contraction import (
    FixpointResult,
    check_contraction,
    check_control,
    picard_solve,
    sweep_solve,
)
from .instances import (
    FIXTURES,
    boolean_control_functions,
    delta_affine_control,
    delta_plus_fixpoint_scan,
    get_fixture,
)
from .qcat import QFunctor, check_category, check_functor
from .quantale import (
    TAU_EQ,
    BooleanQuantale,
    DeltaQuantale,
    LawvereQuantale,
    TNormQuantale,
    check_quantale_axioms,
    check_quantale_laws_random,
)
from .report import Report
from .serialization import SCHEMA_VERSION, SchemaError, parse_description, report_json, to_jsonable
from .stepdist import StepDistribution

EXIT_OK, EXIT_FAILED, EXIT_PARSE = 0, 1, 2


class _Run:
    """Collects checks and results for one command, then renders them."""

    def __init__(self, command: str, args):
        self.out = {"version": SCHEMA_VERSION, "command": command}
        self.checks: list = []
        self.lines: list = []
        self.args = args
        self.ok = True

    def add(self, rep: Report, expected: bool = True):
        self.checks.append(report_json(rep))
        self.lines.append(rep.summary())
        for n in rep.notes:
            self.lines.append(f"    note: {n}")
        if rep.passed != expected:
            self.ok = False

    def say(self, text: str):
        self.lines.append(text)

    def emit(self, started: float) -> int:
        self.out["checks"] = self.checks
        self.out["passed"] = self.ok
        if self.args.timing:
            self.out["seconds"] = round(time.perf_counter() - started, 6)
        if self.args.json:
            print(json.dumps(to_jsonable(self.out), indent=2))
        else:
            for line in self.lines:
                print(line)
            if self.args.timing:
                print(f"time: {self.out['seconds']:.3f}s")
            print("OK" if self.ok else "FAILED")
        return EXIT_OK if self.ok else EXIT_FAILED


@contextmanager
def _tolerance(q, tol: float):
    old = q.tol
    q.tol = tol
    try:
        yield
    finally:
        q.tol = old


def _load(path: str, tol: float):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise SchemaError(path, exc.strerror or str(exc)) from None
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}:{exc.lineno}:{exc.colno}", exc.msg) from None
    return parse_description(doc, tol)


def control_sample(q) -> list:
    """A deterministic sample of quantale values for control checks."""
    if isinstance(q, BooleanQuantale):
        return [0, 1]
    if isinstance(q, LawvereQuantale):
        return [0.0, math.inf] + [10.0 ** (k / 10) for k in range(-60, 61)]
    if isinstance(q, TNormQuantale):
        return [i / 100 for i in range(101)]
    if isinstance(q, DeltaQuantale):
        out = [StepDistribution.zero(), StepDistribution.unit()]
        out += [StepDistribution.step(b / 4) for b in range(1, 17)]
        out += [StepDistribution((b / 4,), (0.5, 1.0)) for b in range(1, 5)]
        out += [StepDistribution((0.5, 1.5), (0.2, 0.7, 1.0))]
        return out
    elems = q.elements()
    return list(elems) if elems is not None else []


def _hom_values(c) -> list:
    objs = c.sample()
    return [c.hom(x, y) for x in objs for y in objs]


def _result_json(r: FixpointResult) -> dict:
    d = r.diagnostics
    out = {
        "start": r.start,
        "status": r.status,
        "method": r.method,
        "limit": r.limit,
        "fixpoint_homs": list(r.fixpoint_homs) if r.fixpoint_homs else None,
        "notes": r.notes,
    }
    if d is not None:
        out["diagnostics"] = {
            "horizon": d.horizon,
            "cauchy_estimate": d.estimate.value if d.estimate else None,
            "cauchy_stabilized": d.estimate.stabilized if d.estimate else None,
            "orbit_stable": d.orbit_stable,
            "forward_monotone": d.forward_monotone,
            "backward_monotone": d.backward_monotone,
            "forward_last": d.forward[-1],
            "backward_last": d.backward[-1],
        }
    return out


def _say_result(run: _Run, r: FixpointResult, indent: str = "  "):
    line = f"{indent}start {r.start!r}: {r.status}"
    if r.found:
        line += f" -> {r.limit!r} ({r.method}); C(fu,u), C(u,fu) = {r.fixpoint_homs[0]!r}, {r.fixpoint_homs[1]!r}"
    run.say(line)
    d = r.diagnostics
    if d is not None and d.estimate is not None:
        flag = "stabilized" if d.estimate.stabilized else "not stabilized"
        run.say(f"{indent}  Cauchy estimate {d.estimate.value!r} at horizon {d.horizon} ({flag}); orbit stable: {d.orbit_stable}")
    for n in r.notes:
        run.say(f"{indent}  note: {n}")


# ---------------------------------------------------------------------------
# commands


def cmd_check(args) -> int:
    started = time.perf_counter()
    d = _load(args.file, args.tolerance)
    run = _Run("check", args)
    q, c = d.quantale, d.category
    horizon = args.horizon or 64
    run.out.update(input=args.file, tolerance=args.tolerance, horizon=horizon, quantale=q.name)
    run.say(f"check {args.file} ({q.name}, tolerance {args.tolerance:g}, horizon {horizon})")
    with _tolerance(q, args.tolerance):
        if d.sample is not None:
            run.add(check_quantale_axioms(q, d.sample))
        elif q.elements() is not None:
            run.add(check_quantale_axioms(q))
        else:
            run.add(check_quantale_laws_random(q, trials=args.trials, seed=args.seed))
        run.add(check_category(c))
        if d.endomap is not None:
            run.add(check_functor(QFunctor(c, c, d.endomap)))
        if d.control is not None:
            run.add(check_control(d.control, control_sample(q) + _hom_values(c)))
            if d.endomap is not None:
                run.add(check_contraction(c, d.endomap, d.control))
        if d.sequence is not None:
            rep = check_cauchy_adjoint_equivalence(d.sequence, horizon)
            run.out["cauchy"] = {k: rep.data[k] for k in ("cauchy", "adjoint", "stabilized")}
            run.out["cauchy"]["estimate"] = rep.data["estimate"].value
            run.add(rep)
            run.say(
                f"  sequence Cauchy: {rep.data['cauchy']} (C_x ~ {rep.data['estimate'].value!r}, "
                f"{'stabilized' if rep.data['stabilized'] else 'not stabilized'}); phi_x -| psi_x: {rep.data['adjoint']}"
            )
    return run.emit(started)


def cmd_solve(args) -> int:
    started = time.perf_counter()
    d = _load(args.file, args.tolerance)
    if d.endomap is None or d.control is None:
        raise SchemaError("map/control", "solve needs both a map and a control")
    run = _Run("solve", args)
    q, c = d.quantale, d.category
    horizon = args.horizon or d.horizon or 256
    run.out.update(input=args.file, tolerance=args.tolerance, horizon=horizon, quantale=q.name)
    run.say(f"solve {args.file} ({q.name}, tolerance {args.tolerance:g}, horizon {horizon})")
    with _tolerance(q, args.tolerance):
        if args.sweep:
            sw = sweep_solve(c, d.endomap, d.control, horizon=horizon)
            run.out["results"] = [_result_json(r) for r in sw.results]
            run.out["fixpoints"] = sw.fixpoints
            run.out["classification"] = [
                {"pair": [i, j], "case": k.case, "propositions": list(k.propositions), "consistent": k.consistent}
                for (i, j), k in sorted(sw.classes.items())
            ]
            for r in sw.results:
                _say_result(run, r)
            run.say(f"  distinct fixpoints: {sw.fixpoints!r}")
            for (i, j), k in sorted(sw.classes.items()):
                run.say(f"  fixpoints {i}, {j}: {k.case}" + (f" [{'; '.join(k.propositions)}]" if k.propositions else ""))
                if not k.consistent:
                    run.ok = False
            for n in sw.notes:
                run.say(f"  note: {n}")
            if not sw.results or not all(r.found for r in sw.results):
                run.ok = False
        else:
            start = d.object(json.loads(args.start)) if args.start is not None else d.start
            if start is None:
                start = c.carrier()[0] if c.is_finite else c.sample()[0]
            r = picard_solve(c, d.endomap, d.control, start, horizon)
            run.out["result"] = _result_json(r)
            _say_result(run, r)
            run.ok = r.found
    return run.emit(started)


def _demo_solve(run: _Run, fx, horizon: int):
    q, c = fx.category.quantale, fx.category
    run.add(check_category(c))
    run.add(check_control(fx.control, control_sample(q)))
    run.add(check_contraction(c, fx.endomap, fx.control))
    r = picard_solve(c, fx.endomap, fx.control, fx.start, horizon)
    run.out["result"] = _result_json(r)
    _say_result(run, r)
    want = fx.expected.get("limit")
    if not r.found:
        return False
    if isinstance(want, float):
        err = abs(r.limit - want)
        run.say(f"  closed-form limit {want!r}, error {err:.3e} (tolerance {fx.expected['tolerance']:g})")
        return err <= fx.expected["tolerance"]
    return r.limit == want


def _demo_degenerate(run: _Run, fx, horizon: int):
    c = fx.category
    run.say("  in an ordered set C(x,fx) and C(fx,x) are non-zero only when x = fx up to isomorphism,")
    run.say("  so the hypothesis of the theorem already hands over the fixpoint")
    controls = boolean_control_functions()
    run.out["boolean_controls"] = [[t[0], t[1]] for t in controls]
    run.say(f"  valid Boolean control functions (phi(0), phi(1)): {[(t[0], t[1]) for t in controls]}")
    matches = True
    results = []
    for x0 in c.carrier():
        r = picard_solve(c, fx.endomap, fx.control, x0, horizon)
        results.append(_result_json(r))
        _say_result(run, r)
        fixed = fx.endomap[x0] == x0
        if r.found != fixed or (r.found and r.limit != x0):
            matches = False
    run.out["results"] = results
    return matches and len(controls) == 2


def _demo_sweep(run: _Run, fx, horizon: int):
    c = fx.category
    sw = sweep_solve(c, fx.endomap, fx.control, horizon=horizon)
    run.out["results"] = [_result_json(r) for r in sw.results]
    run.out["fixpoints"] = sw.fixpoints
    for r in sw.results:
        _say_result(run, r)
    run.say(f"  distinct fixpoints: {sw.fixpoints!r}")
    cases = [k.case for _, k in sorted(sw.classes.items())]
    run.out["classification"] = cases
    for (i, j), k in sorted(sw.classes.items()):
        run.say(f"  fixpoints {i}, {j}: {k.case}")
    for n in sw.notes:
        run.say(f"  note: {n}")
    if "status" in fx.expected:
        return all(r.status == fx.expected["status"] for r in sw.results)
    return cases == [fx.expected["case"]] and all(r.found for r in sw.results)


def _demo_counterexample(run: _Run, fx, horizon: int):
    phi = fx.control
    q = phi.quantale
    u = fx.expected["fixpoint"]
    rep = check_control(phi, control_sample(q) + [u])
    run.say("  on all distributions the rescaling control fixes the almost-constant 1/2:")
    run.add(rep, expected=False)
    detected = any(v.law == "fixpoint-dichotomy" and q.eq(v.witness[0], u) for v in rep.violations)
    scan = delta_plus_fixpoint_scan(2.0, n=args_scan_size(run.args))
    run.say("  restricted to u(inf) = 1 (plus 0), no other fixpoints turn up:")
    run.add(scan)
    run.out["scan"] = {"scanned": scan.data["scanned"], "fixpoints": scan.data["fixpoints"]}
    aff = delta_affine_control(q)
    z = aff(StepDistribution.zero())
    run.say(f"  the affine control as written sends 0 to the constant {z.at_infinity} (so 0 is not its fixpoint)")
    run.add(check_control(aff, control_sample(q)))
    return detected and scan.passed


def args_scan_size(args) -> int:
    return getattr(args, "scan_size", 1000)


_DEMO_RUNNERS = {
    "solve": _demo_solve,
    "degenerate": _demo_degenerate,
    "sweep": _demo_sweep,
    "counterexample": _demo_counterexample,
}


def cmd_demo(args) -> int:
    started = time.perf_counter()
    try:
        fx = get_fixture(args.name)
    except KeyError as exc:
        raise SchemaError("demo", exc.args[0]) from None
    run = _Run("demo", args)
    horizon = args.horizon or fx.horizon
    run.out.update(demo=fx.name, tolerance=args.tolerance, horizon=horizon)
    run.say(f"demo {fx.name}: {fx.description}")
    run.say(f"  tolerance {args.tolerance:g}, horizon {horizon}")
    q = fx.category.quantale if fx.category is not None else fx.control.quantale
    with _tolerance(q, args.tolerance):
        verdict = _DEMO_RUNNERS[fx.kind](run, fx, horizon)
    run.out["verdict"] = "as expected" if verdict else "unexpected"
    run.say(f"  verdict: {run.out['verdict']}")
    run.ok = run.ok and verdict
    return run.emit(started)


def cmd_list_demos(args) -> int:
    items = [(name, get_fixture(name).description) for name in FIXTURES]
    if args.json:
        print(json.dumps({"version": SCHEMA_VERSION, "demos": [{"name": n, "description": d} for n, d in items]}, indent=2))
    else:
        width = max(len(n) for n, _ in items)
        for n, d in items:
            print(f"{n:<{width}}  {d}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    common.add_argument("--horizon", type=int, default=None, help="truncation horizon for sup-inf computations")
    common.add_argument("--tolerance", type=float, default=TAU_EQ, help="comparison tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled law checks")
    common.add_argument("--timing", action="store_true", help="include wall-clock time in the report")

    p = argparse.ArgumentParser(prog="qfix", description="Quantale-enriched categories and contraction fixpoints.")
    sub = p.add_subparsers(dest="command", required=True)
    pc = sub.add_parser("check", parents=[common], help="run the law checks a description calls for")
    pc.add_argument("file")
    pc.add_argument("--trials", type=int, default=1000, help="random trials for infinite quantales")
    pc.set_defaults(func=cmd_check)
    ps = sub.add_parser("solve", parents=[common], help="run the fixpoint solver")
    ps.add_argument("file")
    g = ps.add_mutually_exclusive_group()
    g.add_argument("--start", help="start object, as JSON (for example 0 or '\"a\"')")
    g.add_argument("--sweep", action="store_true", help="solve from every start and classify the fixpoints")
    ps.set_defaults(func=cmd_solve)
    pd = sub.add_parser("demo", parents=[common], help="run a named example end to end")
    pd.add_argument("name", choices=FIXTURES)
    pd.set_defaults(func=cmd_demo)
    pl = sub.add_parser("list-demos", parents=[common], help="list the named examples")
    pl.set_defaults(func=cmd_list_demos)
    return p


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except json.JSONDecodeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
