"""sbdet command line: run constructors and verifiers on a session file.

Exit status 0 when every check passes, 1 when a check fails, 2 on usage or
session errors.  With --json the report goes to stdout; a short summary
always goes to stderr.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

from .. import __version__
from ..abelianization import Word, maximal_member, normal_form, phi, word_check
from ..birmaps import HomTriple, is_affine_rep_map, map_compose
from ..errors import SBError, SessionSyntaxError, UnknownName
from ..fields import random_base_element
from ..relations import two_class_relation, one_class_relation, verify_elementary
from ..severi import (
    S,
    S_OP,
    algebra_basis_rank,
    algebra_center,
    algebra_element,
    det_class,
    is_affine_representant,
    opposite,
)
from .session import SessionIo, parse_session

SCHEMA = "sbdet-report/1"
COMMANDS = (
    "verify-example",
    "relation-one-class",
    "relation-two-class",
    "det-class",
    "compose",
    "algebra-check",
    "phi",
    "normal-form",
    "subgroup-member",
)


class UsageError(SBError):
    pass


class Report:
    def __init__(self, command, session, seed, samples):
        self.data = {
            "schema": SCHEMA,
            "version": __version__,
            "command": command,
            "session": session,
            "seed": seed,
            "samples": samples,
            "checks": {},
            "results": {},
            "errors": [],
            "timings": {},
        }

    def check(self, operation: str, name: str, ok: bool):
        self.data["checks"][f"{operation}: {name}"] = bool(ok)

    def result(self, key, value):
        self.data["results"][key] = value

    def error(self, operation: str, exc: Exception):
        self.data["errors"].append({"operation": operation, "type": type(exc).__name__, "message": str(exc)})

    def time(self, key, seconds):
        self.data["timings"][key] = round(seconds, 3)

    @property
    def passed(self) -> bool:
        return not self.data["errors"] and all(self.data["checks"].values())

    def finish(self) -> dict:
        self.data["checks"] = dict(sorted(self.data["checks"].items()))
        self.data["passed"] = self.passed
        return self.data


def _timed(report, key, fn, *args, **kwargs):
    t0 = time.perf_counter()
    try:
        return fn(*args, **kwargs)
    finally:
        report.time(key, time.perf_counter() - t0)


def _need_ctx(session):
    if session.ctx is None:
        raise UsageError("this command needs xi in the session")
    return session.ctx


def _need_registry(session):
    if session.registry is None:
        raise UsageError("this command needs classes in the session")
    return session.registry


def _word_arg(session, args) -> Word:
    if args.word is None:
        if len(session.words) == 1:
            return next(iter(session.words.values()))
        raise UsageError("choose a word with --word")
    return session.word(args.word)


# -- commands -----------------------------------------------------------------


def _one_class(report, session, args, name):
    ctx = _need_ctx(session)
    A = session.matrix(name)
    side = session.matrix_sides.get(name)
    op = "one_class_relation"
    chain = _timed(report, op, one_class_relation, ctx, A, side=side, samples=args.samples, seed=args.seed)
    rep = chain.report
    report.check(op, "det ratio = 1", rep["det ratio = 1"])
    report.check(op, "composition = identity", rep["composition = identity"])
    report.check(op, "representants", rep["representants"])
    report.result("det ratio", rep["det ratio"])
    report.result("cube witness", rep["cube_witness"])
    report.result("composition", rep["composition"])
    report.result("notes", chain.notes)
    report.result("chain", {"sides": chain.sides, "matrices": [M.to_strings() for M in chain.matrices]})
    ve = _timed(report, "verify_elementary", verify_elementary, chain, samples=args.samples, seed=args.seed)
    for item, ok in ve.items.items():
        report.check("verify_elementary", item, ok)


def cmd_verify_example(report, session, args):
    _one_class(report, session, args, args.matrix or "A1")


def cmd_relation_one_class(report, session, args):
    if args.matrix is None:
        if len(session.matrices) != 1:
            raise UsageError("choose the starting automorphism with --matrix")
        name = next(iter(session.matrices))
    else:
        name = args.matrix
    _one_class(report, session, args, name)


def cmd_relation_two_class(report, session, args):
    ctx = _need_ctx(session)
    if args.b is not None:
        try:
            b = session.parse(args.b)
        except SessionSyntaxError as exc:
            raise UsageError(f"--b: {exc}") from None
        report.result("b", args.b)
    elif session.b is not None:
        b = session.b
        report.result("b", session.b_text)
    else:
        raise UsageError("give b with --b or in the session")
    op = "two_class_relation"
    chain = _timed(report, op, two_class_relation, ctx, b, samples=args.samples, seed=args.seed)
    led = chain.report["ledger"]
    for k, v in led.items():
        if isinstance(v, bool):
            report.check("two_class_ledger", k, v)
    report.result("ledger", {k: v for k, v in led.items() if not isinstance(v, bool)})
    report.check(op, "composition = identity", chain.report["composition = identity"])
    report.check(op, "representants", chain.report["representants"])
    report.result("composition", chain.report["composition"])
    data = chain.data
    report.result("lambda~", data.lam_tilde.to_expr())
    report.result("lambda_b", data.lam_b.to_expr())
    report.result("notes", chain.notes)
    ve = _timed(report, "verify_elementary", verify_elementary, chain, samples=args.samples, seed=args.seed)
    for item, ok in ve.items.items():
        report.check("verify_elementary", item, ok)


def cmd_det_class(report, session, args):
    ctx = _need_ctx(session)
    if args.matrix is None:
        raise UsageError("det-class needs --matrix")
    A = session.matrix(args.matrix)
    side = args.side or session.matrix_sides.get(args.matrix)
    if side is None:
        side = next((s for s in (S, S_OP) if is_affine_representant(ctx, A, s)), None)
        if side is None:
            report.check("det_class", "representant", False)
            return
    ok = is_affine_representant(ctx, A, side)
    report.check("det_class", f"representant on {side}", ok)
    if not ok:
        return
    c = det_class(ctx, A, side)
    report.result("side", side)
    report.result("class", c.to_json())


def cmd_compose(report, session, args):
    """Compose matrices and Sigma in application order, e.g. --maps A1,Sigma,A1."""
    ctx = _need_ctx(session)
    if not args.maps:
        raise UsageError("compose needs --maps")
    names = [x.strip() for x in args.maps.split(",") if x.strip()]
    T = ctx.tower
    side = args.side or S
    start = side
    f = HomTriple.identity(T)
    for name in names:
        if name == "Sigma":
            g = HomTriple.sigma(T)
            side = opposite(side)
        else:
            A = session.matrix(name)
            if not is_affine_representant(ctx, A, side):
                report.check("compose", f"{name} is a representant on {side}", False)
            g = HomTriple.linear(A)
        f = map_compose(g, f)
    sides = (start, side)
    d = f.degree()
    expected = 1 if start == side else 2
    report.result("degree", d)
    report.result("sides", list(sides))
    report.result("map", f.to_strings())
    report.check("map_degree", "degree residue mod 3", d % 3 == expected)
    report.check("is_affine_rep_map", "representant", is_affine_rep_map(ctx, f, sides))


def cmd_algebra_check(report, session, args):
    ctx = _need_ctx(session)
    rng = random.Random(args.seed)
    T = ctx.tower
    report.check("algebra_basis", "rank 9", algebra_basis_rank(ctx) == 9)
    center = algebra_center(ctx)
    scalar = len(center) == 1 and all(c.is_zero() for c in center[0][1:])
    report.check("algebra_center", "center is k I", scalar)
    n = max(args.samples, 1)
    inv_ok = True
    mult_ok = True
    for _ in range(n):
        x = algebra_element(ctx, [random_base_element(T, rng) for _ in range(9)])
        y = algebra_element(ctx, [random_base_element(T, rng) for _ in range(9)])
        if x.det().is_zero() or y.det().is_zero():
            inv_ok = False
            continue
        cx, cy, cxy = det_class(ctx, x), det_class(ctx, y), det_class(ctx, x * y)
        mult_ok = mult_ok and cxy.same_class(cx * cy)
    report.check("algebra_element", f"{n} random elements invertible", inv_ok)
    report.check("det_class", f"multiplicative on {n} pairs", mult_ok)


def cmd_phi(report, session, args):
    reg = _need_registry(session)
    w = _word_arg(session, args)
    img = phi(w, reg, session.ctx)
    report.result("phi", img.to_json())
    report.check("word_validate", "valid", word_check(w, reg, session.ctx) is None)


def cmd_normal_form(report, session, args):
    reg = _need_registry(session)
    w = _word_arg(session, args)
    nf = normal_form(w, reg, session.ctx)
    report.result("normal form", nf.to_text())
    report.result("notes", nf.notes)
    report.check("normal_form", "phi preserved", phi(nf, reg, session.ctx) == phi(w, reg, session.ctx))


def cmd_subgroup_member(report, session, args):
    reg = _need_registry(session)
    w = _word_arg(session, args)
    if args.class_label is None:
        raise UsageError("subgroup-member needs --class")
    member = maximal_member(w, reg, args.class_label, args.prime, session.ctx)
    report.result("member", member)
    report.result("coordinate", phi(w, reg, session.ctx).coordinate(args.class_label))


HANDLERS = {
    "verify-example": cmd_verify_example,
    "relation-one-class": cmd_relation_one_class,
    "relation-two-class": cmd_relation_two_class,
    "det-class": cmd_det_class,
    "compose": cmd_compose,
    "algebra-check": cmd_algebra_check,
    "phi": cmd_phi,
    "normal-form": cmd_normal_form,
    "subgroup-member": cmd_subgroup_member,
}


# -- entry point --------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"sbdet: error: {message}", file=sys.stderr)
        sys.exit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sbdet", description="Exact checks on birational maps of Severi-Brauer surfaces.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--session", required=True, help="session file (YAML)")
    p.add_argument("--seed", type=int, default=None, help="seed for sampling (default: the session's)")
    p.add_argument("--samples", type=int, default=7, help="sample points for projective equality")
    p.add_argument("--json", action="store_true", help="print the JSON report on stdout")
    p.add_argument("--matrix", help="matrix name from the session")
    p.add_argument("--side", choices=(S, S_OP), help="side of the matrix or start side of --maps")
    p.add_argument("--b", help="element b for relation-two-class")
    p.add_argument("--maps", help="comma separated matrix names and Sigma, applied left to right")
    p.add_argument("--word", help="word name from the session")
    p.add_argument("--class", dest="class_label", help="link class for subgroup-member")
    p.add_argument("--prime", type=int, help="prime a for a 6-class")
    p.add_argument("--version", action="version", version=f"sbdet {__version__}")
    return p


def _summary(data) -> str:
    lines = [f"sbdet {data['command']}: {'PASS' if data['passed'] else 'FAIL'}"]
    for k, v in data["checks"].items():
        lines.append(f"  [{'ok' if v else 'FAIL'}] {k}")
    for e in data["errors"]:
        lines.append(f"  error in {e['operation']}: {e['type']}: {e['message']}")
    return "\n".join(lines)


def run(argv=None) -> tuple[int, dict | None, argparse.Namespace]:
    args = build_parser().parse_args(argv)
    if args.samples < 1:
        print("sbdet: error: --samples must be positive", file=sys.stderr)
        return 2, None, args
    try:
        session = parse_session(args.session)
    except (SessionIo, SessionSyntaxError, UnknownName, SBError) as exc:
        print(f"sbdet: session error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2, None, args
    if args.seed is None:
        args.seed = session.seed
    report = Report(args.command, args.session, args.seed, args.samples)
    try:
        HANDLERS[args.command](report, session, args)
    except (UsageError, UnknownName) as exc:
        print(f"sbdet: error: {exc}", file=sys.stderr)
        return 2, None, args
    except SBError as exc:
        report.error(args.command, exc)
    except Exception as exc:  # noqa: BLE001 - malformed input must not crash the CLI
        report.error(args.command, exc)
    data = report.finish()
    return (0 if data["passed"] else 1), data, args


def main(argv=None) -> int:
    code, data, args = run(argv)
    if data is not None:
        if args.json:
            print(json.dumps(data, indent=2, sort_keys=True))
        print(_summary(data), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
