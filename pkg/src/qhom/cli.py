"""Command-line front end.

Exit status: 0 when the check passes or the object is found, 1 when it
fails or is absent, 2 for unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
from typing import Sequence

from . import fileio
from .catalog import UnknownEntry, catalog_entries, catalog_get
from .games import (
    Question,
    check_perfect,
    outcome_probability,
    schmidt_reduce,
    strategy_from_cert,
    validate_strategy,
    winning_probability,
)
from .linalg import EXACT, FLOAT, format_rational
from .qmonad import QHomCert, kleisli_compose, verify_qhom
from .report import PreconditionError, Report
from .structures import Structure, find_homomorphism, homomorphism_report
from .translations import (
    BCS,
    CSPInstance,
    EmpiricalModel,
    OperatorSolution,
    bcs_quantum_solution_verify,
    check_state_independent_witness,
    check_state_witness,
    csp_to_pair,
    empirical_to_csp,
    graph_pair_to_bcs,
    is_strongly_contextual,
    operator_to_projectors,
    pair_to_csp,
    verify_operator_solution,
)

PASS, FAIL, INPUT_ERROR = 0, 1, 2


class InputError(Exception):
    pass


def _load(ref: str, want: type | tuple, what: str):
    obj = fileio.resolve(ref)
    if not isinstance(obj, want):
        raise InputError(f"{ref} is not a {what}")
    return obj


def _load_pvms(ref: str) -> dict:
    obj = fileio.resolve(ref, kind=None if ref.startswith(fileio.CATALOG_PREFIX) else "pvms")
    if not isinstance(obj, dict):
        raise InputError(f"{ref} is not a PVM family")
    return obj


def _float_pvms(pvms: dict) -> dict:
    return {x: {o: m.to_float() for o, m in povm.items()} for x, povm in pvms.items()}


def _fmt(v) -> str:
    try:
        return format_rational(v)
    except AttributeError:
        return f"{float(v):.12g}"


class Output:
    def __init__(self, machine: bool, stream=None):
        self.machine = machine
        self.stream = stream or sys.stdout

    def human(self, text: str) -> None:
        if not self.machine:
            print(text, file=self.stream)

    def record(self, rec) -> None:
        if self.machine:
            print(json.dumps(rec, indent=2, ensure_ascii=False), file=self.stream)

    def report(self, title: str, rep: Report) -> int:
        self.human(f"{title}: {rep.summary()}")
        self.record(rep.to_dict())
        return PASS if rep.passed else FAIL

    def write_obj(self, obj, out: str | None, kind: str | None = None) -> None:
        if out:
            fileio.save(obj, out, kind)
            self.human(f"wrote {out}")
        else:
            print(fileio.dumps(obj, kind), end="", file=self.stream)


# hom ------------------------------------------------------------------------------


def cmd_hom_find(args, out: Output) -> int:
    a = _load(args.A, Structure, "structure")
    b = _load(args.B, Structure, "structure")
    f = find_homomorphism(a, b)
    if f is None:
        out.human("Absent")
        out.record({"found": False})
        return FAIL
    out.human("Found: " + ", ".join(f"{x} -> {f(x)}" for x in a.universe))
    out.record({"found": True, **fileio.map_to_json(f)})
    return PASS


def cmd_hom_check(args, out: Output) -> int:
    a = _load(args.A, Structure, "structure")
    b = _load(args.B, Structure, "structure")
    mapping = fileio.resolve(args.MAP, kind="map")
    return out.report("homomorphism", homomorphism_report(a, b, mapping))


# qhom -----------------------------------------------------------------------------


def cmd_qhom_verify(args, out: Output) -> int:
    c = _load(args.CERT, QHomCert, "certificate")
    if args.backend == FLOAT:
        c = c.to_float()
    return out.report(f"quantum homomorphism (d={c.dim}, {c.backend})", verify_qhom(c, args.tol))


def cmd_qhom_compose(args, out: Output) -> int:
    c1 = _load(args.C1, QHomCert, "certificate")
    c2 = _load(args.C2, QHomCert, "certificate")
    try:
        c = kleisli_compose(c1, c2, args.tol)
    except PreconditionError as e:
        out.human(str(e))
        out.record({"pass": False, "error": str(e)})
        return FAIL
    rep = verify_qhom(c, args.tol)
    if args.out or not out.machine:
        out.human(f"composite certificate: d={c.dim}, {rep.summary()}")
    if args.out:
        fileio.save(c, args.out)
        out.human(f"wrote {args.out}")
        out.record(rep.to_dict())
    elif out.machine:
        print(fileio.dumps(c), end="", file=out.stream)
    return PASS if rep.passed else FAIL


# game -----------------------------------------------------------------------------


def _parse_question(text: str, a: Structure) -> Question:
    try:
        rel, xs, x = text.split(":")
    except ValueError:
        raise InputError(f"question must look like REL:x1,x2,...:x, got {text!r}") from None
    xs = tuple(v for v in xs.split(",") if v)
    if rel not in a.signature.names or xs not in a.relations[rel]:
        raise InputError(f"{xs} is not a tuple of relation {rel!r}")
    if x not in a:
        raise InputError(f"{x!r} is not an element of the source structure")
    return Question(rel, xs, x)


def cmd_game_simulate(args, out: Output) -> int:
    s = fileio.resolve(args.STRAT, kind=None if args.STRAT.startswith(fileio.CATALOG_PREFIX) else "strategy")
    a = _load(args.A, Structure, "structure")
    b = _load(args.B, Structure, "structure")
    if args.backend == FLOAT:
        s = s.to_float()
    valid = validate_strategy(s, a, b, args.tol)
    if not valid:
        return out.report("strategy is malformed", valid)
    rep = check_perfect(s, a, b, args.tol)
    lo, mean = winning_probability(s, a, b, args.tol)
    out.human(f"perfect: {rep.summary()}")
    out.human(f"winning probability: min {_fmt(lo)}, uniform mean {_fmt(mean)}")
    rec = {**rep.to_dict(), "winMin": _fmt(lo), "winMean": _fmt(mean)}
    if args.question:
        q = _parse_question(args.question, a)
        table = []
        for ys in itertools.product(b.universe, repeat=len(q.tuple)):
            for y in b.universe:
                p = outcome_probability(s, q, ys, y)
                if p:
                    table.append({"alice": list(ys), "bob": y, "p": _fmt(p)})
        out.human(f"question {q}:")
        for row in table:
            out.human(f"  Alice {tuple(row['alice'])}, Bob {row['bob']}: {row['p']}")
        rec["question"] = {"relation": q.relation, "tuple": list(q.tuple), "element": q.element, "outcomes": table}
    out.record(rec)
    return PASS if rep.passed else FAIL


def cmd_game_from_cert(args, out: Output) -> int:
    c = _load(args.CERT, QHomCert, "certificate")
    try:
        s = strategy_from_cert(c, args.tol)
    except PreconditionError as e:
        out.human(str(e))
        out.record({"pass": False, "error": str(e)})
        return FAIL
    out.write_obj(s, args.out)
    return PASS


def cmd_game_reduce(args, out: Output) -> int:
    s = fileio.resolve(args.STRAT, kind=None if args.STRAT.startswith(fileio.CATALOG_PREFIX) else "strategy")
    r = schmidt_reduce(s, args.tol)
    if args.out:
        out.human(f"reduced {s.dim_a}x{s.dim_b} -> {r.dim_a}x{r.dim_b}")
    out.write_obj(r, args.out)
    return PASS


# translate ---------------------------------------------------------------------------


def cmd_csp2struct(args, out: Output) -> int:
    k = _load(args.K, CSPInstance, "CSP instance")
    a, b = csp_to_pair(k)
    if args.out_a:
        fileio.save(a, args.out_a)
    if args.out_b:
        fileio.save(b, args.out_b)
    if not (args.out_a or args.out_b):
        print(json.dumps({"A": fileio.to_json(a), "B": fileio.to_json(b)}, indent=2), file=out.stream)
    return PASS


def cmd_struct2csp(args, out: Output) -> int:
    a = _load(args.A, Structure, "structure")
    b = _load(args.B, Structure, "structure")
    out.write_obj(pair_to_csp(a, b), args.out)
    return PASS


def cmd_emp2csp(args, out: Output) -> int:
    e = _load(args.E, EmpiricalModel, "empirical model")
    out.write_obj(empirical_to_csp(e), args.out)
    return PASS


def cmd_graph2bcs(args, out: Output) -> int:
    g = _load(args.G, Structure, "graph")
    h = _load(args.H, Structure, "graph")
    out.write_obj(graph_pair_to_bcs(g, h), args.out)
    return PASS


# bcs / contextuality ---------------------------------------------------------------------


def cmd_bcs_verify_op(args, out: Output) -> int:
    bcs = _load(args.BCS, BCS, "BCS")
    sol = _load(args.SOL, OperatorSolution, "operator solution")
    if args.backend == FLOAT:
        sol = OperatorSolution(sol.dim, {x: m.to_float() for x, m in sol.assignment.items()})
    rep = verify_operator_solution(bcs, sol, args.tol)
    if rep.passed:
        rep.notes["quantum solution (via certificate)"] = bcs_quantum_solution_verify(
            bcs, operator_to_projectors(sol, args.tol), args.tol
        ).passed
    return out.report("operator solution", rep)


def cmd_contextuality(args, out: Output) -> int:
    e = _load(args.E, EmpiricalModel, "empirical model")
    sc = is_strongly_contextual(e)
    out.human(f"strongly contextual: {'yes' if sc else 'no'}")
    rec: dict = {"stronglyContextual": sc}
    ok = sc
    if args.state and not args.witness:
        raise InputError("--state needs --witness")
    if args.witness:
        pvms = _load_pvms(args.witness)
        if args.state:
            psi = fileio.resolve(args.state, kind=None if args.state.startswith(fileio.CATALOG_PREFIX) else "state")
            if args.backend == FLOAT:
                pvms, psi = _float_pvms(pvms), psi.to_float()
            label = "state-dependent witness"
            try:
                rep = check_state_witness(e, psi, pvms, args.tol)
            except PreconditionError as err:
                rep = Report()
                rep.add("precondition", args.witness, str(err))
        else:
            if args.backend == FLOAT:
                pvms = _float_pvms(pvms)
            label = "state-independent witness"
            try:
                rep = check_state_independent_witness(e, pvms, args.tol)
            except PreconditionError as err:
                rep = Report()
                rep.add("precondition", args.witness, str(err))
        out.human(f"{label}: {rep.summary()}")
        rec["witness"] = {"kind": label, **rep.to_dict()}
        ok = ok and rep.passed
    out.record(rec)
    return PASS if ok else FAIL


# catalog ---------------------------------------------------------------------------------


def support_table(e: EmpiricalModel) -> str:
    lines = []
    for c in e.contexts:
        head = " ".join(str(m) for m in c.members)
        lines.append(f"context {head}:")
        for s in _ordered(c.support, e.outcomes):
            lines.append("  " + " ".join(str(o) for o in s))
    return "\n".join(lines)


def _ordered(tuples, outcomes) -> list:
    order = {o: i for i, o in enumerate(outcomes)}
    return sorted(tuples, key=lambda t: [order[o] for o in t])


def describe(entry) -> str:
    p = entry.payload
    head = f"{entry.id} ({entry.kind}): {entry.provenance}"
    if entry.kind == "empirical":
        body = f"measurements: {' '.join(map(str, p.measurements))}\noutcomes: {' '.join(map(str, p.outcomes))}\n" + support_table(p)
    elif entry.kind in ("structure", "graph"):
        rels = ", ".join(f"{n}/{k}: {len(p.relations[n])} tuples" for n, k in p.signature.relations)
        body = f"universe ({len(p)}): {' '.join(map(str, p.universe))}\nrelations: {rels}"
    elif entry.kind == "bcs":
        body = f"{len(p.variables)} variables, {len(p.constraints)} constraints\n" + "\n".join(
            f"  {' '.join(c.scope)}: satisfied by {sorted(''.join(map(str, b)) for b in c.satisfying())}" for c in p.constraints
        )
    elif entry.kind == "certificate":
        body = f"d={p.dim}, {len(p.source)} source elements, {len(p.target)} target elements, {len(p.projectors)} non-zero cells"
    elif entry.kind == "strategy":
        body = f"{p.dim_a}x{p.dim_b}, {p.backend}, squared norm {_fmt(p.norm_sq)}, {len(p.alice)} Alice questions"
    elif entry.kind == "operator-solution":
        body = f"d={p.dim}, {len(p.assignment)} observables"
    elif entry.kind == "pvms":
        body = f"{len(p)} measurements: {' '.join(map(str, p))}"
    elif entry.kind == "state":
        body = "entries: " + " ".join(_fmt(v.re) if not v.im else repr(v) for v in p.array.ravel())
    else:
        body = ""
    return head + ("\n" + body if body else "")


def cmd_catalog_list(args, out: Output) -> int:
    entries = catalog_entries()
    for e in entries:
        out.human(f"{e.id:32s} {e.kind:18s} {e.provenance}")
    out.record([{"id": e.id, "kind": e.kind, "provenance": e.provenance} for e in entries])
    return PASS


def cmd_catalog_show(args, out: Output) -> int:
    entry = catalog_get(args.ID)
    out.human(describe(entry))
    if out.machine:
        print(fileio.dumps(entry.payload, entry.kind), end="", file=out.stream)
    return PASS


# parser ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "machine"), default="human", help="output style")
    common.add_argument("--tol", type=float, default=None, help="float tolerance (default: QMONAD_TOL or 1e-9)")

    backend = argparse.ArgumentParser(add_help=False)
    backend.add_argument("--backend", choices=(EXACT, FLOAT), default=EXACT)

    outfile = argparse.ArgumentParser(add_help=False)
    outfile.add_argument("-o", "--out", help="write the result here instead of stdout")

    p = argparse.ArgumentParser(prog="qhom", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="group", required=True)

    hom = sub.add_parser("hom", help="classical homomorphisms").add_subparsers(dest="cmd", required=True)
    s = hom.add_parser("find", parents=[common])
    s.add_argument("A")
    s.add_argument("B")
    s.set_defaults(fn=cmd_hom_find)
    s = hom.add_parser("check", parents=[common])
    s.add_argument("A")
    s.add_argument("B")
    s.add_argument("MAP")
    s.set_defaults(fn=cmd_hom_check)

    qh = sub.add_parser("qhom", help="quantum homomorphism certificates").add_subparsers(dest="cmd", required=True)
    s = qh.add_parser("verify", parents=[common, backend])
    s.add_argument("CERT")
    s.set_defaults(fn=cmd_qhom_verify)
    s = qh.add_parser("compose", parents=[common, outfile])
    s.add_argument("C1")
    s.add_argument("C2")
    s.set_defaults(fn=cmd_qhom_compose)

    game = sub.add_parser("game", help="the homomorphism game").add_subparsers(dest="cmd", required=True)
    s = game.add_parser("simulate", parents=[common, backend])
    s.add_argument("STRAT")
    s.add_argument("A")
    s.add_argument("B")
    s.add_argument("--question", help="REL:x1,...,xk:x -- print that question's outcome distribution")
    s.set_defaults(fn=cmd_game_simulate)
    s = game.add_parser("from-cert", parents=[common, outfile])
    s.add_argument("CERT")
    s.set_defaults(fn=cmd_game_from_cert)
    s = game.add_parser("reduce", parents=[common, outfile])
    s.add_argument("STRAT")
    s.set_defaults(fn=cmd_game_reduce)

    tr = sub.add_parser("translate", help="problem translations").add_subparsers(dest="cmd", required=True)
    s = tr.add_parser("csp2struct", parents=[common])
    s.add_argument("K")
    s.add_argument("--out-a")
    s.add_argument("--out-b")
    s.set_defaults(fn=cmd_csp2struct)
    s = tr.add_parser("struct2csp", parents=[common, outfile])
    s.add_argument("A")
    s.add_argument("B")
    s.set_defaults(fn=cmd_struct2csp)
    s = tr.add_parser("emp2csp", parents=[common, outfile])
    s.add_argument("E")
    s.set_defaults(fn=cmd_emp2csp)
    s = tr.add_parser("graph2bcs", parents=[common, outfile])
    s.add_argument("G")
    s.add_argument("H")
    s.set_defaults(fn=cmd_graph2bcs)

    bcs = sub.add_parser("bcs", help="binary constraint systems").add_subparsers(dest="cmd", required=True)
    s = bcs.add_parser("verify-op", parents=[common, backend])
    s.add_argument("BCS")
    s.add_argument("SOL")
    s.set_defaults(fn=cmd_bcs_verify_op)

    ctx = sub.add_parser("contextuality", help="strong contextuality").add_subparsers(dest="cmd", required=True)
    s = ctx.add_parser("check", parents=[common, backend])
    s.add_argument("E")
    s.add_argument("--witness", help="PVM family certifying contextuality")
    s.add_argument("--state", help="shared state; makes the witness state-dependent")
    s.set_defaults(fn=cmd_contextuality)

    cat = sub.add_parser("catalog", help="built-in instances").add_subparsers(dest="cmd", required=True)
    s = cat.add_parser("list", parents=[common])
    s.set_defaults(fn=cmd_catalog_list)
    s = cat.add_parser("show", parents=[common])
    s.add_argument("ID")
    s.set_defaults(fn=cmd_catalog_show)
    return p


def dispatch(argv: Sequence[str] | None = None, stream=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return INPUT_ERROR if e.code else PASS
    out = Output(args.format == "machine", stream)
    try:
        return args.fn(args, out)
    except PreconditionError as e:
        print(f"error: {e}", file=sys.stderr)
        return FAIL
    except (InputError, fileio.SchemaError, UnknownEntry, OSError, ValueError) as e:
        msg = e.args[0] if isinstance(e, UnknownEntry) else str(e)
        print(f"error: {msg}", file=sys.stderr)
        return INPUT_ERROR


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
