"""JSON file formats for every object the toolkit reads or writes.

Rationals are strings ``"a/b"`` (``"a"`` when the denominator is 1);
exact complex entries are ``{"re": ..., "im": ...}`` records; matrices are
``{rows, cols, backend, entries}`` with entries in row-major order.
Element ids are strings; tuple-valued ids (product elements) are written
as nested lists.

``dumps`` output is canonical: ``dumps(loads(dumps(x))) == dumps(x)``.
References of the form ``catalog:ID`` may stand in for any object.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Any

from .catalog import catalog_get
from .games import Strategy
from .linalg import EXACT, FLOAT, GaussianRational, Matrix, format_rational, parse_rational
from .qmonad import QHomCert
from .structures import GRAPH_SIGNATURE, Homomorphism, Signature, Structure, graph, graph_edges
from .translations import (
    BCS,
    CSPInstance,
    BoolConstraint,
    Constraint,
    Context,
    EmpiricalModel,
    MRCert,
    OperatorSolution,
)

CATALOG_PREFIX = "catalog:"
FILE_KINDS = (
    "structure",
    "graph",
    "csp",
    "empirical",
    "bcs",
    "certificate",
    "mr-certificate",
    "strategy",
    "operator-solution",
    "pvms",
    "state",
    "map",
    "matrix",
)


class SchemaError(ValueError):
    """Input does not match its declared format; ``path`` locates the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# low-level helpers -------------------------------------------------------------


def _need(obj, key: str, path: str):
    if not isinstance(obj, dict):
        raise SchemaError(path, f"expected an object, got {type(obj).__name__}")
    if key not in obj:
        raise SchemaError(path, f"missing field {key!r}")
    return obj[key]


def _list(obj, path: str) -> list:
    if not isinstance(obj, list):
        raise SchemaError(path, f"expected an array, got {type(obj).__name__}")
    return obj


def _int(obj, path: str, positive: bool = True) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise SchemaError(path, f"expected an integer, got {obj!r}")
    if positive and obj < 1:
        raise SchemaError(path, f"expected a positive integer, got {obj}")
    return obj


def _id(obj, path: str):
    if isinstance(obj, str):
        return obj
    if isinstance(obj, list):
        return tuple(_id(v, f"{path}[{i}]") for i, v in enumerate(obj))
    raise SchemaError(path, f"element ids are strings, got {obj!r}")


def _enc_id(x):
    if isinstance(x, tuple):
        return [_enc_id(v) for v in x]
    if isinstance(x, str):
        return x
    raise TypeError(f"cannot serialize element id {x!r}")


def _rational(obj, path: str) -> Fraction:
    try:
        return parse_rational(obj)
    except ValueError as e:
        raise SchemaError(path, str(e)) from None


def _gauss(obj, path: str) -> GaussianRational:
    if isinstance(obj, (str, int)) and not isinstance(obj, bool):
        return GaussianRational(_rational(obj, path))
    return GaussianRational(_rational(_need(obj, "re", path), f"{path}.re"), _rational(_need(obj, "im", path), f"{path}.im"))


def _enc_gauss(g: GaussianRational) -> dict:
    return {"re": format_rational(g.re), "im": format_rational(g.im)}


def _number(obj, path: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise SchemaError(path, f"expected a number, got {obj!r}")
    return float(obj)


# matrices ----------------------------------------------------------------------


def matrix_from_json(obj, path: str = "$") -> Matrix:
    rows = _int(_need(obj, "rows", path), f"{path}.rows")
    cols = _int(_need(obj, "cols", path), f"{path}.cols")
    backend = obj.get("backend", EXACT)
    if backend not in (EXACT, FLOAT):
        raise SchemaError(f"{path}.backend", f"unknown backend {backend!r}")
    entries = _list(_need(obj, "entries", path), f"{path}.entries")
    if len(entries) != rows * cols:
        raise SchemaError(f"{path}.entries", f"expected {rows * cols} entries, got {len(entries)}")
    if backend == EXACT:
        vals = [_gauss(v, f"{path}.entries[{i}]") for i, v in enumerate(entries)]
        return Matrix.exact([vals[r * cols:(r + 1) * cols] for r in range(rows)])
    vals = []
    for i, v in enumerate(entries):
        p = f"{path}.entries[{i}]"
        vals.append(complex(_number(_need(v, "re", p), f"{p}.re"), _number(_need(v, "im", p), f"{p}.im")))
    return Matrix.floating([vals[r * cols:(r + 1) * cols] for r in range(rows)])


def matrix_to_json(m: Matrix) -> dict:
    if m.backend == EXACT:
        entries = [_enc_gauss(v) for v in m.array.ravel()]
    else:
        entries = [{"re": float(v.real), "im": float(v.imag)} for v in m.array.ravel()]
    return {"rows": m.rows, "cols": m.cols, "backend": m.backend, "entries": entries}


# structures and graphs -----------------------------------------------------------


def structure_from_json(obj, path: str = "$") -> Structure:
    sig_items = []
    for i, r in enumerate(_list(_need(obj, "signature", path), f"{path}.signature")):
        p = f"{path}.signature[{i}]"
        name = _need(r, "name", p)
        if not isinstance(name, str):
            raise SchemaError(f"{p}.name", "relation names are strings")
        arity = _int(_need(r, "arity", p), f"{p}.arity")
        sig_items.append((name, arity))
    universe = [_id(x, f"{path}.universe[{i}]") for i, x in enumerate(_list(_need(obj, "universe", path), f"{path}.universe"))]
    rels_obj = _need(obj, "relations", path)
    if not isinstance(rels_obj, dict):
        raise SchemaError(f"{path}.relations", "expected an object")
    rels = {}
    for name, tuples in rels_obj.items():
        rp = f"{path}.relations.{name}"
        rels[name] = [tuple(_id(x, f"{rp}[{i}][{j}]") for j, x in enumerate(_list(t, f"{rp}[{i}]"))) for i, t in enumerate(_list(tuples, rp))]
    try:
        return Structure(Signature(tuple(sig_items)), universe, rels)
    except ValueError as e:
        raise SchemaError(path, str(e)) from None


def structure_to_json(a: Structure) -> dict:
    return {
        "signature": [{"name": n, "arity": k} for n, k in a.signature.relations],
        "universe": [_enc_id(x) for x in a.universe],
        "relations": {n: [[_enc_id(x) for x in t] for t in a.sorted_tuples(n)] for n in a.signature.names},
    }


def graph_from_json(obj, path: str = "$") -> Structure:
    vertices = [_id(x, f"{path}.vertices[{i}]") for i, x in enumerate(_list(_need(obj, "vertices", path), f"{path}.vertices"))]
    edges = []
    for i, e in enumerate(_list(_need(obj, "edges", path), f"{path}.edges")):
        e = _list(e, f"{path}.edges[{i}]")
        if len(e) != 2:
            raise SchemaError(f"{path}.edges[{i}]", "edges have two endpoints")
        edges.append((_id(e[0], f"{path}.edges[{i}][0]"), _id(e[1], f"{path}.edges[{i}][1]")))
    try:
        return graph(vertices, edges)
    except ValueError as e:
        raise SchemaError(path, str(e)) from None


def graph_to_json(g: Structure) -> dict:
    return {"vertices": [_enc_id(v) for v in g.universe], "edges": [[_enc_id(u), _enc_id(v)] for u, v in graph_edges(g)]}


def _structure_ref(obj, path: str, base_dir: str | None) -> Structure:
    if isinstance(obj, str):
        val = resolve(obj, base_dir=base_dir)
        if not isinstance(val, Structure):
            raise SchemaError(path, f"{obj!r} does not name a structure")
        return val
    if isinstance(obj, dict) and "vertices" in obj:
        return graph_from_json(obj, path)
    return structure_from_json(obj, path)


def _structure_or_graph_json(a: Structure) -> dict:
    if a.signature == GRAPH_SIGNATURE:
        try:
            g = graph_to_json(a)
            if graph_from_json(g) == a:
                return g
        except ValueError:
            pass
    return structure_to_json(a)


# certificates ---------------------------------------------------------------------


def cert_from_json(obj, path: str = "$", base_dir: str | None = None) -> QHomCert:
    dim = _int(_need(obj, "dim", path), f"{path}.dim")
    source = _structure_ref(_need(obj, "source", path), f"{path}.source", base_dir)
    target = _structure_ref(_need(obj, "target", path), f"{path}.target", base_dir)
    cells = _cells(obj, path)
    try:
        return QHomCert(dim, source, target, cells)
    except ValueError as e:
        raise SchemaError(path, str(e)) from None


def _cells(obj, path: str) -> dict:
    cells = {}
    for i, c in enumerate(_list(_need(obj, "projectors", path), f"{path}.projectors")):
        p = f"{path}.projectors[{i}]"
        key = (_id(_need(c, "x", p), f"{p}.x"), _id(_need(c, "y", p), f"{p}.y"))
        if key in cells:
            raise SchemaError(p, f"duplicate cell {key}")
        cells[key] = matrix_from_json(_need(c, "matrix", p), f"{p}.matrix")
    return cells


def cert_to_json(c: QHomCert) -> dict:
    cells = []
    for x in c.source.universe:
        for y in c.target.universe:
            m = c.projectors.get((x, y))
            if m is not None and not m.is_zero(0.0):
                cells.append({"x": _enc_id(x), "y": _enc_id(y), "matrix": matrix_to_json(m)})
    return {
        "dim": c.dim,
        "source": _structure_or_graph_json(c.source),
        "target": _structure_or_graph_json(c.target),
        "projectors": cells,
    }


def mr_from_json(obj, path: str = "$") -> MRCert:
    return MRCert(_int(_need(obj, "dim", path), f"{path}.dim"), _cells(obj, path))


def mr_to_json(c: MRCert) -> dict:
    cells = [
        {"x": _enc_id(x), "y": _enc_id(y), "matrix": matrix_to_json(m)}
        for (x, y), m in c.projectors.items()
        if not m.is_zero(0.0)
    ]
    return {"dim": c.dim, "projectors": cells}


# states and strategies ---------------------------------------------------------------


def state_from_json(obj, path: str = "$") -> Matrix:
    if isinstance(obj, dict) and "floatEntries" in obj:
        vals = []
        for i, v in enumerate(_list(obj["floatEntries"], f"{path}.floatEntries")):
            p = f"{path}.floatEntries[{i}]"
            v = _list(v, p)
            if len(v) != 2:
                raise SchemaError(p, "float entries are [re, im] pairs")
            vals.append(complex(_number(v[0], f"{p}[0]"), _number(v[1], f"{p}[1]")))
        if not vals:
            raise SchemaError(f"{path}.floatEntries", "empty state")
        return Matrix.column(vals, FLOAT)
    entries = _list(_need(obj, "entries", path), f"{path}.entries")
    if not entries:
        raise SchemaError(f"{path}.entries", "empty state")
    psi = Matrix.column([_gauss(v, f"{path}.entries[{i}]") for i, v in enumerate(entries)])
    if "normSq" in obj:
        declared = _rational(obj["normSq"], f"{path}.normSq")
        actual = (psi.H @ psi)[0, 0].re
        if declared != actual:
            raise SchemaError(f"{path}.normSq", f"declared {declared} but entries give {actual}")
    return psi


def state_to_json(psi: Matrix) -> dict:
    if psi.backend == FLOAT:
        return {"floatEntries": [[float(v.real), float(v.imag)] for v in psi.array.ravel()]}
    return {
        "entries": [_enc_gauss(v) for v in psi.array.ravel()],
        "normSq": format_rational((psi.H @ psi)[0, 0].re),
    }


def strategy_from_json(obj, path: str = "$") -> Strategy:
    dim_a = _int(_need(obj, "dimA", path), f"{path}.dimA")
    dim_b = _int(_need(obj, "dimB", path), f"{path}.dimB")
    state = state_from_json(_need(obj, "state", path), f"{path}.state")
    alice = {}
    for i, q in enumerate(_list(_need(obj, "alice", path), f"{path}.alice")):
        p = f"{path}.alice[{i}]"
        rel = _need(q, "relation", p)
        xs = tuple(_id(x, f"{p}.tuple") for x in _list(_need(q, "tuple", p), f"{p}.tuple"))
        povm = {}
        for j, o in enumerate(_list(_need(q, "outcomes", p), f"{p}.outcomes")):
            op = f"{p}.outcomes[{j}]"
            ys = tuple(_id(y, f"{op}.tuple") for y in _list(_need(o, "tuple", op), f"{op}.tuple"))
            povm[ys] = matrix_from_json(_need(o, "matrix", op), f"{op}.matrix")
        alice[(rel, xs)] = povm
    bob = {}
    for i, q in enumerate(_list(_need(obj, "bob", path), f"{path}.bob")):
        p = f"{path}.bob[{i}]"
        x = _id(_need(q, "element", p), f"{p}.element")
        povm = {}
        for j, o in enumerate(_list(_need(q, "outcomes", p), f"{p}.outcomes")):
            op = f"{p}.outcomes[{j}]"
            povm[_id(_need(o, "value", op), f"{op}.value")] = matrix_from_json(_need(o, "matrix", op), f"{op}.matrix")
        bob[x] = povm
    try:
        return Strategy(dim_a, dim_b, state, alice, bob)
    except ValueError as e:
        raise SchemaError(path, str(e)) from None


def strategy_to_json(s: Strategy) -> dict:
    return {
        "dimA": s.dim_a,
        "dimB": s.dim_b,
        "state": state_to_json(s.state),
        "alice": [
            {
                "relation": rel,
                "tuple": [_enc_id(x) for x in xs],
                "outcomes": [{"tuple": [_enc_id(y) for y in ys], "matrix": matrix_to_json(m)} for ys, m in povm.items()],
            }
            for (rel, xs), povm in s.alice.items()
        ],
        "bob": [
            {"element": _enc_id(x), "outcomes": [{"value": _enc_id(y), "matrix": matrix_to_json(m)} for y, m in povm.items()]}
            for x, povm in s.bob.items()
        ],
    }


# CSPs, empirical models, BCSs ------------------------------------------------------------


def csp_from_json(obj, path: str = "$") -> CSPInstance:
    variables = [_id(v, f"{path}.variables[{i}]") for i, v in enumerate(_list(_need(obj, "variables", path), f"{path}.variables"))]
    domain = [_id(v, f"{path}.domain[{i}]") for i, v in enumerate(_list(_need(obj, "domain", path), f"{path}.domain"))]
    cons = []
    for i, c in enumerate(_list(_need(obj, "constraints", path), f"{path}.constraints")):
        p = f"{path}.constraints[{i}]"
        scope = tuple(_id(v, f"{p}.scope") for v in _list(_need(c, "scope", p), f"{p}.scope"))
        allowed = [tuple(_id(v, f"{p}.allowed[{j}]") for v in _list(t, f"{p}.allowed[{j}]")) for j, t in enumerate(_list(_need(c, "allowed", p), f"{p}.allowed"))]
        try:
            cons.append(Constraint(scope, allowed))
        except ValueError as e:
            raise SchemaError(p, str(e)) from None
    try:
        return CSPInstance(variables, domain, cons)
    except ValueError as e:
        raise SchemaError(path, str(e)) from None


def _sorted_tuples(tuples, order: dict) -> list:
    return sorted(tuples, key=lambda t: [order.get(v, len(order)) for v in t])


def csp_to_json(k: CSPInstance) -> dict:
    order = {v: i for i, v in enumerate(k.domain)}
    return {
        "variables": [_enc_id(v) for v in k.variables],
        "domain": [_enc_id(v) for v in k.domain],
        "constraints": [
            {"scope": [_enc_id(v) for v in c.scope], "allowed": [[_enc_id(v) for v in t] for t in _sorted_tuples(c.allowed, order)]}
            for c in k.constraints
        ],
    }


def _assignment(obj, members: tuple, path: str) -> tuple:
    if isinstance(obj, dict):
        if set(obj) != set(members):
            raise SchemaError(path, f"assignment must cover exactly {list(members)}")
        return tuple(_id(obj[m], f"{path}.{m}") for m in members)
    vals = _list(obj, path)
    if len(vals) != len(members):
        raise SchemaError(path, f"assignment must have {len(members)} values")
    return tuple(_id(v, f"{path}[{i}]") for i, v in enumerate(vals))


def empirical_from_json(obj, path: str = "$") -> EmpiricalModel:
    """Supports are lists of assignments; ``probabilities`` tables are reduced to their supports."""
    measurements = [_id(v, f"{path}.measurements[{i}]") for i, v in enumerate(_list(_need(obj, "measurements", path), f"{path}.measurements"))]
    outcomes = [_id(v, f"{path}.outcomes[{i}]") for i, v in enumerate(_list(_need(obj, "outcomes", path), f"{path}.outcomes"))]
    ctxs = []
    for i, c in enumerate(_list(_need(obj, "contexts", path), f"{path}.contexts")):
        p = f"{path}.contexts[{i}]"
        members = tuple(_id(m, f"{p}.members") for m in _list(_need(c, "members", p), f"{p}.members"))
        sup = set()
        if "probabilities" in c:
            for j, entry in enumerate(_list(c["probabilities"], f"{p}.probabilities")):
                ep = f"{p}.probabilities[{j}]"
                s = _assignment(_need(entry, "assignment", ep), members, f"{ep}.assignment")
                raw = _need(entry, "p", ep)
                if isinstance(raw, float):
                    keep = raw > 1e-12
                else:
                    keep = _rational(raw, f"{ep}.p") != 0
                if keep:
                    sup.add(s)
        else:
            for j, s in enumerate(_list(_need(c, "support", p), f"{p}.support")):
                sup.add(_assignment(s, members, f"{p}.support[{j}]"))
        ctxs.append(Context(members, frozenset(sup)))
    try:
        return EmpiricalModel(measurements, outcomes, ctxs)
    except ValueError as e:
        raise SchemaError(path, str(e)) from None


def empirical_to_json(e: EmpiricalModel) -> dict:
    order = {o: i for i, o in enumerate(e.outcomes)}
    return {
        "measurements": [_enc_id(x) for x in e.measurements],
        "outcomes": [_enc_id(o) for o in e.outcomes],
        "contexts": [
            {
                "members": [_enc_id(m) for m in c.members],
                "support": [{m: _enc_id(o) for m, o in zip(c.members, s)} for s in _sorted_tuples(c.support, order)],
            }
            for c in e.contexts
        ],
    }


def bcs_from_json(obj, path: str = "$") -> BCS:
    variables = [_id(v, f"{path}.variables[{i}]") for i, v in enumerate(_list(_need(obj, "variables", path), f"{path}.variables"))]
    cons = []
    for i, c in enumerate(_list(_need(obj, "constraints", path), f"{path}.constraints")):
        p = f"{path}.constraints[{i}]"
        scope = tuple(_id(v, f"{p}.scope") for v in _list(_need(c, "scope", p), f"{p}.scope"))
        table_obj = _need(c, "table", p)
        if not isinstance(table_obj, dict):
            raise SchemaError(f"{p}.table", "expected an object mapping bitstrings to 0|1")
        table = {}
        for bits, val in table_obj.items():
            tp = f"{p}.table.{bits}"
            if len(bits) != len(scope) or set(bits) - {"0", "1"}:
                raise SchemaError(tp, f"expected a bitstring of length {len(scope)}")
            if val not in (0, 1) or isinstance(val, bool):
                raise SchemaError(tp, f"table values are 0 or 1, got {val!r}")
            table[tuple(int(b) for b in bits)] = val
        try:
            cons.append(BoolConstraint(scope, table))
        except ValueError as e:
            raise SchemaError(p, str(e)) from None
    try:
        return BCS(variables, cons)
    except ValueError as e:
        raise SchemaError(path, str(e)) from None


def bcs_to_json(b: BCS) -> dict:
    return {
        "variables": [_enc_id(v) for v in b.variables],
        "constraints": [
            {"scope": [_enc_id(v) for v in c.scope], "table": {"".join(map(str, bits)): val for bits, val in c.table}}
            for c in b.constraints
        ],
    }


def opsol_from_json(obj, path: str = "$") -> OperatorSolution:
    dim = _int(_need(obj, "dim", path), f"{path}.dim")
    assignment = _need(obj, "assignment", path)
    if not isinstance(assignment, dict):
        raise SchemaError(f"{path}.assignment", "expected an object mapping variables to matrices")
    return OperatorSolution(dim, {x: matrix_from_json(m, f"{path}.assignment.{x}") for x, m in assignment.items()})


def opsol_to_json(s: OperatorSolution) -> dict:
    return {"dim": s.dim, "assignment": {x: matrix_to_json(m) for x, m in s.assignment.items()}}


def pvms_from_json(obj, path: str = "$") -> dict:
    table = _need(obj, "pvms", path)
    if not isinstance(table, dict):
        raise SchemaError(f"{path}.pvms", "expected an object")
    out = {}
    for x, povm in table.items():
        if not isinstance(povm, dict):
            raise SchemaError(f"{path}.pvms.{x}", "expected an object mapping outcomes to matrices")
        out[x] = {o: matrix_from_json(m, f"{path}.pvms.{x}.{o}") for o, m in povm.items()}
    return out


def pvms_to_json(pvms: dict) -> dict:
    return {"pvms": {x: {o: matrix_to_json(m) for o, m in povm.items()} for x, povm in pvms.items()}}


def map_from_json(obj, path: str = "$") -> dict:
    mapping = _need(obj, "mapping", path)
    if not isinstance(mapping, dict):
        raise SchemaError(f"{path}.mapping", "expected an object")
    return {x: _id(y, f"{path}.mapping.{x}") for x, y in mapping.items()}


def map_to_json(f) -> dict:
    mapping = f.mapping if isinstance(f, Homomorphism) else f
    return {"mapping": {x: _enc_id(y) for x, y in mapping.items()}}


# dispatch -----------------------------------------------------------------------------


def detect_kind(obj) -> str:
    if not isinstance(obj, dict):
        raise SchemaError("$", "top level must be an object")
    keys = set(obj)
    if "signature" in keys:
        return "structure"
    if "vertices" in keys:
        return "graph"
    if "domain" in keys:
        return "csp"
    if "contexts" in keys:
        return "empirical"
    if "variables" in keys:
        return "bcs"
    if "dimA" in keys:
        return "strategy"
    if "projectors" in keys:
        return "certificate" if "source" in keys else "mr-certificate"
    if "assignment" in keys:
        return "operator-solution"
    if "pvms" in keys:
        return "pvms"
    if "entries" in keys and "rows" in keys:
        return "matrix"
    if "entries" in keys or "floatEntries" in keys:
        return "state"
    if "mapping" in keys:
        return "map"
    raise SchemaError("$", f"cannot tell what kind of file this is (fields: {sorted(keys)})")


def from_json(obj, kind: str | None = None, base_dir: str | None = None):
    kind = kind or detect_kind(obj)
    decoders = {
        "structure": structure_from_json,
        "graph": graph_from_json,
        "csp": csp_from_json,
        "empirical": empirical_from_json,
        "bcs": bcs_from_json,
        "strategy": strategy_from_json,
        "mr-certificate": mr_from_json,
        "operator-solution": opsol_from_json,
        "pvms": pvms_from_json,
        "state": state_from_json,
        "map": map_from_json,
        "matrix": matrix_from_json,
    }
    if kind == "certificate":
        return cert_from_json(obj, base_dir=base_dir)
    if kind not in decoders:
        raise ValueError(f"unknown file kind {kind!r}")
    return decoders[kind](obj)


def to_json(obj, kind: str | None = None) -> dict:
    if kind is None:
        kind = kind_of(obj)
    encoders = {
        "structure": structure_to_json,
        "graph": graph_to_json,
        "csp": csp_to_json,
        "empirical": empirical_to_json,
        "bcs": bcs_to_json,
        "certificate": cert_to_json,
        "strategy": strategy_to_json,
        "mr-certificate": mr_to_json,
        "operator-solution": opsol_to_json,
        "pvms": pvms_to_json,
        "map": map_to_json,
        "matrix": matrix_to_json,
    }
    if kind == "state":
        return state_to_json(obj)
    return encoders[kind](obj)


def kind_of(obj) -> str:
    if isinstance(obj, Structure):
        return "structure"
    for cls, kind in (
        (CSPInstance, "csp"),
        (EmpiricalModel, "empirical"),
        (BCS, "bcs"),
        (QHomCert, "certificate"),
        (Strategy, "strategy"),
        (MRCert, "mr-certificate"),
        (OperatorSolution, "operator-solution"),
        (Homomorphism, "map"),
    ):
        if isinstance(obj, cls):
            return kind
    if isinstance(obj, Matrix):
        return "state" if obj.cols == 1 else "matrix"
    if isinstance(obj, dict) and obj and all(isinstance(v, dict) for v in obj.values()):
        return "pvms"
    raise TypeError(f"no file format for {type(obj).__name__}")


def _compact(obj, indent: int = 0, width: int = 100) -> str:
    flat = json.dumps(obj, ensure_ascii=False)
    if len(flat) + indent <= width or not isinstance(obj, (dict, list)) or not obj:
        return flat
    pad = " " * (indent + 2)
    if isinstance(obj, dict):
        items = [f"{pad}{json.dumps(k, ensure_ascii=False)}: {_compact(v, indent + 2, width)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + " " * indent + "}"
    items = [f"{pad}{_compact(v, indent + 2, width)}" for v in obj]
    return "[\n" + ",\n".join(items) + "\n" + " " * indent + "]"


def dumps(obj, kind: str | None = None) -> str:
    """Canonical text form; short records stay on one line."""
    return _compact(to_json(obj, kind)) + "\n"


def loads(text: str, kind: str | None = None, base_dir: str | None = None):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(f"line {e.lineno} column {e.colno}", e.msg) from None
    return from_json(obj, kind, base_dir)


def load(path: str, kind: str | None = None):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return loads(text, kind, base_dir=os.path.dirname(os.path.abspath(path)))


def save(obj, path: str, kind: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj, kind))


def resolve(ref: str, kind: str | None = None, base_dir: str | None = None) -> Any:
    """``catalog:ID`` gives the catalog payload; anything else is a file path."""
    if ref.startswith(CATALOG_PREFIX):
        return catalog_get(ref[len(CATALOG_PREFIX):]).payload
    if base_dir and not os.path.isabs(ref):
        ref = os.path.join(base_dir, ref)
    return load(ref, kind)


# aliases matching the documented operation names
parse = load
serialize = save
