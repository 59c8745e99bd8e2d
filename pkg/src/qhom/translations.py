"""Translations between CSPs, structures, empirical models, BCS and graphs.

Classical side: a CSP instance turns into a pair of structures whose
homomorphisms are its solutions, and back. Empirical models become CSPs
through their supports, so strong contextuality is unsatisfiability.

Quantum side: families of PVMs indexed by variables are checked as
quantum solutions by building the certificate on the translated pair and
handing it to :func:`qhom.qmonad.verify_qhom`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .linalg import EXACT, Matrix, commutator, default_tol, is_hermitian, is_projector, matrix_sum
from .qmonad import QHomCert, verify_qhom
from .report import PreconditionError, Report
from .structures import (
    EDGE,
    Signature,
    Structure,
    adjacent,
    check_signatures,
    find_homomorphism,
    is_simple_graph,
)

BOOL = ("0", "1")
PVMs = Mapping[object, Mapping[object, Matrix]]


# CSP <-> structures ----------------------------------------------------------


@dataclass(frozen=True)
class Constraint:
    scope: tuple
    allowed: frozenset

    def __post_init__(self):
        object.__setattr__(self, "scope", tuple(self.scope))
        object.__setattr__(self, "allowed", frozenset(tuple(t) for t in self.allowed))
        if not self.scope:
            raise ValueError("constraint scopes must be non-empty")
        for t in self.allowed:
            if len(t) != len(self.scope):
                raise ValueError(f"allowed tuple {t} does not match scope {self.scope}")


@dataclass(frozen=True)
class CSPInstance:
    variables: tuple
    domain: tuple
    constraints: tuple

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "domain", tuple(self.domain))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        vs, ds = set(self.variables), set(self.domain)
        for c in self.constraints:
            if not set(c.scope) <= vs:
                raise ValueError(f"scope {c.scope} uses undeclared variables")
            for t in c.allowed:
                if not set(t) <= ds:
                    raise ValueError(f"allowed tuple {t} uses values outside the domain")

    def is_solution(self, s: Mapping) -> bool:
        return all(tuple(s[v] for v in c.scope) in c.allowed for c in self.constraints)

    def solutions(self) -> list[dict]:
        """All solutions by exhaustive enumeration, in lexicographic order."""
        out = []
        for values in itertools.product(self.domain, repeat=len(self.variables)):
            s = dict(zip(self.variables, values))
            if self.is_solution(s):
                out.append(s)
        return out


def relation_name(i: int) -> str:
    return f"R{i}"


def csp_to_pair(k: CSPInstance) -> tuple[Structure, Structure]:
    """Structures ``(A, B)`` with one relation per constraint: ``A`` holds the scope, ``B`` the allowed tuples."""
    sig = Signature(tuple((relation_name(i), len(c.scope)) for i, c in enumerate(k.constraints)))
    a = Structure(sig, k.variables, {relation_name(i): [c.scope] for i, c in enumerate(k.constraints)})
    b = Structure(sig, k.domain, {relation_name(i): c.allowed for i, c in enumerate(k.constraints)})
    return a, b


def pair_to_csp(a: Structure, b: Structure) -> CSPInstance:
    """One constraint ``(xs, R^B)`` for every tuple ``xs`` of every relation of ``A``."""
    check_signatures(a, b)
    cons = [Constraint(xs, b.relations[name]) for name in a.signature.names for xs in a.sorted_tuples(name)]
    return CSPInstance(a.universe, b.universe, cons)


def csp_is_satisfiable(k: CSPInstance) -> bool:
    a, b = csp_to_pair(k)
    return find_homomorphism(a, b) is not None


# empirical models --------------------------------------------------------------


@dataclass(frozen=True)
class Context:
    """A context; ``support`` lists outcome tuples aligned with ``members``."""

    members: tuple
    support: frozenset

    def allows(self, assignment: Mapping) -> bool:
        return tuple(assignment[m] for m in self.members) in self.support


@dataclass(frozen=True)
class EmpiricalModel:
    measurements: tuple
    outcomes: tuple
    contexts: tuple

    def __post_init__(self):
        object.__setattr__(self, "measurements", tuple(self.measurements))
        object.__setattr__(self, "outcomes", tuple(self.outcomes))
        order = {x: i for i, x in enumerate(self.measurements)}
        fixed = []
        for c in self.contexts:
            if not set(c.members) <= set(order):
                raise ValueError(f"context {c.members} uses undeclared measurements")
            perm = sorted(range(len(c.members)), key=lambda i: order[c.members[i]])
            members = tuple(c.members[i] for i in perm)
            support = frozenset(tuple(s[i] for i in perm) for s in c.support)
            for s in support:
                if len(s) != len(members) or not set(s) <= set(self.outcomes):
                    raise ValueError(f"support entry {s} is not an assignment on {members}")
            fixed.append(Context(members, support))
        object.__setattr__(self, "contexts", tuple(fixed))
        covered = set().union(*(set(c.members) for c in fixed)) if fixed else set()
        if covered != set(self.measurements):
            raise ValueError("contexts must cover the declared measurements")

    def is_consistent(self, g: Mapping) -> bool:
        return all(c.allows(g) for c in self.contexts)


def make_context(members: Sequence, assignments) -> Context:
    """Context from assignments given as dicts or as tuples aligned with ``members``."""
    members = tuple(members)
    sup = set()
    for s in assignments:
        if isinstance(s, Mapping):
            sup.add(tuple(s[m] for m in members))
        else:
            sup.add(tuple(s))
    return Context(members, frozenset(sup))


def empirical_to_csp(e: EmpiricalModel) -> CSPInstance:
    """One constraint per context, scope in measurement order, allowed = support."""
    return CSPInstance(e.measurements, e.outcomes, [Constraint(c.members, c.support) for c in e.contexts])


def is_strongly_contextual(e: EmpiricalModel) -> bool:
    """No global assignment agrees with every context's support."""
    a, b = csp_to_pair(empirical_to_csp(e))
    return find_homomorphism(a, b) is None


def full_support_model(measurements: Sequence, contexts: Sequence[Sequence], outcomes: Sequence = BOOL) -> EmpiricalModel:
    ctxs = [
        Context(tuple(c), frozenset(itertools.product(outcomes, repeat=len(c))))
        for c in contexts
    ]
    return EmpiricalModel(measurements, outcomes, ctxs)


def pr_box_model() -> EmpiricalModel:
    """Outputs equal unless both inputs are 1, in which case they differ."""
    xs = ("a0", "a1", "b0", "b1")
    ctxs = []
    for i in (0, 1):
        for j in (0, 1):
            sup = [(u, v) for u in BOOL for v in BOOL if (u != v) == (i == 1 and j == 1)]
            ctxs.append(Context((f"a{i}", f"b{j}"), frozenset(sup)))
    return EmpiricalModel(xs, BOOL, ctxs)


def bell_scenario_contexts() -> list[tuple]:
    return [(f"a{i}", f"b{j}") for i in (0, 1) for j in (0, 1)]


def expectation(state: Matrix, m: Matrix):
    """``psi^* M psi`` (unnormalized), real part only."""
    v = (state.H @ m @ state)[0, 0]
    if state.backend == EXACT:
        if v.im:
            raise ValueError("expectation of a self-adjoint operator has an imaginary part")
        return v.re
    return float(v.real)


def context_projector(pvms: PVMs, members: Sequence, outcome: Sequence) -> Matrix:
    acc = pvms[members[0]][outcome[0]]
    for x, o in zip(members[1:], outcome[1:]):
        acc = acc @ pvms[x][o]
    return acc


def empirical_from_quantum(
    measurements: Sequence,
    contexts: Sequence[Sequence],
    outcomes: Sequence,
    state: Matrix,
    pvms: PVMs,
    tol: float = 1e-12,
) -> EmpiricalModel:
    """Support model generated by measuring ``state``: an outcome is possible iff its probability is non-zero.

    Exact states use an exact zero test; float states the threshold ``tol``.
    """
    ctxs = []
    for members in contexts:
        members = tuple(members)
        sup = []
        for o in itertools.product(outcomes, repeat=len(members)):
            p = expectation(state, _pvm_product(pvms, members, o, state))
            if (p != 0) if state.backend == EXACT else p > tol:
                sup.append(o)
        ctxs.append(Context(members, frozenset(sup)))
    return EmpiricalModel(measurements, outcomes, ctxs)


def _pvm_product(pvms: PVMs, members, outcome, like: Matrix) -> Matrix:
    d = like.rows
    out = Matrix.identity(d, like.backend)
    for x, o in zip(members, outcome):
        m = pvms[x].get(o)
        if m is None:
            return Matrix.zeros(d, d, like.backend)
        out = out @ m
    return out


def check_pvms(e: EmpiricalModel, pvms: PVMs, tol: float | None = None) -> None:
    """Raise unless every measurement is a PVM and context-mates commute."""
    d = None
    for x in e.measurements:
        if x not in pvms:
            raise PreconditionError(f"no measurement given for {x!r}")
        for o, m in pvms[x].items():
            if o not in e.outcomes:
                raise PreconditionError(f"outcome {o!r} of {x!r} is not declared")
            if d is None:
                d = m.rows
            if m.shape != (d, d):
                raise PreconditionError(f"effect {x!r}->{o!r} has shape {m.shape}, expected {d}x{d}")
            if not is_projector(m, tol):
                raise PreconditionError(f"measurement {x!r} is not projective (outcome {o!r})")
        total = matrix_sum(pvms[x].values())
        if not total.equals(Matrix.identity(d, total.backend), tol):
            raise PreconditionError(f"effects of {x!r} do not sum to the identity")
    for c in e.contexts:
        for x, x2 in itertools.combinations(c.members, 2):
            for p in pvms[x].values():
                for q in pvms[x2].values():
                    if not commutator(p, q).is_zero(tol):
                        raise PreconditionError(f"{x!r} and {x2!r} share a context but do not commute")


def _forbidden(e: EmpiricalModel):
    for c in e.contexts:
        for o in itertools.product(e.outcomes, repeat=len(c.members)):
            if o not in c.support:
                yield c, o


def check_state_witness(e: EmpiricalModel, state: Matrix, pvms: PVMs, tol: float | None = None) -> Report:
    """Every assignment outside the support has probability exactly zero on ``state``."""
    check_pvms(e, pvms, tol)
    tol_v = default_tol() if tol is None else tol
    rep = Report()
    for c, o in _forbidden(e):
        p = expectation(state, _pvm_product(pvms, c.members, o, state))
        if (p != 0) if state.backend == EXACT else abs(p) > tol_v:
            rep.add("witness", f"{c.members}={o}", f"forbidden outcome has weight {p}")
    return rep


def check_state_independent_witness(e: EmpiricalModel, pvms: PVMs, tol: float | None = None) -> Report:
    """Every product projector of an assignment outside the support is the zero matrix."""
    check_pvms(e, pvms, tol)
    rep = Report()
    any_m = next(iter(next(iter(pvms.values())).values()))
    for c, o in _forbidden(e):
        if not _pvm_product(pvms, c.members, o, any_m).is_zero(tol):
            rep.add("witness", f"{c.members}={o}", "forbidden product projector is non-zero")
    return rep


def pvms_to_cert(a: Structure, b: Structure, pvms: PVMs) -> QHomCert:
    """Certificate ``P[x, o] = pvms[x][o]`` on a translated pair."""
    dims = {m.rows for povm in pvms.values() for m in povm.values()}
    if len(dims) != 1:
        raise ValueError(f"measurements have inconsistent dimensions {sorted(dims)}")
    (d,) = dims
    cells = {(x, o): m for x, povm in pvms.items() for o, m in povm.items()}
    return QHomCert(d, a, b, cells)


def witness_to_cert(e: EmpiricalModel, pvms: PVMs) -> QHomCert:
    a, b = csp_to_pair(empirical_to_csp(e))
    return pvms_to_cert(a, b, pvms)


# binary constraint systems ---------------------------------------------------------


@dataclass(frozen=True)
class BoolConstraint:
    """``table[bits] = 1`` marks the satisfying assignments of the scope."""

    scope: tuple
    table: tuple  # ((bits, value), ...) over all of {0,1}^k in lexicographic order

    def __post_init__(self):
        object.__setattr__(self, "scope", tuple(self.scope))
        entries = dict(self.table.items()) if isinstance(self.table, Mapping) else dict(self.table)
        k = len(self.scope)
        if not k:
            raise ValueError("constraint scopes must be non-empty")
        full = list(itertools.product((0, 1), repeat=k))
        missing = [b for b in full if b not in entries]
        if missing:
            raise ValueError(f"truth table for {self.scope} is missing rows {missing[:4]}")
        if set(entries) - set(full):
            raise ValueError(f"truth table for {self.scope} has rows of the wrong length")
        object.__setattr__(self, "table", tuple((b, int(entries[b])) for b in full))

    def __call__(self, bits: Sequence[int]) -> int:
        return dict(self.table)[tuple(bits)]

    def satisfying(self) -> frozenset:
        return frozenset(b for b, v in self.table if v)


@dataclass(frozen=True)
class BCS:
    variables: tuple
    constraints: tuple

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        vs = set(self.variables)
        for c in self.constraints:
            if not set(c.scope) <= vs:
                raise ValueError(f"scope {c.scope} uses undeclared variables")


def bool_constraint(scope: Sequence, fn) -> BoolConstraint:
    k = len(scope)
    return BoolConstraint(tuple(scope), {b: int(bool(fn(b))) for b in itertools.product((0, 1), repeat=k)})


def parity_constraint(scope: Sequence, parity: int) -> BoolConstraint:
    """Satisfied iff the XOR of the scope equals ``parity``."""
    return bool_constraint(scope, lambda b: sum(b) % 2 == parity)


def bcs_to_csp(bcs: BCS) -> CSPInstance:
    cons = [
        Constraint(c.scope, frozenset(tuple(BOOL[v] for v in bits) for bits in c.satisfying()))
        for c in bcs.constraints
    ]
    return CSPInstance(bcs.variables, BOOL, cons)


def bcs_brute_force_satisfiable(bcs: BCS) -> bool:
    """Vectorized enumeration of all ``2^n`` assignments."""
    n = len(bcs.variables)
    if n > 24:
        raise ValueError("too many variables for exhaustive enumeration")
    idx = {v: i for i, v in enumerate(bcs.variables)}
    codes = np.arange(2**n, dtype=np.int64)
    bits = (codes[:, None] >> np.arange(n)[None, :]) & 1
    ok = np.ones(2**n, dtype=bool)
    for c in bcs.constraints:
        k = len(c.scope)
        row = np.zeros(2**n, dtype=np.int64)
        for v in c.scope:
            row = (row << 1) | bits[:, idx[v]]
        lut = np.array([val for _, val in c.table], dtype=bool)
        ok &= lut[row]
        if not ok.any():
            return False
    return bool(ok.any())


def magic_square_bcs() -> BCS:
    """Rows A B C / D E F / G H I; rows and first two columns even, last column odd."""
    vs = tuple("ABCDEFGHI")
    eqs = [("ABC", 0), ("DEF", 0), ("GHI", 0), ("ADG", 0), ("BEH", 0), ("CFI", 1)]
    return BCS(vs, [parity_constraint(tuple(s), p) for s, p in eqs])


@dataclass
class OperatorSolution:
    dim: int
    assignment: dict = field(default_factory=dict)


def _spectral(a: Matrix) -> dict:
    ident = Matrix.identity(a.rows, a.backend)
    half = Fraction(1, 2) if a.backend == EXACT else 0.5
    return {"0": (ident + a).scale(half), "1": (ident - a).scale(half)}


def operator_to_projectors(sol: OperatorSolution, tol: float | None = None) -> dict:
    """Spectral split ``A = P0 - P1``: ``P0 = (I + A)/2``, ``P1 = (I - A)/2``."""
    out = {}
    for x, a in sol.assignment.items():
        if not is_hermitian(a, tol) or not (a @ a).equals(Matrix.identity(a.rows, a.backend), tol):
            raise PreconditionError(f"operator for {x!r} is not a binary observable")
        out[x] = _spectral(a)
    return out


def projectors_to_operator(pvms: PVMs, tol: float | None = None) -> OperatorSolution:
    assignment = {}
    dim = None
    for x, pvm in pvms.items():
        if set(pvm) - set(BOOL):
            raise PreconditionError(f"measurement {x!r} has outcomes beyond 0/1")
        p0, p1 = pvm.get("0"), pvm.get("1")
        like = p0 if p0 is not None else p1
        zero = Matrix.zeros(like.rows, like.rows, like.backend)
        p0 = zero if p0 is None else p0
        p1 = zero if p1 is None else p1
        if not (is_projector(p0, tol) and is_projector(p1, tol)):
            raise PreconditionError(f"measurement {x!r} is not projective")
        if not (p0 + p1).equals(Matrix.identity(like.rows, like.backend), tol):
            raise PreconditionError(f"measurement {x!r} does not sum to the identity")
        assignment[x] = p0 - p1
        dim = like.rows
    return OperatorSolution(dim, assignment)


def constraint_operator(c: BoolConstraint, pvms: PVMs) -> Matrix:
    """``sum_o (-1)^{b(o)} P[xs, o]``; equals ``-I`` exactly when the constraint holds."""
    any_m = next(iter(pvms[c.scope[0]].values()))
    terms = []
    for bits, val in c.table:
        prod = _pvm_product(pvms, c.scope, tuple(BOOL[b] for b in bits), any_m)
        terms.append(prod if val == 0 else -prod)
    return matrix_sum(terms)


def verify_operator_solution(bcs: BCS, sol: OperatorSolution, tol: float | None = None) -> Report:
    """Binary self-adjoint operators, commuting within scopes, meeting every constraint.

    A constraint holds iff the product projector of each falsifying outcome
    vanishes.
    """
    rep = Report()
    missing = [x for x in bcs.variables if x not in sol.assignment]
    if missing:
        raise ValueError(f"no operator for variables {missing}")
    for x in bcs.variables:
        a = sol.assignment[x]
        if a.shape != (sol.dim, sol.dim):
            raise ValueError(f"operator for {x!r} has shape {a.shape}, expected {sol.dim}x{sol.dim}")
    ident = Matrix.identity(sol.dim, sol.assignment[bcs.variables[0]].backend)
    binary = True
    for x in bcs.variables:
        a = sol.assignment[x]
        if not is_hermitian(a, tol):
            rep.add("self-adjoint", x, "operator is not self-adjoint")
            binary = False
        if not (a @ a).equals(ident, tol):
            rep.add("binary", x, "A^2 != I")
            binary = False
    for i, c in enumerate(bcs.constraints):
        for x, x2 in itertools.combinations(dict.fromkeys(c.scope), 2):
            if not commutator(sol.assignment[x], sol.assignment[x2]).is_zero(tol):
                rep.add("commutation", f"constraint {i}", f"{x} and {x2} do not commute")
    if not binary:
        return rep
    pvms = {x: _spectral(sol.assignment[x]) for x in bcs.variables}
    for i, c in enumerate(bcs.constraints):
        for bits, val in c.table:
            if val:
                continue
            prod = _pvm_product(pvms, c.scope, tuple(BOOL[b] for b in bits), ident)
            if not prod.is_zero(tol):
                rep.add("constraint", f"constraint {i} {c.scope}", f"falsifying outcome {bits} has non-zero projector")
    return rep


def bcs_quantum_solution_verify(bcs: BCS, pvms: PVMs, tol: float | None = None) -> Report:
    """Quantum-solution check through the certificate on the translated pair."""
    a, b = csp_to_pair(bcs_to_csp(bcs))
    missing = [x for x in bcs.variables if x not in pvms]
    if missing:
        raise ValueError(f"no measurement for variables {missing}")
    cert = pvms_to_cert(a, b, {x: pvms[x] for x in bcs.variables})
    rep = verify_qhom(cert, tol)
    for v in rep.violations:
        if v.condition == "QH3":
            name = v.location.split("(")[0]
            idx = int(name[1:])
            rep.notes.setdefault("violated constraints", []).append(idx)
    return rep


# graphs -----------------------------------------------------------------------------


def r_var(x, y) -> str:
    return f"r[{x},{y}]"


def graph_pair_to_bcs(g: Structure, h: Structure) -> BCS:
    """Boolean system whose solutions are the homomorphisms ``g -> h``.

    Variables ``r[x,y]`` mean "x goes to y". Per source vertex: at least one
    image, at most one image; per edge of ``g`` and non-edge ``(y, y')`` of
    ``h`` (including ``y = y'``): not both ``r[x,y]`` and ``r[x',y']``.
    """
    if not (is_simple_graph(g) and is_simple_graph(h)):
        raise ValueError("graph_pair_to_bcs needs simple graphs")
    variables = [r_var(x, y) for x in g.universe for y in h.universe]
    cons: list[BoolConstraint] = []
    seen: set = set()

    def nand(u, v):
        return bool_constraint((u, v), lambda b: not (b[0] and b[1]))

    for x in g.universe:
        cons.append(bool_constraint(tuple(r_var(x, y) for y in h.universe), any))
        for y, y2 in itertools.combinations(h.universe, 2):
            cons.append(nand(r_var(x, y), r_var(x, y2)))
    for x in g.universe:
        for x2 in g.universe:
            if not adjacent(g, x, x2):
                continue
            for y in h.universe:
                for y2 in h.universe:
                    if adjacent(h, y, y2):
                        continue
                    key = frozenset(((x, y), (x2, y2)))
                    if key in seen:
                        continue
                    seen.add(key)
                    cons.append(nand(r_var(x, y), r_var(x2, y2)))
    return BCS(variables, cons)


@dataclass
class MRCert:
    dim: int
    projectors: dict = field(default_factory=dict)

    def __getitem__(self, key) -> Matrix:
        m = self.projectors.get(key)
        if m is None:
            backend = next(iter(self.projectors.values())).backend if self.projectors else EXACT
            return Matrix.zeros(self.dim, self.dim, backend)
        return m

    def equals(self, other: "MRCert", tol: float | None = None) -> bool:
        if self.dim != other.dim:
            return False
        keys = set(self.projectors) | set(other.projectors)
        return all(self[k].equals(other[k], tol) for k in keys)


def verify_mr(g: Structure, h: Structure, cert: MRCert, tol: float | None = None) -> Report:
    """Rows summing to the identity (MR1); ``P[x,y] P[x',y'] = 0`` for ``x ~ x'``, ``y !~ y'`` (MR2)."""
    rep = Report()
    ident = Matrix.identity(cert.dim, cert[(g.universe[0], h.universe[0])].backend)
    for (x, y), m in cert.projectors.items():
        if x not in g or y not in h:
            rep.add("domain", (x, y), "cell outside V(G) x V(H)")
        elif not is_projector(m, tol):
            rep.add("projector", (x, y), "not a projector")
    for x in g.universe:
        total = matrix_sum((cert[(x, y)] for y in h.universe), like=ident)
        if not total.equals(ident, tol):
            rep.add("MR1", x, "row does not sum to the identity")
    for x in g.universe:
        for x2 in g.universe:
            if not adjacent(g, x, x2):
                continue
            for y in h.universe:
                for y2 in h.universe:
                    if adjacent(h, y, y2):
                        continue
                    if not (cert[(x, y)] @ cert[(x2, y2)]).is_zero(tol):
                        rep.add("MR2", f"P[{x},{y}]P[{x2},{y2}]", "non-zero product on edge -> non-edge")
    return rep


def mr_to_bcs_solution(g: Structure, h: Structure, cert: MRCert, tol: float | None = None) -> dict:
    """``Q[r[x,y], 1] = P[x,y]`` and ``Q[r[x,y], 0] = I - P[x,y]``."""
    rep = verify_mr(g, h, cert, tol)
    if not rep:
        raise PreconditionError(f"MR certificate does not verify:\n{rep.summary()}")
    ident = Matrix.identity(cert.dim, cert[(g.universe[0], h.universe[0])].backend)
    out = {}
    for x in g.universe:
        for y in h.universe:
            p = cert[(x, y)]
            out[r_var(x, y)] = {"0": ident - p, "1": p}
    return out


def bcs_solution_to_mr(g: Structure, h: Structure, pvms: PVMs, tol: float | None = None) -> MRCert:
    """Inverse of :func:`mr_to_bcs_solution`: ``P[x,y] = Q[r[x,y], 1]``."""
    rep = bcs_quantum_solution_verify(graph_pair_to_bcs(g, h), pvms, tol)
    if not rep:
        raise PreconditionError(f"not a quantum solution of the graph BCS:\n{rep.summary()}")
    some = next(iter(next(iter(pvms.values())).values()))
    cells = {}
    for x in g.universe:
        for y in h.universe:
            m = pvms[r_var(x, y)].get("1")
            cells[(x, y)] = m if m is not None else Matrix.zeros(some.rows, some.rows, some.backend)
    return MRCert(some.rows, {k: m for k, m in cells.items() if not m.is_zero(0.0)})


def cert_as_mr(c: QHomCert) -> MRCert:
    return MRCert(c.dim, dict(c.projectors))


@dataclass
class GraphQHomReport:
    qhom: Report
    mr: Report

    @property
    def passed(self) -> bool:
        return self.qhom.passed

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {"pass": self.passed, "qhom": self.qhom.to_dict(), "mr": self.mr.to_dict()}

    def summary(self) -> str:
        return (
            f"quantum homomorphism: {self.qhom.summary()}\n"
            f"MR conditions: {'hold' if self.mr.passed else 'fail'}"
        )


def verify_graph_qhom(g: Structure, h: Structure, cert: QHomCert, tol: float | None = None) -> GraphQHomReport:
    if cert.source != g or cert.target != h:
        raise ValueError("certificate is not between the given graphs")
    if g.signature.names != (EDGE,):
        raise ValueError("graphs are structures over the single binary relation E")
    return GraphQHomReport(verify_qhom(cert, tol), verify_mr(g, h, cert_as_mr(cert), tol))
