"""Built-in canonical instances, addressable as ``catalog:ID``.

Every entry is checked by the verifier of its kind when it is first
built, so a broken entry fails loudly instead of feeding bad data to a
demo.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .games import (
    check_perfect,
    diagonal_state,
    strategy_from_cert,
    validate_strategy,
    with_state,
)
from .linalg import Matrix, kron_all, pauli, pauli_string
from .qmonad import QHomCert, lift, verify_qhom
from .report import Report
from .sampling import direct_sum_cert
from .structures import (
    Homomorphism,
    Structure,
    complete_bipartite,
    complete_graph,
    cycle_graph,
    is_simple_graph,
)
from .translations import (
    Context,
    EmpiricalModel,
    OperatorSolution,
    bcs_to_csp,
    check_pvms,
    check_state_independent_witness,
    check_state_witness,
    csp_to_pair,
    empirical_from_quantum,
    full_support_model,
    bell_scenario_contexts,
    magic_square_bcs,
    operator_to_projectors,
    pr_box_model,
    pvms_to_cert,
    verify_operator_solution,
)

KINDS = (
    "structure",
    "csp",
    "bcs",
    "empirical",
    "certificate",
    "strategy",
    "graph",
    "state",
    "pvms",
    "operator-solution",
)

MAGIC_WORDS = ("ZI", "IZ", "ZZ", "IX", "XI", "XX", "ZX", "XZ", "YY")
GHZ_CONTEXTS = (("X", "X", "X"), ("X", "Y", "Y"), ("Y", "X", "Y"), ("Y", "Y", "X"))


class UnknownEntry(KeyError):
    pass


@dataclass
class CatalogEntry:
    id: str
    kind: str
    payload: object
    provenance: str
    refs: dict = field(default_factory=dict)


def _half(m: Matrix) -> Matrix:
    return m.scale(Fraction(1, 2))


def _binary_pvm(a: Matrix) -> dict:
    ident = Matrix.identity(a.rows)
    return {"0": _half(ident + a), "1": _half(ident - a)}


# builders ---------------------------------------------------------------------


def magic_square_opsol() -> OperatorSolution:
    return OperatorSolution(4, dict(zip("ABCDEFGHI", (pauli_string(w) for w in MAGIC_WORDS))))


def magic_square_pair() -> tuple[Structure, Structure]:
    return csp_to_pair(bcs_to_csp(magic_square_bcs()))


def magic_square_pvms() -> dict:
    return operator_to_projectors(magic_square_opsol())


def magic_square_cert() -> QHomCert:
    a, b = magic_square_pair()
    return pvms_to_cert(a, b, magic_square_pvms())


def magic_square_model() -> EmpiricalModel:
    """Support model of the square: each row/column allows exactly its satisfying assignments."""
    bcs = magic_square_bcs()
    ctxs = [
        Context(c.scope, frozenset(tuple(str(v) for v in bits) for bits in c.satisfying()))
        for c in bcs.constraints
    ]
    return EmpiricalModel(bcs.variables, ("0", "1"), ctxs)


def ghz_measurements() -> tuple:
    return tuple(f"{p}{o}" for p in "abc" for o in "XY")


def ghz_state() -> Matrix:
    """Unnormalized ``|000> + |111>``."""
    return Matrix.column([1, 0, 0, 0, 0, 0, 0, 1])


def ghz_pvms() -> dict:
    out = {}
    ident = pauli("I")
    for k, party in enumerate("abc"):
        for obs in "XY":
            pvm = _binary_pvm(pauli(obs))
            out[f"{party}{obs}"] = {
                o: kron_all([p if i == k else ident for i in range(3)]) for o, p in pvm.items()
            }
    return out


def ghz_contexts() -> list[tuple]:
    return [tuple(f"{p}{o}" for p, o in zip("abc", ctx)) for ctx in GHZ_CONTEXTS]


def ghz_model() -> EmpiricalModel:
    return empirical_from_quantum(ghz_measurements(), ghz_contexts(), ("0", "1"), ghz_state(), ghz_pvms())


def weighted_magic_square_strategy():
    """Two copies of the square strategy side by side, shared state weighted (2,2,2,2,1,1,1,1)."""
    c = direct_sum_cert(magic_square_cert(), magic_square_cert())
    s = strategy_from_cert(c)
    return with_state(s, diagonal_state([2] * 4 + [1] * 4))


def k3_rotation() -> QHomCert:
    k3 = complete_graph(3)
    f = Homomorphism(k3, k3, {"v1": "v2", "v2": "v3", "v3": "v1"})
    return lift(f)


def c5_colouring() -> QHomCert:
    c5, k3 = cycle_graph(5), complete_graph(3)
    f = Homomorphism(c5, k3, {"v1": "v1", "v2": "v2", "v3": "v1", "v4": "v2", "v5": "v3"})
    return lift(f)


def k33_to_k2() -> QHomCert:
    k33, k2 = complete_bipartite(3, 3), complete_graph(2)
    f = Homomorphism(k33, k2, {x: ("v1" if x.startswith("a") else "v2") for x in k33.universe})
    return lift(f)


# verification -----------------------------------------------------------------


def _verify(entry: CatalogEntry) -> Report:
    p = entry.payload
    kind = entry.kind
    if kind == "certificate":
        return verify_qhom(p)
    if kind == "strategy":
        a, b = _pair(entry)
        rep = validate_strategy(p, a, b)
        rep.extend(check_perfect(p, a, b))
        return rep
    if kind == "graph":
        rep = Report()
        if not is_simple_graph(p):
            rep.add("graph", entry.id, "not a simple graph")
        return rep
    if kind == "operator-solution":
        return verify_operator_solution(catalog_get(entry.refs["bcs"]).payload, p)
    if kind == "pvms":
        model = catalog_get(entry.refs["model"]).payload
        check_pvms(model, p)
        if "state" in entry.refs:
            return check_state_witness(model, catalog_get(entry.refs["state"]).payload, p)
        return check_state_independent_witness(model, p)
    if kind == "state":
        rep = Report()
        if p.is_zero(0.0):
            rep.add("state", entry.id, "zero state")
        return rep
    if kind == "empirical" and "expected_support" in entry.refs:
        rep = Report()
        want = entry.refs["expected_support"]
        for c in p.contexts:
            if len(c.support) != want:
                rep.add("support", c.members, f"{len(c.support)} assignments, expected {want}")
        return rep
    # structures, CSPs, BCSs and models validate on construction
    return Report()


def _pair(entry: CatalogEntry) -> tuple[Structure, Structure]:
    return catalog_get(entry.refs["source"]).payload, catalog_get(entry.refs["target"]).payload


_BUILDERS: dict[str, tuple[str, Callable[[], object], str, dict]] = {
    "magic-square-bcs": ("bcs", magic_square_bcs, "Mermin-Peres magic square: rows and first two columns even, last column odd", {}),
    "magic-square-A": ("structure", lambda: magic_square_pair()[0], "source structure of the magic-square CSP (one ternary relation per equation)", {}),
    "magic-square-B": ("structure", lambda: magic_square_pair()[1], "target structure of the magic-square CSP (parity relations on {0,1})", {}),
    "magic-square-opsol": ("operator-solution", magic_square_opsol, "two-qubit Pauli operator solution of the magic square", {"bcs": "magic-square-bcs"}),
    "magic-square-model": ("empirical", magic_square_model, "support model of the magic square: rows and columns as contexts", {}),
    "magic-square-pvms": ("pvms", magic_square_pvms, "spectral projectors of the Pauli operator solution", {"model": "magic-square-model"}),
    "magic-square-cert": ("certificate", magic_square_cert, "d=4 quantum homomorphism derived from the operator solution", {}),
    "magic-square-strategy": (
        "strategy",
        lambda: strategy_from_cert(magic_square_cert()),
        "perfect strategy from the d=4 certificate and the maximally entangled state",
        {"source": "magic-square-A", "target": "magic-square-B"},
    ),
    "magic-square-weighted-strategy": (
        "strategy",
        weighted_magic_square_strategy,
        "perfect strategy in 8x8 with a non-maximally entangled diagonal state",
        {"source": "magic-square-A", "target": "magic-square-B"},
    ),
    "ghz-state": ("state", ghz_state, "unnormalized three-qubit GHZ state", {}),
    "ghz-model": ("empirical", ghz_model, "GHZ support model on contexts XXX, XYY, YXY, YYX, generated from the state", {"expected_support": 4}),
    "ghz-pvms": ("pvms", ghz_pvms, "single-qubit X and Y measurements on each of three parties", {"model": "ghz-model", "state": "ghz-state"}),
    "pr-box": ("empirical", pr_box_model, "PR box: outputs equal unless both inputs are 1", {"expected_support": 2}),
    "bell-full-support": (
        "empirical",
        lambda: full_support_model(("a0", "a1", "b0", "b1"), bell_scenario_contexts()),
        "Bell scenario where every joint outcome is possible",
        {"expected_support": 4},
    ),
    "K2": ("graph", lambda: complete_graph(2), "complete graph on 2 vertices", {}),
    "K3": ("graph", lambda: complete_graph(3), "complete graph on 3 vertices", {}),
    "C5": ("graph", lambda: cycle_graph(5), "5-cycle", {}),
    "K33": ("graph", lambda: complete_bipartite(3, 3), "complete bipartite graph K(3,3)", {}),
    "k3-rotation": ("certificate", k3_rotation, "d=1 lift of a rotation of K3", {}),
    "c5-colouring": ("certificate", c5_colouring, "d=1 lift of a proper 3-colouring of C5", {}),
    "k33-bipartition": ("certificate", k33_to_k2, "d=1 lift of the bipartition K(3,3) -> K2", {}),
}


def catalog_ids() -> list[str]:
    return list(_BUILDERS)


@lru_cache(maxsize=None)
def catalog_get(entry_id: str) -> CatalogEntry:
    """Build, verify and cache a catalog entry."""
    if entry_id not in _BUILDERS:
        raise UnknownEntry(f"unknown catalog entry {entry_id!r}; known: {', '.join(_BUILDERS)}")
    kind, build, provenance, refs = _BUILDERS[entry_id]
    entry = CatalogEntry(entry_id, kind, build(), provenance, dict(refs))
    rep = _verify(entry)
    if not rep:
        raise AssertionError(f"catalog entry {entry_id} fails its verifier:\n{rep.summary()}")
    return entry


def catalog_entries() -> list[CatalogEntry]:
    return [catalog_get(i) for i in _BUILDERS]
