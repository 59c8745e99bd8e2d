"""The two-prover homomorphism game.

The verifier sends Alice a relation name and a tuple ``xs`` of that relation
in ``A``, and Bob a single element ``x`` of ``A``. Alice answers a tuple
``ys`` over ``B`` and Bob an element ``y``; they win when ``ys`` lies in the
target relation and ``y = ys[i]`` whenever ``x = xs[i]``.

States are stored unnormalized with their squared norm, so the maximally
entangled state ``sum_i e_i (x) e_i`` stays exact and probabilities are the
ratio ``psi^* M psi / psi^* psi``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Mapping

import numpy as np

from .linalg import (
    EXACT,
    FLOAT,
    ZERO,
    Matrix,
    ShapeError,
    default_tol,
    is_projector,
    is_psd,
    matrix_sum,
    schmidt_decompose,
    vec,
)
from .qmonad import QHomCert, _nonzero_products, verify_qhom
from .report import PreconditionError, Report
from .structures import Structure, check_signatures

AliceKey = tuple  # (relation name, tuple of source elements)


@dataclass(frozen=True)
class Question:
    relation: str
    tuple: tuple
    element: object

    def __str__(self):
        return f"{self.relation}{self.tuple}|{self.element}"


class Strategy:
    """Shared state plus Alice's and Bob's POVMs.

    ``alice[(rel, xs)]`` maps answer tuples to effects and ``bob[x]`` maps
    answers to effects; absent answers carry the zero effect.
    """

    __slots__ = ("dim_a", "dim_b", "state", "norm_sq", "alice", "bob")

    def __init__(
        self,
        dim_a: int,
        dim_b: int,
        state: Matrix,
        alice: Mapping[AliceKey, Mapping[tuple, Matrix]],
        bob: Mapping[object, Mapping[object, Matrix]],
        norm_sq=None,
    ):
        if state.cols != 1 or state.rows != dim_a * dim_b:
            raise ShapeError(f"state must be a column of length {dim_a * dim_b}")
        computed = (state.H @ state)[0, 0]
        computed = computed.re if state.backend == EXACT else float(computed.real)
        if not computed:
            raise ValueError("the shared state must be non-zero")
        if norm_sq is not None and state.backend == EXACT and Fraction(norm_sq) != computed:
            raise ValueError(f"declared squared norm {norm_sq} != computed {computed}")
        self.dim_a = dim_a
        self.dim_b = dim_b
        self.state = state
        self.norm_sq = computed
        self.alice = {k: {ys: m for ys, m in v.items() if not m.is_zero(0.0)} for k, v in alice.items()}
        self.bob = {k: {y: m for y, m in v.items() if not m.is_zero(0.0)} for k, v in bob.items()}
        for k, povm in self.alice.items():
            for ys, m in povm.items():
                if m.shape != (dim_a, dim_a):
                    raise ShapeError(f"Alice effect {k}->{ys} has shape {m.shape}")
        for k, povm in self.bob.items():
            for y, m in povm.items():
                if m.shape != (dim_b, dim_b):
                    raise ShapeError(f"Bob effect {k}->{y} has shape {m.shape}")

    @property
    def backend(self) -> str:
        return self.state.backend

    def state_matrix(self) -> Matrix:
        """``psi`` reshaped so that ``psi[i * dim_b + j] = M[i, j]``."""
        return Matrix(self.state.array.reshape(self.dim_a, self.dim_b).copy(), self.backend)

    def alice_effect(self, rel: str, xs: tuple, ys: tuple) -> Matrix:
        m = self.alice.get((rel, tuple(xs)), {}).get(tuple(ys))
        return m if m is not None else Matrix.zeros(self.dim_a, self.dim_a, self.backend)

    def bob_effect(self, x, y) -> Matrix:
        m = self.bob.get(x, {}).get(y)
        return m if m is not None else Matrix.zeros(self.dim_b, self.dim_b, self.backend)

    def to_float(self) -> "Strategy":
        return Strategy(
            self.dim_a,
            self.dim_b,
            self.state.to_float(),
            {k: {ys: m.to_float() for ys, m in v.items()} for k, v in self.alice.items()},
            {k: {y: m.to_float() for y, m in v.items()} for k, v in self.bob.items()},
        )

    def __repr__(self):
        return f"Strategy({self.dim_a}x{self.dim_b}, {self.backend}, alice={len(self.alice)}, bob={len(self.bob)})"


def questions(a: Structure) -> list[Question]:
    return [
        Question(name, xs, x)
        for name in a.signature.names
        for xs in a.sorted_tuples(name)
        for x in a.universe
    ]


def _real(v, backend):
    if backend == EXACT:
        if v.im:
            raise ValueError(f"non-real expectation value {v!r}")
        return v.re
    return float(v.real)


class _Evaluator:
    """Caches ``Psi^* E Psi`` per Alice effect; probabilities follow by one contraction."""

    def __init__(self, s: Strategy):
        self.s = s
        self.psi = s.state_matrix()
        self.psi_h = self.psi.H
        self._cache: dict = {}

    def alice_part(self, rel, xs, ys) -> Matrix:
        key = (rel, xs, ys)
        if key not in self._cache:
            e = self.s.alice_effect(rel, xs, ys)
            self._cache[key] = self.psi_h @ e @ self.psi
        return self._cache[key]

    def prob(self, rel, xs, ys, f: Matrix):
        m = self.alice_part(rel, xs, ys)
        # Tr(M F^T) = sum_ij M_ij F_ij
        if self.s.backend == FLOAT:
            v = complex(np.sum(m.array * f.array))
        else:
            v = sum((a * b for a, b in zip(m.array.flat, f.array.flat) if a and b), start=ZERO)
        return _real(v, self.s.backend) / self.s.norm_sq

    def alice_marginal(self, rel, xs, ys):
        v = self.alice_part(rel, xs, ys).trace()
        return _real(v, self.s.backend) / self.s.norm_sq


def outcome_probability(s: Strategy, q: Question, alice_answer: tuple, bob_answer):
    """``psi^*(E (x) F) psi / psi^* psi`` for one question and joint answer."""
    ev = _Evaluator(s)
    return ev.prob(q.relation, tuple(q.tuple), tuple(alice_answer), s.bob_effect(q.element, bob_answer))


def wins(b: Structure, q: Question, ys: tuple, y) -> bool:
    if tuple(ys) not in b.relations[q.relation]:
        return False
    return all(y == ys[i] for i, x in enumerate(q.tuple) if x == q.element)


def probability_table(s: Strategy, a: Structure, b: Structure) -> dict:
    """``{question: {(ys, y): probability}}`` over every joint answer."""
    ev = _Evaluator(s)
    table = {}
    for q in questions(a):
        k = len(q.tuple)
        row = {}
        for ys in itertools.product(b.universe, repeat=k):
            for y in b.universe:
                row[(ys, y)] = ev.prob(q.relation, q.tuple, ys, s.bob_effect(q.element, y))
        table[q] = row
    return table


def validate_strategy(s: Strategy, a: Structure, b: Structure, tol: float | None = None) -> Report:
    """Shape checks: every question answered by POVMs over the right outcome sets."""
    check_signatures(a, b)
    rep = Report()
    ident_a = Matrix.identity(s.dim_a, s.backend)
    ident_b = Matrix.identity(s.dim_b, s.backend)
    for name in a.signature.names:
        k = a.signature.arity(name)
        for xs in a.sorted_tuples(name):
            povm = s.alice.get((name, xs))
            if povm is None:
                rep.add("povm", f"alice {name}{xs}", "missing measurement")
                continue
            for ys, m in povm.items():
                if len(ys) != k or any(y not in b for y in ys):
                    rep.add("povm", f"alice {name}{xs}", f"answer {ys!r} out of range")
                if not is_psd(m):
                    rep.add("povm", f"alice {name}{xs}", f"effect for {ys!r} is not positive semidefinite")
            if not matrix_sum(povm.values(), like=ident_a).equals(ident_a, tol):
                rep.add("povm", f"alice {name}{xs}", "effects do not sum to the identity")
    for x in a.universe:
        povm = s.bob.get(x)
        if povm is None:
            rep.add("povm", f"bob {x}", "missing measurement")
            continue
        for y, m in povm.items():
            if y not in b:
                rep.add("povm", f"bob {x}", f"answer {y!r} out of range")
            if not is_psd(m):
                rep.add("povm", f"bob {x}", f"effect for {y!r} is not positive semidefinite")
        if not matrix_sum(povm.values(), like=ident_b).equals(ident_b, tol):
            rep.add("povm", f"bob {x}", "effects do not sum to the identity")
    return rep


def check_perfect(s: Strategy, a: Structure, b: Structure, tol: float | None = None) -> Report:
    """Perfect-strategy conditions QS1 (consistency) and QS2 (relation) for every question.

    On the exact backend the forbidden probabilities must be exactly zero.
    """
    shape = validate_strategy(s, a, b, tol)
    if not shape:
        raise PreconditionError(f"malformed strategy:\n{shape.summary()}")
    tol = default_tol() if tol is None else tol
    exact = s.backend == EXACT
    ev = _Evaluator(s)
    rep = Report()

    def nonzero(p) -> bool:
        return p != 0 if exact else abs(p) > tol

    for name in a.signature.names:
        for xs in a.sorted_tuples(name):
            for ys in s.alice[(name, xs)]:
                if ys not in b.relations[name]:
                    p = ev.alice_marginal(name, xs, ys)
                    if nonzero(p):
                        rep.add("QS2", f"{name}{xs}", f"answer {ys} outside the relation has probability {p}")
                for i, x in enumerate(xs):
                    for y, f in s.bob[x].items():
                        if y == ys[i]:
                            continue
                        p = ev.prob(name, xs, ys, f)
                        if nonzero(p):
                            rep.add("QS1", f"{name}{xs}|{x}", f"answers ({ys}, {y}) disagree with probability {p}")
    return rep


def winning_probability(s: Strategy, a: Structure, b: Structure, tol: float | None = None):
    """``(minimum over questions, mean under the uniform question distribution)``."""
    shape = validate_strategy(s, a, b, tol)
    if not shape:
        raise PreconditionError(f"malformed strategy:\n{shape.summary()}")
    ev = _Evaluator(s)
    per_question = []
    for q in questions(a):
        total = 0
        for ys in s.alice[(q.relation, q.tuple)]:
            if ys not in b.relations[q.relation]:
                continue
            for y, f in s.bob[q.element].items():
                if wins(b, q, ys, y):
                    total = total + ev.prob(q.relation, q.tuple, ys, f)
        per_question.append(total)
    if not per_question:
        return (1, 1)
    mean = sum(per_question, start=Fraction(0) if s.backend == EXACT else 0.0) / len(per_question)
    return min(per_question), mean


def maximally_entangled(d: int, backend: str = EXACT) -> Matrix:
    """Unnormalized ``sum_i e_i (x) e_i``; its squared norm is ``d``."""
    return vec(Matrix.identity(d, backend))


def classical_strategy(f: Mapping, a: Structure, b: Structure, backend: str = EXACT) -> Strategy:
    """Deterministic strategy from any map ``f`` (a homomorphism or not)."""
    one = Matrix.identity(1, backend)
    alice = {
        (name, xs): {tuple(f[x] for x in xs): one}
        for name in a.signature.names
        for xs in a.sorted_tuples(name)
    }
    bob = {x: {f[x]: one} for x in a.universe}
    return Strategy(1, 1, Matrix.identity(1, backend), alice, bob)


def strategy_from_cert(c: QHomCert, tol: float | None = None) -> Strategy:
    """Perfect strategy from a quantum homomorphism.

    Alice answers ``xs`` with the product projectors ``P[x1,y1]...P[xk,yk]``,
    Bob answers ``x`` with the transposes ``P[x,y]^T``, and they share the
    maximally entangled state.
    """
    rep = verify_qhom(c, tol)
    if not rep:
        raise PreconditionError(f"certificate does not verify:\n{rep.summary()}")
    alice = {}
    for name in c.source.signature.names:
        for xs in c.source.sorted_tuples(name):
            alice[(name, xs)] = dict(_nonzero_products(c, xs, tol))
    bob = {x: {y: m.T for y, m in c.row(x).items()} for x in c.source.universe}
    return Strategy(c.dim, c.dim, maximally_entangled(c.dim, c.backend), alice, bob)


def alice_marginal_effect(s: Strategy, rel: str, xs: tuple, i: int, y) -> Matrix:
    """``E^i[xs, y]``: sum of Alice's effects whose ``i``-th answer is ``y``."""
    povm = s.alice.get((rel, xs), {})
    like = Matrix.zeros(s.dim_a, s.dim_a, s.backend)
    return matrix_sum((m for ys, m in povm.items() if ys[i] == y), like=like)


@dataclass
class SpecialFormReport:
    projective_alice: Report = field(default_factory=Report)
    projective_bob: Report = field(default_factory=Report)
    max_entangled: Report = field(default_factory=Report)
    transpose_link: Report = field(default_factory=Report)
    relation_zero: Report = field(default_factory=Report)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.parts().values())

    def __bool__(self):
        return self.passed

    def parts(self) -> dict[str, Report]:
        return {
            "projectiveAlice": self.projective_alice,
            "projectiveBob": self.projective_bob,
            "maxEntangled": self.max_entangled,
            "transposeLink": self.transpose_link,
            "relationZero": self.relation_zero,
        }

    def to_dict(self) -> dict:
        return {"pass": self.passed, **{k: r.to_dict() for k, r in self.parts().items()}}

    def summary(self) -> str:
        lines = ["PASS" if self.passed else "FAIL"]
        for k, r in self.parts().items():
            lines.append(f"  {k}: {'ok' if r.passed else 'violated'}")
            for v in r.violations[:5]:
                lines.append(f"    {v.location}: {v.detail}")
        return "\n".join(lines)


def verify_special_form(s: Strategy, a: Structure, b: Structure, tol: float | None = None) -> SpecialFormReport:
    """Check the special form reached by a perfect strategy after reduction.

    * Alice's marginal measurements are projective, and each of her joint
      measurements is the product of its marginals;
    * Bob's measurements are projective;
    * the state is maximally entangled;
    * Alice's marginal at position ``i`` equals the transpose of Bob's
      measurement at ``xs[i]``;
    * Alice never answers outside the target relation.
    """
    out = SpecialFormReport()
    ok = True
    if s.dim_a != s.dim_b:
        out.max_entangled.add("maxEntangled", "dims", f"{s.dim_a} != {s.dim_b}")
        ok = False
    else:
        psi = s.state_matrix()
        c = psi[0, 0]
        scaled = Matrix.identity(s.dim_a, s.backend).scale(c)
        vanishing = not c if s.backend == EXACT else abs(c) <= (default_tol() if tol is None else tol)
        if vanishing or not psi.equals(scaled, tol):
            out.max_entangled.add("maxEntangled", "state", "state is not proportional to sum_i e_i (x) e_i")

    for x, povm in s.bob.items():
        for y, f in povm.items():
            if not is_projector(f, tol):
                out.projective_bob.add("projectiveBob", f"F[{x},{y}]", "not a projector")

    for (name, xs), povm in s.alice.items():
        for ys, m in povm.items():
            if ys not in b.relations[name]:
                out.relation_zero.add("relationZero", f"E[{name}{xs},{ys}]", "non-zero effect off the relation")
        marginals = []
        for i, x in enumerate(xs):
            margs = {y: alice_marginal_effect(s, name, xs, i, y) for y in b.universe}
            marginals.append(margs)
            for y, m in margs.items():
                if not is_projector(m, tol):
                    out.projective_alice.add("projectiveAlice", f"E^{i}[{name}{xs},{y}]", "marginal not a projector")
                if ok:
                    ft = s.bob_effect(x, y).T
                    if not m.equals(ft, tol):
                        out.transpose_link.add("transposeLink", f"E^{i}[{name}{xs},{y}]", f"differs from F[{x},{y}]^T")
        for ys in itertools.product(b.universe, repeat=len(xs)):
            prod = marginals[0][ys[0]]
            for i in range(1, len(xs)):
                prod = prod @ marginals[i][ys[i]]
            if not s.alice_effect(name, xs, ys).equals(prod, tol):
                out.projective_alice.add("projectiveAlice", f"E[{name}{xs},{ys}]", "not the product of its marginals")
    return out


class ContextClash(PreconditionError):
    pass


def cert_from_special_strategy(s: Strategy, a: Structure, b: Structure, tol: float | None = None) -> QHomCert:
    """Read the certificate ``P[x, y] = E^i[xs, y]`` (for ``x = xs[i]``) off Alice's side.

    Elements of ``A`` in no tuple take Bob's transposed effects.
    """
    defined: dict = {}
    where: dict = {}
    for name in a.signature.names:
        for xs in a.sorted_tuples(name):
            for i, x in enumerate(xs):
                for y in b.universe:
                    m = alice_marginal_effect(s, name, xs, i, y)
                    key = (x, y)
                    if key in defined:
                        if not defined[key].equals(m, tol):
                            raise ContextClash(
                                f"P[{x},{y}] defined differently by context {where[key]} and ({name}{xs}, {i})"
                            )
                    else:
                        defined[key] = m
                        where[key] = (name, xs, i)
    rep = verify_special_form(s, a, b, tol)
    if not rep:
        raise PreconditionError(f"strategy is not in special form:\n{rep.summary()}")
    for x in a.universe:
        if any((x, y) in defined for y in b.universe):
            continue
        for y in b.universe:
            defined[(x, y)] = s.bob_effect(x, y).T
    cert = QHomCert(s.dim_a, a, b, defined)
    check = verify_qhom(cert, tol)
    if not check:
        raise PreconditionError(f"extracted certificate does not verify:\n{check.summary()}")
    return cert


def schmidt_reduce(s: Strategy, tol: float | None = None) -> Strategy:
    """Project the strategy onto the Schmidt support of its state.

    With ``psi = sum_i l_i a_i (x) b_i``, ``PA = sum_i e_i a_i^*`` and
    ``PB = sum_i e_i b_i^*``, the new state is ``sum_i l_i e_i (x) e_i`` and
    effects become ``PA E PA^*`` and ``PB F PB^*``. Outcome probabilities are
    unchanged.
    """
    f = s.to_float()
    sd = schmidt_decompose(f.state, f.dim_a, f.dim_b, tol)
    pa = sd.left.H
    pb = sd.right.H
    r = sd.rank
    state = np.zeros((r * r, 1), dtype=np.complex128)
    for i, lam in enumerate(sd.coefficients):
        state[i * r + i, 0] = lam
    alice = {k: {ys: pa @ m @ pa.H for ys, m in v.items()} for k, v in f.alice.items()}
    bob = {k: {y: pb @ m @ pb.H for y, m in v.items()} for k, v in f.bob.items()}
    return Strategy(r, r, Matrix(state, FLOAT), alice, bob)


def _diagonal_state(s: Strategy, tol) -> bool:
    psi = s.state_matrix()
    d = s.dim_a
    for i in range(d):
        for j in range(d):
            v = psi[i, j]
            small = (not v) if s.backend == EXACT else abs(v) <= tol
            if (i == j) == small:
                return False
    return True


def to_maximally_entangled(s: Strategy, a: Structure, b: Structure, tol: float | None = None) -> Strategy:
    """Swap a full-rank diagonal state ``sum_i l_i e_i (x) e_i`` for the maximally entangled one.

    Measurements are kept. Perfection is preserved, though individual
    probabilities generally change.
    """
    tol_v = default_tol() if tol is None else tol
    if s.dim_a != s.dim_b:
        raise PreconditionError("state space is not square")
    if not _diagonal_state(s, tol_v):
        raise PreconditionError("state must be sum_i l_i e_i (x) e_i with every l_i non-zero; run schmidt_reduce first")
    rep = check_perfect(s, a, b, tol)
    if not rep:
        raise PreconditionError(f"input strategy is not perfect:\n{rep.summary()}")
    return Strategy(s.dim_a, s.dim_b, maximally_entangled(s.dim_a, s.backend), s.alice, s.bob)


def _random_isometry(n: int, d: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.normal(size=(n, d)) + 1j * rng.normal(size=(n, d))
    q, _ = np.linalg.qr(z)
    return q


def embed_strategy(s: Strategy, dim_a: int, dim_b: int, rng: np.random.Generator | None = None) -> Strategy:
    """Float copy of ``s`` acting on larger spaces, with the state padded by zeros.

    Without ``rng`` the original spaces sit in the leading coordinates; with it
    they are placed by random isometries. Effects are ``V E V^*`` plus an equal
    share of the orthogonal complement, so POVMs still sum to the identity.
    """
    if dim_a < s.dim_a or dim_b < s.dim_b:
        raise ValueError("embedding dimensions must not shrink the spaces")
    f = s.to_float()
    if rng is None:
        va = np.eye(dim_a, f.dim_a, dtype=np.complex128)
        vb = np.eye(dim_b, f.dim_b, dtype=np.complex128)
    else:
        va = _random_isometry(dim_a, f.dim_a, rng)
        vb = _random_isometry(dim_b, f.dim_b, rng)
    comp_a = np.eye(dim_a) - va @ va.conj().T
    comp_b = np.eye(dim_b) - vb @ vb.conj().T

    def pad(povm, v, comp):
        n = len(povm)
        return {k: Matrix(v @ m.array @ v.conj().T + comp / n, FLOAT) for k, m in povm.items()}

    psi = f.state_matrix().array
    state = (va @ psi @ vb.T).reshape(-1, 1)
    alice = {k: pad(p, va, comp_a) for k, p in f.alice.items()}
    bob = {k: pad(p, vb, comp_b) for k, p in f.bob.items()}
    return Strategy(dim_a, dim_b, Matrix(state, FLOAT), alice, bob)


def diagonal_state(weights, backend: str = EXACT) -> Matrix:
    """Unnormalized ``sum_i w_i e_i (x) e_i``."""
    return vec(Matrix.diag(list(weights), backend))


def with_state(s: Strategy, state: Matrix) -> Strategy:
    return Strategy(s.dim_a, s.dim_b, state, s.alice, s.bob)


def iter_joint_answers(b: Structure, k: int) -> Iterator[tuple]:
    for ys in itertools.product(b.universe, repeat=k):
        for y in b.universe:
            yield ys, y
