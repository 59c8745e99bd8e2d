"""Projector-valued distributions and the graded quantum monad.

A :class:`QDist` of dimension ``d`` assigns a ``d x d`` projector to finitely
many keys so that the projectors sum to the identity. Keys are elements of a
base structure, or (for nested distributions) other ``QDist`` values. The
structure of all such distributions is never built; only the distributions in
play are represented.

Quantum homomorphism certificates (:class:`QHomCert`) are the matrices
``P[x, y]`` of a Kleisli arrow ``A -> Q_d B`` written out cell by cell.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Mapping, Sequence

from .linalg import (
    EXACT,
    Matrix,
    ShapeError,
    commutator,
    default_tol,
    is_projector,
    kron,
    matrix_sum,
)
from .report import PreconditionError, Report
from .structures import (
    Homomorphism,
    Signature,
    Structure,
    check_signatures,
    gaifman,
    is_homomorphism,
    product,
    terminal,
)


def _drop_zeros(support: Mapping) -> dict:
    return {k: m for k, m in support.items() if not _exactly_zero(m)}


def _exactly_zero(m: Matrix) -> bool:
    return m.is_zero(0.0)


class QDist:
    """A projector-valued distribution.

    Zero-valued keys are dropped on construction, so two distributions are
    equal exactly when their dimensions, bases and non-zero supports agree.
    """

    __slots__ = ("dim", "base", "support", "_hash")

    def __init__(self, dim: int, base: Structure | None, support: Mapping[Hashable, Matrix]):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = int(dim)
        self.base = base
        self.support = _drop_zeros(support)
        for k, m in self.support.items():
            if m.shape != (self.dim, self.dim):
                raise ShapeError(f"value at {k!r} has shape {m.shape}, expected {self.dim}x{self.dim}")
        self._hash = None

    @property
    def backend(self) -> str:
        for m in self.support.values():
            return m.backend
        return EXACT

    def __call__(self, key) -> Matrix:
        m = self.support.get(key)
        if m is None:
            return Matrix.zeros(self.dim, self.dim, self.backend)
        return m

    def keys(self):
        return self.support.keys()

    def items(self):
        return self.support.items()

    @property
    def depth(self) -> int:
        """0 for distributions over elements, n+1 over depth-n distributions."""
        for k in self.support:
            return k.depth + 1 if isinstance(k, QDist) else 0
        return 0

    def _key(self):
        return (self.dim, self.base, frozenset(self.support.items()))

    def __eq__(self, other):
        if not isinstance(other, QDist):
            return NotImplemented
        return self is other or self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        return f"QDist(d={self.dim}, support={list(self.support)!r})"


NestedQDist = QDist


def verify_qdist(p: QDist, tol: float | None = None) -> Report:
    """Every value a projector and the values summing to the identity."""
    rep = Report()
    for k, m in p.items():
        if not is_projector(m, tol):
            rep.add("projector", k, "value is not a projector")
        if p.base is not None and not isinstance(k, QDist) and k not in p.base:
            rep.add("support", k, "key is not an element of the base structure")
    if p.support:
        total = matrix_sum(p.support.values())
    else:
        total = Matrix.zeros(p.dim, p.dim)
    if not total.equals(Matrix.identity(p.dim, total.backend), tol):
        rep.add("normalization", "sum", "values do not sum to the identity")
    return rep


def delta(x, base: Structure | None, dim: int = 1, backend: str = EXACT) -> QDist:
    return QDist(dim, base, {x: Matrix.identity(dim, backend)})


def eta(x, a: Structure) -> QDist:
    """Unit of the monad: the delta distribution at ``x`` in dimension 1."""
    if x not in a:
        raise KeyError(f"{x!r} is not an element of the structure")
    return delta(x, a, 1)


def pushforward(fn: Callable, p: QDist, base: Structure | None = None) -> QDist:
    """Functor action along an arbitrary function: ``q(y) = sum_{fn(x)=y} p(x)``."""
    out: dict = {}
    for x, m in p.items():
        y = fn(x)
        out[y] = out[y] + m if y in out else m
    return QDist(p.dim, base if base is not None else p.base, out)


def qd_map(h: Homomorphism, p: QDist) -> QDist:
    """Image of ``p`` under the functor applied to the homomorphism ``h``."""
    if p.base is not None and p.base != h.source:
        raise ValueError("distribution is not based on the source of the homomorphism")
    return pushforward(h.mapping.__getitem__, p, h.target)


def mu(P: QDist, tol: float | None = None) -> QDist:
    """Graded multiplication: ``mu(P)(x) = sum_p P(p) (x) p(x)``."""
    inner_dim = None
    base = None
    for p in P.keys():
        if not isinstance(p, QDist):
            raise PreconditionError("mu needs a distribution whose keys are distributions")
        if inner_dim is None:
            inner_dim, base = p.dim, p.base
        elif p.dim != inner_dim:
            raise PreconditionError("inner distributions have different dimensions")
        bad = verify_qdist(p, tol)
        if not bad:
            raise PreconditionError(f"invalid inner distribution {p!r}: {bad.summary()}")
    if inner_dim is None:
        raise PreconditionError("cannot multiply an empty distribution")
    out: dict = {}
    for p, outer in P.items():
        for x, m in p.items():
            term = kron(outer, m)
            out[x] = out[x] + term if x in out else term
    return QDist(P.dim * inner_dim, base, out)


def relabel_dim(p: QDist, dim: int) -> QDist:
    """Identify a distribution of dimension ``1*d`` or ``d*1`` with dimension ``d``.

    Kronecker products with the 1x1 identity leave matrix entries unchanged, so
    the identification only asserts and rewrites the recorded dimension.
    """
    if p.dim != dim:
        raise ValueError(f"cannot identify dimension {p.dim} with {dim}")
    return QDist(dim, p.base, dict(p.items()))


def unit_outer(p: QDist) -> QDist:
    """``eta`` at the level of distributions: the delta at ``p`` in dimension 1."""
    return delta(p, p.base, 1, p.backend)


def unit_inner(p: QDist) -> QDist:
    """Functor image of ``eta``: replace every key ``x`` by the delta at ``x``."""
    return pushforward(lambda x: delta(x, p.base, 1, p.backend), p)


def verify_relation_membership(
    dists: Sequence[QDist], rel: str, a: Structure, tol: float | None = None
) -> Report:
    """Whether ``dists`` is a tuple of the relation ``rel`` in the structure of distributions."""
    k = a.signature.arity(rel)
    if len(dists) != k:
        raise ValueError(f"relation {rel!r} has arity {k}, got {len(dists)} distributions")
    rep = Report()
    for i, j in itertools.product(range(k), repeat=2):
        if j < i:
            continue
        for x, p in dists[i].items():
            for x2, q in dists[j].items():
                if not commutator(p, q).is_zero(tol):
                    rep.add("QR1", f"({i},{x!r}),({j},{x2!r})", "projectors do not commute")
    rel_tuples = a.relations[rel]
    for xs in itertools.product(*[list(d.items()) for d in dists]):
        t = tuple(x for x, _ in xs)
        if t in rel_tuples:
            continue
        prod = xs[0][1]
        for _, m in xs[1:]:
            prod = prod @ m
        if not prod.is_zero(tol):
            rep.add("QR2", t, "non-zero product on a tuple outside the relation")
    return rep


# certificates --------------------------------------------------------------


class QHomCert:
    """A family of projectors ``P[x, y]`` indexed by source and target elements.

    Cells that are absent (or exactly zero) stand for the zero matrix.
    """

    __slots__ = ("dim", "source", "target", "projectors")

    def __init__(self, dim: int, source: Structure, target: Structure, projectors: Mapping[tuple, Matrix]):
        self.dim = int(dim)
        self.source = source
        self.target = target
        self.projectors = _drop_zeros(projectors)

    @property
    def backend(self) -> str:
        for m in self.projectors.values():
            return m.backend
        return EXACT

    def __getitem__(self, key: tuple) -> Matrix:
        m = self.projectors.get(key)
        if m is None:
            return Matrix.zeros(self.dim, self.dim, self.backend)
        return m

    def row(self, x) -> dict:
        """Non-zero cells ``y -> P[x, y]`` in target order."""
        return {y: self.projectors[(x, y)] for y in self.target.universe if (x, y) in self.projectors}

    def tuple_projector(self, xs: Sequence, ys: Sequence) -> Matrix:
        acc = self[(xs[0], ys[0])]
        for x, y in zip(xs[1:], ys[1:]):
            acc = acc @ self[(x, y)]
        return acc

    def equals(self, other: "QHomCert", tol: float | None = None) -> bool:
        if self.dim != other.dim or self.source != other.source or self.target != other.target:
            return False
        keys = set(self.projectors) | set(other.projectors)
        return all(self[k].equals(other[k], tol) for k in keys)

    def __eq__(self, other):
        if not isinstance(other, QHomCert):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.source == other.source
            and self.target == other.target
            and self.projectors == other.projectors
        )

    __hash__ = None

    def to_float(self) -> "QHomCert":
        return QHomCert(self.dim, self.source, self.target, {k: m.to_float() for k, m in self.projectors.items()})

    def __repr__(self):
        return f"QHomCert(d={self.dim}, cells={len(self.projectors)})"


def verify_qhom(c: QHomCert, tol: float | None = None) -> Report:
    """Check normalization (QH1), commutation (QH2) and relation preservation (QH3).

    Commutation is required for Gaifman-adjacent source elements only.
    """
    check_signatures(c.source, c.target)
    rep = Report()
    ident = Matrix.identity(c.dim, c.backend)
    for (x, y), m in c.projectors.items():
        if x not in c.source or y not in c.target:
            rep.add("domain", (x, y), "cell outside source x target")
            continue
        if m.shape != (c.dim, c.dim):
            raise ShapeError(f"cell {(x, y)!r} has shape {m.shape}, expected {c.dim}x{c.dim}")
        if not is_projector(m, tol):
            rep.add("projector", (x, y), "not a projector")
    for x in c.source.universe:
        row = c.row(x)
        total = matrix_sum(row.values(), like=ident)
        if not total.equals(ident, tol):
            rep.add("QH1", x, "sum over targets is not the identity")
    for x, x2 in gaifman(c.source).pairs():
        for y, p in c.row(x).items():
            for y2, q in c.row(x2).items():
                if not commutator(p, q).is_zero(tol):
                    rep.add("QH2", f"P[{x},{y}], P[{x2},{y2}]", "adjacent cells do not commute")
    for name in c.source.signature.names:
        target_rel = c.target.relations[name]
        for xs in c.source.sorted_tuples(name):
            for ys, prod in _nonzero_products(c, xs, tol):
                if ys not in target_rel:
                    rep.add("QH3", f"{name}{xs}->{ys}", "product is non-zero off the target relation")
    return rep


def _nonzero_products(c: QHomCert, xs: Sequence, tol) -> Iterable[tuple[tuple, Matrix]]:
    """Pairs ``(ys, P[x1,y1]...P[xk,yk])`` with non-zero product, pruning zero prefixes."""
    rows = [list(c.row(x).items()) for x in xs]

    def go(i, ys, acc):
        if i == len(xs):
            yield tuple(ys), acc
            return
        for y, m in rows[i]:
            nxt = m if acc is None else acc @ m
            if nxt.is_zero(tol):
                continue
            yield from go(i + 1, ys + [y], nxt)

    yield from go(0, [], None)


def qh1_orthogonality(c: QHomCert, tol: float | None = None) -> Report:
    """``P[x,y] P[x,y'] = 0`` for ``y != y'``; a consequence of QH1 for projectors."""
    rep = Report()
    for x in c.source.universe:
        row = list(c.row(x).items())
        for (y, p), (y2, q) in itertools.permutations(row, 2):
            if not (p @ q).is_zero(tol):
                rep.add("orthogonality", f"P[{x},{y}]P[{x},{y2}]", "non-zero product")
    return rep


def lift(f: Homomorphism, backend: str = EXACT) -> QHomCert:
    """Dimension-1 certificate of a classical map: ``P[x, y] = 1`` iff ``f(x) = y``."""
    one = Matrix.identity(1, backend)
    return QHomCert(1, f.source, f.target, {(x, f(x)): one for x in f.source.universe})


def cert_to_map(c: QHomCert) -> dict | None:
    """For ``d = 1``, the function ``x -> y`` with ``P[x, y] = 1``; None if not a function."""
    if c.dim != 1:
        raise ValueError("only dimension-1 certificates induce maps")
    out = {}
    for x in c.source.universe:
        row = c.row(x)
        ones = [y for y, m in row.items() if m.equals(Matrix.identity(1, m.backend))]
        if len(row) != 1 or len(ones) != 1:
            return None
        out[x] = ones[0]
    return out


@dataclass
class KleisliMap:
    """A homomorphism ``source -> Q_dim target`` given by its images."""

    source: Structure
    target: Structure
    dim: int
    images: dict = field(default_factory=dict)

    def __call__(self, x) -> QDist:
        return self.images[x]


def cert_to_kleisli(c: QHomCert, tol: float | None = None) -> KleisliMap:
    rep = verify_qhom(c, tol)
    if not rep:
        raise PreconditionError(f"certificate does not verify:\n{rep.summary()}")
    images = {x: QDist(c.dim, c.target, c.row(x)) for x in c.source.universe}
    return KleisliMap(c.source, c.target, c.dim, images)


def verify_kleisli(h: KleisliMap, tol: float | None = None) -> Report:
    """Each image a valid distribution over the target, and relations preserved."""
    rep = Report()
    for x in h.source.universe:
        if x not in h.images:
            rep.add("total", x, "no image")
            continue
        p = h.images[x]
        if p.dim != h.dim or (p.base is not None and p.base != h.target):
            rep.add("image", x, "image has the wrong dimension or base")
            continue
        rep.extend(verify_qdist(p, tol))
    if not rep:
        return rep
    for name in h.source.signature.names:
        for xs in h.source.sorted_tuples(name):
            sub = verify_relation_membership([h.images[x] for x in xs], name, h.target, tol)
            for v in sub.violations:
                rep.add(v.condition, f"{name}{xs}: {v.location}", v.detail)
    return rep


def kleisli_to_cert(h: KleisliMap, tol: float | None = None) -> QHomCert:
    rep = verify_kleisli(h, tol)
    if not rep:
        raise PreconditionError(f"Kleisli map does not verify:\n{rep.summary()}")
    cells = {(x, y): m for x in h.source.universe for y, m in h.images[x].items()}
    return QHomCert(h.dim, h.source, h.target, cells)


def kleisli_compose(h: QHomCert, k: QHomCert, tol: float | None = None, check: bool = True) -> QHomCert:
    """Graded composite ``A -> Q_{d d'} C``: ``R[x, z] = sum_y P[x, y] (x) Q[y, z]``."""
    if h.target != k.source:
        raise ValueError("target of the first certificate is not the source of the second")
    if check:
        for name, c in (("first", h), ("second", k)):
            rep = verify_qhom(c, tol)
            if not rep:
                raise PreconditionError(f"{name} certificate does not verify:\n{rep.summary()}")
    cells: dict = {}
    for (x, y), p in h.projectors.items():
        for z, q in k.row(y).items():
            term = kron(p, q)
            cells[(x, z)] = cells[(x, z)] + term if (x, z) in cells else term
    return QHomCert(h.dim * k.dim, h.source, k.target, cells)


def kleisli_bind(h: KleisliMap, k: KleisliMap) -> KleisliMap:
    """Composite via the monad structure: ``x -> mu(Q_d k (h(x)))``."""
    if h.target != k.source:
        raise ValueError("Kleisli maps are not composable")
    images = {}
    for x in h.source.universe:
        nested = pushforward(k.images.__getitem__, h.images[x], k.target)
        images[x] = mu(nested)
    return KleisliMap(h.source, k.target, h.dim * k.dim, images)


def strength(p: QDist, q: QDist) -> QDist:
    """Distribution over the product structure: ``(x, y) -> p(x) (x) q(y)``."""
    if p.base is not None and q.base is not None:
        check_signatures(p.base, q.base)
        base = product(p.base, q.base)
    else:
        base = None
    cells = {(x, y): kron(m, n) for x, m in p.items() for y, n in q.items()}
    return QDist(p.dim * q.dim, base, cells)


def check_affine(sig: Signature, d: int, candidates: Iterable[QDist] = ()) -> Report:
    """The only distribution over the terminal structure in dimension ``d`` is ``{* -> I_d}``.

    The canonical distribution is checked, then each candidate is accepted only
    if it is valid, lives over the terminal structure, and equals it.
    """
    top = terminal(sig)
    (star,) = top.universe
    canon = QDist(d, top, {star: Matrix.identity(d)})
    rep = Report()
    rep.extend(verify_qdist(canon))
    for i, cand in enumerate(candidates):
        extra = [k for k in cand.keys() if k != star]
        if extra:
            rep.add("affine", f"candidate {i}", f"support {extra!r} outside the one-element universe")
            continue
        if cand.dim != d:
            rep.add("affine", f"candidate {i}", f"dimension {cand.dim} != {d}")
            continue
        sub = verify_qdist(cand)
        if not sub:
            rep.add("affine", f"candidate {i}", "not a valid distribution")
        elif not cand(star).equals(canon(star)):
            rep.add("affine", f"candidate {i}", "differs from the identity at the single element")
    return rep


def is_classical_hom_cert(c: QHomCert) -> bool:
    """For ``d = 1``: the certificate encodes a map and that map is a homomorphism."""
    m = cert_to_map(c)
    return m is not None and is_homomorphism(Homomorphism(c.source, c.target, m))
