"""Seeded generators of exact random objects for property checks and demos."""

from __future__ import annotations

import itertools
import random
from typing import Sequence

from .linalg import EXACT, GaussianRational, Matrix, kron, matrix_sum
from .qmonad import QDist, QHomCert, lift
from .structures import Homomorphism, Signature, Structure, all_homomorphisms


def _gauss_int(rng: random.Random, bound: int) -> GaussianRational:
    return GaussianRational(rng.randint(-bound, bound), rng.randint(-bound, bound))


def _inner(u: list, v: list) -> GaussianRational:
    acc = GaussianRational(0)
    for a, b in zip(u, v):
        acc = acc + a.conjugate() * b
    return acc


def orthogonal_basis(d: int, rng: random.Random, bound: int = 2) -> list[list[GaussianRational]]:
    """Mutually orthogonal (unnormalized) exact vectors spanning C^d."""
    while True:
        basis: list[list] = []
        ok = True
        for _ in range(d):
            v = [_gauss_int(rng, bound) for _ in range(d)]
            for b in basis:
                coeff = _inner(b, v) / _inner(b, b)
                v = [vi - coeff * bi for vi, bi in zip(v, b)]
            if not any(v):
                ok = False
                break
            basis.append(v)
        if ok:
            return basis


def rank_one_projector(v: Sequence[GaussianRational]) -> Matrix:
    norm = _inner(list(v), list(v))
    col = Matrix.exact([[x] for x in v])
    return (col @ col.H).scale(GaussianRational(1) / norm)


def random_pvm(d: int, parts: int, rng: random.Random) -> list[Matrix]:
    """``parts`` exact projectors (some possibly zero) summing to ``I_d``."""
    basis = orthogonal_basis(d, rng)
    groups: list[list] = [[] for _ in range(parts)]
    for v in basis:
        groups[rng.randrange(parts)].append(v)
    out = []
    for g in groups:
        if g:
            out.append(matrix_sum(rank_one_projector(v) for v in g))
        else:
            out.append(Matrix.zeros(d, d))
    return out


def random_qdist(d: int, keys: Sequence, rng: random.Random, base: Structure | None = None) -> QDist:
    pvm = random_pvm(d, len(keys), rng)
    return QDist(d, base, dict(zip(keys, pvm)))


def random_structure(sig: Signature, n: int, rng: random.Random, density: float = 0.3) -> Structure:
    universe = [f"e{i}" for i in range(n)]
    rels = {}
    for name, k in sig.relations:
        rels[name] = [t for t in itertools.product(universe, repeat=k) if rng.random() < density]
    return Structure(sig, universe, rels)


def random_map(a: Structure, b: Structure, rng: random.Random) -> dict:
    return {x: rng.choice(b.universe) for x in a.universe}


def random_homomorphism(a: Structure, b: Structure, rng: random.Random) -> Homomorphism | None:
    homs = all_homomorphisms(a, b)
    return rng.choice(homs) if homs else None


def random_classical_cert(a: Structure, b: Structure, rng: random.Random) -> QHomCert | None:
    f = random_homomorphism(a, b, rng)
    return None if f is None else lift(f)


def block_diagonal(*ms: Matrix) -> Matrix:
    """Direct sum of exact square matrices."""
    n = sum(m.rows for m in ms)
    rows = [[0] * n for _ in range(n)]
    off = 0
    for m in ms:
        for i in range(m.rows):
            for j in range(m.cols):
                rows[off + i][off + j] = m[i, j]
        off += m.rows
    return Matrix.exact(rows)


def direct_sum_cert(*certs: QHomCert) -> QHomCert:
    """Block-diagonal certificate; valid whenever every summand is."""
    first = certs[0]
    keys = set()
    for c in certs:
        keys |= set(c.projectors)
    cells = {k: block_diagonal(*[c[k] for c in certs]) for k in keys}
    return QHomCert(sum(c.dim for c in certs), first.source, first.target, cells)


def tensor_cert(c: QHomCert, ancilla_dim: int) -> QHomCert:
    """``P[x, y] (x) I_m``: the same certificate acting on a larger space."""
    ident = Matrix.identity(ancilla_dim, EXACT)
    return QHomCert(c.dim * ancilla_dim, c.source, c.target, {k: kron(m, ident) for k, m in c.projectors.items()})
