"""Finite relational structures, homomorphisms and a backtracking solver."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Iterator, Mapping, Sequence

from .report import Report

Element = Hashable


class SignatureMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Signature:
    relations: tuple[tuple[str, int], ...]

    def __post_init__(self):
        rels = tuple((str(n), int(k)) for n, k in self.relations)
        names = [n for n, _ in rels]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate relation names in {names}")
        for n, k in rels:
            if k < 1:
                raise ValueError(f"relation {n!r} has arity {k}; arities must be >= 1")
        object.__setattr__(self, "relations", rels)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.relations)

    def arity(self, name: str) -> int:
        for n, k in self.relations:
            if n == name:
                return k
        raise KeyError(f"no relation {name!r} in signature")


class Structure:
    """A finite sigma-structure.

    ``universe`` keeps declaration order, which fixes the search order of
    :func:`find_homomorphism` and the layout of serialized output.
    """

    __slots__ = ("signature", "universe", "relations", "_index", "_hash")

    def __init__(
        self,
        signature: Signature,
        universe: Sequence[Element],
        relations: Mapping[str, Iterable[Sequence[Element]]],
    ):
        universe = tuple(universe)
        if not universe:
            raise ValueError("a structure needs a non-empty universe")
        if len(set(universe)) != len(universe):
            raise ValueError("duplicate universe elements")
        unknown = set(relations) - set(signature.names)
        if unknown:
            raise ValueError(f"relations {sorted(unknown)} not in the signature")
        index = {x: i for i, x in enumerate(universe)}
        rels: dict[str, frozenset] = {}
        for name, k in signature.relations:
            tuples = frozenset(tuple(t) for t in relations.get(name, ()))
            for t in tuples:
                if len(t) != k:
                    raise ValueError(f"tuple {t} in {name!r} has length {len(t)}, arity is {k}")
                for v in t:
                    if v not in index:
                        raise ValueError(f"tuple {t} in {name!r} uses unknown element {v!r}")
            rels[name] = tuples
        self.signature = signature
        self.universe = universe
        self.relations = rels
        self._index = index
        self._hash = None

    def __contains__(self, x) -> bool:
        return x in self._index

    def index(self, x) -> int:
        return self._index[x]

    def __len__(self) -> int:
        return len(self.universe)

    def sorted_tuples(self, name: str) -> list[tuple]:
        """Tuples of a relation in lexicographic universe order."""
        return sorted(self.relations[name], key=lambda t: tuple(self._index[v] for v in t))

    def _key(self):
        return (
            self.signature,
            self.universe,
            tuple((n, self.relations[n]) for n in self.signature.names),
        )

    def __eq__(self, other):
        if not isinstance(other, Structure):
            return NotImplemented
        return self is other or self._key() == other._key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self):
        sizes = ", ".join(f"{n}:{len(self.relations[n])}" for n in self.signature.names)
        return f"Structure(|A|={len(self.universe)}, {sizes})"


@dataclass(frozen=True)
class Homomorphism:
    source: Structure
    target: Structure
    mapping: Mapping[Element, Element] = field(hash=False)

    def __post_init__(self):
        missing = [x for x in self.source.universe if x not in self.mapping]
        if missing:
            raise ValueError(f"map is not total: missing {missing}")
        bad = [y for y in self.mapping.values() if y not in self.target]
        if bad:
            raise ValueError(f"map sends elements outside the target: {bad}")

    def __call__(self, x):
        return self.mapping[x]

    def then(self, other: "Homomorphism") -> "Homomorphism":
        """Composite ``other . self``."""
        return Homomorphism(self.source, other.target, {x: other(self(x)) for x in self.source.universe})


def check_signatures(a: Structure, b: Structure) -> None:
    if a.signature != b.signature:
        raise SignatureMismatch(f"signatures differ: {a.signature} vs {b.signature}")


def is_homomorphism(f: Homomorphism) -> bool:
    check_signatures(f.source, f.target)
    for name in f.source.signature.names:
        target = f.target.relations[name]
        for t in f.source.relations[name]:
            if tuple(f.mapping[v] for v in t) not in target:
                return False
    return True


def homomorphism_report(a: Structure, b: Structure, mapping: Mapping) -> Report:
    """Like :func:`is_homomorphism` but lists every tuple whose image leaves the target relation."""
    check_signatures(a, b)
    rep = Report()
    for x in a.universe:
        if x not in mapping:
            rep.add("total", x, "element has no image")
        elif mapping[x] not in b:
            rep.add("range", x, f"image {mapping[x]!r} is not in the target universe")
    extra = set(mapping) - set(a.universe)
    for x in sorted(extra, key=str):
        rep.add("domain", x, "not an element of the source")
    if rep.passed:
        for name in a.signature.names:
            target = b.relations[name]
            for t in a.sorted_tuples(name):
                image = tuple(mapping[v] for v in t)
                if image not in target:
                    rep.add("preserve", f"{name}{t}", f"image {image} is not in {name}")
    return rep


def identity(a: Structure) -> Homomorphism:
    return Homomorphism(a, a, {x: x for x in a.universe})


def all_maps(a: Structure, b: Structure) -> Iterator[dict]:
    """Every function from a's universe to b's, in lexicographic order."""
    for values in itertools.product(b.universe, repeat=len(a.universe)):
        yield dict(zip(a.universe, values))


def find_homomorphism(a: Structure, b: Structure) -> Homomorphism | None:
    """Lexicographically least homomorphism ``a -> b``, or ``None``.

    Backtracking in universe order with forward checking: after each
    assignment, the candidate values of every unassigned element sharing a
    tuple with it are filtered to those still extendable to a target tuple.
    """
    check_signatures(a, b)
    n = len(a.universe)
    pos = {x: i for i, x in enumerate(a.universe)}
    # constraints touching each variable: (relation, tuple)
    touching: list[list[tuple[str, tuple]]] = [[] for _ in range(n)]
    for name in a.signature.names:
        for t in a.relations[name]:
            for v in set(t):
                touching[pos[v]].append((name, t))
    domains: list[list] = [list(b.universe) for _ in range(n)]
    assignment: list = [None] * n

    def consistent(name: str, t: tuple) -> bool:
        """Some target tuple agrees with the assigned positions of ``t``."""
        fixed = [(i, assignment[pos[v]]) for i, v in enumerate(t) if assignment[pos[v]] is not None]
        if len(fixed) == len(t):
            return tuple(assignment[pos[v]] for v in t) in b.relations[name]
        for u in b.relations[name]:
            if all(u[i] == val for i, val in fixed):
                # repeated variables in t must agree in u
                ok = True
                seen: dict = {}
                for i, v in enumerate(t):
                    if v in seen and u[seen[v]] != u[i]:
                        ok = False
                        break
                    seen.setdefault(v, i)
                if ok:
                    return True
        return False

    def prune(var: int) -> tuple[list[tuple[int, list]], bool]:
        """Forward check the neighbours of ``var``; returns saved domains and success."""
        saved: list[tuple[int, list]] = []
        for name, t in touching[var]:
            for v in set(t):
                j = pos[v]
                if assignment[j] is not None:
                    continue
                keep = []
                for val in domains[j]:
                    assignment[j] = val
                    if consistent(name, t):
                        keep.append(val)
                    assignment[j] = None
                if len(keep) != len(domains[j]):
                    saved.append((j, domains[j]))
                    domains[j] = keep
                    if not keep:
                        return saved, False
        return saved, True

    def search(i: int) -> bool:
        if i == n:
            return True
        for val in list(domains[i]):
            assignment[i] = val
            if all(consistent(name, t) for name, t in touching[i]):
                saved, ok = prune(i)
                if ok and search(i + 1):
                    return True
                for j, dom in reversed(saved):
                    domains[j] = dom
            assignment[i] = None
        return False

    if search(0):
        return Homomorphism(a, b, dict(zip(a.universe, assignment)))
    return None


def find_homomorphism_brute(a: Structure, b: Structure) -> Homomorphism | None:
    """Exhaustive reference search; only for small instances."""
    check_signatures(a, b)
    for m in all_maps(a, b):
        f = Homomorphism(a, b, m)
        if is_homomorphism(f):
            return f
    return None


def all_homomorphisms(a: Structure, b: Structure) -> list[Homomorphism]:
    check_signatures(a, b)
    out = []
    for m in all_maps(a, b):
        f = Homomorphism(a, b, m)
        if is_homomorphism(f):
            out.append(f)
    return out


@dataclass(frozen=True)
class GaifmanGraph:
    """Co-occurrence graph of a structure.

    ``edges`` holds unordered pairs as frozensets; a singleton frozenset marks
    an element that repeats inside one tuple (self-adjacency).
    """

    vertices: tuple
    edges: frozenset

    def adjacent(self, x, y) -> bool:
        return frozenset((x, y)) in self.edges

    def neighbours(self, x) -> set:
        out = set()
        for e in self.edges:
            if x in e:
                out |= set(e) - {x} if len(e) == 2 else {x}
        return out

    def pairs(self) -> list[tuple]:
        """Adjacent ordered pairs (x, x'), including loops, in vertex order."""
        idx = {v: i for i, v in enumerate(self.vertices)}
        out = []
        for e in self.edges:
            if len(e) == 1:
                (x,) = e
                out.append((x, x))
            else:
                x, y = sorted(e, key=idx.__getitem__)
                out.append((x, y))
        return sorted(out, key=lambda p: (idx[p[0]], idx[p[1]]))


def gaifman(a: Structure) -> GaifmanGraph:
    edges = set()
    for name in a.signature.names:
        for t in a.relations[name]:
            for i, j in itertools.combinations(range(len(t)), 2):
                edges.add(frozenset((t[i], t[j])))
    return GaifmanGraph(a.universe, frozenset(edges))


def terminal(sig: Signature) -> Structure:
    """One-element structure with every relation full."""
    star = "*"
    return Structure(sig, (star,), {n: [(star,) * k] for n, k in sig.relations})


def product(a: Structure, b: Structure) -> Structure:
    """Categorical product; elements are pairs ``(x, y)``."""
    check_signatures(a, b)
    universe = [(x, y) for x in a.universe for y in b.universe]
    rels = {}
    for name in a.signature.names:
        rels[name] = [
            tuple(zip(s, t)) for s in a.relations[name] for t in b.relations[name]
        ]
    return Structure(a.signature, universe, rels)


# graphs ------------------------------------------------------------------

EDGE = "E"
GRAPH_SIGNATURE = Signature(((EDGE, 2),))


def graph(vertices: Sequence, edges: Iterable[tuple]) -> Structure:
    """Graph as a structure over one binary relation, stored symmetrically."""
    rel = set()
    for u, v in edges:
        rel.add((u, v))
        rel.add((v, u))
    return Structure(GRAPH_SIGNATURE, vertices, {EDGE: rel})


def graph_edges(g: Structure) -> list[tuple]:
    """Unordered edges as pairs in vertex order."""
    out = []
    for u, v in g.sorted_tuples(EDGE):
        if g.index(u) <= g.index(v):
            out.append((u, v))
    return out


def adjacent(g: Structure, u, v) -> bool:
    return (u, v) in g.relations[EDGE]


def is_simple_graph(g: Structure) -> bool:
    if g.signature != GRAPH_SIGNATURE:
        return False
    rel = g.relations[EDGE]
    return all((v, u) in rel and u != v for u, v in rel)


def complete_graph(n: int, prefix: str = "v") -> Structure:
    vs = [f"{prefix}{i}" for i in range(1, n + 1)]
    return graph(vs, itertools.combinations(vs, 2))


def cycle_graph(n: int, prefix: str = "v") -> Structure:
    vs = [f"{prefix}{i}" for i in range(1, n + 1)]
    return graph(vs, [(vs[i], vs[(i + 1) % n]) for i in range(n)])


def complete_bipartite(m: int, n: int) -> Structure:
    left = [f"a{i}" for i in range(1, m + 1)]
    right = [f"b{j}" for j in range(1, n + 1)]
    return graph(left + right, [(u, v) for u in left for v in right])
