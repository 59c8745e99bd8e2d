from fractions import Fraction
import itertools
import random

import pytest
from hypothesis import given, strategies as st

from qhom.catalog import magic_square_cert, magic_square_pair
from qhom.linalg import Matrix, kron, pauli
from qhom.qmonad import (
    QDist,
    QHomCert,
    cert_to_kleisli,
    cert_to_map,
    check_affine,
    delta,
    eta,
    is_classical_hom_cert,
    kleisli_bind,
    kleisli_compose,
    kleisli_to_cert,
    lift,
    mu,
    pushforward,
    qd_map,
    qh1_orthogonality,
    relabel_dim,
    strength,
    unit_inner,
    unit_outer,
    verify_kleisli,
    verify_qdist,
    verify_qhom,
    verify_relation_membership,
)
from qhom.report import PreconditionError
from qhom.sampling import random_homomorphism, random_qdist, random_structure
from qhom.structures import (
    Homomorphism,
    Signature,
    Structure,
    all_maps,
    complete_graph,
    cycle_graph,
    identity,
    is_homomorphism,
    product,
    terminal,
)

HALF = Fraction(1, 2)
I2 = Matrix.identity(2)
Z = pauli("Z")
P0, P1 = (I2 + Z).scale(HALF), (I2 - Z).scale(HALF)
K2, K3 = complete_graph(2), complete_graph(3)
SIG = Signature((("R", 2),))


def test_verify_qdist_examples():
    assert verify_qdist(eta("v1", K3))
    assert verify_qdist(QDist(2, K2, {"v1": P0, "v2": P1}))
    rep = verify_qdist(QDist(2, K2, {"v1": I2, "v2": I2}))
    assert rep.conditions() == {"normalization"}
    assert verify_qdist(QDist(2, K2, {"v1": Matrix.diag([HALF, HALF]), "v2": Matrix.diag([HALF, HALF])})).failed("projector")


def test_qdist_dimension_mismatch():
    with pytest.raises(ValueError):
        QDist(2, K2, {"v1": Matrix.identity(3)})


def test_qdist_drops_zero_keys():
    p = QDist(2, K2, {"v1": I2, "v2": Matrix.zeros(2, 2)})
    assert list(p.keys()) == ["v1"]
    assert p == QDist(2, K2, {"v1": I2})
    assert p("v2").is_zero()


def test_relation_membership_deltas():
    for t in itertools.product(K3.universe, repeat=2):
        rep = verify_relation_membership([eta(x, K3) for x in t], "E", K3)
        assert rep.passed == (t in K3.relations["E"])
        if not rep:
            assert rep.conditions() == {"QR2"}
    with pytest.raises(ValueError):
        verify_relation_membership([eta("v1", K3)], "E", K3)


def test_relation_membership_magic_square_rows():
    c = magic_square_cert()
    _, b = magic_square_pair()
    for name in c.source.signature.names:
        for xs in c.source.relations[name]:
            dists = [QDist(4, b, c.row(x)) for x in xs]
            assert verify_relation_membership(dists, name, b)


def test_relation_membership_detects_noncommuting():
    x = pauli("X")
    q0, q1 = (I2 + x).scale(HALF), (I2 - x).scale(HALF)
    p = QDist(2, K2, {"v1": P0, "v2": P1})
    q = QDist(2, K2, {"v1": q0, "v2": q1})
    assert verify_relation_membership([p, q], "E", K2).failed("QR1")


# certificates ---------------------------------------------------------------------------


def test_verify_qhom_examples():
    assert verify_qhom(lift(identity(K3)))
    c = magic_square_cert()
    assert verify_qhom(c)
    cells = dict(c.projectors)
    key = next(iter(cells))
    cells[key] = Matrix.zeros(4, 4)
    bad = verify_qhom(QHomCert(4, c.source, c.target, cells))
    assert bad.failed("QH1")


def test_verify_qhom_reports_non_projector():
    cells = {("v1", "v1"): Matrix.exact([[2]]), ("v2", "v2"): Matrix.identity(1)}
    rep = verify_qhom(QHomCert(1, K2, K2, cells))
    assert rep.failed("projector") and rep.failed("QH1")


def test_qh2_scope_is_gaifman_adjacency():
    # two isolated elements may carry non-commuting rows
    a = Structure(SIG, ["a", "b"], {"R": []})
    b = Structure(SIG, ["0", "1"], {"R": []})
    x = pauli("X")
    q0, q1 = (I2 + x).scale(HALF), (I2 - x).scale(HALF)
    cells = {("a", "0"): P0, ("a", "1"): P1, ("b", "0"): q0, ("b", "1"): q1}
    assert verify_qhom(QHomCert(2, a, b, cells))
    linked = Structure(SIG, ["a", "b"], {"R": [("a", "b")]})
    full = Structure(SIG, ["0", "1"], {"R": [(u, v) for u in "01" for v in "01"]})
    assert verify_qhom(QHomCert(2, linked, full, cells)).conditions() == {"QH2"}


def test_qh3_detects_bad_product():
    # constant map K2 -> K2 at d=1 fails QH3 only
    c = QHomCert(1, K2, K2, {("v1", "v1"): Matrix.identity(1), ("v2", "v1"): Matrix.identity(1)})
    assert verify_qhom(c).conditions() == {"QH3"}


@given(st.integers(0, 10**6))
def test_d1_certificates_match_classical_homs(seed):
    rng = random.Random(seed)
    a = random_structure(SIG, rng.randint(1, 3), rng, 0.4)
    b = random_structure(SIG, rng.randint(1, 3), rng, 0.5)
    for m in all_maps(a, b):
        c = lift(Homomorphism(a, b, m))
        assert verify_qhom(c).passed == is_homomorphism(Homomorphism(a, b, m))
        assert cert_to_map(c) == m
        assert is_classical_hom_cert(c) == verify_qhom(c).passed


def test_cert_to_map_rejects_non_functions():
    c = QHomCert(1, K2, K2, {("v1", "v1"): Matrix.identity(1)})
    assert cert_to_map(c) is None
    with pytest.raises(ValueError):
        cert_to_map(magic_square_cert())


# Kleisli correspondence ---------------------------------------------------------------


def test_kleisli_identity_lift_is_deltas():
    h = cert_to_kleisli(lift(identity(K3)))
    assert all(h(x) == delta(x, K3) for x in K3.universe)


def test_kleisli_round_trip_magic_square():
    c = magic_square_cert()
    h = cert_to_kleisli(c)
    assert verify_kleisli(h)
    assert kleisli_to_cert(h) == c


@given(st.integers(0, 10**6))
def test_kleisli_round_trip_random_d1(seed):
    rng = random.Random(seed)
    a = random_structure(SIG, 3, rng, 0.3)
    b = random_structure(SIG, 2, rng, 0.6)
    f = random_homomorphism(a, b, rng)
    if f is None:
        return
    c = lift(f)
    assert kleisli_to_cert(cert_to_kleisli(c)) == c


def test_cert_to_kleisli_rejects_invalid():
    c = QHomCert(1, K2, K2, {("v1", "v1"): Matrix.identity(1)})
    with pytest.raises(PreconditionError):
        cert_to_kleisli(c)


# eta, functor action --------------------------------------------------------------------


def test_eta():
    d = eta("v1", K3)
    assert d.dim == 1 and list(d.items()) == [("v1", Matrix.identity(1))]
    with pytest.raises(KeyError):
        eta("zz", K3)


def test_qd_map_examples():
    p = QDist(2, K2, {"v1": P0, "v2": P1})
    assert qd_map(identity(K2), p) == p
    f = Homomorphism(K2, K3, {"v1": "v2", "v2": "v3"})
    assert qd_map(f, eta("v1", K2)) == eta("v2", K3)
    # merge both elements of a two-element structure
    a = Structure(Signature((("U", 1),)), ["x1", "x2"], {"U": [("x1",), ("x2",)]})
    t = Structure(Signature((("U", 1),)), ["y"], {"U": [("y",)]})
    merge = Homomorphism(a, t, {"x1": "y", "x2": "y"})
    img = qd_map(merge, QDist(2, a, {"x1": Matrix.diag([1, 0]), "x2": Matrix.diag([0, 1])}))
    assert img == QDist(2, t, {"y": Matrix.diag([1, 1])})
    with pytest.raises(ValueError):
        qd_map(f, QDist(1, K3, {"v1": Matrix.identity(1)}))


@given(st.integers(0, 10**6))
def test_qd_map_functorial(seed):
    rng = random.Random(seed)
    a, b, c = (random_structure(SIG, 2, rng, 0.5) for _ in range(3))
    f, g = random_homomorphism(a, b, rng), random_homomorphism(b, c, rng)
    if f is None or g is None:
        return
    p = random_qdist(rng.randint(1, 3), a.universe, rng, a)
    assert qd_map(f.then(g), p) == qd_map(g, qd_map(f, p))


# multiplication and monad laws ----------------------------------------------------------


def test_mu_nested_deltas():
    dx = eta("v1", K3)
    assert mu(delta(dx, None)) == dx


def test_mu_rejects_bad_inner():
    bad = QDist(2, K2, {"v1": I2, "v2": I2})
    with pytest.raises(PreconditionError):
        mu(delta(bad, None))
    with pytest.raises(PreconditionError):
        mu(QDist(1, K2, {"v1": Matrix.identity(1)}))


def _random_base(rng):
    return random_structure(SIG, rng.randint(1, 3), rng, 0.4)


@given(st.integers(0, 10**6), st.integers(1, 3))
def test_unit_laws(seed, d):
    rng = random.Random(seed)
    a = _random_base(rng)
    p = random_qdist(d, a.universe, rng, a)
    assert relabel_dim(mu(unit_outer(p)), d) == p
    assert relabel_dim(mu(unit_inner(p)), d) == p


def _nested(rng, outer, inner, keys, base, count=2):
    """An outer distribution over ``count`` distinct inner distributions."""
    inners = []
    # a single key admits only one distribution, so give up after a few tries
    for _ in range(10):
        q = random_qdist(inner, keys, rng, base)
        if q not in inners:
            inners.append(q)
        if len(inners) == count:
            break
    return random_qdist(outer, inners, rng)


@given(st.integers(0, 10**6), st.tuples(*[st.integers(1, 2)] * 3))
def test_graded_associativity(seed, dims):
    a_dim, b_dim, c_dim = dims
    rng = random.Random(seed)
    base = _random_base(rng)
    middles = []
    for _ in range(2):
        m = _nested(rng, b_dim, c_dim, base.universe, base)
        if m not in middles:
            middles.append(m)
    top = random_qdist(a_dim, middles, rng)
    left = mu(pushforward(mu, top))
    right = mu(mu(top))
    assert left.dim == right.dim == a_dim * b_dim * c_dim
    assert left == right
    assert verify_qdist(left)


@given(st.integers(0, 10**6), st.integers(1, 2), st.integers(1, 2))
def test_mu_naturality(seed, d, d2):
    rng = random.Random(seed)
    a, b = _random_base(rng), _random_base(rng)
    f = random_homomorphism(a, b, rng)
    if f is None:
        return
    nested = _nested(rng, d, d2, a.universe, a)
    lhs = qd_map(f, mu(nested))
    rhs = mu(pushforward(lambda q: qd_map(f, q), nested))
    assert lhs == rhs


# composition -----------------------------------------------------------------------------


def test_compose_with_identity_lift():
    c = magic_square_cert()
    out = kleisli_compose(c, lift(identity(c.target)))
    assert out.dim == 4
    assert out == QHomCert(4, c.source, c.target, {k: kron(m, Matrix.identity(1)) for k, m in c.projectors.items()})
    assert out == c
    assert verify_qhom(out)
    before = kleisli_compose(lift(identity(c.source)), c)
    assert before == c


@given(st.integers(0, 10**6))
def test_compose_classical_lifts(seed):
    rng = random.Random(seed)
    a, b, c = (_random_base(rng) for _ in range(3))
    f, g = random_homomorphism(a, b, rng), random_homomorphism(b, c, rng)
    if f is None or g is None:
        return
    composed = kleisli_compose(lift(f), lift(g))
    assert composed == lift(f.then(g))
    via_bind = kleisli_bind(cert_to_kleisli(lift(f)), cert_to_kleisli(lift(g)))
    assert kleisli_to_cert(via_bind) == composed


def test_compose_rejects_mismatch_and_invalid():
    with pytest.raises(ValueError):
        kleisli_compose(lift(identity(K2)), lift(identity(K3)))
    bad = QHomCert(1, K2, K2, {("v1", "v1"): Matrix.identity(1)})
    with pytest.raises(PreconditionError):
        kleisli_compose(bad, lift(identity(K2)))


def test_compose_catalog_pairs_verify():
    c5_k3 = lift(Homomorphism(cycle_graph(5), K3, {"v1": "v1", "v2": "v2", "v3": "v1", "v4": "v2", "v5": "v3"}))
    rot = lift(Homomorphism(K3, K3, {"v1": "v2", "v2": "v3", "v3": "v1"}))
    assert verify_qhom(kleisli_compose(c5_k3, rot))
    c = magic_square_cert()
    sq = kleisli_compose(c, lift(identity(c.target)))
    assert verify_qhom(kleisli_compose(lift(identity(c.source)), sq))


def test_bind_matches_compose_on_magic_square():
    c = magic_square_cert()
    h = cert_to_kleisli(c)
    k = cert_to_kleisli(lift(identity(c.target)))
    assert kleisli_to_cert(kleisli_bind(h, k)) == kleisli_compose(c, lift(identity(c.target)))


# strength, affine -------------------------------------------------------------------------


def test_strength_examples():
    s = strength(eta("v1", K2), eta("v2", K3))
    assert s == QDist(1, product(K2, K3), {("v1", "v2"): Matrix.identity(1)})
    p = QDist(2, K2, {"v1": P0, "v2": P1})
    q = random_qdist(3, K3.universe, random.Random(1), K3)
    pq = strength(p, q)
    assert pq.dim == 6
    assert verify_qdist(pq)


def test_strength_preserves_relations():
    p = QDist(2, K2, {"v1": P0, "v2": P1})
    q = QDist(2, K2, {"v1": P1, "v2": P0})
    pq, qp = strength(p, q), strength(q, p)
    # (p, q) in E and (q, p) in E, hence the paired tuple lies in E of K2 x K2
    assert verify_relation_membership([p, q], "E", K2)
    assert verify_relation_membership([pq, qp], "E", product(K2, K2))


def test_strength_signature_mismatch():
    other = Structure(Signature((("S", 1),)), ["a"], {"S": []})
    with pytest.raises(ValueError):
        strength(eta("v1", K2), eta("a", other))


def test_affine():
    assert check_affine(SIG, 1)
    top = terminal(SIG)
    (star,) = top.universe
    assert check_affine(SIG, 4, [QDist(4, top, {star: Matrix.identity(4)})])
    two = QDist(2, top, {star: P0, "other": P1})
    assert check_affine(SIG, 2, [two]).failed("affine")
    assert check_affine(SIG, 2, [QDist(2, top, {star: P0})]).failed("affine")


# QH1 consequences ------------------------------------------------------------------------


def test_qh1_implies_orthogonality():
    assert qh1_orthogonality(magic_square_cert())
    rng = random.Random(7)
    for _ in range(20):
        d = rng.randint(1, 3)
        pvm = random_qdist(d, K3.universe, rng, K3)
        c = QHomCert(d, K2, K3, {("v1", y): m for y, m in pvm.items()})
        assert qh1_orthogonality(c)
