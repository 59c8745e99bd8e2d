from fractions import Fraction
import random

import numpy as np
import pytest
from hypothesis import given, strategies as st

from helpers import exact_matrices, gauss, naive_kron, naive_matmul, random_exact, square_matrices
from qhom.linalg import (
    EXACT,
    FLOAT,
    BackendMismatch,
    GaussianRational,
    Matrix,
    ShapeError,
    commutator,
    format_rational,
    is_hermitian,
    is_projector,
    is_psd,
    kron,
    parse_rational,
    pauli,
    pauli_string,
    psd_trace_orthogonal,
    schmidt_decompose,
    unvec,
    vec,
)
from qhom.sampling import random_pvm

I2 = Matrix.identity(2)
X, Y, Z = pauli("X"), pauli("Y"), pauli("Z")
HALF = Fraction(1, 2)


# scalars ---------------------------------------------------------------------------


def test_rational_parse_and_format():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-4") == -4
    assert format_rational(Fraction(2, 4)) == "1/2"
    assert format_rational(Fraction(5)) == "5"


@pytest.mark.parametrize("bad", ["1/0", "a/b", "", "1/2/3", True, 1.5])
def test_rational_rejects_malformed(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


@given(gauss, gauss, gauss)
def test_gaussian_field_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert a * a.conjugate() == GaussianRational(a.abs2())
    if b:
        assert (a / b) * b == a


def test_gaussian_hash_matches_equality():
    assert hash(GaussianRational(Fraction(1, 2))) == hash(GaussianRational(Fraction(2, 4), 0))
    assert GaussianRational(3) == 3


# construction and backends -----------------------------------------------------------


def test_matrix_shape_checks():
    with pytest.raises(ShapeError):
        Matrix.exact([[1, 2], [3]])
    with pytest.raises(ShapeError):
        Matrix.exact([[1, 2]]) @ Matrix.exact([[1, 2]])


def test_mixed_backend_rejected():
    with pytest.raises(BackendMismatch):
        I2 + I2.to_float()
    with pytest.raises(BackendMismatch):
        kron(I2, I2.to_float())


def test_matrix_is_immutable():
    m = Matrix.identity(2)
    with pytest.raises(ValueError):
        m.array[0, 0] = GaussianRational(5)


# kron ------------------------------------------------------------------------------------


def test_kron_examples():
    assert kron(I2, I2) == Matrix.identity(4)
    assert kron(Z, Z) == Matrix.diag([1, -1, -1, 1])
    m = Matrix.exact([[1, 2], [3, 4]])
    assert kron(Matrix.zeros(2), m).is_zero()


@given(exact_matrices(2, 3), exact_matrices(2, 2))
def test_kron_matches_definition(a, b):
    assert kron(a, b) == naive_kron(a, b)


@given(exact_matrices(2, 2), exact_matrices(3, 3), exact_matrices(2, 2), exact_matrices(3, 3))
def test_kron_interchange_law(a, b, c, d):
    assert kron(a, b) @ kron(c, d) == kron(a @ c, b @ d)


@given(exact_matrices(3, 2), exact_matrices(2, 3))
def test_matmul_matches_naive(a, b):
    assert a @ b == naive_matmul(a, b)


# vec ----------------------------------------------------------------------------------


def test_vec_examples():
    assert vec(I2) == Matrix.column([1, 0, 0, 1])
    a, b, c, d = (GaussianRational(v) for v in (1, 2, 3, 4))
    assert vec(Matrix.exact([[a, b], [c, d]])) == Matrix.column([a, c, b, d])


@given(exact_matrices(2, 3))
def test_unvec_inverts_vec(a):
    assert unvec(vec(a), 2, 3) == a


@given(exact_matrices(2, 2), exact_matrices(2, 2), exact_matrices(2, 2))
def test_vec_key_equation(a, b, c):
    assert kron(a, b) @ vec(c) == vec(b @ c @ a.T)


@given(exact_matrices(3, 3))
def test_vec_as_identity_cup(a):
    assert vec(a) == kron(Matrix.identity(3), a) @ vec(Matrix.identity(3))


@given(exact_matrices(3, 3), exact_matrices(3, 3))
def test_vec_inner_product_is_trace(a, b):
    assert (vec(a).H @ vec(b))[0, 0] == (a.H @ b).trace()
    h = a + a.H
    assert (vec(h).H @ vec(b))[0, 0] == (h @ b).trace()


def test_vec_trace_identity_needs_self_adjoint_left_factor():
    # vec(A)^* vec(B) is Tr(A^* B); it equals Tr(AB) once A is self-adjoint
    a = Matrix.exact([[0, 1], [0, 0]])
    b = Matrix.exact([[0, 0], [1, 0]])
    assert (vec(a).H @ vec(b))[0, 0] == 0
    assert (a @ b).trace() == 1


# projectors and commutators -----------------------------------------------------------


def test_projector_examples():
    assert is_projector(Matrix.identity(3))
    assert is_projector((I2 + Z).scale(HALF))
    assert not is_projector(Matrix.diag([HALF, HALF]))
    with pytest.raises(ShapeError):
        is_projector(Matrix.exact([[1, 0]]))


def test_float_projector_uses_tolerance():
    p = (I2 + X).scale(HALF).to_float()
    noisy = Matrix(p.array + 1e-12, FLOAT)
    assert is_projector(noisy)
    assert not is_projector(noisy, tol=1e-14)


def test_commutator_examples():
    m = Matrix.exact([[1, 2], [3, 4]])
    assert commutator(I2, m).is_zero()
    assert commutator(X, Z) == (X @ Z).scale(2)
    assert not commutator(X, Z).is_zero()
    assert commutator(pauli_string("ZI"), pauli_string("IX")).is_zero()


@given(st.integers(min_value=1, max_value=4), st.integers(min_value=2, max_value=4), st.integers(0, 10**6))
def test_pvm_members_pairwise_orthogonal(d, parts, seed):
    pvm = random_pvm(d, parts, random.Random(seed))
    total = pvm[0]
    for p in pvm[1:]:
        total = total + p
    assert total == Matrix.identity(d)
    for i, p in enumerate(pvm):
        assert is_projector(p)
        for j, q in enumerate(pvm):
            if i != j:
                assert (p @ q).is_zero()


def test_hermitian():
    assert is_hermitian(Y)
    assert not is_hermitian(Matrix.exact([[0, 1], [0, 0]]))


# PSD trace identity ----------------------------------------------------------------------


def test_psd_trace_examples():
    a, b = Matrix.diag([1, 0]), Matrix.diag([0, 1])
    assert psd_trace_orthogonal(a, b) and (a @ b).is_zero()
    assert not psd_trace_orthogonal(I2, I2)
    p, q = (I2 + Z).scale(HALF), (I2 + X).scale(HALF)
    assert not (p @ q).is_zero()
    assert (p @ q).trace() == HALF
    assert not psd_trace_orthogonal(p, q)


@given(st.integers(0, 10**6))
def test_psd_trace_iff_product_zero(seed):
    rng = random.Random(seed)
    d = rng.randint(1, 4)
    m = random_exact(rng, rng.randint(1, 3), d)
    n = random_exact(rng, rng.randint(1, 3), d)
    if rng.random() < 0.5:
        # force orthogonal supports half of the time
        k = rng.randint(0, d)
        m = m @ Matrix.diag([1] * k + [0] * (d - k))
        n = n @ Matrix.diag([0] * k + [1] * (d - k))
    a, b = m.H @ m, n.H @ n
    assert psd_trace_orthogonal(a, b) == (a @ b).is_zero()


def test_psd_float_checks():
    assert is_psd(Matrix.diag([1, 0]))
    assert not is_psd(Z)
    with pytest.raises(ValueError):
        psd_trace_orthogonal(Z.to_float(), I2.to_float())


# Schmidt ---------------------------------------------------------------------------------


def test_schmidt_product_state():
    psi = Matrix.column([1, 0, 0, 0], FLOAT)
    sd = schmidt_decompose(psi, 2, 2)
    assert sd.rank == 1
    assert sd.coefficients == pytest.approx((1.0,))


def test_schmidt_maximally_entangled():
    r = 1 / np.sqrt(2)
    sd = schmidt_decompose(Matrix.column([r, 0, 0, r], FLOAT), 2, 2)
    assert sd.rank == 2
    assert sd.coefficients == pytest.approx((r, r))


def test_schmidt_rejects_exact_and_zero():
    with pytest.raises(BackendMismatch):
        schmidt_decompose(Matrix.column([1, 0, 0, 0]), 2, 2)
    with pytest.raises(ValueError):
        schmidt_decompose(Matrix.column([0, 0, 0, 0], FLOAT), 2, 2)


@given(st.integers(0, 10**6), st.sampled_from([(3, 2), (2, 3), (4, 4), (1, 3)]))
def test_schmidt_random_states(seed, dims):
    da, db = dims
    rng = np.random.default_rng(seed)
    v = rng.normal(size=da * db) + 1j * rng.normal(size=da * db)
    psi = Matrix.column(v, FLOAT)
    sd = schmidt_decompose(psi, da, db)
    assert np.abs(sd.reconstruct().array - psi.array).max() < 1e-10
    assert sum(c * c for c in sd.coefficients) == pytest.approx(np.vdot(v, v).real, abs=1e-10)
    assert list(sd.coefficients) == sorted(sd.coefficients, reverse=True)
    assert sd.rank <= min(da, db)
    for m in (sd.left, sd.right):
        gram = m.array.conj().T @ m.array
        assert np.abs(gram - np.eye(sd.rank)).max() < 1e-10


def test_pauli_algebra():
    assert X @ Y == Z.scale(GaussianRational(0, 1))
    for p in (X, Y, Z):
        assert p @ p == I2
    assert pauli_string("YY") == kron(Y, Y)
    assert pauli("Z", FLOAT).backend == FLOAT
    assert pauli("Z").backend == EXACT


@given(square_matrices())
def test_transpose_conjugate_relations(a):
    assert a.H.H == a
    assert a.T.conj() == a.H
    assert (a @ a.H).H == a @ a.H
