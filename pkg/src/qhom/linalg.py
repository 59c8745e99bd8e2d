"""Exact and floating complex matrix algebra.

Two backends share one :class:`Matrix` type:

* ``"exact"`` holds :class:`GaussianRational` entries (complex numbers with
  rational real and imaginary parts). Every equality test is exact, which is
  what projector and commutation conditions need.
* ``"float"`` holds ``complex128`` entries and compares within a tolerance.

Mixing the two in one operation raises :class:`BackendMismatch`.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Sequence

import numpy as np

EXACT = "exact"
FLOAT = "float"
BACKENDS = (EXACT, FLOAT)

DEFAULT_TOL = 1e-9
PSD_EIGEN_TOL = 1e-9


def default_tol() -> float:
    """Float tolerance, overridable through the ``QMONAD_TOL`` environment variable."""
    raw = os.environ.get("QMONAD_TOL")
    if raw is None:
        return DEFAULT_TOL
    value = float(raw)
    if value < 0:
        raise ValueError(f"QMONAD_TOL must be non-negative, got {raw!r}")
    return value


class BackendMismatch(ValueError):
    pass


class ShapeError(ValueError):
    pass


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"a/b"`` or ``"a"`` into a Fraction; a zero denominator is an error."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, bool):
        raise ValueError(f"not a rational: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational: {text!r}")
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        n = int(num)
        d = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"malformed rational {text!r}") from None
    if d == 0:
        raise ValueError(f"zero denominator in rational {text!r}")
    return Fraction(n, d)


def format_rational(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


_FZERO = Fraction(0)


class GaussianRational:
    """A complex number ``re + i*im`` with rational parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = re if type(re) is Fraction else Fraction(re)
        self.im = im if type(im) is Fraction else Fraction(im)

    @classmethod
    def coerce(cls, value) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        if isinstance(value, (int, Fraction)) or isinstance(value, _RationalABC):
            return cls(Fraction(value), 0)
        if isinstance(value, str):
            return cls(parse_rational(value), 0)
        if isinstance(value, complex):
            raise TypeError("refusing to convert a float complex to an exact scalar")
        raise TypeError(f"cannot convert {value!r} to GaussianRational")

    def __add__(self, other):
        if not isinstance(other, GaussianRational):
            other = GaussianRational.coerce(other)
        if not other:
            return self
        if not self:
            return other
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        if not isinstance(other, GaussianRational):
            other = GaussianRational.coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return GaussianRational.coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, GaussianRational):
            other = GaussianRational.coerce(other)
        a, b, c, d = self.re, self.im, other.re, other.im
        if not b and not d:
            # 0 and 1 dominate canonical certificates
            if not a or c == 1:
                return self
            if not c or a == 1:
                return other
            return GaussianRational(a * c, _FZERO)
        return GaussianRational(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, GaussianRational):
            other = GaussianRational.coerce(other)
        den = other.re * other.re + other.im * other.im
        if not den:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * GaussianRational(other.re / den, -other.im / den)

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) / self

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if not self.im:
            return format_rational(self.re)
        if not self.re:
            return f"{format_rational(self.im)}i"
        sign = "+" if self.im > 0 else "-"
        return f"({format_rational(self.re)}{sign}{format_rational(abs(self.im))}i)"


ZERO = GaussianRational(0, 0)
ONE = GaussianRational(1, 0)
I_UNIT = GaussianRational(0, 1)


def _as_exact_array(rows: Sequence[Sequence]) -> np.ndarray:
    data = [[GaussianRational.coerce(v) for v in row] for row in rows]
    if not data or not data[0]:
        raise ShapeError("matrices must have at least one row and one column")
    width = len(data[0])
    if any(len(r) != width for r in data):
        raise ShapeError("ragged rows")
    arr = np.empty((len(data), width), dtype=object)
    for i, row in enumerate(data):
        for j, v in enumerate(row):
            arr[i, j] = v
    return arr


class Matrix:
    """Immutable complex matrix on the exact or float backend."""

    __slots__ = ("_a", "backend", "_hash")

    def __init__(self, array: np.ndarray, backend: str):
        if backend not in BACKENDS:
            raise ValueError(f"unknown backend {backend!r}")
        if array.ndim != 2 or array.shape[0] < 1 or array.shape[1] < 1:
            raise ShapeError(f"bad matrix shape {array.shape}")
        if backend == FLOAT and array.dtype != np.complex128:
            array = array.astype(np.complex128)
        array.setflags(write=False)
        self._a = array
        self.backend = backend
        self._hash = None

    # construction -------------------------------------------------------

    @classmethod
    def exact(cls, rows: Sequence[Sequence]) -> "Matrix":
        return cls(_as_exact_array(rows), EXACT)

    @classmethod
    def floating(cls, rows) -> "Matrix":
        arr = np.array(rows, dtype=np.complex128)
        if arr.ndim == 1:
            arr = arr.reshape(-1, 1)
        return cls(arr, FLOAT)

    @classmethod
    def identity(cls, n: int, backend: str = EXACT) -> "Matrix":
        if backend == FLOAT:
            return cls(np.eye(n, dtype=np.complex128), FLOAT)
        arr = np.full((n, n), ZERO, dtype=object)
        for i in range(n):
            arr[i, i] = ONE
        return cls(arr, EXACT)

    @classmethod
    def zeros(cls, rows: int, cols: int | None = None, backend: str = EXACT) -> "Matrix":
        cols = rows if cols is None else cols
        if backend == FLOAT:
            return cls(np.zeros((rows, cols), dtype=np.complex128), FLOAT)
        return cls(np.full((rows, cols), ZERO, dtype=object), EXACT)

    @classmethod
    def diag(cls, values: Sequence, backend: str = EXACT) -> "Matrix":
        n = len(values)
        m = cls.zeros(n, n, backend)._a.copy()
        for i, v in enumerate(values):
            m[i, i] = GaussianRational.coerce(v) if backend == EXACT else complex(v)
        return cls(m, backend)

    @classmethod
    def column(cls, values: Sequence, backend: str = EXACT) -> "Matrix":
        if backend == FLOAT:
            return cls.floating([[complex(v)] for v in values])
        return cls.exact([[v] for v in values])

    @classmethod
    def basis(cls, n: int, i: int, backend: str = EXACT) -> "Matrix":
        vals = [0] * n
        vals[i] = 1
        return cls.column(vals, backend)

    # basic accessors ----------------------------------------------------

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    @property
    def is_exact(self) -> bool:
        return self.backend == EXACT

    def __getitem__(self, idx):
        return self._a[idx]

    def entries(self) -> list:
        """Row-major list of entries."""
        return list(self._a.reshape(-1))

    # algebra ------------------------------------------------------------

    def _check(self, other: "Matrix") -> None:
        if not isinstance(other, Matrix):
            raise TypeError(f"expected Matrix, got {type(other).__name__}")
        if other.backend != self.backend:
            raise BackendMismatch(f"cannot combine {self.backend} and {other.backend} matrices")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} + {other.shape}")
        return Matrix(self._a + other._a, self.backend)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ShapeError(f"shape mismatch {self.shape} - {other.shape}")
        return Matrix(self._a - other._a, self.backend)

    def __neg__(self) -> "Matrix":
        return Matrix(-self._a, self.backend)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.shape} by {other.shape}")
        if self.backend == FLOAT:
            return Matrix(self._a @ other._a, FLOAT)
        return Matrix(_exact_matmul(self._a, other._a), EXACT)

    def scale(self, c) -> "Matrix":
        if self.backend == FLOAT:
            return Matrix(self._a * complex(c), FLOAT)
        g = GaussianRational.coerce(c)
        out = np.empty(self.shape, dtype=object)
        for idx, v in np.ndenumerate(self._a):
            out[idx] = v * g
        return Matrix(out, EXACT)

    def __mul__(self, c) -> "Matrix":
        if isinstance(c, Matrix):
            raise TypeError("use @ for matrix products")
        return self.scale(c)

    __rmul__ = __mul__

    @property
    def T(self) -> "Matrix":
        return Matrix(self._a.T.copy(), self.backend)

    def conj(self) -> "Matrix":
        if self.backend == FLOAT:
            return Matrix(self._a.conj(), FLOAT)
        out = np.empty(self.shape, dtype=object)
        for idx, v in np.ndenumerate(self._a):
            out[idx] = v.conjugate()
        return Matrix(out, EXACT)

    @property
    def H(self) -> "Matrix":
        """Conjugate transpose."""
        return self.conj().T

    def trace(self):
        if not self.is_square:
            raise ShapeError("trace of a non-square matrix")
        if self.backend == FLOAT:
            return complex(np.trace(self._a))
        total = ZERO
        for i in range(self.rows):
            total = total + self._a[i, i]
        return total

    def to_float(self) -> "Matrix":
        if self.backend == FLOAT:
            return self
        arr = np.empty(self.shape, dtype=np.complex128)
        for idx, v in np.ndenumerate(self._a):
            arr[idx] = complex(v)
        return Matrix(arr, FLOAT)

    # comparisons --------------------------------------------------------

    def is_zero(self, tol: float | None = None) -> bool:
        if self.backend == EXACT:
            return not any(self._a.flat)
        tol = default_tol() if tol is None else tol
        return bool(np.all(np.abs(self._a) <= tol))

    def equals(self, other: "Matrix", tol: float | None = None) -> bool:
        self._check(other)
        if self.shape != other.shape:
            return False
        if self.backend == EXACT:
            return bool(np.all(self._a == other._a))
        tol = default_tol() if tol is None else tol
        return bool(np.all(np.abs(self._a - other._a) <= tol))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if other.backend != self.backend or self.shape != other.shape:
            return False
        return bool(np.all(self._a == other._a))

    def __hash__(self):
        if self._hash is None:
            if self.backend == EXACT:
                self._hash = hash((self.shape, tuple(self._a.flat)))
            else:
                self._hash = hash((self.shape, self._a.tobytes()))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(repr(v) for v in row) for row in self._a)
        return f"Matrix[{self.backend} {self.rows}x{self.cols}]({body})"


def _exact_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    n, k = a.shape
    m = b.shape[1]
    out = np.empty((n, m), dtype=object)
    # sparse-aware: canonical certificates are mostly zeros
    b_cols = [[(t, b[t, j]) for t in range(k) if b[t, j]] for j in range(m)]
    for i in range(n):
        row = a[i]
        nz = {t for t in range(k) if row[t]}
        for j in range(m):
            acc = ZERO
            for t, bv in b_cols[j]:
                if t in nz:
                    acc = acc + row[t] * bv
            out[i, j] = acc
    return out


def identity_like(m: Matrix) -> Matrix:
    return Matrix.identity(m.rows, m.backend)


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product ``[a_ij * B]``."""
    a._check(b)
    if a.backend == FLOAT:
        return Matrix(np.kron(a.array, b.array), FLOAT)
    m, n = a.shape
    p, q = b.shape
    out = np.full((m * p, n * q), ZERO, dtype=object)
    for i in range(m):
        for j in range(n):
            s = a.array[i, j]
            if not s:
                continue
            for k in range(p):
                for l in range(q):
                    v = b.array[k, l]
                    if v:
                        out[i * p + k, j * q + l] = s * v
    return Matrix(out, EXACT)


def kron_all(ms: Iterable[Matrix]) -> Matrix:
    it = iter(ms)
    acc = next(it)
    for m in it:
        acc = kron(acc, m)
    return acc


def vec(a: Matrix) -> Matrix:
    """Stack the columns of ``a`` into a single column."""
    return Matrix(a.array.T.reshape(-1, 1).copy(), a.backend)


def unvec(v: Matrix, rows: int, cols: int) -> Matrix:
    if v.cols != 1 or v.rows != rows * cols:
        raise ShapeError(f"cannot unvec a {v.shape} column into {rows}x{cols}")
    return Matrix(v.array.reshape(cols, rows).T.copy(), v.backend)


def matrix_sum(ms: Iterable[Matrix], like: Matrix | None = None) -> Matrix:
    acc = None
    for m in ms:
        acc = m if acc is None else acc + m
    if acc is None:
        if like is None:
            raise ValueError("empty sum needs a shape template")
        return Matrix.zeros(like.rows, like.cols, like.backend)
    return acc


def matrix_product(ms: Sequence[Matrix]) -> Matrix:
    acc = ms[0]
    for m in ms[1:]:
        acc = acc @ m
    return acc


def is_hermitian(m: Matrix, tol: float | None = None) -> bool:
    if not m.is_square:
        raise ShapeError("self-adjointness needs a square matrix")
    return m.H.equals(m, tol)


def is_projector(m: Matrix, tol: float | None = None) -> bool:
    """True iff ``m`` is self-adjoint and idempotent."""
    if not m.is_square:
        raise ShapeError(f"projector test needs a square matrix, got {m.shape}")
    return m.H.equals(m, tol) and (m @ m).equals(m, tol)


def commutator(p: Matrix, q: Matrix) -> Matrix:
    if not p.is_square or p.shape != q.shape:
        raise ShapeError(f"commutator needs equal square shapes, got {p.shape} and {q.shape}")
    return p @ q - q @ p


def commutes(p: Matrix, q: Matrix, tol: float | None = None) -> bool:
    return commutator(p, q).is_zero(tol)


def is_psd(m: Matrix, tol: float = PSD_EIGEN_TOL) -> bool:
    """Eigenvalue test on the float image of ``m`` (threshold ``-tol``)."""
    f = m.to_float()
    if not f.is_square:
        raise ShapeError("PSD test needs a square matrix")
    if not np.allclose(f.array, f.array.conj().T, atol=max(tol, 1e-12)):
        return False
    return bool(np.linalg.eigvalsh(f.array).min() >= -tol)


def psd_trace_orthogonal(a: Matrix, b: Matrix, tol: float | None = None) -> bool:
    """Return whether ``Tr(AB) == 0`` for positive semidefinite ``a`` and ``b``.

    For PSD inputs this coincides with ``A @ B`` being the zero matrix. On the
    exact backend the PSD property is the caller's promise; on the float
    backend it is checked by eigenvalues.
    """
    if a.shape != b.shape or not a.is_square:
        raise ShapeError(f"need equal square shapes, got {a.shape} and {b.shape}")
    a._check(b)
    if a.backend == EXACT:
        return not (a @ b).trace()
    tol = default_tol() if tol is None else tol
    if not (is_psd(a, tol) and is_psd(b, tol)):
        raise ValueError("psd_trace_orthogonal needs positive semidefinite inputs")
    return abs((a @ b).trace()) <= tol


@dataclass(frozen=True)
class SchmidtDecomposition:
    """``psi = sum_i coefficients[i] * left[:, i] (x) right[:, i]``."""

    rank: int
    coefficients: tuple[float, ...]
    left: Matrix
    right: Matrix

    def reconstruct(self) -> Matrix:
        acc = None
        for i, lam in enumerate(self.coefficients):
            a = Matrix(self.left.array[:, i : i + 1].copy(), FLOAT)
            b = Matrix(self.right.array[:, i : i + 1].copy(), FLOAT)
            term = kron(a, b).scale(lam)
            acc = term if acc is None else acc + term
        return acc


def schmidt_decompose(psi: Matrix, dA: int, dB: int, tol: float | None = None) -> SchmidtDecomposition:
    """Schmidt decomposition of a bipartite column vector via SVD.

    Coefficients below ``tol`` are discarded; the state is not normalized, so
    the squared coefficients sum to the squared norm of ``psi``.
    """
    if psi.backend != FLOAT:
        raise BackendMismatch("schmidt_decompose needs the float backend; convert with to_float()")
    if psi.cols != 1 or psi.rows != dA * dB:
        raise ShapeError(f"expected a column of length {dA * dB}, got {psi.shape}")
    tol = default_tol() if tol is None else tol
    if np.linalg.norm(psi.array) <= tol:
        raise ValueError("cannot decompose the zero vector")
    # row-major reshape matches the e_i (x) e_j index i*dB + j
    coeffs = psi.array.reshape(dA, dB)
    u, s, vh = np.linalg.svd(coeffs)
    keep = [i for i, v in enumerate(s) if v > tol]
    return SchmidtDecomposition(
        rank=len(keep),
        coefficients=tuple(float(s[i]) for i in keep),
        left=Matrix(u[:, keep].copy(), FLOAT),
        right=Matrix(vh[keep, :].T.copy(), FLOAT),
    )


# named constants ----------------------------------------------------------

def pauli(name: str, backend: str = EXACT) -> Matrix:
    table = {
        "I": [[1, 0], [0, 1]],
        "X": [[0, 1], [1, 0]],
        "Y": [[0, GaussianRational(0, -1)], [GaussianRational(0, 1), 0]],
        "Z": [[1, 0], [0, -1]],
    }
    m = Matrix.exact(table[name])
    return m.to_float() if backend == FLOAT else m


def pauli_string(word: str, backend: str = EXACT) -> Matrix:
    """Kronecker product of single-qubit Paulis, e.g. ``"XZ"`` for X (x) Z."""
    return kron_all(pauli(c, backend) for c in word)
