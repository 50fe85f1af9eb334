"""Exact scalars and dense matrices over Q and F_p.

Rational matrices are stored as numpy object arrays of ``Fraction``;
prime-field matrices as ``int64`` arrays with entries in ``[0, p)`` (object
arrays of Python ints once ``p`` is too large for overflow-free products).
Every ``Matrix`` is immutable.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

import numpy as np

RATIONAL = "rational"
PRIME = "prime"

# int64 products of two entries plus accumulation over ~2**11 terms stay exact.
_INT64_PRIME_BOUND = 2**25


class NoSolution(ArithmeticError):
    """Raised by :func:`solve` when ``a @ x = b`` is inconsistent."""


_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def _is_prime(p: int) -> bool:
    """Miller-Rabin with fixed witnesses; deterministic below 3.3e24."""
    if p < 2:
        return False
    for w in _WITNESSES:
        if p % w == 0:
            return p == w
    d, r = p - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for w in _WITNESSES:
        x = pow(w, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(r - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The ground field: ``FieldSpec.rational()`` or ``FieldSpec.prime(p)``."""

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == RATIONAL:
            if self.p is not None:
                raise ValueError("rational field takes no modulus")
        elif self.kind == PRIME:
            if not isinstance(self.p, int) or not _is_prime(self.p):
                raise ValueError(f"modulus must be a prime, got {self.p!r}")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls(RATIONAL)

    @classmethod
    def prime(cls, p: int) -> "FieldSpec":
        return cls(PRIME, p)

    @property
    def is_prime(self) -> bool:
        return self.kind == PRIME

    @property
    def dtype(self):
        if self.kind == PRIME and self.p < _INT64_PRIME_BOUND:
            return np.int64
        return object

    def __call__(self, x) -> Fraction | int:
        """Canonical scalar for ``x`` (an int, Fraction, or ``"a/b"`` string)."""
        if self.kind == RATIONAL:
            return Fraction(x)
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"{x} has no image in F_{self.p}")
            return x.numerator * pow(x.denominator, -1, self.p) % self.p
        return int(x) % self.p

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        if self.kind == RATIONAL:
            return 1 / Fraction(x)
        return pow(int(x), -1, self.p)

    def elements(self):
        """All field elements (prime fields only)."""
        if self.kind != PRIME:
            raise ValueError("the rationals are not enumerable here")
        return range(self.p)

    def __str__(self):
        return "Q" if self.kind == RATIONAL else f"F_{self.p}"


def _as_array(field: FieldSpec, data) -> np.ndarray:
    arr = np.array(data, dtype=object)
    if arr.ndim != 2:
        raise ValueError("matrix data must be two-dimensional")
    out = np.empty(arr.shape, dtype=field.dtype)
    flat_in, flat_out = arr.reshape(-1), out.reshape(-1)
    for k, x in enumerate(flat_in):
        flat_out[k] = field(x)
    return out


class Matrix:
    """An immutable dense matrix over a :class:`FieldSpec`."""

    __slots__ = ("field", "_a")

    def __init__(self, field: FieldSpec, data, rows: int | None = None, cols: int | None = None):
        if isinstance(data, np.ndarray) and data.ndim == 2:
            arr = _as_array(field, data) if data.dtype != field.dtype or field.dtype is object else data.copy()
        else:
            data = list(data)
            if not data:
                arr = Matrix.zeros(field, rows or 0, cols or 0)._a.copy()
            else:
                arr = _as_array(field, data)
        if field.dtype is not object and field.is_prime:
            arr %= field.p
        arr.flags.writeable = False
        self.field = field
        self._a = arr

    @classmethod
    def _wrap(cls, field: FieldSpec, arr: np.ndarray) -> "Matrix":
        # trusted constructor: arr already canonical and of the field's dtype
        m = cls.__new__(cls)
        arr.flags.writeable = False
        m.field = field
        m._a = arr
        return m

    @classmethod
    def zeros(cls, field: FieldSpec, rows: int, cols: int) -> "Matrix":
        if field.dtype is object:
            arr = np.empty((rows, cols), dtype=object)
            arr[...] = field(0)
            return cls._wrap(field, arr)
        return cls._wrap(field, np.zeros((rows, cols), dtype=field.dtype))

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        arr = cls.zeros(field, n, n)._a.copy()
        for i in range(n):
            arr[i, i] = field(1)
        return cls._wrap(field, arr)

    @classmethod
    def scalar(cls, field: FieldSpec, x) -> "Matrix":
        return cls(field, [[x]])

    @classmethod
    def from_columns(cls, field: FieldSpec, columns: Sequence[Sequence], rows: int) -> "Matrix":
        if not columns:
            return cls.zeros(field, rows, 0)
        return cls(field, [list(r) for r in zip(*columns)])

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
    def array(self) -> np.ndarray:
        """Read-only view of the underlying array."""
        return self._a

    @property
    def entries(self) -> tuple:
        return tuple(self._a.reshape(-1).tolist())

    def to_lists(self) -> list[list]:
        return self._a.tolist()

    def __getitem__(self, idx):
        return self._a[idx]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and bool(np.all(self._a == other._a))

    def __hash__(self):
        return hash((self.field, self.shape, self.entries))

    def __repr__(self):
        return f"Matrix({self.field}, {self.to_lists()})"

    def _check(self, other: "Matrix"):
        if self.field != other.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    def __matmul__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return Matrix._wrap(self.field, _matmul(self.field, self._a, other._a))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return Matrix._wrap(self.field, _reduce(self.field, self._a + other._a))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check(other)
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return Matrix._wrap(self.field, _reduce(self.field, self._a - other._a))

    def __neg__(self) -> "Matrix":
        return Matrix._wrap(self.field, _reduce(self.field, -self._a))

    def scale(self, c) -> "Matrix":
        return Matrix._wrap(self.field, _reduce(self.field, self._a * self.field(c)))

    @property
    def T(self) -> "Matrix":
        return Matrix._wrap(self.field, self._a.T.copy())

    def is_zero(self) -> bool:
        return not bool(np.any(self._a != 0))

    def is_identity(self) -> bool:
        return self.rows == self.cols and self == Matrix.identity(self.field, self.rows)

    def power(self, k: int) -> "Matrix":
        out = Matrix.identity(self.field, self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def trace(self):
        return self.field(sum(self._a[i, i] for i in range(min(self.shape))))


def _reduce(field: FieldSpec, arr: np.ndarray) -> np.ndarray:
    if field.is_prime:
        return arr % field.p
    return arr


def _matmul(field: FieldSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
        return Matrix.zeros(field, a.shape[0], b.shape[1])._a.copy()
    out = a @ b
    if field.is_prime:
        return out % field.p
    # object sums may fall back to int for all-integer rows
    if out.size and not all(isinstance(x, Fraction) for x in out.flat):
        out = np.vectorize(Fraction, otypes=[object])(out)
    return out


def hstack(field: FieldSpec, blocks: Sequence[Matrix], rows: int | None = None) -> Matrix:
    if not blocks:
        return Matrix.zeros(field, rows or 0, 0)
    return Matrix._wrap(field, np.concatenate([b.array for b in blocks], axis=1))


def vstack(field: FieldSpec, blocks: Sequence[Matrix], cols: int | None = None) -> Matrix:
    if not blocks:
        return Matrix.zeros(field, 0, cols or 0)
    return Matrix._wrap(field, np.concatenate([b.array for b in blocks], axis=0))


def block_diag(field: FieldSpec, blocks: Sequence[Matrix]) -> Matrix:
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = Matrix.zeros(field, rows, cols).array.copy()
    r = c = 0
    for b in blocks:
        out[r:r + b.rows, c:c + b.cols] = b.array
        r += b.rows
        c += b.cols
    return Matrix._wrap(field, out)


def kron(a: Matrix, b: Matrix) -> Matrix:
    a._check(b)
    field = a.field
    if 0 in a.shape or 0 in b.shape:
        return Matrix.zeros(field, a.rows * b.rows, a.cols * b.cols)
    out = np.kron(a.array, b.array)
    if field.is_prime:
        out %= field.p
    elif not all(isinstance(x, Fraction) for x in out.flat):
        out = np.vectorize(Fraction, otypes=[object])(out)
    return Matrix._wrap(field, out)


# --- elimination -----------------------------------------------------------


def _rref_mod_p(arr: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Gauss-Jordan over F_p with leftmost pivots; returns (rref, pivot columns)."""
    a = arr.copy()
    nrows, ncols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        inv = pow(int(a[r, c]), -1, p)
        a[r] = (a[r] * inv) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r])) % p
        pivots.append(c)
        r += 1
    return a, pivots


def _integer_rows(arr: np.ndarray) -> list[list[int]]:
    # row scaling by the lcm of denominators keeps rank, row space and kernel
    rows = []
    for row in arr.tolist():
        den = reduce(lambda x, y: x * y // gcd(x, y), (Fraction(x).denominator for x in row), 1)
        rows.append([int(Fraction(x) * den) for x in row])
    return rows


def _fraction_free_gauss_jordan(rows: list[list[int]], ncols: int) -> tuple[list[list[int]], list[int], int]:
    """Bareiss-style Gauss-Jordan on integer rows.

    On exit every pivot row carries the same pivot value ``d`` and the matrix
    equals ``d`` times the reduced row echelon form. All divisions are exact.
    """
    a = [list(r) for r in rows]
    nrows = len(a)
    prev = 1
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        i = next((i for i in range(r, nrows) if a[i][c] != 0), None)
        if i is None:
            continue
        a[r], a[i] = a[i], a[r]
        piv = a[r][c]
        pr = a[r]
        for k in range(nrows):
            if k == r:
                continue
            rk = a[k]
            f = rk[c]
            a[k] = [(piv * x - f * y) // prev for x, y in zip(rk, pr)]
        prev = piv
        pivots.append(c)
        r += 1
    if prev < 0:
        a = [[-x for x in row] for row in a]
        prev = -prev
    return a, pivots, prev


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    field = m.field
    if m.rows == 0 or m.cols == 0:
        return m, []
    if field.is_prime:
        a, piv = _rref_mod_p(m.array, field.p)
        return Matrix._wrap(field, a), piv
    a, piv, d = _fraction_free_gauss_jordan(_integer_rows(m.array), m.cols)
    return Matrix(field, [[Fraction(x, d) for x in row] for row in a]), piv


def rank(m: Matrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    if m.field.is_prime:
        return len(_rref_mod_p(m.array, m.field.p)[1])
    return len(_fraction_free_gauss_jordan(_integer_rows(m.array), m.cols)[1])


def kernel_basis(m: Matrix) -> Matrix:
    """Columns spanning the right null space of ``m``."""
    field = m.field
    n = m.cols
    if m.rows == 0:
        return Matrix.identity(field, n)
    r, piv = rref(m)
    free = [c for c in range(n) if c not in set(piv)]
    out = Matrix.zeros(field, n, len(free)).array.copy()
    ra = r.array
    one = field(1)
    for k, f in enumerate(free):
        out[f, k] = one
        for i, c in enumerate(piv):
            out[c, k] = field(-ra[i, f])
    return Matrix._wrap(field, out)


def image_basis(m: Matrix) -> Matrix:
    """Columns of ``m`` at its pivot positions; a basis of the column space."""
    if m.rows == 0 or m.cols == 0:
        return Matrix.zeros(m.field, m.rows, 0)
    _, piv = rref(m)
    return Matrix._wrap(m.field, m.array[:, piv].copy())


def left_kernel_basis(m: Matrix) -> Matrix:
    """Rows spanning ``{w : w @ m = 0}``."""
    return kernel_basis(m.T).T


def solve(a: Matrix, b: Matrix) -> Matrix:
    """Some ``x`` with ``a @ x == b``; raises :class:`NoSolution` otherwise."""
    a._check(b)
    if a.rows != b.rows:
        raise ValueError(f"shape mismatch: a has {a.rows} rows, b has {b.rows}")
    field = a.field
    if b.cols == 0 or a.rows == 0:
        return Matrix.zeros(field, a.cols, b.cols)
    aug = hstack(field, [a, b])
    r, piv = rref(aug)
    if any(c >= a.cols for c in piv):
        raise NoSolution("inconsistent linear system")
    x = Matrix.zeros(field, a.cols, b.cols).array.copy()
    ra = r.array
    for i, c in enumerate(piv):
        x[c, :] = ra[i, a.cols:]
    return Matrix._wrap(field, x)


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise ValueError("only square matrices are invertible")
    if rank(m) != m.rows:
        raise ZeroDivisionError("matrix is singular")
    return solve(m, Matrix.identity(m.field, m.rows))


def is_invertible(m: Matrix) -> bool:
    return m.rows == m.cols and rank(m) == m.rows


def random_matrix(field: FieldSpec, rows: int, cols: int, rng: np.random.Generator, bound: int = 3) -> Matrix:
    """Uniform over F_p, or integers in ``[-bound, bound]`` over Q."""
    if field.is_prime:
        return Matrix(field, rng.integers(0, field.p, size=(rows, cols)), rows, cols)
    return Matrix(field, rng.integers(-bound, bound + 1, size=(rows, cols)), rows, cols)


def random_invertible(field: FieldSpec, n: int, rng: np.random.Generator) -> Matrix:
    while True:
        m = random_matrix(field, n, n, rng)
        if is_invertible(m):
            return m


def random_nonzero_scalar(field: FieldSpec, rng: np.random.Generator):
    if field.is_prime:
        return field(int(rng.integers(1, field.p)))
    num = int(rng.integers(1, 6)) * (1 if rng.integers(0, 2) else -1)
    return Fraction(num, int(rng.integers(1, 6)))


def column_vectors(m: Matrix) -> Iterable[Matrix]:
    for j in range(m.cols):
        yield Matrix._wrap(m.field, m.array[:, j:j + 1].copy())
