"""Exact dense linear algebra over GF(p).

Matrices hold int64 residues in [0, p).  For any modulus below 2**31 a
product of two residues stays below 2**62, so a single row operation never
overflows int64; long accumulations (matmul) are chunked.  Pivoting always
selects the first nonzero entry in row order — GF(p) has no magnitude, and a
deterministic pivot rule makes every certificate byte-reproducible.
"""

from __future__ import annotations

import numpy as np

DEFAULT_PRIME = 31991

MAX_MODULUS = 1 << 31


class LinAlgError(ArithmeticError):
    """Base class for exact linear algebra failures."""


class Singular(LinAlgError):
    """Square matrix is not invertible."""


class RankDeficient(LinAlgError):
    """Coefficient matrix does not have full column rank."""


class Inconsistent(LinAlgError):
    """Right-hand side is outside the column span."""


class OddSize(LinAlgError):
    """Pfaffian of an odd-sized matrix requested."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    # deterministic Miller-Rabin bases for n < 3.3e24
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class PrimeField:
    """Arithmetic context for GF(p).  Rejects even or composite moduli."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if p < 3 or p % 2 == 0 or p >= MAX_MODULUS or not _is_prime(p):
            raise ValueError(f"modulus must be an odd prime below 2**31, got {p}")
        self.p = p

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"

    def normalize(self, a: int) -> int:
        return a % self.p

    def add(self, a: int, b: int) -> int:
        return (a + b) % self.p

    def sub(self, a: int, b: int) -> int:
        return (a - b) % self.p

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return -a % self.p

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("0 has no inverse in GF(p)")
        return pow(a, self.p - 2, self.p)

    def pow(self, a: int, e: int) -> int:
        return pow(a % self.p, e, self.p)

    def sqrt(self, a: int):
        """Square root in GF(p) via Tonelli-Shanks, or None if a is not a square."""
        p = self.p
        a %= p
        if a == 0:
            return 0
        if pow(a, (p - 1) // 2, p) != 1:
            return None
        if p % 4 == 3:
            return pow(a, (p + 1) // 4, p)
        # Tonelli-Shanks
        q, s = p - 1, 0
        while q % 2 == 0:
            q //= 2
            s += 1
        z = 2
        while pow(z, (p - 1) // 2, p) != p - 1:
            z += 1
        m, c = s, pow(z, q, p)
        t, r = pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            t2, i = t * t % p, 1
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
        return r


class ScalarMatrix:
    """Dense matrix of GF(p) residues, stored row-major as int64."""

    __slots__ = ("field", "a")

    def __init__(self, field: PrimeField, data):
        a = np.asarray(data, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError(f"expected a 2-d array, got shape {a.shape}")
        self.field = field
        self.a = np.mod(a, field.p)

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> "ScalarMatrix":
        return cls(field, np.zeros((rows, cols), dtype=np.int64))

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> "ScalarMatrix":
        return cls(field, np.eye(n, dtype=np.int64))

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.a.shape

    def transpose(self) -> "ScalarMatrix":
        return ScalarMatrix(self.field, self.a.T)

    @property
    def T(self) -> "ScalarMatrix":
        return self.transpose()

    def __getitem__(self, key):
        return self.a[key]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ScalarMatrix)
            and other.field == self.field
            and other.a.shape == self.a.shape
            and bool(np.array_equal(other.a, self.a))
        )

    def __matmul__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        if not isinstance(other, ScalarMatrix) or other.field != self.field:
            raise TypeError("can only multiply ScalarMatrix over the same field")
        return ScalarMatrix(self.field, _matmul(self.a, other.a, self.field.p))

    def __add__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        return ScalarMatrix(self.field, (self.a + other.a) % self.field.p)

    def __sub__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        return ScalarMatrix(self.field, (self.a - other.a) % self.field.p)

    def __repr__(self) -> str:
        return f"ScalarMatrix(p={self.field.p}, shape={self.a.shape})"

    def is_skew(self) -> bool:
        return bool(
            np.array_equal(self.a, (-self.a.T) % self.field.p)
            and not self.a.diagonal().any()
        )

    def is_symmetric(self) -> bool:
        return bool(np.array_equal(self.a, self.a.T))


def _matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    # chunk the inner dimension so accumulated dot products stay inside int64
    k = a.shape[1]
    step = max(1, (1 << 62) // ((p - 1) * (p - 1) + 1))
    if k <= step:
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for s in range(0, k, step):
        out = (out + a[:, s : s + step] @ b[s : s + step]) % p
    return out


def _forward_eliminate(m: np.ndarray, p: int, ncols: int):
    """In-place forward elimination on the first `ncols` columns.

    Pivot rows are normalized to 1.  Returns (pivot_columns, sign) where sign
    tracks row swaps (for determinants computed elsewhere it is unused).
    """
    nrows = m.shape[0]
    pivots: list[int] = []
    sign = 1
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        nz = np.nonzero(m[row:, col])[0]
        if nz.size == 0:
            continue
        r = row + int(nz[0])
        if r != row:
            m[[row, r]] = m[[r, row]]
            sign = -sign
        inv = pow(int(m[row, col]), p - 2, p)
        m[row, col:] = m[row, col:] * inv % p
        below = m[row + 1 :, col:]
        f = below[:, 0]
        if f.any():
            below[...] = (below - np.outer(f, m[row, col:])) % p
        pivots.append(col)
        row += 1
    return pivots, sign

def _back_substitute(m: np.ndarray, p: int, pivots: list[int]) -> None:
    """Clear entries above the pivots (m already forward-eliminated)."""
    for row in range(len(pivots) - 1, 0, -1):
        col = pivots[row]
        f = m[:row, col]
        if f.any():
            m[:row, col:] = (m[:row, col:] - np.outer(f, m[row, col:])) % p


def rank(A: ScalarMatrix) -> int:
    """Rank over GF(p); deterministic elimination, exact arithmetic."""
    m = A.a.copy()
    pivots, _ = _forward_eliminate(m, A.field.p, A.cols)
    return len(pivots)


def kernel_basis(A: ScalarMatrix) -> list[np.ndarray]:
    """Basis of the right null space {v : A v = 0}, ordered by free column."""
    p = A.field.p
    m = A.a.copy()
    pivots, _ = _forward_eliminate(m, p, A.cols)
    _back_substitute(m, p, pivots)
    pivot_set = set(pivots)
    basis = []
    for free in range(A.cols):
        if free in pivot_set:
            continue
        v = np.zeros(A.cols, dtype=np.int64)
        v[free] = 1
        for row, col in enumerate(pivots):
            v[col] = (-int(m[row, free])) % p
        basis.append(v)
    return basis


def invert(A: ScalarMatrix) -> ScalarMatrix:
    """Inverse of a square matrix; raises Singular on rank deficiency."""
    if A.rows != A.cols:
        raise Singular(f"cannot invert a {A.rows}x{A.cols} matrix")
    p = A.field.p
    n = A.rows
    m = np.hstack([A.a, np.eye(n, dtype=np.int64)])
    pivots, _ = _forward_eliminate(m, p, n)
    if len(pivots) < n:
        raise Singular(f"matrix of rank {len(pivots)} < {n}")
    _back_substitute(m, p, pivots)
    return ScalarMatrix(A.field, m[:, n:])


def solve_many(A: ScalarMatrix, B: ScalarMatrix) -> ScalarMatrix:
    """Solve A X = B for all columns of B in one elimination.

    Requires full column rank and a consistent system; the factorization is
    shared across every right-hand side.
    """
    if A.rows != B.rows:
        raise ValueError(f"row mismatch: A has {A.rows}, B has {B.rows}")
    if A.field != B.field:
        raise TypeError("A and B must live over the same field")
    p = A.field.p
    n = A.cols
    m = np.hstack([A.a, B.a])
    pivots, _ = _forward_eliminate(m, p, n)
    if len(pivots) < n:
        raise RankDeficient(f"column rank {len(pivots)} < {n}")
    if m[n:, n:].any():
        raise Inconsistent("right-hand side not in the column span")
    _back_substitute(m, p, pivots)
    return ScalarMatrix(A.field, m[:n, n:])


def solve_vector(A: ScalarMatrix, b: np.ndarray) -> np.ndarray:
    B = ScalarMatrix(A.field, np.asarray(b, dtype=np.int64).reshape(-1, 1))
    return solve_many(A, B).a[:, 0]


def determinant(A: ScalarMatrix) -> int:
    """Determinant via fraction-tracking elimination (no normalization)."""
    if A.rows != A.cols:
        raise ValueError("determinant of a non-square matrix")
    return _det_array(A.a, A.field.p)


def _det_array(a: np.ndarray, p: int) -> int:
    a = np.mod(np.asarray(a, dtype=np.int64), p).copy()
    n = a.shape[0]
    det = 1
    for col in range(n):
        nz = np.nonzero(a[col:, col])[0]
        if nz.size == 0:
            return 0
        r = col + int(nz[0])
        if r != col:
            a[[col, r]] = a[[r, col]]
            det = -det
        piv = int(a[col, col])
        det = det * piv % p
        if col + 1 < n:
            inv = pow(piv, p - 2, p)
            f = a[col + 1 :, col] * inv % p
            if f.any():
                a[col + 1 :, col:] = (a[col + 1 :, col:] - np.outer(f, a[col, col:])) % p
    return det % p


def pfaffian_skew(A: ScalarMatrix) -> int:
    """Pfaffian of a skew-symmetric matrix of even size.

    Convention: pf([[0, a], [-a, 0]]) = a, extended by the expansion along
    the first row.  Computed in O(n^3) by congruence elimination; each
    row+column operation has determinant 1 and each swap flips the sign.
    """
    if A.rows != A.cols:
        raise ValueError("pfaffian of a non-square matrix")
    if A.rows % 2 != 0:
        raise OddSize(f"pfaffian needs even size, got {A.rows}")
    if not A.is_skew():
        raise ValueError("pfaffian of a non-skew matrix")
    return _pfaffian_array(A.a, A.field.p)


def _pfaffian_array(a: np.ndarray, p: int) -> int:
    a = a.copy()
    n = a.shape[0]
    if n == 0:
        return 1
    result = 1
    for k in range(0, n - 1, 2):
        nz = np.nonzero(a[k + 1 :, k])[0]
        if nz.size == 0:
            return 0
        r = k + 1 + int(nz[0])
        if r != k + 1:
            a[[k + 1, r]] = a[[r, k + 1]]
            a[:, [k + 1, r]] = a[:, [r, k + 1]]
            result = -result
        result = result * int(a[k, k + 1]) % p
        if k + 2 < n:
            inv_lo = pow(int(a[k + 1, k]), p - 2, p)
            inv_hi = pow(int(a[k, k + 1]), p - 2, p)
            f = a[k + 2 :, k] * inv_lo % p
            g = a[k + 2 :, k + 1] * inv_hi % p
            # congruence E A tE: row updates, then the matching column updates
            a[k + 2 :, :] = (a[k + 2 :, :] - np.outer(f, a[k + 1, :])) % p
            a[k + 2 :, :] = (a[k + 2 :, :] - np.outer(g, a[k, :])) % p
            a[:, k + 2 :] = (a[:, k + 2 :] - np.outer(a[:, k + 1], f)) % p
            a[:, k + 2 :] = (a[:, k + 2 :] - np.outer(a[:, k], g)) % p
    return result % p
