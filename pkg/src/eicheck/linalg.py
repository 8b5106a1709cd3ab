"""Exact linear algebra over the rationals and over prime fields.

Matrices are lists of row lists.  Rational arithmetic uses
fractions.Fraction (entries are normalised back to int whenever the
denominator is 1), prime-field arithmetic uses numpy int64 arrays mod p.
All pivoting is deterministic (first nonzero), so every routine returns
bit-identical results across runs.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np


class ExactField:
    """The rationals (characteristic 0) or the prime field F_p."""

    def __init__(self, characteristic: int):
        if characteristic != 0 and not _is_prime(characteristic):
            raise ValueError(f"characteristic must be 0 or prime, got {characteristic}")
        self.p = characteristic

    def __eq__(self, other):
        return isinstance(other, ExactField) and self.p == other.p

    def __hash__(self):
        return hash(("ExactField", self.p))

    def __repr__(self):
        return "QQ" if self.p == 0 else f"GF({self.p})"

    def normalize(self, x):
        if self.p:
            return int(x) % self.p
        if isinstance(x, Fraction) and x.denominator == 1:
            return int(x)
        return x

    def is_invertible_int(self, n: int) -> bool:
        """Whether the integer n is invertible as a field element."""
        if self.p == 0:
            return n != 0
        return n % self.p != 0


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


# ---------------------------------------------------------------------------
# prime field routines (numpy-backed)


def _rref_mod_p(mat: np.ndarray, p: int):
    """Row-reduce mod p in place; returns (matrix, pivot column list)."""
    m = mat % p
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            m[[r, i]] = m[[i, r]]
        inv = pow(int(m[r, c]), p - 2, p) if p > 2 else int(m[r, c])
        if inv != 1:
            m[r] = (m[r] * inv) % p
        col = m[:, c].copy()
        col[r] = 0
        if np.any(col):
            m -= np.outer(col, m[r])
            m %= p
        pivots.append(c)
        r += 1
    return m, pivots


# ---------------------------------------------------------------------------
# rational routines (fraction-free where the input is integral)


def _rref_rational(rows):
    """Gauss-Jordan over Q.  Input rows of int/Fraction; returns (rref, pivots)."""
    m = [[Fraction(x) for x in row] for row in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        pivot_row = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def _as_int_rows(rows):
    """Clear denominators row-wise; keeps ranks and kernels unchanged."""
    out = []
    for row in rows:
        den = 1
        for x in row:
            if isinstance(x, Fraction):
                den = den * x.denominator // _gcd(den, x.denominator)
        out.append([int(x * den) if isinstance(x, Fraction) else int(x) * den for x in row])
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


class Matrix:
    """Dense exact matrix over an ExactField."""

    __slots__ = ("field", "rows", "nrows", "ncols")

    def __init__(self, field: ExactField, rows, ncols=None):
        self.field = field
        self.rows = [list(r) for r in rows]
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else (ncols or 0)
        if field.p:
            self.rows = [[int(x) % field.p for x in r] for r in self.rows]

    @classmethod
    def zero(cls, field, nrows, ncols):
        return cls(field, [[0] * ncols for _ in range(nrows)], ncols)

    @classmethod
    def identity(cls, field, n):
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)], n)

    def copy(self):
        return Matrix(self.field, [list(r) for r in self.rows], self.ncols)

    def __eq__(self, other):
        if not isinstance(other, Matrix) or self.field != other.field:
            return NotImplemented
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            return False
        for r1, r2 in zip(self.rows, other.rows):
            for a, b in zip(r1, r2):
                if Fraction(a) != Fraction(b):
                    return False
        return True

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.nrows}x{self.ncols})"

    def mul(self, other: "Matrix") -> "Matrix":
        assert self.ncols == other.nrows, (self.ncols, other.nrows)
        p = self.field.p
        if p:
            a = np.array(self.rows, dtype=np.int64).reshape(self.nrows, self.ncols)
            b = np.array(other.rows, dtype=np.int64).reshape(other.nrows, other.ncols)
            c = (a @ b) % p
            return Matrix(self.field, c.tolist(), other.ncols)
        out = []
        for row in self.rows:
            nz = [(j, x) for j, x in enumerate(row) if x != 0]
            new = [0] * other.ncols
            for j, x in nz:
                orow = other.rows[j]
                for k, y in enumerate(orow):
                    if y != 0:
                        new[k] += x * y
            out.append([self.field.normalize(Fraction(v)) for v in new])
        return Matrix(self.field, out, other.ncols)

    def apply(self, vec):
        """Matrix times column vector (as list)."""
        return [r for r in self.mul(Matrix(self.field, [[v] for v in vec], 1)).column(0)]

    def column(self, j):
        return [row[j] for row in self.rows]

    def hstack(self, other: "Matrix") -> "Matrix":
        assert self.nrows == other.nrows
        return Matrix(self.field, [a + b for a, b in zip(self.rows, other.rows)],
                      self.ncols + other.ncols)

    def rank(self) -> int:
        if self.nrows == 0 or self.ncols == 0:
            return 0
        if self.field.p:
            _, piv = _rref_mod_p(np.array(self.rows, dtype=np.int64), self.field.p)
        else:
            _, piv = _rref_rational(_as_int_rows(self.rows))
        return len(piv)

    def rref(self):
        """Reduced row echelon form; returns (Matrix, pivot columns)."""
        if self.nrows == 0:
            return self.copy(), []
        if self.field.p:
            m, piv = _rref_mod_p(np.array(self.rows, dtype=np.int64), self.field.p)
            return Matrix(self.field, m.tolist(), self.ncols), piv
        m, piv = _rref_rational(self.rows)
        m = [[self.field.normalize(x) for x in row] for row in m]
        return Matrix(self.field, m, self.ncols), piv

    def nullspace(self):
        """Basis of the right kernel, as a list of column vectors.

        Rational kernels are scaled to primitive integer vectors so that
        downstream matrices stay integral.
        """
        if self.ncols == 0:
            return []
        if self.nrows == 0:
            basis = []
            for j in range(self.ncols):
                v = [0] * self.ncols
                v[j] = 1
                basis.append(v)
            return basis
        red, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in pivots]
        basis = []
        for j in free:
            v = [0] * self.ncols
            v[j] = 1
            for r, c in enumerate(pivots):
                v[c] = -red.rows[r][j]
            if self.field.p:
                v = [int(x) % self.field.p for x in v]
            else:
                v = _primitive_int_vector(v)
            basis.append(v)
        return basis

    def solve(self, rhs: "Matrix"):
        """Solve self @ X = rhs; returns Matrix X or None if inconsistent."""
        assert self.nrows == rhs.nrows
        aug = self.hstack(rhs)
        red, pivots = aug.rref()
        n = self.ncols
        for r, c in enumerate(pivots):
            if c >= n:
                return None
        x = [[0] * rhs.ncols for _ in range(n)]
        for r, c in enumerate(pivots):
            for k in range(rhs.ncols):
                x[c][k] = red.rows[r][n + k]
        return Matrix(self.field, x, rhs.ncols)


def _primitive_int_vector(v):
    """Scale a rational vector to integers with gcd 1 (sign of first nonzero > 0)."""
    den = 1
    for x in v:
        fx = Fraction(x)
        den = den * fx.denominator // _gcd(den, fx.denominator)
    w = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in w:
        g = _gcd(g, abs(x))
    if g > 1:
        w = [x // g for x in w]
    for x in w:
        if x != 0:
            if x < 0:
                w = [-y for y in w]
            break
    return w


def column_matrix(field, columns, nrows):
    """Matrix whose columns are the given vectors."""
    if not columns:
        return Matrix(field, [[] for _ in range(nrows)], 0)
    return Matrix(field, [[col[i] for col in columns] for i in range(nrows)], len(columns))
