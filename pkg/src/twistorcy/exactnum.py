"""Exact arithmetic kernel: integers, rationals, the golden ring and integer normal forms.

Integers are Python ints and rationals are :class:`fractions.Fraction`; both are
already arbitrary precision and canonical.  Matrices are plain lists of rows.
"""

from __future__ import annotations

from fractions import Fraction
from functools import total_ordering
from math import gcd
from typing import Iterable, Sequence

Matrix = list[list[int]]


class ExactArithmeticError(ValueError):
    pass


# ---------------------------------------------------------------------------
# rationals and vectors


def to_fraction(value) -> Fraction:
    """Parse ``value`` (int, Fraction or a ``"p/q"`` string) into a Fraction.

    Floats are refused; nothing in this package is allowed to round.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_fraction(q: Fraction) -> str:
    """Serialise a rational as ``"p/q"`` (always with a denominator)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries."""
    v = tuple(int(x) for x in v)
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ExactArithmeticError("the zero vector has no primitive direction")
    return tuple(x // g for x in v)


def primitive_rational(v: Sequence) -> tuple[tuple[int, ...], Fraction]:
    """Scale a rational vector to a primitive integer vector.

    Returns ``(w, s)`` with ``w = s * v`` and ``s > 0``.
    """
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    w = primitive(ints)
    i = next(k for k, x in enumerate(ints) if x)
    return w, Fraction(den * w[i], ints[i])


def dot(u: Sequence, v: Sequence):
    return sum((a * b for a, b in zip(u, v, strict=True)), 0)


# ---------------------------------------------------------------------------
# matrices


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def as_matrix(rows: Iterable[Iterable]) -> list[list]:
    m = [list(r) for r in rows]
    if m and any(len(r) != len(m[0]) for r in m):
        raise ExactArithmeticError("ragged matrix")
    return m


def shape(m: Sequence[Sequence]) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def transpose(m: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*m)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list[list]:
    bt = transpose(b)
    if a and b and len(a[0]) != len(b):
        raise ExactArithmeticError(f"shape mismatch {shape(a)} x {shape(b)}")
    if not bt:
        return [[] for _ in a]
    return [[dot(row, col) for col in bt] for row in a]


def matvec(a: Sequence[Sequence], v: Sequence) -> list:
    return [dot(row, v) for row in a]


def det(m: Sequence[Sequence]):
    """Exact determinant; fraction-free Bareiss elimination for integer input."""
    n, c = shape(m)
    if n != c:
        raise ExactArithmeticError("determinant of a non-square matrix")
    if n == 0:
        return 1
    integral = all(isinstance(x, int) for row in m for x in row)
    a = [list(r) if integral else [Fraction(x) for x in r] for r in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num // prev if integral else num / prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rref(m: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over the rationals; returns (R, pivot columns)."""
    a = [[Fraction(x) for x in row] for row in m]
    rows, cols = shape(a)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        pv = a[r][c]
        a[r] = [x / pv for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def rank(m: Sequence[Sequence]) -> int:
    if not m:
        return 0
    return len(rref(m)[1])


def solve_rational(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """One solution of ``a x = b`` with every free variable set to zero, or None."""
    rows, cols = shape(a)
    if rows == 0:
        return [Fraction(0)] * cols
    aug = [list(row) + [bi] for row, bi in zip(a, b, strict=True)]
    r, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for i, c in enumerate(pivots):
        x[c] = r[i][cols]
    return x


def rational_kernel(m: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of the right kernel over the rationals (one vector per free column)."""
    cols = ncols if ncols is not None else shape(m)[1]
    if not m:
        return [[Fraction(int(i == j)) for j in range(cols)] for i in range(cols)]
    r, pivots = rref(m)
    basis = []
    for free in (c for c in range(cols) if c not in pivots):
        v = [Fraction(0)] * cols
        v[free] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -r[i][free]
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# normal forms


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        return -a, -x0, -y0
    return a, x0, y0


def hermite_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U @ M == H``, ``U`` unimodular, ``H`` in row echelon
    form with positive pivots and every entry above a pivot reduced into
    ``[0, pivot)``.  Zero rows sit at the bottom.
    """
    h = [[int(x) for x in row] for row in m]
    rows, cols = shape(h)
    u = identity(rows)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        # fold every entry below row r into row r with 2x2 unimodular steps
        for i in range(r + 1, rows):
            if h[i][c] == 0:
                continue
            a, b = h[r][c], h[i][c]
            g, x, y = _ext_gcd(a, b)
            p, q = a // g, b // g
            # [[x, y], [-q, p]] has determinant x*p + y*q = 1
            h[r], h[i] = (
                [x * s + y * t for s, t in zip(h[r], h[i])],
                [-q * s + p * t for s, t in zip(h[r], h[i])],
            )
            u[r], u[i] = (
                [x * s + y * t for s, t in zip(u[r], u[i])],
                [-q * s + p * t for s, t in zip(u[r], u[i])],
            )
        if h[r][c] == 0:
            continue
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        piv = h[r][c]
        for i in range(r):
            f = h[i][c] // piv
            if f:
                h[i] = [s - f * t for s, t in zip(h[i], h[r])]
                u[i] = [s - f * t for s, t in zip(u[i], u[r])]
        r += 1
    return h, u


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``U @ M @ V == D``.

    ``D`` has the shape of ``M``, non-negative diagonal entries with
    ``d1 | d2 | ...`` and zeros elsewhere; ``U`` and ``V`` are unimodular.
    """
    d = [[int(x) for x in row] for row in m]
    rows, cols = shape(d)
    u = identity(rows)
    v = identity(cols)

    def row_combine(i, j, a, b, c, e):
        # rows (i, j) <- (a*ri + b*rj, c*ri + e*rj)
        for mat in (d, u):
            ri, rj = mat[i], mat[j]
            mat[i], mat[j] = (
                [a * s + b * t for s, t in zip(ri, rj)],
                [c * s + e * t for s, t in zip(ri, rj)],
            )

    def col_combine(i, j, a, b, c, e):
        for mat in (d, v):
            for row in mat:
                s, t = row[i], row[j]
                row[i], row[j] = a * s + b * t, c * s + e * t

    for k in range(min(rows, cols)):
        # pivot: smallest nonzero magnitude in the trailing block
        best = None
        for i in range(k, rows):
            for j in range(k, cols):
                if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i, j = best
        if i != k:
            row_combine(k, i, 0, 1, 1, 0)
        if j != k:
            col_combine(k, j, 0, 1, 1, 0)
        while True:
            done = True
            for i in range(k + 1, rows):
                if d[i][k]:
                    a, b = d[k][k], d[i][k]
                    if b % a == 0:
                        row_combine(k, i, 1, 0, -(b // a), 1)
                    else:
                        g, x, y = _ext_gcd(a, b)
                        row_combine(k, i, x, y, -b // g, a // g)
            for j in range(k + 1, cols):
                if d[k][j]:
                    a, b = d[k][k], d[k][j]
                    if b % a == 0:
                        col_combine(k, j, 1, 0, -(b // a), 1)
                    else:
                        g, x, y = _ext_gcd(a, b)
                        col_combine(k, j, x, y, -b // g, a // g)
            if any(d[i][k] for i in range(k + 1, rows)):
                done = False
            if done:
                # enforce divisibility of the remaining block by the pivot
                piv = d[k][k]
                bad = next(
                    ((i, j) for i in range(k + 1, rows) for j in range(k + 1, cols) if d[i][j] % piv),
                    None,
                )
                if bad is None:
                    break
                row_combine(k, bad[0], 1, 1, 0, 1)
        if d[k][k] < 0:
            for row in (d[k], u[k]):
                row[:] = [-x for x in row]
    return u, d, v


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form, in order."""
    _, d, _ = smith_normal_form(m)
    return [d[i][i] for i in range(min(shape(d))) if d[i][i]]


def integer_kernel(m: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    """Lattice basis (rows, in Hermite form) of ``{x in Z^n : M x = 0}``."""
    cols = ncols if ncols is not None else shape(m)[1]
    if not m:
        return identity(cols)
    # U @ M^T = H: rows of U beyond the rank annihilate M
    h, u = hermite_normal_form(transpose(m))
    r = sum(1 for row in h if any(row))
    basis = u[r:]
    if not basis:
        return []
    hb, _ = hermite_normal_form(basis)
    return [row for row in hb if any(row)]


def solve_integer(a: Sequence[Sequence[int]], b: Sequence[int]) -> list[int] | None:
    """Some integer solution of ``a x = b``, or None if none exists."""
    rows, cols = shape(a)
    u, d, v = smith_normal_form(a)
    ub = matvec(u, b)
    y = [0] * cols
    for i in range(rows):
        di = d[i][i] if i < cols else 0
        if di == 0:
            if ub[i] != 0:
                return None
        else:
            if ub[i] % di:
                return None
            y[i] = ub[i] // di
    return matvec(v, y)


# ---------------------------------------------------------------------------
# golden ring Q(phi), phi^2 = phi + 1


@total_ordering
class GoldenScalar:
    """Exact element ``a + b*phi`` of Q(phi) with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "b", Fraction(b))

    def __setattr__(self, name, value):
        raise AttributeError("GoldenScalar is immutable")

    @classmethod
    def phi(cls) -> GoldenScalar:
        return cls(0, 1)

    @staticmethod
    def _coerce(other) -> GoldenScalar | None:
        if isinstance(other, GoldenScalar):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return GoldenScalar(other, 0)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GoldenScalar(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return GoldenScalar(-self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return GoldenScalar(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, c, d = self.a, self.b, o.a, o.b
        return GoldenScalar(a * c + b * d, a * d + b * c + b * d)

    __rmul__ = __mul__

    def conjugate(self) -> GoldenScalar:
        """Galois conjugate: phi -> 1 - phi."""
        return GoldenScalar(self.a + self.b, -self.b)

    def norm(self) -> Fraction:
        return self.a * self.a + self.a * self.b - self.b * self.b

    def inverse(self) -> GoldenScalar:
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero has no inverse in Q(phi)")
        c = self.conjugate()
        return GoldenScalar(c.a / n, c.b / n)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def sign(self) -> int:
        # a + b*phi = (a + b/2) + (b/2)*sqrt(5)
        x, y = self.a + self.b / 2, self.b / 2
        sx = (x > 0) - (x < 0)
        sy = (y > 0) - (y < 0)
        if sx == sy or sy == 0:
            return sx
        if sx == 0:
            return sy
        # opposite signs: compare x^2 with 5 y^2
        lhs, rhs = x * x, 5 * y * y
        return sx if lhs > rhs else sy

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"GoldenScalar({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        return f"{self.a} + {self.b}*phi"
