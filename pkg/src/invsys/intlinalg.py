"""Exact integer linear algebra: matrices, Smith normal form, lattices.

All entries are Python ints, so intermediate blow-up during elimination is
harmless.  The Smith routine returns the full transform pair (U, D, V) with
U*m*V = D, both transforms unimodular, and the diagonal in a divisibility
chain; pivots are chosen by smallest nonzero absolute value with row-major
tie-breaking, which keeps the run deterministic and the entries tame.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence


@dataclass(frozen=True)
class IntMatrix:
    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows:
            raise ValueError("row count mismatch")
        if any(len(r) != self.cols for r in self.entries):
            raise ValueError("ragged rows")

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], cols: Optional[int] = None) -> "IntMatrix":
        data = tuple(tuple(int(v) for v in r) for r in rows)
        if data:
            c = len(data[0])
        else:
            c = 0 if cols is None else cols
        return IntMatrix(len(data), c, data)

    @staticmethod
    def from_cols(cols: Sequence[Sequence[int]], rows: Optional[int] = None) -> "IntMatrix":
        if cols:
            r = len(cols[0])
        else:
            r = 0 if rows is None else rows
        return IntMatrix(r, len(cols),
                         tuple(tuple(int(c[i]) for c in cols) for i in range(r)))

    @staticmethod
    def identity(n: int) -> "IntMatrix":
        return IntMatrix(n, n, tuple(tuple(int(i == j) for j in range(n))
                                     for i in range(n)))

    @staticmethod
    def zeros(r: int, c: int) -> "IntMatrix":
        return IntMatrix(r, c, tuple(tuple(0 for _ in range(c)) for _ in range(r)))

    def col(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.col(j) for j in range(self.cols)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(self.cols, self.rows,
                         tuple(tuple(self.entries[i][j] for i in range(self.rows))
                               for j in range(self.cols)))

    def mul(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch")
        ot = other.transpose().entries
        return IntMatrix(self.rows, other.cols,
                         tuple(tuple(sum(a * b for a, b in zip(row, col))
                                     for col in ot)
                               for row in self.entries))

    def apply(self, vec: Sequence[int]) -> tuple[int, ...]:
        if len(vec) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(sum(a * b for a, b in zip(row, vec)) for row in self.entries)

    def hstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.rows != other.rows:
            raise ValueError("dimension mismatch")
        return IntMatrix(self.rows, self.cols + other.cols,
                         tuple(r1 + r2 for r1, r2 in zip(self.entries, other.entries)))

    def vstack(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.cols:
            raise ValueError("dimension mismatch")
        return IntMatrix(self.rows + other.rows, self.cols, self.entries + other.entries)

    def neg(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols,
                         tuple(tuple(-v for v in r) for r in self.entries))

    def is_zero(self) -> bool:
        return all(v == 0 for r in self.entries for v in r)


def det(m: IntMatrix) -> int:
    """Determinant by fraction-free Bareiss elimination."""
    if m.rows != m.cols:
        raise ValueError("determinant of non-square matrix")
    n = m.rows
    if n == 0:
        return 1
    a = [list(r) for r in m.entries]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(m: IntMatrix) -> bool:
    return m.rows == m.cols and det(m) in (1, -1)


@lru_cache(maxsize=8192)
def smith_normal_form(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U*m*V = D in Smith normal form.

    D is diagonal with nonnegative entries d1 | d2 | ...; U and V are
    unimodular.  Cached: IntMatrix is hashable and callers re-solve against
    the same matrix repeatedly.
    """
    r, c = m.rows, m.cols
    a = [list(row) for row in m.entries]
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    v = [[int(i == j) for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def row_addmul(i, j, q):  # row_i += q * row_j
        a[i] = [x + q * y for x, y in zip(a[i], a[j])]
        u[i] = [x + q * y for x, y in zip(u[i], u[j])]

    def col_addmul(i, j, q):  # col_i += q * col_j
        for row in a:
            row[i] += q * row[j]
        for row in v:
            row[i] += q * row[j]

    t = 0
    while t < min(r, c):
        # smallest nonzero absolute value, ties in row-major position
        pivot = None
        for i in range(t, r):
            for j in range(t, c):
                if a[i][j] != 0 and (pivot is None
                                     or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        if pivot[0] != t:
            swap_rows(pivot[0], t)
        if pivot[1] != t:
            swap_cols(pivot[1], t)
        while True:
            p = a[t][t]
            restart = False
            for i in range(t + 1, r):
                if a[i][t] % p != 0:
                    row_addmul(i, t, -(a[i][t] // p))
                    swap_rows(i, t)  # remainder is a strictly smaller pivot
                    restart = True
                    break
            if restart:
                continue
            for i in range(t + 1, r):
                if a[i][t] != 0:
                    row_addmul(i, t, -(a[i][t] // p))
            for j in range(t + 1, c):
                if a[t][j] % p != 0:
                    col_addmul(j, t, -(a[t][j] // p))
                    swap_cols(j, t)
                    restart = True
                    break
            if restart:
                continue
            for j in range(t + 1, c):
                if a[t][j] != 0:
                    col_addmul(j, t, -(a[t][j] // p))
            if any(a[i][t] != 0 for i in range(t + 1, r)):
                continue  # column ops re-dirtied the pivot column
            if any(a[t][j] != 0 for j in range(t + 1, c)):
                continue
            offender = None
            for i in range(t + 1, r):
                if any(a[i][j] % p != 0 for j in range(t + 1, c)):
                    offender = i
                    break
            if offender is None:
                break
            row_addmul(t, offender, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return (IntMatrix.from_rows(u, cols=r),
            IntMatrix.from_rows(a, cols=c),
            IntMatrix.from_rows(v, cols=c))


def invariant_factors(m: IntMatrix) -> list[int]:
    """Nonzero diagonal entries of the Smith form, in divisibility order."""
    _, d, _ = smith_normal_form(m)
    return [d.entries[i][i] for i in range(min(m.rows, m.cols))
            if d.entries[i][i] != 0]


def rank(m: IntMatrix) -> int:
    return len(invariant_factors(m))


def solve(m: IntMatrix, b: Sequence[int]) -> Optional[tuple[int, ...]]:
    """One integer solution x of m x = b, or None."""
    if len(b) != m.rows:
        raise ValueError("dimension mismatch")
    u, d, v = smith_normal_form(m)
    c = u.apply(b)
    y = [0] * m.cols
    for i in range(m.rows):
        di = d.entries[i][i] if i < m.cols else 0
        if di != 0:
            if c[i] % di != 0:
                return None
            y[i] = c[i] // di
        elif c[i] != 0:
            return None
    return v.apply(y)


def lll_reduce(vectors: list[tuple[int, ...]]) -> list[tuple[int, ...]]:
    """Shorter basis of the same lattice (entries in V can be huge).

    Requires linearly independent vectors; delegated to sympy's exact LLL.
    """
    if len(vectors) <= 1:
        return vectors
    from sympy.polys.domains import ZZ
    from sympy.polys.matrices import DomainMatrix
    dm = DomainMatrix.from_list([[ZZ(x) for x in v] for v in vectors], ZZ)
    return [tuple(int(x) for x in row) for row in dm.lll().to_list()]


def kernel_basis(m: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of the integer kernel lattice {x : m x = 0}, LLL-shortened."""
    _, d, v = smith_normal_form(m)
    out = []
    for j in range(m.cols):
        dj = d.entries[j][j] if j < m.rows else 0
        if dj == 0:
            out.append(v.col(j))
    return lll_reduce(out)


def relative_kernel(m: IntMatrix, lat: IntMatrix) -> IntMatrix:
    """Generators (as columns) of {x : m x lies in the column span of lat}.

    lat must have the same row count as m; the result has m.cols rows.
    """
    if lat.cols == 0:
        ker = kernel_basis(m)
        return IntMatrix.from_cols(ker, rows=m.cols)
    if m.rows != lat.rows:
        raise ValueError("dimension mismatch")
    combined = m.hstack(lat)
    projected = [k[: m.cols] for k in kernel_basis(combined)]
    cols = [p for p in projected if any(p)]
    return IntMatrix.from_cols(cols, rows=m.cols)


def in_lattice(lat: IntMatrix, vec: Sequence[int]) -> bool:
    """Whether vec lies in the column span of lat over the integers."""
    if lat.cols == 0:
        return not any(vec)
    return solve(lat, vec) is not None


def lattice_contains(outer: IntMatrix, inner: IntMatrix) -> bool:
    """Column span of inner is a sublattice of the column span of outer."""
    return all(in_lattice(outer, inner.col(j)) for j in range(inner.cols))


def inverse_unimodular(m: IntMatrix) -> IntMatrix:
    """Exact integer inverse of a unimodular matrix."""
    if not is_unimodular(m):
        raise ValueError("matrix is not unimodular")
    cols = []
    n = m.rows
    for j in range(n):
        e = [int(i == j) for i in range(n)]
        x = solve(m, e)
        assert x is not None
        cols.append(x)
    return IntMatrix.from_cols(cols, rows=n)
