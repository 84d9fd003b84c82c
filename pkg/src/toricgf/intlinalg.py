"""Exact integer linear algebra.

Everything here operates on matrices given as lists of rows of Python ints
and stays in arbitrary precision integer arithmetic throughout.  These
routines back all of the cone geometry and homology computations, which are
meaningless if rounded.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

Vector = tuple[int, ...]
Matrix = list[list[int]]


def identity_matrix(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def zero_matrix(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def dot(u, v) -> int:
    return sum(x * y for x, y in zip(u, v))


def matvec(a: Matrix, v) -> list[int]:
    return [dot(row, v) for row in a]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return [[dot(row, col) for col in bt] for row in a]


def is_zero_matrix(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


def determinant(a: Matrix) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant requires a square matrix")
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rank(rows) -> int:
    """Rank over the rationals, by fraction-free row elimination."""
    m = [list(r) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    prev = 1
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        for i in range(r + 1, len(m)):
            if m[i][c] == 0:
                continue
            for j in range(c + 1, ncols):
                m[i][j] = (m[i][j] * m[r][c] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        if r == len(m):
            break
    return r


def adjugate(a: Matrix) -> Matrix:
    """Adjugate matrix, so that a @ adjugate(a) == det(a) * I."""
    n = len(a)
    if n == 0:
        return []
    adj = zero_matrix(n, n)
    for i in range(n):
        for j in range(n):
            minor = [[a[r][c] for c in range(n) if c != j]
                     for r in range(n) if r != i]
            adj[j][i] = (-1) ** (i + j) * determinant(minor)
    return adj


def primitive_vector(v) -> Vector:
    """Divide a nonzero integer vector by the gcd of its entries."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive representative")
    return tuple(x // g for x in v)


@dataclass
class SNFResult:
    """Smith normal form decomposition U @ A @ V == D.

    D is diagonal with nonnegative entries d_1 | d_2 | ..., and U, V are
    unimodular.
    """

    D: Matrix
    U: Matrix
    V: Matrix

    def diagonal(self) -> list[int]:
        k = min(len(self.D), len(self.D[0]) if self.D else 0)
        return [self.D[i][i] for i in range(k)]


def _smith(a: Matrix, track: bool):
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [row[:] for row in a]
    u = identity_matrix(rows) if track else None
    v = identity_matrix(cols) if track else None

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        if track:
            u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        if track:
            for row in v:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row[dst] -= q * row[src]
        mdst, msrc = m[dst], m[src]
        for j in range(cols):
            mdst[j] -= q * msrc[j]
        if track:
            udst, usrc = u[dst], u[src]
            for j in range(rows):
                udst[j] -= q * usrc[j]

    def add_col(dst, src, q):
        for row in m:
            row[dst] -= q * row[src]
        if track:
            for row in v:
                row[dst] -= q * row[src]

    def negate_row(i):
        m[i] = [-x for x in m[i]]
        if track:
            u[i] = [-x for x in u[i]]

    t = 0
    while t < min(rows, cols):
        # Smallest nonzero pivot in the trailing submatrix limits entry growth.
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = m[i][j]
                if x != 0 and (pivot is None or abs(x) < abs(m[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        if pivot[0] != t:
            swap_rows(t, pivot[0])
        if pivot[1] != t:
            swap_cols(t, pivot[1])

        while True:
            # Clear the pivot column, then the pivot row; repeat until both
            # are clear (a smaller remainder can reopen the other one).
            dirty = False
            for i in range(t + 1, rows):
                if m[i][t] != 0:
                    q = m[i][t] // m[t][t]
                    add_row(i, t, q)
                    if m[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, cols):
                if m[t][j] != 0:
                    q = m[t][j] // m[t][t]
                    add_col(j, t, q)
                    if m[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
            if not dirty:
                break

        # Enforce the divisibility chain: fold any bad entry into the pivot.
        p = m[t][t]
        bad = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if m[i][j] % p != 0:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            add_row(t, bad, -1)
            continue

        if m[t][t] < 0:
            negate_row(t)
        t += 1

    diag = [m[i][i] for i in range(min(rows, cols))]
    return diag, m, u, v


def smith_normal_form(a: Matrix) -> SNFResult:
    """Smith normal form with unimodular transforms, U @ A @ V == D."""
    _, d, u, v = _smith(a, track=True)
    return SNFResult(D=d, U=u, V=v)


def invariant_factors(a: Matrix) -> list[int]:
    """Nonzero diagonal of the Smith normal form (no transforms tracked)."""
    diag, _, _, _ = _smith(a, track=False)
    return [x for x in diag if x != 0]


def rank_mod_p(a: Matrix, p: int) -> int:
    """Rank of the matrix over the field with p elements."""
    return sum(1 for x in invariant_factors(a) if x % p != 0)


def _solve_via_snf(a: Matrix, b, integral: bool):
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if len(b) != rows:
        raise ValueError("right hand side length does not match row count")
    if rows == 0:
        return tuple([0] * cols)
    res = smith_normal_form(a)
    c = matvec(res.U, list(b))
    y = [0] * cols
    for i in range(rows):
        d = res.D[i][i] if i < cols else 0
        if d == 0:
            if c[i] != 0:
                return None
        elif integral:
            if c[i] % d != 0:
                return None
            y[i] = c[i] // d
    if not integral:
        return tuple(y)  # witness only; rational solvability established
    x = matvec(res.V, y)
    return tuple(x)


def solve_integral(a: Matrix, b) -> Vector | None:
    """One integer solution x of a @ x == b, or None if none exists."""
    return _solve_via_snf(a, b, integral=True)


def rationally_solvable(a: Matrix, b) -> bool:
    """Whether a @ x == b has any solution over the rationals."""
    return _solve_via_snf(a, b, integral=False) is not None


def kernel_basis(a: Matrix, cols: int | None = None) -> list[Vector]:
    """Basis of the integer kernel lattice {x : a @ x == 0}."""
    if not a:
        if cols is None:
            raise ValueError("cols is required for an empty matrix")
        return [tuple(row) for row in identity_matrix(cols)]
    res = smith_normal_form(a)
    ncols = len(a[0])
    r = sum(1 for x in res.diagonal() if x != 0)
    vt = transpose(res.V)
    return [tuple(vt[j]) for j in range(r, ncols)]


def unimodular_inverse(u: Matrix) -> Matrix:
    """Exact inverse of a matrix with determinant +-1."""
    d = determinant(u)
    if d not in (1, -1):
        raise ValueError("matrix is not unimodular")
    adj = adjugate(u)
    if d == -1:
        adj = [[-x for x in row] for row in adj]
    return adj
