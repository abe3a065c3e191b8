"""Exact linear algebra over Scalar fields and over the integers.

Field matrices are tuples of row tuples of Scalars.  Integer matrices are
lists of lists of Python ints.  Elimination over fields is fraction-free
(Bareiss), which keeps rational-function entries small.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .errors import SingularBasis
from .scalar import Field, Scalar, common_field

Vector = tuple  # tuple[Scalar, ...]
Matrix = tuple  # tuple[Vector, ...]


# -- field matrices --------------------------------------------------------

def dot(u: Sequence, v: Sequence):
    total = 0
    for a, b in zip(u, v):
        if a and b:
            total = a * b + total
    if isinstance(total, int):
        field = common_field([x for x in (*u, *v) if isinstance(x, Scalar)])
        return field(total)
    return total


def mat_vec(M: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(dot(row, v) for row in M)


def transpose(M: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*M)) if M else ()


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    cols = transpose(B)
    return tuple(tuple(dot(row, col) for col in cols) for row in A)


def identity(field: Field, n: int) -> Matrix:
    return tuple(tuple(field.one if i == j else field.zero for j in range(n)) for i in range(n))


def is_identity(M: Sequence[Sequence]) -> bool:
    return all(x == (1 if i == j else 0) for i, row in enumerate(M) for j, x in enumerate(row))


def columns_matrix(vectors: Sequence[Vector]) -> Matrix:
    """Matrix whose columns are the given vectors."""
    return transpose(vectors)


def _field_of(M) -> Field:
    return common_field([x for row in M for x in row])


def _echelon(M: Sequence[Sequence]) -> tuple[list[list], list[int], Scalar, int]:
    """Fraction-free row echelon form.

    Returns (rows, pivot_columns, last_pivot, swap_parity).
    """
    field = _field_of(M)
    A = [[field(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    prev = field.one
    pivots = []
    swaps = 0
    r = 0
    for c in range(n):
        if r == m:
            break
        p = next((i for i in range(r, m) if not A[i][c].is_zero()), None)
        if p is None:
            continue
        if p != r:
            A[r], A[p] = A[p], A[r]
            swaps += 1
        piv = A[r][c]
        for i in range(r + 1, m):
            lead = A[i][c]
            for j in range(c + 1, n):
                A[i][j] = (piv * A[i][j] - lead * A[r][j]) / prev
            A[i][c] = field.zero
            if lead.is_zero():
                # rows with a zero lead are only rescaled
                pass
        prev = piv
        pivots.append(c)
        r += 1
    return A, pivots, prev, swaps


def rank(M: Sequence[Sequence]) -> int:
    if not M or not M[0]:
        return 0
    return len(_echelon(M)[1])


def det(M: Sequence[Sequence]) -> Scalar:
    n = len(M)
    if n == 0:
        return Field()(1)
    A, pivots, last, swaps = _echelon(M)
    if len(pivots) < n:
        return _field_of(M).zero
    return -last if swaps % 2 else last


def solve(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    """X with A X = B for square invertible A (fraction-free forward pass)."""
    n = len(A)
    k = len(B[0]) if B else 0
    aug = [list(A[i]) + list(B[i]) for i in range(n)]
    E, pivots, _, _ = _echelon(aug)
    if pivots[:n] != list(range(n)):
        raise SingularBasis("matrix is singular")
    field = _field_of(aug)
    X = [[field.zero] * k for _ in range(n)]
    for i in range(n - 1, -1, -1):
        piv = E[i][i]
        for j in range(k):
            acc = E[i][n + j]
            for t in range(i + 1, n):
                if not E[i][t].is_zero():
                    acc = acc - E[i][t] * X[t][j]
            X[i][j] = acc / piv
    return tuple(tuple(row) for row in X)


def inverse(A: Sequence[Sequence]) -> Matrix:
    field = _field_of(A)
    return solve(A, identity(field, len(A)))


def dual_basis(vectors: Sequence[Vector]) -> Matrix:
    """Covectors alpha_1..alpha_n with alpha_i(v_j) = delta_ij.

    ``vectors`` are the basis vectors v_1..v_n; the result rows are the
    dual covectors in the standard coordinates e_1^*, ..., e_n^*.
    """
    n = len(vectors)
    if any(len(v) != n for v in vectors):
        raise SingularBasis("need n vectors in R^n")
    B = columns_matrix(vectors)
    if det(B).is_zero():
        raise SingularBasis("basis vectors are linearly dependent")
    return inverse(B)


def coordinates(dual: Matrix, x: Vector) -> Vector:
    return mat_vec(dual, x)


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v: Vector) -> Vector:
    return tuple(c * x for x in v)


def lin_comb(coeffs: Sequence, vectors: Sequence[Vector]) -> Vector:
    n = len(vectors[0])
    out = [0] * n
    for c, v in zip(coeffs, vectors):
        if c:
            for i in range(n):
                out[i] = c * v[i] + out[i]
    field = common_field([x for v in vectors for x in v if isinstance(x, Scalar)])
    return tuple(field(x) for x in out)


# -- integer lattices --------------------------------------------------------

def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with x*a + y*b = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def int_identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def int_mat_mul(A, B):
    cols = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in cols] for row in A]


def hnf(M: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Row Hermite normal form: (H, U) with H = U*M and U unimodular.

    Pivots are positive, entries above a pivot lie in [0, pivot), zero
    rows come last.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    H = [[int(x) for x in row] for row in M]
    U = int_identity(m)
    r = 0
    for c in range(n):
        if r == m:
            break
        for i in range(r + 1, m):
            b = H[i][c]
            if b == 0:
                continue
            a = H[r][c]
            g, x, y = xgcd(a, b)
            p, q = -b // g, a // g
            for T in (H, U):
                Tr, Ti = T[r], T[i]
                T[r] = [x * s + y * t for s, t in zip(Tr, Ti)]
                T[i] = [p * s + q * t for s, t in zip(Tr, Ti)]
        if H[r][c] == 0:
            continue
        if H[r][c] < 0:
            H[r] = [-s for s in H[r]]
            U[r] = [-s for s in U[r]]
        piv = H[r][c]
        for i in range(r):
            q = H[i][c] // piv
            if q:
                H[i] = [s - q * t for s, t in zip(H[i], H[r])]
                U[i] = [s - q * t for s, t in zip(U[i], U[r])]
        r += 1
    return H, U


class IntLattice:
    """Z-span of integer row vectors, prepared for repeated membership tests."""

    def __init__(self, gens: Sequence[Sequence[int]]):
        self.gens = [list(map(int, g)) for g in gens]
        self.dim = len(self.gens[0]) if self.gens else 0
        H, U = hnf(self.gens) if self.gens else ([], [])
        self.rank = sum(1 for row in H if any(row))
        self.basis = H[: self.rank]
        self.transform = U[: self.rank]
        self.pivots = [next(j for j, x in enumerate(row) if x) for row in self.basis]

    def coordinates(self, v: Sequence[int]) -> list[int] | None:
        """Integer c with sum c_i gens_i = v, or None."""
        res = list(map(int, v))
        if len(res) != self.dim:
            raise ValueError("dimension mismatch")
        y = []
        for row, p in zip(self.basis, self.pivots):
            if any(res[:p]):
                return None
            q, rem = divmod(res[p], row[p])
            if rem:
                return None
            y.append(q)
            if q:
                res = [s - q * t for s, t in zip(res, row)]
        if any(res):
            return None
        m = len(self.gens)
        return [sum(y[i] * self.transform[i][j] for i in range(self.rank)) for j in range(m)]


def lattice_membership(v: Sequence[int], gens: Sequence[Sequence[int]]) -> list[int] | None:
    """Integer coordinates c with c^T gens = v when v is in the Z-span, else None."""
    if not gens:
        return [] if not any(v) else None
    return IntLattice(gens).coordinates(v)


def snf(M: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form (D, U, V) with D = U*M*V and d_1 | d_2 | ... ."""
    m = len(M)
    n = len(M[0]) if m else 0
    D = [[int(x) for x in row] for row in M]
    U = int_identity(m)
    V = int_identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q*row_src
        D[dst] = [a + q * b for a, b in zip(D[dst], D[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q*col_src
        for row in D:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            nonzero = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not nonzero:
                break
            _, i, j = min(nonzero)
            swap_rows(t, i)
            swap_cols(t, j)
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // D[t][t]))
                    if D[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // D[t][t]))
                    if D[t][j]:
                        clean = False
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if D[i][j] % D[t][t]), None
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return D, U, V


def invariant_factors(M: Sequence[Sequence[int]]) -> list[int]:
    D, _, _ = snf(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def rational_rows_to_int(rows: Sequence[Sequence[Fraction]]) -> tuple[int, list[list[int]]]:
    """Scale rational rows by the lcm L of all denominators: (L, L*rows)."""
    L = 1
    for row in rows:
        for x in row:
            L = lcm(L, Fraction(x).denominator)
    return L, [[int(Fraction(x) * L) for x in row] for row in rows]


def quotient_invariants(sup: Sequence[Sequence[int]], sub: Sequence[Sequence[int]]) -> list[int]:
    """Invariant factors of span(sup)/span(sub); 0 marks an infinite cyclic factor.

    ``sub`` must lie in span(sup).  Trivial factors (1) are dropped.
    """
    lat = IntLattice(sup)
    coords = []
    for row in sub:
        c = IntLattice(lat.basis).coordinates(row)
        if c is None:
            raise ValueError("sublattice is not contained in the lattice")
        coords.append(c)
    if not coords:
        return [0] * lat.rank
    factors = invariant_factors(coords)
    factors += [0] * (lat.rank - len(factors))
    return [d for d in factors if d != 1]
