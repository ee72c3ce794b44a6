"""Exact linear algebra over Q and Z, backed by python-flint."""
from fractions import Fraction

import flint


def to_fmpq(x):
    if isinstance(x, Fraction):
        return flint.fmpq(x.numerator, x.denominator)
    return flint.fmpq(x)


def from_fmpq(x):
    x = flint.fmpq(x)
    return Fraction(int(x.p), int(x.q))


def fmpq_matrix(rows, ncols=None):
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    return flint.fmpq_mat(len(rows), ncols, [to_fmpq(x) for r in rows for x in r])


def rref(rows, ncols=None):
    """Row reduced echelon form: (rows as Fractions, pivot columns)."""
    if not rows:
        return [], []
    m = fmpq_matrix(rows, ncols)
    r, rank = m.rref()
    out = [[from_fmpq(r[i, j]) for j in range(r.ncols())] for i in range(rank)]
    pivots = []
    for row in out:
        pivots.append(next(j for j, v in enumerate(row) if v != 0))
    return out, pivots


def nullspace(rows, ncols, with_free=False):
    """Basis of {x : A x = 0} as a list of Fraction vectors.

    Basis vector k has a 1 in the k-th free column and 0 in the others,
    which keeps the entries small and the choice canonical. With
    with_free=True the free column indices are returned as well.
    """
    red, piv = rref(rows, ncols) if rows else ([], [])
    free = [j for j in range(ncols) if j not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, piv):
            v[p] = -row[f]
        basis.append(v)
    if with_free:
        return basis, free
    return basis


def solve(rows, rhs):
    """Unique solution of a square nonsingular system, as Fractions."""
    n = len(rows)
    a = fmpq_matrix(rows, n)
    b = flint.fmpq_mat(n, 1, [to_fmpq(x) for x in rhs])
    x = a.solve(b)
    return [from_fmpq(x[i, 0]) for i in range(n)]


def rank(rows, ncols=None):
    if not rows:
        return 0
    return fmpq_matrix(rows, ncols).rref()[1]


def int_matrix(rows, ncols):
    return flint.fmpz_mat(len(rows), ncols, [int(x) for r in rows for x in r])


def int_left_kernel(rows, nrows, ncols):
    """Integer basis (as rows) of {y : y A = 0} for an nrows x ncols integer A.

    The basis is LLL-reduced so entries stay small under repeated use.
    """
    if nrows == 0:
        return []
    if ncols == 0:
        return [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]
    at = flint.fmpz_mat(ncols, nrows, [int(rows[i][j]) for j in range(ncols) for i in range(nrows)])
    ker, nullity = at.nullspace()
    if nullity == 0:
        return []
    basis = flint.fmpz_mat(nullity, nrows, [int(ker[i, k]) for k in range(nullity) for i in range(nrows)])
    basis = basis.lll()
    return [[int(basis[k, i]) for i in range(nrows)] for k in range(nullity)]


def int_nullspace(rows, nrows, ncols):
    """Integer basis (as vectors) of {x : A x = 0}."""
    if ncols == 0:
        return []
    if nrows == 0:
        return [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]
    a = flint.fmpz_mat(nrows, ncols, [int(x) for r in rows for x in r])
    ker, nullity = a.nullspace()
    if nullity == 0:
        return []
    basis = flint.fmpz_mat(nullity, ncols, [int(ker[i, k]) for k in range(nullity) for i in range(ncols)])
    basis = basis.lll()
    return [[int(basis[k, i]) for i in range(ncols)] for k in range(nullity)]


def int_rank(rows, nrows, ncols):
    if nrows == 0 or ncols == 0:
        return 0
    return flint.fmpz_mat(nrows, ncols, [int(x) for r in rows for x in r]).rank()
