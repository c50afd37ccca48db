"""Dense exact linear algebra over a cyclotomic field.

Matrices are tuples of row tuples of CycNum.  Nothing here is clever; the
matrices are at most a few hundred columns wide.
"""

from __future__ import annotations

from .exactnum import CycNum, CyclotomicField


def mat(F: CyclotomicField, rows) -> tuple:
    return tuple(tuple(F(c) for c in row) for row in rows)


def identity(F: CyclotomicField, n: int) -> tuple:
    return tuple(tuple(F.one if i == j else F.zero for j in range(n)) for i in range(n))


def matmul(A, B) -> tuple:
    F = A[0][0].field
    mod, deg = F.modulus, F.degree
    Bt = list(zip(*B))
    out = []
    for row in A:
        new = []
        for col in Bt:
            acc = None
            for a, b in zip(row, col):
                if a.poly.is_zero() or b.poly.is_zero():
                    continue
                p = a.poly * b.poly
                acc = p if acc is None else acc + p
            if acc is None:
                new.append(F.zero)
            else:
                if acc.degree() >= deg:
                    acc = acc % mod
                new.append(CycNum(F, acc))
        out.append(tuple(new))
    return tuple(out)


def matvec(A, v) -> tuple:
    return tuple(sum((a * b for a, b in zip(row, v)), A[0][0].field.zero) for row in A)


def transpose(A) -> tuple:
    return tuple(zip(*A))


def scale(A, c) -> tuple:
    return tuple(tuple(a * c for a in row) for row in A)


def sub(A, B) -> tuple:
    return tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(A, B))


def rref(A):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    M = [list(r) for r in A]
    if not M:
        return [], []
    nrows, ncols = len(M), len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, nrows) if M[i][c]), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = M[r][c].inverse()
        M[r] = [x * inv for x in M[r]]
        for i in range(nrows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return [tuple(row) for row in M[:r]], pivots


def rank(A) -> int:
    return len(rref(A)[1])


def nullspace(A, F: CyclotomicField | None = None) -> list[tuple]:
    """Basis of {v : A v = 0}, in reduced echelon form (first nonzero entry 1)."""
    if not A:
        raise ValueError("empty matrix")
    F = F or A[0][0].field
    ncols = len(A[0])
    R, piv = rref(A)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [F.zero] * ncols
        v[f] = F.one
        for row, p in zip(R, piv):
            v[p] = -row[f]
        basis.append(v)
    # echelon form of the basis itself, for a canonical choice
    if not basis:
        return []
    E, _ = rref(basis)
    return [tuple(r) for r in E]


def inverse(A) -> tuple:
    n = len(A)
    F = A[0][0].field
    aug = [list(A[i]) + [F.one if i == j else F.zero for j in range(n)] for i in range(n)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return tuple(tuple(r[n:]) for r in R)


def det(A) -> CycNum:
    M = [list(r) for r in A]
    n = len(M)
    F = M[0][0].field
    d = F.one
    for c in range(n):
        p = next((i for i in range(c, n) if M[i][c]), None)
        if p is None:
            return F.zero
        if p != c:
            M[c], M[p] = M[p], M[c]
            d = -d
        d = d * M[c][c]
        inv = M[c][c].inverse()
        for i in range(c + 1, n):
            if M[i][c]:
                f = M[i][c] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return d


def solve(A, b):
    """One solution of A x = b, or None."""
    F = A[0][0].field
    n = len(A[0])
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    R, piv = rref(aug)
    if n in piv:
        return None
    x = [F.zero] * n
    for row, p in zip(R, piv):
        x[p] = row[n]
    return x


def key(A) -> tuple:
    """Hashable canonical form of a matrix."""
    return tuple(tuple(tuple(c.poly.coeffs()) for c in row) for row in A)
