"""Dense linear algebra over a finite field (matrices are lists of rows)."""
from __future__ import annotations

from .ffield import GF


def identity(n: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(F: GF, A, B):
    n, m, l = len(A), len(B), len(B[0])
    out = [[0] * l for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        row = out[i]
        for k in range(m):
            a = Ai[k]
            if a:
                Bk = B[k]
                for j in range(l):
                    if Bk[j]:
                        row[j] = F.add(row[j], F.mul(a, Bk[j]))
    return out


def rref(F: GF, A):
    """Reduced row echelon form; returns (R, pivot columns)."""
    R = [list(r) for r in A]
    rows = len(R)
    cols = len(R[0]) if R else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if R[i][c]), None)
        if piv is None:
            continue
        R[r], R[piv] = R[piv], R[r]
        inv = F.inv(R[r][c])
        R[r] = [F.mul(inv, x) for x in R[r]]
        for i in range(rows):
            if i != r and R[i][c]:
                f = R[i][c]
                R[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return R, pivots


def rank(F: GF, A) -> int:
    if not A:
        return 0
    return len(rref(F, A)[1])


def row_space(F: GF, vectors, dim: int) -> tuple[tuple[int, ...], ...]:
    """Canonical (RREF, nonzero rows) basis of the span of `vectors`."""
    if not vectors:
        return ()
    R, piv = rref(F, vectors)
    return tuple(tuple(R[i]) for i in range(len(piv)))


def nullspace(F: GF, A, ncols: int | None = None):
    """Basis of {x : A x = 0} as a list of column vectors (lists)."""
    ncols = ncols if ncols is not None else (len(A[0]) if A else 0)
    if not A:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    R, piv = rref(F, A)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for i, pc in enumerate(piv):
            v[pc] = F.neg(R[i][f])
        basis.append(v)
    return basis


def det(F: GF, A) -> int:
    M = [list(r) for r in A]
    n = len(M)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if M[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = F.neg(d)
        d = F.mul(d, M[c][c])
        inv = F.inv(M[c][c])
        for i in range(c + 1, n):
            if M[i][c]:
                f = F.mul(M[i][c], inv)
                M[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(M[i], M[c])]
    return d


def inverse(F: GF, A):
    n = len(A)
    aug = [list(A[i]) + identity(n)[i] for i in range(n)]
    R, piv = rref(F, aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix over finite field")
    return [row[n:] for row in R]
