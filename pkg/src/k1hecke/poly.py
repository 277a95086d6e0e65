"""Laurent polynomials over a finite field and small matrices of them.

A Laurent polynomial is stored as (val, coeffs): the element
sum_j coeffs[j] z^{val+j}.  coeffs is trimmed at both ends; zero has
no coefficients.
"""
from __future__ import annotations

from .arith.ffield import GF
from .arith import fqlinalg


class Laurent:
    __slots__ = ("F", "val", "c")

    def __init__(self, F: GF, coeffs=(), val: int = 0):
        c = list(coeffs)
        lo = 0
        while lo < len(c) and c[lo] == 0:
            lo += 1
        hi = len(c)
        while hi > lo and c[hi - 1] == 0:
            hi -= 1
        self.F = F
        self.c = tuple(c[lo:hi])
        self.val = val + lo if self.c else 0

    @classmethod
    def const(cls, F, a):
        return cls(F, (a,))

    @classmethod
    def monomial(cls, F, a, n):
        return cls(F, (a,), n)

    @classmethod
    def from_dict(cls, F, d):
        if not d:
            return cls(F)
        lo, hi = min(d), max(d)
        return cls(F, [d.get(e, 0) for e in range(lo, hi + 1)], lo)

    # -- queries --------------------------------------------------------
    def is_zero(self):
        return not self.c

    @property
    def top(self):
        """Largest exponent (degree for polynomials)."""
        return self.val + len(self.c) - 1 if self.c else None

    def coeff(self, n: int) -> int:
        j = n - self.val
        return self.c[j] if 0 <= j < len(self.c) else 0

    def is_polynomial(self):
        return not self.c or self.val >= 0

    def is_monomial(self):
        return len(self.c) == 1

    def at_zero(self) -> int:
        if self.c and self.val < 0:
            raise ValueError("pole at 0")
        return self.coeff(0)

    def at_infinity(self) -> int:
        if self.c and self.top > 0:
            raise ValueError("pole at infinity")
        return self.coeff(0)

    def __eq__(self, other):
        return isinstance(other, Laurent) and self.val == other.val and self.c == other.c

    def __hash__(self):
        return hash((self.val, self.c))

    def key(self):
        return (self.val, self.c)

    def __repr__(self):
        if not self.c:
            return "0"
        return " + ".join(f"{a}z^{self.val + j}" for j, a in enumerate(self.c) if a)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        F = self.F
        if not self.c:
            return other
        if not other.c:
            return self
        lo = min(self.val, other.val)
        hi = max(self.top, other.top)
        out = [0] * (hi - lo + 1)
        for j, a in enumerate(self.c):
            out[self.val - lo + j] = a
        for j, a in enumerate(other.c):
            k = other.val - lo + j
            out[k] = F.add(out[k], a)
        return Laurent(F, out, lo)

    def __neg__(self):
        return Laurent(self.F, [self.F.neg(a) for a in self.c], self.val)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.F
        if not self.c or not other.c:
            return Laurent(F)
        out = [0] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a:
                for j, b in enumerate(other.c):
                    if b:
                        out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Laurent(F, out, self.val + other.val)

    def scale(self, a: int):
        F = self.F
        return Laurent(F, [F.mul(a, x) for x in self.c], self.val)

    def shift(self, n: int):
        return Laurent(self.F, self.c, self.val + n) if self.c else self

    def invert_variable(self):
        """f(z) -> f(z^{-1})."""
        if not self.c:
            return self
        return Laurent(self.F, tuple(reversed(self.c)), -self.top)

    def truncate(self, P: int):
        """Drop all terms of exponent >= P."""
        if not self.c or self.top < P:
            return self
        return Laurent(self.F, self.c[: max(P - self.val, 0)], self.val)

    def monic_divmod(self, other):
        """Polynomial division; both must be polynomials, other nonzero."""
        F = self.F
        if not self.is_polynomial() or not other.is_polynomial():
            raise ValueError("division needs polynomials")
        a = [self.coeff(e) for e in range((self.top or 0) + 1)] if self.c else []
        b = [other.coeff(e) for e in range(other.top + 1)]
        db = len(b) - 1
        inv = F.inv(b[-1])
        quo = [0] * max(len(a) - db, 0)
        for k in range(len(a) - 1, db - 1, -1):
            c = a[k]
            if c:
                f = F.mul(c, inv)
                quo[k - db] = f
                for j in range(db + 1):
                    a[k - db + j] = F.sub(a[k - db + j], F.mul(f, b[j]))
        return Laurent(F, quo), Laurent(F, a)

    def series_inverse(self, P: int):
        """Inverse of a unit power series modulo z^P."""
        F = self.F
        if self.val != 0 or not self.c:
            raise ValueError("not a unit power series")
        a = self.c
        inv0 = F.inv(a[0])
        out = [inv0]
        for n in range(1, P):
            s = 0
            for j in range(1, min(n, len(a) - 1) + 1):
                s = F.add(s, F.mul(a[j], out[n - j]))
            out.append(F.neg(F.mul(inv0, s)))
        return Laurent(F, out)


# -- matrices (lists of rows of Laurent) -------------------------------------

def zero(F):
    return Laurent(F)


def one(F):
    return Laurent(F, (1,))


def from_constant(F, M):
    return [[Laurent.const(F, a) for a in row] for row in M]


def identity(F, n):
    return [[one(F) if i == j else zero(F) for j in range(n)] for i in range(n)]


def diag_monomials(F, exps):
    n = len(exps)
    return [[Laurent.monomial(F, 1, exps[i]) if i == j else zero(F) for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    n, m, l = len(A), len(B), len(B[0])
    F = A[0][0].F
    out = []
    for i in range(n):
        row = []
        for j in range(l):
            s = zero(F)
            for k in range(m):
                if A[i][k].c and B[k][j].c:
                    s = s + A[i][k] * B[k][j]
            row.append(s)
        out.append(row)
    return out


def mat_scale(A, a: int):
    return [[x.scale(a) for x in row] for row in A]


def mat_shift(A, n: int):
    return [[x.shift(n) for x in row] for row in A]


def mat_eq(A, B):
    return all(x == y for ra, rb in zip(A, B) for x, y in zip(ra, rb))


def mat_key(A):
    return tuple(x.key() for row in A for x in row)


def invert_variable(A):
    return [[x.invert_variable() for x in row] for row in A]


def at_zero(A):
    return [[x.at_zero() for x in row] for row in A]


def at_infinity(A):
    return [[x.at_infinity() for x in row] for row in A]


def min_valuation(A):
    vals = [x.val for row in A for x in row if x.c]
    return min(vals) if vals else None


def max_degree(A):
    tops = [x.top for row in A for x in row if x.c]
    return max(tops) if tops else None


def det(A):
    n = len(A)
    F = A[0][0].F
    if n == 1:
        return A[0][0]
    if n == 2:
        return A[0][0] * A[1][1] - A[0][1] * A[1][0]
    total = zero(F)
    for j in range(n):
        if not A[0][j].c:
            continue
        minor = [row[:j] + row[j + 1:] for row in A[1:]]
        term = A[0][j] * det(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def adjugate(A):
    n = len(A)
    F = A[0][0].F
    if n == 1:
        return [[one(F)]]
    out = [[None] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [row[:j] + row[j + 1:] for k, row in enumerate(A) if k != i]
            d = det(minor)
            out[j][i] = d if (i + j) % 2 == 0 else -d
    return out


def inverse(A):
    """Inverse of a matrix whose determinant is a monomial c·z^m."""
    d = det(A)
    if not d.is_monomial():
        raise ValueError("determinant is not a unit in k[z, z^-1]")
    F = d.F
    inv = F.inv(d.c[0])
    return [[x.scale(inv).shift(-d.val) for x in row] for row in adjugate(A)]


def constant_matrix(A):
    """The k-matrix of an all-constant Laurent matrix."""
    out = []
    for row in A:
        r = []
        for x in row:
            if x.c and (x.val != 0 or len(x.c) != 1):
                raise ValueError("matrix is not constant")
            r.append(x.coeff(0))
        out.append(r)
    return out


def column_hermite(cols_matrix):
    """A k[z]-basis (N×N) of the column span of a full-rank N×m polynomial matrix."""
    M = [list(row) for row in cols_matrix]
    n, m = len(M), len(M[0])
    F = M[0][0].F
    for i in range(n):
        while True:
            nz = [j for j in range(i, m) if M[i][j].c]
            if not nz:
                raise ValueError("matrix does not have full row rank")
            piv = min(nz, key=lambda j: (M[i][j].top, j))
            if piv != i:
                for row in M:
                    row[i], row[piv] = row[piv], row[i]
            done = True
            for j in range(i + 1, m):
                if M[i][j].c:
                    qt, _ = M[i][j].monic_divmod(M[i][i])
                    for row in M:
                        row[j] = row[j] - row[i] * qt
                    if M[i][j].c:
                        done = False
            if done:
                break
    return [row[:n] for row in M]


def column_reduce(H):
    """Column-reduce a nonsingular polynomial matrix H.

    Returns (C, W, s) with C = H·W, W unimodular over k[z], and the
    leading column-coefficient matrix of C (coefficient of z^{s_j} in
    column j) invertible.
    """
    n = len(H)
    F = H[0][0].F
    C = [list(r) for r in H]
    W = identity(F, n)
    while True:
        s = [max(C[i][j].top for i in range(n) if C[i][j].c) for j in range(n)]
        L = [[C[i][j].coeff(s[j]) for j in range(n)] for i in range(n)]
        null = fqlinalg.nullspace(F, L, n)
        if not null:
            return C, W, s
        alpha = null[0]
        j0 = max((j for j in range(n) if alpha[j]), key=lambda j: (s[j], j))
        inv = F.inv(alpha[j0])
        # column j0 <- sum_l (alpha_l/alpha_j0) z^{s_j0 - s_l} column l
        for l in range(n):
            if l == j0 or not alpha[l]:
                continue
            f = F.mul(alpha[l], inv)
            mono = Laurent.monomial(F, f, s[j0] - s[l])
            for T in (C, W):
                for row in T:
                    row[j0] = row[j0] + row[l] * mono
