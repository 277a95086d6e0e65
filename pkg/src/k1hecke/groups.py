"""Finite groups GL(N, q), PGL(N, q) and their parabolic data.

Group elements are indices into a canonically ordered element list; the
matrices themselves are row-major tuples of field codes.  PGL elements are
stored as scalar-normalized GL matrices (first nonzero entry of the first
column equal to 1).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .arith import gf, tower
from .arith.fqlinalg import det as fq_det, inverse as fq_inverse

DEFAULT_BUDGET = 10 ** 6


class BudgetExceeded(RuntimeError):
    pass


def gl_order(N: int, q: int) -> int:
    return math.prod(q ** N - q ** j for j in range(N))


class FiniteGroup:
    def __init__(self, N: int, q: int, kind: str = "GL", budget: int = DEFAULT_BUDGET):
        kind = kind.upper()
        if kind not in ("GL", "PGL"):
            raise ValueError(f"unknown group kind {kind!r}")
        need = gl_order(N, q)
        if need > budget:
            raise BudgetExceeded(f"|GL({N},{q})| = {need} exceeds enumeration budget {budget}; "
                                 f"pass budget >= {need}")
        self.N, self.q, self.kind = N, q, kind
        self.F = F = gf(q)
        elems = set()
        for entries in itertools.product(range(q), repeat=N * N):
            rows = [entries[i * N:(i + 1) * N] for i in range(N)]
            if fq_det(F, rows):
                elems.add(self.normalize(entries))
        self.elements: list[tuple[int, ...]] = sorted(elems)
        self.index = {g: i for i, g in enumerate(self.elements)}
        self.order = len(self.elements)
        expected = need if kind == "GL" else need // (q - 1)
        assert self.order == expected, (self.order, expected)
        n = self.order
        mt = np.empty((n, n), dtype=np.int32)
        for a, A in enumerate(self.elements):
            for b, B in enumerate(self.elements):
                mt[a, b] = self.index[self.normalize(self._matmul(A, B))]
        self.mul = mt
        self.identity = self.index[self.normalize(tuple(1 if i == j else 0 for i in range(N) for j in range(N)))]
        self.inv = np.empty(n, dtype=np.int32)
        for a in range(n):
            self.inv[a] = int(np.nonzero(mt[a] == self.identity)[0][0])

    def __repr__(self):
        return f"{self.kind}({self.N},{self.q})"

    @property
    def key(self):
        return (self.N, self.q, self.kind)

    @property
    def size(self):
        return self.order

    # -- matrices --------------------------------------------------------
    def _matmul(self, A, B):
        F, N = self.F, self.N
        out = []
        for i in range(N):
            for j in range(N):
                s = 0
                for k in range(N):
                    a, b = A[i * N + k], B[k * N + j]
                    if a and b:
                        s = F.add(s, F.mul(a, b))
                out.append(s)
        return tuple(out)

    def normalize(self, entries) -> tuple[int, ...]:
        entries = tuple(entries)
        if self.kind == "GL":
            return entries
        N, F = self.N, self.F
        for r in range(N):
            c = entries[r * N]
            if c:
                inv = F.inv(c)
                return tuple(F.mul(inv, x) for x in entries)
        raise ValueError("first column is zero")

    def matrix(self, g: int) -> list[list[int]]:
        e, N = self.elements[g], self.N
        return [list(e[i * N:(i + 1) * N]) for i in range(N)]

    def from_matrix(self, M) -> int:
        return self.index[self.normalize(itertools.chain.from_iterable(M))]

    def conj(self, g: int, x: int) -> int:
        """g x g^{-1}."""
        return int(self.mul[self.mul[g, x], self.inv[g]])

    def scalars(self) -> list[int]:
        """Indices of scalar matrices (the center of GL; trivial in PGL)."""
        N = self.N
        out = []
        for c in self.F.nonzero():
            m = tuple(c if i == j else 0 for i in range(N) for j in range(N))
            out.append(self.index[self.normalize(m)])
        return sorted(set(out))

    @cached_property
    def conjugacy_classes(self) -> list[tuple[int, ...]]:
        seen = np.full(self.order, -1)
        classes = []
        for x in range(self.order):
            if seen[x] >= 0:
                continue
            cl = sorted({self.conj(g, x) for g in range(self.order)})
            for y in cl:
                seen[y] = len(classes)
            classes.append(tuple(cl))
        self._class_of = seen
        return classes

    def class_of(self, x: int) -> int:
        self.conjugacy_classes
        return int(self._class_of[x])

    def element_order(self, x: int) -> int:
        k, y = 1, x
        while y != self.identity:
            y = int(self.mul[y, x])
            k += 1
        return k

    def power(self, x: int, e: int) -> int:
        if e < 0:
            x, e = int(self.inv[x]), -e
        r = self.identity
        while e:
            if e & 1:
                r = int(self.mul[r, x])
            x = int(self.mul[x, x])
            e >>= 1
        return r


@lru_cache(maxsize=None)
def build_group(N: int, q: int, kind: str = "GL", budget: int = DEFAULT_BUDGET) -> FiniteGroup:
    return FiniteGroup(N, q, kind, budget)


# -- coweights -----------------------------------------------------------

def is_dominant(lam) -> bool:
    return all(a >= b for a, b in zip(lam, lam[1:]))


def dominance_leq(mu, lam, kind: str = "GL") -> bool:
    """mu <= lam: lam - mu is a nonnegative sum of simple coroots.

    For PGL coweights are taken modulo the diagonal (1, ..., 1).
    """
    N = len(lam)
    diff = [a - b for a, b in zip(lam, mu)]
    total = sum(diff)
    if kind.upper() == "PGL":
        if total % N:
            return False
        c = total // N
        diff = [d - c for d in diff]
    elif total:
        return False
    s = 0
    for d in diff[:-1]:
        s += d
        if s < 0:
            return False
    return True


def normalize_coweight(lam, kind: str = "GL") -> tuple[int, ...]:
    lam = tuple(sorted(lam, reverse=True))
    if kind.upper() == "PGL":
        lam = tuple(x - lam[-1] for x in lam)
    return lam


def dominant_below(lam, kind: str = "GL") -> list[tuple[int, ...]]:
    """All dominant mu <= lam (finite: same degree, entries within [min, max])."""
    lam = normalize_coweight(lam, kind)
    N = len(lam)
    lo, hi = min(lam), max(lam)
    out = set()
    for mu in itertools.combinations_with_replacement(range(hi, lo - 1, -1), N):
        mu = normalize_coweight(mu, kind)
        if dominance_leq(mu, lam, kind):
            out.add(mu)
    return sorted(out, key=lambda m: (sum(abs(x) for x in m), m))


def block_sizes(lam) -> tuple[int, ...]:
    return tuple(len(list(g)) for _, g in itertools.groupby(lam))


# -- parabolic data ------------------------------------------------------

class ParabolicDatum:
    """P_λ (block upper triangular), its Levi M_λ, radical U_λ and opposites."""

    def __init__(self, lam, group: FiniteGroup):
        lam = tuple(lam)
        if len(lam) != group.N:
            raise ValueError("coweight rank does not match the group")
        if not is_dominant(lam):
            raise ValueError(f"coweight {lam} is not dominant")
        self.lam, self.G = lam, group
        self.blocks = block_sizes(lam)
        self._block_of = [b for b, size in enumerate(self.blocks) for _ in range(size)]

    @property
    def key(self):
        return self.blocks

    def _test(self, g: int, kind: str) -> bool:
        N, e, blk = self.G.N, self.G.elements[g], self._block_of
        for i in range(N):
            for j in range(N):
                x = e[i * N + j]
                bi, bj = blk[i], blk[j]
                if kind == "P" and bi > bj and x:
                    return False
                if kind == "Pm" and bi < bj and x:
                    return False
                if kind == "M" and bi != bj and x:
                    return False
                if kind in ("U", "Um"):
                    if bi == bj and x != (1 if i == j else 0):
                        return False
                    if kind == "U" and bi > bj and x:
                        return False
                    if kind == "Um" and bi < bj and x:
                        return False
        return True

    def _subset(self, kind):
        return tuple(g for g in range(self.G.order) if self._test(g, kind))

    @cached_property
    def P(self):
        return self._subset("P")

    @cached_property
    def Pm(self):
        return self._subset("Pm")

    @cached_property
    def M(self):
        return self._subset("M")

    @cached_property
    def U(self):
        return self._subset("U")

    @cached_property
    def Um(self):
        return self._subset("Um")

    def levi(self, p: int) -> int:
        """π_λ (and π_λ^-): zero out the off-diagonal blocks."""
        G, N, blk = self.G, self.G.N, self._block_of
        e = G.elements[p]
        m = tuple(e[i * N + j] if blk[i] == blk[j] else 0 for i in range(N) for j in range(N))
        return G.index[G.normalize(m)]

    def include(self, m: int) -> int:
        """i_λ: M_λ -> P_λ."""
        if m not in set(self.M):
            raise ValueError("not a Levi element")
        return m


@lru_cache(maxsize=None)
def parabolic_datum(lam, group: FiniteGroup) -> ParabolicDatum:
    return ParabolicDatum(tuple(lam), group)


def _orbit_table(G: FiniteGroup, right_pairs) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Orbits of G×G under (a, b) -> (a x, b y) for (x, y) in right_pairs."""
    n = G.order
    xs = np.array([x for x, _ in right_pairs], dtype=np.int64)
    ys = np.array([y for _, y in right_pairs], dtype=np.int64)
    table = np.full(n * n, -1, dtype=np.int64)
    reps = []
    mul = G.mul
    for code in range(n * n):
        if table[code] >= 0:
            continue
        a, b = divmod(code, n)
        orb = mul[a, xs].astype(np.int64) * n + mul[b, ys]
        table[orb] = len(reps)
        reps.append((a, b))
    return table, reps


class TwistedProductSpace:
    """(G/U_λ ×_{M_λ} G/U_λ^±)(k): orbits of (U × U^±)·ΔM on G × G by right translation."""

    def __init__(self, datum: ParabolicDatum, sign: str = "+-"):
        if sign not in ("++", "+-"):
            raise ValueError("sign must be '++' or '+-'")
        self.datum, self.sign = datum, sign
        G = self.G = datum.G
        U2 = datum.U if sign == "++" else datum.Um
        pairs = set()
        for m in datum.M:
            for u in datum.U:
                um = int(G.mul[u, m])
                for v in U2:
                    pairs.add((um, int(G.mul[v, m])))
        self.right_group = sorted(pairs)
        self.table, self.points = _orbit_table(G, self.right_group)

    def __len__(self):
        return len(self.points)

    @property
    def size(self):
        return len(self.points)

    @property
    def key(self):
        return ("twisted", self.G.key, self.datum.blocks, self.sign)

    def expected_size(self) -> int:
        d = self.datum
        U2 = d.U if self.sign == "++" else d.Um
        return self.G.order ** 2 // (len(d.U) * len(U2) * len(d.M))

    def point(self, a: int, b: int) -> int:
        return int(self.table[a * self.G.order + b])

    def act(self, g: int, h: int, pt: int) -> int:
        """Left action of (g, h) ∈ G×G."""
        a, b = self.points[pt]
        return self.point(int(self.G.mul[g, a]), int(self.G.mul[h, b]))

    def stabilizer_of_base(self) -> set[tuple[int, int]]:
        base = self.point(self.G.identity, self.G.identity)
        n = self.G.order
        return {(g, h) for g in range(n) for h in range(n) if self.act(g, h, base) == base}


_TP_CACHE: dict = {}


def twisted_product(datum: ParabolicDatum, sign: str = "+-") -> TwistedProductSpace:
    key = (datum.G.key, datum.blocks, sign)
    if key not in _TP_CACHE:
        _TP_CACHE[key] = TwistedProductSpace(datum, sign)
    return _TP_CACHE[key]


# -- elliptic classes ----------------------------------------------------

@dataclass
class ConjClass:
    x: int
    representative: int
    members: tuple[int, ...]
    minpoly: list[int] = field(default_factory=list)


def companion_matrix(F, poly) -> list[list[int]]:
    """Companion matrix of a monic polynomial (coefficients constant first)."""
    n = len(poly) - 1
    C = [[0] * n for _ in range(n)]
    for i in range(1, n):
        C[i][i - 1] = 1
    for i in range(n):
        C[i][n - 1] = F.neg(poly[i])
    return C


def elliptic_class(x: int, group: FiniteGroup, field_tower=None) -> ConjClass:
    """Conjugacy class Ω_x of the companion matrix of x ∈ k_N of degree N."""
    T = field_tower or tower(group.q, group.N)
    if T.degree(x) != group.N:
        raise ValueError(f"x has degree {T.degree(x)}, need exactly {group.N}")
    mp = T.minpoly(x)
    rep = group.from_matrix(companion_matrix(group.F, mp))
    members = tuple(sorted({group.conj(g, rep) for g in range(group.order)}))
    return ConjClass(x, rep, members, mp)


def charpoly(F, M) -> list[int]:
    """Characteristic polynomial det(X - M) by evaluation/interpolation-free expansion (N <= 3)."""
    n = len(M)
    if n == 1:
        return [F.neg(M[0][0]), 1]
    if n == 2:
        tr = F.add(M[0][0], M[1][1])
        d = F.sub(F.mul(M[0][0], M[1][1]), F.mul(M[0][1], M[1][0]))
        return [d, F.neg(tr), 1]
    if n == 3:
        tr = F.add(F.add(M[0][0], M[1][1]), M[2][2])
        minors = 0
        for i, j in ((0, 1), (0, 2), (1, 2)):
            minors = F.add(minors, F.sub(F.mul(M[i][i], M[j][j]), F.mul(M[i][j], M[j][i])))
        return [F.neg(fq_det(F, M)), minors, F.neg(tr), 1]
    raise NotImplementedError("charpoly implemented for N <= 3")


def normalize_window(window, kind: str = "GL") -> tuple[tuple[int, ...], ...]:
    """A window is a dominant coweight or a collection of them (union of ideals)."""
    if window and isinstance(window[0], int):
        window = (window,)
    return tuple(sorted({normalize_coweight(w, kind) for w in window}))


def window_strata(window, kind: str = "GL") -> list[tuple[int, ...]]:
    out = set()
    for w in normalize_window(window, kind):
        out.update(dominant_below(w, kind))
    return sorted(out, key=lambda m: (sum(m), sum(abs(x) for x in m), m))


def in_window(mu, window, kind: str = "GL") -> bool:
    mu = normalize_coweight(mu, kind)
    return any(dominance_leq(mu, w, kind) for w in normalize_window(window, kind))
