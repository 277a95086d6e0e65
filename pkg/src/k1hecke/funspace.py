"""Functions on finite G-sets, convolution, Radon transforms, cuspidal projection.

Linear maps keep an exact rational matrix (python-flint fmpq_mat) whose rows
are indexed by codomain points and columns by domain points, both in the
canonical point order of their spaces.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

import numpy as np
from flint import fmpq, fmpq_mat

from .arith import Scalar
from .groups import FiniteGroup, ParabolicDatum, block_sizes


class BaseMismatch(ValueError):
    pass


def _size(base) -> int:
    return base.size if hasattr(base, "size") else len(base)


class CosetSpace:
    """Left cosets gH of a subgroup H (given as element indices)."""

    def __init__(self, G: FiniteGroup, H, name: str = "H"):
        self.G, self.name = G, name
        H = np.asarray(sorted(H), dtype=np.int64)
        self.H = H
        of = np.full(G.order, -1, dtype=np.int64)
        reps = []
        for g in range(G.order):
            if of[g] < 0:
                of[G.mul[g, H]] = len(reps)
                reps.append(g)
        self.coset_of = of
        self.reps = reps
        self.size = len(reps)
        self.key = ("cosets", G.key, name, tuple(H.tolist()))

    def act(self, g: int, c: int) -> int:
        return int(self.coset_of[self.G.mul[g, self.reps[c]]])

    def right_act(self, c: int, m: int) -> int:
        """gH -> gmH, for m normalizing H."""
        return int(self.coset_of[self.G.mul[self.reps[c], m]])


class Fn:
    """Sparse Scalar-valued function on a finite set."""

    __slots__ = ("base", "values")

    def __init__(self, base, values=None):
        self.base = base
        vals = {}
        n = _size(base)
        for k, v in (values or {}).items():
            if not 0 <= k < n:
                raise IndexError(f"point {k} outside base of size {n}")
            v = Scalar.coerce(v)
            if not v.is_zero():
                vals[k] = v
        self.values = vals

    @classmethod
    def delta(cls, base, pt):
        return cls(base, {pt: 1})

    def __getitem__(self, pt):
        return self.values.get(pt, Scalar(0))

    def _check(self, other):
        if self.base is not other.base:
            raise BaseMismatch("functions live on different sets")

    def __add__(self, other):
        self._check(other)
        out = dict(self.values)
        for k, v in other.values.items():
            out[k] = out[k] + v if k in out else v
        return Fn(self.base, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = Scalar.coerce(c)
        return Fn(self.base, {k: c * v for k, v in self.values.items()})

    def __eq__(self, other):
        if not isinstance(other, Fn) or self.base is not other.base:
            return False
        keys = set(self.values) | set(other.values)
        return all(self[k] == other[k] for k in keys)

    __hash__ = None

    def support(self):
        return sorted(self.values)

    def __repr__(self):
        return f"Fn({len(self.values)} points)"


def convolve(f1: Fn, f2: Fn) -> Fn:
    """(f1*f2)(g) = sum_h f1(h) f2(h^{-1} g), counting measure."""
    f1._check(f2)
    G = f1.base
    if not isinstance(G, FiniteGroup):
        raise BaseMismatch("convolution needs functions on a group")
    out = {}
    for h, a in f1.values.items():
        for x, b in f2.values.items():
            g = int(G.mul[h, x])
            out[g] = out[g] + a * b if g in out else a * b
    return Fn(G, out)


def e_fin(G: FiniteGroup) -> Fn:
    return Fn(G, {g: Fraction(1, G.order) for g in range(G.order)})


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.p), int(x.q))


class LinearMap:
    def __init__(self, domain, codomain, matrix: fmpq_mat):
        if matrix.nrows() != _size(codomain) or matrix.ncols() != _size(domain):
            raise ValueError("matrix shape does not match the spaces")
        self.domain, self.codomain, self.matrix = domain, codomain, matrix

    @classmethod
    def from_columns(cls, domain, codomain, columns):
        """columns[j] is a dict codomain-point -> rational for domain point j."""
        n, m = _size(codomain), _size(domain)
        M = fmpq_mat(n, m)
        for j, col in enumerate(columns):
            for i, v in col.items():
                if v:
                    v = Fraction(v)
                    M[i, j] = M[i, j] + fmpq(v.numerator, v.denominator)
        return cls(domain, codomain, M)

    @classmethod
    def identity(cls, space):
        n = _size(space)
        M = fmpq_mat(n, n)
        for i in range(n):
            M[i, i] = 1
        return cls(space, space, M)

    def __call__(self, f: Fn) -> Fn:
        if f.base is not self.domain:
            raise BaseMismatch("function is not on the map's domain")
        out = {}
        M = self.matrix
        for j, v in f.values.items():
            for i in range(M.nrows()):
                c = M[i, j]
                if c != 0:
                    term = v * _to_fraction(c)
                    out[i] = out[i] + term if i in out else term
        return Fn(self.codomain, out)

    def compose(self, other: "LinearMap") -> "LinearMap":
        """self ∘ other."""
        if other.codomain is not self.domain:
            raise BaseMismatch("maps do not compose")
        return LinearMap(other.domain, self.codomain, self.matrix * other.matrix)

    def rank(self) -> int:
        return self.matrix.rank()

    def is_invertible(self) -> bool:
        M = self.matrix
        return M.nrows() == M.ncols() and M.rank() == M.nrows()

    def inverse(self) -> "LinearMap":
        return LinearMap(self.codomain, self.domain, self.matrix.inv())

    def trace(self) -> Fraction:
        M = self.matrix
        return sum((_to_fraction(M[i, i]) for i in range(M.nrows())), Fraction(0))

    def __eq__(self, other):
        return (isinstance(other, LinearMap) and self.domain is other.domain
                and self.codomain is other.codomain and self.matrix == other.matrix)

    __hash__ = None

    def entry(self, i, j) -> Fraction:
        return _to_fraction(self.matrix[i, j])

    def to_text(self) -> str:
        """Row-major export; each scalar as its coefficient list."""
        M = self.matrix
        lines = [f"# {M.nrows()} x {M.ncols()}"]
        for i in range(M.nrows()):
            lines.append(" ".join(f"[{_to_fraction(M[i, j])}]" for j in range(M.ncols())))
        return "\n".join(lines) + "\n"


def permutation_map(space, perm) -> LinearMap:
    """Map δ_x -> δ_{perm[x]} on one space."""
    return LinearMap.from_columns(space, space, [{perm[x]: 1} for x in range(_size(space))])


# -- Radon transform ---------------------------------------------------------

class RadonData:
    def __init__(self, datum: ParabolicDatum):
        G = datum.G
        self.datum = datum
        self.source = CosetSpace(G, datum.Um, "U-")
        self.target = CosetSpace(G, datum.U, "U")
        cols = [dict() for _ in range(self.source.size)]
        for h in range(G.order):
            a = int(self.source.coset_of[h])
            g = int(self.target.coset_of[h])
            cols[a][g] = cols[a].get(g, 0) + 1
        self.map = LinearMap.from_columns(self.source, self.target, cols)
        self._dense = np.zeros((self.target.size, self.source.size), dtype=np.int64)
        for a, col in enumerate(cols):
            for g, v in col.items():
                self._dense[g, a] = v

    def equivariance_failures(self, generators_G, generators_M) -> list[str]:
        """Check Φ∘L_g = L_g∘Φ and Φ∘R_m = R_m∘Φ on the given generators."""
        bad = []
        S, T, D = self.source, self.target, self._dense
        for kind, gens in (("left", generators_G), ("right", generators_M)):
            for g in gens:
                if kind == "left":
                    ps = np.array([S.act(g, c) for c in range(S.size)])
                    pt = np.array([T.act(g, c) for c in range(T.size)])
                else:
                    ps = np.array([S.right_act(c, g) for c in range(S.size)])
                    pt = np.array([T.right_act(c, g) for c in range(T.size)])
                moved = np.zeros_like(D)
                moved[np.ix_(pt, ps)] = D
                if not np.array_equal(moved, D):
                    bad.append(f"{kind} translation by element {g}")
        return bad


_RADON: dict = {}


def radon_data(datum: ParabolicDatum) -> RadonData:
    key = (datum.G.key, datum.blocks)
    if key not in _RADON:
        _RADON[key] = RadonData(datum)
    return _RADON[key]


def radon(datum: ParabolicDatum) -> LinearMap:
    """Correspondence-sum map F(G/U^-) -> F(G/U): entry = |gU ∩ aU^-|."""
    return radon_data(datum).map


def generating_set(G: FiniteGroup, elements=None) -> list[int]:
    """A small generating set of the subgroup spanned by `elements` (greedy)."""
    elements = list(range(G.order)) if elements is None else list(elements)
    target = set(elements)
    gens: list[int] = []
    span = {G.identity}
    for x in elements:
        if x in span:
            continue
        gens.append(x)
        frontier = list(span)
        span = set(span)
        # closure of span ∪ {x}
        queue = list(span)
        while queue:
            y = queue.pop()
            for g in gens:
                z = int(G.mul[y, g])
                if z not in span:
                    span.add(z)
                    queue.append(z)
        if span >= target:
            break
    return gens


def standard_coweights(N: int) -> list[tuple[int, ...]]:
    """One dominant coweight per standard parabolic (composition of N)."""
    out = []

    def comps(n):
        if n == 0:
            yield ()
            return
        for k in range(1, n + 1):
            for rest in comps(n - k):
                yield (k,) + rest

    for c in comps(N):
        lam = []
        for b, size in enumerate(c):
            lam += [len(c) - 1 - b] * size
        out.append(tuple(lam))
    return out


# -- cuspidal projection -----------------------------------------------------

def _proper_unipotents(G: FiniteGroup):
    """All conjugates of unipotent radicals of proper standard parabolics."""
    from .groups import parabolic_datum
    seen = set()
    out = []
    for lam in standard_coweights(G.N):
        if len(block_sizes(lam)) == 1:
            continue
        U = parabolic_datum(lam, G).U
        for g in range(G.order):
            conj = tuple(sorted(G.conj(g, u) for u in U))
            if conj not in seen:
                seen.add(conj)
                out.append(conj)
    return out


def orthogonal_complement_projector(space, spanning: list[dict]) -> LinearMap:
    """Orthogonal projector onto the complement of the span of sparse rational vectors."""
    n = _size(space)
    if not spanning:
        return LinearMap.identity(space)
    B = fmpq_mat(len(spanning), n)
    for r, vec in enumerate(spanning):
        for i, v in vec.items():
            B[r, i] = v
    R = B.rref()[0]
    rk = B.rank()
    if rk == 0:
        return LinearMap.identity(space)
    basis = fmpq_mat(rk, n, [R[i, j] for i in range(rk) for j in range(n)])
    Bt = basis.transpose()
    P_span = Bt * (basis * Bt).inv() * basis
    I = fmpq_mat(n, n)
    for i in range(n):
        I[i, i] = 1
    return LinearMap(space, space, I - P_span)


@lru_cache(maxsize=None)
def cuspidal_projector(G: FiniteGroup) -> LinearMap:
    """Projector onto {f : sum_{u in U'} f(x u) = 0 for all x and all proper U'}."""
    vecs = []
    seen = set()
    for U in _proper_unipotents(G):
        for x in range(G.order):
            coset = tuple(sorted(int(G.mul[x, u]) for u in U))
            if coset not in seen:
                seen.add(coset)
                vecs.append({g: 1 for g in coset})
    return orthogonal_complement_projector(G, vecs)
