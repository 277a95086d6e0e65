"""Finite fields F_{p^n} and towers k = F_q ⊂ k_i = F_{q^i}.

Elements are plain ints: the base-p digits of an int are the coefficients
(constant term first) of a polynomial over F_p reduced modulo the defining
polynomial.  Multiplication goes through discrete-log tables.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import sympy


def prime_power(q: int) -> tuple[int, int]:
    f = sympy.factorint(q)
    if len(f) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, r), = f.items()
    return int(p), int(r)


def _digits(x: int, p: int, n: int) -> list[int]:
    out = []
    for _ in range(n):
        x, d = divmod(x, p)
        out.append(d)
    return out


def _undigits(ds, p: int) -> int:
    x = 0
    for d in reversed(ds):
        x = x * p + d
    return x


def _polymulmod_p(a, b, f, p):
    """Product of digit lists a, b modulo monic f (all over F_p)."""
    n = len(f) - 1
    prod = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
    for k in range(len(prod) - 1, n - 1, -1):
        c = prod[k]
        if c:
            for j in range(n + 1):
                prod[k - n + j] = (prod[k - n + j] - c * f[j]) % p
    prod = prod[:n] + [0] * (n - len(prod[:n]))
    return prod


def _is_irreducible_p(f, p) -> bool:
    x = sympy.Symbol("x")
    poly = sympy.Poly(list(reversed(f)), x, modulus=p)
    return poly.is_irreducible


@lru_cache(maxsize=None)
def least_irreducible(p: int, n: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible of degree n over F_p.

    Returned as coefficients, constant term first, leading 1 last.
    """
    if n == 1:
        return (0, 1)
    for tail in itertools.product(range(p), repeat=n):
        # lexicographic on (c_{n-1}, ..., c_0)
        f = list(reversed(tail)) + [1]
        if f[0] == 0:
            continue
        if _is_irreducible_p(f, p):
            return tuple(f)
    raise RuntimeError("no irreducible polynomial found")


class GF:
    """The field F_{p^n} with log/antilog tables."""

    def __init__(self, p: int, n: int):
        self.p, self.n = p, n
        self.size = p ** n
        self.modulus = least_irreducible(p, n)
        self.order = self.size - 1
        g = self._find_generator()
        self.generator = g
        exp = [0] * self.order
        log = [None] * self.size
        x = 1
        gd = _digits(g, p, n)
        for e in range(self.order):
            exp[e] = x
            log[x] = e
            x = _undigits(_polymulmod_p(_digits(x, p, n), gd, self.modulus, p), p)
        self.exp, self.log = exp, log
        self._addtab = None
        if p != 2 and self.size <= 729:
            self._addtab = [[self._slow_add(a, b) for b in range(self.size)]
                            for a in range(self.size)]

    def _slow_mul(self, a, b):
        return _undigits(_polymulmod_p(_digits(a, self.p, self.n), _digits(b, self.p, self.n),
                                       self.modulus, self.p), self.p)

    def _slow_pow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self._slow_mul(r, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return r

    def _find_generator(self):
        if self.order == 1:
            return 1
        primes = list(sympy.factorint(self.order))
        for c in range(2, self.size):
            if all(self._slow_pow(c, self.order // l) != 1 for l in primes):
                return c
        raise RuntimeError("no generator")

    def _slow_add(self, a, b):
        p = self.p
        da, db = _digits(a, p, self.n), _digits(b, p, self.n)
        return _undigits([(x + y) % p for x, y in zip(da, db)], p)

    def add(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        if self._addtab is not None:
            return self._addtab[a][b]
        return self._slow_add(a, b)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        p = self.p
        return _undigits([(-d) % p for d in _digits(a, p, self.n)], p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[(self.log[a] + self.log[b]) % self.order]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in finite field")
        return self.exp[(-self.log[a]) % self.order]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 1 if e == 0 else 0
        return self.exp[(self.log[a] * e) % self.order]

    def from_int(self, c: int) -> int:
        """Image of an integer under Z -> F_p ⊂ F_{p^n}."""
        return c % self.p

    def elements(self):
        return range(self.size)

    def nonzero(self):
        return range(1, self.size)

    def __repr__(self):
        return f"GF({self.p}^{self.n})"


@lru_cache(maxsize=None)
def gf(q: int) -> GF:
    p, r = prime_power(q)
    return GF(p, r)


@dataclass(frozen=True)
class Divisor:
    """A Frobenius orbit {x, x^q, ..., x^{q^{i-1}}} inside the tower."""
    degree: int
    rep: int
    tower: "FieldTower"

    @property
    def orbit(self) -> tuple[int, ...]:
        return tuple(self.tower.frob(self.rep, j) for j in range(self.degree))

    def minpoly(self) -> list[int]:
        return self.tower.minpoly(self.rep)


class FieldTower:
    """k = F_q and its extensions k_i for i | top, all inside k_top.

    Subfields are the fixed points of x -> x^{q^i}, so embeddings are
    inclusions and automatically compatible.  The standalone model of k_i
    is k[X]/(f_i) with f_i the minimal polynomial over k of the
    norm-compatible generator g_i = g_top^{(q^top-1)/(q^i-1)}.
    """

    def __init__(self, q: int, top: int):
        self.q = q
        self.top = top
        p, r = prime_power(q)
        self.p, self.r = p, r
        self.big = GF(p, r * top)
        self.k = gf(q)
        self.order = self.big.order
        # base field F_q (standalone codes) -> subfield of k_top
        k = self.k
        if r == 1:
            self._base_to_big = list(range(q))
        else:
            # send X (the class of the variable in k's model) to a root of k's modulus
            big = self.big
            mp = k.modulus
            root = None
            for x in range(1, big.size):
                if not self.in_subfield(x, 1):
                    continue
                val = 0
                for c in reversed(mp):
                    val = big.add(big.mul(val, x), c)
                if val == 0:
                    root = x
                    break
            table = []
            for c in range(q):
                val = 0
                for d in reversed(_digits(c, p, r)):
                    val = big.add(big.mul(val, root), d)
                table.append(val)
            self._base_to_big = table
        self._big_to_base = {v: c for c, v in enumerate(self._base_to_big)}

    def _mult_order(self, x):
        e = self.big.log[x]
        from math import gcd
        return self.order // gcd(self.order, e)

    # -- basic structure -------------------------------------------------
    def check_degree(self, i: int):
        if i < 1 or self.top % i:
            raise ValueError(f"degree {i} does not divide tower top {self.top}")

    def size(self, i: int) -> int:
        return self.q ** i

    def frob(self, x: int, times: int = 1) -> int:
        """x -> x^{q^times}."""
        if x == 0:
            return 0
        return self.big.pow(x, pow(self.q, times, self.order) if self.order > 1 else 0)

    def in_subfield(self, x: int, j: int) -> bool:
        return x == 0 or self.frob(x, j) == x

    def subfield_units(self, i: int) -> list[int]:
        self.check_degree(i)
        step = self.order // (self.q ** i - 1)
        return sorted(self.big.exp[(step * e) % self.order] for e in range(self.q ** i - 1))

    def generator(self, i: int) -> int:
        self.check_degree(i)
        return self.big.exp[(self.order // (self.q ** i - 1)) % self.order]

    def log_in(self, x: int, i: int) -> int:
        """Discrete log of x ∈ k_i^× with respect to generator(i)."""
        if not self.in_subfield(x, i) or x == 0:
            raise ValueError("element not in k_i^×")
        return self.big.log[x] // (self.order // (self.q ** i - 1))

    def degree(self, x: int) -> int:
        if x == 0:
            raise ValueError("0 has no Frobenius degree")
        for j in range(1, self.top + 1):
            if self.top % j == 0 and self.frob(x, j) == x:
                return j
        raise AssertionError("unreachable")

    def norm(self, x: int, i: int, j: int) -> int:
        """Norm from k_i^× to k_j^×: product of x^{q^{j l}}, l < i/j."""
        if i % j:
            raise ValueError(f"{j} does not divide {i}")
        if x == 0:
            raise ValueError("norm of 0")
        self.check_degree(i)
        if not self.in_subfield(x, i):
            raise ValueError("element not in k_i")
        # sum of exponents q^{jl} collapses to one power
        e = sum(self.q ** (j * l) for l in range(i // j))
        return self.big.pow(x, e)

    def frobenius_orbit(self, x: int) -> Divisor:
        return Divisor(self.degree(x), x, self)

    def divisors_of_degree(self, i: int) -> list[Divisor]:
        """All Frobenius orbits of exact degree i in k_i^×, one per orbit (least rep)."""
        seen = set()
        out = []
        for x in self.subfield_units(i):
            if x in seen or self.degree(x) != i:
                continue
            orb = {self.frob(x, j) for j in range(i)}
            seen |= orb
            out.append(Divisor(i, min(orb), self))
        return out

    # -- base field interface -------------------------------------------
    def from_base(self, c: int) -> int:
        return self._base_to_big[c]

    def to_base(self, x: int) -> int:
        try:
            return self._big_to_base[x]
        except KeyError:
            raise ValueError("element is not in the base field k") from None

    def minpoly(self, x: int) -> list[int]:
        """Minimal polynomial of x over k, coefficients in k's codes, constant first."""
        d = self.degree(x)
        big = self.big
        poly = [1]
        for j in range(d):
            root = self.frob(x, j)
            new = [0] * (len(poly) + 1)
            for e, c in enumerate(poly):
                new[e + 1] = big.add(new[e + 1], c)
                new[e] = big.sub(new[e], big.mul(c, root))
            poly = new
        return [self.to_base(c) for c in poly]

    def defining_polynomial(self, i: int) -> list[int]:
        return self.minpoly(self.generator(i))

    def to_dict(self, degrees=None) -> dict:
        degrees = degrees or [j for j in range(1, self.top + 1) if self.top % j == 0]
        return {
            "q": self.q,
            "top": self.top,
            "degrees": list(degrees),
            "base_modulus": list(self.k.modulus),
            "defining_polynomials": {str(i): self.defining_polynomial(i) for i in degrees},
        }


@lru_cache(maxsize=None)
def tower(q: int, top: int) -> FieldTower:
    return FieldTower(q, top)
