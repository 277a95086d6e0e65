"""Exact elements of Q(ζ_m)(√q).

A Scalar is a + b·√q with a, b in Q(ζ_m), each stored as a tuple of
Fractions in the power basis 1, ζ, ..., ζ^{φ(m)-1}.  Scalars with
different conductors are lifted to the lcm before combining.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import sympy


@lru_cache(maxsize=None)
def cyclotomic(m: int) -> tuple[int, ...]:
    """Coefficients of Φ_m, constant term first."""
    x = sympy.Symbol("x")
    return tuple(int(c) for c in reversed(sympy.Poly(sympy.cyclotomic_poly(m, x), x).all_coeffs()))


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _reduce(coeffs, m: int) -> tuple[Fraction, ...]:
    phi = cyclotomic(m)
    n = len(phi) - 1
    c = [Fraction(x) for x in coeffs]
    for k in range(len(c) - 1, n - 1, -1):
        lead = c[k]
        if lead:
            for j in range(n + 1):
                c[k - n + j] -= lead * phi[j]
    c = c[:n] + [Fraction(0)] * (n - len(c[:n]))
    return tuple(c)


def _mul(a, b, m):
    if not any(a) or not any(b):
        return (Fraction(0),) * len(a)
    prod = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    prod[i + j] += x * y
    return _reduce(prod, m)


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _lift(c, m: int, big: int):
    """Rewrite an element of Q(ζ_m) in the power basis of Q(ζ_big)."""
    if m == big:
        return c
    step = big // m
    out = [Fraction(0)] * (step * (len(c) - 1) + 1 if c else 1)
    for j, x in enumerate(c):
        out[j * step] += x
    return _reduce(out, big)


def _poly_divmod(a, b):
    a = list(a)
    b = _trim(b)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(_trim(a)) >= len(b):
        a = _trim(a)
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for j, y in enumerate(b):
            a[shift + j] -= f * y
    return q, _trim(a)


def _inverse_mod_phi(c, m):
    """Inverse of c in Q[x]/Φ_m by the extended Euclidean algorithm."""
    phi = [Fraction(x) for x in cyclotomic(m)]
    r0, r1 = phi, _trim(c)
    s0, s1 = [Fraction(0)], [Fraction(1)]
    while len(r1) > 1:
        qt, r = _poly_divmod(r0, r1)
        # s = s0 - qt*s1
        prod = [Fraction(0)] * (len(qt) + len(s1))
        for i, x in enumerate(qt):
            for j, y in enumerate(s1):
                prod[i + j] += x * y
        s = [Fraction(0)] * max(len(s0), len(prod))
        for i, x in enumerate(s0):
            s[i] += x
        for i, x in enumerate(prod):
            s[i] -= x
        r0, r1, s0, s1 = r1, r, s1, _trim(s) or [Fraction(0)]
    if not r1:
        raise ZeroDivisionError("element is not invertible")
    inv = [x / r1[0] for x in s1]
    return _reduce(inv, m)


class Scalar:
    """a + b·√q with a, b ∈ Q(ζ_m)."""

    __slots__ = ("m", "q", "a", "b")

    def __init__(self, a=0, b=None, m: int = 1, q: int | None = None):
        n = len(cyclotomic(m)) - 1
        if isinstance(a, (int, Fraction)):
            a = [a]
        a = _reduce(a, m) if len(a) != n else tuple(Fraction(x) for x in a)
        if b is None:
            b = (Fraction(0),) * n
        else:
            b = _reduce(b, m) if len(b) != n else tuple(Fraction(x) for x in b)
        if q is not None:
            r = math.isqrt(q)
            if r * r == q:
                a = _add(a, tuple(r * x for x in b))
                b = (Fraction(0),) * n
                q = None
        if not any(b):
            q = None
        self.m, self.q, self.a, self.b = m, q, a, b

    # -- constructors ----------------------------------------------------
    @classmethod
    def zeta(cls, m: int, k: int = 1) -> "Scalar":
        k %= m
        c = [0] * (k + 1)
        c[k] = 1
        return cls(c, m=m)

    @classmethod
    def sqrt_q(cls, q: int) -> "Scalar":
        return cls(0, [1], m=1, q=q)

    @classmethod
    def coerce(cls, x) -> "Scalar":
        if isinstance(x, Scalar):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        raise TypeError(f"cannot make a Scalar from {type(x).__name__}")

    # -- helpers ---------------------------------------------------------
    def _common(self, other: "Scalar"):
        if self.q is not None and other.q is not None and self.q != other.q:
            raise ValueError(f"incompatible square roots √{self.q} and √{other.q}")
        q = self.q if self.q is not None else other.q
        if self.m == other.m:
            return self.m, q, self.a, self.b, other.a, other.b
        big = math.lcm(self.m, other.m)
        return (big, q, _lift(self.a, self.m, big), _lift(self.b, self.m, big),
                _lift(other.a, other.m, big), _lift(other.b, other.m, big))

    def is_zero(self) -> bool:
        return not any(self.a) and not any(self.b)

    def is_rational(self) -> bool:
        return not any(self.b) and not any(self.a[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return self.a[0]

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        m, q, a1, b1, a2, b2 = self._common(other)
        return Scalar(_add(a1, a2), _add(b1, b2), m=m, q=q)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(tuple(-x for x in self.a), tuple(-x for x in self.b), m=self.m, q=self.q)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        m, q, a1, b1, a2, b2 = self._common(other)
        a = _mul(a1, a2, m)
        b = _add(_mul(a1, b2, m), _mul(b1, a2, m))
        bb = _mul(b1, b2, m)
        if any(bb):
            a = _add(a, tuple(q * x for x in bb))
        return Scalar(a, b, m=m, q=q)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero Scalar")
        m = self.m
        if not any(self.b):
            return Scalar(_inverse_mod_phi(self.a, m), m=m)
        # (a + b√q)^{-1} = (a - b√q) / (a² - q b²)
        nrm = _sub(_mul(self.a, self.a, m), tuple(self.q * x for x in _mul(self.b, self.b, m)))
        ninv = _inverse_mod_phi(nrm, m)
        return Scalar(_mul(self.a, ninv, m), tuple(-x for x in _mul(self.b, ninv, m)), m=m, q=self.q)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return _coerce(other) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = Scalar(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.q is not None and other.q is not None and self.q != other.q:
            return False
        _, _, a1, b1, a2, b2 = self._common(other)
        return a1 == a2 and b1 == b2

    __hash__ = None

    def galois(self, k: int) -> "Scalar":
        """Apply ζ_m -> ζ_m^k (k coprime to m); √q is fixed."""
        if math.gcd(k, self.m) != 1:
            raise ValueError("Galois exponent must be coprime to the conductor")

        def act(c):
            out = [Fraction(0)] * self.m
            for j, x in enumerate(c):
                out[(j * k) % self.m] += x
            return _reduce(out, self.m)
        return Scalar(act(self.a), act(self.b), m=self.m, q=self.q)

    def conj(self) -> "Scalar":
        """Complex conjugation ζ -> ζ^{-1}."""
        return self.galois(-1 % self.m if self.m > 1 else 1)

    def to_dict(self) -> dict:
        return {
            "conductor": self.m,
            "sqrt_of": self.q,
            "a": [str(x) for x in self.a],
            "b": [str(x) for x in self.b],
        }

    def __complex__(self):
        import cmath
        z = cmath.exp(2j * cmath.pi / self.m)
        val = sum(complex(float(x)) * z ** j for j, x in enumerate(self.a))
        if self.q is not None:
            val += math.sqrt(self.q) * sum(complex(float(x)) * z ** j for j, x in enumerate(self.b))
        return val

    def __str__(self):
        def fmt(c):
            terms = []
            for j, x in enumerate(c):
                if x:
                    terms.append(str(x) if j == 0 else f"{x}*z{self.m}^{j}")
            return " + ".join(terms) or "0"
        s = fmt(self.a)
        if self.q is not None:
            s = f"({s}) + ({fmt(self.b)})*sqrt({self.q})"
        return s

    def __repr__(self):
        return f"Scalar({self})"


def _coerce(x):
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar(x)
    return NotImplemented


ZERO = Scalar(0)
ONE = Scalar(1)


def neg_inv_sqrt_q(q: int) -> Scalar:
    """The constant -q^{-1/2}, read literally as (-1)·(√q)^{-1}."""
    return -Scalar.sqrt_q(q).inverse()
