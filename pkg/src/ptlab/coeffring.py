"""Coefficient arithmetic: F_p, truncated Z/p^N coefficients, and W2(k).

The length-2 Witt vectors implement the explicit componentwise formulas for a
perfect field of characteristic p: addition needs one exact division by p over
the integers, which is why the middle term is computed in Z before reduction.
Only k = F_p is supported here; general finite fields are an extension point,
not needed by any preset.
"""

from __future__ import annotations

from dataclasses import dataclass


class PrimeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class PrimeFieldElem:
    p: int
    value: int

    def __post_init__(self):
        if self.p < 2:
            raise ValueError("p must be a prime >= 2")
        object.__setattr__(self, "value", self.value % self.p)

    def __add__(self, other):
        self._check(other)
        return PrimeFieldElem(self.p, self.value + other.value)

    def __mul__(self, other):
        self._check(other)
        return PrimeFieldElem(self.p, self.value * other.value)

    def __neg__(self):
        return PrimeFieldElem(self.p, -self.value)

    def _check(self, other):
        if self.p != other.p:
            raise PrimeMismatch(f"{self.p} != {other.p}")


@dataclass(frozen=True)
class TruncatedWittCoeff:
    """An element of C(k)/p^N = Z/p^N, the precision-N Cohen coefficient."""

    p: int
    precision: int
    value: int

    def __post_init__(self):
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        object.__setattr__(self, "value", self.value % self.p ** self.precision)

    def digits(self) -> list[int]:
        return carry_normalize(self.value, self.p, self.precision)


def carry_normalize(c: int, p: int, N: int) -> list[int]:
    """Base-p digits d0..d_{N-1} of c mod p^N."""
    c %= p ** N
    out = []
    for _ in range(N):
        out.append(c % p)
        c //= p
    return out


@dataclass(frozen=True)
class Witt2Elem:
    """(a, b) in W2(k) = k x k with the p-typical ring structure."""

    a: PrimeFieldElem
    b: PrimeFieldElem

    def __post_init__(self):
        if self.a.p != self.b.p:
            raise PrimeMismatch("components over different primes")

    @property
    def p(self) -> int:
        return self.a.p


def w2(p: int, a: int, b: int) -> Witt2Elem:
    return Witt2Elem(PrimeFieldElem(p, a), PrimeFieldElem(p, b))


def w2_add(x: Witt2Elem, y: Witt2Elem) -> Witt2Elem:
    """(a,b) + (c,d) = (a+c, b+d+(a^p+c^p-(a+c)^p)/p).

    The carry term is evaluated over Z, where the division by p is exact, and
    reduced only afterwards.
    """
    if x.p != y.p:
        raise PrimeMismatch(f"{x.p} != {y.p}")
    p = x.p
    a, c = x.a.value, y.a.value
    carry = (a ** p + c ** p - (a + c) ** p) // p
    return w2(p, a + c, x.b.value + y.b.value + carry)


def w2_mul(x: Witt2Elem, y: Witt2Elem) -> Witt2Elem:
    """(a,b) * (c,d) = (ac, a^p d + c^p b)."""
    if x.p != y.p:
        raise PrimeMismatch(f"{x.p} != {y.p}")
    p = x.p
    a, c = x.a.value, y.a.value
    return w2(p, a * c, a ** p * y.b.value + c ** p * x.b.value)


def w2_neg(x: Witt2Elem) -> Witt2Elem:
    m1 = w2(x.p, -1, 0) if x.p != 2 else w2(2, 1, 1)
    return w2_mul(m1, x)


def w2_ghost0(x: Witt2Elem) -> PrimeFieldElem:
    """First ghost component; its kernel is the square-zero ideal V1 = 0 x k."""
    return x.a


def w2_from_int(p: int, n: int) -> Witt2Elem:
    """The image of an integer under Z -> W2(F_p) (matches Z/p^2 digitwise).

    Inverse direction of the standard isomorphism W2(F_p) = Z/p^2 given by
    (a, b) -> teich(a) + p*b.
    """
    n %= p * p
    a = n % p
    b = (n - teichmuller_lift(a, p)) // p
    return w2(p, a, b)


def teichmuller_lift(a: int, p: int) -> int:
    """The Teichmuller representative of a mod p^2 (fixed point of x -> x^p)."""
    a %= p
    t = a
    while True:
        t2 = pow(t, p, p * p)
        if t2 == t:
            return t
        t = t2


def digit_correction(a: int, p: int) -> int:
    """eta(a) = (teich(a) - a)/p mod p: the carry between naive and Witt digits.

    Zero for p = 2 and for a in {0, 1} at every prime; this is the exact gap
    between "second base-p digit" and the W2 coordinate of an integer.
    """
    a %= p
    return ((teichmuller_lift(a, p) - a) // p) % p
