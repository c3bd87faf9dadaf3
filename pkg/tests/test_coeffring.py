"""Length-two Witt coefficients against the Z/p^2 oracle."""

import itertools

import pytest

from ptlab.coeffring import (
    PrimeFieldElem,
    PrimeMismatch,
    TruncatedWittCoeff,
    carry_normalize,
    digit_correction,
    teichmuller_lift,
    w2,
    w2_add,
    w2_from_int,
    w2_ghost0,
    w2_mul,
    w2_neg,
)

PRIMES = (2, 3, 5)


def to_zp2(x):
    """The standard isomorphism W2(F_p) -> Z/p^2, (a,b) -> teich(a) + p*b."""
    p = x.p
    return (teichmuller_lift(x.a.value, p) + p * x.b.value) % (p * p)


def all_elems(p):
    return [w2(p, a, b) for a in range(p) for b in range(p)]


@pytest.mark.parametrize("p", PRIMES)
def test_w2_is_the_ring_zp2(p):
    """to_zp2 is a bijective ring map, checked exhaustively."""
    elems = all_elems(p)
    assert len({to_zp2(x) for x in elems}) == p * p
    for x, y in itertools.product(elems, repeat=2):
        assert to_zp2(w2_add(x, y)) == (to_zp2(x) + to_zp2(y)) % (p * p)
        assert to_zp2(w2_mul(x, y)) == (to_zp2(x) * to_zp2(y)) % (p * p)
    for n in range(p * p):
        assert to_zp2(w2_from_int(p, n)) == n % (p * p)


@pytest.mark.parametrize("p", PRIMES)
def test_w2_ring_axioms_exhaustive(p):
    elems = all_elems(p)
    zero = w2(p, 0, 0)
    one = w2(p, 1, 0)
    for x in elems:
        assert w2_add(x, zero) == x
        assert w2_mul(x, one) == x
        assert w2_add(x, w2_neg(x)) == zero
    for x, y in itertools.product(elems, repeat=2):
        assert w2_add(x, y) == w2_add(y, x)
        assert w2_mul(x, y) == w2_mul(y, x)
    triples = itertools.product(elems, repeat=3)
    for x, y, z in triples:
        assert w2_add(w2_add(x, y), z) == w2_add(x, w2_add(y, z))
        assert w2_mul(w2_mul(x, y), z) == w2_mul(x, w2_mul(y, z))
        assert w2_mul(x, w2_add(y, z)) == w2_add(w2_mul(x, y), w2_mul(x, z))


@pytest.mark.parametrize("p", PRIMES)
def test_v1_squares_to_zero(p):
    """V1 = 0 x k is a square-zero ideal and the kernel of the first ghost."""
    for b, d in itertools.product(range(p), repeat=2):
        x, y = w2(p, 0, b), w2(p, 0, d)
        assert w2_mul(x, y) == w2(p, 0, 0)
        assert w2_ghost0(x).value == 0
    for a in range(1, p):
        assert w2_ghost0(w2(p, a, 0)).value != 0


def test_w2_frozen_additions():
    assert w2_add(w2(2, 1, 0), w2(2, 1, 0)) == w2(2, 0, 1)       # 1+1 = 2 in Z/4
    assert w2_add(w2(3, 1, 0), w2(3, 2, 0)) == w2(3, 0, 0)       # teich(1)+teich(2) = 9 = 0
    assert w2_neg(w2(2, 1, 0)) == w2(2, 1, 1)                    # -1 = 3 = teich(1)+2
    assert w2_from_int(2, 3) == w2(2, 1, 1)
    assert w2_from_int(5, 7) == w2(5, 2, 0)                      # teich(2) = 7 mod 25


def test_teichmuller_fixed_points():
    for p in PRIMES:
        for a in range(p):
            t = teichmuller_lift(a, p)
            assert t % p == a
            assert pow(t, p, p * p) == t
    assert teichmuller_lift(2, 3) == 8
    assert teichmuller_lift(2, 5) == 7
    assert teichmuller_lift(1, 7) == 1


def test_digit_correction_values():
    assert all(digit_correction(a, 2) == 0 for a in range(2))
    assert [digit_correction(a, 3) for a in range(3)] == [0, 0, 2]
    assert digit_correction(0, 5) == 0 and digit_correction(1, 5) == 0
    # eta(2) at p=5: teich(2) = 7, (7-2)/5 = 1
    assert digit_correction(2, 5) == 1


def test_prime_field_and_witt_coeff_bounds():
    x = PrimeFieldElem(5, 7)
    assert x.value == 2
    assert (x + PrimeFieldElem(5, 4)).value == 1
    assert (x * PrimeFieldElem(5, 3)).value == 1
    assert (-x).value == 3
    with pytest.raises(PrimeMismatch):
        x + PrimeFieldElem(3, 1)
    w = TruncatedWittCoeff(2, 3, 11)
    assert w.value == 3
    assert w.digits() == [1, 1, 0]


def test_carry_normalize():
    assert carry_normalize(11, 2, 3) == [1, 1, 0]
    assert carry_normalize(-1, 3, 2) == [2, 2]
    assert carry_normalize(0, 5, 2) == [0, 0]


def test_prime_mismatch_raises():
    with pytest.raises(PrimeMismatch):
        w2_add(w2(2, 1, 0), w2(3, 1, 0))
    with pytest.raises(PrimeMismatch):
        w2_mul(w2(2, 1, 0), w2(5, 1, 0))
