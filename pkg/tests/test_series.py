"""Truncated series arithmetic: carries, relations, residue reduction."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ptlab.monoid import AffineMonoid, MonoidElem
from ptlab.series import (
    InvariantViolation,
    NonMonomialReduction,
    RingMismatch,
    SeriesRingDesc,
    frobenius_mod_I0,
    is_unit,
    make_series,
    reduce_mod_I0,
    reduced_relation_exp,
    s_add,
    s_const,
    s_monomial,
    s_mul,
    s_neg,
    s_one,
    s_pow,
    s_sub,
    s_zero,
    torsion_annihilator,
)

TRIV = AffineMonoid(0, 2, 0, ())

# Z_2[[x1,x2]]/(2 - x1) at precision 2, degree 4
MIXED = SeriesRingDesc(
    monoid_part=TRIV, free_rank=2, free_level=0, p=2, precision=2,
    cutoff=Fraction(4), relation_f=((MonoidElem((1, 0), 0, 2), 1),),
)

# Z/8[[x1,x2]] truncated at degree 6, no relation
WITT = SeriesRingDesc(
    monoid_part=TRIV, free_rank=2, free_level=0, p=2, precision=3,
    cutoff=Fraction(6),
)

# F_2[x,y]/(x^2 y) truncated at degree 4
CHARP = SeriesRingDesc(
    monoid_part=TRIV, free_rank=2, free_level=0, p=2, precision=1,
    cutoff=Fraction(4), char_p=True, quotient_exps=(MonoidElem((2, 1), 0, 2),),
)

RINGS = {"mixed": MIXED, "witt": WITT, "charp": CHARP}


def series_strategy(ring, max_terms=4, degree_cap=None):
    basis = [e for e in (ring.zero_exp,) + ring.monomial_basis()]
    if degree_cap is not None:
        basis = [e for e in basis if e.degree() <= degree_cap]
    term = st.tuples(st.sampled_from(basis), st.integers(-9, 9))
    return st.lists(term, max_size=max_terms).map(lambda ts: make_series(ring, ts))


@pytest.mark.parametrize("name", sorted(RINGS))
def test_ring_axioms(name):
    ring = RINGS[name]

    @settings(deadline=None, max_examples=80)
    @given(series_strategy(ring), series_strategy(ring), series_strategy(ring))
    def check(x, y, z):
        assert s_add(x, y) == s_add(y, x)
        assert s_mul(x, y) == s_mul(y, x)
        assert s_add(s_add(x, y), z) == s_add(x, s_add(y, z))
        assert s_mul(s_mul(x, y), z) == s_mul(x, s_mul(y, z))
        assert s_mul(x, s_add(y, z)) == s_add(s_mul(x, y), s_mul(x, z))
        assert s_add(x, s_zero(ring)) == x
        assert s_mul(x, s_one(ring)) == x
        assert s_add(x, s_neg(x)) == s_zero(ring)
        assert s_sub(x, y) == s_add(x, s_neg(y))

    check()


@pytest.mark.parametrize("name", sorted(RINGS))
def test_canonicalization_is_order_independent(name):
    """Carry normalization is confluent under shuffled term insertion."""
    ring = RINGS[name]
    rng = random.Random(363)
    basis = (ring.zero_exp,) + ring.monomial_basis()
    for _ in range(60):
        terms = [(rng.choice(basis), rng.randint(-9, 9)) for _ in range(rng.randint(0, 6))]
        ref = make_series(ring, terms)
        for _ in range(4):
            rng.shuffle(terms)
            assert make_series(ring, terms) == ref
        cut = rng.randint(0, len(terms))
        assert s_add(make_series(ring, terms[:cut]), make_series(ring, terms[cut:])) == ref


def test_relation_trades_p_for_f():
    # 2 = x1, 4 = x1^2, and a coefficient 3 splits into digit + carry
    x1 = MonoidElem((1, 0), 0, 2)
    assert s_const(MIXED, 2) == s_monomial(MIXED, x1)
    assert s_const(MIXED, 4) == s_monomial(MIXED, x1.scale(2))
    three = s_const(MIXED, 3)
    assert three.constant_coeff == 1
    assert three.coeff(x1) == 1
    # canonical coefficients are base-p digits
    for s in (three, s_const(MIXED, 7), s_monomial(MIXED, x1, 5)):
        assert all(0 <= c < MIXED.p for _, c in s.terms)


def test_relation_respects_cutoff():
    deep = s_monomial(MIXED, MonoidElem((4, 0), 0, 2), 1)
    assert s_mul(deep, s_const(MIXED, 2)).is_zero  # 2*x1^4 = x1^5 leaves D = 4


@settings(deadline=None, max_examples=80)
@given(series_strategy(MIXED), series_strategy(MIXED))
def test_reduce_mod_I0_is_a_ring_map(x, y):
    rx, ry = reduce_mod_I0(x), reduce_mod_I0(y)
    assert reduce_mod_I0(s_add(x, y)) == s_add(rx, ry)
    assert reduce_mod_I0(s_mul(x, y)) == s_mul(rx, ry)


def test_reduce_mod_I0_kills_the_relation_direction():
    x1 = MonoidElem((1, 0), 0, 2)
    r = reduce_mod_I0(s_monomial(MIXED, x1))
    assert r.is_zero
    assert reduce_mod_I0(s_const(MIXED, 2)).is_zero
    assert not reduce_mod_I0(s_monomial(MIXED, MonoidElem((0, 1), 0, 2))).is_zero
    with pytest.raises(NonMonomialReduction):
        reduce_mod_I0(s_one(WITT))


@settings(deadline=None, max_examples=80)
@given(series_strategy(CHARP, degree_cap=Fraction(2)))
def test_frobenius_is_the_p_power_map(x):
    """F agrees with the p-fold product when nothing leaves the cutoff."""
    assert frobenius_mod_I0(x) == s_pow(x, CHARP.p)


@settings(deadline=None, max_examples=60)
@given(series_strategy(CHARP), series_strategy(CHARP))
def test_frobenius_is_a_ring_map(x, y):
    assert frobenius_mod_I0(s_add(x, y)) == s_add(frobenius_mod_I0(x), frobenius_mod_I0(y))
    assert frobenius_mod_I0(s_mul(x, y)) == s_mul(frobenius_mod_I0(x), frobenius_mod_I0(y))


def test_frobenius_rejects_mixed_rings():
    with pytest.raises(InvariantViolation):
        frobenius_mod_I0(s_one(MIXED))


def test_units():
    x2 = MonoidElem((0, 1), 0, 2)
    assert is_unit(s_one(MIXED))
    assert is_unit(s_const(MIXED, 3))
    assert not is_unit(s_const(MIXED, 2))      # p became x1
    assert not is_unit(s_monomial(MIXED, x2))
    assert is_unit(s_add(s_one(CHARP), s_monomial(CHARP, x2)))


def test_quotient_ideal_membership():
    xxy = MonoidElem((2, 1), 0, 2)
    assert s_monomial(CHARP, xxy).is_zero
    assert CHARP.dominated(MonoidElem((3, 1), 0, 2))
    assert not CHARP.dominated(MonoidElem((1, 1), 0, 2))
    assert xxy not in CHARP.monomial_basis()


def test_torsion_annihilator_quotient_plane():
    g = s_monomial(CHARP, MonoidElem((1, 0), 0, 2))
    rep = torsion_annihilator(CHARP, g)
    assert not rep.is_zero
    found = dict(zip(rep.monomial_exps(), rep.minimal_powers))
    assert found[MonoidElem((0, 1), 0, 2)] == 2     # y * x^2 = 0
    assert found[MonoidElem((1, 1), 0, 2)] == 1     # xy * x = 0
    assert MonoidElem((1, 0), 0, 2) not in found    # x is never killed
    assert rep.bounded_exponent == 2


def test_torsion_annihilator_degenerate_generators():
    assert torsion_annihilator(CHARP, s_one(CHARP)).is_zero
    unit = s_add(s_one(CHARP), s_monomial(CHARP, MonoidElem((0, 1), 0, 2)))
    assert torsion_annihilator(CHARP, unit).is_zero
    zero_rep = torsion_annihilator(CHARP, s_zero(CHARP))
    assert not zero_rep.is_zero
    assert set(zero_rep.minimal_powers) == {1}
    with pytest.raises(RingMismatch):
        torsion_annihilator(CHARP, s_one(WITT))


def test_reduced_relation_exp():
    assert reduced_relation_exp(MIXED) == MonoidElem((1, 0), 0, 2)
    two_live = SeriesRingDesc(
        monoid_part=TRIV, free_rank=2, free_level=0, p=2, precision=2,
        cutoff=Fraction(4),
        relation_f=((MonoidElem((1, 0), 0, 2), 1), (MonoidElem((0, 1), 0, 2), 1)),
    )
    with pytest.raises(NonMonomialReduction):
        reduced_relation_exp(two_live)


def test_make_series_validation():
    bad = MonoidElem((1, 0, 0), 0, 2)
    with pytest.raises(InvariantViolation):
        make_series(MIXED, [(bad, 1)], validate=True)
    neg = MonoidElem((-1, 0), 0, 2)
    with pytest.raises(InvariantViolation):
        s_monomial(MIXED, neg)


def test_ring_descriptor_invariants():
    with pytest.raises(InvariantViolation):
        SeriesRingDesc(monoid_part=TRIV, free_rank=1, free_level=0, p=3,
                       precision=2, cutoff=Fraction(4))
    with pytest.raises(InvariantViolation):
        SeriesRingDesc(monoid_part=TRIV, free_rank=1, free_level=0, p=2,
                       precision=2, cutoff=Fraction(4), char_p=True,
                       relation_f=((MonoidElem((1,), 0, 2), 1),))
    with pytest.raises(InvariantViolation):
        SeriesRingDesc(monoid_part=TRIV, free_rank=1, free_level=0, p=2,
                       precision=2, cutoff=Fraction(0))


def test_ring_descriptor_roundtrip():
    for ring in RINGS.values():
        assert SeriesRingDesc.from_descriptor(ring.to_descriptor()) == ring
