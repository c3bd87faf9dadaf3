"""Deliberately broken towers, each violating exactly one axiom.

Every fixture returns (tower, expected) where expected maps axiom letters to
the pass verdict the verification report must show.  The (b) fixture also
pins its forced (c) failure: once some basis monomial has a vanishing
transition image, counting shows the Frobenius image set cannot be covered,
so a lone (b) break is impossible and the expectation records both.
"""

from dataclasses import replace
from fractions import Fraction

from ptlab.logreg import build_tower, preset_unramified
from ptlab.monoid import AffineMonoid, MonoidElem
from ptlab.series import SeriesRingDesc, make_series, s_monomial, s_one
from ptlab.tower import TowerDesc, Transition

DEPTH = 2
D = Fraction(4)
N = 2

ALL_PASS = {a: True for a in "abcdefg"}


def _unram_tower(p=2):
    return build_tower(preset_unramified(p, 2), DEPTH, D, N)


def sab_a():
    """Base ideal (x2) misses p: only (a) fails."""
    T = _unram_tower()
    R0 = T.levels[0]
    bad = s_monomial(R0, R0.exp((0, 1)))
    return replace(T, base_ideal=bad), {**ALL_PASS, "a": False}


def sab_b():
    """Transition absorbs x1 into x2, so x2-images vanish mod I0.

    (c) fails with it: the surviving image set is too small to contain every
    Frobenius image, by counting.
    """
    T = _unram_tower()
    absorb = Transition(((1, 1), (0, 1)))
    return replace(T, transitions=(absorb,) * DEPTH), {**ALL_PASS, "b": False, "c": False}


def sab_c():
    """Transition doubles the x2-exponent: injective, but Frobenius images
    of genuinely new level-(i+1) monomials have no preimage."""
    T = _unram_tower()
    twist = Transition(((1, 0), (0, 2)))
    return replace(T, transitions=(twist,) * DEPTH), {**ALL_PASS, "c": False}


def _half_fixed_levels(monoid_is_relation: bool):
    """Levels with one divided free coordinate and one frozen monoid
    coordinate; the relation sits on the free side or the frozen side."""
    Q = AffineMonoid(ambient_rank=1, scale_base=2, level=0, generators=((1,),))
    levels = []
    for i in range(DEPTH + 1):
        if monoid_is_relation:
            rel_exp = MonoidElem((1, 0), 0, 2)  # frozen monoid coordinate
        else:
            rel_exp = MonoidElem((0, 1), 0, 2)  # divided free coordinate
        levels.append(SeriesRingDesc(
            monoid_part=Q,
            free_rank=1,
            free_level=i,
            p=2,
            precision=N,
            cutoff=D,
            relation_f=((rel_exp, 1),),
        ))
    R0 = levels[0]
    base = make_series(R0, [(R0.zero_exp, 2)])
    return TowerDesc(
        levels=tuple(levels),
        transitions=(Transition(),) * DEPTH,
        base_ideal=base,
        depth=DEPTH,
    )


def sab_d():
    """The frozen monoid coordinate has no p-th root, so the Frobenius
    projections miss it; the pillar direction is still divided, so (f) holds."""
    return _half_fixed_levels(monoid_is_relation=False), {**ALL_PASS, "d": False}


def sab_e():
    """Base ideal (1) is the unit ideal: only Zariskian locality fails.

    The residue rings collapse to zero, which makes the other probes pass
    vacuously; the exponent-zero pillar chain still exists.
    """
    T = _unram_tower()
    return replace(T, base_ideal=s_one(T.levels[0])), {**ALL_PASS, "e": False}


def sab_f():
    """The relation direction is frozen, so no monomial pillar chain exists;
    (d) survives because the residue rings kill that direction."""
    return _half_fixed_levels(monoid_is_relation=True), {**ALL_PASS, "f": False}


def sab_g():
    """Equal characteristic k[x^{1/2^i}, y^{1/2^i}]/(x^2 y) with I0 = (x):
    y is power-torsion but x*y is not zero, so torsion is not killed by I0."""
    Q = AffineMonoid(ambient_rank=0, scale_base=2, level=0, generators=())
    quot = MonoidElem((2, 1), 0, 2)
    levels = []
    for i in range(DEPTH + 1):
        levels.append(SeriesRingDesc(
            monoid_part=Q,
            free_rank=2,
            free_level=i,
            p=2,
            precision=N,
            cutoff=D,
            relation_f=None,
            char_p=True,
            quotient_exps=(quot,),
        ))
    R0 = levels[0]
    T = TowerDesc(
        levels=tuple(levels),
        transitions=(Transition(),) * DEPTH,
        base_ideal=s_monomial(R0, R0.exp((1, 0))),
        depth=DEPTH,
    )
    return T, {**ALL_PASS, "g": False}


SABOTAGE = {
    "a": sab_a,
    "b": sab_b,
    "c": sab_c,
    "d": sab_d,
    "e": sab_e,
    "f": sab_f,
    "g": sab_g,
}
