"""Tower axioms, Frobenius projections, pillars, tilt elements."""

from fractions import Fraction
from functools import lru_cache

import pytest

from ptlab.logreg import build_tower, preset
from ptlab.monoid import AffineMonoid, MonoidElem
from ptlab.series import InvariantViolation, SeriesRingDesc, s_monomial, s_one, s_zero
from ptlab.tower import (
    AxiomViolation,
    FrobProjection,
    IncompatibleComponents,
    PillarNotFound,
    TowerDesc,
    Transition,
    frob_qf,
    frobenius_identities,
    frobenius_projection,
    inverse_perfection_is_perfect,
    pillar_system,
    shift_tilt,
    te_add,
    te_mul,
    te_one,
    te_zero,
    teich_tilt,
    tilt_elem,
    tilt_mod_pillar_iso,
    truncate_tilt,
    verify_exactstilt,
    verify_tower,
)

from fixtures import SABOTAGE, sab_c, sab_f


@lru_cache(maxsize=None)
def unram2():
    return build_tower(preset("unramified_rlr", 2), 2, Fraction(4), 2)


@lru_cache(maxsize=None)
def perfect_tower():
    """F_2[[x^{1/2^i}]] with I = (0): every axiom holds without a pillar."""
    triv = AffineMonoid(0, 2, 0, ())
    levels = tuple(
        SeriesRingDesc(monoid_part=triv, free_rank=1, free_level=i, p=2,
                       precision=2, cutoff=Fraction(4), char_p=True)
        for i in range(3)
    )
    return TowerDesc(levels=levels, transitions=(Transition(), Transition()),
                     base_ideal=s_zero(levels[0]), depth=2)


def test_unramified_tower_passes_all_axioms():
    rep = verify_tower(unram2())
    assert rep["all_pass"]
    assert {r["axiom"] for r in rep["axioms"]} == set("abcdefg")
    for r in rep["axioms"]:
        assert r["pass"], r


def test_zero_ideal_tower_passes_with_remarks():
    rep = verify_tower(perfect_tower())
    assert rep["all_pass"]
    notes = [r.get("note", "") for r in rep["axioms"]]
    assert any("I0 = (0)" in n for n in notes)


def test_frobenius_identities_both_directions():
    for i in range(2):
        r = frobenius_identities(unram2(), i)
        assert r["t_after_F_is_frobenius"] and r["F_after_t_is_frobenius"]
        assert r["witnesses"] == []


def test_frobenius_projection_guards():
    T = unram2()
    F = frobenius_projection(T, 0)
    e = T.residue(1).monomial_basis()[0]
    out = F.apply(s_monomial(T.residue(1), e))
    assert out.terms and out.terms[0][0] == e.scale(2)
    with pytest.raises(InvariantViolation):
        F.apply(s_one(T.residue(0)))    # wrong source ring
    Tc, _ = sab_c()
    with pytest.raises(AxiomViolation):
        frobenius_projection(Tc, 0)


def test_pillar_chain_exponents():
    T = unram2()
    pillars = pillar_system(T)
    for i in range(3):
        e = pillars.exponent(i)
        assert e == MonoidElem((1, 0), i, 2)
        if i:
            assert e.scale(2) == pillars.exponent(i - 1)
    assert all(w["pass"] for w in pillars.compatibility_witnesses())


def test_pillar_not_found_on_undividable_ideal():
    Tf, _ = sab_f()
    with pytest.raises(PillarNotFound):
        pillar_system(Tf)


def test_zero_ideal_pillars_are_zero():
    pillars = pillar_system(perfect_tower())
    assert all(g.is_zero for g in pillars.generators)
    assert pillars.exponent(0) is None


def test_sabotage_towers_fail_their_axiom():
    for letter, build in sorted(SABOTAGE.items()):
        T, expected = build()
        rep = verify_tower(T)
        got = {}
        for row in rep["axioms"]:
            got[row["axiom"]] = got.get(row["axiom"], True) and row["pass"]
        assert got == expected, (letter, got)
        failing = [r for r in rep["axioms"] if not r["pass"]]
        assert failing
        for row in failing:
            assert "witness" in row or "note" in row, row


def test_tilt_elements_algebra():
    T = unram2()
    mu = MonoidElem((0, 1), 0, 2)
    nu = MonoidElem((0, 2), 0, 2)
    a = teich_tilt(T, 0, mu, 2)
    b = teich_tilt(T, 0, nu, 2)
    assert te_mul(a, b) == teich_tilt(T, 0, mu + nu, 2)
    assert te_mul(a, te_one(T, 0, 2)) == a
    assert te_add(a, te_zero(T, 0, 2)) == a
    s = te_add(a, b)
    assert s.project(0).coeff(mu) == 1 and s.project(0).coeff(nu) == 1
    # the pillar direction itself projects to zero at home level
    pil = teich_tilt(T, 0, MonoidElem((1, 0), 0, 2), 2)
    assert pil.project(0).is_zero and not pil.is_zero


def test_tilt_elem_compatibility_enforced():
    T = unram2()
    good = teich_tilt(T, 0, MonoidElem((1, 0), 0, 2), 2)
    tilt_elem(T, 0, good.components)    # revalidates
    bad = (good.components[0], s_zero(T.residue(1)), good.components[2])
    with pytest.raises(IncompatibleComponents):
        tilt_elem(T, 0, bad)
    with pytest.raises(IncompatibleComponents):
        te_mul(good, truncate_tilt(good, 1))


def test_shift_and_qf_frobenius_are_inverse():
    rep = inverse_perfection_is_perfect(unram2())
    assert rep["all_pass"]
    names = {row["check"] for row in rep["checks"] if row["pass"]}
    assert names == {"shift_is_inverse_up_to_truncation", "pth_power_then_shift_is_transition",
                     "projection_is_ring_map", "zero_maps_to_zero"}
    assert rep["samples"] >= 2


def test_shift_guards():
    T = unram2()
    x = teich_tilt(T, 1, MonoidElem((1, 0), 1, 2), 1)
    y = shift_tilt(x)
    assert y.home == 2 and y.depth == 0
    with pytest.raises(IncompatibleComponents):
        shift_tilt(y)
    with pytest.raises(IncompatibleComponents):
        frob_qf(teich_tilt(T, 0, MonoidElem((1, 0), 0, 2), 2))


def test_tilt_mod_pillar_iso_sizes():
    T = unram2()
    r0 = tilt_mod_pillar_iso(T, 0)
    r1 = tilt_mod_pillar_iso(T, 1)
    assert r0["bijective"] and r0["basis_size"] == 5
    assert r1["bijective"] and r1["basis_size"] == 17
    assert r0["mismatches"] == []


def test_exactstilt_report_shape():
    rep = verify_exactstilt(unram2(), 0)
    assert rep["all_pass"]
    checks = {row["check"] for row in rep["checks"]}
    assert {"principal", "pillar_power", "torsion"} <= checks


def test_transition_matrix_action():
    t = Transition(((1, 1), (0, 1)))
    e = MonoidElem((2, 3), 1, 2)
    assert t.apply_exp(e) == MonoidElem((5, 3), 1, 2)
    assert Transition().apply_exp(e) == e


def test_tower_descriptor_roundtrip():
    for T in (unram2(), sab_c()[0], perfect_tower()):
        assert TowerDesc.from_descriptor(T.to_descriptor()) == T


def test_cutoff_info():
    info = unram2().cutoff_info()
    assert info == {"depth": 2, "D": "4/1", "N": 2}
