"""Log-regular presentations, their p-division towers, and tilt prediction.

A presentation is the complete normal form C(k)[[Q + N^r]]/(p - f) with Q
fine, sharp and saturated and k = F_p, so the residue-field part of the
general construction is empty and the tower is determined by dividing
exponents.  The regularity toolkit at the bottom works with the truncated
differential module of the base ring: dimension d+1 in the unramified mixed
case (the class of p joins the coordinate classes), d in equal
characteristic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .coeffring import digit_correction
from .monoid import (
    AffineMonoid,
    MonoidElem,
    dimension,
    is_saturated,
    is_sharp,
    layer_quotient,
    p_divide,
)
from .series import Series, SeriesRingDesc, make_series, s_monomial
from .tower import TowerDesc, Transition


class InvalidPresentation(ValueError):
    pass


class UnsupportedBase(ValueError):
    pass


@dataclass(frozen=True)
class LogRegPresentation:
    """The Kato normal form: monoid part Q, free rank r, relation p - f."""

    Q: AffineMonoid
    r: int
    p: int
    f_terms: tuple[tuple[MonoidElem, int], ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not is_sharp(self.Q):
            raise InvalidPresentation("monoid part must be sharp")
        if not is_saturated(self.Q):
            raise InvalidPresentation("monoid part must be saturated")
        if self.Q.scale_base != self.p:
            raise InvalidPresentation("monoid scale base must match p")
        for e, _ in self.f_terms:
            if e.degree() <= 0:
                raise InvalidPresentation("f must have positive degree in every term")

    @property
    def width(self) -> int:
        return self.Q.ambient_rank + self.r

    def ring(self, level: int, D: Fraction, N: int) -> SeriesRingDesc:
        """Level-i ring C(k)[[Q^(i) + (N^r)^(i)]]/(p - f), or k[[...]] if f = 0."""
        rel = tuple(sorted(self.f_terms, key=lambda t: t[0].sort_key())) or None
        return SeriesRingDesc(
            monoid_part=p_divide(self.Q, level),
            free_rank=self.r,
            free_level=level,
            p=self.p,
            precision=N,
            cutoff=Fraction(D),
            relation_f=rel,
            char_p=rel is None,
        )

    def to_descriptor(self) -> dict:
        return {
            "monoid": self.Q.to_descriptor(),
            "free_rank": self.r,
            "p": self.p,
            "f": [
                {"exponent": list(e.coords), "level": e.level, "coeff": c}
                for e, c in self.f_terms
            ],
            "labels": list(self.labels),
        }

    @classmethod
    def from_descriptor(cls, d: dict) -> LogRegPresentation:
        Q = AffineMonoid.from_descriptor(d["monoid"])
        p = int(d["p"])
        f_terms = tuple(
            (MonoidElem(tuple(t["exponent"]), int(t.get("level", 0)), p), int(t["coeff"]))
            for t in d["f"]
        )
        return cls(Q=Q, r=int(d["free_rank"]), p=p, f_terms=f_terms,
                   labels=tuple(d.get("labels", ())))


def preset_unramified(p: int, d: int) -> LogRegPresentation:
    """W(k)[[x_1..x_d]]/(p - x_1): trivial monoid part, f the first variable."""
    if d < 1:
        raise InvalidPresentation("need at least one free variable for f = x_1")
    Q = AffineMonoid(ambient_rank=0, scale_base=p, level=0, generators=())
    e1 = MonoidElem((1,) + (0,) * (d - 1), 0, p)
    return LogRegPresentation(Q=Q, r=d, p=p, f_terms=((e1, 1),),
                              labels=tuple(f"x{i + 1}" for i in range(d)))


def preset_quadric(p: int) -> LogRegPresentation:
    """W(k)[[x,y,z,w]]/(xy - zw, p - w) as the monoid ring of the quadric cone."""
    Q = AffineMonoid(
        ambient_rank=4,
        scale_base=p,
        level=0,
        generators=((1, 1, 0, 0), (0, 0, 1, 1), (1, 0, 0, 1), (0, 1, 1, 0)),
    )
    w = MonoidElem((0, 1, 1, 0), 0, p)
    return LogRegPresentation(Q=Q, r=0, p=p, f_terms=((w, 1),),
                              labels=("x", "y", "z", "w"))


def preset(name: str, p: int, d: int = 2, custom: dict | None = None) -> LogRegPresentation:
    if name == "unramified_rlr":
        return preset_unramified(p, d)
    if name == "quadric":
        return preset_quadric(p)
    if name == "custom":
        if custom is None:
            raise InvalidPresentation("custom preset needs a presentation descriptor")
        return LogRegPresentation.from_descriptor(custom)
    raise InvalidPresentation(f"unknown preset {name!r}")


def build_tower(P: LogRegPresentation, depth: int, D=Fraction(4), N: int = 2) -> TowerDesc:
    """The division tower R_i = C(k)[[Q^(i) + (N^r)^(i)]]/(p - f), I_0 = (p)."""
    levels = tuple(P.ring(i, Fraction(D), N) for i in range(depth + 1))
    R0 = levels[0]
    base = make_series(R0, [(R0.zero_exp, P.p)])
    return TowerDesc(
        levels=levels,
        transitions=tuple(Transition() for _ in range(depth)),
        base_ideal=base,
        depth=depth,
    )


def predict_tilt(P: LogRegPresentation, depth: int, D=Fraction(4), N: int = 2) -> TowerDesc:
    """The equal-characteristic tower k[[Q^(i) + (N^r)^(i)]] with f-bar as ideal.

    The relation direction survives the tilt as an honest coordinate; the
    tilted base ideal is the f-bar monomial itself.
    """
    levels = []
    for i in range(depth + 1):
        levels.append(SeriesRingDesc(
            monoid_part=p_divide(P.Q, i),
            free_rank=P.r,
            free_level=i,
            p=P.p,
            precision=N,
            cutoff=Fraction(D),
            relation_f=None,
            char_p=True,
        ))
    levels = tuple(levels)
    fbar = _fbar_exp(P)
    if fbar is None:
        base = make_series(levels[0], [])
    else:
        base = s_monomial(levels[0], fbar)
    return TowerDesc(
        levels=levels,
        transitions=tuple(Transition() for _ in range(depth)),
        base_ideal=base,
        depth=depth,
    )


def _fbar_exp(P: LogRegPresentation) -> MonoidElem | None:
    live = [(e, c % P.p) for e, c in P.f_terms if c % P.p != 0]
    if len(live) != 1:
        return None
    return live[0][0]


def verify_tilt(P: LogRegPresentation, depth: int, D=Fraction(4), N: int = 2) -> dict:
    """Computed small tilt vs the predicted equal-characteristic tower.

    Per level j: the monomial basis of the tilt modulo its pillar (which the
    truncated tuples see) must equal the basis of the predicted ring modulo
    f-bar, transitions must agree monomial-by-monomial, the generic transition
    degree must be the layer-quotient order times p^r, and dimensions match.
    """
    T = build_tower(P, depth, D, N)
    Tp = predict_tilt(P, depth, D, N)
    rows = []
    for j in range(depth + 1):
        Sj = T.residue(j)
        Pj = Tp.residue(j)
        src = set(Sj.monomial_basis())
        prd = set(Pj.monomial_basis())
        missing = sorted(prd - src, key=lambda e: e.sort_key())
        extra = sorted(src - prd, key=lambda e: e.sort_key())
        rows.append({
            "check": "basis_match",
            "level": j,
            "pass": not missing and not extra,
            "basis_size": len(src),
            "witnesses": [
                {"exponent": list(e.coords), "level": e.level}
                for e in (missing + extra)[:3]
            ],
        })
        dim_src = dimension(P.Q) + P.r  # relation spends the +1 of C(k)
        dim_prd = dimension(Tp.levels[j].monoid_part) + Tp.levels[j].free_rank
        rows.append({"check": "dimension", "level": j, "pass": dim_src == dim_prd,
                     "source": dim_src, "tilt": dim_prd})
    for j in range(depth):
        ok = True
        Pj1 = Tp.residue(j + 1)
        for e in Tp.residue(j).monomial_basis():
            a = Tp.transition_bar(j, s_monomial(Tp.residue(j), e))
            b = make_series(Pj1, [(e, 1)])
            if a != b:
                ok = False
                break
        deg = layer_quotient(P.Q, j).torsion_order() * P.p ** P.r
        ppow = _is_p_power(deg, P.p)
        rows.append({"check": "transition_match", "level": j, "pass": ok})
        rows.append({"check": "transition_degree", "level": j,
                     "pass": ppow, "degree": deg})
    return {"checks": rows, "all_pass": all(r["pass"] for r in rows),
            "cutoff": T.cutoff_info()}


def _is_p_power(n: int, p: int) -> bool:
    if n < 1:
        return False
    while n % p == 0:
        n //= p
    return n == 1


def kato_dim_check(P: LogRegPresentation) -> dict:
    """dim R = dim(R/I_alpha) + dim Q on the presentation bookkeeping.

    The monoid ideal I_alpha is generated by the nonzero monoid monomials.
    With a relation the coefficient direction is spent: dim R = dim Q + r and
    dim R/I_alpha = r; without one, both sides gain 1 in mixed characteristic.
    """
    dQ = dimension(P.Q)
    has_rel = bool(P.f_terms)
    if has_rel:
        dim_R = dQ + P.r
        dim_mod = P.r
    else:
        dim_R = dQ + P.r + 1
        dim_mod = P.r + 1
    return {
        "dim_R": dim_R,
        "dim_mod_I_alpha": dim_mod,
        "dim_Q": dQ,
        "pass": dim_R == dim_mod + dQ,
    }


# ---------------------------------------------------------------------------
# regularity toolkit: truncated differential module of A = C(k)[[x_1..x_d]]


@dataclass(frozen=True)
class BaseRing:
    """A = C(F_p)[[x_1..x_d]] (mixed) or F_p[[x_1..x_d]] (equal characteristic)."""

    p: int
    d: int
    mixed: bool = True

    def __post_init__(self):
        if self.p < 2 or any(self.p % q == 0 for q in range(2, self.p)):
            raise UnsupportedBase("p must be prime")
        if self.d < 0:
            raise UnsupportedBase("negative variable count")

    def series_ring(self, D=Fraction(3), N: int = 2) -> SeriesRingDesc:
        Q = AffineMonoid(ambient_rank=0, scale_base=self.p, level=0, generators=())
        return SeriesRingDesc(
            monoid_part=Q,
            free_rank=self.d,
            free_level=0,
            p=self.p,
            precision=N,
            cutoff=Fraction(D),
            relation_f=None,
            char_p=not self.mixed,
        )


@dataclass(frozen=True)
class OmegaModule:
    """The truncated differential module: dimension and basis labels only."""

    p: int
    d: int
    mixed: bool
    dim: int
    basis_labels: tuple[str, ...]


def omega_dim(A: BaseRing) -> OmegaModule:
    """Mixed unramified: d+1 (class of p joins the coordinates); else d."""
    labels = tuple(f"dx{i + 1}" for i in range(A.d))
    if A.mixed:
        return OmegaModule(A.p, A.d, True, A.d + 1, ("dp",) + labels)
    return OmegaModule(A.p, A.d, False, A.d, labels)


def d_class(A: BaseRing, x: Series) -> tuple[int, ...]:
    """Class of x in the truncated differential module, over F_p.

    Mixed case: (second base-p digit of the constant corrected by the
    Teichmuller defect of the first, then the linear coefficients mod p).
    The correction makes the p-coordinate the honest coefficient of dp: a
    Teichmuller unit constant has zero class.
    """
    ring = A.series_ring()
    if x.ring.free_rank != A.d or x.ring.p != A.p:
        raise UnsupportedBase("series does not live over this base")
    lin = []
    for i in range(A.d):
        e = ring.exp(tuple(1 if k == i else 0 for k in range(A.d)))
        lin.append(x.coeff(e) % A.p)
    if not A.mixed:
        return tuple(lin)
    c = x.constant_coeff % A.p ** 2
    a0 = c % A.p
    a1 = (c - a0) // A.p % A.p
    corrected = (a1 - digit_correction(a0, A.p)) % A.p
    return (corrected, *lin)


def _fp_rank(rows: list[tuple[int, ...]], p: int) -> int:
    mat = [list(r) for r in rows]
    rank = 0
    cols = len(mat[0]) if mat else 0
    for c in range(cols):
        piv = next((r for r in range(rank, len(mat)) if mat[r][c] % p != 0), None)
        if piv is None:
            continue
        mat[rank], mat[piv] = mat[piv], mat[rank]
        inv = pow(mat[rank][c], -1, p)
        mat[rank] = [v * inv % p for v in mat[rank]]
        for r in range(len(mat)):
            if r != rank and mat[r][c] % p != 0:
                f = mat[r][c]
                mat[r] = [(v - f * w) % p for v, w in zip(mat[r], mat[rank])]
        rank += 1
    return rank


def is_maximal_sequence(A: BaseRing, elems) -> bool:
    """True iff the differential classes of elems form a basis."""
    om = omega_dim(A)
    classes = [d_class(A, x) for x in elems]
    if len(classes) != om.dim:
        return False
    return _fp_rank(classes, A.p) == om.dim


def kummer_regularity(A: BaseRing, f_list, e_list) -> bool:
    """Regularity of A[T_1..T_n]/(T_i^{e_i} - f_i) at the obvious center.

    Decided by linear independence of the differential classes of the f_i;
    each exponent must exceed 1 for the extension to be a genuine cover.
    """
    if len(f_list) != len(e_list):
        raise UnsupportedBase("one exponent per element")
    for e in e_list:
        if e <= 1:
            raise UnsupportedBase("exponents must exceed 1")
    classes = [d_class(A, x) for x in f_list]
    if not classes:
        return True
    return _fp_rank(classes, A.p) == len(classes)
