"""Affine monoids with symbolic denominator levels and their p-division system.

A monoid element is stored as an integer coordinate vector together with a
level e, meaning that every coordinate carries an implicit denominator c^e for
the monoid's scale base c.  Rescaling between levels is exact, which is the
whole point: the division monoids Q^(i) = {g : c^i g in Q} of a fine sharp
saturated monoid are then literally the same generator vectors read at a
higher level.

Cones are handled by a small double description pass (dimensions up to 6),
which yields facet normals; for saturated monoids membership reduces to the
facet inequalities plus a lattice solve, with bounded enumeration as the
fallback for everything else.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import intlat
from .intlat import FinAbelianGroup


class NotSubmonoid(ValueError):
    pass


class NotSharp(ValueError):
    pass


class NotSaturated(ValueError):
    pass


class NotExact(ValueError):
    pass


def _strip(coords: tuple[int, ...], level: int, base: int) -> tuple[tuple[int, ...], int]:
    # canonical level: divide out the scale base while every coordinate allows it
    while level > 0 and all(x % base == 0 for x in coords):
        coords = tuple(x // base for x in coords)
        level -= 1
    return coords, level


@dataclass(frozen=True)
class MonoidElem:
    """An element of Q_Q: integer coords with denominator base**level.

    Construction canonicalizes the level, so structural equality agrees with
    equality after rescaling to a common level.
    """

    coords: tuple[int, ...]
    level: int
    base: int

    def __post_init__(self):
        if self.base < 2:
            raise ValueError("scale base must be >= 2")
        if self.level < 0:
            raise ValueError("level must be nonnegative")
        coords, level = _strip(tuple(int(x) for x in self.coords), self.level, self.base)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "level", level)

    def at_level(self, level: int) -> tuple[int, ...]:
        """Coordinates rescaled to the given level (must be >= self.level)."""
        if level < self.level:
            raise ValueError("cannot coarsen below the canonical level")
        f = self.base ** (level - self.level)
        return tuple(x * f for x in self.coords)

    def degree(self) -> Fraction:
        return Fraction(sum(self.coords), self.base ** self.level)

    def as_fractions(self) -> tuple[Fraction, ...]:
        d = self.base ** self.level
        return tuple(Fraction(x, d) for x in self.coords)

    @property
    def is_zero(self) -> bool:
        return all(x == 0 for x in self.coords)

    def _combine(self, other: MonoidElem, sign: int) -> MonoidElem:
        if self.base != other.base or len(self.coords) != len(other.coords):
            raise ValueError("mismatched element contexts")
        lv = max(self.level, other.level)
        a, b = self.at_level(lv), other.at_level(lv)
        return MonoidElem(tuple(x + sign * y for x, y in zip(a, b)), lv, self.base)

    def __add__(self, other: MonoidElem) -> MonoidElem:
        return self._combine(other, 1)

    def __sub__(self, other: MonoidElem) -> MonoidElem:
        return self._combine(other, -1)

    def scale(self, n: int) -> MonoidElem:
        return MonoidElem(tuple(n * x for x in self.coords), self.level, self.base)

    def divide(self, i: int = 1) -> MonoidElem:
        """The element divided by base**i (level raised)."""
        return MonoidElem(self.coords, self.level + i, self.base)

    def sort_key(self):
        return (self.degree(), self.as_fractions())

    def __repr__(self):
        if self.level == 0:
            return f"<{','.join(map(str, self.coords))}>"
        return f"<{','.join(map(str, self.coords))}>/{self.base}^{self.level}"


@dataclass(frozen=True)
class AffineMonoid:
    """A fine monoid given by generators at a common denominator level."""

    ambient_rank: int
    scale_base: int
    level: int
    generators: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        gens = tuple(tuple(int(x) for x in g) for g in self.generators)
        for g in gens:
            if len(g) != self.ambient_rank:
                raise ValueError("generator length does not match ambient rank")
        object.__setattr__(self, "generators", gens)
        if self.scale_base < 2:
            raise ValueError("scale base must be >= 2")
        if self.level < 0:
            raise ValueError("level must be nonnegative")

    def elem(self, coords, level: int | None = None) -> MonoidElem:
        return MonoidElem(tuple(coords), self.level if level is None else level, self.scale_base)

    def gen_elems(self) -> tuple[MonoidElem, ...]:
        return tuple(self.elem(g) for g in self.generators)

    @property
    def zero(self) -> MonoidElem:
        return MonoidElem((0,) * self.ambient_rank, 0, self.scale_base)

    def to_descriptor(self) -> dict:
        return {
            "ambient_rank": self.ambient_rank,
            "scale_base": self.scale_base,
            "level": self.level,
            "generators": [list(g) for g in self.generators],
        }

    @classmethod
    def from_descriptor(cls, d: dict) -> AffineMonoid:
        return cls(
            ambient_rank=int(d["ambient_rank"]),
            scale_base=int(d["scale_base"]),
            level=int(d.get("level", 0)),
            generators=tuple(tuple(int(x) for x in g) for g in d["generators"]),
        )


# ---------------------------------------------------------------------------
# cones


def _primitive(v) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def _dot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


def _rank_of(rows) -> int:
    rows = [r for r in rows if any(r)]
    if not rows:
        return 0
    return len(intlat.snf_diagonal(intlat.intmatrix(rows)))


@lru_cache(maxsize=None)
def _ineq_cone_rays(constraints: tuple[tuple[int, ...], ...], n: int):
    """Double description of {y in R^n : <a, y> >= 0 for all a in constraints}.

    Returns (lineality basis, extreme rays), rays primitive.  When a new
    constraint meets the lineality space, one lineality direction becomes a
    ray and everything else is projected onto the constraint hyperplane;
    otherwise the usual positive/negative combination step runs.  All pairs
    are combined (no adjacency test) and extremality is restored by a final
    tight-rank filter; fine for n <= 6.
    """
    lin = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    rays: list[tuple[int, ...]] = []
    for a in constraints:
        if not any(a):
            continue
        pivot = next((l for l in lin if _dot(a, l) != 0), None)
        if pivot is not None:
            pa = _dot(a, pivot)
            if pa < 0:
                pivot = tuple(-x for x in pivot)
                pa = -pa
            new_lin = []
            for l in lin:
                if l is pivot or l == tuple(-x for x in pivot):
                    continue
                proj = _primitive(tuple(l[k] * pa - pivot[k] * _dot(a, l) for k in range(n)))
                if any(proj):
                    new_lin.append(proj)
            lin = new_lin
            rays = [
                _primitive(tuple(r[k] * pa - pivot[k] * _dot(a, r) for k in range(n)))
                for r in rays
            ]
            rays = [r for r in rays if any(r)] + [pivot]
        else:
            pos = [r for r in rays if _dot(a, r) > 0]
            neg = [r for r in rays if _dot(a, r) < 0]
            zero = [r for r in rays if _dot(a, r) == 0]
            combined = []
            for rp in pos:
                for rn in neg:
                    wp, wn = _dot(a, rp), -_dot(a, rn)
                    cand = _primitive(tuple(wn * rp[k] + wp * rn[k] for k in range(n)))
                    if any(cand):
                        combined.append(cand)
            rays = pos + zero + combined
        # dedup; full extremality is restored at the end
        uniq = []
        for r in rays:
            if r not in uniq:
                uniq.append(r)
        rays = uniq
    rays = _extreme_filter(rays, [a for a in constraints if any(a)], lin, n)
    return tuple(lin), tuple(sorted(rays))


def _extreme_filter(rays, constraints, lin, n):
    out = []
    for r in rays:
        if lin and _rank_of(list(lin) + [r]) == _rank_of(lin):
            continue  # inside the lineality space, not a ray
        tight = [a for a in constraints if _dot(a, r) == 0]
        if _rank_of(tight + list(lin)) == n - 1:
            out.append(r)
        elif not constraints and not lin:
            out.append(r)
    return out


@lru_cache(maxsize=None)
def _cone_data(gens: tuple[tuple[int, ...], ...], n: int):
    """Lineality and extreme rays of the dual cone of cone(gens)."""
    return _ineq_cone_rays(gens, n)


def cone_contains(Q: AffineMonoid, coords) -> bool:
    """Membership in the rational cone of Q's generators (scale-free)."""
    lin, rays = _cone_data(Q.generators, Q.ambient_rank)
    v = coords.coords if isinstance(coords, MonoidElem) else tuple(coords)
    return all(_dot(l, v) == 0 for l in lin) and all(_dot(r, v) >= 0 for r in rays)


def facet_normals(Q: AffineMonoid) -> tuple[tuple[int, ...], ...]:
    """Primitive inner normals of the facets of cone(Q), ambient coordinates."""
    _, rays = _cone_data(Q.generators, Q.ambient_rank)
    return rays


# ---------------------------------------------------------------------------
# lattice data


@lru_cache(maxsize=None)
def _gp_basis(gens: tuple[tuple[int, ...], ...], n: int):
    cols = tuple(tuple(g[i] for g in gens) for i in range(n))
    return intlat.lattice_basis(cols)


def gp_basis(Q: AffineMonoid):
    """Basis (as columns) of Q^gp in level-of-Q integer coordinates."""
    return _gp_basis(Q.generators, Q.ambient_rank)


def in_gp(Q: AffineMonoid, x: MonoidElem) -> bool:
    if x.level > Q.level:
        return False
    return intlat.in_lattice(gp_basis(Q), x.at_level(Q.level)) is not None


def dimension(Q: AffineMonoid) -> int:
    """Rank of Q^gp; equals the chain-theoretic dimension for fine sharp Q."""
    _, r = intlat.dims(gp_basis(Q))
    return r


# ---------------------------------------------------------------------------
# membership


def _bounded_combo_member(gens, target, budget) -> bool:
    # DFS over nonneg integer combinations with coefficient-sum <= budget
    gens = [g for g in gens if any(g)]
    if all(x == 0 for x in target):
        return True
    if not gens or budget <= 0:
        return False
    g = gens[0]
    rest = gens[1:]
    t = tuple(target)
    for k in range(budget + 1):
        if all(x == 0 for x in t):
            return True
        if _bounded_combo_member(rest, t, budget - k):
            return True
        t = tuple(a - b for a, b in zip(t, g))
    return all(x == 0 for x in t)


def contains(Q: AffineMonoid, x: MonoidElem, degree_bound: int = 8) -> bool:
    """Monoid membership.

    Saturated monoids get the unconditional cone-and-lattice test; everything
    else falls back to bounded enumeration of generator combinations (the
    budget is a coefficient-sum bound, default 8, enough for every desk-scale
    input in this package).
    """
    if x.level > Q.level:
        return False
    v = x.at_level(Q.level)
    if is_saturated(Q):
        return cone_contains(Q, v) and in_gp(Q, x)
    return _bounded_combo_member(list(Q.generators), v, degree_bound)


# ---------------------------------------------------------------------------
# predicates


def is_sharp(Q: AffineMonoid) -> bool:
    """No nonzero element of Q has its negation in Q (cone pointedness)."""
    for g in Q.generators:
        if any(g) and cone_contains(Q, tuple(-x for x in g)):
            return False
    return True


@lru_cache(maxsize=None)
def _saturation_gap(gens: tuple[tuple[int, ...], ...], n: int, n_max: int, budget: int):
    """Points of cone(Q) cap Q^gp outside Q, by bounded division search.

    Saturation points are exactly the v with m*v in Q for some m >= 1, so the
    search divides bounded generator combinations by every m <= n_max.  The
    result is level-free: the same generator tuples answer for every division
    level.
    """
    basis = _gp_basis(gens, n)
    found = []
    sums = {tuple(0 for _ in range(n))}
    frontier = list(sums)
    for _ in range(budget):
        nxt = []
        for u in frontier:
            for g in gens:
                w = tuple(a + b for a, b in zip(u, g))
                if w not in sums:
                    sums.add(w)
                    nxt.append(w)
        frontier = nxt
    for u in sorted(sums):
        for m in range(2, n_max + 1):
            if all(x % m == 0 for x in u):
                v = tuple(x // m for x in u)
                if not any(v) or intlat.in_lattice(basis, v) is None:
                    continue
                if not _bounded_combo_member(list(gens), v, budget) and v not in found:
                    found.append(v)
    return tuple(sorted(found))


def is_saturated(Q: AffineMonoid, n_max: int = 6, budget: int = 8) -> bool:
    """Q = cone(Q) cap Q^gp, decided by bounded saturation search."""
    return not _saturation_gap(Q.generators, Q.ambient_rank, n_max, budget)


def saturate(Q: AffineMonoid, n_max: int = 6, budget: int = 8) -> AffineMonoid:
    """The minimal saturated monoid between Q and Q^gp (bounded search)."""
    gap = _saturation_gap(Q.generators, Q.ambient_rank, n_max, budget)
    if not gap:
        return Q
    gens = list(Q.generators) + list(gap)
    keep = []
    for i, g in enumerate(gens):
        others = [h for j, h in enumerate(gens) if j != i] + keep
        if not _bounded_combo_member([h for h in others if h != g], g, budget):
            keep.append(g)
    out = AffineMonoid(Q.ambient_rank, Q.scale_base, Q.level, tuple(keep) or ((0,) * Q.ambient_rank,))
    if not is_saturated(out, n_max, budget):
        return saturate(out, n_max, budget)
    return out


# ---------------------------------------------------------------------------
# the p-division system


def p_divide(Q: AffineMonoid, i: int) -> AffineMonoid:
    """Q^(i): same generator vectors, read at level + i.

    For saturated Q this is {g : c^i g in Q} on the nose; in general it is the
    monoid generated by the c^i-th roots of the generators.
    """
    if i < 0:
        raise ValueError("division index must be nonnegative")
    return AffineMonoid(Q.ambient_rank, Q.scale_base, Q.level + i, Q.generators)


def layer_quotient(Q: AffineMonoid, i: int = 0) -> FinAbelianGroup:
    """Structure of (Q^(i+1))^gp / (Q^(i))^gp.

    Both groups are spanned by the same basis at consecutive scales, so the
    quotient is basis/(c * basis) regardless of i; computed honestly through
    the lattice quotient rather than assumed.
    """
    basis = gp_basis(Q)
    c = Q.scale_base
    sub = tuple(tuple(c * x for x in row) for row in basis)
    return intlat.abelian_quotient(basis, sub)


def is_exact_submonoid(Qp: AffineMonoid, Q: AffineMonoid, degree_bound: int = 8) -> bool:
    """Exactness of Qp inside Q: (Qp)^gp cap Q = Qp.

    For saturated pairs the answer is unconditional: exactness is equivalent
    to cone(Q) cap span(Qp^gp) being contained in cone(Qp), which double
    description settles.  Otherwise every element of Q up to the degree bound
    is checked against the groupification of Qp.  Raises NotSubmonoid when
    some generator of Qp is not in Q.
    """
    if Qp.ambient_rank != Q.ambient_rank or Qp.scale_base != Q.scale_base:
        raise NotSubmonoid("ambient contexts differ")
    for g in Qp.gen_elems():
        if not contains(Q, g, degree_bound):
            raise NotSubmonoid(f"generator {g} of the submonoid is outside the monoid")
    if is_saturated(Qp) and is_saturated(Q):
        n = Q.ambient_rank
        level = max(Q.level, Qp.level)
        # cone(Q) cap span(Qp^gp): constraints are Q's facet inequalities plus
        # both signs of a basis of the annihilator of span(Qp^gp)
        perp = intlat.transpose(intlat.kernel(intlat.transpose(_rescaled_basis(Qp, level))))
        constraints = list(facet_normals(Q))
        for row in perp:
            constraints.append(tuple(row))
            constraints.append(tuple(-x for x in row))
        lin, rays = _ineq_cone_rays(tuple(constraints), n)
        for r in list(rays) + [l for l in lin] + [tuple(-x for x in l) for l in lin]:
            if not cone_contains(Qp, r):
                return False
        return True
    return _exact_bounded(Qp, Q, degree_bound)


def _exact_bounded(Qp: AffineMonoid, Q: AffineMonoid, degree_bound: int) -> bool:
    for v in enumerate_elements(Q, Fraction(degree_bound)):
        if in_gp(Qp, v) and not contains(Qp, v, degree_bound):
            return False
    return True


def _rescaled_basis(Q: AffineMonoid, level: int):
    f = Q.scale_base ** (level - Q.level)
    return tuple(tuple(f * x for x in row) for row in gp_basis(Q))


def enumerate_elements(Q: AffineMonoid, max_degree: Fraction):
    """All monoid elements of total degree <= max_degree (nonneg ambients).

    Enumeration is over the ambient simplex, filtered through membership;
    only correct when Q sits inside N^d, which is true of every monoid this
    package constructs.
    """
    d = Q.ambient_rank
    cap = int(max_degree * Q.scale_base ** Q.level)
    out = []

    def rec(prefix, remaining):
        if len(prefix) == d:
            e = Q.elem(prefix)
            if contains(Q, e):
                out.append(e)
            return
        for v in range(remaining + 1):
            rec(prefix + (v,), remaining - v)

    rec((), cap)
    return sorted(set(out), key=lambda e: e.sort_key())


# ---------------------------------------------------------------------------
# exact embeddings and graded decompositions


def exact_embed_Nd(Q: AffineMonoid):
    """Facet-pairing matrix embedding Q exactly into N^(number of facets).

    Rows are the primitive inner facet normals; the map q -> (<n_F, q>)_F is
    the split exact embedding available for fine sharp saturated monoids.
    """
    if not is_sharp(Q):
        raise NotSharp("facet embedding needs a sharp monoid")
    if not is_saturated(Q):
        raise NotSaturated("facet embedding needs a saturated monoid")
    return facet_normals(Q)


@dataclass(frozen=True)
class GradedDecomposition:
    """Grading of Z[Q] by G = Q^gp/(Qp)^gp with the degree-zero retraction."""

    class_group: FinAbelianGroup
    _level: int = field(repr=False)
    _basis: tuple = field(repr=False)
    _U: tuple = field(repr=False)
    _diag: tuple = field(repr=False)

    def class_of(self, x: MonoidElem):
        """Label of x in G; labels are reduced coordinate tuples, additively."""
        if x.level > self._level:
            raise ValueError("element is finer than the grading level")
        t = intlat.in_lattice(self._basis, x.at_level(self._level))
        if t is None:
            raise ValueError("element is outside the ambient groupification")
        u = intlat.mat_vec(self._U, t)
        out = []
        for i, val in enumerate(u):
            d = self._diag[i] if i < len(self._diag) else 0
            out.append(val % d if d else val)
        return tuple(out)

    def is_zero_class(self, x: MonoidElem) -> bool:
        return all(v == 0 for v in self.class_of(x))

    def retract(self, elems):
        """The degree-zero part: keeps exactly the Qp^gp-indexed elements."""
        return tuple(e for e in elems if self.is_zero_class(e))


def graded_decomposition(Qp: AffineMonoid, Q: AffineMonoid, degree_bound: int = 8) -> GradedDecomposition:
    """Grading of Q by G = Q^gp/(Qp)^gp, with exactness as precondition."""
    if not is_exact_submonoid(Qp, Q, degree_bound):
        raise NotExact("submonoid is not exact in the ambient monoid")
    level = max(Q.level, Qp.level)
    bq = _rescaled_basis(Q, level)
    bqp = _rescaled_basis(Qp, level)
    group = intlat.abelian_quotient(bq, bqp)
    rows, rank = intlat.dims(bq)
    _, scols = intlat.dims(bqp)
    if scols == 0:
        U, diag = intlat.identity(rank), ()
    else:
        coords = []
        for j in range(scols):
            col = tuple(bqp[i][j] for i in range(rows))
            coords.append(intlat.in_lattice(bq, col))
        X = intlat.transpose(intlat.intmatrix(coords))
        U, D, _ = intlat.snf(X)
        dr, dc = intlat.dims(D)
        diag = tuple(D[i][i] for i in range(min(dr, dc)))
    return GradedDecomposition(
        class_group=group,
        _level=level,
        _basis=bq,
        _U=U,
        _diag=diag,
    )
