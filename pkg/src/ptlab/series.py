"""Truncated monoid power series with canonical forms modulo theta = p - f.

A ring descriptor pins down everything about a level of a tower: the divided
monoid part Q^(i), the free part (N^r) at its own level, the prime, the input
coefficient precision N, the rational degree cutoff D, an optional relation
theta = p - f, and (for residue rings) a monomial quotient ideal.

Canonical form in a relation ring: coefficients are expanded into base-p
digits over the exact integers and every p is traded for the series f until
all coefficients are digits in [0, p) or the terms leave the cutoff.  Negative
integers expand like p-adic ones (-1 becomes (p-1)(1 + f + f^2 + ...)), which
terminates because f has positive degree.  No reduction mod p^N happens during
normalization; that keeps the truncated ring an honest quotient of
C(k)[[monoid]] and the ring axioms exact at the cutoff.  The precision N is an
input contract for descriptors and shows up in reports; it is not a rewrite
rule.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .monoid import AffineMonoid, MonoidElem, contains


class RingMismatch(ValueError):
    pass


class NonMonomialReduction(ValueError):
    pass


class InvariantViolation(ValueError):
    pass


@dataclass(frozen=True)
class SeriesRingDesc:
    """Descriptor of one truncated ring C(k)[[Q^(i) + (N^r)^(i)]]/(theta).

    Exponents are combined MonoidElem vectors of length ambient_rank + free_rank;
    the monoid part is sliced off the front.  char_p rings carry F_p
    coefficients and may quotient by a monomial ideal (quotient_exps); mixed
    rings may carry the Kato relation theta = p - f as a term tuple.
    """

    monoid_part: AffineMonoid
    free_rank: int
    free_level: int
    p: int
    precision: int
    cutoff: Fraction
    relation_f: tuple[tuple[MonoidElem, int], ...] | None = None
    char_p: bool = False
    quotient_exps: tuple[MonoidElem, ...] = ()

    def __post_init__(self):
        if self.p != self.monoid_part.scale_base:
            raise InvariantViolation("prime differs from the monoid scale base")
        if self.free_rank < 0 or self.free_level < 0:
            raise InvariantViolation("free part data must be nonnegative")
        if self.precision < 1:
            raise InvariantViolation("precision must be >= 1")
        object.__setattr__(self, "cutoff", Fraction(self.cutoff))
        if self.cutoff <= 0:
            raise InvariantViolation("degree cutoff must be positive")
        if self.relation_f is not None:
            if self.char_p:
                raise InvariantViolation("relation rings are mixed characteristic")
            terms = tuple(sorted(self.relation_f, key=lambda t: t[0].sort_key()))
            object.__setattr__(self, "relation_f", terms)
            for e, c in terms:
                if e.degree() <= 0:
                    raise InvariantViolation("relation f must have positive degree terms")
                if not self.exp_in_ring(e):
                    raise InvariantViolation("relation exponent outside the ring monoid")
        if self.quotient_exps:
            if not self.char_p:
                raise InvariantViolation("monomial quotients live in residue rings")
            object.__setattr__(
                self, "quotient_exps",
                tuple(sorted(self.quotient_exps, key=lambda e: e.sort_key())),
            )

    @property
    def width(self) -> int:
        return self.monoid_part.ambient_rank + self.free_rank

    def exp(self, coords, level: int = 0) -> MonoidElem:
        return MonoidElem(tuple(coords), level, self.p)

    @property
    def zero_exp(self) -> MonoidElem:
        return MonoidElem((0,) * self.width, 0, self.p)

    def split(self, e: MonoidElem) -> tuple[MonoidElem, MonoidElem]:
        d = self.monoid_part.ambient_rank
        return (
            MonoidElem(e.coords[:d], e.level, self.p),
            MonoidElem(e.coords[d:], e.level, self.p),
        )

    def exp_in_ring(self, e: MonoidElem) -> bool:
        """Validity of a combined exponent (degree cutoff not included)."""
        if len(e.coords) != self.width:
            return False
        mpart, fpart = self.split(e)
        if any(x < 0 for x in fpart.coords) or fpart.level > self.free_level:
            return False
        return contains(self.monoid_part, mpart)

    def dominated(self, e: MonoidElem) -> bool:
        """Membership of e in the monomial quotient ideal."""
        return any(self.exp_in_ring(e - q) for q in self.quotient_exps)

    def monomial_basis(self) -> tuple[MonoidElem, ...]:
        return _monomial_basis(self)

    def residue_ring(self) -> SeriesRingDesc:
        """The mod-I0 ring: same exponents, F_p coefficients, f-bar quotient."""
        fbar = reduced_relation_exp(self)
        return SeriesRingDesc(
            monoid_part=self.monoid_part,
            free_rank=self.free_rank,
            free_level=self.free_level,
            p=self.p,
            precision=self.precision,
            cutoff=self.cutoff,
            relation_f=None,
            char_p=True,
            quotient_exps=(fbar,),
        )

    def to_descriptor(self) -> dict:
        out = {
            "monoid": self.monoid_part.to_descriptor(),
            "free_rank": self.free_rank,
            "free_level": self.free_level,
            "p": self.p,
            "precision": self.precision,
            "cutoff": f"{self.cutoff.numerator}/{self.cutoff.denominator}",
        }
        if self.relation_f is not None:
            out["relation_f"] = [_term_json(e, c) for e, c in self.relation_f]
        if self.char_p:
            out["char_p"] = True
        if self.quotient_exps:
            out["quotient_exponents"] = [
                {"exponent": list(e.coords), "level": e.level} for e in self.quotient_exps
            ]
        return out

    @classmethod
    def from_descriptor(cls, d: dict) -> SeriesRingDesc:
        mon = AffineMonoid.from_descriptor(d["monoid"])
        p = int(d["p"])
        rel = None
        if d.get("relation_f") is not None:
            rel = tuple(
                (MonoidElem(tuple(t["exponent"]), int(t.get("level", 0)), p), int(t["coeff"]))
                for t in d["relation_f"]
            )
        quot = tuple(
            MonoidElem(tuple(t["exponent"]), int(t.get("level", 0)), p)
            for t in d.get("quotient_exponents", ())
        )
        num, _, den = str(d["cutoff"]).partition("/")
        return cls(
            monoid_part=mon,
            free_rank=int(d["free_rank"]),
            free_level=int(d.get("free_level", mon.level)),
            p=p,
            precision=int(d["precision"]),
            cutoff=Fraction(int(num), int(den) if den else 1),
            relation_f=rel,
            char_p=bool(d.get("char_p", False)),
            quotient_exps=quot,
        )


def _term_json(e: MonoidElem, c: int) -> dict:
    return {"exponent": list(e.coords), "level": e.level, "coeff": int(c)}


def reduced_relation_exp(ring: SeriesRingDesc) -> MonoidElem:
    """The exponent of f-bar = f mod p, which must be a single monomial."""
    if ring.relation_f is None:
        raise NonMonomialReduction("ring has no relation to reduce by")
    live = [(e, c % ring.p) for e, c in ring.relation_f if c % ring.p != 0]
    if len(live) != 1:
        raise NonMonomialReduction(
            "f mod p is not a monomial; declare a monomial order to proceed"
        )
    return live[0][0]


@lru_cache(maxsize=None)
def _monomial_basis(ring: SeriesRingDesc) -> tuple[MonoidElem, ...]:
    """All valid exponents of degree <= D surviving the monomial quotient."""
    from .monoid import enumerate_elements

    d = ring.monoid_part.ambient_rank
    mparts = enumerate_elements(ring.monoid_part, ring.cutoff)
    out = []
    fden = ring.p ** ring.free_level
    for m in mparts:
        room = ring.cutoff - m.degree()
        cap = int(room * fden)
        for v in _compositions(ring.free_rank, cap):
            lv = max(m.level, ring.free_level)
            mc = m.at_level(lv)
            fc = tuple(x * ring.p ** (lv - ring.free_level) for x in v)
            e = MonoidElem(mc + fc, lv, ring.p)
            if not ring.dominated(e):
                out.append(e)
    return tuple(sorted(set(out), key=lambda e: e.sort_key()))


def _compositions(r: int, cap: int):
    if r == 0:
        yield ()
        return
    for head in range(cap + 1):
        for tail in _compositions(r - 1, cap - head):
            yield (head,) + tail


@dataclass(frozen=True)
class Series:
    """An element in canonical form: sorted terms, coefficients reduced."""

    ring: SeriesRingDesc
    terms: tuple[tuple[MonoidElem, int], ...]

    def coeff(self, e: MonoidElem) -> int:
        for ee, c in self.terms:
            if ee == e:
                return c
        return 0

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def constant_coeff(self) -> int:
        return self.coeff(self.ring.zero_exp)

    def monomials(self) -> tuple[MonoidElem, ...]:
        return tuple(e for e, _ in self.terms)

    def to_json(self) -> list[dict]:
        return [_term_json(e, c) for e, c in self.terms]

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*e{e!r}" for e, c in self.terms)


def make_series(ring: SeriesRingDesc, raw, validate: bool = False) -> Series:
    """Canonicalize raw (exponent, coefficient) data into a Series.

    Truncation drops exponents beyond D silently; invalid exponents raise only
    under validate=True (internal arithmetic never produces them).
    """
    acc: dict[MonoidElem, int] = {}
    items = raw.items() if isinstance(raw, dict) else raw
    for e, c in items:
        if validate and not ring.exp_in_ring(e):
            raise InvariantViolation(f"exponent {e} is not in the ring monoid")
        if e.degree() > ring.cutoff or c == 0:
            continue
        if ring.quotient_exps and ring.dominated(e):
            continue
        acc[e] = acc.get(e, 0) + c

    if ring.char_p:
        norm = {e: c % ring.p for e, c in acc.items()}
    elif ring.relation_f is None:
        pn = ring.p ** ring.precision
        norm = {e: c % pn for e, c in acc.items()}
    else:
        norm = _digit_normalize(ring, acc)
    terms = tuple(
        sorted(((e, c) for e, c in norm.items() if c != 0), key=lambda t: t[0].sort_key())
    )
    return Series(ring, terms)


def _digit_normalize(ring: SeriesRingDesc, acc: dict[MonoidElem, int]) -> dict[MonoidElem, int]:
    """Rewrite until every coefficient is a base-p digit, trading p for f.

    Smallest degree first; substitution pushes mass to strictly larger degree,
    so one pass over a growing heap terminates and the result is independent
    of the input order.
    """
    p = ring.p
    work = dict(acc)
    heap = [(e.sort_key(), e) for e in work]
    heapq.heapify(heap)
    queued = set(work)
    while heap:
        _, e = heapq.heappop(heap)
        queued.discard(e)
        c = work.get(e, 0)
        if 0 <= c < p:
            continue
        d0 = c % p
        rest = (c - d0) // p
        work[e] = d0
        for fe, fc in ring.relation_f:
            e2 = e + fe
            if e2.degree() > ring.cutoff:
                continue
            work[e2] = work.get(e2, 0) + rest * fc
            if e2 not in queued:
                heapq.heappush(heap, (e2.sort_key(), e2))
                queued.add(e2)
    return work


def s_zero(ring: SeriesRingDesc) -> Series:
    return Series(ring, ())


def s_one(ring: SeriesRingDesc) -> Series:
    return make_series(ring, [(ring.zero_exp, 1)])


def s_monomial(ring: SeriesRingDesc, e: MonoidElem, c: int = 1) -> Series:
    return make_series(ring, [(e, c)], validate=True)


def s_const(ring: SeriesRingDesc, c: int) -> Series:
    return make_series(ring, [(ring.zero_exp, c)])


def _same_ring(x: Series, y: Series):
    if x.ring != y.ring:
        raise RingMismatch("series live in different rings")


def s_add(x: Series, y: Series) -> Series:
    _same_ring(x, y)
    acc: dict[MonoidElem, int] = dict(x.terms)
    for e, c in y.terms:
        acc[e] = acc.get(e, 0) + c
    return make_series(x.ring, acc)


def s_neg(x: Series) -> Series:
    return make_series(x.ring, [(e, -c) for e, c in x.terms])


def s_sub(x: Series, y: Series) -> Series:
    return s_add(x, s_neg(y))


def s_scale(x: Series, n: int) -> Series:
    return make_series(x.ring, [(e, n * c) for e, c in x.terms])


def s_mul(x: Series, y: Series) -> Series:
    _same_ring(x, y)
    acc: dict[MonoidElem, int] = {}
    for e1, c1 in x.terms:
        for e2, c2 in y.terms:
            e = e1 + e2
            if e.degree() > x.ring.cutoff:
                continue
            acc[e] = acc.get(e, 0) + c1 * c2
    return make_series(x.ring, acc)


def s_pow(x: Series, n: int) -> Series:
    out = s_one(x.ring)
    for _ in range(n):
        out = s_mul(out, x)
    return out


def is_unit(x: Series) -> bool:
    """Units are detected on the constant coefficient of the canonical form."""
    c = x.constant_coeff
    if x.ring.char_p or x.ring.relation_f is not None:
        return c % x.ring.p != 0
    return c % x.ring.p != 0


def reduce_mod_I0(x: Series, target: SeriesRingDesc | None = None) -> Series:
    """Image of x in the mod-p residue ring R/(p, f) = k[[monoid]]/(f-bar).

    The canonical form of a relation ring already has digit coefficients with
    every p traded for f, so reduction is reinterpretation of the same terms
    in the residue ring, which drops everything the f-bar monomial dominates.
    """
    if x.ring.relation_f is None and not x.ring.char_p:
        raise NonMonomialReduction("ring has no relation; nothing to reduce by")
    if x.ring.char_p:
        return x if target is None else make_series(target, x.terms)
    ring = target if target is not None else x.ring.residue_ring()
    return make_series(ring, x.terms)


def frobenius_mod_I0(x: Series) -> Series:
    """The p-power Frobenius on a residue ring: c e^g -> c e^{pg}."""
    if not x.ring.char_p:
        raise InvariantViolation("Frobenius acts on the mod-I0 residue rings")
    return make_series(x.ring, [(e.scale(x.ring.p), c) for e, c in x.terms])


@dataclass(frozen=True)
class TorsionReport:
    """Monomials killed by a power of the tested generator, within the cutoff.

    Products that would leave the degree cutoff are skipped rather than
    counted, so cutoff artifacts never masquerade as torsion; is_zero reports
    whether any honest torsion was found.
    """

    annihilator_basis: tuple[Series, ...]
    is_zero: bool
    bounded_exponent: int | None
    minimal_powers: tuple[int, ...] = ()

    def monomial_exps(self) -> tuple[MonoidElem, ...]:
        return tuple(s.terms[0][0] for s in self.annihilator_basis)


def torsion_annihilator(ring: SeriesRingDesc, g: Series) -> TorsionReport:
    """Power-torsion of the principal ideal (g) on the ring's monomial basis.

    For each basis monomial m, successive products m*g^l are computed while
    they stay inside the cutoff; m is torsion when some product vanishes.  A
    zero generator makes everything 1-torsion, which the axiom layer handles
    through the I = (0) remark rather than here.
    """
    if g.ring != ring:
        raise RingMismatch("generator lives in a different ring")
    found: list[tuple[MonoidElem, int]] = []
    if g.is_zero:
        for m in ring.monomial_basis():
            found.append((m, 1))
    elif min(e.degree() for e, _ in g.terms) == 0:
        # canonical forms put a unit digit on a degree-0 term: g is a unit
        pass
    else:
        gdeg = min(e.degree() for e, _ in g.terms)
        for m in ring.monomial_basis():
            prod = s_monomial(ring, m)
            l = 0
            while m.degree() + (l + 1) * gdeg <= ring.cutoff:
                prod = s_mul(prod, g)
                l += 1
                if prod.is_zero:
                    found.append((m, l))
                    break
    basis = tuple(s_monomial(ring, m) for m, _ in found)
    powers = tuple(l for _, l in found)
    return TorsionReport(
        annihilator_basis=basis,
        is_zero=not basis,
        bounded_exponent=max(powers) if powers else None,
        minimal_powers=powers,
    )
