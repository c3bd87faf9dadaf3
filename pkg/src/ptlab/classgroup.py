"""Divisor class groups of toric rings k[Q] via the facet-pairing cokernel.

For a fine, sharp, saturated, full-dimensional Q the class group is the
cokernel of Q^gp -> Z^{facets}, x -> (v_F(x))_F, with each facet valuation
primitive as a functional on Q^gp (not merely as an ambient vector; the two
differ when Q^gp is a proper sublattice).  This is the characteristic-p side
the mixed-characteristic comparison reduces to; computing it needs only SNF.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .intlat import FinAbelianGroup, abelian_quotient, identity
from .monoid import AffineMonoid, NotSharp, NotSaturated, facet_normals, gp_basis, is_saturated, is_sharp


@dataclass(frozen=True)
class ClassGroupReport:
    group: FinAbelianGroup
    facet_count: int
    torsion_order: int
    ell_primary: dict

    def to_json(self) -> dict:
        return {
            "group": self.group.describe(),
            "free_rank": self.group.free_rank,
            "invariant_factors": list(self.group.invariant_factors),
            "facet_count": self.facet_count,
            "torsion_order": self.torsion_order,
            "ell_primary": {str(l): g.describe() for l, g in sorted(self.ell_primary.items())},
        }


def pairing_matrix(Q: AffineMonoid) -> tuple[tuple[int, ...], ...]:
    """Rows: facets; columns: a basis of Q^gp; entries: primitive valuations.

    gp_basis returns its basis vectors as matrix columns; each facet row is
    divided by its gcd so the valuation is primitive on Q^gp itself.
    """
    basis = gp_basis(Q)
    rank = len(basis[0]) if basis else 0
    rows = []
    for v in facet_normals(Q):
        row = [sum(v[i] * basis[i][k] for i in range(len(basis))) for k in range(rank)]
        g = 0
        for x in row:
            g = gcd(g, x)
        if g > 1:
            row = [x // g for x in row]
        rows.append(tuple(row))
    return tuple(rows)


def class_group(Q: AffineMonoid) -> ClassGroupReport:
    if not is_sharp(Q):
        raise NotSharp("class group needs a sharp monoid")
    if not is_saturated(Q):
        raise NotSaturated("class group needs a saturated monoid")
    M = pairing_matrix(Q)
    nf = len(M)
    if nf == 0:
        G = FinAbelianGroup(0, ())
    else:
        # columns of M are the images of the Q^gp basis inside Z^facets
        G = abelian_quotient(identity(nf), M)
    tor = G.torsion_order()
    primes = _prime_factors(tor)
    return ClassGroupReport(
        group=G,
        facet_count=nf,
        torsion_order=tor,
        ell_primary={l: ell_primary(G, l) for l in primes},
    )


def ell_primary(G: FinAbelianGroup, ell: int) -> FinAbelianGroup:
    """The ell-primary component of the torsion part."""
    factors = []
    for n in G.invariant_factors:
        q = 1
        while n % ell == 0:
            n //= ell
            q *= ell
        if q > 1:
            factors.append(q)
    return FinAbelianGroup(0, tuple(sorted(factors)))


def prime_to_p_report(G: FinAbelianGroup, p: int) -> dict:
    """Order and support of the prime-to-p torsion; always finite here."""
    tor = G.torsion_order()
    away = tor
    while away % p == 0:
        away //= p
    primes = _prime_factors(away)
    return {
        "prime_to_p_order": away,
        "support": primes,
        "components": {str(l): ell_primary(G, l).describe() for l in primes},
        "finite": True,
    }


def _prime_factors(n: int) -> list[int]:
    out = []
    q = 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out
