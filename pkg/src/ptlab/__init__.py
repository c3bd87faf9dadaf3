"""Truncated laboratory for towers of monoid algebras and their tilts.

The package computes, at finite precision and degree cutoff, with complete
local rings attached to affine monoids: p-division towers of monoids, the
perfectoid-style tower axioms and their Frobenius projections, pillar chains
and small tilts, log-regular presentations, toric divisor class groups, and a
length-two Witt coefficient toolkit for regularity criteria.
"""

__version__ = "0.1.0"
