"""Divisor data for the surface 5x^3 + 9y^3 + 10z^3 + 12t^3 = 0.

The obstructing class is carried by two cubic curves on the surface, each
cut out (together with the surface itself) by three quadrics over the
tower k(cbrt(2/3)).  This module freezes the exact generators: the curve
quadrics, the chart numerators f and f' as tower polynomials, and the
multiplier cubic g entering the calibration identity

    f * N_tau(g) = (zeta/4) * f' * N_tau(f)   (mod the surface).

Everything here is checked by the verification registry and the test
suite; nothing is recomputed at import time beyond parsing the literals.
"""

from __future__ import annotations

from fractions import Fraction

from .azumaya import F_TERMS, FPRIME_TERMS
from .calibrate import (
    TowerAutomorphism,
    TowerField,
    TowerPolynomial,
    surface_cubic,
)
from .eisenstein import EisensteinNumber

K0 = TowerField([Fraction(2, 3)])
TAU = TowerAutomorphism(K0, (1,))
F_SURF = surface_cubic(K0, 5, 9, 10, 12)


def kpoly(field, terms):
    """terms: {monomial: {rho_power: (a, b)}} with a+b*zeta coefficients."""
    return TowerPolynomial(field, {
        m: field.element({(p,): EisensteinNumber(a, b) for p, (a, b) in cs.items()})
        for m, cs in terms.items()})


def from_k_terms(field, terms):
    return TowerPolynomial(field, {m: field.scalar(c) for m, c in terms.items()})


F_POLY = from_k_terms(K0, F_TERMS)
FPRIME_POLY = from_k_terms(K0, FPRIME_TERMS)

G_POLY = kpoly(K0, {
    (3, 0, 0, 0): {0: (16, 8)},
    (2, 1, 0, 0): {0: (-8, -4)},
    (2, 0, 1, 0): {0: (-2, 0)},
    (2, 0, 0, 1): {1: (2, -2)},
    (1, 1, 1, 0): {0: (4, 2)},
    (1, 1, 0, 1): {1: (-6, 6)},
    (1, 0, 2, 0): {0: (6, -5)},
    (1, 0, 1, 1): {1: (-1, 1)},
    (1, 0, 0, 2): {2: (-3, -6)},
    (0, 3, 0, 0): {0: (24, 12)},
    (0, 2, 1, 0): {0: (6, -6)},
    (0, 1, 2, 0): {0: (-2, -1)},
    (0, 1, 1, 1): {1: (3, -3)},
    (0, 1, 0, 2): {2: (9, 18)},
    (0, 0, 3, 0): {0: (24, 16)},
    (0, 0, 2, 1): {1: (8, -8)},
    (0, 0, 0, 3): {0: (32, 16)},
})

# quadrics cutting the curve C inside its cone hull; f = l1 q1 + l2 q2
# + l3 q3 + c F for linear forms l_i recovered by divisor_membership
C_QUADRICS = tuple(kpoly(K0, q) for q in (
    {(2, 0, 0, 0): {0: (2, 0)}, (1, 1, 0, 0): {0: (-6, 0)},
     (1, 0, 1, 0): {0: (-1, 0)}, (1, 0, 0, 1): {1: (0, 3)},
     (0, 1, 1, 0): {0: (3, 0)}, (0, 1, 0, 1): {1: (0, -9)},
     (0, 0, 2, 0): {0: (8, 0)}},
    {(2, 0, 0, 0): {0: (4, 0)}, (1, 0, 1, 0): {0: (-2, 0)},
     (1, 0, 0, 1): {1: (-6, 0)}, (0, 1, 1, 0): {0: (6, 6)},
     (0, 0, 2, 0): {0: (1, 0)}, (0, 0, 1, 1): {1: (3, 0)},
     (0, 0, 0, 2): {2: (9, 0)}},
    {(1, 1, 0, 0): {0: (-2, 0)}, (1, 0, 1, 0): {0: (0, -5)},
     (1, 0, 0, 1): {1: (1, 1)}, (0, 2, 0, 0): {0: (6, 0)},
     (0, 1, 1, 0): {0: (0, -1)}, (0, 1, 0, 1): {1: (-3, -3)},
     (0, 0, 1, 1): {1: (-8, 0)}},
))

CPRIME_QUADRICS = tuple(kpoly(K0, q) for q in (
    {(2, 0, 0, 0): {0: (2, 0)}, (1, 1, 0, 0): {0: (0, -6)},
     (1, 0, 1, 0): {0: (-1, 0)}, (1, 0, 0, 1): {1: (-3, -3)},
     (0, 1, 1, 0): {0: (0, 3)}, (0, 1, 0, 1): {1: (-9, 0)},
     (0, 0, 2, 0): {0: (8, 0)}},
    {(2, 0, 0, 0): {0: (4, 0)}, (1, 0, 1, 0): {0: (-2, 0)},
     (1, 0, 0, 1): {1: (0, -6)}, (0, 1, 1, 0): {0: (-6, 0)},
     (0, 0, 2, 0): {0: (1, 0)}, (0, 0, 1, 1): {1: (0, 3)},
     (0, 0, 0, 2): {2: (-9, -9)}},
    {(1, 1, 0, 0): {0: (-2, 0)}, (1, 0, 1, 0): {0: (-5, 0)},
     (1, 0, 0, 1): {1: (1, 1)}, (0, 2, 0, 0): {0: (0, 6)},
     (0, 1, 1, 0): {0: (0, -1)}, (0, 1, 0, 1): {1: (3, 0)},
     (0, 0, 1, 1): {1: (-8, 0)}},
))
