"""Effective Brauer-Manin obstruction computations for diagonal cubic
surfaces a x^3 + b y^3 + c z^3 + d t^3 = 0 over the Eisenstein field Q(zeta_3)."""

__version__ = "0.1.0"
