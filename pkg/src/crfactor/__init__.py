"""crfactor: composition-factor counting for matrix groups over F_q.

Computes the number of order-p composition factors of finite subgroups
of GL(d, p^f), decomposes the natural module, builds the sharp example
families, and checks the bound (eps_q * d - r) / (p - 1) exactly.
"""

from .gf import Field, Valuation, epsilon_q, field_create, legendre_valuation

__all__ = [
    "Field",
    "Valuation",
    "epsilon_q",
    "field_create",
    "legendre_valuation",
]

__version__ = "0.1.0"
