"""Exact symbolic verification of formal-degree identities for principal-series types
on quasi-split p-adic groups: root data with Galois actions, conductor-driven
depth profiles, affine/graded Hecke algebras with unequal parameters, Artin
conductors, and the volume-ratio and Clifford-transfer identities as exact
polynomial equalities in q^{1/2}.
"""

from .qlaurent import QLaurent
from .report import VerificationReport

__version__ = "0.1.0"

__all__ = ["QLaurent", "VerificationReport", "__version__"]
