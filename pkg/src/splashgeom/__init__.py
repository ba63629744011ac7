"""Exterior splashes of PG(2,q^3) in the Bruck-Bose representation in PG(6,q)."""

from .bruckbose import BBContext
from .gf import FieldTower

__all__ = ["BBContext", "FieldTower"]
__version__ = "0.1.0"
