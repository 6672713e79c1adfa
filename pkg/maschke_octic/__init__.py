"""Point counts, Frobenius traces and exact checks for Maschke's octic surface and its double octic threefold"""

__version__ = "0.1.0"

from .workbench import Workbench
