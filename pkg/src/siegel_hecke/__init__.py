"""Exact Hecke operators and Fourier coefficient relations for degree-2 Siegel modular forms."""

from .binform import BinQF, reduce
from .errors import SiegelHeckeError
from .exact import RealCharacter
from .hecke import apply_operator, extract_eigenvalue
from .series import FourierExpansion, coeff

__all__ = ["BinQF", "FourierExpansion", "RealCharacter", "SiegelHeckeError", "apply_operator", "coeff",
           "extract_eigenvalue", "reduce"]
__version__ = "0.1.0"
