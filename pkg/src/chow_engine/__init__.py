"""Exact computations in Chow rings of matroids via psi classes."""

from .charpoly import CharPoly, char_poly, char_poly_all, mu, mu_vector, reduced_char_poly
from .matroid import (AxiomViolation, GroundSet, LoopyMatroidError, Matroid, MatroidError,
                      MissingTop, from_boolean, from_flats, from_graph, from_matrix, from_uniform)
from .psi import (DivisorCombination, DivisorMonomial, FlagPsiTerm, PsiExpansion,
                  deg_expanded, deg_flag_mixed, deg_monomial, deg_psi_minus_product,
                  deg_psi_powers, expand_monomial, psi_infinity, psi_minus, psi_plus,
                  psi_zero, rho)

__version__ = "0.1.0"
