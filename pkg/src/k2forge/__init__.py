"""k2forge: K2 checks for graded algebras given by generators and relations.

Layers, bottom up:

* :mod:`exactlin` - exact fields (Q, GF(p)) and sparse linear algebra;
* :mod:`freealg` - words, noncommutative polynomials, presentations;
* :mod:`dsl` - the algebra file language;
* :mod:`gbasis` - degree-truncated noncommutative Groebner bases;
* :mod:`resolution` - minimal graded free resolutions;
* :mod:`k2core` - the [L_n:E_n] rank criterion and cup-product checks;
* :mod:`monomial` - the combinatorial engine for monomial algebras;
* :mod:`constructors` - Ore extensions, tensor products, twists, quotients;
* :mod:`cli` - the ``k2forge`` command.
"""

from .constructors import (
    ConstructionError,
    commutative_complete_intersection,
    ore_extension,
    quotient_by_normal,
    tensor_product,
    twist,
)
from .dsl import DSLError, parse, parse_poly
from .exactlin import GF, QQ, Echelon, KMatrix, field_from_spec, kernel_basis, rank, rref, solve
from .freealg import Alphabet, NcPoly, Presentation
from .gbasis import DegreeBoundError, TruncatedGB, complete
from .k2core import (
    K2_CONCLUSIVE,
    K2_UP_TO_BOUND,
    NOT_K2,
    K2Report,
    cup_criterion,
    cup_product,
    essential_quotient,
    k2_check,
    k2_module_check,
    le_matrix,
    n_koszul_check,
)
from .monomial import MonomialAlgebra, level_sets, monomial_k2_check, monomial_resolution
from .resolution import MinimalResolution, betti_table, resolve_cyclic, resolve_trivial, verify

__all__ = [
    "Alphabet", "ConstructionError", "DSLError", "DegreeBoundError", "Echelon", "GF", "K2Report",
    "K2_CONCLUSIVE", "K2_UP_TO_BOUND", "KMatrix", "MinimalResolution", "MonomialAlgebra", "NOT_K2",
    "NcPoly", "Presentation", "QQ", "TruncatedGB", "betti_table", "commutative_complete_intersection",
    "complete", "cup_criterion", "cup_product", "essential_quotient", "field_from_spec", "k2_check",
    "k2_module_check", "kernel_basis", "le_matrix", "level_sets", "monomial_k2_check",
    "monomial_resolution", "n_koszul_check", "ore_extension", "parse", "parse_poly",
    "quotient_by_normal", "rank", "resolve_cyclic", "resolve_trivial", "rref", "solve",
    "tensor_product", "twist", "verify",
]
