"""Schmidt subspaces of finite-rank Hankel operators on the Hardy space.

Build Hankel operators from rational symbols, compute their Schmidt
subspaces, extract the model-space representation (p, theta, phi) realizing
each subspace as p K_theta, and verify the defining identities numerically.
"""

from .blaschke import (
    BlaschkeProduct,
    MobiusMap,
    blaschke_coefficients,
    blaschke_eval,
    compose_with_mobius,
    conjugation_c_theta,
    frostman_shift,
    mobius_conjugate_function,
    mobius_conjugate_symbol,
    tm_basis,
)
from .hardy import (
    BoundaryGrid,
    HardyVector,
    boundary_to_coefficients,
    coshift,
    evaluate,
    inner_product,
    one,
    sample_on_grid,
    shift,
    szego_kernel,
    unit,
)
from .hankel import (
    HankelMatrix,
    build_hankel_matrix,
    conjugation_C,
    hankel_apply,
    hankel_square,
    identity_residuals,
    linear_hankel_apply,
)
from .extraction import (
    ExtractionError,
    Representation,
    RepresentationResiduals,
    base_point_select,
    extract_representation,
    extremal_projection,
    recover_theta,
    verify_representation,
)
from .pipeline import AnalysisConfig, analyze_symbol, verify_suites
from .spectral import SchmidtBlock, schmidt_decompose, subspace_gap, takagi_factorize
from .symbols import (
    PoleTerm,
    RationalSymbol,
    SymbolFormatError,
    fourier_coefficients,
    kronecker_rank_bound,
    parse_symbol,
    symbol_from_coefficients,
    symbol_from_inner,
    symbol_to_dict,
    tail_bound,
)

__version__ = "0.1.0"
