"""Resolutions and cohomology over fiber products of connected graded rings."""

__version__ = "0.1.0"

from .algebra import (
    DEFAULT_CHAR,
    Element,
    FiberProductAlgebra,
    GradedAlgebra,
    MonomialQuotientPresentation,
    build_monomial_quotient,
    fiber_product,
)
from .gmodule import (
    AlgMatrix,
    FreeModule,
    GradedModule,
    algebra_as_module,
    cokernel_module,
    fiber_product_module,
    residue_module,
    restrict_to_fiber,
    trivial_module,
)
from .resolve import (
    FreeResolution,
    betti_table_text,
    minimal_presentation,
    minimal_resolution,
    syzygy_module,
    verify_complex,
)
from .series import (
    PowerSeries,
    coproduct_module_series,
    fiber_module_poincare_check,
    geometric_inverse,
    poincare_fiber_formula,
    word_count_series_formula,
)
from .wordres import (
    WordComplex,
    build_word_resolution,
    generate_words,
    verify_word_resolution,
    word_count_series,
)
from .extalg import (
    ExtAlgebra,
    ExtModule,
    FreeProductAlgebra,
    ext_algebra,
    ext_module,
    free_product,
    free_product_module,
    koszul_check,
    koszul_module_check,
    verify_phi_iso,
    verify_theta_iso,
)
from .cohomology import (
    DepthCertificate,
    SyzygySplit,
    combined_residue_resolution,
    comparison_chain_map,
    depth_certificate,
    depth_upper_bound,
    ext_bidegree_dim,
    hom_coboundary,
    socle_dims,
    syzygy_split,
    verify_ext_sequence_L,
    verify_fiber_module_ext_sequence,
)

__all__ = [
    "DEFAULT_CHAR",
    "Element",
    "FiberProductAlgebra",
    "GradedAlgebra",
    "MonomialQuotientPresentation",
    "build_monomial_quotient",
    "fiber_product",
    "AlgMatrix",
    "FreeModule",
    "GradedModule",
    "algebra_as_module",
    "cokernel_module",
    "fiber_product_module",
    "residue_module",
    "restrict_to_fiber",
    "trivial_module",
    "FreeResolution",
    "betti_table_text",
    "minimal_presentation",
    "minimal_resolution",
    "syzygy_module",
    "verify_complex",
    "PowerSeries",
    "coproduct_module_series",
    "fiber_module_poincare_check",
    "geometric_inverse",
    "poincare_fiber_formula",
    "word_count_series_formula",
    "WordComplex",
    "build_word_resolution",
    "generate_words",
    "verify_word_resolution",
    "word_count_series",
    "ExtAlgebra",
    "ExtModule",
    "FreeProductAlgebra",
    "ext_algebra",
    "ext_module",
    "free_product",
    "free_product_module",
    "koszul_check",
    "koszul_module_check",
    "verify_phi_iso",
    "verify_theta_iso",
    "DepthCertificate",
    "SyzygySplit",
    "combined_residue_resolution",
    "comparison_chain_map",
    "depth_certificate",
    "depth_upper_bound",
    "ext_bidegree_dim",
    "hom_coboundary",
    "socle_dims",
    "syzygy_split",
    "verify_ext_sequence_L",
    "verify_fiber_module_ext_sequence",
]
