"""Exact toolkit for finite-dimensional Hopf *-algebras given by structure constants."""

from .scalars import CF, QQi, ScalarModeError, qi
from .matrices import (LinearSolution, Matrix, char_poly, invert, kron,
                       nullspace, rank, solve_linear_system)
from .multimatrix import (BlockShape, StructureConstants, TensorAlgebra,
                          canonical_trace)
from .wedderburn import (FieldExtensionError, NonSemisimpleError,
                         WedderburnReport, wedderburn_decompose)
from .hopf import (AxiomReport, HopfAlgebra, StructuralError, cocentre_basis,
                   haar_state, hopf_morphism_failures, kappa_symmetric_basis,
                   product_closure_counterexample,
                   star_algebra_morphism_failures, tensor_hopf,
                   transport_hopf, verify_hopf)
from .presets import (build_standard, cyclic_table, dihedral_table,
                      direct_product_table, function_algebra, group_algebra,
                      kac_palyutkin, validate_group_table)
from .duality import (ConvolutionKernel, DualAlgebra, MapConvolutionElement,
                      convolution_kernel, convolve, cotracial_basis, dual_map,
                      double_dual_embedding, dualize, fourier,
                      fourier_inverse, map_convolution_unit, map_convolve,
                      pair)
from .ktheory import (BratteliTower, FusionRing, K0States, TowerLevel,
                      box_fusion, build_tower, check_k_comultiplicative,
                      fusion_ring, fusion_tensor, k0_states,
                      verify_box_convolve)

__all__ = [
    "CF", "QQi", "ScalarModeError", "qi",
    "LinearSolution", "Matrix", "char_poly", "invert", "kron",
    "nullspace", "rank", "solve_linear_system",
    "BlockShape", "StructureConstants", "TensorAlgebra", "canonical_trace",
    "FieldExtensionError", "NonSemisimpleError", "WedderburnReport",
    "wedderburn_decompose",
    "AxiomReport", "HopfAlgebra", "StructuralError", "cocentre_basis",
    "haar_state", "hopf_morphism_failures", "kappa_symmetric_basis",
    "product_closure_counterexample", "star_algebra_morphism_failures",
    "tensor_hopf", "transport_hopf", "verify_hopf",
    "build_standard", "cyclic_table", "dihedral_table",
    "direct_product_table", "function_algebra", "group_algebra",
    "kac_palyutkin", "validate_group_table",
    "ConvolutionKernel", "DualAlgebra", "MapConvolutionElement",
    "convolution_kernel", "convolve", "cotracial_basis", "dual_map",
    "double_dual_embedding", "dualize", "fourier", "fourier_inverse",
    "map_convolution_unit", "map_convolve", "pair",
    "BratteliTower", "FusionRing", "K0States", "TowerLevel", "box_fusion",
    "build_tower", "check_k_comultiplicative", "fusion_ring",
    "fusion_tensor", "k0_states", "verify_box_convolve",
]
