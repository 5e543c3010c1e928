"""Abelian-integral reduction, evaluation, zero counting and direct
simulation for a perturbed cubic reversible isochronous center."""

from .analysis import (
    ZeroReport,
    bound_accounting,
    eval_I_u,
    find_zeros,
    phi_bound,
    zero_bound,
)
from .dynamics import (
    CycleRecord,
    IntegrationOptions,
    OrbitResult,
    State,
    detect_limit_cycles,
    displacement,
    first_integral,
    integrate_orbit,
    return_map,
    vector_field,
)
from .elliptic import (
    CurveParams,
    EllipticPair,
    UForm,
    agm_KE,
    eval_I_h,
    eval_generator,
    h_from_u,
    params_from_h,
    pf_derivative,
    to_u_form,
)
from .errors import DomainError, InternalConsistencyError
from .exactpoly import GeneratorCombo, GeneratorIndex, RationalPoly
from .perturbation import PerturbationSpec
from .presets import EXAMPLE_NAMES, example_coeffs, example_spec
from .quadrature import quad_Iij, quad_Iij_with_error
from .reduction import BasisCombo, assemble_I, reduce_k1, reduce_k3

__all__ = [
    "BasisCombo",
    "CurveParams",
    "CycleRecord",
    "DomainError",
    "EllipticPair",
    "EXAMPLE_NAMES",
    "GeneratorCombo",
    "GeneratorIndex",
    "IntegrationOptions",
    "InternalConsistencyError",
    "OrbitResult",
    "PerturbationSpec",
    "RationalPoly",
    "State",
    "UForm",
    "ZeroReport",
    "agm_KE",
    "assemble_I",
    "bound_accounting",
    "detect_limit_cycles",
    "displacement",
    "eval_I_h",
    "eval_I_u",
    "eval_generator",
    "example_coeffs",
    "example_spec",
    "find_zeros",
    "first_integral",
    "h_from_u",
    "integrate_orbit",
    "params_from_h",
    "pf_derivative",
    "phi_bound",
    "quad_Iij",
    "quad_Iij_with_error",
    "reduce_k1",
    "reduce_k3",
    "return_map",
    "to_u_form",
    "vector_field",
    "zero_bound",
]
