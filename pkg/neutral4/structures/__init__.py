"""Compatible complex and para-hypercomplex structures on neutral 4-manifolds."""

from neutral4.structures.construction import (
    EndomorphismField,
    EndomorphismKind,
    StructureTriple,
    build_triple,
    companion_null_field,
    complete_null_pair,
    construct_complex_structure,
    construct_involution_S,
    fundamental_forms,
    involution_nullity,
)
from neutral4.structures.integrability import (
    lee_forms,
    lie_derivative_endomorphism,
    nijenhuis,
    verify_para_hyperhermitian,
)
from neutral4.structures.planes import PlaneClass, classify_plane
from neutral4.structures.recovery import (
    FormTriple,
    build_from_omega_pair,
    recover_structure_from_forms,
    structure_from_forms,
)

__all__ = [
    "EndomorphismField",
    "EndomorphismKind",
    "FormTriple",
    "PlaneClass",
    "StructureTriple",
    "build_from_omega_pair",
    "build_triple",
    "classify_plane",
    "companion_null_field",
    "complete_null_pair",
    "construct_complex_structure",
    "construct_involution_S",
    "fundamental_forms",
    "involution_nullity",
    "lee_forms",
    "lie_derivative_endomorphism",
    "nijenhuis",
    "recover_structure_from_forms",
    "structure_from_forms",
    "verify_para_hyperhermitian",
]
