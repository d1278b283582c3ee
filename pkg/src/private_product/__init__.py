"""Module simulating and verifying entanglement-assisted private products over F_p."""

from .audit import (
    AuditReport,
    ChiSquareResult,
    DistTable,
    ProductClass,
    TargetAudit,
    async_empirical_chi_square,
    check_def3,
    fiber,
    output_distribution,
    preimage_counts,
    privacy_equivalence,
    verify_private_family,
)
from .encodings import (
    Action,
    Base,
    CoordMatrix,
    Encoding,
    EncodingId,
    apply_phi,
    apply_psi,
    basis_matrix_c,
    basis_matrix_r,
    coordinate_matrices,
    expand_id,
    has_property_P,
    in_E1,
    in_E2,
    is_product_compatible,
    make_eps0,
    make_eps0T,
    product_map,
    property_p_violation,
    random_bijection,
)
from .errors import (
    ConsistencyException,
    InvalidArgumentsException,
    InvalidEncodingException,
    PreconditionException,
    PrivateProductException,
)
from .extensions import DotProductResult, IntersectionResult, async_dot_product, async_psi_intersect
from .family import FamilyE, build_family, members_from_tables
from .field import (
    ExpElem,
    FpElem,
    GroupElem,
    Prime,
    PrimitiveRoot,
    alpha_pow,
    find_primitive_root,
    group_compose,
    group_compose_dual,
    group_elements,
    group_identity,
    group_inverse,
)
from .params import (
    LocalParams,
    NoSolution,
    Role,
    binary_minimal_family,
    binary_minimal_family_operators,
    solve_coordinate_system,
    solve_local_params,
    systematic_params,
)
from .protocol import (
    ChannelLog,
    Mode,
    ProtocolConfig,
    Transcript,
    async_run_protocol,
    biased_sampler,
    sample_encoding_id,
)
from .qudit import (
    BellLabel,
    LocalOp,
    Qudit,
    StateVec,
    apply_pair,
    bell_measure,
    bell_state,
    equal_up_to_phase,
    label_after,
    pauli_x_z,
    reduce_to_label,
)

__all__ = [
    "AuditReport",
    "ChiSquareResult",
    "DistTable",
    "ProductClass",
    "TargetAudit",
    "async_empirical_chi_square",
    "check_def3",
    "fiber",
    "output_distribution",
    "preimage_counts",
    "privacy_equivalence",
    "verify_private_family",
    "Action",
    "Base",
    "CoordMatrix",
    "Encoding",
    "EncodingId",
    "apply_phi",
    "apply_psi",
    "basis_matrix_c",
    "basis_matrix_r",
    "coordinate_matrices",
    "expand_id",
    "has_property_P",
    "in_E1",
    "in_E2",
    "is_product_compatible",
    "make_eps0",
    "make_eps0T",
    "product_map",
    "property_p_violation",
    "random_bijection",
    "ConsistencyException",
    "InvalidArgumentsException",
    "InvalidEncodingException",
    "PreconditionException",
    "PrivateProductException",
    "DotProductResult",
    "IntersectionResult",
    "async_dot_product",
    "async_psi_intersect",
    "FamilyE",
    "build_family",
    "members_from_tables",
    "ExpElem",
    "FpElem",
    "GroupElem",
    "Prime",
    "PrimitiveRoot",
    "alpha_pow",
    "find_primitive_root",
    "group_compose",
    "group_compose_dual",
    "group_elements",
    "group_identity",
    "group_inverse",
    "LocalParams",
    "NoSolution",
    "Role",
    "binary_minimal_family",
    "binary_minimal_family_operators",
    "solve_coordinate_system",
    "solve_local_params",
    "systematic_params",
    "ChannelLog",
    "Mode",
    "ProtocolConfig",
    "Transcript",
    "async_run_protocol",
    "biased_sampler",
    "sample_encoding_id",
    "BellLabel",
    "LocalOp",
    "Qudit",
    "StateVec",
    "apply_pair",
    "bell_measure",
    "bell_state",
    "equal_up_to_phase",
    "label_after",
    "pauli_x_z",
    "reduce_to_label",
]
