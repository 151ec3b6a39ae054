"""Exact quadratic forms, orderings and quaternion involutions over formally real towers."""
from .errors import *  # noqa: F401,F403
from .fields import (
    Element,
    EuclideanHull,
    FieldTower,
    Laurent,
    LaurentPoly,
    Ordering,
    Q,
    QuadExt,
    QuadNumber,
    Rationals,
    SquareClassRep,
    Unsupported,
    adjoin_sqrt,
    euclid,
    in_pythagorean_closure,
    is_square,
    is_totally_positive,
    laurent,
    orderings_of,
    quad_ext,
    sign_at,
    sqrt_witness,
    square_class_of,
    square_class_reps,
    to_text,
    valuation_residue,
)
from .forms import (
    EDReport,
    NotByPermutation,
    QuadForm,
    Status,
    Verdict,
    check_certificate,
    ed_check_field,
    effective_diagonalize,
    form,
    form_multiple,
    form_perp,
    form_scale,
    is_totally_indefinite,
    isotropy_verdict,
    signature_at,
    signatures,
    springer_decompose,
    verify_witness,
    weak_isotropy_verdict,
)
from .quaternions import (
    Canonical,
    HermitianSquareResult,
    IntUGamma,
    Quat,
    QuaternionAlgebra,
    SearchResult,
    SkewHermitianForm,
    TransferResult,
    apply_involution,
    double_centralizer_dims,
    gamma_conj,
    herm_gram,
    hermitian_square_obstruction,
    involution_signatures,
    involution_totally_indefinite,
    involution_weak_isotropy_via_descent,
    norm_form_and_division,
    nrd,
    pi2_transfer,
    pind_quaternion,
    symmetric_dimension,
    verify_sum,
    weak_isotropy_witness_search,
)
from .syntax import (
    arith_eval,
    parse_algebra,
    parse_element,
    parse_field,
    parse_form,
    parse_involution,
    parse_quat,
    parse_sherm,
)

__version__ = "0.1.0"
