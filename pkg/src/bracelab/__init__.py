"""bracelab: computational algebra for finite skew braces.

Finite groups as multiplication tables, skew braces with their invariant
series (derived ideal, socle, annihilator, second annihilator), verification
sweeps for the star-product identities, dense linear algebra over prime
fields, and semidirect-product constructions that exhibit perfect skew
braces whose central quotient has nontrivial annihilator.
"""

from .errors import (
    BraceLabError,
    BudgetExceeded,
    ClosureBudgetExceeded,
    ConstructionInvalid,
    DimensionMismatch,
    EquivalenceViolation,
    FormatError,
    InternalInconsistency,
    InvalidAction,
    NoSurjection,
    NonPrimeModulus,
    NotABrace,
    NotAGroup,
    NotAnIdeal,
    NotNormal,
    PreconditionFailed,
    SingularGenerator,
    SizeExceeded,
    TheoremViolation,
)
from .reports import VerificationReport
from .groups import (
    GroupHom,
    GroupTable,
    Subgroup,
    center,
    check_group_table,
    commutator_subgroup,
    conjugacy_classes,
    enumerate_subgroups,
    find_isomorphism,
    find_surjection,
    group_from_table,
    hom_violation,
    is_normal_subgroup,
    normal_subgroups,
    quotient_group,
    relabel_table,
    subgroup_closure,
    validate_group_table,
)
from .braces import (
    BraceIdeal,
    SkewBrace,
    annihilator,
    assemble_brace,
    brace_from_tables,
    check_skew_brace,
    derived_ideal,
    is_ideal,
    is_perfect,
    is_two_sided,
    lambda_perm,
    lift_group_to_brace,
    quotient_brace,
    second_annihilator,
    socle,
    star,
    star_subgroup,
    validate_skew_brace,
)
from .fplinalg import (
    FpMatrix,
    FpSubspace,
    MatrixGroup,
    fixed_space,
    kernel_image,
    matrix_group_closure,
    recipe_check,
    search_recipe,
)
from .grun import (
    GrunReport,
    char_equivalences,
    grun_defect,
    identity_suite,
    map_analysis,
    verify_theorem1,
)
from .constructions import (
    BraceAction,
    SemidirectElement,
    brace_action,
    build_counterexample,
    check_semidirect_prediction,
    example1_brace,
    matrix_action,
    predict_semidirect_invariants,
    semidirect_product,
    vector_trivial_brace,
)
from .sbr import (
    BraceDocument,
    parse_brace_file,
    parse_brace_text,
    parse_matrix_text,
    serialize_brace,
    serialize_matrices,
)

__version__ = "0.1.0"
