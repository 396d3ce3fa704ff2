"""tlab: exact-arithmetic toolkit for equivariant monoid and ring
structures over small finite groups, with localization, ideals, quotients,
and reproducible verification suites."""

from .errors import (
    BadSpec,
    BoundExceeded,
    IdealMeetsDenominators,
    InvalidDenominator,
    LevelMismatch,
    MissingInverse,
    NonAssociative,
    NotInvariant,
    NotInvariantIdeal,
    NotInvertibleImage,
    NotSaturated,
    OrderBoundExceeded,
    SectionBlowup,
    TlabError,
    UndecidableCarrier,
    UndecidedEquality,
)
from .groups import (
    FiniteGroup,
    Subgroup,
    SubgroupClassSet,
    all_subgroups,
    build_group,
    conjugate_and_intersect,
    double_cosets,
    full_subgroup,
    subgroup_classes,
    trivial_subgroup,
)
from .gsets import (
    ExponentialDiagram,
    GMap,
    GSet,
    coproduct,
    diagonal_complement,
    exponential,
    find_iso,
    free_orbit,
    from_free,
    one_point,
    orbit_decompose,
    pullback,
    to_point,
    transitive,
)
from .mackey import (
    Element,
    FracValue,
    MemberStatus,
    Membership,
    Seed,
    SemiMackeyFunctor,
    SemiMackeyMorphism,
    SubMonoidFunctor,
    TriState,
    check_mackey,
    evaluate,
    fraction_semi,
    group_completion_lift,
    is_subfunctor,
    maximal_subfunctor,
    minimal_subfunctor,
    saturate_membership,
    structure_map,
    units_lift,
)
from .tambara import (
    TambaraFunctor,
    TambaraMorphism,
    check_distributive,
    check_tambara_morphism,
    restriction_witness,
)
from .burnside import BurnsideFunctor, burnside, marks_morphism
from .fixedpoint import (
    FixedPointTambara,
    fixed_point,
    fixed_point_integers,
    fixed_point_rationals,
    fixed_point_residues,
    permutation_gring,
    trivial_gring,
)
from .localize import (
    FractionTambara,
    ImageSubfunctor,
    PreimageSubfunctor,
    fraction_tambara,
    iterated_fraction_iso,
    universal_factorization,
)
from .ideals import (
    IdealSeed,
    TambaraIdeal,
    check_ideal_conditions,
    localized_ideal_iso,
    quotient,
    restriction_kernel_ideal,
)
from .analysis import (
    check_field_like,
    check_index_transfer,
    check_restriction_injectivity,
    localization_preconditions,
    localized_burnside,
    nonzerodivisor_seed,
    verify_burnside_localization,
)
from .harness import SUITES, run_suite
from .report import VerificationReport

__version__ = "0.1.0"
