"""Quantale-enriched categories, Cauchy sequences and contraction fixpoints."""

from .cauchy import (
    CauchyEstimate,
    ObjectSequence,
    cauchy_degree,
    check_cauchy_adjoint_equivalence,
    is_cauchy,
    phi_of,
    psi_of,
)
from .contraction import (
    ControlFunction,
    FixpointResult,
    IterationDiagnostics,
    check_contraction,
    check_control,
    classify_fixpoint_pair,
    picard_solve,
    sweep_solve,
    verify_fixpoint,
)
from .qcat import (
    Distributor,
    QCategory,
    QFunctor,
    check_adjunction,
    check_category,
    check_distributor,
    check_functor,
    compose_distributors,
    functor_leq,
    identity_distributor,
    is_representable,
    lower_star,
    object_iso,
    object_leq,
    upper_star,
)
from .quantale import (
    LUKASIEWICZ,
    MINIMUM,
    PRODUCT,
    TAU_EQ,
    BooleanQuantale,
    DeltaQuantale,
    FiniteQuantale,
    InstanceMismatchError,
    LawvereQuantale,
    Quantale,
    SequenceTrial,
    TNorm,
    TNormQuantale,
    UnsupportedError,
    WayBelowWitness,
    check_quantale_axioms,
    check_quantale_laws_random,
    is_seq_lsc,
    way_below,
)
from .report import Report, Violation
from .stepdist import LeftContinuityError, StepDistribution

__version__ = "0.1.0"
