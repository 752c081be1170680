"""Characteristic-zero closure operations on ideals of quotient rings of
polynomial rings over Q, with the exact Groebner and homological kernel
they are built on."""

from .polyring import (
    DEFAULT_DEGREE_CAP,
    MonomialOrder,
    ParseError,
    Polynomial,
    RingMismatchError,
    RingPresentation,
    parse_polynomial,
    reduce_mod_ring,
)
from .groebner import (
    FreeModuleRef,
    ModuleElement,
    PolyMatrix,
    SubmoduleBasis,
    annihilator,
    buchberger,
    check_parameters,
    ideal_basis,
    ideal_equal,
    ideal_quotient,
    intersect,
    is_subset,
    krull_dimension,
    lift,
    min_gens,
    normal_form,
    syzygies,
    unit_ideal,
)
from .homalg import (
    ChainMap,
    Complex,
    ModuleMap,
    PresentedModule,
    augmentation_chain_map,
    dualize,
    free_resolution,
    homology,
    homology_is_zero,
    image_module,
    induced_map_on_homology,
    kernel_columns,
    koszul_complex,
    shift,
    tensor_complexes,
    truncate,
)
from .closure import (
    CheckReport,
    ClosureResult,
    MultiplierModuleSpec,
    RGammaComplex,
    build_rgamma,
    canonical_module_presentation,
    check_axioms,
    check_colon_capturing,
    check_counterexamples,
    check_depth_vanishing,
    clpi_closure,
    hironaka_hull,
    hironaka_preclosure,
    kh_closure,
    kh_test_ideal,
)
from .cli import run_problem, verify_corpus

__all__ = [name for name in dir() if not name.startswith("_")]
