"""
coarsex: a finite-scale workbench for equivariant coarse geometry.

Construct finite equivariant bornological coarse spaces, apply the standard
constructions and change-of-group functors, compute equivariant coarse
ordinary homology and group homology exactly over the integers, model
controlled-module categories, build Rips complexes, and empirically verify
the coarse-homology axioms.
"""

from .analysis import (
    ShiftMap,
    ShiftSpace,
    analyze_map,
    certifies_equivalence,
    classify_exhaustion,
    classify_subsets,
    flasqueness_check,
    generated_big_family,
    is_coarsely_excisive,
    is_complementary_pair,
    maps_close,
    niceness,
)
from .build import (
    build_can_min,
    build_max_max,
    build_metric,
    build_min_max,
    build_min_min,
    build_recoarsen,
    build_subspace,
    combine,
    combine_free_union,
    combine_tensor,
    quotient_adjunction,
)
from .build import build as build_space
from .change import adjunction_check, change_group, mackey_check
from .ctrl import (
    CtrlMorphism,
    CtrlObject,
    HomLattice,
    ctrl_morphism,
    ctrl_morphism_algebra,
    ctrl_object,
    equivalence_functor,
    flasque_sigma_check,
    karoubi_complete,
    quotient_hom,
)
from .groups import (
    FiniteGroup,
    GroupHom,
    cyclic_group,
    group_by_name,
    symmetric_group_3,
    trivial_group,
)
from .harness import SplitMix64, SuiteConfig, axiom_suite, gen_space
from .homology import (
    HomologyData,
    additivity_factorization,
    chain_complex,
    chain_transform,
    homology_groups,
    hx_cont,
    induced_map,
    phi_psi,
    standard_group_complex,
)
from .rips import (
    SimplicialComplex,
    dirac_equivalence,
    rips_complex,
    rips_functorial,
    sbg_check,
    simplicial_homology,
)
from .snf import FPAbelian, group_str, smith_normal_form
from .spaces import (
    Action,
    BigFamily,
    Bornology,
    Space,
    SpaceMap,
    entourage_algebra,
    make_space,
    point_space,
    validate_space,
)

__version__ = "0.1.0"
