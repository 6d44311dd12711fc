"""Exact-arithmetic toolkit for two-term silting complexes, torsion pairs,
wide subcategories and King-style stability over finite-dimensional quiver
algebras presented by quivers with admissible relations over prime fields."""

from .algebra import (AlgebraError, AlgebraPresentation, FieldSpec, PathBasis,
                      Quiver, Relation, ResourceGuard, build_basis, load_algebra,
                      multiply, parse_algebra)
from .repmod import (DimVector, Module, Morphism, decompose, direct_sum,
                     enumerate_indecomposables, fac_membership, hom_dim,
                     hom_space, is_isomorphic, is_support_tau_tilting,
                     is_tau_rigid, module_from_json, module_label,
                     module_to_json, standard_module, sub_membership,
                     submodule_dim_vectors, tau, top_and_radical)
from .stability import (ConeLocationError, MembershipReport, QueryError,
                        StabilityForm, in_F_minus, in_F_plus, in_T_minus,
                        in_T_plus, in_W_T, in_W_U, is_semistable, locate_cone,
                        membership_report, theta_from_presilting, theta_value)
from .twoterm import (H0, Hminus1_nu, InconclusiveEnumeration, PresiltingCatalog,
                      SiltingCatalog, SiltingObject, TwoTermComplex, compatible,
                      complex_from_json, complex_to_json, enumerate_2silt,
                      enumerate_indec_presilting, euler_form, g_vector, hom_K,
                      is_presilting, is_silting, min_projective_presentation,
                      nu_complex, silting_decompose, silting_parts)
from .verify import VerificationPlan, Verdict, check_thm_equivalence, run_suite

__version__ = "0.1.0"
