from fractions import Fraction

import numpy as np
import pytest

from siltstab import linalg, repmod, twoterm
from siltstab.algebra import AlgebraError
from siltstab.repmod import direct_sum, module_label, standard_module
from siltstab.twoterm import (H0, Hminus1_nu, InconclusiveEnumeration,
                              PresiltingCatalog, SiltingObject, TwoTermComplex,
                              compatible, complex_direct_sum, complex_from_json,
                              complex_to_json, enumerate_2silt, euler_form,
                              g_symbol, hom_K, is_contractible, is_presilting,
                              min_projective_presentation, nu_complex,
                              reduce_complex, shifted_projective,
                              silting_decompose, silting_split_cached,
                              stalk_complex)


@pytest.fixture(scope="module")
def u1(threecycle):
    return min_projective_presentation(standard_module(threecycle, "simple", 1))


@pytest.fixture(scope="module")
def u2(threecycle):
    return shifted_projective(threecycle, 0)


@pytest.fixture(scope="module")
def u3(threecycle, threecycle_indecs):
    return min_projective_presentation(threecycle_indecs["2/3"])


# --- g-vectors and cohomology -------------------------------------------------

def test_g_vectors(threecycle, u1, u2):
    assert stalk_complex(threecycle, 0).g_vector() == (1, 0, 0)
    assert u1.g_vector() == (0, 1, -1)
    assert u2.g_vector() == (-1, 0, 0)


def test_h0(threecycle, u1):
    assert module_label(H0(stalk_complex(threecycle, 0))) == "1/2/3"
    assert module_label(H0(u1)) == "2"
    assert H0(shifted_projective(threecycle, 0)).is_zero


def test_h_minus1_nu(threecycle, u1, u2):
    # kernel of nu(d) for a minimal presentation is the AR translate of H0
    assert module_label(Hminus1_nu(u1)) == "3"
    assert module_label(Hminus1_nu(u2)) == "2/3/1"  # the injective at vertex 1
    assert Hminus1_nu(stalk_complex(threecycle, 0)).is_zero


def test_nu_complex(threecycle, u1):
    inj = nu_complex(u1)
    assert inj.minus1.dims == standard_module(threecycle, "injective", 2).dims
    assert inj.zero.dims == standard_module(threecycle, "injective", 1).dims
    assert not inj.differential.is_zero
    assert nu_complex(stalk_complex(threecycle, 0)).zero.dims == (1, 1, 1)


# --- homotopy homs --------------------------------------------------------------

def test_hom_K_between_stalks_has_no_shift(threecycle):
    for i in range(3):
        for j in range(3):
            assert hom_K(stalk_complex(threecycle, i), stalk_complex(threecycle, j), 1) == 0


def test_hom_K_stalk_to_stalk_counts_corners(threecycle):
    # Hom(P_i, P_j) is the corner e_j Lambda e_i; every corner here is a line
    for i in range(3):
        for j in range(3):
            assert hom_K(stalk_complex(threecycle, i), stalk_complex(threecycle, j), 0) == 1


def test_u1_is_presilting(u1):
    assert hom_K(u1, u1, 1) == 0
    assert is_presilting(u1)


def test_hom_K_regular_to_shift(threecycle, u2):
    lam = complex_direct_sum(threecycle, [stalk_complex(threecycle, v) for v in range(3)])
    assert hom_K(lam, u2, 1) == 0


def test_contractible_complex(threecycle):
    idc = TwoTermComplex(threecycle, [1], [1], [[threecycle.idempotent(1)]])
    assert is_contractible(idc)
    assert is_presilting(idc)  # reduces to the zero complex
    assert reduce_complex(idc).is_zero


def test_reduction_preserves_homotopy_type(threecycle, u1):
    padded = complex_direct_sum(
        threecycle, [u1, TwoTermComplex(threecycle, [2], [2], [[threecycle.idempotent(2)]])])
    red = reduce_complex(padded)
    assert red.g_vector() == u1.g_vector()
    assert repmod.is_isomorphic(H0(red), H0(u1))


def test_compatibility_examples(threecycle, u1, u2):
    assert compatible(u1, u2)
    assert compatible(u1, u1)
    assert not compatible(stalk_complex(threecycle, 0), shifted_projective(threecycle, 0))


def test_shift_minus_one_hom(threecycle, u1):
    # maps u1 -> u1[-1] would be P_2 -> P_3 killed by both differentials
    assert hom_K(u1, u1, -1) == 0


# --- Euler form ------------------------------------------------------------------

def test_euler_dual_bases(threecycle):
    for i in range(3):
        for j in range(3):
            val = euler_form(stalk_complex(threecycle, i),
                             standard_module(threecycle, "simple", j))
            assert val == (1 if i == j else 0)


def test_euler_example(u1, threecycle_indecs):
    assert euler_form(u1, threecycle_indecs["2/3"]) == 0


def test_euler_of_zero_module(threecycle, u1):
    assert euler_form(u1, repmod.zero_module(threecycle)) == 0


def test_euler_identities_on_catalog(threecycle_catalog, threecycle_indecs):
    mods = list(threecycle_indecs.values())
    for p in threecycle_catalog.complexes:
        for m in mods:
            pairing = euler_form(p, m)
            via_h0 = (twoterm.hom_D_complex_module(p, m)
                      - twoterm.hom_D_complex_module_shift1(p, m))
            via_nu = (twoterm.hom_D_module_nu_complex(m, p)
                      - repmod.hom_dim(m, p.h_minus1_nu()))
            assert pairing == via_h0 == via_nu


def test_serre_duality_on_catalog(threecycle_catalog, threecycle_indecs):
    for p in threecycle_catalog.complexes:
        for m in threecycle_indecs.values():
            assert (twoterm.hom_D_complex_module(p, m)
                    == twoterm.hom_D_module_nu_complex(m, p))


# --- presentations ---------------------------------------------------------------

def test_presentation_of_projective_is_stalk(threecycle):
    p = min_projective_presentation(standard_module(threecycle, "projective", 0))
    assert p.p_minus1 == () and p.p_zero == (0,)


def test_presentation_recovers_module(threecycle_indecs):
    for label, m in threecycle_indecs.items():
        p = min_projective_presentation(m)
        assert repmod.is_isomorphic(H0(p), m), label


def test_presentation_of_zero(threecycle):
    p = min_projective_presentation(repmod.zero_module(threecycle))
    assert p.is_zero


# --- catalogs ---------------------------------------------------------------------

def test_catalog_has_twelve_entries(threecycle_catalog):
    assert len(threecycle_catalog) == 12
    expected = {(1, 0, 0), (0, 1, 0), (0, 0, 1),
                (1, -1, 0), (0, 1, -1), (-1, 0, 1),
                (1, 0, -1), (-1, 1, 0), (0, -1, 1),
                (-1, 0, 0), (0, -1, 0), (0, 0, -1)}
    assert {c.g_vector() for c in threecycle_catalog.complexes} == expected


def test_catalog_point(point):
    cat = PresiltingCatalog(point, 1)
    assert {c.g_vector() for c in cat.complexes} == {(1,), (-1,)}


def test_catalog_a2(a2):
    cat = PresiltingCatalog(a2, 2)
    assert len(cat) == 5
    assert {c.g_vector() for c in cat.complexes} == {
        (1, 0), (0, 1), (1, -1), (-1, 0), (0, -1)}


def test_compatible_subsets_count(threecycle_catalog):
    # 1 empty + 12 rays + 30 walls + 20 chambers
    assert len(threecycle_catalog.all_compatible_subsets()) == 63


def test_twenty_siltings(threecycle_siltings):
    assert len(threecycle_siltings.siltings) == 20


def test_silting_counts_small(point, a2):
    assert len(enumerate_2silt(PresiltingCatalog(point, 1)).siltings) == 2
    assert len(enumerate_2silt(PresiltingCatalog(a2, 2)).siltings) == 5


def test_specific_silting_present(threecycle_siltings):
    target = {(0, 1, -1), (-1, 0, 0), (0, 0, -1)}  # P_2-P_3, -P_1, -P_3
    assert any(set(t.g_vectors()) == target for t in threecycle_siltings.siltings)


def test_silting_g_vectors_form_bases(threecycle_siltings):
    for t in threecycle_siltings.siltings:
        rows = [list(map(Fraction, g)) for g in t.g_vectors()]
        assert linalg.frac_rank(rows) == 3


def test_silting_flags(threecycle, threecycle_siltings, u1, u2):
    lam = SiltingObject(threecycle, [stalk_complex(threecycle, v) for v in range(3)])
    assert lam.is_silting
    shift = SiltingObject(threecycle, [shifted_projective(threecycle, v) for v in range(3)])
    assert shift.is_silting
    two = SiltingObject(threecycle, [u1, u2])
    assert two.is_presilting and not two.is_silting


def test_inconclusive_at_tiny_bound(threecycle):
    with pytest.raises(InconclusiveEnumeration):
        enumerate_2silt(PresiltingCatalog(threecycle, 1))


def test_presilting_sum_check(threecycle, u1, u2):
    assert is_presilting(complex_direct_sum(threecycle, [u1, u2]))
    bad = complex_direct_sum(threecycle, [stalk_complex(threecycle, 0),
                                          shifted_projective(threecycle, 0)])
    assert not is_presilting(bad)


# --- triangle decomposition -------------------------------------------------------

def test_triangle_for_regular_silting(threecycle):
    lam = SiltingObject(threecycle, [stalk_complex(threecycle, v) for v in range(3)])
    split = silting_decompose(lam)
    assert split.t_rho == ()
    assert split.t_lambda == (0, 1, 2)
    assert split.cone.is_zero


def test_triangle_for_shifted_silting(threecycle):
    shift = SiltingObject(threecycle, [shifted_projective(threecycle, v) for v in range(3)])
    split = silting_decompose(shift)
    assert split.t_lambda == ()
    assert set(split.t_rho) == {0, 1, 2}
    assert sorted(split.t_double_prime.values()) == [1, 1, 1]


def test_triangle_worked_example(threecycle, u1, u2, u3):
    t = SiltingObject(threecycle, [u1, u2, u3])
    split = silting_decompose(t)
    gs = t.g_vectors()
    t_prime = {gs[i]: m for i, m in split.t_prime.items()}
    t_dprime = {gs[i]: m for i, m in split.t_double_prime.items()}
    assert t_prime == {(-1, 1, 0): 2}                      # T' = U_3 (+) U_3
    assert t_dprime == {(0, 1, -1): 1, (-1, 0, 0): 3}      # T'' = U_1 (+) 3 U_2
    assert sorted(gs[i] for i in split.t_rho) == [(-1, 0, 0), (0, 1, -1)]
    assert [gs[i] for i in split.t_lambda] == [(-1, 1, 0)]


def test_rho_h0_generated_by_lambda_h0(threecycle_siltings):
    from siltstab.twoterm import silting_parts
    for t in threecycle_siltings.siltings:
        lam, rho = silting_parts(t)
        assert repmod.fac_membership(lam.h_zero(), rho.h_zero())
        # the parts partition the summands
        assert len(lam.summands) + len(rho.summands) == 3


def test_decompose_requires_silting(threecycle, u1, u2):
    with pytest.raises(AlgebraError):
        silting_decompose(SiltingObject(threecycle, [u1, u2]))


# --- JSON -------------------------------------------------------------------------

def test_complex_json_round_trip(threecycle, u1):
    data = complex_to_json(u1)
    assert data["p_minus1"] == ["3"] and data["p_zero"] == ["2"]
    back = complex_from_json(threecycle, data)
    assert back.g_vector() == u1.g_vector()
    assert repmod.is_isomorphic(H0(back), H0(u1))


def test_complex_json_example_from_docs(threecycle):
    data = {"p_minus1": ["3"], "p_zero": ["2"],
            "d": [[{"path": ["b"], "coeff": 1}]]}
    c = complex_from_json(threecycle, data)
    assert c.g_vector() == (0, 1, -1)
    assert module_label(H0(c)) == "2"


def test_complex_json_rejects_bad_corner(threecycle):
    data = {"p_minus1": ["3"], "p_zero": ["2"],
            "d": [[{"path": ["a"], "coeff": 1}]]}  # a goes 1 -> 2, wrong corner
    with pytest.raises(AlgebraError):
        complex_from_json(threecycle, data)


def test_g_symbol(threecycle):
    assert g_symbol(threecycle, (0, 1, -1)) == "P_2 - P_3"
    assert g_symbol(threecycle, (-1, 0, 0)) == "-P_1"
    assert g_symbol(threecycle, (0, 0, 0)) == "0"
    assert g_symbol(threecycle, (2, -1, 0)) == "P_1 + P_1 - P_2"
