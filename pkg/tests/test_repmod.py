import itertools

import numpy as np
import pytest

from siltstab import linalg, repmod
from siltstab.algebra import AlgebraError, ResourceGuard, build_basis, parse_algebra
from siltstab.repmod import (Module, decompose, direct_sum, enumerate_indecomposables,
                             fac_membership, hom_dim, hom_space, is_isomorphic,
                             is_support_tau_tilting, is_tau_rigid, module_from_json,
                             module_label, module_to_json, quotient, standard_module,
                             sub_membership, submodule_dim_vectors, tau,
                             top_and_radical, zero_module)


def mod_by_label(indecs, label):
    return indecs[label]


# --- standard modules -------------------------------------------------------

def test_projective_dimensions(threecycle):
    for v in range(3):
        assert standard_module(threecycle, "projective", v).dims == (1, 1, 1)


def test_projective_loewy_labels(threecycle):
    labels = [module_label(standard_module(threecycle, "projective", v)) for v in range(3)]
    assert labels == ["1/2/3", "2/3/1", "3/1/2"]


def test_simple_dimensions(threecycle):
    assert standard_module(threecycle, "simple", 1).dims == (0, 1, 0)


def test_injective_is_dual_of_left_projective(threecycle):
    # D(Lambda e_1) has one basis vector per residue path into vertex 1:
    # e_1, c, bc -- so dims (1,1,1) with socle S_1.
    i1 = standard_module(threecycle, "injective", 0)
    assert i1.dims == (1, 1, 1)
    assert module_label(i1) == "2/3/1"
    for v in range(3):
        iv = standard_module(threecycle, "injective", v)
        for w in range(3):
            s = standard_module(threecycle, "simple", w)
            assert hom_dim(s, iv) == (1 if v == w else 0)  # simple socle


def test_a2_standard_modules(a2):
    assert standard_module(a2, "projective", 0).dims == (1, 1)
    assert standard_module(a2, "projective", 1).dims == (0, 1)
    assert standard_module(a2, "injective", 0).dims == (1, 0)
    assert standard_module(a2, "injective", 1).dims == (1, 1)


def test_unknown_vertex_or_kind(threecycle):
    with pytest.raises(AlgebraError):
        standard_module(threecycle, "simple", 7)
    with pytest.raises(AlgebraError):
        standard_module(threecycle, "flat", 0)


# --- hom spaces --------------------------------------------------------------

def test_hom_from_projectives_counts_dimensions(threecycle, threecycle_indecs):
    for v in range(3):
        p = standard_module(threecycle, "projective", v)
        for m in threecycle_indecs.values():
            assert hom_dim(p, m) == m.dims[v]


def test_hom_simple_into_projective(threecycle):
    s2 = standard_module(threecycle, "simple", 1)
    p3 = standard_module(threecycle, "projective", 2)
    assert hom_dim(s2, p3) == 1  # the socle of P_3


def test_identity_morphism_exists(threecycle_indecs):
    for m in threecycle_indecs.values():
        assert hom_dim(m, m) >= 1


def test_morphisms_intertwine(threecycle_indecs):
    m = threecycle_indecs["2/3"]
    n = threecycle_indecs["2"]
    for f in hom_space(m, n):
        p = m.alg.p
        for k, a in enumerate(m.alg.quiver.arrows):
            lhs = linalg.matmul(n.mats[k], f.mats[a.source], p)
            rhs = linalg.matmul(f.mats[a.target], m.mats[k], p)
            assert np.array_equal(lhs, rhs)


# --- top, radical, presentations --------------------------------------------

def test_top_of_projective(threecycle):
    for v in range(3):
        tops, _ = top_and_radical(standard_module(threecycle, "projective", v))
        assert tops == [(v, 1)]


def test_radical_of_p2_is_31(threecycle):
    _, rad = top_and_radical(standard_module(threecycle, "projective", 1))
    assert rad.dims == (1, 0, 1)
    assert module_label(rad) == "3/1"


def test_top_of_simple(threecycle):
    tops, rad = top_and_radical(standard_module(threecycle, "simple", 0))
    assert tops == [(0, 1)] and rad.is_zero


def test_presentation_of_projective_has_no_kernel(threecycle):
    p1, p0, _ = repmod.presentation_data(standard_module(threecycle, "projective", 0))
    assert p1 == [] and p0 == [0]


def test_presentation_of_simple(threecycle):
    p1, p0, elems = repmod.presentation_data(standard_module(threecycle, "simple", 0))
    assert p0 == [0] and p1 == [1]  # cover P_1, kernel covered by P_2
    assert elems[0][0].any()


def test_presentation_of_23(threecycle, threecycle_indecs):
    p1, p0, _ = repmod.presentation_data(threecycle_indecs["2/3"])
    assert p0 == [1] and p1 == [0]  # kernel of P_2 ->> 2/3 is the socle S_1


# --- tau ---------------------------------------------------------------------

def test_tau_kills_projectives(threecycle):
    for v in range(3):
        assert tau(standard_module(threecycle, "projective", v)).is_zero


def test_tau_on_simples_cycles(threecycle, threecycle_indecs):
    # cross-checked against the mesh structure of the AR quiver:
    # the sequence ending at S_3 starts at S_1, etc.
    assert module_label(tau(threecycle_indecs["1"])) == "2"
    assert module_label(tau(threecycle_indecs["2"])) == "3"
    assert module_label(tau(threecycle_indecs["3"])) == "1"


def test_tau_on_length_two_modules(threecycle_indecs):
    assert module_label(tau(threecycle_indecs["2/3"])) == "3/1"
    assert module_label(tau(threecycle_indecs["3/1"])) == "1/2"
    assert module_label(tau(threecycle_indecs["1/2"])) == "2/3"


def test_tau_zero_iff_projective(threecycle_indecs):
    for label, m in threecycle_indecs.items():
        projective = label in ("1/2/3", "2/3/1", "3/1/2")
        assert tau(m).is_zero == projective


def test_tau_additive_on_sums(threecycle_indecs):
    m = threecycle_indecs["1"]
    t_single = tau(m)
    t_double = tau(direct_sum([m, m]))
    assert t_double.dims == tuple(2 * d for d in t_single.dims)


# --- tau-rigidity and support tau-tilting ------------------------------------

def test_all_nine_indecomposables_are_tau_rigid(threecycle_indecs):
    assert all(is_tau_rigid(m) for m in threecycle_indecs.values())


def test_tau_rigid_additivity(threecycle_indecs):
    m = threecycle_indecs["1"]
    assert is_tau_rigid(direct_sum([m, m])) == is_tau_rigid(m)


def test_support_tau_tilting_examples(threecycle, threecycle_indecs):
    lam = direct_sum([standard_module(threecycle, "projective", v) for v in range(3)])
    assert is_support_tau_tilting(lam)
    assert is_support_tau_tilting(zero_module(threecycle))
    bad = direct_sum([standard_module(threecycle, "projective", 0),
                      standard_module(threecycle, "projective", 1),
                      threecycle_indecs["1"]])
    # Hom(P_1, tau S_1) = Hom(P_1, S_2) is nonzero, so this is not tau-rigid
    assert not is_support_tau_tilting(bad)


# --- Fac and Sub -------------------------------------------------------------

def test_every_module_is_generated_by_the_free_module(threecycle, threecycle_indecs):
    lam = direct_sum([standard_module(threecycle, "projective", v) for v in range(3)])
    for m in threecycle_indecs.values():
        assert fac_membership(lam, m)


def test_fac_examples(threecycle_indecs):
    assert fac_membership(threecycle_indecs["2/3"], threecycle_indecs["2"])
    assert not fac_membership(threecycle_indecs["2"], threecycle_indecs["2/3"])


def test_sub_examples(threecycle, threecycle_indecs):
    for v in range(3):
        s = standard_module(threecycle, "simple", v)
        i = standard_module(threecycle, "injective", v)
        assert sub_membership(i, s)
    m23 = threecycle_indecs["2/3"]
    assert sub_membership(m23, m23)
    assert not sub_membership(m23, threecycle_indecs["1"])  # soc(2/3) = S_3
    assert sub_membership(m23, threecycle_indecs["3"])


def test_fac_is_quotient_closed(threecycle, threecycle_indecs):
    # every quotient of a member of Fac M stays in Fac M
    m = threecycle_indecs["2/3/1"]
    for n in (threecycle_indecs["2/3"], threecycle_indecs["2/3/1"]):
        if not fac_membership(m, n):
            continue
        for incs in brute_force_submodule_inclusions(n):
            q, _ = quotient(n, incs)
            assert fac_membership(m, q)


# --- submodules ---------------------------------------------------------------

def brute_force_submodule_inclusions(m):
    """Independent oracle: all arrow-stable tuples of subspaces, as inclusion
    matrices (per vertex)."""
    alg = m.alg
    p = alg.p
    per_vertex = []
    for v in range(alg.n):
        d = m.dims[v]
        seen = {}
        vectors = list(itertools.product(range(p), repeat=d))
        for r in range(d + 1):
            for combo in itertools.combinations(vectors, r):
                mat = np.array(combo, dtype=np.int64).reshape(r, d) if r else linalg.zeros(0, d)
                basis = linalg.column_space_basis(mat.T, p)
                seen[linalg.row_space_key(basis.T, p)] = basis
        per_vertex.append(list(seen.values()))
    out = []
    for tup in itertools.product(*per_vertex):
        stable = True
        for k, a in enumerate(alg.quiver.arrows):
            img = linalg.matmul(m.mats[k], tup[a.source], p)
            if img.size and linalg.solve(tup[a.target], img, p) is None:
                stable = False
                break
        if stable:
            out.append(list(tup))
    return out


def test_submodule_dim_vectors_of_simple(threecycle):
    s = standard_module(threecycle, "simple", 0)
    assert submodule_dim_vectors(s) == {(0, 0, 0), (1, 0, 0)}


def test_submodule_dim_vectors_of_23(threecycle_indecs):
    assert submodule_dim_vectors(threecycle_indecs["2/3"]) == {
        (0, 0, 0), (0, 0, 1), (0, 1, 1)}


def test_submodule_dim_vectors_of_p1_uniserial(threecycle):
    p1 = standard_module(threecycle, "projective", 0)
    assert submodule_dim_vectors(p1) == {
        (0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1)}


@pytest.mark.parametrize("labels", [("2/3",), ("1/2/3",), ("1", "2"), ("2/3", "3")])
def test_submodule_dim_vectors_match_brute_force(threecycle_indecs, labels):
    mods = [threecycle_indecs[l] for l in labels]
    m = mods[0] if len(mods) == 1 else direct_sum(mods)
    expected = {tuple(inc.shape[1] for inc in incs)
                for incs in brute_force_submodule_inclusions(m)}
    assert submodule_dim_vectors(m) == expected


def test_submodule_set_contains_zero_and_total(threecycle_indecs):
    for m in threecycle_indecs.values():
        subs = submodule_dim_vectors(m)
        assert (0,) * 3 in subs and m.dims in subs


def test_submodule_guard(threecycle):
    big = direct_sum([standard_module(threecycle, "projective", 0)] * 5)
    with pytest.raises(ResourceGuard, match="too large for submodule enumeration"):
        submodule_dim_vectors(big, dim_guard=12)


# --- decomposition and isomorphism -------------------------------------------

def test_decompose_simple_square(threecycle_indecs):
    s1 = threecycle_indecs["1"]
    parts = decompose(direct_sum([s1, s1]))
    assert len(parts) == 1 and parts[0][1] == 2
    assert is_isomorphic(parts[0][0], s1)


def test_decompose_projective_is_indecomposable(threecycle):
    p1 = standard_module(threecycle, "projective", 0)
    assert decompose(p1) == [(p1, 1)]


def test_decompose_regular_module(threecycle):
    lam = direct_sum([standard_module(threecycle, "projective", v) for v in range(3)])
    parts = decompose(lam)
    assert sorted(module_label(m) for m, _ in parts) == ["1/2/3", "2/3/1", "3/1/2"]
    assert all(mult == 1 for _, mult in parts)


def test_decompose_is_a_partition(threecycle_indecs):
    m = direct_sum([threecycle_indecs["2/3"], threecycle_indecs["1"], threecycle_indecs["1"]])
    parts = decompose(m)
    total = np.zeros(3, dtype=int)
    for piece, mult in parts:
        total += mult * np.array(piece.dims)
    assert tuple(total) == m.dims


def test_is_isomorphic_basics(threecycle_indecs):
    for m in threecycle_indecs.values():
        assert is_isomorphic(m, m)
    assert not is_isomorphic(threecycle_indecs["1"], threecycle_indecs["2"])


def test_is_isomorphic_conjugated_presentation():
    data = {"field": {"p": 3}, "vertices": ["1", "2", "3"],
            "arrows": [{"name": "a", "from": "1", "to": "2"},
                       {"name": "b", "from": "2", "to": "3"},
                       {"name": "c", "from": "3", "to": "1"}],
            "relations": [{"terms": [{"coeff": 1, "path": ["a", "b", "c"]}]},
                          {"terms": [{"coeff": 1, "path": ["b", "c", "a"]}]},
                          {"terms": [{"coeff": 1, "path": ["c", "a", "b"]}]}],
            "path_cap": 10}
    alg3 = build_basis(parse_algebra(data))
    x = Module(alg3, (0, 1, 1), [linalg.zeros(1, 0), np.array([[1]]), linalg.zeros(0, 1)])
    y = Module(alg3, (0, 1, 1), [linalg.zeros(1, 0), np.array([[2]]), linalg.zeros(0, 1)])
    assert is_isomorphic(x, y)


# --- enumeration ---------------------------------------------------------------

def test_nine_indecomposables(threecycle):
    mods = enumerate_indecomposables(threecycle, 3)
    assert len(mods) == 9
    dim_vectors = sorted(m.dims for m in mods)
    assert dim_vectors == sorted([
        (1, 1, 1), (1, 1, 1), (1, 1, 1), (1, 0, 1), (0, 1, 1), (1, 1, 0),
        (1, 0, 0), (0, 1, 0), (0, 0, 1)])


def test_point_indecomposables(point):
    mods = enumerate_indecomposables(point, 3)
    assert len(mods) == 1 and mods[0].dims == (1,)


def test_a2_indecomposables(a2):
    mods = enumerate_indecomposables(a2, 2)
    assert sorted(m.dims for m in mods) == [(0, 1), (1, 0), (1, 1)]


def test_enumeration_is_deterministic(threecycle):
    first = [m.dims for m in enumerate_indecomposables(threecycle, 3)]
    second = [m.dims for m in enumerate_indecomposables(threecycle, 3)]
    assert first == second


# --- dual bases invariant -------------------------------------------------------

def test_hom_from_projective_equals_dimension_everywhere(threecycle, threecycle_indecs):
    mods = list(threecycle_indecs.values())
    sums = [direct_sum([mods[0], mods[4]]), direct_sum([mods[2], mods[2]])]
    for m in mods + sums:
        for v in range(3):
            p = standard_module(threecycle, "projective", v)
            assert hom_dim(p, m) == m.dims[v]


# --- JSON exchange ---------------------------------------------------------------

def test_module_json_round_trip(threecycle_indecs):
    m = threecycle_indecs["2/3"]
    data = module_to_json(m)
    assert data["dims"] == [0, 1, 1]
    m2 = module_from_json(m.alg, data)
    assert is_isomorphic(m, m2)


def test_module_json_rejects_relation_violation(threecycle):
    data = {"dims": [1, 1, 1],
            "arrows": {"a": [[1]], "b": [[1]], "c": [[1]]}}
    with pytest.raises(AlgebraError):
        module_from_json(threecycle, data)


def test_module_json_missing_arrows_default_to_zero(threecycle):
    m = module_from_json(threecycle, {"dims": [1, 0, 0], "arrows": {}})
    assert m.dims == (1, 0, 0)
