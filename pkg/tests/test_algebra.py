import itertools
import json

import numpy as np
import pytest

from siltstab.algebra import (AlgebraError, build_basis, load_algebra, multiply,
                              parse_algebra)
from tests.conftest import fixture_path


def brute_force_residue_path_count(vertices, arrows, dead_words, max_len):
    """Independent oracle: count paths that avoid the monomial relations."""
    adjacency = {}
    for name, src, tgt in arrows:
        adjacency.setdefault(src, []).append((name, tgt))
    count = 0
    frontier = [(v, v, ()) for v in vertices]
    for length in range(max_len + 1):
        for src, at, word in frontier:
            if not any("".join(word[i:i + len(d)]) == "".join(d)
                       for d in dead_words for i in range(len(word) - len(d) + 1)):
                count += 1
        nxt = []
        for src, at, word in frontier:
            for name, tgt in adjacency.get(at, []):
                nxt.append((src, tgt, word + (name,)))
        frontier = nxt
    return count


def test_threecycle_dimension_is_nine(threecycle):
    # oracle: residue paths avoiding the three length-3 monomials, length <= 2
    dead = [("a", "b", "c"), ("b", "c", "a"), ("c", "a", "b")]
    arrows = [("a", "1", "2"), ("b", "2", "3"), ("c", "3", "1")]
    expected = brute_force_residue_path_count(["1", "2", "3"], arrows, dead, 2)
    assert expected == 9
    assert threecycle.dim == 9


def test_point_algebra_dimension(point):
    assert point.dim == 1
    assert point.n == 1


def test_a2_dimension(a2):
    # oracle: residue paths are e_1, e_2, a
    assert a2.dim == 3


def test_idempotents(threecycle):
    alg = threecycle
    one = alg.unit()
    total = alg.zero()
    for v in range(alg.n):
        e = alg.idempotent(v)
        assert np.array_equal(alg.mult(e, e), e)
        total = (total + e) % alg.p
        for w in range(alg.n):
            prod = alg.mult(e, alg.idempotent(w))
            if v == w:
                assert np.array_equal(prod, e)
            else:
                assert not prod.any()
    assert np.array_equal(total, one)


def test_multiplication_examples(threecycle):
    alg = threecycle
    a, b, c = (alg.arrow_elem(k) for k in range(3))
    ab = multiply(alg, a, b)
    assert ab.any()
    abc = multiply(alg, ab, c)
    assert not abc.any()  # length-three paths vanish
    e1 = alg.idempotent(0)
    assert np.array_equal(multiply(alg, e1, a), a)
    assert not multiply(alg, a, e1).any()  # a ends at vertex 2


def test_associativity_on_all_basis_triples(threecycle, a2, point):
    for alg in (threecycle, a2, point):
        assert alg.check_associativity()


def test_relations_vanish_in_quotient(threecycle):
    alg = threecycle
    for rel in alg.presentation.relations:
        acc = alg.zero()
        for coeff, path in rel.terms:
            src = alg.quiver.arrows[path[0]].source
            acc = (acc + coeff * alg.nf_path(src, path)) % alg.p
        assert not acc.any()


def test_corner_spaces(threecycle):
    alg = threecycle
    # every corner of this algebra is one-dimensional
    for j in range(3):
        for i in range(3):
            assert len(alg.corner(j, i)) == 1


def test_opposite_transport_is_antihomomorphism(threecycle):
    alg = threecycle
    op = alg.opposite()
    a, b = alg.arrow_elem(0), alg.arrow_elem(1)
    ab = alg.mult(a, b)
    lhs = alg.transport_op(ab)
    rhs = op.mult(alg.transport_op(b), alg.transport_op(a))
    assert np.array_equal(lhs, rhs)


def test_corner_element_inverse(threecycle):
    alg = threecycle
    e2 = alg.idempotent(1)
    assert np.array_equal(alg.corner_elem_inverse(e2, 1), e2)


def test_parse_rejects_non_admissible_relation():
    data = {"field": {"p": 2}, "vertices": ["1", "2"],
            "arrows": [{"name": "a", "from": "1", "to": "2"}],
            "relations": [{"terms": [{"coeff": 1, "path": ["a"]}]}]}
    with pytest.raises(AlgebraError, match="non-admissible relation"):
        parse_algebra(data)


def test_parse_rejects_non_prime_characteristic():
    data = {"field": {"p": 4}, "vertices": ["1"], "arrows": [], "relations": []}
    with pytest.raises(AlgebraError, match="non-prime"):
        parse_algebra(data)


def test_parse_rejects_duplicates_and_unknown_vertices():
    base = {"field": {"p": 2}, "vertices": ["1", "2"], "relations": []}
    with pytest.raises(AlgebraError):
        parse_algebra({**base, "arrows": [{"name": "a", "from": "1", "to": "9"}]})
    with pytest.raises(AlgebraError):
        parse_algebra({**base, "vertices": ["1", "1"], "arrows": []})
    with pytest.raises(AlgebraError):
        parse_algebra({**base, "arrows": [{"name": "a", "from": "1", "to": "2"},
                                          {"name": "a", "from": "2", "to": "1"}]})


def test_parse_rejects_nonparallel_relation():
    data = {"field": {"p": 2}, "vertices": ["1", "2", "3"],
            "arrows": [{"name": "a", "from": "1", "to": "2"},
                       {"name": "b", "from": "2", "to": "3"},
                       {"name": "c", "from": "2", "to": "2"}],
            "relations": [{"terms": [{"coeff": 1, "path": ["a", "b"]},
                                     {"coeff": 1, "path": ["c", "c"]}]}]}
    with pytest.raises(AlgebraError, match="parallel"):
        parse_algebra(data)


def test_malformed_json_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{not json")
    with pytest.raises(AlgebraError, match="malformed"):
        load_algebra(str(path))


def test_infinite_dimensional_detection():
    data = {"field": {"p": 2}, "vertices": ["1"],
            "arrows": [{"name": "x", "from": "1", "to": "1"}],
            "relations": [], "path_cap": 5}
    with pytest.raises(AlgebraError, match="not finite-dimensional within path_cap"):
        build_basis(parse_algebra(data))


def test_loop_with_relation_is_finite():
    data = {"field": {"p": 2}, "vertices": ["1"],
            "arrows": [{"name": "x", "from": "1", "to": "1"}],
            "relations": [{"terms": [{"coeff": 1, "path": ["x", "x"]}]}],
            "path_cap": 5}
    alg = build_basis(parse_algebra(data))
    assert alg.dim == 2  # e and x


def test_commutativity_relation_quotient():
    # square quiver with commutativity relation ab - cd
    data = {"field": {"p": 3}, "vertices": ["1", "2", "3", "4"],
            "arrows": [{"name": "a", "from": "1", "to": "2"},
                       {"name": "b", "from": "2", "to": "4"},
                       {"name": "c", "from": "1", "to": "3"},
                       {"name": "d", "from": "3", "to": "4"}],
            "relations": [{"terms": [{"coeff": 1, "path": ["a", "b"]},
                                     {"coeff": -1, "path": ["c", "d"]}]}],
            "path_cap": 6}
    alg = build_basis(parse_algebra(data))
    # residue paths: 4 trivial + 4 arrows + one diagonal class
    assert alg.dim == 9
    ab = alg.mult(alg.arrow_elem(0), alg.arrow_elem(1))
    cd = alg.mult(alg.arrow_elem(2), alg.arrow_elem(3))
    assert np.array_equal(ab, cd)


def test_vertex_order_is_preserved(threecycle):
    assert threecycle.quiver.vertices == ("1", "2", "3")
