import json

import pytest

from stratkit.algebra import make_algebra
from stratkit.exactla import Field
from stratkit.presentation import (
    PresentationError,
    compute_basis,
    parse_algebra,
    presentation_from_parts,
    validate_basic,
)

from conftest import DATA, F2


def load(name):
    return json.loads((DATA / name).read_text())


def test_parse_point():
    p = parse_algebra(load("k.json"))
    assert p.vertices == ("1",) and p.arrows == () and p.relations == ()


def test_parse_a2():
    p = parse_algebra(load("a2.json"))
    assert p.vertices == ("1", "2")
    assert [(a.name, a.source, a.target) for a in p.arrows] == [("a", "1", "2")]
    assert p.relations == ()


def test_parse_two_cycle_relations():
    p = parse_algebra(load("two_cycle.json"))
    assert len(p.relations) == 2
    assert all(len(r) == 1 and len(r[0][1]) == 2 for r in p.relations)


def test_parse_rejects_unknown_arrow_endpoint():
    doc = load("a2.json")
    doc["arrows"][0]["target"] = "9"
    with pytest.raises(PresentationError):
        parse_algebra(doc)


def test_basis_point(k):
    assert k.dim == 1 and k.labels == ("e_1",)


def test_basis_a2(A2):
    assert set(A2.labels) == {"e_1", "e_2", "a"}
    assert [A2.labels[x] for x in A2.component(0, 1)] == ["a"]
    assert A2.component(1, 0) == ()


def test_basis_two_cycle(cycle):
    assert set(cycle.labels) == {"e_1", "e_2", "a", "b"}
    a, b = cycle.label_index("a"), cycle.label_index("b")
    assert cycle.product(b, a) == () and cycle.product(a, b) == ()
    assert cycle.check_associativity() == []


def test_relation_with_two_terms_over_q():
    q = Field.rationals()
    pres = presentation_from_parts(
        q, ["1", "2"], [("a", "1", "2"), ("b", "1", "2"), ("c", "2", "2")],
        [[(1, ["a", "c"]), ("-1/2", ["b", "c"])], [(1, ["c", "c"])]], nilpotency_bound=2)
    alg = compute_basis(pres)
    # paths 1 -> 2: a, b, a c, b c with a c = b c / 2
    assert alg.component_dim(0, 1) == 3
    assert alg.check_associativity() == []


def test_validate_a2(A2):
    assert validate_basic(A2).basic


def test_validate_local_loop():
    pres = presentation_from_parts(F2, ["1"], [("x", "1", "1")], [[(1, ["x", "x"])]], nilpotency_bound=1)
    alg = compute_basis(pres)
    assert alg.dim == 2
    assert validate_basic(alg).basic


def matrix_algebra():
    """2x2 matrices over F_2 written on two vertices; A e_1 and A e_2 are isomorphic."""
    labels = ["e_1", "e_2", "a", "b"]
    source, target = [0, 1, 0, 1], [0, 1, 1, 0]
    products = {(3, 2): {0: 1}, (2, 3): {1: 1}}
    return make_algebra(F2, ["1", "2"], labels, source, target, [0, 1], products)


def test_validate_detects_isomorphic_projectives():
    alg = matrix_algebra()
    assert alg.check_associativity() == []
    rep = validate_basic(alg)
    assert not rep.basic
    assert rep.witnesses == [("1", "2")]
