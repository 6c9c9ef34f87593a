import itertools

import numpy as np
import pytest

from spanmackey.errors import DimensionMismatch
from spanmackey.groups import named_group, subgroup_classes
from spanmackey.gsets import from_orbit_types
from spanmackey.mackey import (
    burnside_mackey,
    check_mackey_axioms,
    fixed_point_mackey,
    mackey_from_json,
    perturbed,
    span_act,
    span_matrix,
)
from spanmackey.spans import (
    RetractiveSpan,
    compose_spans,
    empty_span,
    span_sum,
    transfer_span,
    restriction_span,
    transitive_spans,
    unit_span,
)

C2 = named_group("cyclic", 2)
S3 = named_group("symmetric", 3)


def test_trivial_group():
    G = named_group("cyclic", 1)
    M = burnside_mackey(G)
    assert M.ranks == (1,)
    assert check_mackey_axioms(M).ok


def test_c2_matrices():
    M = burnside_mackey(C2)
    e, whole = C2.trivial(), C2.whole()
    assert M.res_map(whole, e).tolist() == [[2, 1]]
    assert M.tr_map(e, whole).tolist() == [[1], [0]]


def test_s3_double_coset_example():
    M = burnside_mackey(S3)
    sc = subgroup_classes(S3)
    C2s, e, G = sc[1].representative, S3.trivial(), S3.whole()
    lhs = M.res_map(G, C2s) @ M.tr_map(C2s, G)
    rhs = np.eye(2, dtype=np.int64) + M.tr_map(e, C2s) @ M.res_map(C2s, e)
    assert lhs.tolist() == rhs.tolist()


def test_burnside_passes(group):
    assert check_mackey_axioms(burnside_mackey(group)).ok


def test_fixed_point_functor_passes(group):
    sc = subgroup_classes(group)
    X = from_orbit_types(group, sc.representatives[:2] + [sc.representatives[-1]])
    assert check_mackey_axioms(fixed_point_mackey(X)).ok


def test_perturbed_transfer_fails_with_witness():
    M = burnside_mackey(S3)
    key = next(k for k in sorted(M.tr) if k[0] == 3 and len(k[1]) == 2)
    bad = perturbed(M, "tr", key, 0, 0, 1)
    rep = check_mackey_axioms(bad)
    assert not rep.ok
    w = next(r.witness for r in rep.failures() if r.name == "double_coset_formula")
    assert w["double_coset_representatives"]
    assert w["lhs"] != w["rhs"]


def test_json_roundtrip():
    M = burnside_mackey(S3)
    back = mackey_from_json(S3, M.to_json())
    assert back.ranks == M.ranks
    for k in M.res:
        assert np.array_equal(back.res[k], M.res[k])
    assert check_mackey_axioms(back).ok


def test_span_act_conditions():
    M = burnside_mackey(S3)
    for c in range(4):
        n = M.ranks[c]
        for j in range(n):
            x = tuple(int(i == j) for i in range(n))
            assert span_act(M, unit_span(S3, c), x).vector == x
            assert span_act(M, RetractiveSpan(empty_span(S3, c, 3)), x).vector == (0,) * M.ranks[3]


def test_span_act_example():
    M = burnside_mackey(S3)
    comp = compose_spans(transfer_span(S3, 1, 3), restriction_span(S3, 3, 1))
    assert span_act(M, comp, (0, 1)).vector == (1, 1)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        span_act(burnside_mackey(S3), unit_span(S3, 1), (1, 0, 0))


def _grid(G, limit=None):
    spans = {}
    for h in range(len(subgroup_classes(G))):
        for k in range(len(subgroup_classes(G))):
            spans[(h, k)] = transitive_spans(G, h, k)[:limit]
    return spans


@pytest.mark.parametrize("name", ["C2", "S3", "C2xC2"])
def test_span_action_functorial(name):
    from conftest import CATALOG
    G = CATALOG[name]
    M = burnside_mackey(G)
    grid = _grid(G, limit=3)
    n = len(subgroup_classes(G))
    for h, l, k in itertools.product(range(n), repeat=3):
        for a in grid[(h, l)]:
            for b in grid[(l, k)]:
                lhs = span_matrix(M, b) @ span_matrix(M, a)
                assert np.array_equal(lhs, span_matrix(M, compose_spans(a, b)))


def test_span_action_additive():
    M = burnside_mackey(S3)
    grid = _grid(S3)
    for (h, k), spans in grid.items():
        for a, b in itertools.combinations(spans, 2):
            assert np.array_equal(span_matrix(M, span_sum(a, b)), span_matrix(M, a) + span_matrix(M, b))
