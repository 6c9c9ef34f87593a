import pytest
from hypothesis import given, settings, strategies as st

from spanmackey.errors import ClassMismatch
from spanmackey.groups import double_cosets, named_group, subgroup_classes
from spanmackey.gsets import decompose, product, orbit
from spanmackey.spans import (
    BurnsideElement,
    RetractiveSpan,
    basis_element,
    burnside_class,
    burnside_multiply,
    compose_spans,
    empty_span,
    from_ghost,
    ghost,
    span_iso,
    span_isos_bruteforce,
    span_normal_form,
    span_sum,
    table_of_marks,
    transfer_span,
    restriction_span,
    transitive_spans,
    unit_span,
)

C2 = named_group("cyclic", 2)
S3 = named_group("symmetric", 3)


def test_marks_examples():
    assert [list(r) for r in table_of_marks(C2).matrix] == [[2, 0], [1, 1]]
    assert [list(r) for r in table_of_marks(named_group("cyclic", 1)).matrix] == [[1]]
    m = table_of_marks(S3).matrix
    assert [m[i][i] for i in range(4)] == [6, 1, 2, 1]


def test_marks_triangular(group):
    sc = subgroup_classes(group)
    m = table_of_marks(group).matrix
    n = len(m)
    for i in range(n):
        assert m[i][i] == sc[i].weyl.order > 0
        for j in range(i + 1, n):
            assert m[i][j] == 0


def test_burnside_examples():
    one = basis_element(S3, 3)
    x = basis_element(S3, 1)
    assert burnside_multiply(one, x) == x
    assert burnside_multiply(x, x).coeffs == (1, 1, 0, 0)
    assert ghost(burnside_multiply(x, x)) == (9, 1, 0, 0)
    y = basis_element(C2, 0)
    assert burnside_multiply(y, y).coeffs == (2, 0)


def test_product_matches_orbit_decomposition(group):
    sc = subgroup_classes(group)
    for i, H in enumerate(sc.representatives):
        for j, K in enumerate(sc.representatives):
            direct = burnside_class(product(orbit(group, H), orbit(group, K)))
            assert burnside_multiply(basis_element(group, i), basis_element(group, j)) == direct


coeffs = st.lists(st.integers(-3, 3), min_size=4, max_size=4)


@settings(max_examples=50, deadline=None)
@given(coeffs, coeffs, coeffs)
def test_burnside_ring_laws(a, b, c):
    A, B, Cc = (BurnsideElement(S3, tuple(v)) for v in (a, b, c))
    assert (A * B) * Cc == A * (B * Cc)
    assert A * B == B * A
    assert A * (B + Cc) == A * B + A * Cc
    assert from_ghost(S3, ghost(A)) == A


def test_mark_homomorphism_injective_on_basis(group):
    n = len(subgroup_classes(group))
    ghosts = {ghost(basis_element(group, i)) for i in range(n)}
    assert len(ghosts) == n


def test_res_tr_composite():
    comp = compose_spans(transfer_span(S3, 1, 3), restriction_span(S3, 3, 1))
    assert comp.middle.size == 9
    assert sorted(o.stabilizer.order for o in decompose(comp.middle)) == [1, 2]
    nf = span_normal_form(comp)
    assert len(nf) == 2


def test_unit_and_empty():
    for c in range(4):
        u = unit_span(S3, c)
        assert len(span_normal_form(u)) == 1
        assert span_iso(compose_spans(u, u), u) is not None
    assert span_normal_form(empty_span(S3, 1, 2)) == ()
    e = compose_spans(empty_span(S3, 1, 3), transfer_span(S3, 3, 3))
    assert e.middle.size == 0


def test_class_mismatch():
    with pytest.raises(ClassMismatch):
        compose_spans(transfer_span(S3, 1, 3), transfer_span(S3, 1, 3))


def test_normal_form_decides_iso():
    spans = {(h, k): transitive_spans(S3, h, k) for h in range(4) for k in range(4)}
    for (h, k), group_spans in spans.items():
        for a in group_spans:
            for b in group_spans:
                brute = span_isos_bruteforce(a, b)
                assert (span_normal_form(a) == span_normal_form(b)) == bool(brute)
                assert (span_iso(a, b) is not None) == bool(brute)


def test_transitive_span_count():
    assert sum(len(transitive_spans(S3, h, k)) for h in range(4) for k in range(4)) == 39


def test_double_cosets_vs_orbits(group):
    sc = subgroup_classes(group)
    for H in sc.representatives:
        for K in sc.representatives:
            P = product(orbit(group, H), orbit(group, K))
            assert len(decompose(P)) == len(double_cosets(group, K, H))


def test_distributivity():
    t = transfer_span(S3, 1, 3)
    r = restriction_span(S3, 3, 0)
    lhs = compose_spans(span_sum(t, t), r)
    rhs = span_sum(compose_spans(t, r), compose_spans(t, r))
    assert span_iso(lhs, rhs) is not None


def test_retractive_wrap_roundtrip():
    sp = compose_spans(transfer_span(S3, 1, 3), restriction_span(S3, 3, 1))
    total, legp, legq, inc_s, inc_z = RetractiveSpan(sp).wrap()
    back = RetractiveSpan.unwrap(S3, sp.source, sp.target, total, legp, legq)
    assert back.span.middle.act == sp.middle.act
    assert back.span.p.map == sp.p.map and back.span.q.map == sp.q.map
    assert total.size == sp.middle.size + 9
