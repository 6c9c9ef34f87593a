"""Acceptance criteria, one test each, with a wall-clock limit and a pass/fail line."""

import itertools
import time

import numpy as np

from spanmackey.atheory import a_g_pi0, tom_dieck_check
from spanmackey.fixpoints import (
    EquivObject,
    RetMor,
    Square,
    beck_chevalley,
    bounded_family,
    check_adjunction,
    compose_pointwise,
    f_sharp,
    homotopy_fixed_points,
    ret_sets_category,
)
from spanmackey.groups import subgroup_classes
from spanmackey.gsets import (
    GMap,
    coproduct,
    coproduct_map,
    empty_gset,
    from_orbit_types,
    homs,
    induce,
    orbit,
    point,
    pullback,
    standard_orbit,
)
from spanmackey.mackey import burnside_mackey, check_mackey_axioms, perturbed, span_act, span_matrix
from spanmackey.spans import (
    compose_spans,
    empty_span,
    span_iso,
    span_sum,
    table_of_marks,
    transitive_spans,
    unit_span,
)

from conftest import CATALOG

SMALL = ["C2", "C3", "C4", "C2xC2", "S3"]


def criterion(capsys, name, limit, body):
    """Run ``body``, print one line, and fail on error or overrun."""
    start = time.perf_counter()
    error = None
    try:
        detail = body()
    except AssertionError as exc:
        error, detail = exc, f"assertion failed: {exc}"
    elapsed = time.perf_counter() - start
    ok = error is None and elapsed < limit
    with capsys.disabled():
        print(f"\n[{'PASS' if ok else 'FAIL'}] {name}: {detail} ({elapsed:.1f}s, limit {limit}s)")
    if error is not None:
        raise error
    assert elapsed < limit, f"{name} took {elapsed:.1f}s (limit {limit}s)"


# ------------------------------------------------------------ groups


def _brute_conjugates(G, H):
    return {tuple(sorted(G.conj(g, h) for h in H.elements)) for g in G.elements}


def _brute_normalizer_order(G, H):
    Hs = set(H.elements)
    return sum(1 for g in G.elements if {G.conj(g, h) for h in Hs} == Hs)


def _brute_mark(G, K, H):
    # cosets gK fixed by H: g^-1 H g <= K
    Ks = set(K.elements)
    fixed = sum(1 for g in G.elements if all(G.mult[G.mult[G.inverse[g]][h]][g] in Ks for h in H.elements))
    return fixed // K.order


def test_group_layer(capsys):
    def body():
        n = 0
        for name, G in CATALOG.items():
            sc = subgroup_classes(G)
            for c in sc:
                H = c.representative
                assert {m.elements for m in c.members} == _brute_conjugates(G, H)
                assert len(c.members) * _brute_normalizer_order(G, H) == G.order
            m = np.array(table_of_marks(G).matrix, dtype=np.int64)
            k = len(sc)
            for i, j in itertools.product(range(k), repeat=2):
                assert m[i, j] == _brute_mark(G, sc[i].representative, sc[j].representative)
            assert np.array_equal(np.triu(m, 1), np.zeros_like(m))
            assert [m[i, i] for i in range(k)] == [_brute_normalizer_order(G, c.representative) // c.representative.order for c in sc]
            assert np.linalg.matrix_rank(m) == k
            n += k
        return f"{len(CATALOG)} groups, {n} subgroup classes"

    criterion(capsys, "group/structure layer", 5, body)


# ------------------------------------------------------------ spans


def _canonical_assoc(a, b, c):
    """``((s,t),u) -> (s,(t,u))`` between the two bracketings."""
    ab, bc = pullback(a.q, b.p), pullback(b.q, c.p)
    left = compose_spans(compose_spans(a, b), c)
    right = compose_spans(a, compose_spans(b, c))
    lpairs = pullback(compose_spans(a, b).q, c.p).pairs
    rindex = {p: i for i, p in enumerate(pullback(a.q, compose_spans(b, c).p).pairs)}
    bcindex = {p: i for i, p in enumerate(bc.pairs)}
    table = []
    for st, u in lpairs:
        s, t = ab.pairs[st]
        table.append(rindex[(s, bcindex[(t, u)])])
    return left, right, GMap(left.middle, right.middle, tuple(table))


def _is_span_iso(phi, a, b):
    phi.validate()
    return (
        phi.is_bijective()
        and phi.then(b.p).map == a.p.map
        and phi.then(b.q).map == a.q.map
    )


def _unit_isos(a):
    """``id o a -> a`` and ``a o id -> a`` by projection to the ``a`` factor."""
    left = compose_spans(unit_span(a.group, a.source), a)
    right = compose_spans(a, unit_span(a.group, a.target))
    pl = pullback(unit_span(a.group, a.source).q, a.p).pairs
    pr = pullback(a.q, unit_span(a.group, a.target).p).pairs
    return (
        (left, GMap(left.middle, a.middle, tuple(s for _, s in pl))),
        (right, GMap(right.middle, a.middle, tuple(s for s, _ in pr))),
    )


def _span_grid(G, with_sums):
    n = len(subgroup_classes(G))
    grid = {(h, k): list(transitive_spans(G, h, k)) for h in range(n) for k in range(n)}
    if with_sums:
        for key, spans in grid.items():
            extra = [span_sum(x, y) for x, y in itertools.combinations_with_replacement(spans, 2)]
            grid[key] = spans + [s for s in extra if s.middle.size <= 12] + [empty_span(G, *key)]
    return grid


def _double_coset_bijection(G, H, K):
    """Orbits of ``G/H x G/K`` versus ``K\\G/H`` via ``(aH, bK) -> K b^-1 a H``."""
    oh, ok = standard_orbit(G, H), standard_orbit(G, K)
    seen, orbits = set(), []
    for x, y in itertools.product(range(oh.gset.size), range(ok.gset.size)):
        if (x, y) in seen:
            continue
        orb = {(oh.gset.act[g][x], ok.gset.act[g][y]) for g in G.elements}
        seen |= orb
        orbits.append(orb)
    dcs = set()
    for a in G.elements:
        dcs.add(frozenset(G.mult[G.mult[k][a]][h] for k in K.elements for h in H.elements))
    image = []
    for orb in orbits:
        cosets = set()
        for x, y in orb:
            a, b = oh.representatives[x], ok.representatives[y]
            d = G.mult[G.inverse[b]][a]
            cosets.add(frozenset(G.mult[G.mult[k][d]][h] for k in K.elements for h in H.elements))
        assert len(cosets) == 1, "orbit meets several double cosets"
        image.append(next(iter(cosets)))
    assert len(set(image)) == len(image) == len(dcs), "not a bijection onto double cosets"
    return len(orbits)


def test_span_calculus(capsys):
    def body():
        triples = units = pairs = 0
        for name in ("C2", "S3"):
            G = CATALOG[name]
            grid = _span_grid(G, with_sums=(name == "C2"))
            n = len(subgroup_classes(G))
            for h, l, m, k in itertools.product(range(n), repeat=4):
                for a in grid[(h, l)]:
                    for b in grid[(l, m)]:
                        for c in grid[(m, k)]:
                            left, right, phi = _canonical_assoc(a, b, c)
                            assert _is_span_iso(phi, left, right), "associator is not a span iso"
                            triples += 1
            for spans in grid.values():
                for a in spans:
                    for comp, phi in _unit_isos(a):
                        assert _is_span_iso(phi, comp, a), "unitor is not a span iso"
                        assert span_iso(comp, a) is not None
                        units += 1
            reps = subgroup_classes(G).representatives
            for H, K in itertools.product(reps, repeat=2):
                _double_coset_bijection(G, H, K)
                pairs += 1
        return f"{triples} triples, {units} unit checks, {pairs} double-coset bijections"

    criterion(capsys, "span calculus", 30, body)


# ------------------------------------------------------------ restriction / transfer layer


def _restriction_transfer_checks(G):
    reps = subgroup_classes(G).representatives
    orbs = [orbit(G, R) for R in reps]
    n = len(reps)
    maps = {(a, b): list(homs(orbs[a], orbs[b])) for a in range(n) for b in range(n)}
    counts = [0, 0, 0, 0]
    for X in (point(G), orbs[0], orbs[1]):
        C = ret_sets_category(X, 2)
        fams = [bounded_family(C, o) for o in orbs]
        cache = {}
        for (a, b), fs in maps.items():
            for f in fs:
                rep = check_adjunction(f, C, fams[a], fams[b], cache)
                assert rep.ok, f"adjunction fails along {f.map}: {rep.failures[:1]}"
                counts[0] += 1
        for (a, b), fs in maps.items():
            for c in range(n):
                for f in fs:
                    for j in maps[(c, b)]:
                        pb = pullback(f, j)
                        square = Square(pb.left, pb.right, f, j)
                        for F in fams[a]:
                            res = beck_chevalley(square, F)
                            assert res.is_pullback and res.is_iso and res.matches_formula
                            counts[1] += 1
        # negative control: doubling the corner of the first nonempty square
        f = maps[(0, n - 1)][0]
        pb = pullback(f, f)
        A2 = coproduct(pb.gset, pb.gset)
        bad = Square(coproduct_map([pb.left, pb.left], A2), coproduct_map([pb.right, pb.right], A2), f, f)
        verdicts = [beck_chevalley(bad, F).is_iso for F in fams[0] if F.objs[0]]
        assert not bad.is_pullback() and verdicts and not any(verdicts), "control square passed"
        counts[2] += 1
        # (hf)_# = h_# f_# along G/H1 -> G/H2 -> G/H3, legs to G/H3 and G/G
        for a, b, c in itertools.product(range(n), repeat=3):
            r2, s2 = orbs[c].identity_map(), maps[(c, n - 1)][0]
            for f in maps[(a, b)]:
                for h in maps[(b, c)]:
                    r, s = h.then(r2), h.then(s2)
                    p, q = f.then(r), f.then(s)
                    for F in fams[c]:
                        lhs = compose_pointwise(C, f_sharp(r, s, r2, s2, h, F), f_sharp(p, q, r, s, f, F))
                        assert lhs == f_sharp(p, q, r2, s2, f.then(h), F), "f_sharp is not functorial"
                        counts[3] += 1
    return counts


def test_restriction_transfer_layer(capsys):
    def body():
        totals = [0, 0, 0, 0]
        for name in ("C2", "S3"):
            for i, c in enumerate(_restriction_transfer_checks(CATALOG[name])):
                totals[i] += c
        return (
            f"{totals[0]} adjunctions, {totals[1]} Beck-Chevalley maps, "
            f"{totals[2]} controls rejected, {totals[3]} f_sharp composites"
        )

    criterion(capsys, "restriction/transfer layer", 60, body)


# ------------------------------------------------------------ Mackey


def test_mackey_layer(capsys):
    def body():
        spans_checked = 0
        for name, G in CATALOG.items():
            M = burnside_mackey(G)
            rep = check_mackey_axioms(M)
            assert rep.ok, f"{name}: {rep.failures()[:1]}"
            n = len(subgroup_classes(G))
            grid = {(h, k): transitive_spans(G, h, k) for h in range(n) for k in range(n)}
            mats = {key: [span_matrix(M, s) for s in spans] for key, spans in grid.items()}
            for h, k in itertools.product(range(n), repeat=2):
                eye = np.eye(M.ranks[h], dtype=np.int64)
                for j in range(M.ranks[h]):
                    x = tuple(eye[j])
                    assert span_act(M, empty_span(G, h, k), x).vector == (0,) * M.ranks[k]
                    assert span_act(M, unit_span(G, h), x).vector == x
            for h, l, k in itertools.product(range(n), repeat=3):
                for a, ma in zip(grid[(h, l)], mats[(h, l)]):
                    for b, mb in zip(grid[(l, k)], mats[(l, k)]):
                        assert np.array_equal(span_matrix(M, compose_spans(a, b)), mb @ ma)
                        spans_checked += 1
        return f"{len(CATALOG)} groups pass, {spans_checked} composable span pairs"

    criterion(capsys, "Mackey layer", 30, body)


# ------------------------------------------------------------ splitting


def _orbit_sums(G, limit):
    reps = subgroup_classes(G).representatives
    sizes = [G.order // R.order for R in reps]
    out = [empty_gset(G)]
    for r in range(1, limit + 1):
        for combo in itertools.combinations_with_replacement(range(len(reps)), r):
            if sum(sizes[i] for i in combo) <= limit:
                out.append(from_orbit_types(G, [reps[i] for i in combo]))
    return out


def test_splitting(capsys):
    def body():
        n = 0
        for name in SMALL:
            G = CATALOG[name]
            for X in _orbit_sums(G, 6):
                rep = tom_dieck_check(X)
                assert rep.ok, f"{name}, |X|={X.size}: {rep.to_json()}"
                assert all(c.bijection is not None for c in rep.classes)
                n += 1
            A = a_g_pi0(point(G)).mackey
            B = burnside_mackey(G)
            for store in ("res", "tr", "conj"):
                a, b = getattr(A, store), getattr(B, store)
                assert a.keys() == b.keys() and all(np.array_equal(a[k], b[k]) for k in b)
        return f"{n} G-sets over {len(SMALL)} groups; a_pi0(pt) equals the Burnside functor"

    criterion(capsys, "tom Dieck splitting", 60, body)


# ------------------------------------------------------------ fixed-point formula


def _brute_induced_fixed(K, L, Y, H):
    """Fixed points of ``K x_L Y`` from the explicit quotient of ``K x Y``."""
    G = K.parent
    Ls = L.elements
    cls = {}
    for k in K.elements:
        for y in Y.points:
            if (k, y) in cls:
                continue
            label = len(set(cls.values()))
            for l in Ls:
                cls[(G.mult[k][l], Y.act[L.to_local(G.inverse[l])][y])] = label
    fixed = 0
    for label in set(cls.values()):
        k, y = next(p for p, v in cls.items() if v == label)
        if all(cls[(G.mult[h][k], y)] == label for h in H.elements):
            fixed += 1
    return fixed


def _small_lsets(L, limit):
    Lg = L.as_group
    reps = subgroup_classes(Lg).representatives
    sizes = [Lg.order // R.order for R in reps]
    out = []
    for r in range(1, limit + 1):
        for combo in itertools.combinations_with_replacement(range(len(reps)), r):
            if sum(sizes[i] for i in combo) <= limit:
                out.append(from_orbit_types(Lg, [reps[i] for i in combo]))
    return out


def test_fixed_point_formula(capsys):
    def body():
        n = 0
        for name in ("S3", "D4"):
            G = CATALOG[name]
            subs = subgroup_classes(G).all_subgroups
            for K in subs:
                for L in (s for s in subs if s <= K):
                    for Y in _small_lsets(L, 4):
                        ind = induce(K, L, Y)
                        for H in (s for s in subs if s <= K):
                            rep = ind.check_fixed_point_formula(H)
                            assert rep.ok, f"{name}: K={K.elements} L={L.elements} H={H.elements}"
                            assert rep.direct == _brute_induced_fixed(K, L, Y, H)
                            n += 1
        return f"{n} (K, L, Y, H) cases"

    criterion(capsys, "fixed-point formula for induction", 30, body)


# ------------------------------------------------------------ fault injection


def _mackey_faults():
    caught = total = 0
    # restriction entries are left alone: some perturbations of them (e.g. the
    # C2 restriction [2, 1] -> [2, 2]) still satisfy every axiom
    for name in SMALL:
        M = burnside_mackey(CATALOG[name])
        for kind in ("tr", "conj"):
            store = getattr(M, kind)
            for key in sorted(store):
                mat = store[key]
                for i, j in itertools.product(range(mat.shape[0]), range(mat.shape[1])):
                    rep = check_mackey_axioms(perturbed(M, kind, key, i, j, 1))
                    total += 1
                    if not rep.ok and all(f.witness for f in rep.failures()):
                        caught += 1
    return caught, total


def _square_faults():
    caught = total = 0
    for name in ("C2", "S3"):
        G = CATALOG[name]
        reps = subgroup_classes(G).representatives
        orbs = [orbit(G, R) for R in reps]
        C = ret_sets_category(point(G), 2)
        for a, b in itertools.product(range(len(reps)), repeat=2):
            fam = [F for F in bounded_family(C, orbs[a]) if F.objs[0]]
            for f in homs(orbs[a], orbs[b]):
                pb = pullback(f, f)
                A2 = coproduct(pb.gset, pb.gset)
                bad = Square(coproduct_map([pb.left, pb.left], A2), coproduct_map([pb.right, pb.right], A2), f, f)
                total += 1
                if bad.is_pullback():
                    continue
                results = [beck_chevalley(bad, F) for F in fam]
                located = [
                    c for r in results for c, m in enumerate(r.map) if not C.is_iso(m)
                ]
                if results and not any(r.is_iso for r in results) and located:
                    caught += 1
    return caught, total


def _cocycle_faults():
    caught = total = 0
    for name in ("C2", "C3", "S3"):
        G = CATALOG[name]
        C = ret_sets_category(point(G), 2)
        for H in subgroup_classes(G).representatives:
            if H.order == 1:
                continue
            for obj in homotopy_fixed_points(C, H).objects():
                if not obj.carrier:
                    continue
                for i, g in enumerate(H.elements):
                    if g == 0:
                        continue
                    target = C.act_obj(g, obj.carrier)
                    wrong = [RetMor(obj.carrier, target, (-1,) * len(obj.carrier))]
                    if H.order > 2:
                        wrong += [m for m in C.isos(obj.carrier, target) if m != obj.cocycle[i]]
                    for m in wrong:
                        cocycle = obj.cocycle[:i] + (m,) + obj.cocycle[i + 1:]
                        witness = EquivObject(C, H, obj.carrier, cocycle).check()
                        total += 1
                        if witness is not None and witness[0] in H.elements:
                            caught += 1
    return caught, total


def test_fault_injection(capsys):
    def body():
        parts = {
            "perturbed Mackey data": _mackey_faults(),
            "non-pullback squares": _square_faults(),
            "broken cocycles": _cocycle_faults(),
        }
        for label, (caught, total) in parts.items():
            assert total > 0 and caught == total, f"{label}: {total - caught} false passes of {total}"
        return ", ".join(f"{label} {c}/{t}" for label, (c, t) in parts.items())

    criterion(capsys, "fault injection", 60, body)
