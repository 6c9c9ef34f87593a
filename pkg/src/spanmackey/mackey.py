"""Mackey functors as integer matrices over the subgroup-class lattice.

Values are stored at the class representatives ``R``.  The value at an
arbitrary subgroup ``J`` is identified with the value at its representative
through conjugation by ``x_J``, the minimal element with ``x_J J x_J^-1 = R``.
Stored data per class ``c`` with representative ``R``:

* ``res[(c, J)]``: ``M(R) -> M(J)`` for every subgroup ``J <= R``;
* ``tr[(c, J)]``: ``M(J) -> M(R)`` for every subgroup ``J <= R``;
* ``conj[(c, n)]``: ``M(R) -> M(R)`` for every ``n`` in ``N_G(R)``.

Maps between arbitrary subgroups are derived from these by conjugation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .errors import DimensionMismatch, SchemaError
from .groups import FiniteGroup, Subgroup, lift_subgroup, subgroup_classes
from .gsets import GSet, decompose, induce, orbit, restrict, standard_orbit
from .spans import RetractiveSpan, Span


@dataclass(frozen=True, eq=False)
class MackeyFunctor:
    group: FiniteGroup
    ranks: tuple
    labels: tuple
    res: dict = field(repr=False)
    tr: dict = field(repr=False)
    conj: dict = field(repr=False)

    def __repr__(self):
        return f"MackeyFunctor({self.group.name}, ranks={list(self.ranks)})"

    @property
    def classification(self):
        return subgroup_classes(self.group)

    def rank(self, J: Subgroup) -> int:
        return self.ranks[self.classification.class_index(J)]

    # -- maps between arbitrary subgroups, in representative coordinates --

    def conj_map(self, g: int, J: Subgroup) -> np.ndarray:
        """``c_g: M(J) -> M(gJg^-1)``."""
        G = self.group
        sc = self.classification
        gJ = J.conjugate(g)
        n = G.mult[G.mult[sc.conjugator(gJ)][g]][G.inverse[sc.conjugator(J)]]
        return self.conj[(sc.class_index(J), n)]

    def res_map(self, H: Subgroup, J: Subgroup) -> np.ndarray:
        """``res^H_J: M(H) -> M(J)`` for ``J <= H``."""
        sc = self.classification
        x = sc.conjugator(H)
        Jr = J.conjugate(x)
        back = self.conj_map(self.group.inverse[x], Jr)
        return back @ self.res[(sc.class_index(H), Jr.elements)]

    def tr_map(self, J: Subgroup, H: Subgroup) -> np.ndarray:
        """``tr^H_J: M(J) -> M(H)`` for ``J <= H``."""
        sc = self.classification
        x = sc.conjugator(H)
        return self.tr[(sc.class_index(H), J.conjugate(x).elements)] @ self.conj_map(x, J)

    def to_json(self) -> dict:
        sc = self.classification
        return {
            "group": self.group.to_json(),
            "classes": [
                {"label": sc[i].label, "rank": r, "basis_labels": list(self.labels[i])}
                for i, r in enumerate(self.ranks)
            ],
            "res": [
                {"class": c, "subgroup": list(J), "matrix": m.tolist()}
                for (c, J), m in sorted(self.res.items())
            ],
            "tr": [
                {"class": c, "subgroup": list(J), "matrix": m.tolist()}
                for (c, J), m in sorted(self.tr.items())
            ],
            "conj": [
                {"class": c, "element": n, "matrix": m.tolist()}
                for (c, n), m in sorted(self.conj.items())
            ],
        }


def mackey_from_json(G: FiniteGroup, data: dict) -> MackeyFunctor:
    """Parse the JSON layout produced by :meth:`MackeyFunctor.to_json`."""
    try:
        classes = data["classes"]
        ranks = tuple(int(c["rank"]) for c in classes)
        labels = tuple(tuple(c.get("basis_labels", [str(i) for i in range(c["rank"])])) for c in classes)

        def load(entries, key):
            out = {}
            for e in entries:
                k = tuple(e[key]) if key == "subgroup" else int(e[key])
                m = np.array(e["matrix"], dtype=np.int64)
                out[(int(e["class"]), k)] = m
            return out

        M = MackeyFunctor(G, ranks, labels, load(data["res"], "subgroup"),
                          load(data["tr"], "subgroup"), load(data["conj"], "element"))
    except (KeyError, TypeError, ValueError) as exc:
        raise SchemaError(f"malformed Mackey functor: {exc!r}") from None
    _check_shapes(M)
    return M


def _check_shapes(M: MackeyFunctor) -> None:
    sc = M.classification
    if len(M.ranks) != len(sc):
        raise SchemaError(f"expected {len(sc)} classes, got {len(M.ranks)}")
    for c, cls in enumerate(sc):
        R = cls.representative
        for J in _subgroups_of(M.group, R):
            rj = M.ranks[sc.class_index(J)]
            for name, table, shape in (("res", M.res, (rj, M.ranks[c])), ("tr", M.tr, (M.ranks[c], rj))):
                m = table.get((c, J.elements))
                if m is None:
                    raise SchemaError(f"missing {name} for class {c}, subgroup {list(J.elements)}")
                if m.reshape(shape).shape != shape:
                    raise SchemaError(f"{name} for class {c} has the wrong shape")
        for n in cls.normalizer.elements:
            m = M.conj.get((c, n))
            if m is None or m.size != M.ranks[c] ** 2:
                raise SchemaError(f"missing or malformed conj for class {c}, element {n}")


def _subgroups_of(G: FiniteGroup, R: Subgroup) -> list:
    return [J for J in subgroup_classes(G).all_subgroups if J <= R]


def build_mackey(
    G: FiniteGroup,
    basis: Callable[[Subgroup], Sequence[str]],
    res: Callable[[Subgroup, Subgroup], Sequence[Sequence[int]]],
    tr: Callable[[Subgroup, Subgroup], Sequence[Sequence[int]]],
    conj: Callable[[Subgroup, int], Sequence[Sequence[int]]],
) -> MackeyFunctor:
    """Assemble stored matrices from callbacks evaluated at representatives.

    ``res(R, J)`` returns the ``rank(J) x rank(R)`` matrix and ``tr(J, R)`` the
    ``rank(R) x rank(J)`` matrix, both in representative coordinates.
    """
    sc = subgroup_classes(G)
    labels = tuple(tuple(basis(c.representative)) for c in sc)
    ranks = tuple(len(b) for b in labels)
    rdata, tdata, cdata = {}, {}, {}
    for c, cls in enumerate(sc):
        R = cls.representative
        for J in _subgroups_of(G, R):
            rj = ranks[sc.class_index(J)]
            rdata[(c, J.elements)] = np.array(res(R, J), dtype=np.int64).reshape(rj, ranks[c])
            tdata[(c, J.elements)] = np.array(tr(J, R), dtype=np.int64).reshape(ranks[c], rj)
        for n in cls.normalizer.elements:
            cdata[(c, n)] = np.array(conj(R, n), dtype=np.int64).reshape(ranks[c], ranks[c])
    return MackeyFunctor(G, ranks, labels, rdata, tdata, cdata)


def _columns_to_matrix(cols: Sequence[Sequence[int]], nrows: int) -> list:
    return [[col[i] for col in cols] for i in range(nrows)]


# ------------------------------------------------------------ Burnside


def _local_class(R: Subgroup, B: Subgroup) -> int:
    """Class index of ``B <= R`` (ambient) in the classification of ``R``."""
    return subgroup_classes(R.as_group).class_index(R.local(B))


def _orbit_class_vector(R: Subgroup, S: GSet) -> list:
    """Coordinates of the R-set ``S`` (over ``R.as_group``) in the orbit basis of ``A(R)``."""
    v = [0] * len(subgroup_classes(R.as_group))
    for o in decompose(S):
        v[_local_class(R, lift_subgroup(o.stabilizer))] += 1
    return v


def _burnside_basis(R: Subgroup) -> list:
    return [lift_subgroup(c.representative) for c in subgroup_classes(R.as_group)]


def burnside_mackey(G: FiniteGroup) -> MackeyFunctor:
    """The Burnside Mackey functor ``H -> A(H)`` in orbit bases."""
    sc = subgroup_classes(G)

    def rep_of(J):
        return sc[sc.class_index(J)].representative

    def labels(R):
        return [f"{sc[sc.class_index(R)].label}/{c.label}" for c in subgroup_classes(R.as_group)]

    def res(R, J):
        x = sc.conjugator(J)
        RJ = rep_of(J)
        cols = []
        for B in _burnside_basis(R):
            X = orbit(R.as_group, R.local(B))
            v = [0] * len(subgroup_classes(RJ.as_group))
            for o in decompose(restrict(X, J)):
                stab = lift_subgroup(o.stabilizer).conjugate(x)
                v[_local_class(RJ, stab)] += 1
            cols.append(v)
        return _columns_to_matrix(cols, len(subgroup_classes(RJ.as_group)))

    def tr(J, R):
        x = sc.conjugator(J)
        xinv = G.inverse[x]
        RJ = rep_of(J)
        cols = []
        for B in _burnside_basis(RJ):
            BJ = B.conjugate(xinv)
            Y = orbit(J.as_group, J.local(BJ))
            cols.append(_orbit_class_vector(R, induce(R, J, Y).gset))
        return _columns_to_matrix(cols, len(subgroup_classes(R.as_group)))

    def conj(R, n):
        cols = []
        k = len(subgroup_classes(R.as_group))
        for B in _burnside_basis(R):
            v = [0] * k
            v[_local_class(R, B.conjugate(n))] = 1
            cols.append(v)
        return _columns_to_matrix(cols, k)

    return build_mackey(G, labels, res, tr, conj)


def fixed_point_mackey(X: GSet) -> MackeyFunctor:
    """Fixed-point functor of the permutation module ``Z[X]``.

    ``M(H) = Z[X]^H`` with basis the H-orbit sums; restriction is inclusion,
    transfer is the relative norm ``sum_{h in H/J} h``, conjugation translates.
    """
    G = X.group
    sc = subgroup_classes(G)

    def orbits(R):
        return [frozenset(o.points) for o in decompose(restrict(X, R))]

    def labels(R):
        return [f"sum{sorted(o)}" for o in orbits(R)]

    def res(R, J):
        x = sc.conjugator(J)
        RJ = sc[sc.class_index(J)].representative
        target = orbits(RJ)
        cols = []
        for O in orbits(R):
            v = [0] * len(target)
            for P in orbits(J):
                if P <= O:
                    v[target.index(frozenset(X.act[x][p] for p in P))] += 1
            cols.append(v)
        return _columns_to_matrix(cols, len(target))

    def tr(J, R):
        xinv = G.inverse[sc.conjugator(J)]
        RJ = sc[sc.class_index(J)].representative
        target = orbits(R)
        cols = []
        for P0 in orbits(RJ):
            P = frozenset(X.act[xinv][p] for p in P0)
            O = next(o for o in target if P <= o)
            coeff, rem = divmod((R.order // J.order) * len(P), len(O))
            assert rem == 0
            v = [0] * len(target)
            v[target.index(O)] = coeff
            cols.append(v)
        return _columns_to_matrix(cols, len(target))

    def conj(R, n):
        basis = orbits(R)
        cols = []
        for O in basis:
            v = [0] * len(basis)
            v[basis.index(frozenset(X.act[n][p] for p in O))] = 1
            cols.append(v)
        return _columns_to_matrix(cols, len(basis))

    return build_mackey(G, labels, res, tr, conj)


def perturbed(M: MackeyFunctor, kind: str, key, i: int = 0, j: int = 0, delta: int = 1) -> MackeyFunctor:
    """Copy of ``M`` with one matrix entry shifted by ``delta`` (fault injection)."""
    tables = {"res": dict(M.res), "tr": dict(M.tr), "conj": dict(M.conj)}
    m = tables[kind][key].copy()
    m[i, j] += delta
    tables[kind][key] = m
    return MackeyFunctor(M.group, M.ranks, M.labels, tables["res"], tables["tr"], tables["conj"])


# ------------------------------------------------------------ axiom check


@dataclass(frozen=True)
class AxiomResult:
    name: str
    ok: bool
    checked: int
    witness: Optional[dict] = None

    def to_json(self) -> dict:
        return {"axiom": self.name, "ok": self.ok, "checked": self.checked, "witness": self.witness}


@dataclass(frozen=True)
class MackeyReport:
    results: tuple

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def __bool__(self):
        return self.ok

    def failures(self) -> list:
        return [r for r in self.results if not r.ok]

    def to_json(self) -> dict:
        return {"ok": self.ok, "axioms": [r.to_json() for r in self.results]}


def _double_coset_reps(G: FiniteGroup, K: Subgroup, H: Subgroup, J: Subgroup) -> list:
    """Minimal representatives of ``K \\ H / J`` (``K, J <= H``)."""
    seen, reps = set(), []
    for h in H.elements:
        if h in seen:
            continue
        reps.append(h)
        seen.update(G.mult[G.mult[k][h]][j] for k in K.elements for j in J.elements)
    return reps


def check_mackey_axioms(M: MackeyFunctor) -> MackeyReport:
    """Check every Mackey axiom over all subgroups; failures carry a located witness."""
    G = M.group
    subs = subgroup_classes(G).all_subgroups
    results = []

    def sg(H):
        return list(H.elements)

    def run(name, cases):
        n = 0
        for ok, witness in cases:
            n += 1
            if not ok:
                results.append(AxiomResult(name, False, n, witness))
                return
        results.append(AxiomResult(name, True, n))

    def eq(a, b):
        return a.shape == b.shape and np.array_equal(a, b)

    def identities():
        for H in subs:
            I = np.eye(M.rank(H), dtype=np.int64)
            yield eq(M.res_map(H, H), I) and eq(M.tr_map(H, H), I), {"H": sg(H)}

    def inner():
        for H in subs:
            I = np.eye(M.rank(H), dtype=np.int64)
            for h in H.elements:
                yield eq(M.conj_map(h, H), I), {"H": sg(H), "g": h}

    def conj_functorial():
        for H in subs:
            for a in G.elements:
                for b in G.elements:
                    lhs = M.conj_map(G.mult[a][b], H)
                    rhs = M.conj_map(a, H.conjugate(b)) @ M.conj_map(b, H)
                    yield eq(lhs, rhs), {"H": sg(H), "g": a, "h": b}

    def transitive():
        for H in subs:
            for J in subs:
                if not J <= H:
                    continue
                for I in subs:
                    if not I <= J:
                        continue
                    ok = eq(M.res_map(J, I) @ M.res_map(H, J), M.res_map(H, I)) and eq(
                        M.tr_map(J, H) @ M.tr_map(I, J), M.tr_map(I, H)
                    )
                    yield ok, {"H": sg(H), "J": sg(J), "I": sg(I)}

    def equivariant():
        for H in subs:
            for J in subs:
                if not J <= H:
                    continue
                for g in G.elements:
                    gH, gJ = H.conjugate(g), J.conjugate(g)
                    ok = eq(
                        M.conj_map(g, J) @ M.res_map(H, J), M.res_map(gH, gJ) @ M.conj_map(g, H)
                    ) and eq(
                        M.conj_map(g, H) @ M.tr_map(J, H), M.tr_map(gJ, gH) @ M.conj_map(g, J)
                    )
                    yield ok, {"H": sg(H), "J": sg(J), "g": g}

    def double_coset():
        for H in subs:
            inside = [J for J in subs if J <= H]
            for K in inside:
                for J in inside:
                    lhs = M.res_map(H, K) @ M.tr_map(J, H)
                    rhs = np.zeros_like(lhs)
                    for x in _double_coset_reps(G, K, H, J):
                        xJ = J.conjugate(x)
                        KxJ = K.intersection(xJ)
                        low = KxJ.conjugate(G.inverse[x])  # x^-1 K x  meet  J
                        rhs = rhs + M.tr_map(KxJ, K) @ M.conj_map(x, low) @ M.res_map(J, low)
                    if not eq(lhs, rhs):
                        reps = _double_coset_reps(G, K, H, J)
                        yield False, {
                            "H": sg(H), "K": sg(K), "J": sg(J),
                            "double_coset_representatives": reps,
                            "lhs": lhs.tolist(), "rhs": rhs.tolist(),
                        }
                    else:
                        yield True, None

    run("identity", identities())
    run("inner_conjugation_trivial", inner())
    run("conjugation_functorial", conj_functorial())
    run("transitivity", transitive())
    run("conjugation_equivariance", equivariant())
    run("double_coset_formula", double_coset())
    return MackeyReport(tuple(results))


# ------------------------------------------------------------- span action


@dataclass(frozen=True)
class SpanActionResult:
    input_class: int
    output_class: int
    vector: tuple


def span_act(M: MackeyFunctor, span: Union[Span, RetractiveSpan], x: Sequence[int]) -> SpanActionResult:
    """Apply ``q_! p^*`` orbitwise: each orbit contributes ``c tr res c``.

    For an orbit ``G/A`` with ``eA -> aH`` and ``eA -> bK`` the contribution is
    ``c_{b^-1} tr^{bKb^-1}_A res^{aHa^-1}_A c_a``.
    """
    if isinstance(span, RetractiveSpan):
        span = span.span
    G = M.group
    sc = M.classification
    h, k = span.source, span.target
    if len(x) != M.ranks[h]:
        raise DimensionMismatch(f"vector has length {len(x)}, expected {M.ranks[h]}")
    H = sc[h].representative
    K = sc[k].representative
    oh, ok = standard_orbit(G, H), standard_orbit(G, K)
    vec = np.array(x, dtype=np.int64)
    out = np.zeros(M.ranks[k], dtype=np.int64)
    for o in decompose(span.middle):
        s = o.representative
        A = o.stabilizer
        a = oh.representatives[span.p.map[s]]
        b = ok.representatives[span.q.map[s]]
        aH, bK = H.conjugate(a), K.conjugate(b)
        step = M.conj_map(a, H) @ vec
        step = M.res_map(aH, A) @ step
        step = M.tr_map(A, bK) @ step
        step = M.conj_map(G.inverse[b], bK) @ step
        out = out + step
    return SpanActionResult(h, k, tuple(int(v) for v in out))


def span_matrix(M: MackeyFunctor, span: Union[Span, RetractiveSpan]) -> np.ndarray:
    """Matrix of ``span_act`` in the bases of ``M``."""
    sp = span.span if isinstance(span, RetractiveSpan) else span
    n = M.ranks[sp.source]
    cols = [span_act(M, sp, tuple(int(i == j) for i in range(n))).vector for j in range(n)]
    return np.array(cols, dtype=np.int64).T.reshape(M.ranks[sp.target], n)
