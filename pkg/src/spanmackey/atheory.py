"""K_0 of retractive H-sets over a finite G-set and its Mackey structure.

A retractive H-set over ``X`` is a finite H-set ``Y`` with an H-map to ``X``
(the complement of ``X`` in the total set).  Its isomorphism classes form a
free commutative monoid on the transitive ones ``H/L -> X``, ``hL -> h.x``
with ``x`` in ``X^L``; two such are isomorphic over ``X`` exactly when the
pairs ``(L, x)`` are related by ``H``-conjugation.  Hence the basis

    (class of L in H, orbit of x in X^L under N_H(L)).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fixpoints import (
    EquivObject,
    OrbitIndexedObject,
    RetSets,
    from_hset,
    to_hset,
    transfer_along,
    restrict_along,
)
from .groups import FiniteGroup, Subgroup, lift_subgroup, subgroup_classes
from .gsets import GMap, GSet, decompose, fixed_points, iso_over, restrict, standard_orbit
from .mackey import MackeyFunctor, build_mackey


@dataclass(frozen=True)
class K0BasisElement:
    """The transitive retractive set ``H/L -> X``, ``hL -> h.x``."""

    local_class: int
    subgroup: Subgroup
    point: int
    label: str


@dataclass(frozen=True, eq=False)
class K0Group:
    """Free abelian group on iso classes of transitive retractive H-sets over ``X``."""

    X: GSet
    subgroup: Subgroup
    basis: tuple

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def labels(self) -> list:
        return [b.label for b in self.basis]

    def realize(self, k: int) -> tuple:
        """The basis element ``k`` as an H-set over ``H.as_group`` with its retraction."""
        b = self.basis[k]
        H = self.subgroup
        so = standard_orbit(H.as_group, H.local(b.subgroup))
        r = tuple(self.X.act[H.elements[t]][b.point] for t in so.representatives)
        return so.gset, r

    def obj(self, category: RetSets, k: int) -> EquivObject:
        Y, r = self.realize(k)
        return from_hset(category, self.subgroup, Y, r)

    def decompose(self, Y: GSet, r) -> list:
        """Coordinates of the retractive H-set ``(Y, r)``; ``Y`` lives over ``H.as_group``."""
        H = self.subgroup
        local = subgroup_classes(H.as_group)
        index = {(b.local_class, b.point): k for k, b in enumerate(self.basis)}
        v = [0] * self.rank
        for o in decompose(Y):
            y = o.representative
            c = local.class_index(o.stabilizer)
            h = local.conjugator(o.stabilizer)
            x = self.X.act[H.elements[h]][r[y]]
            v[index[(c, _orbit_min(self.X, _normalizer_elements(H, local[c].representative), x))]] += 1
        return v

    def decompose_object(self, obj: EquivObject) -> list:
        if obj.subgroup != self.subgroup:
            raise ValueError("object lives over a different subgroup")
        return self.decompose(*to_hset(obj))


def _normalizer_elements(H: Subgroup, L_local: Subgroup) -> list:
    """Ambient elements of ``N_H(L)`` for a local subgroup ``L`` of ``H.as_group``."""
    Hg = H.as_group
    Ls = set(L_local.elements)
    return [
        H.elements[n] for n in Hg.elements
        if all(Hg.conj(n, l) in Ls for l in L_local.elements)
    ]


def _orbit_min(X: GSet, elements, x: int) -> int:
    return min(X.act[n][x] for n in elements)


def k0_basis(X: GSet, H: Subgroup) -> K0Group:
    """Basis of ``K_0`` of retractive H-sets over ``X``.

    Ordered by the local subgroup classes of ``H`` and then by the minimal
    point of each ``N_H(L)``-orbit on ``X^L``.
    """
    local = subgroup_classes(H.as_group)
    basis = []
    for c, cls in enumerate(local):
        L = lift_subgroup(cls.representative)
        N = _normalizer_elements(H, cls.representative)
        seen = set()
        for x in fixed_points(X, L):
            m = _orbit_min(X, N, x)
            if m in seen:
                continue
            seen.add(m)
            basis.append(K0BasisElement(c, L, m, f"{cls.label}@{m}"))
    return K0Group(X, H, tuple(basis))


def direct_rank(X: GSet, H: Subgroup) -> int:
    """Count iso classes of transitive retractive H-sets over ``X`` by brute force.

    Every pair ``(L <= H, x in X^L)`` gives ``H/L -> X``; pairs are merged when
    an isomorphism over ``X`` exists.
    """
    Hg = H.as_group
    XH = restrict(X, H)
    classes = []
    for cls in subgroup_classes(Hg):
        for Lloc in cls.members:
            so = standard_orbit(Hg, Lloc)
            for x in fixed_points(X, lift_subgroup(Lloc)):
                f = GMap(so.gset, XH, tuple(XH.act[t][x] for t in so.representatives))
                if not any(f.source.size == g.source.size and iso_over(f, g) for g in classes):
                    classes.append(f)
    return len(classes)


# ------------------------------------------------------------ Mackey structure


def _orbit_map(G: FiniteGroup, J: Subgroup, R: Subgroup, x: int = 0) -> GMap:
    """``G/J -> G/R``, ``gJ -> g x^-1 R``; needs ``x J x^-1 <= R``."""
    src = standard_orbit(G, J)
    tgt = standard_orbit(G, R)
    xinv = G.inverse[x]
    return GMap(src.gset, tgt.gset, tuple(tgt.coset(G.mult[t][xinv]) for t in src.representatives))


@dataclass(frozen=True, eq=False)
class K0MackeyFunctor:
    """``H -> K_0`` of retractive H-sets over ``X`` with its Mackey structure."""

    X: GSet
    groups: tuple
    mackey: MackeyFunctor

    def value(self, c: int) -> K0Group:
        return self.groups[c]


def a_g_pi0(X: GSet) -> K0MackeyFunctor:
    """Assemble the Mackey functor by applying ``f^*`` and ``f_!`` to basis objects.

    Restriction to ``J <= R`` pulls back along ``G/J -> G/R``; transfer pushes
    forward along it; conjugation pushes forward along ``G/J -> G/xJx^-1``,
    ``gJ -> g x^-1 (xJx^-1)``.
    """
    G = X.group
    sc = subgroup_classes(G)
    bound = max(G.order, 1)
    cat = RetSets(X, bound, max_objects=None)
    groups = {}

    def group_at(R):
        key = R.elements
        if key not in groups:
            groups[key] = k0_basis(X, R)
        return groups[key]

    def rep_of(J):
        return sc[sc.class_index(J)].representative

    def as_orbitwise(R, obj):
        return OrbitIndexedObject(standard_orbit(G, R).gset, (obj,))

    def read(Kgrp, F):
        return Kgrp.decompose_object(F.components[0])

    def labels(R):
        return [f"{sc[sc.class_index(R)].label}/{lab}" for lab in group_at(R).labels]

    def res(R, J):
        A = group_at(R)
        x = sc.conjugator(J)
        RJ = rep_of(J)
        down = _orbit_map(G, J, R)
        twist = _orbit_map(G, J, RJ, x)
        cols = []
        for k in range(A.rank):
            F = restrict_along(down, as_orbitwise(R, A.obj(cat, k)), cat)
            cols.append(read(group_at(RJ), transfer_along(twist, F, cat)))
        return _transpose(cols, group_at(RJ).rank)

    def tr(J, R):
        x = sc.conjugator(J)
        RJ = rep_of(J)
        B = group_at(RJ)
        untwist = _orbit_map(G, RJ, J, G.inverse[x])
        up = _orbit_map(G, J, R)
        cols = []
        for k in range(B.rank):
            F = transfer_along(untwist, as_orbitwise(RJ, B.obj(cat, k)), cat)
            cols.append(read(group_at(R), transfer_along(up, F, cat)))
        return _transpose(cols, group_at(R).rank)

    def conj(R, n):
        A = group_at(R)
        twist = _orbit_map(G, R, R, n)
        cols = [
            read(A, transfer_along(twist, as_orbitwise(R, A.obj(cat, k)), cat))
            for k in range(A.rank)
        ]
        return _transpose(cols, A.rank)

    M = build_mackey(G, labels, res, tr, conj)
    return K0MackeyFunctor(X, tuple(group_at(c.representative) for c in sc), M)


def _transpose(cols, nrows):
    return [[col[i] for col in cols] for i in range(nrows)]


# ------------------------------------------------------------ splitting


def weyl_orbits(X: GSet, H: Subgroup, L: Subgroup) -> list:
    """Orbits of ``W_H L = N_H(L)/L`` on ``X^L`` (as sorted tuples)."""
    G = H.parent
    Ls = set(L.elements)
    N = [h for h in H.elements if all(G.conj(h, l) in Ls for l in L.elements)]
    # one representative per coset nL
    reps, covered = [], set()
    for n in N:
        if n not in covered:
            reps.append(n)
            covered.update(G.mult[n][l] for l in L.elements)
    pts = fixed_points(X, L)
    out, seen = [], set()
    for x in pts:
        if x in seen:
            continue
        orb = tuple(sorted({X.act[w][x] for w in reps}))
        seen.update(orb)
        out.append(orb)
    return out


@dataclass
class TomDieckClass:
    label: str
    rank_direct: int
    rank_splitting: int
    contributions: dict
    bijection: list
    injective: bool = True

    @property
    def ok(self) -> bool:
        return (
            self.injective
            and self.rank_direct == self.rank_splitting
            and len(self.bijection) == self.rank_splitting
        )

    def to_json(self) -> dict:
        return {
            "class": self.label,
            "rank_direct": self.rank_direct,
            "rank_splitting": self.rank_splitting,
            "contributions": self.contributions,
            "bijection": self.bijection,
            "ok": self.ok,
        }


@dataclass
class TomDieckReport:
    group: str
    classes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.classes)

    @property
    def ranks(self) -> tuple:
        return tuple(c.rank_direct for c in self.classes)

    def to_json(self) -> dict:
        return {"group": self.group, "ok": self.ok, "classes": [c.to_json() for c in self.classes]}


def tom_dieck_check(X: GSet) -> TomDieckReport:
    """Compare ``rank K_0`` with ``sum_{(L) <= H} |X^L / W_H L|`` at every class ``(H)``.

    The left side counts iso classes of transitive retractive H-sets by
    brute force; the right side counts Weyl orbits.  The bijection sends a
    basis element ``(L, x)`` to the Weyl orbit of ``x`` in ``X^L``.
    """
    G = X.group
    report = TomDieckReport(G.name)
    for cls in subgroup_classes(G):
        H = cls.representative
        local = subgroup_classes(H.as_group)
        contributions = {}
        orbit_lists = []
        for lc in local:
            L = lift_subgroup(lc.representative)
            orbs = weyl_orbits(X, H, L)
            contributions[lc.label] = len(orbs)
            orbit_lists.append(orbs)
        K = k0_basis(X, H)
        bijection = []
        for b in K.basis:
            orbs = orbit_lists[b.local_class]
            k = next(i for i, o in enumerate(orbs) if b.point in o)
            bijection.append({
                "basis": b.label,
                "summand": local[b.local_class].label,
                "weyl_orbit": list(orbs[k]),
            })
        targets = {(e["summand"], tuple(e["weyl_orbit"])) for e in bijection}
        report.classes.append(TomDieckClass(
            cls.label, direct_rank(X, H), sum(contributions.values()), contributions,
            bijection, len(targets) == len(bijection),
        ))
    return report
