"""Finite left G-sets as action tables.

A G-set on ``{0..size-1}`` stores ``act[g][i] = g.i``.  Standard orbits
``G/H`` number their cosets by minimal representative, ascending; products
and pullbacks enumerate pairs lexicographically and renumber them
consecutively.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import prod
from typing import Iterator, Optional, Sequence

from .errors import NotASubgroupChain, NotEquivariant
from .groups import FiniteGroup, Subgroup, left_cosets, subgroup_classes


@dataclass(frozen=True, eq=False)
class GSet:
    group: FiniteGroup
    size: int
    act: tuple = field(repr=False)

    def __repr__(self):
        return f"GSet({self.group.name or '?'}, size={self.size})"

    def validate(self) -> "GSet":
        G, n = self.group, self.size
        if len(self.act) != G.order or any(len(r) != n for r in self.act):
            raise NotEquivariant("action table has the wrong shape")
        if any(not 0 <= x < n for r in self.act for x in r):
            raise NotEquivariant("action table entry out of range")
        if any(self.act[0][i] != i for i in range(n)):
            raise NotEquivariant("identity does not act trivially")
        for g in G.elements:
            for h in G.elements:
                gh = G.mult[g][h]
                ag, ah, agh = self.act[g], self.act[h], self.act[gh]
                for i in range(n):
                    if ag[ah[i]] != agh[i]:
                        raise NotEquivariant(f"not a left action at g={g}, h={h}, i={i}")
        return self

    def __call__(self, g: int, i: int) -> int:
        return self.act[g][i]

    @property
    def points(self) -> range:
        return range(self.size)

    def stabilizer(self, i: int) -> Subgroup:
        return Subgroup(self.group, tuple(g for g in self.group.elements if self.act[g][i] == i))

    @cached_property
    def decomposition(self) -> "OrbitDecomposition":
        return _decompose(self)

    def identity_map(self) -> "GMap":
        return GMap(self, self, tuple(self.points))

    def to_json(self) -> dict:
        return {"size": self.size, "act": [list(r) for r in self.act]}


def make_gset(group: FiniteGroup, act: Sequence[Sequence[int]]) -> GSet:
    """Build and validate a G-set from ``act[g][i]``."""
    act = tuple(tuple(int(x) for x in row) for row in act)
    size = len(act[0]) if act else 0
    return GSet(group, size, act).validate()


def empty_gset(G: FiniteGroup) -> GSet:
    return GSet(G, 0, tuple(() for _ in G.elements))


def point(G: FiniteGroup) -> GSet:
    return GSet(G, 1, tuple((0,) for _ in G.elements))


@dataclass(frozen=True, eq=False)
class GMap:
    source: GSet
    target: GSet
    map: tuple

    def __repr__(self):
        return f"GMap({list(self.map)})"

    def __call__(self, i: int) -> int:
        return self.map[i]

    def validate(self) -> "GMap":
        S, T = self.source, self.target
        if S.group is not T.group:
            raise NotEquivariant("source and target have different groups")
        if len(self.map) != S.size or any(not 0 <= x < T.size for x in self.map):
            raise NotEquivariant("map table has the wrong shape")
        for g in S.group.elements:
            for i in S.points:
                if self.map[S.act[g][i]] != T.act[g][self.map[i]]:
                    raise NotEquivariant(f"not equivariant at g={g}, i={i}")
        return self

    def then(self, other: "GMap") -> "GMap":
        """``other . self``."""
        return GMap(self.source, other.target, tuple(other.map[x] for x in self.map))

    def is_bijective(self) -> bool:
        return self.source.size == self.target.size and len(set(self.map)) == self.source.size

    def inverse(self) -> "GMap":
        inv = [0] * self.target.size
        for i, x in enumerate(self.map):
            inv[x] = i
        return GMap(self.target, self.source, tuple(inv))

    @cached_property
    def fibers(self) -> tuple:
        out = [[] for _ in range(self.target.size)]
        for i, x in enumerate(self.map):
            out[x].append(i)
        return tuple(tuple(f) for f in out)

    def fiber(self, t: int) -> list:
        return list(self.fibers[t])

    def to_json(self) -> dict:
        return {"map": list(self.map)}


def make_gmap(source: GSet, target: GSet, table: Sequence[int]) -> GMap:
    return GMap(source, target, tuple(int(x) for x in table)).validate()


# ------------------------------------------------------------------ orbits


@dataclass(frozen=True, eq=False)
class StandardOrbit:
    """``G/H`` together with its coset bookkeeping."""

    gset: GSet
    subgroup: Subgroup
    representatives: tuple
    coset_of: tuple = field(repr=False)

    def coset(self, g: int) -> int:
        """Index of the coset ``gH``."""
        return self.coset_of[g]


def standard_orbit(G: FiniteGroup, H: Subgroup) -> StandardOrbit:
    cache = G.__dict__.setdefault("_orbit_cache", {})
    if H.elements in cache:
        return cache[H.elements]
    cosets = left_cosets(G, H)
    reps = tuple(r for r, _ in cosets)
    coset_of = [0] * G.order
    for i, (_, c) in enumerate(cosets):
        for x in c:
            coset_of[x] = i
    act = tuple(tuple(coset_of[G.mult[g][r]] for r in reps) for g in G.elements)
    return cache.setdefault(
        H.elements, StandardOrbit(GSet(G, len(reps), act), H, reps, tuple(coset_of))
    )


def orbit(G: FiniteGroup, H: Subgroup) -> GSet:
    """``G/H`` with cosets numbered by minimal representative."""
    return standard_orbit(G, H).gset


@dataclass(frozen=True, eq=False)
class OrbitInfo:
    points: tuple
    representative: int
    stabilizer: Subgroup
    iso: GMap
    transporter: dict = field(repr=False)

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True, eq=False)
class OrbitDecomposition:
    gset: GSet
    orbits: tuple

    def __len__(self):
        return len(self.orbits)

    def __iter__(self):
        return iter(self.orbits)

    def __getitem__(self, k: int) -> "OrbitInfo":
        return self.orbits[k]

    @cached_property
    def orbit_of(self) -> tuple:
        out = [0] * self.gset.size
        for k, o in enumerate(self.orbits):
            for p in o.points:
                out[p] = k
        return tuple(out)

    def transporter(self, p: int) -> int:
        """Minimal ``g`` with ``g . rep = p`` for the orbit of ``p``."""
        return self.orbits[self.orbit_of[p]].transporter[p]


def _decompose(S: GSet) -> OrbitDecomposition:
    G = S.group
    seen = set()
    orbits = []
    for s in S.points:
        if s in seen:
            continue
        transporter = {}
        for g in G.elements:
            p = S.act[g][s]
            if p not in transporter:
                transporter[p] = g
        pts = tuple(sorted(transporter))
        seen.update(pts)
        stab = S.stabilizer(s)
        so = standard_orbit(G, stab)
        iso = GMap(so.gset, S, tuple(S.act[r][s] for r in so.representatives))
        orbits.append(OrbitInfo(pts, s, stab, iso, transporter))
    return OrbitDecomposition(S, tuple(orbits))


def decompose(S: GSet) -> OrbitDecomposition:
    """Orbits (ordered by minimal point) with stabilizers and isos from ``G/stab``."""
    return S.decomposition


def fixed_points(S: GSet, H: Subgroup) -> list:
    rows = _rows(S, H)
    return [i for i in S.points if all(r[i] == i for r in rows)]


def mark_vector(S: GSet) -> tuple:
    """``|S^H|`` for each subgroup class in canonical order."""
    sc = subgroup_classes(S.group)
    return tuple(len(fixed_points(S, c.representative)) for c in sc)


def orbit_types(S: GSet) -> list:
    """Sorted list of stabilizer class indices, one per orbit."""
    sc = subgroup_classes(S.group)
    return sorted(sc.class_index(o.stabilizer) for o in S.decomposition)


# ----------------------------------------------------------- constructions


def _check_same_group(*sets):
    G = sets[0].group
    if any(s.group is not G for s in sets):
        raise NotEquivariant("G-sets over different groups")
    return G


def product(S: GSet, T: GSet) -> GSet:
    """``S x T``; the pair ``(s, t)`` is point ``s * |T| + t``."""
    G = _check_same_group(S, T)
    n = T.size
    act = tuple(
        tuple(S.act[g][s] * n + T.act[g][t] for s in S.points for t in T.points)
        for g in G.elements
    )
    return GSet(G, S.size * n, act)


def product_projections(S: GSet, T: GSet, P: Optional[GSet] = None):
    P = P or product(S, T)
    n = T.size
    return (
        GMap(P, S, tuple(i // n for i in P.points)),
        GMap(P, T, tuple(i % n for i in P.points)),
    )


def coproduct(*sets: GSet) -> GSet:
    """Disjoint union, left summands first."""
    G = _check_same_group(*sets)
    offsets = list(itertools.accumulate([0] + [s.size for s in sets]))
    act = tuple(
        tuple(off + x for off, s in zip(offsets, sets) for x in s.act[g])
        for g in G.elements
    )
    return GSet(G, offsets[-1], act)


def coproduct_map(maps: Sequence[GMap], source: Optional[GSet] = None) -> GMap:
    """Copairing of maps with a common target."""
    src = source or coproduct(*[m.source for m in maps])
    return GMap(src, maps[0].target, tuple(x for m in maps for x in m.map))


def coproduct_injections(sets: Sequence[GSet], total: Optional[GSet] = None) -> list:
    total = total or coproduct(*sets)
    out, off = [], 0
    for s in sets:
        out.append(GMap(s, total, tuple(off + i for i in s.points)))
        off += s.size
    return out


@dataclass(frozen=True, eq=False)
class Pullback:
    gset: GSet
    left: GMap
    right: GMap
    pairs: tuple

    def __iter__(self):
        return iter((self.gset, self.left, self.right))


def pullback(f: GMap, g: GMap) -> Pullback:
    """Pullback of ``f: S -> U`` and ``g: T -> U`` on lexicographically ordered pairs."""
    if f.target is not g.target and (
        f.target.size != g.target.size or f.target.act != g.target.act
    ):
        raise NotEquivariant("pullback legs must share their target")
    S, T = f.source, g.source
    G = _check_same_group(S, T)
    fibers = {}
    for t in T.points:
        fibers.setdefault(g.map[t], []).append(t)
    pairs = tuple((s, t) for s in S.points for t in fibers.get(f.map[s], ()))
    index = {p: i for i, p in enumerate(pairs)}
    act = tuple(
        tuple(index[(S.act[x][s], T.act[x][t])] for s, t in pairs) for x in G.elements
    )
    P = GSet(G, len(pairs), act)
    return Pullback(
        P,
        GMap(P, S, tuple(s for s, _ in pairs)),
        GMap(P, T, tuple(t for _, t in pairs)),
        pairs,
    )


def _rows(S: GSet, H: Subgroup) -> list:
    """Action rows of the elements of ``H``.

    ``H`` is either a subgroup of ``S.group`` or, when ``S`` lives over a
    subgroup ``K.as_group``, a subgroup of the ambient group contained in ``K``.
    """
    Gs = S.group
    if H.parent is Gs:
        return [S.act[h] for h in H.elements]
    if Gs.ambient is H.parent:
        pos = {g: i for i, g in enumerate(Gs.embedding)}
        try:
            return [S.act[pos[h]] for h in H.elements]
        except KeyError:
            raise NotASubgroupChain(f"{H} is not contained in the acting group") from None
    raise NotASubgroupChain("subgroup does not belong to the acting group")


def _ambient(H: Subgroup) -> Subgroup:
    G = H.parent
    if G.ambient is None:
        return H
    return Subgroup(G.ambient, tuple(sorted(G.embedding[i] for i in H.elements)))


def restrict(S: GSet, H: Subgroup) -> GSet:
    """Restrict the action to ``H``; the result is a GSet over ``H.as_group``.

    ``H`` may be given locally (a subgroup of ``S.group``) or as a subgroup of
    the ambient group.  The result remembers ``S`` as ``restricted_from``.
    """
    rows = _rows(S, H)
    Ha = _ambient(H)
    Hg = Ha.as_group
    if Hg is S.group:
        return S
    out = GSet(Hg, S.size, tuple(rows))
    object.__setattr__(out, "restricted_from", S)
    return out


def restrict_map(f: GMap, H: Subgroup) -> GMap:
    return GMap(restrict(f.source, H), restrict(f.target, H), f.map)


# -------------------------------------------------------------- induction


@dataclass(frozen=True, eq=False)
class Induced:
    """``K x_L Y`` realized on pairs ``(t_i L, y)`` with ``t_i`` minimal coset reps.

    Point ``(i, y)`` is numbered ``i * |Y| + y``.  ``unit`` is the L-map
    ``Y -> res K x_L Y``, ``y -> (eL, y)``; when a structure map ``Y -> res X``
    was supplied, ``base_map`` is the K-map ``K x_L Y -> X``,
    ``(k, y) -> k.pi(y)``.
    """

    K: Subgroup
    L: Subgroup
    Y: GSet
    gset: GSet
    transversal: tuple
    unit: GMap
    base_map: Optional[GMap] = None

    def point(self, i: int, y: int) -> int:
        return i * self.Y.size + y

    def check_fixed_point_formula(self, H: Subgroup) -> "FixedPointFormulaReport":
        """Compare ``(K x_L Y)^H`` with the coproduct over ``{kL : k^-1 H k <= L}``."""
        G = self.K.parent
        if not H <= self.K:
            raise NotASubgroupChain(f"{H} is not contained in K")
        direct = set(fixed_points(self.gset, H))
        formula = set()
        summands = []
        ok_types = True
        for i, k in enumerate(self.transversal):
            kinv = G.inverse[k]
            conj = H.conjugate(kinv)
            if not conj <= self.L:
                continue
            fixed = fixed_points(self.Y, conj)
            summands.append((k, len(fixed)))
            for y in fixed:
                p = self.point(i, y)
                formula.add(p)
                # orbit type: the K-stabilizer of (kL, y) is k Stab_L(y) k^-1
                expected = _ambient(self.Y.stabilizer(y)).conjugate(k)
                actual = _ambient(self.gset.stabilizer(p))
                if expected != actual:
                    ok_types = False
        return FixedPointFormulaReport(
            H, len(direct), len(formula), direct == formula and ok_types, tuple(summands)
        )


@dataclass(frozen=True)
class FixedPointFormulaReport:
    subgroup: Subgroup
    direct: int
    formula: int
    ok: bool
    summands: tuple

    def __bool__(self):
        return self.ok


def induce(K: Subgroup, L: Subgroup, Y: GSet, structure: Optional[GMap] = None) -> Induced:
    """Induce an L-set ``Y`` (over ``L.as_group``) up to a K-set ``K x_L Y``.

    ``K`` and ``L`` are subgroups of a common ambient group with ``L <= K``.
    ``structure``, if given, is an L-map ``Y -> res_L X`` for a K-set ``X``
    (over ``K.as_group``); the induced K-map to ``X`` is then recorded.
    """
    if K.parent is not L.parent or not L <= K:
        raise NotASubgroupChain(f"{L} is not a subgroup of {K}")
    if Y.group is not L.as_group:
        raise NotASubgroupChain("Y must be a set with an action of L")
    G = K.parent
    transversal = tuple(r for r, _ in left_cosets(G, L, K.elements))
    coset_index = {}
    for i, t in enumerate(transversal):
        for l in L.elements:
            coset_index[G.mult[t][l]] = i
    n = Y.size
    act = []
    for k in K.elements:
        row = []
        for i, t in enumerate(transversal):
            kt = G.mult[k][t]
            j = coset_index[kt]
            l = L.to_local(G.mult[G.inverse[transversal[j]]][kt])
            yrow = Y.act[l]
            row.extend(j * n + yrow[y] for y in range(n))
        act.append(tuple(row))
    ind = GSet(K.as_group, len(transversal) * n, tuple(act))
    unit = GMap(Y, restrict(ind, L), tuple(range(n)))
    base_map = None
    if structure is not None:
        X = structure.target
        base = getattr(X, "restricted_from", X if X.group is K.as_group else None)
        if base is None or base.group is not K.as_group:
            raise NotASubgroupChain("structure map must land in restrict(X, L) for a K-set X")
        base_map = GMap(ind, base, tuple(
            base.act[K.to_local(t)][structure.map[y]] for t in transversal for y in range(n)
        ))
    return Induced(K, L, Y, ind, transversal, unit, base_map)


# ------------------------------------------------------------------- homs


def homs(S: GSet, T: GSet) -> Iterator[GMap]:
    """Enumerate all equivariant maps ``S -> T``."""
    _check_same_group(S, T)
    dec = S.decomposition
    choices = [fixed_points(T, o.stabilizer) for o in dec]
    for pick in itertools.product(*choices):
        table = [0] * S.size
        for o, t in zip(dec, pick):
            for p, g in o.transporter.items():
                table[p] = T.act[g][t]
        yield GMap(S, T, tuple(table))


def count_homs(S: GSet, T: GSet) -> int:
    return prod(len(fixed_points(T, o.stabilizer)) for o in S.decomposition)


def iso_over(f: GMap, h: GMap) -> Optional[GMap]:
    """An isomorphism ``S -> T`` with ``h . iso = f``, or ``None``.

    ``f: S -> Z`` and ``h: T -> Z`` share the base ``Z``.
    """
    S, T = f.source, h.source
    if S.size != T.size:
        return None
    G = S.group
    used = set()
    table = [None] * S.size
    decT = T.decomposition
    for o in S.decomposition:
        s = o.representative
        stab = o.stabilizer
        z = f.map[s]
        found = None
        for k, ot in enumerate(decT):
            if k in used or len(ot) != len(o):
                continue
            for t in ot.points:
                if h.map[t] == z and all(T.act[x][t] == t for x in stab.elements):
                    found = (k, t)
                    break
            if found:
                break
        if found is None:
            return None
        used.add(found[0])
        t = found[1]
        for p, g in o.transporter.items():
            table[p] = T.act[g][t]
    return GMap(S, T, tuple(table))


def iso(S: GSet, T: GSet) -> Optional[GMap]:
    """An equivariant bijection ``S -> T`` or ``None``."""
    G = S.group
    pt = point(G)
    return iso_over(GMap(S, pt, (0,) * S.size), GMap(T, pt, (0,) * T.size))


@dataclass(frozen=True, eq=False)
class MarksAndIso:
    marks_source: tuple
    marks_target: tuple
    iso: Optional[GMap]


def marks_and_iso(S: GSet, T: GSet) -> MarksAndIso:
    """Mark vectors of both sets and an explicit isomorphism when they agree."""
    _check_same_group(S, T)
    ms, mt = mark_vector(S), mark_vector(T)
    found = iso(S, T) if ms == mt else None
    return MarksAndIso(ms, mt, found)


def from_orbit_types(G: FiniteGroup, subgroups: Sequence[Subgroup]) -> GSet:
    """Disjoint union of standard orbits ``G/H`` in the given order."""
    if not subgroups:
        return empty_gset(G)
    return coproduct(*[orbit(G, H) for H in subgroups])
