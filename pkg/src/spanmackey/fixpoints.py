"""Categories with a strict G-action, homotopy fixed points and transfers.

An object of the homotopy fixed points ``C^{hH}`` is a carrier ``C`` with
isomorphisms ``psi_g: C -> gC`` for ``g`` in ``H`` such that ``psi_e = id``
and ``psi_{gh} = (g psi_h) psi_g``.

Objects of ``Cat(S x EG, C)^G`` for a G-set ``S`` are handled in two
equivalent forms.  The *pointwise* form stores ``F_s = F(s, 1)`` for every
point and the structure isomorphisms ``phi[s][g] = F((s,1) -> (s,g))``, a map
``F_s -> g F_{g^-1 s}``.  The *orbit-indexed* form keeps only one
:class:`EquivObject` over the stabilizer of each orbit representative.
Restriction ``f^*`` and transfer ``f_!`` are evaluated pointwise by their
defining formulas and may be compressed back to orbit-indexed form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional, Sequence

from .errors import (
    IncoherentPseudoData,
    LegMismatch,
    MissingCoproducts,
    NotCommuting,
    NotEquivariant,
    OversizeCategory,
)
from .groups import FiniteGroup, Subgroup
from .gsets import GMap, GSet, fixed_points, induce, iso_over, pullback, restrict

#: Default cap on the number of objects of an enumerated category.
MAX_OBJECTS = 64


# ===================================================================
# categories with strict G-action
# ===================================================================


class GCategory:
    """A finite category with a strict left action of ``group``.

    Subclasses provide objects, hom-sets, composition ``compose(g, f) = g.f``
    and the action on objects and morphisms.  Categories with designated
    coproducts set ``has_coproducts`` and implement :meth:`zero`,
    :meth:`sum`, :meth:`injection`, :meth:`copair` and
    :meth:`sum_action_iso`.
    """

    group: FiniteGroup
    has_coproducts = False

    def objects(self) -> list:
        raise NotImplementedError

    def hom(self, a, b) -> list:
        raise NotImplementedError

    def identity(self, a):
        raise NotImplementedError

    def compose(self, g, f):
        raise NotImplementedError

    def source(self, f):
        raise NotImplementedError

    def target(self, f):
        raise NotImplementedError

    def act_obj(self, g: int, a):
        raise NotImplementedError

    def act_mor(self, g: int, f):
        raise NotImplementedError

    def is_iso(self, f) -> bool:
        return self.inverse(f) is not None

    def inverse(self, f):
        a, b = self.source(f), self.target(f)
        ida, idb = self.identity(a), self.identity(b)
        for g in self.hom(b, a):
            if self.compose(g, f) == ida and self.compose(f, g) == idb:
                return g
        return None

    def isos(self, a, b) -> list:
        return [f for f in self.hom(a, b) if self.is_iso(f)]

    def compose_all(self, *maps):
        """``compose_all(h, g, f) = h.g.f``."""
        out = maps[-1]
        for m in reversed(maps[:-1]):
            out = self.compose(m, out)
        return out

    # -- coproducts -------------------------------------------------------

    def zero(self):
        raise MissingCoproducts(f"{type(self).__name__} has no designated zero object")

    def sum(self, objs: Sequence):
        raise MissingCoproducts(f"{type(self).__name__} has no designated coproducts")

    def injection(self, objs: Sequence, k: int):
        raise MissingCoproducts(f"{type(self).__name__} has no designated coproducts")

    def copair(self, objs: Sequence, maps: Sequence, target):
        raise MissingCoproducts(f"{type(self).__name__} has no designated coproducts")

    def sum_action_iso(self, g: int, objs: Sequence):
        """Canonical iso ``g(+objs) -> +(g objs)``."""
        raise MissingCoproducts(f"{type(self).__name__} has no designated coproducts")

    def sum_map(self, maps: Sequence):
        """``+maps: +sources -> +targets``."""
        srcs = [self.source(m) for m in maps]
        tgts = [self.target(m) for m in maps]
        total = self.sum(tgts)
        return self.copair(
            srcs, [self.compose(self.injection(tgts, k), m) for k, m in enumerate(maps)], total
        )

    def reorder(self, objs: Sequence, perm: Sequence[int]):
        """Iso ``+objs -> +(objs[perm[0]], objs[perm[1]], ...)``."""
        new = [objs[i] for i in perm]
        pos = {i: k for k, i in enumerate(perm)}
        total = self.sum(new)
        return self.copair(objs, [self.injection(new, pos[i]) for i in range(len(objs))], total)

    # -- equivariant structure ------------------------------------------

    def equivariant_homs(self, a: "EquivObject", b: "EquivObject") -> list:
        """Morphisms ``alpha`` with ``psi'_g alpha = (g alpha) psi_g`` for all ``g``."""
        gens = a.subgroup_generators()
        out = []
        for f in self.hom(a.carrier, b.carrier):
            if all(
                self.compose(b.psi(g), f) == self.compose(self.act_mor(g, f), a.psi(g))
                for g in gens
            ):
                out.append(f)
        return out

    def check_action(self) -> None:
        """Validate that the action is strict and functorial on all objects."""
        G = self.group
        objs = self.objects()
        for a in objs:
            if self.act_obj(0, a) != a:
                raise NotEquivariant(f"identity acts nontrivially on {a}")
            for g in G.elements:
                for h in G.elements:
                    if self.act_obj(g, self.act_obj(h, a)) != self.act_obj(G.mult[g][h], a):
                        raise NotEquivariant(f"action not strict at {g}, {h} on {a}")
        for a in objs:
            for b in objs:
                for f in self.hom(a, b):
                    for g in G.elements:
                        for h in G.elements:
                            if self.act_mor(g, self.act_mor(h, f)) != self.act_mor(G.mult[g][h], f):
                                raise NotEquivariant(f"action on morphisms not strict at {g}, {h}")


# ------------------------------------------------------------ table form


@dataclass(frozen=True, eq=False)
class FiniteCategory:
    """A finite category given by tables.

    ``morphisms[i] = (source, target)``; ``identities[a]`` is the identity
    morphism index of object ``a``; ``composition[(f, g)]`` is ``g.f`` for
    composable ``f: a -> b``, ``g: b -> c``.
    """

    objects: tuple
    morphisms: tuple
    identities: tuple
    composition: dict = field(repr=False)

    def validate(self) -> "FiniteCategory":
        mor = self.morphisms
        for a, i in enumerate(self.identities):
            if mor[i] != (a, a):
                raise NotEquivariant(f"identity of {a} has the wrong endpoints")
        for f, (a, b) in enumerate(mor):
            for g, (b2, c) in enumerate(mor):
                if b2 != b:
                    continue
                gf = self.composition.get((f, g))
                if gf is None or mor[gf] != (a, c):
                    raise NotEquivariant(f"composition of {f} then {g} missing or misplaced")
            if self.composition[(self.identities[a], f)] != f or self.composition[(f, self.identities[b])] != f:
                raise NotEquivariant(f"unit law fails at morphism {f}")
        for f, (a, b) in enumerate(mor):
            for g, (b2, c) in enumerate(mor):
                if b2 != b:
                    continue
                for h, (c2, d) in enumerate(mor):
                    if c2 != c:
                        continue
                    comp = self.composition
                    if comp[(comp[(f, g)], h)] != comp[(f, comp[(g, h)])]:
                        raise NotEquivariant(f"associativity fails at ({f}, {g}, {h})")
        return self


class TableGCategory(GCategory):
    """A :class:`FiniteCategory` with action tables ``obj_maps[g]``, ``mor_maps[g]``."""

    def __init__(self, group: FiniteGroup, category: FiniteCategory, obj_maps, mor_maps):
        self.group = group
        self.category = category
        self.obj_maps = tuple(tuple(r) for r in obj_maps)
        self.mor_maps = tuple(tuple(r) for r in mor_maps)
        self._homs = {}
        for f, (a, b) in enumerate(category.morphisms):
            self._homs.setdefault((a, b), []).append(f)

    @classmethod
    def trivial_action(cls, group: FiniteGroup, category: FiniteCategory) -> "TableGCategory":
        n, m = len(category.objects), len(category.morphisms)
        return cls(group, category, [range(n)] * group.order, [range(m)] * group.order)

    def validate(self) -> "TableGCategory":
        self.category.validate()
        cat = self.category
        for g in self.group.elements:
            om, mm = self.obj_maps[g], self.mor_maps[g]
            for f, (a, b) in enumerate(cat.morphisms):
                if cat.morphisms[mm[f]] != (om[a], om[b]):
                    raise NotEquivariant(f"action of {g} is not a functor at morphism {f}")
            for a, i in enumerate(cat.identities):
                if mm[i] != cat.identities[om[a]]:
                    raise NotEquivariant(f"action of {g} does not preserve identities")
            for (f, h), fh in cat.composition.items():
                if cat.composition[(mm[f], mm[h])] != mm[fh]:
                    raise NotEquivariant(f"action of {g} does not preserve composition")
        self.check_action()
        return self

    def objects(self):
        return list(range(len(self.category.objects)))

    def hom(self, a, b):
        return list(self._homs.get((a, b), []))

    def identity(self, a):
        return self.category.identities[a]

    def compose(self, g, f):
        return self.category.composition[(f, g)]

    def source(self, f):
        return self.category.morphisms[f][0]

    def target(self, f):
        return self.category.morphisms[f][1]

    def act_obj(self, g, a):
        return self.obj_maps[g][a]

    def act_mor(self, g, f):
        return self.mor_maps[g][f]


def one_object_category(automorphisms: FiniteGroup) -> FiniteCategory:
    """One-object category whose morphisms are the elements of ``automorphisms``."""
    n = automorphisms.order
    comp = {(f, g): automorphisms.mult[g][f] for f in range(n) for g in range(n)}
    return FiniteCategory((0,), tuple((0, 0) for _ in range(n)), (0,), comp)


# ===================================================================
# retractive finite sets over a G-set X
# ===================================================================


class RetMor(NamedTuple):
    """Map of retractive sets over ``X`` on complements.

    ``phi[c]`` is the image of complement point ``c``: a complement point of
    the target, or ``-1`` for the base point ``r(c)`` of ``X``.
    """

    source: tuple
    target: tuple
    phi: tuple


class RetSets(GCategory):
    """Retractive finite sets ``X -> Y -> X`` with ``|Y - X| <= bound``.

    An object is stored as its complement ``{0..m-1}`` together with the
    retraction ``r`` (a tuple of points of ``X``); the inclusion of ``X`` is
    the canonical one.  ``g`` acts by ``r -> g.r`` (pre-composing the
    inclusion with ``g^-1`` and post-composing the retraction with ``g``,
    then relabelling ``X`` along ``g``), and trivially on complement maps.
    Sums concatenate complements left to right.  With ``max_objects=None``
    the object count is not capped; only :meth:`objects` then grows large.
    """

    has_coproducts = True

    def __init__(self, X: GSet, bound: int, max_objects: Optional[int] = MAX_OBJECTS):
        self.X = X
        self.group = X.group
        self.bound = bound
        self.max_objects = max_objects
        count = sum(X.size ** m for m in range(bound + 1))
        if max_objects is not None and count > max_objects:
            raise OversizeCategory(
                f"RetSets with |X|={X.size}, bound {bound} has {count} objects (cap {max_objects})"
            )

    def __repr__(self):
        return f"RetSets(|X|={self.X.size}, bound={self.bound})"

    def objects(self):
        return [r for m in range(self.bound + 1) for r in itertools.product(range(self.X.size), repeat=m)]

    def hom(self, a, b):
        choices = [[-1] + [c2 for c2, x2 in enumerate(b) if x2 == x] for x in a]
        return [RetMor(a, b, phi) for phi in itertools.product(*choices)]

    def identity(self, a):
        return RetMor(a, a, tuple(range(len(a))))

    def compose(self, g, f):
        if f.target != g.source:
            raise NotCommuting(f"cannot compose {f} then {g}")
        gp = g.phi
        return RetMor(f.source, g.target, tuple([gp[x] if x >= 0 else -1 for x in f.phi]))

    def source(self, f):
        return f.source

    def target(self, f):
        return f.target

    def act_obj(self, g, a):
        row = self.X.act[g]
        return tuple(row[x] for x in a)

    def act_mor(self, g, f):
        return RetMor(self.act_obj(g, f.source), self.act_obj(g, f.target), f.phi)

    def is_iso(self, f):
        return len(f.source) == len(f.target) and sorted(f.phi) == list(range(len(f.source)))

    def inverse(self, f):
        if not self.is_iso(f):
            return None
        inv = [0] * len(f.phi)
        for c, x in enumerate(f.phi):
            inv[x] = c
        return RetMor(f.target, f.source, tuple(inv))

    def zero(self):
        return ()

    def sum(self, objs):
        return tuple(x for o in objs for x in o)

    def injection(self, objs, k):
        off = sum(len(o) for o in objs[:k])
        return RetMor(objs[k], self.sum(objs), tuple(range(off, off + len(objs[k]))))

    def copair(self, objs, maps, target):
        for o, m in zip(objs, maps):
            if m.source != o or m.target != target:
                raise NotCommuting("copairing legs do not match")
        return RetMor(self.sum(objs), target, tuple(x for m in maps for x in m.phi))

    def sum_action_iso(self, g, objs):
        return self.identity(self.act_obj(g, self.sum(objs)))

    # -- H-set view ------------------------------------------------------

    def equivariant_homs(self, a, b):
        Ya, ra = to_hset(a)
        Yb, rb = to_hset(b)
        dec = Ya.decomposition
        choices = []
        for o in dec:
            c = o.representative
            fixed = fixed_points(Yb, o.stabilizer)
            choices.append([-1] + [c2 for c2 in fixed if rb[c2] == ra[c]])
        out = []
        for pick in itertools.product(*choices):
            phi = [0] * Ya.size
            for o, t in zip(dec, pick):
                for p, g in o.transporter.items():
                    phi[p] = -1 if t < 0 else Yb.act[g][t]
            out.append(RetMor(a.carrier, b.carrier, tuple(phi)))
        return out


def ret_sets_category(X: GSet, bound: int, max_objects: int = MAX_OBJECTS) -> RetSets:
    return RetSets(X, bound, max_objects)


# ===================================================================
# homotopy fixed points
# ===================================================================


def _generators(H: Subgroup) -> list:
    G = H.parent
    gens, span = [], {0}
    for h in H.elements:
        if h not in span:
            gens.append(h)
            span = set(G.generate(gens).elements)
    return gens


@dataclass(frozen=True, eq=False)
class EquivObject:
    """``(C, psi)`` in ``C^{hH}``; ``cocycle[i]`` is ``psi`` of ``H.elements[i]``."""

    category: GCategory = field(repr=False)
    subgroup: Subgroup
    carrier: object
    cocycle: tuple

    def __eq__(self, other):
        return (
            isinstance(other, EquivObject)
            and self.subgroup == other.subgroup
            and self.carrier == other.carrier
            and self.cocycle == other.cocycle
        )

    def __hash__(self):
        return hash((self.subgroup.elements, self.carrier, self.cocycle))

    def __repr__(self):
        return f"EquivObject({self.carrier!r}, H={list(self.subgroup.elements)})"

    def psi(self, g: int):
        return self.cocycle[self.subgroup.to_local(g)]

    def subgroup_generators(self) -> list:
        return _generators(self.subgroup)

    def check(self) -> Optional[tuple]:
        """Return ``None`` when the cocycle law holds, else a witness ``(g, h)``."""
        C, H = self.category, self.subgroup
        G = H.parent
        if self.psi(0) != C.identity(self.carrier):
            return (0, 0)
        for g in H.elements:
            p = self.psi(g)
            if C.source(p) != self.carrier or C.target(p) != C.act_obj(g, self.carrier) or not C.is_iso(p):
                return (g, None)
        for g in H.elements:
            for h in H.elements:
                lhs = self.psi(G.mult[g][h])
                rhs = C.compose(C.act_mor(g, self.psi(h)), self.psi(g))
                if lhs != rhs:
                    return (g, h)
        return None

    def is_valid(self) -> bool:
        return self.check() is None

    def to_json(self, category_index=None) -> dict:
        if category_index is None:
            return {"carrier": _jsonable(self.carrier), "cocycle": [_jsonable(m) for m in self.cocycle]}
        return {
            "carrier": category_index["objects"][self.carrier],
            "cocycle": [category_index["morphisms"][m] for m in self.cocycle],
        }


def _jsonable(x):
    if isinstance(x, RetMor):
        return {"source": list(x.source), "target": list(x.target), "phi": list(x.phi)}
    if isinstance(x, tuple):
        return list(x)
    return x


def trivial_equiv(category: GCategory, H: Subgroup, carrier) -> EquivObject:
    """``(C, id)``; valid only when ``H`` fixes ``C``."""
    return EquivObject(category, H, carrier, tuple(category.identity(carrier) for _ in H.elements))


def cocycles(category: GCategory, H: Subgroup, carrier) -> list:
    """All cocycles on ``carrier`` over ``H``, as :class:`EquivObject` values."""
    G = H.parent
    gens = _generators(H)
    options = [category.isos(carrier, category.act_obj(s, carrier)) for s in gens]
    out = []
    for pick in itertools.product(*options):
        psi = {0: category.identity(carrier)}
        frontier = [0]
        while frontier:
            new = []
            for g in frontier:
                for s, ps in zip(gens, pick):
                    gs = G.mult[g][s]
                    if gs not in psi:
                        psi[gs] = category.compose(category.act_mor(g, ps), psi[g])
                        new.append(gs)
            frontier = new
        obj = EquivObject(category, H, carrier, tuple(psi[h] for h in H.elements))
        if obj.is_valid():
            out.append(obj)
    return out


class FixedPointCategory:
    """``C^{hH}``: cocycle objects and equivariant morphisms of ``category``."""

    def __init__(self, category: GCategory, H: Subgroup, max_objects: int = MAX_OBJECTS * 4):
        self.base = category
        self.subgroup = H
        objs = []
        for c in category.objects():
            objs.extend(cocycles(category, H, c))
            if len(objs) > max_objects:
                raise OversizeCategory(f"more than {max_objects} homotopy fixed objects")
        self._objects = objs

    def objects(self) -> list:
        return list(self._objects)

    def hom(self, a: EquivObject, b: EquivObject) -> list:
        return self.base.equivariant_homs(a, b)

    def identity(self, a: EquivObject):
        return self.base.identity(a.carrier)

    def compose(self, g, f):
        return self.base.compose(g, f)

    def is_iso(self, f) -> bool:
        return self.base.is_iso(f)

    def is_equivariant(self, f, a: EquivObject, b: EquivObject) -> bool:
        C = self.base
        return all(
            C.compose(b.psi(g), f) == C.compose(C.act_mor(g, f), a.psi(g))
            for g in self.subgroup.elements
        )

    # -- zero object and sums (rectified from the base category) --------

    def zero(self) -> EquivObject:
        return rectify_pseudo(zero_pseudo_functor(self.base), self.subgroup).on_object(
            EquivObject(POINT, self.subgroup, 0, tuple(0 for _ in self.subgroup.elements))
        )

    def sum(self, a: EquivObject, b: EquivObject) -> EquivObject:
        theta = sum_pseudo_functor(self.base)
        pair = EquivObject(
            theta.source, self.subgroup, (a.carrier, b.carrier), tuple(zip(a.cocycle, b.cocycle))
        )
        return rectify_pseudo(theta, self.subgroup).on_object(pair)

    def iso_classes(self) -> list:
        """Partition of the objects into isomorphism classes (lists of objects)."""
        classes = []
        for a in self._objects:
            for cls in classes:
                b = cls[0]
                if any(self.is_iso(f) for f in self.hom(a, b)):
                    cls.append(a)
                    break
            else:
                classes.append([a])
        return classes


def homotopy_fixed_points(category: GCategory, H: Subgroup, max_objects: int = MAX_OBJECTS * 4) -> FixedPointCategory:
    if H.parent is not category.group:
        raise NotEquivariant("subgroup must belong to the acting group")
    return FixedPointCategory(category, H, max_objects)


# ------------------------------------------------------- H-set translation


def to_hset(obj: EquivObject):
    """Complement of a retractive object in ``RetSets^{hH}`` as an H-set.

    ``h.c = sigma_{h^-1}(c)`` where ``sigma_g`` is the permutation of
    ``psi_g``; returns ``(GSet over H.as_group, retraction)``.
    """
    H = obj.subgroup
    G = H.parent
    m = len(obj.carrier)
    act = tuple(obj.psi(G.inverse[h]).phi for h in H.elements)
    return GSet(H.as_group, m, act), obj.carrier


def from_hset(category: RetSets, H: Subgroup, Y: GSet, retraction: Sequence[int]) -> EquivObject:
    """Inverse of :func:`to_hset`; ``Y`` is a set with an action of ``H``."""
    G = H.parent
    r = tuple(retraction)
    cocycle = []
    for h in H.elements:
        hinv = H.to_local(G.inverse[h])
        cocycle.append(RetMor(r, category.act_obj(h, r), Y.act[hinv]))
    obj = EquivObject(category, H, r, tuple(cocycle))
    bad = obj.check()
    if bad is not None:
        raise NotEquivariant(f"retraction is not H-equivariant (witness {bad})")
    return obj


# ===================================================================
# pseudo-equivariant functors and rectification
# ===================================================================


class PointCategory(GCategory):
    """The terminal category with trivial action (one object ``0``, one morphism ``0``)."""

    group = None

    def objects(self):
        return [0]

    def hom(self, a, b):
        return [0]

    def identity(self, a):
        return 0

    def compose(self, g, f):
        return 0

    def source(self, f):
        return 0

    def target(self, f):
        return 0

    def act_obj(self, g, a):
        return 0

    def act_mor(self, g, f):
        return 0


POINT = PointCategory()


class ProductGCategory(GCategory):
    """``C x D`` with the diagonal action."""

    def __init__(self, left: GCategory, right: GCategory):
        self.left, self.right = left, right
        self.group = left.group

    def objects(self):
        return [(a, b) for a in self.left.objects() for b in self.right.objects()]

    def hom(self, a, b):
        return [(f, g) for f in self.left.hom(a[0], b[0]) for g in self.right.hom(a[1], b[1])]

    def identity(self, a):
        return (self.left.identity(a[0]), self.right.identity(a[1]))

    def compose(self, g, f):
        return (self.left.compose(g[0], f[0]), self.right.compose(g[1], f[1]))

    def source(self, f):
        return (self.left.source(f[0]), self.right.source(f[1]))

    def target(self, f):
        return (self.left.target(f[0]), self.right.target(f[1]))

    def act_obj(self, g, a):
        return (self.left.act_obj(g, a[0]), self.right.act_obj(g, a[1]))

    def act_mor(self, g, f):
        return (self.left.act_mor(g, f[0]), self.right.act_mor(g, f[1]))

    def is_iso(self, f):
        return self.left.is_iso(f[0]) and self.right.is_iso(f[1])

    def inverse(self, f):
        a, b = self.left.inverse(f[0]), self.right.inverse(f[1])
        return None if a is None or b is None else (a, b)


@dataclass(frozen=True, eq=False)
class PseudoEquivFunctor:
    """``Theta: C -> D`` with ``theta(g, C): Theta(gC) -> g Theta(C)``."""

    source: GCategory
    target: GCategory
    on_objects: Callable
    on_morphisms: Callable
    theta: Callable


@dataclass(frozen=True, eq=False)
class RectifiedFunctor:
    """The induced functor ``C^{hH} -> D^{hH}``."""

    functor: PseudoEquivFunctor
    subgroup: Subgroup

    def on_object(self, obj: EquivObject) -> EquivObject:
        T = self.functor
        D = T.target
        C = obj.carrier
        cocycle = tuple(
            D.compose(T.theta(g, C), T.on_morphisms(obj.psi(g))) for g in self.subgroup.elements
        )
        out = EquivObject(D, self.subgroup, T.on_objects(C), cocycle)
        bad = out.check()
        if bad is not None:
            raise IncoherentPseudoData(f"rectified cocycle fails at {bad}")
        return out

    def on_morphism(self, f):
        return self.functor.on_morphisms(f)


def rectify_pseudo(theta: PseudoEquivFunctor, H: Subgroup) -> RectifiedFunctor:
    return RectifiedFunctor(theta, H)


def check_rectification(rect: RectifiedFunctor, source_fixed: FixedPointCategory) -> dict:
    """Exhaustively check well-definedness and functoriality on a bounded instance."""
    D = rect.functor.target
    objs = source_fixed.objects()
    images = {}
    failures = []
    for a in objs:
        try:
            images[a] = rect.on_object(a)
        except IncoherentPseudoData as exc:
            failures.append({"object": repr(a), "error": str(exc)})
    if failures:
        return {"ok": False, "failures": failures}
    checked = 0
    for a in objs:
        if rect.on_morphism(source_fixed.identity(a)) != D.identity(images[a].carrier):
            failures.append({"identity": repr(a)})
        for b in objs:
            for f in source_fixed.hom(a, b):
                Ff = rect.on_morphism(f)
                checked += 1
                if not all(
                    D.compose(images[b].psi(g), Ff) == D.compose(D.act_mor(g, Ff), images[a].psi(g))
                    for g in rect.subgroup.elements
                ):
                    failures.append({"morphism": repr(f), "reason": "image not equivariant"})
                for c in objs:
                    for h in source_fixed.hom(b, c):
                        if rect.on_morphism(source_fixed.compose(h, f)) != D.compose(rect.on_morphism(h), Ff):
                            failures.append({"composite": (repr(f), repr(h))})
    return {"ok": not failures, "checked": checked, "failures": failures[:5]}


def identity_pseudo_functor(C: GCategory) -> PseudoEquivFunctor:
    return PseudoEquivFunctor(
        C, C, lambda a: a, lambda f: f, lambda g, a: C.identity(C.act_obj(g, a))
    )


def sum_pseudo_functor(C: GCategory) -> PseudoEquivFunctor:
    """Binary sum ``C x C -> C`` with ``theta_g`` the inverse of ``g(a+b) -> ga+gb``."""
    if not C.has_coproducts:
        raise MissingCoproducts("binary sum needs designated coproducts")
    return PseudoEquivFunctor(
        ProductGCategory(C, C), C,
        lambda ab: C.sum(list(ab)),
        lambda fg: C.sum_map(list(fg)),
        lambda g, ab: C.inverse(C.sum_action_iso(g, list(ab))),
    )


def zero_pseudo_functor(C: GCategory) -> PseudoEquivFunctor:
    """Constant functor ``* -> C`` at the zero object; ``theta_g`` the unique iso ``0 -> g0``."""
    z = C.zero()

    def theta(g, _):
        isos = C.isos(z, C.act_obj(g, z))
        if len(isos) != 1:
            raise IncoherentPseudoData("zero object has no unique iso to its translate")
        return isos[0]

    return PseudoEquivFunctor(POINT, C, lambda _: z, lambda _: C.identity(z), theta)


# ===================================================================
# functors on Cat(S x EG, C)^G
# ===================================================================


@dataclass(frozen=True, eq=False)
class PointwiseObject:
    """``F`` over ``S``: ``objs[s] = F(s,1)``, ``phi[s][g]: F_s -> g F_{g^-1 s}``."""

    category: GCategory = field(repr=False)
    gset: GSet
    objs: tuple
    phi: tuple = field(repr=False)

    def __eq__(self, other):
        return (
            isinstance(other, PointwiseObject)
            and self.gset is other.gset
            and self.objs == other.objs
            and self.phi == other.phi
        )

    def __hash__(self):
        return hash(self.objs)

    def __repr__(self):
        return f"PointwiseObject({list(self.objs)})"

    def check(self) -> Optional[tuple]:
        C, S = self.category, self.gset
        G = S.group
        for s in S.points:
            if self.phi[s][0] != C.identity(self.objs[s]):
                return (s, 0, 0)
            for g in G.elements:
                p = self.phi[s][g]
                want = C.act_obj(g, self.objs[S.act[G.inverse[g]][s]])
                if C.source(p) != self.objs[s] or C.target(p) != want:
                    return (s, g, None)
            for g in G.elements:
                gis = S.act[G.inverse[g]][s]
                for h in G.elements:
                    lhs = self.phi[s][G.mult[g][h]]
                    rhs = C.compose(C.act_mor(g, self.phi[gis][h]), self.phi[s][g])
                    if lhs != rhs:
                        return (s, g, h)
        return None

    def at(self, s: int) -> EquivObject:
        """The stabilizer-equivariant object sitting over ``s``."""
        stab = self.gset.stabilizer(s)
        return EquivObject(self.category, stab, self.objs[s], tuple(self.phi[s][k] for k in stab.elements))


@dataclass(frozen=True, eq=False)
class OrbitIndexedObject:
    """One :class:`EquivObject` over the stabilizer of each orbit representative of ``gset``."""

    gset: GSet
    components: tuple

    def __repr__(self):
        return f"OrbitIndexedObject({list(self.components)})"

    def check(self) -> Optional[tuple]:
        for k, (o, c) in enumerate(zip(self.gset.decomposition, self.components)):
            if c.subgroup != o.stabilizer:
                return (k, "stabilizer")
            bad = c.check()
            if bad is not None:
                return (k, bad)
        return None


def expand(F: OrbitIndexedObject, category: GCategory) -> PointwiseObject:
    """Orbit-indexed -> pointwise: ``F_t = a_t F_s`` and ``phi_{t,g} = a_t psi_k``.

    Here ``a_t`` is the minimal element with ``a_t s = t`` and
    ``k = a_t^-1 g a_{g^-1 t}`` lies in the stabilizer of ``s``.
    """
    S = F.gset
    G = S.group
    C = category
    dec = S.decomposition
    objs = [None] * S.size
    phi = [None] * S.size
    for o, comp in zip(dec, F.components):
        for t in o.points:
            objs[t] = C.act_obj(o.transporter[t], comp.carrier)
        for t in o.points:
            a = o.transporter[t]
            row = []
            for g in G.elements:
                u = S.act[G.inverse[g]][t]
                k = G.mult[G.mult[G.inverse[a]][g]][o.transporter[u]]
                row.append(C.act_mor(a, comp.psi(k)))
            phi[t] = tuple(row)
    return PointwiseObject(C, S, tuple(objs), tuple(phi))


def compress(F: PointwiseObject) -> OrbitIndexedObject:
    """Pointwise -> orbit-indexed, keeping the data at orbit representatives."""
    return OrbitIndexedObject(
        F.gset, tuple(F.at(o.representative) for o in F.gset.decomposition)
    )


def _require_coproducts(C: GCategory):
    if not C.has_coproducts:
        raise MissingCoproducts("transfer needs designated coproducts and a zero object")


def pull(f: GMap, F: PointwiseObject) -> PointwiseObject:
    """``(f^*F)(s, g) = F(f(s), g)``."""
    if f.target is not F.gset:
        raise NotEquivariant("restriction map must end at the base of F")
    S = f.source
    return PointwiseObject(
        F.category, S, tuple(F.objs[f.map[s]] for s in S.points),
        tuple(F.phi[f.map[s]] for s in S.points),
    )


def push(f: GMap, F: PointwiseObject) -> PointwiseObject:
    """``(f_!F)(t, g) = g(+_{i in f^-1(g^-1 t)} F(i,1))`` with the induced structure maps."""
    C = F.category
    _require_coproducts(C)
    if f.source is not F.gset:
        raise NotEquivariant("transfer map must start at the base of F")
    S, T = f.source, f.target
    G = S.group
    fibers = [f.fiber(t) for t in T.points]
    objs = tuple(C.sum([F.objs[i] for i in fib]) for fib in fibers)
    phi = []
    for t in T.points:
        fib = fibers[t]
        row = []
        for g in G.elements:
            ginv = G.inverse[g]
            u = T.act[ginv][t]
            src_fib = fibers[u]  # i in f^-1(g^-1 t), ascending
            # + phi_{j,g}: +_j F_j -> +_j g F_{g^-1 j}
            step = C.sum_map([F.phi[j][g] for j in fib])
            # reorder summands from j-order to i-order (j = g i)
            perm = [fib.index(S.act[g][i]) for i in src_fib]
            mid = [C.act_obj(g, F.objs[S.act[ginv][j]]) for j in fib]
            step = C.compose(C.reorder(mid, perm), step)
            # +_i g F_i -> g(+_i F_i)
            kappa = C.sum_action_iso(g, [F.objs[i] for i in src_fib])
            step = C.compose(C.inverse(kappa), step)
            row.append(step)
        phi.append(tuple(row))
    return PointwiseObject(C, T, objs, tuple(phi))


def pull_mor(f: GMap, alpha: tuple) -> tuple:
    return tuple(alpha[f.map[s]] for s in f.source.points)


def push_mor(f: GMap, C: GCategory, alpha: tuple) -> tuple:
    return tuple(C.sum_map([alpha[i] for i in f.fiber(t)]) for t in f.target.points)


def restrict_along(f: GMap, F: OrbitIndexedObject, category: GCategory) -> OrbitIndexedObject:
    """Orbit-indexed ``f^*``."""
    return compress(pull(f, expand(F, category)))


def transfer_along(f: GMap, F: OrbitIndexedObject, category: GCategory) -> OrbitIndexedObject:
    """Orbit-indexed ``f_!``."""
    return compress(push(f, expand(F, category)))


# ------------------------------------------------------- morphisms


def compose_pointwise(C: GCategory, beta: tuple, alpha: tuple) -> tuple:
    comp = C.compose
    return tuple([comp(b, a) for b, a in zip(beta, alpha)])


def identity_pointwise(F: PointwiseObject) -> tuple:
    return tuple(F.category.identity(x) for x in F.objs)


def is_natural(C: GCategory, F: PointwiseObject, Fp: PointwiseObject, alpha: tuple) -> bool:
    """``phi'_{s,g} alpha_s = (g alpha_{g^-1 s}) phi_{s,g}`` everywhere.

    Checking generators of ``G`` suffices: the square for ``gh`` is pasted
    from the squares for ``g`` and ``h`` by the cocycle law and strictness.
    """
    S = F.gset
    G = S.group
    gens = _generators(G.whole())
    for s in S.points:
        for g in gens:
            u = S.act[G.inverse[g]][s]
            if C.compose(Fp.phi[s][g], alpha[s]) != C.compose(C.act_mor(g, alpha[u]), F.phi[s][g]):
                return False
    return True


def pointwise_homs(F: PointwiseObject, Fp: PointwiseObject) -> list:
    """All morphisms ``F -> F'`` of ``Cat(S x EG, C)^G``.

    Components at orbit representatives range over stabilizer-equivariant
    maps; the rest follow from ``alpha_t = phi'_{t,a}^-1 (a alpha_s) phi_{t,a}``
    with ``a`` the transporter from ``s`` to ``t``.
    """
    C = F.category
    S = F.gset
    G = S.group
    dec = S.decomposition
    choices = [C.equivariant_homs(F.at(o.representative), Fp.at(o.representative)) for o in dec]
    inv_cache = {}

    def inv(m):
        key = id(m)
        if key not in inv_cache:
            inv_cache[key] = (m, C.inverse(m))
        return inv_cache[key][1]

    out = []
    for pick in itertools.product(*choices):
        alpha = [None] * S.size
        for o, a_s in zip(dec, pick):
            s = o.representative
            for t in o.points:
                a = o.transporter[t]
                if t == s:
                    alpha[t] = a_s
                    continue
                # relation at (t, a): phi'_{t,a} alpha_t = (a alpha_s) phi_{t,a}
                alpha[t] = C.compose_all(inv(Fp.phi[t][a]), C.act_mor(a, a_s), F.phi[t][a])
        out.append(tuple(alpha))
    return out


def unit(f: GMap, F: PointwiseObject) -> tuple:
    """``eta_F: F -> f^* f_! F``; at ``s`` the injection of the summand ``s``."""
    C = F.category
    out = []
    for s in f.source.points:
        fib = f.fiber(f.map[s])
        out.append(C.injection([F.objs[i] for i in fib], fib.index(s)))
    return tuple(out)


def counit(f: GMap, Fp: PointwiseObject) -> tuple:
    """``eps_{F'}: f_! f^* F' -> F'``; at ``t`` the codiagonal."""
    C = Fp.category
    out = []
    for t in f.target.points:
        n = len(f.fiber(t))
        x = Fp.objs[t]
        out.append(C.copair([x] * n, [C.identity(x)] * n, x))
    return tuple(out)


def transpose(f: GMap, F: PointwiseObject, beta: tuple) -> tuple:
    """``Hom(f_!F, F') -> Hom(F, f^*F')``: ``beta -> f^*beta . eta``."""
    return compose_pointwise(F.category, pull_mor(f, beta), unit(f, F))


def untranspose(f: GMap, Fp: PointwiseObject, gamma: tuple) -> tuple:
    """``Hom(F, f^*F') -> Hom(f_!F, F')``: ``gamma -> eps . f_!gamma``."""
    C = Fp.category
    return compose_pointwise(C, counit(f, Fp), push_mor(f, C, gamma))


# ------------------------------------------------------- families


def bounded_family(category: GCategory, S: GSet, limit: Optional[int] = None) -> list:
    """Pointwise objects over ``S`` whose orbit components are all bounded fixed objects."""
    per_orbit = [
        [c for c in category.objects() for c in cocycles(category, o.stabilizer, c)]
        for o in S.decomposition
    ]
    out = []
    for pick in itertools.product(*per_orbit):
        out.append(expand(OrbitIndexedObject(S, tuple(pick)), category))
        if limit is not None and len(out) >= limit:
            break
    return out


@dataclass
class VerifierReport:
    name: str
    ok: bool = True
    checked: int = 0
    failures: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def fail(self, witness) -> None:
        self.ok = False
        if len(self.failures) < 10:
            self.failures.append(witness)

    def __bool__(self):
        return self.ok

    def to_json(self) -> dict:
        return {
            "check": self.name, "ok": self.ok, "checked": self.checked,
            "failures": self.failures, **self.details,
        }


def check_adjunction(
    f: GMap,
    category: GCategory,
    family_source: Optional[list] = None,
    family_target: Optional[list] = None,
    cache: Optional[dict] = None,
) -> VerifierReport:
    """Exhaustive check that ``(f_!, f^*)`` is an adjunction on bounded families.

    Verifies the hom-set bijection, its naturality in both slots, and both
    triangle identities.  ``cache`` may be shared between calls that reuse
    the same family objects; it memoizes hom-sets keyed by object identity.
    """
    _require_coproducts(category)
    f.validate()
    C = category
    Fs = family_source if family_source is not None else bounded_family(C, f.source)
    Ts = family_target if family_target is not None else bounded_family(C, f.target)
    rep = VerifierReport("adjunction")
    pushed = {id(F): push(f, F) for F in Fs}
    pulled = {id(Fp): pull(f, Fp) for Fp in Ts}
    units = {id(F): unit(f, F) for F in Fs}
    hom_cache = {} if cache is None else cache
    keep = list(pushed.values()) + list(pulled.values())

    def homs(A, B):
        key = (id(A), id(B))
        if key not in hom_cache:
            hom_cache[key] = pointwise_homs(A, B)
        return hom_cache[key]

    def tr(F, beta):
        return compose_pointwise(C, pull_mor(f, beta), units[id(F)])

    for F in Fs:
        fF = pushed[id(F)]
        for Fp in Ts:
            fpF = pulled[id(Fp)]
            left = homs(fF, Fp)
            right = homs(F, fpF)
            rep.checked += 1
            images = [tr(F, b) for b in left]
            if len(left) != len(right) or set(images) != set(right) or len(set(images)) != len(images):
                rep.fail({"pair": [repr(F), repr(Fp)], "left": len(left), "right": len(right)})
                continue
            if any(untranspose(f, Fp, g) != b for g, b in zip(images, left)):
                rep.fail({"pair": [repr(F), repr(Fp)], "reason": "not a two-sided inverse"})
            if any(not is_natural(C, F, fpF, g) for g in images):
                rep.fail({"pair": [repr(F), repr(Fp)], "reason": "transpose not natural"})
    # Both sides of each naturality square are natural transformations, so
    # they agree once they agree at orbit representatives.  Naturality of
    # every enumerated morphism is checked in full first.
    for F1 in Fs:
        for F2 in Fs:
            for u in homs(F1, F2):
                if not is_natural(C, F1, F2, u):
                    rep.fail({"unnatural_hom": [repr(F1), repr(F2)]})
    for P1 in Ts:
        for P2 in Ts:
            for v in homs(P1, P2):
                if not is_natural(C, P1, P2, v):
                    rep.fail({"unnatural_hom": [repr(P1), repr(P2)]})
    comp = C.compose
    reps = [o.representative for o in f.source.decomposition]
    images = [f.map[s] for s in reps]
    # naturality in the first slot: tr(b . f_!u) = tr(b) . u
    for F1 in Fs:
        e1 = units[id(F1)]
        for F2 in Fs:
            us = homs(F1, F2)
            if not us:
                continue
            e2 = units[id(F2)]
            pushed_us = [push_mor(f, C, u) for u in us]
            for Fp in Ts:
                for b in homs(pushed[id(F2)], Fp):
                    for u, fu in zip(us, pushed_us):
                        rep.checked += 1
                        for s, t in zip(reps, images):
                            if comp(comp(b[t], fu[t]), e1[s]) != comp(comp(b[t], e2[s]), u[s]):
                                rep.fail({"naturality": "source", "F1": repr(F1), "F2": repr(F2)})
                                break
    # naturality in the second slot: tr(v . b) = f^*v . tr(b)
    for F in Fs:
        e = units[id(F)]
        for P1 in Ts:
            bs = homs(pushed[id(F)], P1)
            if not bs:
                continue
            for P2 in Ts:
                for v in homs(P1, P2):
                    for b in bs:
                        rep.checked += 1
                        for s, t in zip(reps, images):
                            if comp(comp(v[t], b[t]), e[s]) != comp(v[t], comp(b[t], e[s])):
                                rep.fail({"naturality": "target", "F": repr(F)})
                                break
    # triangle identities
    for F in Fs:
        fF = pushed[id(F)]
        tri = compose_pointwise(C, counit(f, fF), push_mor(f, C, units[id(F)]))
        rep.checked += 1
        if tri != identity_pointwise(fF):
            rep.fail({"triangle": "left", "F": repr(F)})
    for Fp in Ts:
        fpF = pulled[id(Fp)]
        tri = compose_pointwise(C, pull_mor(f, counit(f, Fp)), unit(f, fpF))
        rep.checked += 1
        if tri != identity_pointwise(fpF):
            rep.fail({"triangle": "right", "F'": repr(Fp)})
    for obj in keep:
        for other in list(Fs) + list(Ts) + keep:
            hom_cache.pop((id(obj), id(other)), None)
            hom_cache.pop((id(other), id(obj)), None)
    rep.details["family_sizes"] = [len(Fs), len(Ts)]
    return rep


# ------------------------------------------------------- composite transfers


def push_composite_iso(f: GMap, g: GMap, E: PointwiseObject) -> tuple:
    """Canonical iso ``g_! f_! E -> (g f)_! E`` (flatten nested sums, reorder by point)."""
    C = E.category
    gf = f.then(g)
    out = []
    for d in g.target.points:
        flat = gf.fiber(d)
        flat_objs = [E.objs[a] for a in flat]
        total = C.sum(flat_objs)
        mids = g.fiber(d)
        inner_maps = []
        inner_objs = []
        for c in mids:
            fib = f.fiber(c)
            objs = [E.objs[a] for a in fib]
            inner_objs.append(C.sum(objs))
            inner_maps.append(
                C.copair(objs, [C.injection(flat_objs, flat.index(a)) for a in fib], total)
            )
        out.append(C.copair(inner_objs, inner_maps, total))
    return tuple(out)


def invert_pointwise(C: GCategory, alpha: tuple) -> tuple:
    return tuple(C.inverse(a) for a in alpha)


# ------------------------------------------------------- Beck-Chevalley


@dataclass(frozen=True, eq=False)
class Square:
    """``k: A -> B``, ``h: A -> C``, ``f: B -> D``, ``j: C -> D`` with ``f k = j h``."""

    k: GMap
    h: GMap
    f: GMap
    j: GMap

    def validate(self) -> "Square":
        for m in (self.k, self.h, self.f, self.j):
            m.validate()
        if self.k.then(self.f).map != self.h.then(self.j).map:
            raise NotCommuting("square does not commute")
        return self

    def is_pullback(self) -> bool:
        pb = pullback(self.f, self.j)
        table = {pair: i for i, pair in enumerate(pb.pairs)}
        comparison = [table.get((self.k.map[a], self.h.map[a])) for a in self.k.source.points]
        return None not in comparison and sorted(comparison) == list(range(pb.gset.size))


@dataclass(frozen=True, eq=False)
class BeckChevalleyResult:
    map: tuple
    is_iso: bool
    is_pullback: bool
    matches_formula: bool


def beck_chevalley(square: Square, F: PointwiseObject) -> BeckChevalleyResult:
    """``h_! k^* F -> j^* f_! F`` as ``eta``, then the composite-transfer iso, then ``eps``."""
    sq = square.validate()
    C = F.category
    _require_coproducts(C)
    k, h, f, j = sq.k, sq.h, sq.f, sq.j
    kF = pull(k, F)
    hkF = push(h, kF)
    eta = unit(j, hkF)  # h_!k^*F -> j^* j_! h_! k^* F
    iso1 = pull_mor(j, push_composite_iso(h, j, kF))  # -> j^* (jh)_! k^*F
    iso2 = pull_mor(j, invert_pointwise(C, push_composite_iso(k, f, kF)))  # -> j^* f_! k_! k^*F
    eps = pull_mor(j, push_mor(f, C, counit(k, F)))  # -> j^* f_! F
    total = compose_pointwise(C, eps, compose_pointwise(C, iso2, compose_pointwise(C, iso1, eta)))
    # direct description: summand a of (h_!k^*F)_c goes to summand k(a) of (f_!F)_{j(c)}
    direct = []
    fF = push(f, F)
    for c in h.target.points:
        fib = h.fiber(c)
        tgt_fib = f.fiber(j.map[c])
        objs = [F.objs[k.map[a]] for a in fib]
        tobjs = [F.objs[b] for b in tgt_fib]
        direct.append(C.copair(
            objs, [C.injection(tobjs, tgt_fib.index(k.map[a])) for a in fib], fF.objs[j.map[c]]
        ))
    return BeckChevalleyResult(
        total,
        all(C.is_iso(m) for m in total),
        sq.is_pullback(),
        tuple(direct) == total,
    )


# ------------------------------------------------------- f-sharp


def f_sharp(p: GMap, q: GMap, r: GMap, s: GMap, f: GMap, F: PointwiseObject) -> tuple:
    """``f_#: q_! p^* F -> s_! r^* F`` from the counit of ``(f_!, f^*)``.

    ``p: S -> U``, ``q: S -> V``, ``r: T -> U``, ``s: T -> V``, ``f: S -> T``
    with ``p = r f`` and ``q = s f``.
    """
    if f.then(r).map != p.map or f.then(s).map != q.map:
        raise LegMismatch("f_# needs p = r f and q = s f")
    C = F.category
    rF = pull(r, F)
    pF = pull(p, F)  # equals f^* r^* F on the nose
    iso = invert_pointwise(C, push_composite_iso(f, s, pF))  # q_! p^*F -> s_! f_! f^* r^*F
    eps = push_mor(s, C, counit(f, rF))  # -> s_! r^* F
    return compose_pointwise(C, eps, iso)


# ------------------------------------------------------- comparison with induction


@dataclass(frozen=True, eq=False)
class InductionComparison:
    """Transfer along an orbit map versus ``K x_L Y`` over ``X``."""

    transferred: GSet
    induced: GSet
    iso: Optional[GMap]

    @property
    def ok(self) -> bool:
        return self.iso is not None


def compare_with_induction(category: RetSets, f: GMap, F: PointwiseObject) -> InductionComparison:
    """Check ``(f_!F)_t`` against ``K x_L F_s`` for ``f: S -> T`` between orbits.

    ``s`` is the representative of ``S``, ``t = f(s)``, ``L`` and ``K`` their
    stabilizers.  The induced set maps to ``X`` by ``(k, y) -> k.r(y)``; the
    returned iso (when found) is an isomorphism of K-sets over ``X``.
    """
    S, T = f.source, f.target
    if len(S.decomposition) != 1 or len(T.decomposition) != 1:
        raise NotEquivariant("induction comparison needs transitive source and target")
    s = S.decomposition[0].representative
    t = f.map[s]
    pushed = push(f, F).at(t)
    K = pushed.subgroup
    Yt, rt = to_hset(pushed)
    Ys, rs = to_hset(F.at(s))
    L = F.gset.stabilizer(s)
    XK = restrict(category.X, K)
    structure = GMap(Ys, restrict(XK, L), tuple(rs))
    ind = induce(K, L, Ys, structure)
    found = iso_over(GMap(Yt, XK, tuple(rt)), ind.base_map)
    return InductionComparison(Yt, ind.gset, found)
