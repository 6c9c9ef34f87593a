"""Finite groups given by multiplication tables.

Elements are the integers ``0..order-1`` and ``0`` is always the identity.
Subgroups are stored as sorted tuples of element indices; the canonical
total order on subgroups compares first by order, then lexicographically on
the sorted element tuples.  Every conjugacy-class representative below is
the minimum of its class under that order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Sequence

from .errors import NotAGroup, NotASubgroupChain, OversizeInput, UnsupportedParameter

#: Hard cap on |G| for subgroup enumeration (desk-scale guarantee).
MAX_ORDER = 24

FAMILIES = ("cyclic", "dihedral", "symmetric", "alternating", "klein4", "quaternion8")


@dataclass(frozen=True, eq=False)
class FiniteGroup:
    """A finite group on ``{0, ..., order-1}`` with identity ``0``.

    ``ambient``/``embedding`` are set when the group was obtained from
    :meth:`Subgroup.as_group`; ``embedding[i]`` is the ambient index of the
    local element ``i``.
    """

    order: int
    mult: tuple
    inverse: tuple
    name: str = ""
    labels: tuple = ()
    ambient: Optional["FiniteGroup"] = field(default=None, repr=False)
    embedding: Optional[tuple] = field(default=None, repr=False)

    identity = 0

    def __repr__(self):
        return f"FiniteGroup({self.name or '?'}, order={self.order})"

    def mul(self, a: int, b: int) -> int:
        return self.mult[a][b]

    def inv(self, a: int) -> int:
        return self.inverse[a]

    def conj(self, g: int, x: int) -> int:
        """Return ``g x g^-1``."""
        return self.mult[self.mult[g][x]][self.inverse[g]]

    @property
    def elements(self) -> range:
        return range(self.order)

    def label(self, g: int) -> str:
        return self.labels[g] if self.labels else str(g)

    def element_order(self, g: int) -> int:
        n, x = 1, g
        while x != 0:
            x = self.mult[x][g]
            n += 1
        return n

    @cached_property
    def is_abelian(self) -> bool:
        m = self.mult
        return all(m[a][b] == m[b][a] for a in self.elements for b in range(a))

    def whole(self) -> "Subgroup":
        return Subgroup(self, tuple(self.elements))

    def trivial(self) -> "Subgroup":
        return Subgroup(self, (0,))

    def generate(self, gens: Iterable[int]) -> "Subgroup":
        return Subgroup(self, tuple(sorted(_closure(self, gens))))

    def subgroup(self, elements: Iterable[int]) -> "Subgroup":
        """Validate ``elements`` as a subgroup and return it."""
        elems = tuple(sorted(set(elements)))
        if not elems or elems[0] != 0:
            raise NotASubgroupChain(f"{elems} does not contain the identity")
        s = set(elems)
        for a in elems:
            if self.inverse[a] not in s:
                raise NotASubgroupChain(f"{elems} not closed under inverses at {a}")
            for b in elems:
                if self.mult[a][b] not in s:
                    raise NotASubgroupChain(f"{elems} not closed: {a}*{b}")
        return Subgroup(self, elems)

    def to_json(self) -> dict:
        out = {"order": self.order, "mult": [list(r) for r in self.mult]}
        if self.name:
            out["name"] = self.name
        return out


def _closure(G: FiniteGroup, gens: Iterable[int]) -> set:
    gens = [g for g in set(gens) if g != 0]
    els = {0}
    frontier = [0]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = G.mult[x][g]
                if y not in els:
                    els.add(y)
                    new.append(y)
        frontier = new
    return els


@dataclass(frozen=True)
class Subgroup:
    """A subgroup of ``parent``; ``elements`` sorted ascending."""

    parent: FiniteGroup = field(compare=False, hash=False, repr=False)
    elements: tuple

    def __post_init__(self):
        if self.elements[:1] != (0,):
            raise NotASubgroupChain("subgroup must contain the identity")

    def __repr__(self):
        return f"Subgroup({list(self.elements)})"

    def __eq__(self, other):
        return (
            isinstance(other, Subgroup)
            and self.parent is other.parent
            and self.elements == other.elements
        )

    def __hash__(self):
        return hash(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.element_set

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    @cached_property
    def element_set(self) -> frozenset:
        return frozenset(self.elements)

    @property
    def key(self) -> tuple:
        return (len(self.elements), self.elements)

    def __le__(self, other: "Subgroup") -> bool:
        return self.element_set <= other.element_set

    def __lt__(self, other: "Subgroup") -> bool:
        return self.element_set < other.element_set

    def conjugate(self, g: int) -> "Subgroup":
        """Return ``g H g^-1``."""
        G = self.parent
        return Subgroup(G, tuple(sorted(G.conj(g, h) for h in self.elements)))

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, tuple(sorted(self.element_set & other.element_set)))

    def index_in(self, other: "Subgroup") -> int:
        return other.order // self.order

    @cached_property
    def _positions(self) -> dict:
        return {g: i for i, g in enumerate(self.elements)}

    @cached_property
    def as_group(self) -> FiniteGroup:
        """This subgroup as a standalone group; local ``i`` is ``elements[i]``.

        The whole group is returned as itself.
        """
        G = self.parent
        if len(self.elements) == G.order:
            return G
        # one group object per (parent, elements) so that identity checks work
        cache = G.__dict__.setdefault("_subgroup_groups", {})
        if self.elements in cache:
            return cache[self.elements]
        pos = self._positions
        mult = tuple(
            tuple(pos[G.mult[a][b]] for b in self.elements) for a in self.elements
        )
        inverse = tuple(pos[G.inverse[a]] for a in self.elements)
        labels = tuple(G.label(a) for a in self.elements) if G.labels else ()
        return cache.setdefault(self.elements, FiniteGroup(
            len(self.elements), mult, inverse,
            name=f"{G.name or 'G'}{list(self.elements)}",
            labels=labels, ambient=G, embedding=self.elements,
        ))

    def to_local(self, g: int) -> int:
        """Ambient element index -> index in :attr:`as_group`."""
        return self._positions[g]

    def local(self, sub: "Subgroup") -> "Subgroup":
        """Express ``sub <= self`` as a subgroup of :attr:`as_group`."""
        if not sub <= self:
            raise NotASubgroupChain(f"{sub} is not contained in {self}")
        pos = self._positions
        return Subgroup(self.as_group, tuple(sorted(pos[g] for g in sub.elements)))

    def lift(self, sub: "Subgroup") -> "Subgroup":
        """Inverse of :meth:`local`."""
        return Subgroup(self.parent, tuple(sorted(self.elements[i] for i in sub.elements)))


def lift_subgroup(sub: Subgroup) -> Subgroup:
    """Map a subgroup of ``H.as_group`` back into the ambient group."""
    G = sub.parent
    if G.ambient is None:
        return sub
    return Subgroup(G.ambient, tuple(sorted(G.embedding[i] for i in sub.elements)))


def left_cosets(G: FiniteGroup, H: Subgroup, within: Optional[Sequence[int]] = None):
    """Cosets ``gH`` as ``(min representative, frozenset)``, sorted by representative."""
    elements = G.elements if within is None else within
    seen = set()
    out = []
    for g in sorted(elements):
        if g in seen:
            continue
        coset = frozenset(G.mult[g][h] for h in H.elements)
        seen |= coset
        out.append((g, coset))
    return out


# --------------------------------------------------------------------- build


def build_group(mult_table, name: str = "", labels: Sequence[str] = ()) -> FiniteGroup:
    """Validate a multiplication table and return the group.

    The identity is relabelled to index 0 when necessary (by swapping it with
    the element currently at 0).  Raises :class:`NotAGroup` with a witness.
    """
    try:
        rows = [list(map(int, r)) for r in mult_table]
    except (TypeError, ValueError) as exc:
        raise NotAGroup(f"malformed table: {exc}") from None
    n = len(rows)
    if n == 0:
        raise NotAGroup("empty table")
    for i, r in enumerate(rows):
        if len(r) != n:
            raise NotAGroup(f"row {i} has length {len(r)}, expected {n}", witness=(i,))
        for j, x in enumerate(r):
            if not 0 <= x < n:
                raise NotAGroup(f"entry ({i},{j})={x} out of range", witness=(i, j))
    ident = next(
        (e for e in range(n)
         if all(rows[e][x] == x and rows[x][e] == x for x in range(n))),
        None,
    )
    if ident is None:
        raise NotAGroup("no two-sided identity", witness=None)
    labels = list(labels)
    if ident != 0:
        perm = list(range(n))
        perm[0], perm[ident] = ident, 0
        rows = [[perm[rows[perm[a]][perm[b]]] for b in range(n)] for a in range(n)]
        if labels:
            labels[0], labels[ident] = labels[ident], labels[0]
    inverse = []
    for a in range(n):
        inv = next((b for b in range(n) if rows[a][b] == 0 and rows[b][a] == 0), None)
        if inv is None:
            raise NotAGroup(f"element {a} has no two-sided inverse", witness=(a,))
        inverse.append(inv)
    for a in range(n):
        ra = rows[a]
        for b in range(n):
            ab = ra[b]
            rab = rows[ab]
            rb = rows[b]
            for c in range(n):
                if rab[c] != ra[rb[c]]:
                    raise NotAGroup(
                        f"associativity fails at ({a},{b},{c})", witness=(a, b, c)
                    )
    return FiniteGroup(
        n, tuple(tuple(r) for r in rows), tuple(inverse), name=name, labels=tuple(labels)
    )


def _from_elements(elements: list, op, name: str, labels=None) -> FiniteGroup:
    index = {e: i for i, e in enumerate(elements)}
    table = [[index[op(a, b)] for b in elements] for a in elements]
    return build_group(table, name=name, labels=labels or [str(e) for e in elements])


def _perm_mul(s, t):
    # (s t)(i) = s(t(i))
    return tuple(s[i] for i in t)


def _perm_sign(p) -> int:
    sign, seen = 1, set()
    for i in range(len(p)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _cycle_label(p) -> str:
    seen, cycles = set(), []
    for i in range(len(p)):
        if i in seen or p[i] == i:
            seen.add(i)
            continue
        cyc, j = [], i
        while j not in seen:
            seen.add(j)
            cyc.append(str(j + 1))
            j = p[j]
        cycles.append("(" + "".join(cyc) + ")")
    return "".join(cycles) or "e"


def _quat_mul(a, b):
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


def named_group(family: str, n: Optional[int] = None) -> FiniteGroup:
    """Build a group from a named family.

    Element numbering:

    * ``cyclic``: residues ``0..n-1`` under addition.
    * ``dihedral`` (order ``2n``): index ``i + n*j`` is ``r^i s^j``.
    * ``symmetric``/``alternating``: permutations of ``{0..n-1}`` in
      lexicographic one-line order (even ones only for alternating), with
      ``(st)(i) = s(t(i))``.
    * ``klein4``: index ``a + 2b`` is ``(a, b)`` in ``C2 x C2``.
    * ``quaternion8``: ``1, -1, i, -i, j, -j, k, -k``.
    """
    if family not in FAMILIES:
        raise UnsupportedParameter(f"unknown family {family!r}; expected one of {FAMILIES}")
    if family == "klein4":
        if n not in (None, 4):
            raise UnsupportedParameter("klein4 takes n=4 or no n")
        els = [(a, b) for b in range(2) for a in range(2)]
        return _from_elements(els, lambda x, y: ((x[0] + y[0]) % 2, (x[1] + y[1]) % 2), "V4")
    if family == "quaternion8":
        if n not in (None, 8):
            raise UnsupportedParameter("quaternion8 takes n=8 or no n")
        units = []
        for axis in range(4):
            for sign in (1, -1):
                v = [0, 0, 0, 0]
                v[axis] = sign
                units.append(tuple(v))
        names = ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
        return _from_elements(units, _quat_mul, "Q8", names)
    if n is None or not isinstance(n, int) or n < 1:
        raise UnsupportedParameter(f"{family} needs a positive integer n, got {n!r}")
    if family == "cyclic":
        if n > 10 * MAX_ORDER:
            raise UnsupportedParameter(f"cyclic group of order {n} too large")
        return build_group(
            [[(a + b) % n for b in range(n)] for a in range(n)],
            name=f"C{n}", labels=[str(i) for i in range(n)],
        )
    if family == "dihedral":
        if 2 * n > 10 * MAX_ORDER:
            raise UnsupportedParameter(f"dihedral group of order {2 * n} too large")
        els = [(i, j) for j in range(2) for i in range(n)]

        def op(x, y):
            i1, j1 = x
            i2, j2 = y
            return ((i1 + (-i2 if j1 else i2)) % n, (j1 + j2) % 2)

        names = [("r%d" % i if i else "") + ("s" if j else "") or "e" for i, j in els]
        return _from_elements(els, op, f"D{n}", names)
    if n > 5:
        raise UnsupportedParameter(f"{family} groups are configured for n <= 5")
    perms = list(itertools.permutations(range(n)))
    if family == "alternating":
        perms = [p for p in perms if _perm_sign(p) == 1]
        name = f"A{n}"
    else:
        name = f"S{n}"
    return _from_elements(perms, _perm_mul, name, [_cycle_label(p) for p in perms])


def direct_product(A: FiniteGroup, B: FiniteGroup, name: str = "") -> FiniteGroup:
    """``A x B`` with index ``a + |A| b``."""
    els = [(a, b) for b in B.elements for a in A.elements]
    return _from_elements(
        els,
        lambda x, y: (A.mult[x[0]][y[0]], B.mult[x[1]][y[1]]),
        name or f"{A.name}x{B.name}",
        [f"({A.label(a)},{B.label(b)})" for a, b in els],
    )


def catalog(extended: bool = False) -> dict:
    """The named groups used by the verification grids."""
    groups = {
        "C2": named_group("cyclic", 2),
        "C3": named_group("cyclic", 3),
        "C4": named_group("cyclic", 4),
        "C2xC2": named_group("klein4"),
        "S3": named_group("symmetric", 3),
        "D4": named_group("dihedral", 4),
        "Q8": named_group("quaternion8"),
        "A4": named_group("alternating", 4),
    }
    if extended:
        groups["C6"] = named_group("cyclic", 6)
        groups["D6"] = named_group("dihedral", 6)
        groups["S4"] = named_group("symmetric", 4)
    return groups


# ------------------------------------------------------------- subgroups


@dataclass(frozen=True, eq=False)
class SubgroupClass:
    """One conjugacy class of subgroups.

    ``weyl`` is ``N_G(H)/H`` as an abstract group whose element ``i`` is the
    coset ``transversal[i] H`` (minimal representatives, ascending).
    """

    index: int
    representative: Subgroup
    members: tuple
    normalizer: Subgroup
    weyl: FiniteGroup
    transversal: tuple
    label: str = ""

    @property
    def order(self) -> int:
        return self.representative.order


@dataclass(frozen=True, eq=False)
class SubgroupClassification:
    group: FiniteGroup
    classes: tuple
    _lookup: dict = field(repr=False)

    def __len__(self):
        return len(self.classes)

    def __iter__(self):
        return iter(self.classes)

    def __getitem__(self, i) -> SubgroupClass:
        return self.classes[i]

    @property
    def representatives(self) -> list:
        return [c.representative for c in self.classes]

    @property
    def all_subgroups(self) -> list:
        return sorted((m for c in self.classes for m in c.members), key=lambda s: s.key)

    def class_index(self, H: Subgroup) -> int:
        return self._lookup[H.elements][0]

    def conjugator(self, H: Subgroup) -> int:
        """Minimal ``g`` with ``g H g^-1`` equal to the class representative."""
        return self._lookup[H.elements][1]

    def by_label(self, label: str) -> SubgroupClass:
        for c in self.classes:
            if c.label == label:
                return c
        raise KeyError(label)


def _all_subgroups(G: FiniteGroup) -> list:
    cyclic = {frozenset(_closure(G, [g])) for g in G.elements}
    subs = set(cyclic)
    frontier = list(subs)
    while frontier:
        new = []
        for H in frontier:
            for C in cyclic:
                if C <= H:
                    continue
                J = frozenset(_closure(G, set(H) | set(C)))
                if J not in subs:
                    subs.add(J)
                    new.append(J)
        frontier = new
    return sorted((Subgroup(G, tuple(sorted(s))) for s in subs), key=lambda s: s.key)


def _iso_type_label(G: FiniteGroup, H: Subgroup) -> str:
    n = H.order
    if n == 1:
        return "e"
    orders = [G.element_order(h) for h in H.elements]
    if n in orders:
        return f"C{n}"
    involutions = orders.count(2)
    abelian = all(G.mult[a][b] == G.mult[b][a] for a in H.elements for b in H.elements)
    if abelian:
        if max(orders) == 2:
            return "V4" if n == 4 else f"E{n}"
        return f"Ab{n}"
    if n == 6:
        return "S3"
    if n == 8:
        return "Q8" if involutions == 1 else "D4"
    if n == 12 and involutions == 3 and 6 not in orders:
        return "A4"
    if n == 24 and involutions == 9:
        return "S4"
    if n % 2 == 0 and involutions == n // 2 + (1 if (n // 2) % 2 == 0 else 0):
        return f"D{n // 2}"
    return f"H{n}"


def subgroup_classes(G: FiniteGroup, max_order: int = MAX_ORDER) -> SubgroupClassification:
    """Classify all subgroups of ``G`` up to conjugacy, memoized per group."""
    cached = G.__dict__.get("_subgroup_classes")
    if cached is not None:
        return cached
    if G.order > max_order:
        raise OversizeInput(f"|G| = {G.order} exceeds the subgroup-enumeration cap {max_order}")
    subs = _all_subgroups(G)
    lookup = {}
    classes = []
    for H in subs:  # ascending canonical order, so first unseen is the class minimum
        if H.elements in lookup:
            continue
        idx = len(classes)
        conjugates = {}
        for g in G.elements:
            J = H.conjugate(g)
            if J.elements not in conjugates:
                conjugates[J.elements] = J
            key = J.elements
            # conjugator sends J back to H: g^-1 J g = H
            ginv = G.inverse[g]
            if key not in lookup or ginv < lookup[key][1]:
                lookup[key] = (idx, ginv)
        members = tuple(sorted(conjugates.values(), key=lambda s: s.key))
        normalizer = Subgroup(G, tuple(g for g in G.elements if H.conjugate(g) == H))
        reps = tuple(r for r, _ in left_cosets(G, H, normalizer.elements))
        coset_of = {}
        for i, r in enumerate(reps):
            for h in H.elements:
                coset_of[G.mult[r][h]] = i
        wmult = [[coset_of[G.mult[a][b]] for b in reps] for a in reps]
        weyl = FiniteGroup(
            len(reps), tuple(map(tuple, wmult)),
            tuple(coset_of[G.inverse[r]] for r in reps),
            name=f"W({list(H.elements)})",
        )
        classes.append(SubgroupClass(idx, H, members, normalizer, weyl, reps))
    base = [_iso_type_label(G, c.representative) for c in classes]
    if classes and classes[-1].order == G.order and G.name:
        base[-1] = G.name if G.ambient is None else base[-1]
    counts = {b: base.count(b) for b in base}
    seen = {}
    final = []
    for c, b in zip(classes, base):
        if counts[b] > 1:
            k = seen.get(b, 0)
            seen[b] = k + 1
            b = f"{b}.{k}"
        final.append(SubgroupClass(
            c.index, c.representative, c.members, c.normalizer, c.weyl, c.transversal, b
        ))
    result = SubgroupClassification(G, tuple(final), lookup)
    object.__setattr__(G, "_subgroup_classes", result)
    return result


def normalizer(G: FiniteGroup, H: Subgroup) -> Subgroup:
    return Subgroup(G, tuple(g for g in G.elements if H.conjugate(g) == H))


def subconjugacy_witness(G: FiniteGroup, L: Subgroup, H: Subgroup) -> Optional[int]:
    """Minimal ``g`` with ``g L g^-1 <= H``, or ``None``."""
    if H.order % L.order:
        return None
    hs = H.element_set
    for g in G.elements:
        if all(G.conj(g, l) in hs for l in L.elements):
            return g
    return None


@dataclass(frozen=True)
class DoubleCoset:
    representative: int
    elements: frozenset


@dataclass(frozen=True, eq=False)
class DoubleCosetDecomposition:
    group: FiniteGroup
    left: Subgroup
    right: Subgroup
    cosets: tuple

    def __len__(self):
        return len(self.cosets)

    @property
    def representatives(self) -> list:
        return [c.representative for c in self.cosets]


def double_cosets(G: FiniteGroup, K: Subgroup, H: Subgroup) -> DoubleCosetDecomposition:
    """Partition ``G`` into ``K g H`` with minimal representatives."""
    seen = set()
    out = []
    for g in G.elements:
        if g in seen:
            continue
        dc = frozenset(G.mult[G.mult[k][g]][h] for k in K.elements for h in H.elements)
        seen |= dc
        out.append(DoubleCoset(g, dc))
    return DoubleCosetDecomposition(G, K, H, tuple(out))
