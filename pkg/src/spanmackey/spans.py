"""Spans of G-sets between standard orbits, the table of marks and the Burnside ring."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import ClassMismatch, NotEquivariant
from .groups import FiniteGroup, Subgroup, subgroup_classes
from .gsets import (
    GMap,
    GSet,
    coproduct,
    coproduct_injections,
    decompose,
    empty_gset,
    fixed_points,
    homs,
    iso_over,
    make_gset,
    orbit,
    product,
    product_projections,
    pullback,
    standard_orbit,
)


def class_orbit(G: FiniteGroup, c: int) -> GSet:
    """The standard orbit ``G/H`` for the representative of class ``c``."""
    return orbit(G, subgroup_classes(G)[c].representative)


@dataclass(frozen=True, eq=False)
class Span:
    """``G/H <-p- S -q-> G/K`` with ``H``, ``K`` class representatives."""

    group: FiniteGroup
    source: int
    target: int
    middle: GSet
    p: GMap
    q: GMap

    def __repr__(self):
        return f"Span({self.source}->{self.target}, |S|={self.middle.size})"

    @property
    def source_orbit(self) -> GSet:
        return class_orbit(self.group, self.source)

    @property
    def target_orbit(self) -> GSet:
        return class_orbit(self.group, self.target)

    def validate(self) -> "Span":
        if self.p.source is not self.middle or self.q.source is not self.middle:
            raise NotEquivariant("legs must start at the middle G-set")
        if self.p.target is not self.source_orbit or self.q.target is not self.target_orbit:
            raise NotEquivariant("legs must end at the declared standard orbits")
        self.p.validate()
        self.q.validate()
        return self

    @property
    def combined(self) -> GMap:
        """``(p, q): S -> G/H x G/K``."""
        n = self.target_orbit.size
        Z = _orbit_product(self.group, self.source, self.target)
        return GMap(self.middle, Z, tuple(a * n + b for a, b in zip(self.p.map, self.q.map)))

    def to_json(self) -> dict:
        return {
            "H": self.source,
            "K": self.target,
            "middle": self.middle.to_json(),
            "p": self.p.to_json(),
            "q": self.q.to_json(),
        }


def _orbit_product(G: FiniteGroup, h: int, k: int) -> GSet:
    cache = G.__dict__.setdefault("_orbit_products", {})
    if (h, k) not in cache:
        cache[(h, k)] = product(class_orbit(G, h), class_orbit(G, k))
    return cache[(h, k)]


def make_span(G: FiniteGroup, h: int, k: int, middle: GSet, p, q) -> Span:
    """Build and validate a span from leg tables."""
    return Span(
        G, h, k, middle,
        GMap(middle, class_orbit(G, h), tuple(p)),
        GMap(middle, class_orbit(G, k), tuple(q)),
    ).validate()


def span_from_json(G: FiniteGroup, data: dict) -> Span:
    mid = make_gset(G, data["middle"]["act"]) if data["middle"].get("size", 1) else empty_gset(G)
    return make_span(G, int(data["H"]), int(data["K"]), mid, data["p"]["map"], data["q"]["map"])


@dataclass(frozen=True, eq=False)
class RetractiveSpan:
    """``S_+ = S u (G/H x G/K)``; only ``S`` is stored, the retract is implicit."""

    span: Span

    def wrap(self):
        """Return ``(S_+, p u pi1, q u pi2, inclusion of S, inclusion of G/H x G/K)``."""
        sp = self.span
        Z = _orbit_product(sp.group, sp.source, sp.target)
        total = coproduct(sp.middle, Z)
        inc_s, inc_z = coproduct_injections([sp.middle, Z], total)
        pi1, pi2 = product_projections(sp.source_orbit, sp.target_orbit, Z)
        legp = GMap(total, sp.source_orbit, sp.p.map + pi1.map)
        legq = GMap(total, sp.target_orbit, sp.q.map + pi2.map)
        return total, legp, legq, inc_s, inc_z

    @classmethod
    def unwrap(cls, G: FiniteGroup, h: int, k: int, total: GSet, legp: GMap, legq: GMap):
        """Inverse of :meth:`wrap`: drop the trailing retract summand."""
        Z = _orbit_product(G, h, k)
        n = total.size - Z.size
        if n < 0:
            raise NotEquivariant("retractive span is smaller than its retract")
        mid = GSet(G, n, tuple(row[:n] for row in total.act))
        if any(x >= n for row in mid.act for x in row):
            raise NotEquivariant("retract summand is not a G-subset")
        return cls(make_span(G, h, k, mid, legp.map[:n], legq.map[:n]))


def unit_span(G: FiniteGroup, c: int) -> Span:
    O = class_orbit(G, c)
    ident = O.identity_map()
    return Span(G, c, c, O, ident, ident)


def empty_span(G: FiniteGroup, h: int, k: int) -> Span:
    E = empty_gset(G)
    return Span(G, h, k, E, GMap(E, class_orbit(G, h), ()), GMap(E, class_orbit(G, k), ()))


def compose_spans(first: Span, second: Span) -> Span:
    """Compose ``G/H <- S -> G/L`` with ``G/L <- T -> G/K`` by pullback over ``G/L``."""
    if first.group is not second.group:
        raise ClassMismatch("spans over different groups")
    if first.target != second.source:
        raise ClassMismatch(
            f"cannot compose: first ends at class {first.target}, second starts at {second.source}"
        )
    pb = pullback(first.q, second.p)
    return Span(
        first.group, first.source, second.target, pb.gset,
        pb.left.then(first.p), pb.right.then(second.q),
    )


def span_sum(a: Span, b: Span) -> Span:
    """Disjoint union of middles over the same pair of orbits."""
    if (a.source, a.target) != (b.source, b.target):
        raise ClassMismatch("summands must share source and target")
    mid = coproduct(a.middle, b.middle)
    return Span(
        a.group, a.source, a.target, mid,
        GMap(mid, a.source_orbit, a.p.map + b.p.map),
        GMap(mid, a.target_orbit, a.q.map + b.q.map),
    )


def orbit_span(G: FiniteGroup, h: int, k: int, A: Subgroup, a: int, b: int) -> Span:
    """Transitive span ``G/H <- G/A -> G/K`` with ``eA -> aH`` and ``eA -> bK``.

    Requires ``A <= aHa^-1`` and ``A <= bKb^-1``.
    """
    sc = subgroup_classes(G)
    oa = standard_orbit(G, A)
    oh = standard_orbit(G, sc[h].representative)
    ok = standard_orbit(G, sc[k].representative)
    pa, qb = oh.coset(a), ok.coset(b)
    p = tuple(oh.gset.act[r][pa] for r in oa.representatives)
    q = tuple(ok.gset.act[r][qb] for r in oa.representatives)
    return make_span(G, h, k, oa.gset, p, q)


def transfer_span(G: FiniteGroup, h: int, k: int) -> Span:
    """``G/H <- G/H -> G/K`` (identity, then projection); needs ``H <= K`` on representatives."""
    sc = subgroup_classes(G)
    return orbit_span(G, h, k, sc[h].representative, 0, 0)


def restriction_span(G: FiniteGroup, k: int, h: int) -> Span:
    """``G/K <- G/H -> G/H``; needs ``H <= K`` on representatives."""
    sc = subgroup_classes(G)
    return orbit_span(G, k, h, sc[h].representative, 0, 0)


# ------------------------------------------------------------ normal forms


def _canonical_under(G: FiniteGroup, A: Subgroup, N: Subgroup) -> tuple:
    return min((A.conjugate(x).key for x in N.elements))[1]


def span_normal_form(span: Span) -> tuple:
    """Sorted multiset of orbit types of the middle over ``G/H x G/K``.

    Each orbit contributes ``(z0, A)`` where ``z0`` is the minimal point of
    the image orbit in ``G/H x G/K`` and ``A`` is the stabilizer of a point
    above ``z0``, canonicalized under conjugation by the stabilizer of ``z0``.
    """
    G = span.group
    comb = span.combined
    Z = comb.target
    decZ = Z.decomposition
    out = []
    for o in span.middle.decomposition:
        s = o.representative
        z = comb.map[s]
        zo = decZ.orbits[decZ.orbit_of[z]]
        z0 = zo.representative
        g = G.inverse[zo.transporter[z]]  # g . z = z0
        A = o.stabilizer.conjugate(g)
        out.append((z0, _canonical_under(G, A, zo.stabilizer)))
    return tuple(sorted(out))


def span_iso(a: Span, b: Span) -> Optional[GMap]:
    """An isomorphism of spans ``a.middle -> b.middle`` commuting with both legs."""
    if (a.group, a.source, a.target) != (b.group, b.source, b.target):
        return None
    return iso_over(a.combined, b.combined)


def span_isos_bruteforce(a: Span, b: Span) -> list:
    """Every span isomorphism, by filtering all equivariant maps (test oracle)."""
    if (a.source, a.target) != (b.source, b.target) or a.middle.size != b.middle.size:
        return []
    out = []
    for f in homs(a.middle, b.middle):
        if not f.is_bijective():
            continue
        if f.then(b.p).map == a.p.map and f.then(b.q).map == a.q.map:
            out.append(f)
    return out


def transitive_spans(G: FiniteGroup, h: int, k: int) -> list:
    """All transitive spans from class ``h`` to class ``k``, one per iso class."""
    sc = subgroup_classes(G)
    oh = standard_orbit(G, sc[h].representative)
    ok = standard_orbit(G, sc[k].representative)
    seen = {}
    for A in sc.all_subgroups:
        for pa in fixed_points(oh.gset, A):
            for qb in fixed_points(ok.gset, A):
                sp = orbit_span(G, h, k, A, oh.representatives[pa], ok.representatives[qb])
                seen.setdefault(span_normal_form(sp), sp)
    return [seen[key] for key in sorted(seen)]


# ---------------------------------------------------------- table of marks


@dataclass(frozen=True, eq=False)
class TableOfMarks:
    """``matrix[i][j] = |(G/H_i)^{H_j}|`` over class representatives."""

    group: FiniteGroup
    labels: tuple
    matrix: tuple

    def __len__(self):
        return len(self.matrix)

    def to_json(self) -> dict:
        return {"labels": list(self.labels), "matrix": [list(r) for r in self.matrix]}


def table_of_marks(G: FiniteGroup) -> TableOfMarks:
    cached = G.__dict__.get("_table_of_marks")
    if cached is not None:
        return cached
    sc = subgroup_classes(G)
    reps = sc.representatives
    m = tuple(
        tuple(len(fixed_points(orbit(G, H), K)) for K in reps) for H in reps
    )
    for i, row in enumerate(m):
        if any(row[j] for j in range(i + 1, len(row))):
            raise ArithmeticError(f"table of marks not lower-triangular in row {i}")
        if row[i] != sc[i].weyl.order:
            raise ArithmeticError(f"diagonal entry {i} differs from |WH|")
    tom = TableOfMarks(G, tuple(c.label for c in sc), m)
    object.__setattr__(G, "_table_of_marks", tom)
    return tom


# ----------------------------------------------------------- Burnside ring


@dataclass(frozen=True, eq=False)
class BurnsideElement:
    """Integer combination of the orbits ``[G/H]`` in canonical class order."""

    group: FiniteGroup
    coeffs: tuple

    def __eq__(self, other):
        return (
            isinstance(other, BurnsideElement)
            and other.group is self.group
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        sc = subgroup_classes(self.group)
        terms = [f"{c}[G/{sc[i].label}]" for i, c in enumerate(self.coeffs) if c]
        return " + ".join(terms) or "0"

    def __add__(self, other):
        return BurnsideElement(self.group, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        return BurnsideElement(self.group, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other):
        return burnside_multiply(self, other)

    def ghost(self) -> tuple:
        return ghost(self)


def basis_element(G: FiniteGroup, c: int, coeff: int = 1) -> BurnsideElement:
    n = len(subgroup_classes(G))
    return BurnsideElement(G, tuple(coeff if i == c else 0 for i in range(n)))


def burnside_class(S: GSet) -> BurnsideElement:
    """The class ``[S]`` from its orbit decomposition."""
    sc = subgroup_classes(S.group)
    coeffs = [0] * len(sc)
    for o in decompose(S):
        coeffs[sc.class_index(o.stabilizer)] += 1
    return BurnsideElement(S.group, tuple(coeffs))


def ghost(a: BurnsideElement) -> tuple:
    m = table_of_marks(a.group).matrix
    return tuple(sum(c * m[i][j] for i, c in enumerate(a.coeffs)) for j in range(len(m)))


def from_ghost(G: FiniteGroup, v: Sequence[int]) -> BurnsideElement:
    """Inverse of :func:`ghost` by back substitution; raises if ``v`` is not a ghost vector."""
    m = table_of_marks(G).matrix
    n = len(m)
    c = [0] * n
    for k in range(n - 1, -1, -1):
        rest = v[k] - sum(c[i] * m[i][k] for i in range(k + 1, n))
        q, r = divmod(rest, m[k][k])
        if r:
            raise ArithmeticError(f"ghost vector not integral at class {k}")
        c[k] = q
    return BurnsideElement(G, tuple(c))


def _orbit_product_class(G: FiniteGroup, i: int, j: int) -> tuple:
    cache = G.__dict__.setdefault("_orbit_product_classes", {})
    if (i, j) not in cache:
        cache[(i, j)] = burnside_class(_orbit_product(G, i, j)).coeffs
    return cache[(i, j)]


def burnside_multiply(a: BurnsideElement, b: BurnsideElement) -> BurnsideElement:
    """Product in ``A(G)``, computed by orbit decomposition and checked in ghost coordinates."""
    if a.group is not b.group:
        raise ClassMismatch("Burnside elements over different groups")
    G = a.group
    n = len(a.coeffs)
    out = [0] * n
    for i, ci in enumerate(a.coeffs):
        if not ci:
            continue
        for j, cj in enumerate(b.coeffs):
            if not cj:
                continue
            for k, x in enumerate(_orbit_product_class(G, i, j)):
                out[k] += ci * cj * x
    direct = BurnsideElement(G, tuple(out))
    via_ghost = from_ghost(G, [x * y for x, y in zip(ghost(a), ghost(b))])
    if direct != via_ghost:
        raise ArithmeticError(f"Burnside product mismatch: {direct} vs {via_ghost}")
    return direct
