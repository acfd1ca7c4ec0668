"""Carving/surgery presentations: labelled links with a nesting order.

A presentation is a framed link in the standard 3-sphere, split into knots
and their linking circles, together with a set of arrows recording which
carved or attached handle enters the hollow left by another.  An arrow
``x -> y`` is the primitive relation, read "x is above y": the transitive
closure is the partial order, minimal elements have no outgoing arrows.

Components come in three families:

* ``B``: an unlink indexed by nonzero integers, one knot ``b(i)`` plus its
  circle ``b'(i)``; the knot is 0-labelled exactly when ``i < 0``.
* ``S`` (``i < 0``) and ``N`` (``i > 0``): one knot-and-circle pair per
  intersection curve of a Whitney-disc family with the standard sphere.
  Curves nest inside their disc; the knots inherit that order (outermost
  maximal) and the circles the opposite one, with labels alternating along
  nesting and determined at the top by the family's hemisphere.

Labels: ``0`` and ``•`` mark which side of the standard sphere a handle's
disc pushes into; ``⊘`` and ``★`` are their abstract forms, handles
attached formally rather than embedded.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Iterator, Mapping

ZERO = "0"
BULLET = "•"
ABSTRACT_ZERO = "⊘"
ABSTRACT_BULLET = "★"
LABELS = (ZERO, BULLET, ABSTRACT_ZERO, ABSTRACT_BULLET)

KNOT = "knot"
CIRCLE = "linking_circle"

B = "B"
S = "S"
N = "N"

_FAMILY_ORDER = {B: 0, S: 1, N: 2}


class NotFoundError(KeyError):
    """An id or node index does not name anything in the structure."""


def side(label: str) -> str:
    """The 0/• side a label lives on; abstraction does not change side."""
    if label in (ZERO, ABSTRACT_ZERO):
        return ZERO
    if label in (BULLET, ABSTRACT_BULLET):
        return BULLET
    raise ValueError(f"unknown label {label!r}")


def is_abstract(label: str) -> bool:
    return label in (ABSTRACT_ZERO, ABSTRACT_BULLET)


def abstract_form(label: str) -> str:
    return ABSTRACT_ZERO if side(label) == ZERO else ABSTRACT_BULLET


def concrete_form(label: str) -> str:
    return ZERO if side(label) == ZERO else BULLET


def opposite(label: str) -> str:
    return BULLET if side(label) == ZERO else ZERO


@dataclass(frozen=True)
class Family:
    """Family coordinates of a component: kind plus its indices.

    ``B`` components carry only ``i``; ``S``/``N`` components carry the
    ordered index pair of their disc family and the pre-order position
    ``curve`` of their intersection curve in the family's nesting forest.
    """

    kind: str
    i: int
    j: int | None = None
    curve: int | None = None

    def __post_init__(self):
        if self.kind == B:
            if self.i == 0 or self.j is not None or self.curve is not None:
                raise ValueError(f"malformed B family {self}")
        elif self.kind == S:
            if self.i >= 0 or self.j in (0, None) or self.curve is None or self.curve < 0:
                raise ValueError(f"malformed S family {self}")
        elif self.kind == N:
            if self.i <= 0 or self.j in (0, None) or self.curve is None or self.curve < 0:
                raise ValueError(f"malformed N family {self}")
        else:
            raise ValueError(f"unknown family kind {self.kind!r}")

    @property
    def key(self) -> tuple:
        return (self.kind, self.i, self.j)

    def sort_key(self) -> tuple:
        return (
            _FAMILY_ORDER[self.kind],
            self.i,
            self.j if self.j is not None else 0,
            self.curve if self.curve is not None else 0,
        )


@dataclass(frozen=True)
class ComponentRef:
    id: str
    kind: str
    family: Family
    label: str
    framing: int
    partner: str

    def __post_init__(self):
        if self.kind not in (KNOT, CIRCLE):
            raise ValueError(f"component kind must be knot or linking_circle, got {self.kind!r}")
        if self.label not in LABELS:
            raise ValueError(f"unknown label {self.label!r}")


# -- intersection-curve forests --------------------------------------------


@dataclass(frozen=True)
class CurveNode:
    """A simple closed intersection curve and everything nested in it.

    ``red_incidence`` counts filling sections: intersections of the annular
    region this curve owns with the red sphere of each (signed) eye.
    """

    red_incidence: tuple[tuple[int, int], ...] = ()
    children: tuple["CurveNode", ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "red_incidence", tuple(sorted(tuple(p) for p in self.red_incidence))
        )
        object.__setattr__(self, "children", tuple(self.children))
        for eye, count in self.red_incidence:
            if eye == 0 or count < 0:
                raise ValueError(f"bad red incidence ({eye}, {count})")

    @property
    def red_counts(self) -> dict[int, int]:
        return dict(self.red_incidence)


@dataclass(frozen=True)
class DiscForest:
    """The nesting forest of one disc, plus its outside incidences.

    ``outside_incidence`` counts intersections of the disc minus all its
    curve regions with each signed red sphere.
    """

    roots: tuple[CurveNode, ...] = ()
    outside_incidence: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(self.roots))
        object.__setattr__(
            self, "outside_incidence", tuple(sorted(tuple(p) for p in self.outside_incidence))
        )
        for eye, count in self.outside_incidence:
            if eye == 0 or count < 0:
                raise ValueError(f"bad outside incidence ({eye}, {count})")

    @property
    def outside_counts(self) -> dict[int, int]:
        return dict(self.outside_incidence)


@dataclass(frozen=True)
class CurveForest:
    """All discs of one Whitney family, in a fixed order."""

    discs: tuple[DiscForest, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "discs", tuple(self.discs))

    def nodes(self) -> list[tuple[int, CurveNode, int, int | None]]:
        """Pre-order nodes across discs: (index, node, depth, parent index)."""
        out: list[tuple[int, CurveNode, int, int | None]] = []

        def walk(node: CurveNode, depth: int, parent: int | None):
            idx = len(out)
            out.append((idx, node, depth, parent))
            for child in node.children:
                walk(child, depth + 1, idx)

        for disc in self.discs:
            for root in disc.roots:
                walk(root, 0, None)
        return out

    @property
    def node_count(self) -> int:
        return len(self.nodes())

    @property
    def height(self) -> int:
        nodes = self.nodes()
        return max((depth + 1 for _, _, depth, _ in nodes), default=0)


def level(f: CurveForest, node: int) -> int:
    """Nesting level of a curve: 1 + curves between it and the disc boundary."""
    for idx, _, depth, _ in f.nodes():
        if idx == node:
            return depth + 1
    raise NotFoundError(f"no curve node {node} in forest")


# -- presentations ----------------------------------------------------------

FamilyKey = tuple  # (kind, i, j)
Arrow = tuple[str, str]


def _component_sort_key(c: ComponentRef) -> tuple:
    return c.family.sort_key() + (0 if c.kind == KNOT else 1,)


@dataclass(frozen=True)
class Presentation:
    components: tuple[ComponentRef, ...] = ()
    arrows: frozenset[Arrow] = frozenset()
    provenance: tuple[tuple[FamilyKey, CurveForest], ...] = ()

    def __post_init__(self):
        object.__setattr__(
            self, "components", tuple(sorted(self.components, key=_component_sort_key))
        )
        object.__setattr__(self, "arrows", frozenset(tuple(a) for a in self.arrows))
        object.__setattr__(
            self,
            "provenance",
            tuple(sorted(((tuple(k), f) for k, f in self.provenance), key=lambda kv: kv[0])),
        )
        ids = [c.id for c in self.components]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate component ids")

    @cached_property
    def by_id(self) -> dict[str, ComponentRef]:
        return {c.id: c for c in self.components}

    @cached_property
    def forests(self) -> dict[FamilyKey, CurveForest]:
        return dict(self.provenance)

    def __contains__(self, cid: str) -> bool:
        return cid in self.by_id

    def ref(self, cid: str) -> ComponentRef:
        try:
            return self.by_id[cid]
        except KeyError:
            raise NotFoundError(f"no component {cid!r}") from None

    def knots(self) -> Iterator[ComponentRef]:
        return (c for c in self.components if c.kind == KNOT)

    def circles(self) -> Iterator[ComponentRef]:
        return (c for c in self.components if c.kind == CIRCLE)

    def outgoing(self, cid: str) -> list[str]:
        return sorted(dst for src, dst in self.arrows if src == cid)

    def incoming(self, cid: str) -> list[str]:
        return sorted(src for src, dst in self.arrows if dst == cid)

    def family_members(self, key: FamilyKey) -> list[ComponentRef]:
        return [c for c in self.components if c.family.key == tuple(key)]


EMPTY_PRESENTATION = Presentation()


# -- reports ----------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    subjects: tuple[str, ...] = ()


@dataclass(frozen=True)
class Report:
    violations: tuple[Violation, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def merged(self, other: "Report") -> "Report":
        return Report(self.violations + other.violations, self.notes + other.notes)

    def summary(self) -> str:
        if self.ok:
            return "valid"
        return "; ".join(f"{v.code}: {v.message}" for v in self.violations)


def _acyclic(p: Presentation) -> bool:
    indeg = {c.id: 0 for c in p.components}
    for src, dst in p.arrows:
        if dst in indeg and src in indeg:
            indeg[dst] += 1
    queue = [cid for cid, d in indeg.items() if d == 0]
    seen = 0
    out: dict[str, list[str]] = {c.id: [] for c in p.components}
    for src, dst in p.arrows:
        if src in out and dst in indeg:
            out[src].append(dst)
    while queue:
        cid = queue.pop()
        seen += 1
        for nxt in out[cid]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                queue.append(nxt)
    return seen == len(indeg)


def validate(p: Presentation) -> Report:
    """Structural sanity: arrows, acyclicity, partners, framings, B labels."""
    violations: list[Violation] = []
    ids = set(p.by_id)
    for src, dst in sorted(p.arrows):
        for end in (src, dst):
            if end not in ids:
                violations.append(
                    Violation("arrow-endpoint", f"arrow touches unknown component {end!r}", (src, dst))
                )
    if not _acyclic(p):
        violations.append(Violation("cyclicity", "arrow relation contains a directed cycle"))
    for c in p.components:
        mate = p.by_id.get(c.partner)
        if mate is None:
            violations.append(
                Violation("partner", f"{c.id} names missing partner {c.partner!r}", (c.id,))
            )
            continue
        if mate.partner != c.id or mate.kind == c.kind:
            violations.append(
                Violation("partner", f"{c.id} and {mate.id} are not a knot/circle pair", (c.id, mate.id))
            )
    for c in p.components:
        if c.kind == CIRCLE and c.framing != 0:
            violations.append(
                Violation("framing", f"linking circle {c.id} has framing {c.framing}, must be 0", (c.id,))
            )
    for c in p.components:
        if c.family.kind != B:
            continue
        want = ZERO if (c.family.i < 0) == (c.kind == KNOT) else BULLET
        if side(c.label) != want:
            violations.append(
                Violation(
                    "b-label",
                    f"{c.id} sits on the {side(c.label)} side, index {c.family.i} demands {want}",
                    (c.id,),
                )
            )
    for c in p.components:
        if is_abstract(c.label) and p.outgoing(c.id):
            violations.append(
                Violation(
                    "abstract-outgoing",
                    f"abstract component {c.id} nests others",
                    (c.id,),
                )
            )
    return Report(tuple(violations))


def depth(p: Presentation, cid: str) -> int:
    """Depth of a component: 1 on minimal elements, else 1 + min over arrows out."""
    p.ref(cid)
    memo: dict[str, int] = {}

    def go(x: str) -> int:
        if x in memo:
            return memo[x]
        succ = [dst for src, dst in p.arrows if src == x and dst in p.by_id]
        memo[x] = 1 if not succ else 1 + min(go(ss) for ss in succ)
        return memo[x]

    return go(cid)


def max_depth(p: Presentation) -> int:
    return max((depth(p, c.id) for c in p.components), default=0)


def nests_in(p: Presentation, i: str, j: str) -> bool:
    """Whether the handle of ``i`` enters the hollow carved by ``j``."""
    p.ref(i)
    p.ref(j)
    return (i, j) in p.arrows


def lodges(p: Presentation, j: str, i: str) -> bool:
    """Alias through the arrow primitive: ``j`` lodges ``i`` iff ``i`` nests in ``j``."""
    return nests_in(p, i, j)


# -- family construction ----------------------------------------------------


def knot_id(kind: str, i: int, j: int | None = None, curve: int | None = None) -> str:
    if kind == B:
        return f"b({i})"
    return f"{kind}({i},{j})#{curve}"


def circle_id(kind: str, i: int, j: int | None = None, curve: int | None = None) -> str:
    if kind == B:
        return f"b'({i})"
    return f"{kind}'({i},{j})#{curve}"


def build_b_pair(i: int) -> tuple[ComponentRef, ComponentRef]:
    """The unlink pair for index ``i``: 0-knot below the cut, •-knot above."""
    if i == 0:
        raise ValueError("B indices are nonzero")
    kid, cid = knot_id(B, i), circle_id(B, i)
    knot_label = ZERO if i < 0 else BULLET
    knot = ComponentRef(kid, KNOT, Family(B, i), knot_label, 0, cid)
    circ = ComponentRef(cid, CIRCLE, Family(B, i), opposite(knot_label), 0, kid)
    return knot, circ


def build_family(f: CurveForest, i: int, j: int) -> tuple[ComponentRef, ...]:
    """One knot and one linking circle per curve of a Whitney family.

    ``i < 0`` builds a southern family with maximal (level-1) knots
    0-labelled; ``i > 0`` a northern one with maximal knots bulleted.
    Labels alternate with nesting depth and circles take the opposite
    label of their knots.
    """
    if i == 0:
        raise ValueError("family index i must be nonzero")
    if j == 0:
        raise ValueError("family index j must be nonzero")
    kind = S if i < 0 else N
    top = ZERO if kind == S else BULLET
    out: list[ComponentRef] = []
    for idx, _node, dep, _parent in f.nodes():
        label = top if dep % 2 == 0 else opposite(top)
        kid = knot_id(kind, i, j, idx)
        cid = circle_id(kind, i, j, idx)
        fam = Family(kind, i, j, idx)
        out.append(ComponentRef(kid, KNOT, fam, label, 0, cid))
        out.append(ComponentRef(cid, CIRCLE, fam, opposite(label), 0, kid))
    return tuple(out)


def family_arrows(f: CurveForest, i: int, j: int) -> frozenset[Arrow]:
    """Nesting arrows inside one family.

    Outer knots are maximal, so knot arrows run parent to child; circles
    carry the opposite order, child circle to parent circle.
    """
    kind = S if i < 0 else N
    arrows: set[Arrow] = set()
    for idx, _node, _dep, parent in f.nodes():
        if parent is None:
            continue
        arrows.add((knot_id(kind, i, j, parent), knot_id(kind, i, j, idx)))
        arrows.add((circle_id(kind, i, j, idx), circle_id(kind, i, j, parent)))
    return frozenset(arrows)
