"""Compile a finger|Whitney system into a carving/surgery presentation.

The compiler works in the lifted, signed-index picture: a fixed 3-sphere
separates positive from negative eyes, and only data near that cut leaves
a combinatorial residue.

* Every finger lift crossing the cut plunges the thickened handle region
  of its green eye into the cut sphere, contributing one unlink pair
  ``b(j)``, ``b'(j)`` per plunged index ``j``.
* Each Whitney family's intersection curves with the cut sphere form a
  nesting forest; each curve becomes a knot/circle pair (southern when the
  family's red index is negative, northern otherwise).
* Arrows come from curve inclusion, from which red spheres the disc
  regions meet (filling sections), and from the cut-crossing discs'
  plunge circles; targets are emitted only where the labels admit them,
  so the output's arrows are always a subset of the full prescribed set.

Every emitted component and arrow carries a trace event naming the rule
that produced it; replaying a trace reproduces the presentation exactly.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from .fwcs_rules import check_fwcs
from .presentations import (
    Arrow,
    BULLET,
    ComponentRef,
    CurveForest,
    CurveNode,
    DiscForest,
    N,
    Presentation,
    S,
    ZERO,
    build_b_pair,
    build_family,
    circle_id,
    knot_id,
    side,
)
from .systems import (
    FWSystem,
    InvalidSystemError,
    is_boundary_germ_coinciding,
    lifted_crossings,
    unreindex,
    wrap,
)

GeometryKey = tuple[int, int]


class NeedsCoverError(ValueError):
    """The system is not spread out enough; lift to a higher cover first."""


class InvalidGeometryError(ValueError):
    """The intersection geometry does not match the system."""


@dataclass(frozen=True)
class CompilerInput:
    """A boundary-germ coinciding system plus its cut-sphere geometry.

    ``geometry`` maps signed Whitney-family indices ``(i, j)`` to the
    nesting forest of their intersection curves with the cut sphere.
    ``separation_ok`` asserts that every sphere and disc is small against
    the eye circle, the hypothesis under which the construction reads off
    a presentation; the default grants it exactly when every winding has
    magnitude below one.
    """

    system: FWSystem
    geometry: tuple[tuple[GeometryKey, CurveForest], ...] = ()
    separation_ok: bool = False

    def __post_init__(self):
        object.__setattr__(
            self,
            "geometry",
            tuple(sorted((tuple(k), f) for k, f in self.geometry)),
        )

    @classmethod
    def make(
        cls,
        system: FWSystem,
        geometry: dict[GeometryKey, CurveForest] | None = None,
        separation_ok: bool | None = None,
    ) -> "CompilerInput":
        if geometry is None:
            geometry = default_geometry(system)
        if separation_ok is None:
            separation_ok = all(abs(d.shift) < system.k for d in system.discs())
        return cls(system, tuple(sorted(geometry.items())), separation_ok)

    @property
    def forests(self) -> dict[GeometryKey, CurveForest]:
        return dict(self.geometry)


@dataclass(frozen=True)
class TraceEvent:
    kind: str  # "component" | "geometry" | "arrow" | "note"
    rule: str
    component: ComponentRef | None = None
    family: tuple | None = None  # (kind, i, j)
    forest: CurveForest | None = None
    arrow: Arrow | None = None
    optional: bool = False
    note: str = ""


@dataclass(frozen=True)
class CompilerOutput:
    presentation: Presentation
    trace: tuple[TraceEvent, ...]


def plunged_pies(s: FWSystem) -> frozenset[int]:
    """Signed green indices of cut-crossing finger lifts.

    These index the unlink knots: each such crossing plunges the green
    eye's thickened handle region into the cut sphere.
    """
    if not s.lifted:
        raise InvalidSystemError("plunged pies are read off the lifted window")
    return frozenset(
        d.green for d in s.fingers if (d.red > 0) != (d.green > 0)
    )


def default_geometry(s: FWSystem) -> dict[GeometryKey, CurveForest]:
    """Geometry derived from the system itself.

    A Whitney record carrying its own curve forest contributes it to every
    family its crossing lifts land in; records without one get the minimal
    scenario, a single cut curve.  Conflicting forests for one family are
    rejected.
    """
    window = lifted_crossings(s)
    single = CurveForest((DiscForest(roots=(CurveNode(),)),))
    out: dict[GeometryKey, CurveForest] = {}
    for d in window.whitneys:
        forest = d.geometry if d.geometry is not None else single
        key = (d.red, d.green)
        if key in out and out[key] != forest:
            raise InvalidGeometryError(
                f"family {key} is given two different curve forests"
            )
        out[key] = forest
    return out


def min_cover_degree(s: FWSystem) -> int:
    """Smallest covering degree bringing every winding magnitude below one."""
    if s.k == 0:
        return 1
    worst = max((abs(d.shift) for d in s.discs()), default=0)
    return worst // s.k + 1


def _whitney_lift_exists(s: FWSystem, i: int, j: int) -> bool:
    p, q = unreindex(i), unreindex(j)
    return any(
        w.shift == q - p and wrap(p, s.k) == w.red for w in s.whitneys
    )


def compile_system(inp: CompilerInput) -> CompilerOutput:
    """Run the construction and collect its combinatorial output."""
    if not inp.separation_ok:
        raise NeedsCoverError(
            "system is not certified separated; lift_to_cover to degree "
            f">= {min_cover_degree(inp.system)} first"
        )
    s = inp.system
    if s.lifted:
        raise InvalidSystemError("compile takes a base-indexed system")
    if not is_boundary_germ_coinciding(s):
        raise InvalidGeometryError(
            "system must be boundary-germ coinciding: total pairing, shared "
            "endpoints and displacements, zero relative twists"
        )
    forests = inp.forests
    for (i, j), forest in sorted(forests.items()):
        if i == 0 or j == 0:
            raise InvalidGeometryError(f"geometry key ({i},{j}) uses the forbidden index 0")
        if not _whitney_lift_exists(s, i, j):
            raise InvalidGeometryError(
                f"geometry names family ({i},{j}) but no Whitney disc lifts there"
            )

    window = lifted_crossings(s)
    plunged = sorted(plunged_pies(window))

    trace: list[TraceEvent] = []
    components: list[ComponentRef] = []
    arrows: set[Arrow] = set()
    arrow_events: dict[Arrow, TraceEvent] = {}

    def emit_arrow(rule: str, src: str, dst: str, optional: bool = False):
        a = (src, dst)
        if a not in arrows:
            arrows.add(a)
            ev = TraceEvent("arrow", rule, arrow=a, optional=optional)
            arrow_events[a] = ev
            trace.append(ev)

    # Unlink pairs for the plunged indices.
    for j in plunged:
        knot, circ = build_b_pair(j)
        components += [knot, circ]
        trace.append(TraceEvent("component", "plunge-unlink", component=knot))
        trace.append(TraceEvent("component", "plunge-unlink", component=circ))

    # Knot/circle pairs per intersection curve, and the inclusion arrows.
    fam_components: dict[GeometryKey, tuple[ComponentRef, ...]] = {}
    for (i, j), forest in sorted(forests.items()):
        fam = build_family(forest, i, j)
        fam_components[(i, j)] = fam
        kind = S if i < 0 else N
        trace.append(TraceEvent("geometry", "curve-family", family=(kind, i, j), forest=forest))
        for c in fam:
            components.append(c)
            trace.append(TraceEvent("component", "curve-family", component=c))
        for idx, _node, _dep, parent in forest.nodes():
            if parent is None:
                continue
            emit_arrow("curve-inclusion", knot_id(kind, i, j, parent), knot_id(kind, i, j, idx))
            emit_arrow("curve-inclusion", circle_id(kind, i, j, idx), circle_id(kind, i, j, parent))

    plunged_set = set(plunged)
    by_id = {c.id: c for c in components}

    def nested_unlinks(root_index: int) -> list[int]:
        """Plunged indices whose handle regions the root red disc runs through.

        Read off the outside incidences of every family rooted there; only
        matching-sign indices produce arrows (opposite-side incidences have
        no carving to enter) and only plunged ones name a component.
        """
        hit: set[int] = set()
        for (i, j), forest in forests.items():
            if i != root_index:
                continue
            for disc in forest.discs:
                for eye, count in disc.outside_incidence:
                    if count > 0:
                        hit.add(eye)
        out = []
        for eye in sorted(hit):
            if eye in plunged_set and (eye > 0) == (root_index > 0):
                out.append(eye)
            else:
                trace.append(
                    TraceEvent(
                        "note",
                        "outside-incidence-skipped",
                        note=f"red disc {root_index} meets red sphere {eye} outside all curves; "
                        f"no admissible unlink target",
                    )
                )
        return out

    # Plunge circles nest what their red discs nest: the maximal knots of
    # every family rooted at the same index, plus unlink knots whose handle
    # regions the red disc's filling sections run through.
    for i in plunged:
        cid = circle_id("B", i)
        for (fi, fj), forest in sorted(forests.items()):
            if fi != i:
                continue
            kind = S if fi < 0 else N
            for idx, _node, dep, _parent in forest.nodes():
                if dep == 0:
                    emit_arrow("red-disc-nesting", cid, knot_id(kind, fi, fj, idx))
        for eye in nested_unlinks(i):
            emit_arrow("red-disc-unlink", cid, knot_id("B", eye))

    # Curve knots enter the unlink handles their own regions meet.
    for (i, j), forest in sorted(forests.items()):
        kind = S if i < 0 else N
        for idx, node, _dep, _parent in forest.nodes():
            knot = by_id[knot_id(kind, i, j, idx)]
            for eye, count in node.red_incidence:
                if count <= 0:
                    continue
                compatible = (side(knot.label) == BULLET and eye < 0) or (
                    side(knot.label) == ZERO and eye > 0
                )
                if compatible and eye in plunged_set:
                    emit_arrow("curve-filling-section", knot.id, knot_id("B", eye), optional=True)
                else:
                    trace.append(
                        TraceEvent(
                            "note",
                            "filling-section-skipped",
                            note=f"{knot.id} meets red sphere {eye} ({count}x); no admissible "
                            f"unlink target",
                        )
                    )

    # Minimal circles of cut-crossing families hang below the plunge circle
    # of their green index; same-hemisphere families instead chain into the
    # families rooted at that index and the unlink knots its red disc meets.
    for (i, j), forest in sorted(forests.items()):
        kind = S if i < 0 else N
        roots = [idx for idx, _n, dep, _p in forest.nodes() if dep == 0]
        if (i > 0) != (j > 0):
            if j not in plunged_set:
                raise InvalidGeometryError(
                    f"family ({i},{j}) crosses the cut but index {j} is not plunged"
                )
            for idx in roots:
                emit_arrow("minimal-circle-plunge", circle_id(kind, i, j, idx), f"b'({j})")
        else:
            targets: list[str] = []
            for (fi, fj), other in sorted(forests.items()):
                if fi != j:
                    continue
                other_kind = S if fi < 0 else N
                for oidx, _n, dep, _p in other.nodes():
                    if dep == 0:
                        targets.append(knot_id(other_kind, fi, fj, oidx))
            unlink_targets = [
                knot_id("B", eye)
                for eye in nested_unlinks(j)
                if (kind == S and eye < 0) or (kind == N and eye > 0)
            ]
            for idx in roots:
                for t in targets:
                    emit_arrow("minimal-circle-chain", circle_id(kind, i, j, idx), t)
                for t in unlink_targets:
                    emit_arrow("minimal-circle-unlink", circle_id(kind, i, j, idx), t)

    # Self-nesting counts of the disc union through its own maximal curves
    # are recorded but deliberately produce no arrows.
    for (i, j), forest in sorted(forests.items()):
        roots = sum(1 for _idx, _n, dep, _p in forest.nodes() if dep == 0)
        if roots:
            trace.append(
                TraceEvent(
                    "note",
                    "self-nesting-count",
                    note=f"family ({i},{j}): disc union nests once in each of its "
                    f"{roots} maximal curves; no arrows emitted",
                )
            )

    provenance = tuple(
        ((S if i < 0 else N, i, j), forest) for (i, j), forest in sorted(forests.items())
    )
    presentation = Presentation(tuple(components), frozenset(arrows), provenance)
    report = check_fwcs(presentation)
    assert report.ok, f"compiled presentation fails its own checks: {report.summary()}"
    return CompilerOutput(presentation, tuple(trace))


def replay_trace(trace: tuple[TraceEvent, ...]) -> Presentation:
    """Rebuild the compiled presentation from its trace alone."""
    components: list[ComponentRef] = []
    arrows: set[Arrow] = set()
    provenance: list[tuple[tuple, CurveForest]] = []
    for ev in trace:
        if ev.kind == "component" and ev.component is not None:
            components.append(ev.component)
        elif ev.kind == "geometry" and ev.family is not None and ev.forest is not None:
            provenance.append((ev.family, ev.forest))
        elif ev.kind == "arrow" and ev.arrow is not None:
            arrows.add(ev.arrow)
    return Presentation(tuple(components), frozenset(arrows), tuple(provenance))
