"""Arrow generation and checking for finger|Whitney presentations.

The full arrow set of a presentation with family data is determined by the
labels, the hemisphere signs and the curve forests:

* within each S/N family, knots order by curve inclusion and circles by
  the opposite order;
* inside the unlink block, every bulleted circle points to every
  0-labelled knot and dually;
* a maximal knot's circle points to the circle ``b'(j)`` of the opposite
  hemisphere it plunges into, and ``b'(i)`` points down to the maximal
  knots of every family rooted at ``i``;
* bulleted (0-labelled) knots of any level point to every ``b(j)`` with
  ``j`` negative (positive);
* maximal southern (northern) knots' circles point to every negative
  (positive) ``b(j)``;
* circles of maximal knots chain into the maximal knots of families whose
  first index matches their family's second index.

Presentations may carry any subset of this full set and still count as
well-formed; the checker verifies the subset property together with the
label discipline.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, replace
from importlib import resources

from .presentations import (
    Arrow,
    B,
    BULLET,
    CIRCLE,
    ComponentRef,
    CurveForest,
    KNOT,
    N,
    Presentation,
    Report,
    S,
    Violation,
    ZERO,
    circle_id,
    is_abstract,
    knot_id,
    level,
    side,
    validate,
)


class InvalidFamilyError(ValueError):
    """Family data is malformed or missing the forest it needs."""


class CannotCheckLevelError(ValueError):
    """Levels are unknown because a family has no recorded forest."""


@dataclass(frozen=True)
class _FamilyData:
    kind: str
    i: int
    j: int
    forest: CurveForest
    knots: tuple[ComponentRef, ...]  # by curve index

    @property
    def maximal_knots(self) -> tuple[ComponentRef, ...]:
        roots = [idx for idx, _n, dep, _p in self.forest.nodes() if dep == 0]
        return tuple(self.knots[idx] for idx in roots)


def _family_data(p: Presentation) -> dict[tuple, _FamilyData]:
    """Collect and sanity-check the S/N families of a presentation."""
    grouped: dict[tuple, list[ComponentRef]] = {}
    for c in p.components:
        if c.family.kind in (S, N):
            grouped.setdefault(c.family.key, []).append(c)
    out: dict[tuple, _FamilyData] = {}
    for key in sorted(grouped):
        kind, i, j = key
        forest = p.forests.get(key)
        if forest is None:
            raise InvalidFamilyError(f"family {kind}({i},{j}) has no curve forest recorded")
        knots = {c.family.curve: c for c in grouped[key] if c.kind == KNOT}
        count = forest.node_count
        if sorted(knots) != list(range(count)) or len(grouped[key]) != 2 * count:
            raise InvalidFamilyError(
                f"family {kind}({i},{j}) has {len(grouped[key])} components for "
                f"{count} curves"
            )
        out[key] = _FamilyData(kind, i, j, forest, tuple(knots[n] for n in range(count)))
    return out


def generate_fwcs_arrows(p: Presentation) -> Presentation:
    """Replace the arrows of ``p`` with the full prescribed set."""
    families = _family_data(p)
    b_knots = {c.family.i: c for c in p.components if c.family.kind == B and c.kind == KNOT}
    b_circles = {c.family.i: c for c in p.components if c.family.kind == B and c.kind == CIRCLE}
    arrows: set[Arrow] = set()

    # Inclusion order inside each family.
    for key, fam in families.items():
        for idx, _node, _dep, parent in fam.forest.nodes():
            if parent is None:
                continue
            arrows.add((knot_id(fam.kind, fam.i, fam.j, parent), knot_id(fam.kind, fam.i, fam.j, idx)))
            arrows.add((circle_id(fam.kind, fam.i, fam.j, idx), circle_id(fam.kind, fam.i, fam.j, parent)))

    # Unlink block: bulleted circles over 0-knots and dually.
    for i, circ in sorted(b_circles.items()):
        for j, knot in sorted(b_knots.items()):
            if side(circ.label) != side(knot.label):
                arrows.add((circ.id, knot.id))

    for key, fam in sorted(families.items()):
        for root in fam.maximal_knots:
            # Plunge arrows: a maximal knot's circle points at the circle of
            # the opposite-hemisphere unlink component it crosses into.
            if (fam.j > 0) != (fam.i > 0) and fam.j in b_circles:
                arrows.add((root.partner, b_circles[fam.j].id))
            # The unlink circle over the family's root index points at every
            # maximal knot rooted there.
            if fam.i in b_circles:
                arrows.add((b_circles[fam.i].id, root.id))
            # Maximal knots' circles over the matching-sign unlink knots.
            for j, knot in sorted(b_knots.items()):
                if (fam.kind == S and j < 0) or (fam.kind == N and j > 0):
                    arrows.add((root.partner, knot.id))
        # Any knot of the family points at unlink knots of the opposite side.
        for knot_ref in fam.knots:
            for j, bk in sorted(b_knots.items()):
                if side(knot_ref.label) == BULLET and j < 0:
                    arrows.add((knot_ref.id, bk.id))
                elif side(knot_ref.label) == ZERO and j > 0:
                    arrows.add((knot_ref.id, bk.id))

    # Chains between families of one hemisphere sharing a middle index.
    for key1, fam1 in sorted(families.items()):
        for key2, fam2 in sorted(families.items()):
            if fam1.kind != fam2.kind or fam1.j != fam2.i:
                continue
            for root1 in fam1.maximal_knots:
                for root2 in fam2.maximal_knots:
                    arrows.add((root1.partner, root2.id))

    result = replace(p, arrows=frozenset(arrows))
    assert _no_cycles(result), "generated arrow relation must be a partial order"
    return result


def _no_cycles(p: Presentation) -> bool:
    from .presentations import _acyclic

    return _acyclic(p)


def check_fwcs(p: Presentation) -> Report:
    """Is ``p`` a (possibly arrow-thinned) finger|Whitney presentation?"""
    report = validate(p)
    violations = list(report.violations)
    notes = list(report.notes)

    seen_b: set[int] = set()
    for c in p.components:
        if c.family.kind == B and c.kind == KNOT:
            if c.family.i in seen_b:
                violations.append(
                    Violation("b-duplicate", f"two unlink knots with index {c.family.i}", (c.id,))
                )
            seen_b.add(c.family.i)

    try:
        families = _family_data(p)
    except InvalidFamilyError as err:
        violations.append(Violation("family-data", str(err)))
        return Report(tuple(violations), tuple(notes))

    for key, fam in families.items():
        top = ZERO if fam.kind == S else BULLET
        for idx, _node, dep, _parent in fam.forest.nodes():
            knot = fam.knots[idx]
            want = top if dep % 2 == 0 else (BULLET if top == ZERO else ZERO)
            if side(knot.label) != want:
                violations.append(
                    Violation(
                        "label-alternation",
                        f"{knot.id} at level {dep + 1} should sit on the {want} side",
                        (knot.id,),
                    )
                )
            circ = p.by_id.get(knot.partner)
            if circ is not None and side(circ.label) == side(knot.label):
                violations.append(
                    Violation(
                        "circle-label",
                        f"{circ.id} must take the opposite label of {knot.id}",
                        (circ.id, knot.id),
                    )
                )

    full = generate_fwcs_arrows(p).arrows
    for arrow in sorted(p.arrows - full):
        violations.append(
            Violation("arrow-excess", f"arrow {arrow[0]} -> {arrow[1]} is not prescribed", arrow)
        )

    negative_b = any(c.family.kind == B and c.family.i < 0 for c in p.components)
    positive_b = any(c.family.kind == B and c.family.i > 0 for c in p.components)
    if families and (negative_b or positive_b):
        notes.append(
            "labelled-knot arrows target every unlink knot of the matching sign "
            "present in the link, whether or not a family touches it"
        )
    return Report(tuple(violations), tuple(notes))


# -- optimized presentations -------------------------------------------------


@dataclass(frozen=True)
class OptimizedCert:
    """External certificate for the optimized form.

    ``a``, ``b``, ``c`` partition the S/N knots.  ``tori`` lists, per
    a-knot, the b-knots threaded by its solid torus; ``handlebodies``
    lists, per a-knot, groups of c-knots clasping it, one group per
    1-handle.
    """

    a: frozenset[str] = frozenset()
    b: frozenset[str] = frozenset()
    c: frozenset[str] = frozenset()
    tori: tuple[tuple[str, tuple[str, ...]], ...] = ()
    handlebodies: tuple[tuple[str, tuple[tuple[str, ...], ...]], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "a", frozenset(self.a))
        object.__setattr__(self, "b", frozenset(self.b))
        object.__setattr__(self, "c", frozenset(self.c))
        object.__setattr__(
            self, "tori", tuple(sorted((alpha, tuple(betas)) for alpha, betas in self.tori))
        )
        object.__setattr__(
            self,
            "handlebodies",
            tuple(
                sorted(
                    (alpha, tuple(tuple(g) for g in groups))
                    for alpha, groups in self.handlebodies
                )
            ),
        )


def _knot_levels(p: Presentation) -> dict[str, int]:
    levels: dict[str, int] = {}
    sn_knots = [c for c in p.components if c.family.kind in (S, N) and c.kind == KNOT]
    for c in sn_knots:
        forest = p.forests.get(c.family.key)
        if forest is None:
            raise CannotCheckLevelError(
                f"family {c.family.key} has no curve forest; levels unknown"
            )
        levels[c.id] = level(forest, c.family.curve)
    return levels


def check_optimized(p: Presentation, cert: OptimizedCert) -> Report:
    """Verify the optimized form against an externally supplied certificate."""
    violations: list[Violation] = []
    levels = _knot_levels(p)
    sn_ids = set(levels)

    for cid, lv in sorted(levels.items()):
        if lv > 2:
            violations.append(
                Violation("level", f"{cid} has level {lv}, optimized form allows at most 2", (cid,))
            )
    for c in p.components:
        if c.kind == KNOT and c.framing != 0:
            violations.append(
                Violation("knot-framing", f"{c.id} has framing {c.framing}, must be 0", (c.id,))
            )

    named = cert.a | cert.b | cert.c
    if cert.a & cert.b or cert.a & cert.c or cert.b & cert.c:
        violations.append(Violation("cert-partition", "certificate classes overlap"))
    if named != sn_ids:
        violations.append(
            Violation(
                "cert-partition",
                f"certificate names {sorted(named - sn_ids)} and misses {sorted(sn_ids - named)}",
            )
        )
    for cid in sorted(sn_ids & (cert.b | cert.c)):
        if p.outgoing(cid):
            violations.append(
                Violation("minimality", f"{cid} is in B∪C but has outgoing arrows", (cid,))
            )
    for cid, lv in sorted(levels.items()):
        if lv == 2 and cid not in cert.b | cert.c:
            violations.append(
                Violation("cert-level2", f"level-2 knot {cid} must lie in B∪C", (cid,))
            )

    tori = dict(cert.tori)
    if set(tori) - cert.a:
        violations.append(Violation("torus-key", "tori are indexed by A-knots only"))
    seen_b: set[str] = set()
    for alpha in sorted(tori):
        for beta in tori[alpha]:
            if beta not in cert.b:
                violations.append(
                    Violation("torus-member", f"{beta} threaded by {alpha}'s torus is not a B-knot", (beta,))
                )
                continue
            if beta in seen_b:
                violations.append(
                    Violation("torus-member", f"{beta} lies in two solid tori", (beta,))
                )
            seen_b.add(beta)
            if beta in levels and alpha in levels:
                alpha_kind = p.ref(alpha).family.kind
                beta_kind = p.ref(beta).family.kind
                want = 1 if beta_kind == alpha_kind else 2
                if levels[beta] != want:
                    violations.append(
                        Violation(
                            "torus-level",
                            f"{beta} in {alpha}'s torus must be level {want}, is {levels[beta]}",
                            (alpha, beta),
                        )
                    )
    for beta in sorted(cert.b - seen_b):
        violations.append(Violation("torus-cover", f"B-knot {beta} lies in no solid torus", (beta,)))

    handles = dict(cert.handlebodies)
    if set(handles) - cert.a:
        violations.append(Violation("handlebody-key", "handlebodies are indexed by A-knots only"))
    seen_c: set[str] = set()
    for alpha in sorted(handles):
        for group in handles[alpha]:
            for gamma in group:
                if gamma not in cert.c:
                    violations.append(
                        Violation(
                            "handlebody-member",
                            f"{gamma} clasping {alpha} is not a C-knot",
                            (gamma,),
                        )
                    )
                    continue
                if gamma in seen_c:
                    violations.append(
                        Violation("handlebody-member", f"{gamma} lies in two handlebodies", (gamma,))
                    )
                seen_c.add(gamma)
                if gamma in levels and alpha in levels:
                    alpha_kind = p.ref(alpha).family.kind
                    gamma_kind = p.ref(gamma).family.kind
                    want = 2 if gamma_kind == alpha_kind else 1
                    if levels[gamma] != want:
                        violations.append(
                            Violation(
                                "handlebody-level",
                                f"{gamma} in {alpha}'s handlebody must be level {want}, is {levels[gamma]}",
                                (alpha, gamma),
                            )
                        )
    for gamma in sorted(cert.c - seen_c):
        violations.append(Violation("handlebody-cover", f"C-knot {gamma} lies in no handlebody", (gamma,)))

    return Report(tuple(violations))


# -- dependency rules ---------------------------------------------------------


def classify(c: ComponentRef) -> tuple[str, str, str, str]:
    """Classification used by the dependency table.

    ``(family kind, hemisphere sign, knot/circle, label side)`` where the
    sign is that of the unlink index for B components and of the second
    family index for S/N components.
    """
    if c.family.kind == B:
        sign = "+" if c.family.i > 0 else "-"
    else:
        sign = "+" if c.family.j > 0 else "-"
    role = "k" if c.kind == KNOT else "c"
    return (c.family.kind, sign, role, side(c.label))


def _load_table() -> tuple[dict, ...]:
    text = resources.files("fwbench").joinpath("data/dependency_rules.json").read_text()
    return tuple(json.loads(text)["pairs"])


_TABLE: tuple[dict, ...] | None = None


def dependency_table() -> tuple[dict, ...]:
    global _TABLE
    if _TABLE is None:
        _TABLE = _load_table()
    return _TABLE


def _matches(pattern: list, cls: tuple[str, str, str, str]) -> bool:
    return all(want in ("*", got) for want, got in zip(pattern, cls))


def check_dependency_rules(p: Presentation) -> Report:
    """Arrow-wise admissibility against the optimized dependency table.

    Every arrow's (source, target) classification pair must appear in the
    table, and an arrow from an S/N circle to an S/N knot must match the
    circle family's second index with the knot family's first.
    """
    violations: list[Violation] = []
    table = dependency_table()
    for src_id, dst_id in sorted(p.arrows):
        src, dst = p.ref(src_id), p.ref(dst_id)
        src_cls, dst_cls = classify(src), classify(dst)
        if not any(
            _matches(row["src"], src_cls) and _matches(row["dst"], dst_cls) for row in table
        ):
            violations.append(
                Violation(
                    "dependency-pair",
                    f"arrow {src_id} -> {dst_id} has no admissible classification "
                    f"{src_cls} -> {dst_cls}",
                    (src_id, dst_id),
                )
            )
        if (
            src.kind == CIRCLE
            and dst.kind == KNOT
            and src.family.kind in (S, N)
            and dst.family.kind in (S, N)
            and src.family.j != dst.family.i
        ):
            violations.append(
                Violation(
                    "index-chain",
                    f"circle of family ({src.family.i},{src.family.j}) may only exceed knots "
                    f"of families rooted at {src.family.j}, not {dst.family.i}",
                    (src_id, dst_id),
                )
            )
    return Report(tuple(violations))
