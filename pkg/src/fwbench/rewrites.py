"""Precondition-guarded rewrite operations on presentations.

Every operation is transactional: preconditions are checked against the
input and a typed error leaves it untouched; on success a fresh
presentation is returned together with an exact diff.  Label moves never
cross the 0/• divide — a 0-labelled handle can only become ⊘ and back,
and dually for bullets.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

from .presentations import (
    ABSTRACT_BULLET,
    ABSTRACT_ZERO,
    Arrow,
    BULLET,
    CIRCLE,
    ComponentRef,
    KNOT,
    NotFoundError,
    Presentation,
    ZERO,
    abstract_form,
    concrete_form,
    is_abstract,
    side,
    validate,
)

MAKE_ABSTRACT = "MakeAbstract"
MAKE_CONCRETE = "MakeConcrete"
CANCEL_KNOT_CIRCLE = "CancelKnotCircle"
CANCEL_HOPF = "CancelHopf"
SLIDE = "Slide"

SLIDE_VARIANTS = ("00", "••", "0•", "•0")
_VARIANT_ALIASES = {"oo": "00", "bb": "••", "ob": "0•", "bo": "•0"}


class RewriteError(Exception):
    """Base of the typed precondition failures; carries a stable code."""

    code = "rewrite-error"


class ModeConflictError(RewriteError):
    code = "mode-conflict"


class NotAbstractError(RewriteError):
    code = "not-abstract"


class OrderConflictError(RewriteError):
    code = "order-conflict"


class SourceConflictError(RewriteError):
    code = "source-conflict"


class BlockedError(RewriteError):
    code = "blocked"


class NotSplitError(RewriteError):
    code = "not-split"


class VariantMismatchError(RewriteError):
    code = "variant-mismatch"


@dataclass(frozen=True)
class SplitFlag:
    """Caller-supplied witness that a knot/circle pair is a split Hopf sublink."""

    pair: tuple[str, str]
    is_split_hopf: bool = False


@dataclass(frozen=True)
class RewriteOp:
    kind: str
    targets: tuple[str, ...] = ()
    aprime: tuple[str, ...] = ()
    knot: str | None = None
    is_split_hopf: bool = False
    alpha: str | None = None
    beta_prime: str | None = None
    variant: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "targets", tuple(self.targets))
        object.__setattr__(self, "aprime", tuple(self.aprime))
        if self.variant in _VARIANT_ALIASES:
            object.__setattr__(self, "variant", _VARIANT_ALIASES[self.variant])


@dataclass(frozen=True)
class Diff:
    added_components: tuple[ComponentRef, ...] = ()
    removed_components: tuple[ComponentRef, ...] = ()
    label_changes: tuple[tuple[str, str, str], ...] = ()
    added_arrows: tuple[Arrow, ...] = ()
    removed_arrows: tuple[Arrow, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def empty(self) -> bool:
        return not (
            self.added_components
            or self.removed_components
            or self.label_changes
            or self.added_arrows
            or self.removed_arrows
        )


@dataclass(frozen=True)
class ApplyResult:
    presentation: Presentation
    diff: Diff


def _reachable(p: Presentation, src: str, dst: str) -> bool:
    """Directed arrow path from src to dst, i.e. src exceeds dst in the order."""
    if src == dst:
        return True
    out: dict[str, list[str]] = {}
    for a, b in p.arrows:
        out.setdefault(a, []).append(b)
    stack, seen = [src], {src}
    while stack:
        node = stack.pop()
        for nxt in out.get(node, []):
            if nxt == dst:
                return True
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return False


def _mode(p: Presentation) -> str | None:
    """⊘ or ★ when the presentation is already abstract on that side."""
    for c in p.components:
        if c.label == ABSTRACT_ZERO:
            return ABSTRACT_ZERO
        if c.label == ABSTRACT_BULLET:
            return ABSTRACT_BULLET
    return None


def _relabel(p: Presentation, changes: dict[str, str]) -> Presentation:
    comps = tuple(
        replace(c, label=changes[c.id]) if c.id in changes else c for c in p.components
    )
    return replace(p, components=comps)


def make_abstract(p: Presentation, targets: set[str]) -> Presentation:
    """Declare a set of same-side concrete handles abstract.

    Abstract handles keep their incoming arrows (carvings still hollow them
    out) but lose their outgoing ones (they no longer nest anything).
    """
    targets = set(targets)
    refs = [p.ref(t) for t in sorted(targets)]
    if not refs:
        return p
    sides = {side(r.label) for r in refs}
    if len(sides) > 1:
        raise ModeConflictError("targets mix 0-side and •-side handles")
    for r in refs:
        if is_abstract(r.label):
            raise NotAbstractError(f"{r.id} is already abstract")
    mode = _mode(p)
    want = abstract_form(refs[0].label)
    if mode is not None and mode != want:
        raise ModeConflictError(
            f"presentation is already {mode}-abstract; only {concrete_form(mode)}-labelled "
            f"handles may be made abstract"
        )
    out = _relabel(p, {r.id: abstract_form(r.label) for r in refs})
    kept = frozenset(a for a in out.arrows if a[0] not in targets)
    return replace(out, arrows=kept)


def make_concrete(p: Presentation, aprime: set[str]) -> Presentation:
    """Re-embed abstract linking circles, reversing arrows through their knots.

    For each arrow from a knot ``β`` into a knot of the chosen set, the
    re-embedded circle ``α'`` picks up an arrow to ``β'``.  Requires that no
    ``β'`` already exceeds any ``α'`` in the order.
    """
    aprime = set(aprime)
    if not aprime:
        return p
    circle_refs = [p.ref(x) for x in sorted(aprime)]
    for r in circle_refs:
        if r.kind != CIRCLE:
            raise NotAbstractError(f"{r.id} is not a linking circle")
        if not is_abstract(r.label):
            raise NotAbstractError(f"{r.id} is not abstract")
    if len({r.label for r in circle_refs}) > 1:
        raise ModeConflictError("abstract circles mix ⊘ and ★")
    knots = {r.partner: r.id for r in circle_refs}  # knot id -> its circle id
    sources: set[str] = set()
    for src, dst in p.arrows:
        if dst in knots:
            sources.add(src)
    for b in sorted(sources):
        if p.ref(b).kind != KNOT:
            raise SourceConflictError(
                f"arrow into the re-embedded set comes from linking circle {b}"
            )
    for b in sorted(sources):
        beta_circle = p.ref(b).partner
        for alpha_circle in sorted(knots.values()):
            if _reachable(p, beta_circle, alpha_circle):
                raise OrderConflictError(
                    f"{beta_circle} already exceeds {alpha_circle}; cannot re-embed"
                )
    additions: set[Arrow] = set()
    for src, dst in p.arrows:
        if dst in knots:
            additions.add((knots[dst], p.ref(src).partner))
    out = _relabel(p, {r.id: concrete_form(r.label) for r in circle_refs})
    return replace(out, arrows=out.arrows | additions)


def cancel_knot_circle(p: Presentation, k: str) -> Presentation:
    """Cancel a knot against its abstract linking circle.

    The knot must have no incoming arrows.  Copies of the circle's disc
    inside other discs are traded for copies of the cancelled handle's
    cocore, which leaves no arrow residue beyond deleting the pair.
    """
    knot = p.ref(k)
    if knot.kind != KNOT:
        raise BlockedError(f"{k} is not a knot")
    if p.incoming(k):
        raise BlockedError(f"arrows point into {k}; cancellation needs none")
    circ = p.ref(knot.partner)
    if not is_abstract(circ.label):
        raise NotAbstractError(f"linking circle {circ.id} is not abstract")
    gone = {k, circ.id}
    comps = tuple(c for c in p.components if c.id not in gone)
    arrows = frozenset(a for a in p.arrows if a[0] not in gone and a[1] not in gone)
    return replace(p, components=comps, arrows=arrows)


def cancel_hopf(p: Presentation, k: str, witness: SplitFlag) -> Presentation:
    """Cancel a split Hopf pair; arrows in and out of both are deleted."""
    knot = p.ref(k)
    if knot.kind != KNOT:
        raise NotSplitError(f"{k} is not a knot")
    circ = p.ref(knot.partner)
    if set(witness.pair) != {k, circ.id} or not witness.is_split_hopf:
        raise NotSplitError(f"no split witness for the pair ({k}, {circ.id})")
    if not is_abstract(circ.label):
        raise NotAbstractError(f"linking circle {circ.id} is not abstract")
    gone = {k, circ.id}
    comps = tuple(c for c in p.components if c.id not in gone)
    arrows = frozenset(a for a in p.arrows if a[0] not in gone and a[1] not in gone)
    return replace(p, components=comps, arrows=arrows)


_SLIDE_SIDES = {
    "00": (ZERO, ZERO),
    "••": (BULLET, BULLET),
    "0•": (ZERO, BULLET),
    "•0": (BULLET, ZERO),
}


def slide(p: Presentation, alpha: str, beta_prime: str, variant: str) -> Presentation:
    """Slide the knot ``alpha`` over the linking circle ``beta_prime``.

    Same-side slides (00, ••) turn ``alpha`` abstract exactly when the
    circle is abstract; arrows into ``alpha`` are copied onto the circle
    and, while ``alpha`` stays concrete, arrows out of the circle are
    copied onto ``alpha``.  Cross-side slides (0•, •0) instead abstract
    every source of an arrow into ``alpha`` when the circle is abstract,
    hang ``alpha`` below the circle, and chain sources over the circle's
    targets.
    """
    variant = _VARIANT_ALIASES.get(variant, variant)
    if variant not in SLIDE_VARIANTS:
        raise VariantMismatchError(f"unknown slide variant {variant!r}")
    a = p.ref(alpha)
    b = p.ref(beta_prime)
    if a.kind != KNOT or b.kind != CIRCLE:
        raise VariantMismatchError("slides take a knot over a linking circle")
    want_a, want_b = _SLIDE_SIDES[variant]
    if side(a.label) != want_a or side(b.label) != want_b:
        raise VariantMismatchError(
            f"variant {variant} needs a {want_a}-side knot over a {want_b}-side circle"
        )
    if variant in ("0•", "•0") and is_abstract(a.label) and is_abstract(b.label):
        raise VariantMismatchError(
            f"variant {variant} needs the knot or the circle concrete"
        )
    if _reachable(p, beta_prime, alpha):
        raise OrderConflictError(f"{beta_prime} exceeds {alpha}; sliding is not allowed")

    into_alpha = tuple(sorted(p.incoming(alpha)))
    out_of_beta = tuple(sorted(p.outgoing(beta_prime)))
    new_arrows: set[Arrow] = set()
    dropped_sources: set[str] = set()
    labels: dict[str, str] = {}

    if variant in ("00", "••"):
        if is_abstract(b.label) and not is_abstract(a.label):
            labels[alpha] = abstract_form(a.label)
            dropped_sources.add(alpha)
        for gamma in into_alpha:
            new_arrows.add((gamma, beta_prime))
        # the circle's targets flow to the knot only while it stays concrete
        if not (is_abstract(a.label) or is_abstract(b.label)):
            for delta in out_of_beta:
                new_arrows.add((alpha, delta))
    else:
        if is_abstract(b.label):
            for gamma in into_alpha:
                g = p.ref(gamma)
                if side(g.label) != side(b.label):
                    raise VariantMismatchError(
                        f"{gamma} points into {alpha} but sits on the {side(g.label)} side; "
                        f"abstracting it would cross the 0/• divide"
                    )
            for gamma in into_alpha:
                labels[gamma] = abstract_form(p.ref(gamma).label)
                dropped_sources.add(gamma)
        if not is_abstract(a.label):
            new_arrows.add((alpha, beta_prime))
        for delta in out_of_beta:
            for gamma in into_alpha:
                new_arrows.add((gamma, delta))

    out = _relabel(p, labels)
    arrows = (out.arrows | new_arrows)
    arrows = frozenset(x for x in arrows if x[0] not in dropped_sources)
    return replace(out, arrows=arrows)


def _diff(before: Presentation, after: Presentation, notes: tuple[str, ...]) -> Diff:
    before_ids = set(before.by_id)
    after_ids = set(after.by_id)
    return Diff(
        added_components=tuple(
            after.by_id[x] for x in sorted(after_ids - before_ids)
        ),
        removed_components=tuple(
            before.by_id[x] for x in sorted(before_ids - after_ids)
        ),
        label_changes=tuple(
            (x, before.by_id[x].label, after.by_id[x].label)
            for x in sorted(before_ids & after_ids)
            if before.by_id[x].label != after.by_id[x].label
        ),
        added_arrows=tuple(sorted(after.arrows - before.arrows)),
        removed_arrows=tuple(sorted(before.arrows - after.arrows)),
        notes=notes,
    )


_CANCEL_NOTE = (
    "copies of the circle's disc are replaced by copies of the cancelled "
    "handle's cocore; arrows into the removed pair are deleted, not re-targeted"
)


def apply(p: Presentation, op: RewriteOp) -> ApplyResult:
    """Dispatch an operation, enforce validity, and report an exact diff."""
    notes: tuple[str, ...] = ()
    if op.kind == MAKE_ABSTRACT:
        result = make_abstract(p, set(op.targets))
    elif op.kind == MAKE_CONCRETE:
        result = make_concrete(p, set(op.aprime))
    elif op.kind == CANCEL_KNOT_CIRCLE:
        if op.knot is None:
            raise NotFoundError("CancelKnotCircle needs a knot id")
        result = cancel_knot_circle(p, op.knot)
        notes = (_CANCEL_NOTE,)
    elif op.kind == CANCEL_HOPF:
        if op.knot is None:
            raise NotFoundError("CancelHopf needs a knot id")
        partner = p.ref(op.knot).partner
        result = cancel_hopf(
            p, op.knot, SplitFlag((op.knot, partner), op.is_split_hopf)
        )
        notes = (_CANCEL_NOTE,)
    elif op.kind == SLIDE:
        if op.alpha is None or op.beta_prime is None or op.variant is None:
            raise NotFoundError("Slide needs alpha, beta_prime and a variant")
        result = slide(p, op.alpha, op.beta_prime, op.variant)
    else:
        raise NotFoundError(f"unknown operation kind {op.kind!r}")
    report = validate(result)
    assert report.ok, f"rewrite produced an invalid presentation: {report.summary()}"
    return ApplyResult(result, _diff(p, result, notes))


# -- candidate enumeration ----------------------------------------------------


@dataclass(frozen=True)
class OpCandidate:
    op: RewriteOp
    satisfied: bool
    unsatisfied: tuple[str, ...] = ()


def enumerate_candidates(p: Presentation):
    """Yield candidate operations with their precondition status.

    Fully checkable candidates are yielded only when satisfied; split-Hopf
    cancellation is yielded with its witness slot open, since splitness is
    a geometric fact the caller must assert.
    """
    mode = _mode(p)
    for c in p.components:
        if not is_abstract(c.label) and (mode is None or abstract_form(c.label) == mode):
            yield OpCandidate(RewriteOp(MAKE_ABSTRACT, targets=(c.id,)), True)
    for c in p.components:
        if c.kind == CIRCLE and is_abstract(c.label):
            try:
                make_concrete(p, {c.id})
            except RewriteError:
                continue
            yield OpCandidate(RewriteOp(MAKE_CONCRETE, aprime=(c.id,)), True)
    for c in p.components:
        if c.kind != KNOT:
            continue
        partner = p.by_id.get(c.partner)
        if partner is None or not is_abstract(partner.label):
            continue
        if not p.incoming(c.id):
            yield OpCandidate(RewriteOp(CANCEL_KNOT_CIRCLE, knot=c.id), True)
        yield OpCandidate(
            RewriteOp(CANCEL_HOPF, knot=c.id, is_split_hopf=False),
            False,
            (NotSplitError.code,),
        )
    circles = [c for c in p.components if c.kind == CIRCLE]
    for a in p.components:
        if a.kind != KNOT:
            continue
        for b in circles:
            for variant, (want_a, want_b) in _SLIDE_SIDES.items():
                if side(a.label) != want_a or side(b.label) != want_b:
                    continue
                if variant in ("0•", "•0") and is_abstract(a.label) and is_abstract(b.label):
                    continue
                try:
                    slide(p, a.id, b.id, variant)
                except RewriteError:
                    continue
                yield OpCandidate(
                    RewriteOp(SLIDE, alpha=a.id, beta_prime=b.id, variant=variant), True
                )
