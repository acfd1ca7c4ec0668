"""The five move families: preconditions, effects, transactional safety."""
import random

import pytest

from fwbench.presentations import (
    ABSTRACT_BULLET,
    ABSTRACT_ZERO,
    BULLET,
    ComponentRef,
    Family,
    Presentation,
    ZERO,
    validate,
)
from fwbench.rewrites import (
    BlockedError,
    ModeConflictError,
    NotAbstractError,
    NotSplitError,
    OrderConflictError,
    RewriteError,
    RewriteOp,
    SplitFlag,
    VariantMismatchError,
    apply,
    cancel_hopf,
    cancel_knot_circle,
    enumerate_candidates,
    make_abstract,
    make_concrete,
    slide,
)
from fwbench.serialization import Document, serialize

from strategies import random_family_presentation


def loose(name, i, label, framing=0):
    """A knot/circle pair outside the family disciplines, for surgery tests."""
    knot = ComponentRef(name, "knot", Family("B", i), label, framing, name + "'")
    circ = ComponentRef(
        name + "'",
        "linking_circle",
        Family("B", i),
        BULLET if label in (ZERO, ABSTRACT_ZERO) else ZERO,
        0,
        name,
    )
    return knot, circ


def presentation(pairs, arrows=(), abstract=()):
    comps = []
    for n, (name, label) in enumerate(pairs):
        i = -(n + 1) if label in (ZERO, ABSTRACT_ZERO) else n + 1
        knot, circ = loose(name, i, ZERO if label in (ZERO, ABSTRACT_ZERO) else BULLET)
        comps.extend([knot, circ])
    p = Presentation(tuple(comps), frozenset(arrows))
    if abstract:
        p = make_abstract(p, set(abstract))
    return p


def test_make_abstract_empty_is_identity():
    p = presentation([("a", ZERO)])
    assert make_abstract(p, set()) == p


def test_make_abstract_drops_outgoing_keeps_incoming():
    p = presentation([("a", ZERO), ("b", ZERO)], arrows=[("a", "b"), ("b'", "a")])
    out = make_abstract(p, {"a"})
    assert out.ref("a").label == ABSTRACT_ZERO
    assert ("a", "b") not in out.arrows
    assert ("b'", "a") in out.arrows


def test_make_abstract_mode_restriction():
    p = presentation([("a", ZERO), ("b", BULLET)])
    p = make_abstract(p, {"a"})
    with pytest.raises(ModeConflictError):
        make_abstract(p, {"b"})


def test_make_abstract_rejects_mixed_targets():
    p = presentation([("a", ZERO), ("b", BULLET)])
    with pytest.raises(ModeConflictError):
        make_abstract(p, {"a", "b"})


def test_make_abstract_rejects_double_abstraction():
    p = presentation([("a", ZERO)], abstract=["a"])
    with pytest.raises(NotAbstractError):
        make_abstract(p, {"a"})


def test_make_concrete_empty_is_identity():
    p = presentation([("a", ZERO)])
    assert make_concrete(p, set()) == p


def test_make_concrete_reverses_arrows_through_circles():
    p = presentation(
        [("a", ZERO), ("b", ZERO)],
        arrows=[("b", "a")],
        abstract=["a'"],
    )
    out = make_concrete(p, {"a'"})
    assert out.ref("a'").label == BULLET  # circles of 0-knots live on the • side
    assert ("a'", "b'") in out.arrows
    assert ("b", "a") in out.arrows


def test_make_concrete_requires_abstract_circles():
    p = presentation([("a", ZERO)])
    with pytest.raises(NotAbstractError):
        make_concrete(p, {"a'"})
    with pytest.raises(NotAbstractError):
        make_concrete(presentation([("a", ZERO)], abstract=["a"]), {"a"})


def test_make_concrete_order_conflict():
    # b' already exceeds a' through the order, so re-embedding must fail
    p = presentation(
        [("a", ZERO), ("b", ZERO)],
        arrows=[("b", "a"), ("b'", "a'")],
        abstract=["a'"],
    )
    with pytest.raises(OrderConflictError):
        make_concrete(p, {"a'"})


def test_make_concrete_rejects_circle_sources():
    p = presentation(
        [("a", ZERO), ("b", ZERO)],
        arrows=[("b'", "a")],
        abstract=["a'"],
    )
    with pytest.raises(RewriteError):
        make_concrete(p, {"a'"})


def test_roundtrip_restores_labels_and_adds_only_reversals():
    p = presentation([("a", ZERO), ("b", ZERO)], arrows=[("b", "a")])
    down = make_abstract(p, {"a'"})
    up = make_concrete(down, {"a'"})
    assert {c.id: c.label for c in up.components} == {c.id: c.label for c in p.components}
    assert up.arrows == p.arrows | {("a'", "b'")}


def test_cancel_knot_circle():
    p = presentation(
        [("a", ZERO), ("b", ZERO)],
        arrows=[("a", "b")],
        abstract=["a'"],
    )
    out = cancel_knot_circle(p, "a")
    assert set(out.by_id) == {"b", "b'"}
    assert out.arrows == frozenset()
    assert validate(out).ok


def test_cancel_blocked_by_incoming():
    p = presentation(
        [("a", ZERO), ("b", ZERO)],
        arrows=[("b", "a")],
        abstract=["a'"],
    )
    with pytest.raises(BlockedError):
        cancel_knot_circle(p, "a")


def test_cancel_requires_abstract_circle():
    p = presentation([("a", ZERO)])
    with pytest.raises(NotAbstractError):
        cancel_knot_circle(p, "a")


def test_cancel_preserves_other_arrows():
    p = presentation(
        [("a", ZERO), ("b", ZERO), ("c", ZERO)],
        arrows=[("b", "c")],
        abstract=["a'"],
    )
    out = cancel_knot_circle(p, "a")
    assert ("b", "c") in out.arrows
    assert validate(out).ok


def test_cancel_hopf_needs_witness():
    p = presentation([("a", ZERO)], abstract=["a'"])
    with pytest.raises(NotSplitError):
        cancel_hopf(p, "a", SplitFlag(("a", "a'"), False))
    out = cancel_hopf(p, "a", SplitFlag(("a", "a'"), True))
    assert out.components == ()


def test_cancel_hopf_removes_arrows_both_ways():
    p = presentation(
        [("a", ZERO), ("b", ZERO)],
        arrows=[("b", "a"), ("a'", "b")],
        abstract=["a'"],
    )
    out = cancel_hopf(p, "a", SplitFlag(("a", "a'"), True))
    assert out.arrows == frozenset()
    assert validate(out).ok


# -- slides -------------------------------------------------------------------


def test_slide_00_concrete_circle_no_arrows():
    # 0-side circle = partner of a bullet knot; with nothing touching either
    # component the slide is a combinatorial no-op
    p = presentation([("a", ZERO), ("b", BULLET)])
    out = slide(p, "a", "b'", "00")
    assert out == p


def test_slide_label_tables():
    p = presentation([("a", ZERO), ("b", BULLET)])
    # a is 0-side; b' is 0-side (partner of bullet knot)
    out = slide(p, "a", "b'", "00")
    assert out == p  # no arrows anywhere, nothing changes
    with pytest.raises(VariantMismatchError):
        slide(p, "a", "a'", "00")  # a' is •-side
    with pytest.raises(VariantMismatchError):
        slide(p, "b", "b'", "••")  # b' is 0-side
    out = slide(p, "a", "a'", "0•")
    assert ("a", "a'") in out.arrows


def test_slide_00_abstract_circle_abstracts_alpha():
    p = presentation(
        [("a", ZERO), ("b", BULLET), ("c", ZERO)],
        arrows=[("a", "c")],
    )
    p = make_abstract(p, {"b'"})
    out = slide(p, "a", "b'", "00")
    assert out.ref("a").label == ABSTRACT_ZERO
    assert ("a", "c") not in out.arrows  # outgoing arrows of a are gone


def test_slide_00_copies_arrows():
    p = presentation(
        [("a", ZERO), ("b", BULLET), ("g", BULLET), ("d", ZERO)],
        arrows=[("g", "a"), ("b'", "d")],
    )
    out = slide(p, "a", "b'", "00")
    assert ("g", "b'") in out.arrows  # sources of a now reach b'
    assert ("a", "d") in out.arrows  # a concrete, so b' targets flow to a
    assert ("g", "a") in out.arrows  # prior arrows kept


def test_slide_order_conflict():
    p = presentation(
        [("a", ZERO), ("b", BULLET)],
        arrows=[("b'", "a")],
    )
    with pytest.raises(OrderConflictError):
        slide(p, "a", "b'", "00")


def test_slide_cross_side_abstracts_sources():
    p = presentation(
        [("a", ZERO), ("g", BULLET), ("d", ZERO)],
        arrows=[("g", "a")],
    )
    p = make_abstract(p, {"a'"})  # a' is •-side, so •-abstract mode
    out = slide(p, "a", "a'", "0•")
    assert out.ref("g").label == ABSTRACT_BULLET
    assert not out.outgoing("g")


def test_slide_cross_side_concrete_circle_chains():
    p = presentation(
        [("a", ZERO), ("g", BULLET), ("d", ZERO), ("e", BULLET)],
        arrows=[("g", "a"), ("a'", "d")],
    )
    out = slide(p, "a", "a'", "0•")
    assert ("a", "a'") in out.arrows
    assert ("g", "d") in out.arrows


def test_slide_never_changes_component_count():
    rng = random.Random(5)
    for _ in range(50):
        p = random_family_presentation(rng)
        for cand in enumerate_candidates(p):
            if cand.op.kind == "Slide" and cand.satisfied:
                out = slide(p, cand.op.alpha, cand.op.beta_prime, cand.op.variant)
                assert len(out.components) == len(p.components)
                break


# -- apply / dispatch -----------------------------------------------------------


def test_apply_empty_abstract_is_identity():
    p = presentation([("a", ZERO)])
    result = apply(p, RewriteOp("MakeAbstract", targets=()))
    assert result.presentation == p
    assert result.diff.empty


def test_apply_reports_exact_diff():
    p = presentation([("a", ZERO), ("b", ZERO)], arrows=[("a", "b")])
    result = apply(p, RewriteOp("MakeAbstract", targets=("a",)))
    d = result.diff
    assert d.label_changes == (("a", ZERO, ABSTRACT_ZERO),)
    assert d.removed_arrows == (("a", "b"),)
    assert d.added_arrows == ()


def test_apply_failed_precondition_leaves_input_untouched():
    p = presentation([("a", ZERO)], abstract=["a"])
    before = serialize(Document.wrap(p))
    with pytest.raises(NotAbstractError):
        apply(p, RewriteOp("MakeAbstract", targets=("a",)))
    assert serialize(Document.wrap(p)) == before


def test_apply_random_legal_sequences_stay_valid():
    rng = random.Random(31337)
    for _ in range(40):
        p = random_family_presentation(rng)
        for _step in range(10):
            cands = [c for c in enumerate_candidates(p) if c.satisfied]
            if not cands:
                break
            op = rng.choice(cands).op
            result = apply(p, op)
            assert validate(result.presentation).ok
            p = result.presentation


def test_label_moves_never_cross_divide():
    rng = random.Random(99)
    for _ in range(30):
        p = random_family_presentation(rng)
        before = {c.id: c.label for c in p.components}
        cands = [c for c in enumerate_candidates(p) if c.satisfied]
        if not cands:
            continue
        out = apply(p, rng.choice(cands).op).presentation
        for c in out.components:
            if c.id in before:
                from fwbench.presentations import side

                assert side(c.label) == side(before[c.id])


def test_cancels_shrink_by_two_and_never_add_arrows():
    p = presentation(
        [("a", ZERO), ("b", ZERO)],
        arrows=[("a", "b")],
        abstract=["a'"],
    )
    result = apply(p, RewriteOp("CancelKnotCircle", knot="a"))
    assert len(result.presentation.components) == len(p.components) - 2
    assert result.diff.added_arrows == ()
    result = apply(p, RewriteOp("CancelHopf", knot="a", is_split_hopf=True))
    assert len(result.presentation.components) == len(p.components) - 2
    assert result.diff.added_arrows == ()
    assert result.diff.notes


def test_candidate_listing_respects_preconditions():
    p = presentation(
        [("a", ZERO), ("b", ZERO)],
        arrows=[("b", "a")],
        abstract=["a'", "b'"],
    )
    kinds = {}
    for cand in enumerate_candidates(p):
        kinds.setdefault(cand.op.kind, []).append(cand)
    cancel_knots = {c.op.knot for c in kinds.get("CancelKnotCircle", [])}
    assert cancel_knots == {"b"}  # a has an incoming arrow
    hopfs = kinds.get("CancelHopf", [])
    assert hopfs and all(not c.satisfied and "not-split" in c.unsatisfied for c in hopfs)
