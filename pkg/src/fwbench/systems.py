"""Finger|Whitney systems and the operations of the F|W calculus.

The ambient manifold carries ``k`` eyes: algebraically dual red/green
2-sphere pairs sitting in ``k`` product summands strung around a circle.
A disc record joins a red sphere to a green sphere and stores the integer
displacement ``shift`` of one fixed lift in the infinite cyclic cover, so
``shift / k`` is the winding rational.  Because a disc from red eye ``i``
to green eye ``j`` lifts between positions congruent to ``i`` and ``j``,
every record satisfies ``shift ≡ green - red (mod k)``.

Two indexing conventions appear:

* base systems: eyes ``1..k``, the default;
* lifted windows: eyes are nonzero integers, positive on one side of a
  fixed separating 3-sphere and negative on the other (position ``m <= 0``
  in the cover is relabelled ``m - 1`` so ``0`` never occurs).

Everything here is immutable after construction and the operations are
pure, so values can be shared freely across threads.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import TYPE_CHECKING, Iterable, Mapping

from .twists import Twist

if TYPE_CHECKING:
    from .presentations import CurveForest

FINGER = "finger"
WHITNEY = "whitney"

UP = "up"
DOWN = "down"
NONE = "none"


class InvalidSystemError(ValueError):
    """The disc data does not describe a finger|Whitney system."""


class InvalidDegreeError(ValueError):
    """Covering degree must be a positive integer."""


class CompositionMismatchError(ValueError):
    """The middle disc collections of a factorization do not agree."""


class InvalidDualCertificateError(ValueError):
    """A recorded dual-sphere certificate is missing or violated."""


def wrap(position: int, k: int) -> int:
    """Eye label in ``1..k`` of an integer position in the cyclic cover."""
    return (position - 1) % k + 1


def reindex(position: int) -> int:
    """Signed label of a cover position: ``m`` if positive, else ``m - 1``."""
    return position if position >= 1 else position - 1


def unreindex(signed: int) -> int:
    """Inverse of :func:`reindex`; signed labels are nonzero."""
    return signed if signed >= 1 else signed + 1


@dataclass(frozen=True)
class DiscRecord:
    """One finger or Whitney disc between a red and a green sphere.

    ``twist`` is relative to the paired disc of the other collection and
    defaults to zero.  ``tubes`` counts sphere copies tubed in by the
    interpolation operations; it is bookkeeping only and never affects
    validity.  ``geometry`` optionally records the disc family's
    intersection curves with the cut sphere; the compiler picks it up when
    no explicit geometry is supplied.
    """

    red: int
    green: int
    shift: int
    kind: str
    twist: Twist = Twist(0, 0)
    tubes: int = 0
    geometry: "CurveForest | None" = None


@dataclass(frozen=True)
class IncidenceTables:
    """Optional intersection counts attached to a system.

    * ``interior_fw[(f, w)]``: interior intersections of finger ``f`` with
      Whitney disc ``w`` (indices into the respective lists);
    * ``boundary_fw[(f, w)]``: intersections of ``w`` with the boundary of
      finger ``f``;
    * ``whitney_red[(w, i)]``: intersections of Whitney disc ``w`` with the
      red sphere of eye ``i``;
    * ``dual_certs[i] = (rg, fw)``: recorded dual sphere for eye ``i``
      meeting the eye's red/green pair ``rg`` times and the disc families
      ``fw`` times.  A usable certificate is exactly ``(1, 0)``.
    """

    interior_fw: tuple[tuple[tuple[int, int], int], ...] = ()
    boundary_fw: tuple[tuple[tuple[int, int], int], ...] = ()
    whitney_red: tuple[tuple[tuple[int, int], int], ...] = ()
    dual_certs: tuple[tuple[int, tuple[int, int]], ...] = ()

    @classmethod
    def from_dicts(
        cls,
        interior_fw: Mapping[tuple[int, int], int] | None = None,
        boundary_fw: Mapping[tuple[int, int], int] | None = None,
        whitney_red: Mapping[tuple[int, int], int] | None = None,
        dual_certs: Mapping[int, tuple[int, int]] | None = None,
    ) -> "IncidenceTables":
        def norm(m):
            return tuple(sorted((key, value) for key, value in (m or {}).items()))

        return cls(norm(interior_fw), norm(boundary_fw), norm(whitney_red), norm(dual_certs))

    @property
    def interior(self) -> dict[tuple[int, int], int]:
        return dict(self.interior_fw)

    @property
    def boundary(self) -> dict[tuple[int, int], int]:
        return dict(self.boundary_fw)

    @property
    def red_hits(self) -> dict[tuple[int, int], int]:
        return dict(self.whitney_red)

    @property
    def certs(self) -> dict[int, tuple[int, int]]:
        return dict(self.dual_certs)


@dataclass(frozen=True)
class FWSystem:
    """A finger|Whitney system: two complete disc collections on ``k`` eyes.

    ``pairing`` is a partial bijection ``fingers <-> whitneys`` given as
    ``(finger_index, whitney_index)`` pairs; it is total exactly for
    boundary-germ coinciding systems.
    """

    k: int
    fingers: tuple[DiscRecord, ...] = ()
    whitneys: tuple[DiscRecord, ...] = ()
    pairing: tuple[tuple[int, int], ...] = ()
    incidence: IncidenceTables | None = None
    lifted: bool = False

    def __post_init__(self):
        if self.k < 0:
            raise InvalidSystemError(f"eye count must be >= 0, got {self.k}")
        object.__setattr__(self, "fingers", tuple(self.fingers))
        object.__setattr__(self, "whitneys", tuple(self.whitneys))
        object.__setattr__(self, "pairing", tuple(tuple(p) for p in self.pairing))
        for d in self.fingers:
            if d.kind != FINGER:
                raise InvalidSystemError(f"finger list holds a {d.kind} record")
        for d in self.whitneys:
            if d.kind != WHITNEY:
                raise InvalidSystemError(f"whitney list holds a {d.kind} record")
        for d in self.discs():
            self._check_disc(d)
        seen_f: set[int] = set()
        seen_w: set[int] = set()
        for fi, wi in self.pairing:
            if not (0 <= fi < len(self.fingers) and 0 <= wi < len(self.whitneys)):
                raise InvalidSystemError(f"pairing ({fi},{wi}) out of range")
            if fi in seen_f or wi in seen_w:
                raise InvalidSystemError("pairing is not a partial bijection")
            seen_f.add(fi)
            seen_w.add(wi)

    def _check_disc(self, d: DiscRecord) -> None:
        if self.lifted:
            if d.red == 0 or d.green == 0:
                raise InvalidSystemError("lifted eye indices must be nonzero")
            if d.shift != unreindex(d.green) - unreindex(d.red):
                raise InvalidSystemError(
                    f"lifted disc ({d.red}->{d.green}) must have shift "
                    f"{unreindex(d.green) - unreindex(d.red)}, got {d.shift}"
                )
            return
        if self.k == 0:
            raise InvalidSystemError("a system with no eyes carries no discs")
        if not (1 <= d.red <= self.k and 1 <= d.green <= self.k):
            raise InvalidSystemError(
                f"disc ({d.red}->{d.green}) out of range for k={self.k}"
            )
        if (d.shift - (d.green - d.red)) % self.k != 0:
            raise InvalidSystemError(
                f"disc ({d.red}->{d.green}) shift {d.shift} incompatible: "
                f"lifts displace by green-red modulo k"
            )

    def discs(self) -> Iterable[DiscRecord]:
        yield from self.fingers
        yield from self.whitneys


EMPTY = FWSystem(k=0)


def winding(d: DiscRecord, k: int) -> Fraction:
    """Winding rational ``shift / k`` in lowest terms; exact arithmetic."""
    if k <= 0:
        raise InvalidSystemError(f"eye count must be positive to take windings, got {k}")
    return Fraction(d.shift, k)


@dataclass(frozen=True)
class HandClass:
    """A winding-equivalence class of fingers: one hand on one arm."""

    red: int
    green: int
    shift: int
    finger_count: int

    @property
    def auxiliary_disc_count(self) -> int:
        """A hand with ``f`` fingers has ``f - 1`` auxiliary Whitney discs."""
        return self.finger_count - 1


def winding_classes(s: FWSystem) -> tuple[HandClass, ...]:
    """Partition the fingers into hands by ``(red, green, shift)``."""
    counts: dict[tuple[int, int, int], int] = {}
    for d in s.fingers:
        key = (d.red, d.green, d.shift)
        counts[key] = counts.get(key, 0) + 1
    return tuple(
        HandClass(red, green, shift, n)
        for (red, green, shift), n in sorted(counts.items())
    )


def _flip(d: DiscRecord) -> DiscRecord:
    # Swapping the red and green families reverses lift displacement.
    kind = WHITNEY if d.kind == FINGER else FINGER
    return DiscRecord(d.green, d.red, -d.shift, kind, d.twist, d.tubes)


def _rekind(d: DiscRecord) -> DiscRecord:
    kind = WHITNEY if d.kind == FINGER else FINGER
    return replace(d, kind=kind)


def reverse(s: FWSystem) -> FWSystem:
    """Swap the finger and Whitney roles; induces the inverse map."""
    return FWSystem(
        k=s.k,
        fingers=tuple(_rekind(d) for d in s.whitneys),
        whitneys=tuple(_rekind(d) for d in s.fingers),
        pairing=tuple((wi, fi) for fi, wi in s.pairing),
        incidence=None,
        lifted=s.lifted,
    )


def upside_down(s: FWSystem) -> FWSystem:
    """Swap red/green endpoints on every disc and the two disc roles.

    The induced map is unchanged.  Twist fields travel with their records.
    """
    return FWSystem(
        k=s.k,
        fingers=tuple(_flip(d) for d in s.whitneys),
        whitneys=tuple(_flip(d) for d in s.fingers),
        pairing=tuple((wi, fi) for fi, wi in s.pairing),
        incidence=None,
        lifted=s.lifted,
    )


def _offset_disc(d: DiscRecord, offset: int, old_k: int, new_k: int) -> DiscRecord:
    # Relabelling preserves a disc's full turns, not its raw displacement:
    # each turn now passes new_k - old_k extra eye slots.
    turns = (d.shift - (d.green - d.red)) // old_k
    return replace(
        d,
        red=d.red + offset,
        green=d.green + offset,
        shift=d.shift + (new_k - old_k) * turns,
    )


def concatenate(s1: FWSystem, s2: FWSystem) -> FWSystem:
    """Disjoint union on ``k1 + k2`` eyes; the second block is shifted up."""
    if s1.lifted or s2.lifted:
        raise InvalidSystemError("concatenation is defined for base-indexed systems")
    nf1, nw1 = len(s1.fingers), len(s1.whitneys)
    kk = s1.k + s2.k
    fingers = tuple(_offset_disc(d, 0, s1.k, kk) for d in s1.fingers) + tuple(
        _offset_disc(d, s1.k, s2.k, kk) for d in s2.fingers
    )
    whitneys = tuple(_offset_disc(d, 0, s1.k, kk) for d in s1.whitneys) + tuple(
        _offset_disc(d, s1.k, s2.k, kk) for d in s2.whitneys
    )
    pairing = s1.pairing + tuple((fi + nf1, wi + nw1) for fi, wi in s2.pairing)
    incidence = None
    if s1.incidence is not None and s2.incidence is not None:
        incidence = IncidenceTables.from_dicts(
            interior_fw={
                **s1.incidence.interior,
                **{(fi + nf1, wi + nw1): c for (fi, wi), c in s2.incidence.interior.items()},
            },
            boundary_fw={
                **s1.incidence.boundary,
                **{(fi + nf1, wi + nw1): c for (fi, wi), c in s2.incidence.boundary.items()},
            },
            whitney_red={
                **s1.incidence.red_hits,
                **{(wi + nw1, i + s1.k): c for (wi, i), c in s2.incidence.red_hits.items()},
            },
            dual_certs={
                **s1.incidence.certs,
                **{i + s1.k: cert for i, cert in s2.incidence.certs.items()},
            },
        )
    return FWSystem(s1.k + s2.k, fingers, whitneys, pairing, incidence)


def _strip_kind(d: DiscRecord) -> tuple:
    return (d.red, d.green, d.shift, d.twist, d.tubes)


def compose_factorization(s_ab: FWSystem, s_bc: FWSystem) -> FWSystem:
    """Factor through a shared middle collection.

    Requires the systems to share ``k`` and the Whitney collection of the
    first to equal, record for record, the finger collection of the second;
    the result keeps the first system's fingers and the second's Whitney
    discs.
    """
    if s_ab.k != s_bc.k or s_ab.lifted != s_bc.lifted:
        raise CompositionMismatchError(
            f"systems live on different eye counts: {s_ab.k} vs {s_bc.k}"
        )
    mid_left = tuple(_strip_kind(d) for d in s_ab.whitneys)
    mid_right = tuple(_strip_kind(d) for d in s_bc.fingers)
    if mid_left != mid_right:
        raise CompositionMismatchError("middle disc collections differ")
    # Pairings chain through the identified middle collection.
    left = dict(s_ab.pairing)  # finger index -> middle index
    right = dict(s_bc.pairing)  # middle index -> whitney index
    pairing = tuple(
        (fi, right[mi]) for fi, mi in sorted(left.items()) if mi in right
    )
    return FWSystem(s_ab.k, s_ab.fingers, s_bc.whitneys, pairing, None, s_ab.lifted)


def lift_to_cover(s: FWSystem, d: int) -> FWSystem:
    """Pull the system back to the degree-``d`` cyclic cover.

    Each disc yields ``d`` lifts with eye indices shifted by multiples of
    ``k``; shifts are preserved, so windings scale by ``1/d`` against the
    new eye count.  Degree 1 returns the system unchanged.
    """
    if d <= 0:
        raise InvalidDegreeError(f"covering degree must be >= 1, got {d}")
    if s.lifted:
        raise InvalidSystemError("lifted windows cannot be lifted again")
    if d == 1 or s.k == 0:
        return s if d == 1 else FWSystem(s.k * d)
    kk = s.k * d

    def lifts(records: tuple[DiscRecord, ...]) -> tuple[DiscRecord, ...]:
        out = []
        for t in range(d):
            for rec in records:
                red = rec.red + t * s.k
                green = wrap(red + rec.shift, kk)
                out.append(replace(rec, red=red, green=green))
        return tuple(out)

    nf, nw = len(s.fingers), len(s.whitneys)
    pairing = tuple(
        (m * nf + fi, m * nw + wi) for m in range(d) for fi, wi in s.pairing
    )
    return FWSystem(kk, lifts(s.fingers), lifts(s.whitneys), pairing, None)


def lifted_crossings(s: FWSystem) -> FWSystem:
    """The window of lifts crossing the separating 3-sphere, signed-indexed.

    For a disc with displacement ``shift`` the crossing lifts run from a
    position ``p <= 0`` to ``p + shift >= 1`` (or the mirror image), with
    ``p`` congruent to the disc's red eye.  Labels use the signed
    convention, so there are ``|shift| / k``-many crossings per disc.
    """
    if s.lifted:
        return s

    def cross(records: tuple[DiscRecord, ...]) -> tuple[DiscRecord, ...]:
        out = []
        for rec in records:
            sigma = rec.shift
            if sigma > 0:
                positions = [p for p in range(1 - sigma, 1) if wrap(p, s.k) == rec.red]
            elif sigma < 0:
                positions = [p for p in range(1, 1 - sigma) if wrap(p, s.k) == rec.red]
            else:
                positions = []
            for p in positions:
                out.append(
                    replace(rec, red=reindex(p), green=reindex(p + sigma))
                )
        return tuple(out)

    return FWSystem(
        k=s.k,
        fingers=cross(s.fingers),
        whitneys=cross(s.whitneys),
        pairing=(),
        incidence=None,
        lifted=True,
    )


def is_boundary_germ_coinciding(s: FWSystem) -> bool:
    """Total pairing, shared endpoints and displacement, zero relative twist."""
    if len(s.fingers) != len(s.whitneys) or len(s.pairing) != len(s.fingers):
        return False
    for fi, wi in s.pairing:
        f, w = s.fingers[fi], s.whitneys[wi]
        if (f.red, f.green, f.shift) != (w.red, w.green, w.shift):
            return False
        if w.twist != Twist(0, 0):
            return False
    return True
