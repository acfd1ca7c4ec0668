"""Integer twist arithmetic for relative framings of Whitney discs.

A twist ``(p, q)`` records how many full right-hand rotations the boundary
germ of one Whitney disc makes against another's along the two boundary
arcs (one on the red surface, one on the green).  Twists add componentwise
and negate when the two discs swap roles.  In a spin ambient manifold any
twist realized between genuinely framed discs has ``p + q`` even, so the
even-sum twists form the subgroup of realizable relative framings.
"""
from __future__ import annotations

from dataclasses import dataclass


class ParityError(ValueError):
    """An odd-sum twist was supplied where only even-sum twists act."""


@dataclass(frozen=True, order=True)
class Twist:
    """Relative boundary twisting: ``p`` about the red arc, ``q`` about the green."""

    p: int = 0
    q: int = 0

    def __add__(self, other: "Twist") -> "Twist":
        return Twist(self.p + other.p, self.q + other.q)

    def __neg__(self) -> "Twist":
        return Twist(-self.p, -self.q)

    def __sub__(self, other: "Twist") -> "Twist":
        return self + (-other)


def twist_add(a: Twist, b: Twist) -> Twist:
    """Componentwise sum; composing relative twists along a chain of discs."""
    return a + b


def twist_negate(a: Twist) -> Twist:
    """The twist measured with the two discs swapped."""
    return -a


def twist_parity_ok(a: Twist) -> bool:
    """True iff ``p + q`` is even, i.e. the twist is realizable."""
    return (a.p + a.q) % 2 == 0


def plan_twist_path(target: Twist) -> tuple[Twist, ...]:
    """Decompose ``target`` into elementary realizable steps.

    Steps are drawn from ``(±2, 0)`` and ``(0, ±2)``, with a single leading
    ``(1, 1)`` exactly when the coordinates are odd.  The returned steps sum
    to ``target`` and the path is as short as possible for that step
    alphabet.

    Raises :class:`ParityError` when ``p + q`` is odd.
    """
    if not twist_parity_ok(target):
        raise ParityError(f"twist ({target.p},{target.q}) has odd p+q; not realizable")
    steps: list[Twist] = []
    p, q = target.p, target.q
    if p % 2 != 0:
        steps.append(Twist(1, 1))
        p -= 1
        q -= 1
    steps.extend([Twist(2 if p > 0 else -2, 0)] * (abs(p) // 2))
    steps.extend([Twist(0, 2 if q > 0 else -2)] * (abs(q) // 2))
    return tuple(steps)
