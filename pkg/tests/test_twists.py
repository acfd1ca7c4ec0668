"""Twist arithmetic: group laws, parity, and path planning with a BFS oracle."""
from collections import deque

import pytest
from hypothesis import given

from fwbench.twists import ParityError, Twist, plan_twist_path, twist_add, twist_negate, twist_parity_ok

from strategies import twists


def test_add_examples():
    assert twist_add(Twist(2, 0), Twist(1, 1)) == Twist(3, 1)
    assert twist_add(Twist(0, 0), Twist(-4, 7)) == Twist(-4, 7)
    assert twist_negate(Twist(1, 1)) == Twist(-1, -1)


def test_parity_examples():
    assert twist_parity_ok(Twist(2, 0))
    assert twist_parity_ok(Twist(1, 1))
    assert not twist_parity_ok(Twist(1, 0))


@given(twists, twists, twists)
def test_abelian_group_laws(a, b, c):
    assert twist_add(a, b) == twist_add(b, a)
    assert twist_add(twist_add(a, b), c) == twist_add(a, twist_add(b, c))
    assert twist_add(a, twist_negate(a)) == Twist(0, 0)
    assert twist_add(a, Twist(0, 0)) == a


@given(twists, twists)
def test_chain_rule_and_antisymmetry(a, b):
    # tw(w2, w0) = tw(w2, w1) + tw(w1, w0) rearranges to pure addition, and
    # swapping the discs negates.
    assert twist_add(a, b) - b == a
    assert twist_negate(twist_negate(a)) == a


@given(twists, twists)
def test_parity_subgroup(a, b):
    if twist_parity_ok(a) and twist_parity_ok(b):
        assert twist_parity_ok(twist_add(a, b))
        assert twist_parity_ok(twist_negate(a))


def test_plan_examples():
    assert plan_twist_path(Twist(0, 0)) == ()
    assert plan_twist_path(Twist(2, 0)) == (Twist(2, 0),)
    assert plan_twist_path(Twist(3, 1)) == (Twist(1, 1), Twist(2, 0))


def test_plan_rejects_odd_parity():
    with pytest.raises(ParityError):
        plan_twist_path(Twist(1, 0))
    with pytest.raises(ParityError):
        plan_twist_path(Twist(-2, 5))


def _oracle_min_steps(target: Twist) -> int:
    # BFS over the step language: optional single leading (1,1), then
    # steps of (±2, 0) / (0, ±2).
    start = (0, 0, False)
    seen = {start}
    queue = deque([(start, 0)])
    while queue:
        (p, q, led), n = queue.popleft()
        if (p, q) == (target.p, target.q):
            return n
        moves = [(2, 0), (-2, 0), (0, 2), (0, -2)]
        if n == 0 and not led:
            moves.append((1, 1))
        for dp, dq in moves:
            nxt = (p + dp, q + dq, led or (dp, dq) == (1, 1))
            if abs(nxt[0]) <= abs(target.p) + 2 and abs(nxt[1]) <= abs(target.q) + 2:
                if nxt not in seen:
                    seen.add(nxt)
                    queue.append((nxt, n + 1))
    raise AssertionError(f"unreachable target {target}")


@pytest.mark.parametrize("p", range(-5, 6))
@pytest.mark.parametrize("q", range(-5, 6))
def test_plan_sums_and_is_minimal(p, q):
    target = Twist(p, q)
    if not twist_parity_ok(target):
        with pytest.raises(ParityError):
            plan_twist_path(target)
        return
    steps = plan_twist_path(target)
    total = Twist(0, 0)
    for n, s in enumerate(steps):
        if s == Twist(1, 1):
            assert n == 0, "the odd corrector must lead"
        else:
            assert s in (Twist(2, 0), Twist(-2, 0), Twist(0, 2), Twist(0, -2))
        total = twist_add(total, s)
    assert total == target
    assert len(steps) == _oracle_min_steps(target)
