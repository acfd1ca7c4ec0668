"""Cycle-sign criteria against brute force, monotonicity, and the reductions."""
import random
from collections import defaultdict

import pytest

from fwbench.systems import DiscRecord, FWSystem, IncidenceTables, InvalidDualCertificateError
from fwbench.triviality import (
    FingerGraph,
    contract_inessential,
    delete_s_trivial,
    dual_sphere_reduce,
    finger_graph,
    graph_is_s_trivial,
    is_monotone,
    s_trivial_by_graph,
)

from strategies import random_system


def finger(red, green, shift):
    return DiscRecord(red, green, shift, "finger")


def whitney(red, green, shift):
    return DiscRecord(red, green, shift, "whitney")


# -- brute-force oracle -------------------------------------------------------


def simple_cycle_totals(vertices, edges):
    """Total weights of all vertex-simple directed cycles, via DFS.

    Each cycle is rooted at its smallest vertex, so every cycle is found.
    Parallel edges give distinct cycles; self-loops count.
    """
    out = defaultdict(list)
    for u, v, w in edges:
        out[u].append((v, w))
    totals = []

    def dfs(start, node, total, visited):
        for nxt, w in out[node]:
            if nxt == start:
                totals.append(total + w)
            elif nxt > start and nxt not in visited:
                dfs(start, nxt, total + w, visited | {nxt})

    for start in sorted(vertices):
        dfs(start, start, 0, frozenset({start}))
    return totals


def oracle_is_s_trivial(vertices, edges):
    comp = {v: v for v in vertices}

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    for u, v, _ in edges:
        comp[find(u)] = find(v)
    by_comp = defaultdict(list)
    for e in edges:
        by_comp[find(e[0])].append(e)
    for root, comp_edges in by_comp.items():
        vs = {v for v in vertices if find(v) == root}
        totals = simple_cycle_totals(vs, comp_edges)
        if any(t > 0 for t in totals) and any(t < 0 for t in totals):
            return False
    return True


def random_multigraph(rng, max_v=4, max_e=8, wmax=2):
    nv = rng.randint(1, max_v)
    ne = rng.randint(0, max_e)
    edges = [
        (rng.randint(1, nv), rng.randint(1, nv), rng.randint(-wmax, wmax))
        for _ in range(ne)
    ]
    return set(range(1, nv + 1)), edges


def test_graph_criterion_matches_brute_force_sample():
    rng = random.Random(20240902)
    for _ in range(2000):
        vertices, edges = random_multigraph(rng)
        assert graph_is_s_trivial(vertices, edges) == oracle_is_s_trivial(vertices, edges), (
            vertices,
            edges,
        )


def test_graph_criterion_handles_disjoint_signed_components():
    # positive cycle in one component, negative in another: trivial overall
    edges = [(1, 1, 1), (2, 2, -1)]
    assert graph_is_s_trivial({1, 2}, edges)
    # both in one component: not trivial
    edges = [(1, 1, 1), (1, 1, -1)]
    assert not graph_is_s_trivial({1}, edges)
    # zero-weight cycles decide nothing
    assert graph_is_s_trivial({1, 2}, [(1, 2, 1), (2, 1, -1)])


def test_s_trivial_examples():
    assert s_trivial_by_graph(FWSystem(k=0))
    assert s_trivial_by_graph(FWSystem(k=1, fingers=(finger(1, 1, 1),)))
    assert not s_trivial_by_graph(
        FWSystem(k=1, fingers=(finger(1, 1, 1), finger(1, 1, -1)))
    )


def test_finger_graph_examples():
    assert finger_graph(FWSystem(k=3)) == FingerGraph(3, ())
    # one edge per finger, from red to green, weighted by the exact shift
    g = finger_graph(FWSystem(k=2, fingers=(finger(1, 2, 1),)))
    assert g.edges == ((1, 2, 1),)
    g = finger_graph(FWSystem(k=1, fingers=(finger(1, 1, 0),)))
    assert g.edges == ((1, 1, 0),)
    g = finger_graph(FWSystem(k=1, fingers=(finger(1, 1, 1), finger(1, 1, -1))))
    assert g.edges == ((1, 1, 1), (1, 1, -1))


def test_monotone_examples():
    assert is_monotone(FWSystem(k=2)) == "up"
    assert is_monotone(FWSystem(k=1, fingers=(finger(1, 1, 1),))) == "up"
    assert is_monotone(FWSystem(k=1, fingers=(finger(1, 1, -1),))) == "down"
    assert (
        is_monotone(FWSystem(k=1, fingers=(finger(1, 1, 1), finger(1, 1, -1)))) == "none"
    )


def test_monotone_uses_cyclic_reordering():
    # fingers 1->2 and 2->1 both stepping forward around the circle: already up
    s = FWSystem(k=2, fingers=(finger(1, 2, 1), finger(2, 1, 1)))
    assert is_monotone(s) == "up"
    # a backward step from 2 to 1 is up after re-cutting between 1 and 2
    s = FWSystem(k=3, fingers=(finger(1, 2, 1), finger(3, 2, -1)))
    assert is_monotone(s) != "none"


def test_monotone_implies_trivial_sample():
    rng = random.Random(77)
    for _ in range(300):
        s = random_system(rng)
        if is_monotone(s) != "none":
            assert s_trivial_by_graph(s)


# -- contraction --------------------------------------------------------------


def test_contract_fully_inessential():
    s = FWSystem(
        k=2,
        fingers=(finger(1, 1, 0), finger(1, 2, 1)),
        whitneys=(whitney(1, 1, 0),),
    )
    out = contract_inessential(s)
    assert out.k == 2
    assert out.fingers == () and out.whitneys == ()


def test_contract_keeps_essential_component():
    # the loop of winding 1 at eye 1 is essential; eye 2's lone component is not
    s = FWSystem(
        k=2,
        fingers=(finger(1, 1, 2), finger(2, 2, 0)),
        whitneys=(whitney(1, 1, 2),),
    )
    out = contract_inessential(s)
    assert out.k == 2
    assert out.fingers == (finger(1, 1, 2),)
    assert out.whitneys == (whitney(1, 1, 2),)


def test_contract_empty():
    assert contract_inessential(FWSystem(k=0)) == FWSystem(k=0)
    assert contract_inessential(FWSystem(k=3)) == FWSystem(k=3)


def test_contract_adds_tube_counts():
    # eye 2 is inessential; the surviving whitney on eye 1 meets red sphere 2
    s = FWSystem(
        k=2,
        fingers=(finger(1, 1, 2), finger(2, 2, 0)),
        whitneys=(whitney(1, 1, 2),),
        incidence=IncidenceTables.from_dicts(whitney_red={(0, 2): 3}),
    )
    out = contract_inessential(s)
    assert out.whitneys[0].tubes == 3
    # consumed entries are dropped, so contracting again adds nothing
    again = contract_inessential(out)
    assert again.whitneys[0].tubes == 3


def test_contract_idempotent_sample():
    rng = random.Random(13)
    for _ in range(200):
        s = random_system(rng)
        once = contract_inessential(s)
        assert contract_inessential(once) == once


# -- deletion -----------------------------------------------------------------


def test_delete_fully_trivial():
    s = FWSystem(k=2, fingers=(finger(1, 1, 2), finger(2, 2, -2)))
    out = delete_s_trivial(s)
    assert out == FWSystem(k=0)


def test_delete_keeps_nontrivial_component():
    s = FWSystem(
        k=2,
        fingers=(finger(1, 1, 2), finger(1, 1, -2), finger(2, 2, 2)),
    )
    out = delete_s_trivial(s)
    assert out.k == 1
    assert out.fingers == (finger(1, 1, 1), finger(1, 1, -1))


def test_delete_empty():
    assert delete_s_trivial(FWSystem(k=0)) == FWSystem(k=0)


def test_delete_idempotent_sample():
    rng = random.Random(14)
    for _ in range(200):
        s = random_system(rng)
        once = delete_s_trivial(s)
        assert delete_s_trivial(once) == once


def test_delete_renormalizes_shifts():
    # eye 1 is trivial and goes away; the loop at eye 2 spanned both slots
    s = FWSystem(k=2, fingers=(finger(2, 2, 2), finger(2, 2, -2), finger(1, 1, 0)))
    out = delete_s_trivial(s)
    assert out.k == 1
    assert out.fingers == (finger(1, 1, 1), finger(1, 1, -1))


# -- dual-sphere reduction -----------------------------------------------------


def _certified(s: FWSystem, eyes) -> FWSystem:
    inc = s.incidence or IncidenceTables()
    return FWSystem(
        s.k,
        s.fingers,
        s.whitneys,
        s.pairing,
        IncidenceTables.from_dicts(
            interior_fw=inc.interior,
            boundary_fw=inc.boundary,
            whitney_red=inc.red_hits,
            dual_certs={**inc.certs, **{i: (1, 0) for i in eyes}},
        ),
    )


def test_dual_reduce_noop_on_empty_duals():
    s = FWSystem(k=1, fingers=(finger(1, 1, 1),))
    assert dual_sphere_reduce(s, set()) == s


def test_dual_reduce_requires_certificates():
    s = FWSystem(k=1, fingers=(finger(1, 1, 1),))
    with pytest.raises(InvalidDualCertificateError):
        dual_sphere_reduce(s, {1})
    bad = FWSystem(
        k=1,
        fingers=(finger(1, 1, 1),),
        incidence=IncidenceTables.from_dicts(dual_certs={1: (1, 2)}),
    )
    with pytest.raises(InvalidDualCertificateError):
        dual_sphere_reduce(bad, {1})


def test_dual_reduce_all_eyes_clears_fingers():
    s = _certified(
        FWSystem(k=2, fingers=(finger(1, 2, 1), finger(2, 1, 1)), whitneys=(whitney(1, 2, 1),)),
        {1, 2},
    )
    out = dual_sphere_reduce(s, {1, 2})
    assert out.k == 0
    assert out.fingers == ()


def test_dual_reduce_tubes_from_interior_and_boundary():
    # removing eye 2 kills finger 0; the surviving whitney met it twice in
    # the interior and once on the boundary
    base = FWSystem(
        k=2,
        fingers=(finger(2, 2, 0), finger(1, 1, 0)),
        whitneys=(whitney(1, 1, 0),),
        incidence=IncidenceTables.from_dicts(
            interior_fw={(0, 0): 1},
            boundary_fw={(0, 0): 1},
        ),
    )
    out = dual_sphere_reduce(_certified(base, {2}), {2})
    assert out.k == 1
    assert out.whitneys[0].tubes == 2 * 1 + 1
    # the spec's minimal example: one interior intersection alone adds two
    base2 = FWSystem(
        k=2,
        fingers=(finger(2, 2, 0),),
        whitneys=(whitney(1, 1, 0),),
        incidence=IncidenceTables.from_dicts(interior_fw={(0, 0): 1}),
    )
    out2 = dual_sphere_reduce(_certified(base2, {2}), {2})
    assert out2.whitneys[0].tubes == 2


def test_dual_reduce_validates_surviving_records():
    rng = random.Random(15)
    for _ in range(100):
        s = random_system(rng)
        if s.k < 2:
            continue
        eyes = {rng.randint(1, s.k)}
        out = dual_sphere_reduce(_certified(s, eyes), eyes)
        assert out.k == s.k - 1  # constructor re-validates shifts and ranges
