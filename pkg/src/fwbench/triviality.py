"""Graph-theoretic triviality criteria and interpolation reductions.

The fingers of a system define a weighted directed multigraph on the eyes:
one edge per finger from its red eye to its green eye, weighted by the
integer shift.  Directed cycles of positive (negative) total weight
witness essential loops winding positively (negatively) around the ambient
circle.  A system whose graph has no weakly-connected component carrying
cycles of both signs interpolates to the trivial one, so these checks give
cheap sufficient conditions for standardness.  All arithmetic is exact.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

from .systems import (
    DOWN,
    FWSystem,
    IncidenceTables,
    InvalidDualCertificateError,
    InvalidSystemError,
    NONE,
    UP,
    wrap,
)

Edge = tuple[int, int, int]  # (tail, head, weight)


@dataclass(frozen=True)
class FingerGraph:
    """Directed multigraph on the eyes ``1..k``, one weighted edge per finger."""

    k: int
    edges: tuple[Edge, ...]


def finger_graph(s: FWSystem) -> FingerGraph:
    if s.lifted:
        raise InvalidSystemError("finger graphs are defined for base-indexed systems")
    return FingerGraph(s.k, tuple((d.red, d.green, d.shift) for d in s.fingers))


# -- cycle-sign detection -------------------------------------------------


def _weak_components(vertices: set, edges: list[Edge]) -> list[set]:
    parent = {v: v for v in vertices}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    groups: dict = {}
    for v in vertices:
        groups.setdefault(find(v), set()).add(v)
    return list(groups.values())


def _sccs(vertices: set, edges: list[Edge]) -> list[set]:
    # Kosaraju, iterative: order pass on the graph, collect pass on the reverse.
    out: dict = {v: [] for v in vertices}
    rev: dict = {v: [] for v in vertices}
    for u, v, _ in edges:
        out[u].append(v)
        rev[v].append(u)
    order: list = []
    seen: set = set()
    for root in vertices:
        if root in seen:
            continue
        stack = [(root, iter(out[root]))]
        seen.add(root)
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append((nxt, iter(out[nxt])))
                    advanced = True
                    break
            if not advanced:
                order.append(node)
                stack.pop()
    comps: list[set] = []
    assigned: set = set()
    for root in reversed(order):
        if root in assigned:
            continue
        comp = {root}
        assigned.add(root)
        stack = [root]
        while stack:
            node = stack.pop()
            for nxt in rev[node]:
                if nxt not in assigned:
                    assigned.add(nxt)
                    comp.add(nxt)
                    stack.append(nxt)
        comps.append(comp)
    return comps


def _has_positive_cycle(vertices: set, edges: list[Edge]) -> bool:
    # Longest-path relaxation from an all-zero superposition source inside
    # each strongly connected piece; any improvement after |V|-1 rounds is a
    # positive cycle.  Restricting to SCCs keeps the relaxation exact.
    for scc in _sccs(vertices, edges):
        scc_edges = [e for e in edges if e[0] in scc and e[1] in scc]
        if not scc_edges:
            continue
        dist = {v: 0 for v in scc}
        changed = True
        for _ in range(len(scc) - 1):
            if not changed:
                break
            changed = False
            for u, v, w in scc_edges:
                if dist[u] + w > dist[v]:
                    dist[v] = dist[u] + w
                    changed = True
        for u, v, w in scc_edges:
            if dist[u] + w > dist[v]:
                return True
    return False


def graph_is_s_trivial(vertices: set | int, edges) -> bool:
    """No weak component has both a positive and a negative directed cycle."""
    if isinstance(vertices, int):
        vertices = set(range(1, vertices + 1))
    else:
        vertices = set(vertices)
    edges = [tuple(e) for e in edges]
    vertices |= {u for u, _, _ in edges} | {v for _, v, _ in edges}
    for comp in _weak_components(vertices, edges):
        comp_edges = [e for e in edges if e[0] in comp]
        pos = _has_positive_cycle(comp, comp_edges)
        neg = _has_positive_cycle(comp, [(u, v, -w) for u, v, w in comp_edges])
        if pos and neg:
            return False
    return True


def s_trivial_by_graph(s: FWSystem) -> bool:
    """Sufficient standardness test via the finger graph's cycle signs."""
    g = finger_graph(s)
    return graph_is_s_trivial(set(range(1, g.k + 1)), g.edges)


# -- monotonicity ---------------------------------------------------------


def is_monotone(s: FWSystem) -> str:
    """Classify fingers as pointing up, down, or neither.

    A cyclic reordering of the eyes re-cuts the circle; a finger's lift
    displacement is then recomputed from the new labels while its number of
    full turns is kept.  The system is monotone when some re-cut makes all
    displacements >= 0 (up) or <= 0 (down).  Systems with no fingers report
    "up" by convention.
    """
    if not s.fingers:
        return UP
    if s.lifted:
        raise InvalidSystemError("monotonicity is defined for base-indexed systems")
    k = s.k
    fingers = [(d.red, d.green, d.shift) for d in s.fingers]

    def adjusted(red: int, green: int, shift: int, c: int) -> int:
        turns = (shift - (green - red)) // k
        nu_r = red - c if red > c else red - c + k
        nu_g = green - c if green > c else green - c + k
        return nu_g - nu_r + k * turns

    for direction, ok in ((UP, lambda x: x >= 0), (DOWN, lambda x: x <= 0)):
        for c in range(k):
            if all(ok(adjusted(r, g, sh, c)) for r, g, sh in fingers):
                return direction
    return NONE


# -- sphere incidence components ------------------------------------------

_RED = "R"
_GREEN = "G"


def _incidence_components(s: FWSystem) -> list[dict]:
    """Components of the red/green sphere union, discs attached as edges.

    Each eye contributes its dual intersection point (a zero-weight edge
    between its red and green sphere); each disc contributes an edge from
    its red sphere to its green sphere weighted by the shift.  Returns one
    dict per component with the eyes and the attached disc indices.
    """
    if s.lifted:
        raise InvalidSystemError("sphere components are defined for base-indexed systems")
    vertices = {(_RED, i) for i in range(1, s.k + 1)} | {
        (_GREEN, i) for i in range(1, s.k + 1)
    }
    edges = [((_RED, i), (_GREEN, i), 0) for i in range(1, s.k + 1)]
    tagged: list[tuple[str, int]] = [("std", i) for i in range(1, s.k + 1)]
    for fi, d in enumerate(s.fingers):
        edges.append(((_RED, d.red), (_GREEN, d.green), d.shift))
        tagged.append(("f", fi))
    for wi, d in enumerate(s.whitneys):
        edges.append(((_RED, d.red), (_GREEN, d.green), d.shift))
        tagged.append(("w", wi))
    comps = _weak_components(vertices, edges)
    out = []
    for comp in comps:
        eyes = {i for tag, i in comp if tag == _RED}
        fids = {idx for (kind, idx), e in zip(tagged, edges) if kind == "f" and e[0] in comp}
        wids = {idx for (kind, idx), e in zip(tagged, edges) if kind == "w" and e[0] in comp}
        comp_edges = [e for e in edges if e[0] in comp]
        out.append({"eyes": eyes, "fingers": fids, "whitneys": wids, "edges": comp_edges})
    return out


def _component_is_inessential(comp: dict) -> bool:
    # All undirected cycles in the component must have total winding zero,
    # i.e. the edge weights admit a potential function on the spheres.
    pot: dict = {}
    adj: dict = {}
    for u, v, w in comp["edges"]:
        adj.setdefault(u, []).append((v, w))
        adj.setdefault(v, []).append((u, -w))
    for start in comp["eyes"]:
        root = (_RED, start)
        if root in pot:
            continue
        pot[root] = 0
        stack = [root]
        while stack:
            node = stack.pop()
            for nxt, w in adj.get(node, []):
                if nxt not in pot:
                    pot[nxt] = pot[node] + w
                    stack.append(nxt)
                elif pot[nxt] != pot[node] + w:
                    return False
    return True


def _component_is_s_trivial(s: FWSystem, comp: dict) -> bool:
    edges = [
        (s.fingers[fi].red, s.fingers[fi].green, s.fingers[fi].shift)
        for fi in comp["fingers"]
    ]
    return graph_is_s_trivial(comp["eyes"], edges)


def _rebuild(
    s: FWSystem,
    dead_fingers: set[int],
    dead_whitneys: set[int],
    removed_eyes: set[int],
    extra_tubes: dict[int, int],
    drop_red_entries_for: set[int],
) -> FWSystem:
    """Drop discs and eyes, renumber survivors, renormalize shifts.

    A surviving disc's displacement shrinks by the number of removed eye
    slots its lift passes, so cycle windings keep their sign against the
    smaller eye count.  ``extra_tubes`` adds tube annotations to surviving
    Whitney discs (keyed by old index) before reindexing.
    """
    survivors = sorted(set(range(1, s.k + 1)) - removed_eyes)
    rank = {eye: n + 1 for n, eye in enumerate(survivors)}
    kk = len(survivors)

    def renorm(d):
        if d.shift == 0:
            crossing = 0
        elif d.shift > 0:
            crossing = sum(
                1 for x in range(d.red + 1, d.red + d.shift + 1) if wrap(x, s.k) in removed_eyes
            )
        else:
            crossing = -sum(
                1 for x in range(d.red + d.shift, d.red) if wrap(x, s.k) in removed_eyes
            )
        return d.shift - crossing

    new_fingers = []
    fmap: dict[int, int] = {}
    for fi, d in enumerate(s.fingers):
        if fi in dead_fingers or d.red in removed_eyes or d.green in removed_eyes:
            continue
        fmap[fi] = len(new_fingers)
        new_fingers.append(
            replace(d, red=rank[d.red], green=rank[d.green], shift=renorm(d))
        )
    new_whitneys = []
    wmap: dict[int, int] = {}
    for wi, d in enumerate(s.whitneys):
        if wi in dead_whitneys or d.red in removed_eyes or d.green in removed_eyes:
            continue
        wmap[wi] = len(new_whitneys)
        new_whitneys.append(
            replace(
                d,
                red=rank[d.red],
                green=rank[d.green],
                shift=renorm(d),
                tubes=d.tubes + extra_tubes.get(wi, 0),
            )
        )
    pairing = tuple(
        (fmap[fi], wmap[wi]) for fi, wi in s.pairing if fi in fmap and wi in wmap
    )
    incidence = None
    if s.incidence is not None:
        incidence = IncidenceTables.from_dicts(
            interior_fw={
                (fmap[fi], wmap[wi]): c
                for (fi, wi), c in s.incidence.interior.items()
                if fi in fmap and wi in wmap
            },
            boundary_fw={
                (fmap[fi], wmap[wi]): c
                for (fi, wi), c in s.incidence.boundary.items()
                if fi in fmap and wi in wmap
            },
            whitney_red={
                (wmap[wi], rank[i]): c
                for (wi, i), c in s.incidence.red_hits.items()
                if wi in wmap and i not in removed_eyes and i not in drop_red_entries_for
            },
            dual_certs={
                rank[i]: cert
                for i, cert in s.incidence.certs.items()
                if i not in removed_eyes
            },
        )
    return FWSystem(kk, tuple(new_fingers), tuple(new_whitneys), pairing, incidence)


def contract_inessential(s: FWSystem) -> FWSystem:
    """Contract components of the sphere union with no essential loops.

    A component is inessential when every cycle through its spheres and
    discs has total winding zero.  Its spheres revert to the standard
    position: all discs touching the component are deleted, the eyes stay,
    and every surviving Whitney disc gains one tube per recorded
    intersection with a contracted red sphere.
    """
    comps = _incidence_components(s)
    dead_f: set[int] = set()
    dead_w: set[int] = set()
    contracted_eyes: set[int] = set()
    for comp in comps:
        if _component_is_inessential(comp):
            dead_f |= comp["fingers"]
            dead_w |= comp["whitneys"]
            contracted_eyes |= comp["eyes"]
    extra: dict[int, int] = {}
    if s.incidence is not None:
        for (wi, eye), c in s.incidence.red_hits.items():
            if wi not in dead_w and eye in contracted_eyes:
                extra[wi] = extra.get(wi, 0) + c
    # Eyes remain (their spheres are standard now): only discs go.  Red-hit
    # entries on contracted eyes are consumed by the tubing.
    return _rebuild(s, dead_f, dead_w, set(), extra, contracted_eyes)


def delete_s_trivial(s: FWSystem) -> FWSystem:
    """Delete every component whose own finger graph certifies triviality."""
    comps = _incidence_components(s)
    dead_f: set[int] = set()
    dead_w: set[int] = set()
    removed_eyes: set[int] = set()
    for comp in comps:
        if _component_is_s_trivial(s, comp):
            dead_f |= comp["fingers"]
            dead_w |= comp["whitneys"]
            removed_eyes |= comp["eyes"]
    return _rebuild(s, dead_f, dead_w, removed_eyes, {}, set())


def dual_sphere_reduce(s: FWSystem, duals: set[int]) -> FWSystem:
    """Remove eyes carrying certified dual spheres; tube off the damage.

    For each eye in ``duals`` the recorded dual sphere must meet that eye's
    red/green pair exactly once and the disc families not at all.  Discs
    touching a removed eye are deleted; every surviving Whitney disc gains
    ``2 * interior + boundary`` tubes against each removed finger, the two
    flavours of intersection the Whitney moves trade for tubes.
    """
    duals = set(duals)
    if not duals:
        return s
    if s.lifted:
        raise InvalidSystemError("dual-sphere reduction applies to base-indexed systems")
    if s.incidence is None:
        raise InvalidDualCertificateError("incidence tables are required to certify dual spheres")
    if not duals <= set(range(1, s.k + 1)):
        raise InvalidDualCertificateError(f"dual eyes {sorted(duals)} out of range for k={s.k}")
    certs = s.incidence.certs
    for eye in sorted(duals):
        cert = certs.get(eye)
        if cert is None:
            raise InvalidDualCertificateError(f"no dual sphere recorded for eye {eye}")
        rg, fw = cert
        if rg != 1 or fw != 0:
            raise InvalidDualCertificateError(
                f"dual sphere for eye {eye} meets spheres {rg} times and discs {fw} times; "
                f"need exactly (1, 0)"
            )
    dead_f = {
        fi
        for fi, d in enumerate(s.fingers)
        if d.red in duals or d.green in duals
    }
    dead_w = {
        wi
        for wi, d in enumerate(s.whitneys)
        if d.red in duals or d.green in duals
    }
    interior = s.incidence.interior
    boundary = s.incidence.boundary
    extra: dict[int, int] = {}
    for wi in range(len(s.whitneys)):
        if wi in dead_w:
            continue
        added = sum(
            2 * interior.get((fi, wi), 0) + boundary.get((fi, wi), 0) for fi in dead_f
        )
        if added:
            extra[wi] = added
    return _rebuild(s, dead_f, dead_w, duals, extra, set())
