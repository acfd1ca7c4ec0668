"""Canonical JSON documents for systems, presentations and compiler inputs.

One schema: ``{"formatVersion": 1, "kind": ..., "payload": ..., "metadata": ...}``
with kinds ``fwsystem``, ``presentation`` and ``compiler-input``.  Serialization
is deterministic (sorted keys, fixed separators, ASCII escapes), so structural
equality of documents coincides with byte equality of their canonical forms.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

from .compiler import CompilerInput, TraceEvent
from .fwcs_rules import OptimizedCert
from .presentations import (
    ComponentRef,
    CurveForest,
    CurveNode,
    DiscForest,
    Family,
    Presentation,
)
from .rewrites import Diff, RewriteOp
from .systems import DiscRecord, FWSystem, IncidenceTables
from .twists import Twist

FORMAT_VERSION = 1

KIND_SYSTEM = "fwsystem"
KIND_PRESENTATION = "presentation"
KIND_COMPILER_INPUT = "compiler-input"
KINDS = (KIND_SYSTEM, KIND_PRESENTATION, KIND_COMPILER_INPUT)


class ParseError(ValueError):
    """Schema violation; carries the offending field path."""

    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path
        self.reason = message


@dataclass(frozen=True)
class Document:
    kind: str
    payload: FWSystem | Presentation | CompilerInput
    metadata: tuple[tuple[str, str], ...] = ()
    format_version: int = FORMAT_VERSION

    def __post_init__(self):
        object.__setattr__(self, "metadata", tuple(sorted(tuple(m) for m in self.metadata)))

    @classmethod
    def wrap(cls, payload, metadata: dict[str, str] | None = None) -> "Document":
        if isinstance(payload, FWSystem):
            kind = KIND_SYSTEM
        elif isinstance(payload, Presentation):
            kind = KIND_PRESENTATION
        elif isinstance(payload, CompilerInput):
            kind = KIND_COMPILER_INPUT
        else:
            raise TypeError(f"cannot wrap payload of type {type(payload).__name__}")
        return cls(kind, payload, tuple(sorted((metadata or {}).items())))


# -- encoders ---------------------------------------------------------------


def twist_to_jsonable(t: Twist) -> list:
    return [t.p, t.q]


def _disc_to_jsonable(d: DiscRecord) -> dict:
    out = {
        "red": d.red,
        "green": d.green,
        "shift": d.shift,
        "twist": twist_to_jsonable(d.twist),
        "tubes": d.tubes,
    }
    if d.geometry is not None:
        out["geometry"] = forest_to_jsonable(d.geometry)
    return out


def _incidence_to_jsonable(t: IncidenceTables) -> dict:
    return {
        "interior": [[f, w, c] for (f, w), c in t.interior_fw],
        "boundary": [[f, w, c] for (f, w), c in t.boundary_fw],
        "whitneyRed": [[w, i, c] for (w, i), c in t.whitney_red],
        "dualCerts": [[i, rg, fw] for i, (rg, fw) in t.dual_certs],
    }


def system_to_jsonable(s: FWSystem) -> dict:
    out = {
        "k": s.k,
        "lifted": s.lifted,
        "fingers": [_disc_to_jsonable(d) for d in s.fingers],
        "whitneys": [_disc_to_jsonable(d) for d in s.whitneys],
        "pairing": [[f, w] for f, w in s.pairing],
        "incidence": _incidence_to_jsonable(s.incidence) if s.incidence else None,
    }
    return out


def _node_to_jsonable(n: CurveNode) -> dict:
    return {
        "red": [[eye, c] for eye, c in n.red_incidence],
        "children": [_node_to_jsonable(ch) for ch in n.children],
    }


def forest_to_jsonable(f: CurveForest) -> dict:
    return {
        "discs": [
            {
                "outside": [[eye, c] for eye, c in d.outside_incidence],
                "roots": [_node_to_jsonable(r) for r in d.roots],
            }
            for d in f.discs
        ]
    }


def _component_to_jsonable(c: ComponentRef) -> dict:
    fam: dict = {"kind": c.family.kind, "i": c.family.i}
    if c.family.j is not None:
        fam["j"] = c.family.j
    if c.family.curve is not None:
        fam["curve"] = c.family.curve
    return {
        "id": c.id,
        "kind": c.kind,
        "family": fam,
        "label": c.label,
        "framing": c.framing,
        "partner": c.partner,
    }


def presentation_to_jsonable(p: Presentation) -> dict:
    return {
        "components": [_component_to_jsonable(c) for c in p.components],
        "arrows": sorted([list(a) for a in p.arrows]),
        "provenance": [
            {"family": list(key), "forest": forest_to_jsonable(f)}
            for key, f in p.provenance
        ],
    }


def compiler_input_to_jsonable(inp: CompilerInput) -> dict:
    return {
        "system": system_to_jsonable(inp.system),
        "geometry": [
            {"family": list(key), "forest": forest_to_jsonable(f)}
            for key, f in inp.geometry
        ],
        "separationOk": inp.separation_ok,
    }


def op_to_jsonable(op: RewriteOp) -> dict:
    out: dict = {"kind": op.kind}
    if op.targets:
        out["targets"] = list(op.targets)
    if op.aprime:
        out["aprime"] = list(op.aprime)
    if op.knot is not None:
        out["knot"] = op.knot
    if op.is_split_hopf:
        out["isSplitHopf"] = True
    if op.alpha is not None:
        out["alpha"] = op.alpha
    if op.beta_prime is not None:
        out["betaPrime"] = op.beta_prime
    if op.variant is not None:
        out["variant"] = op.variant
    return out


def diff_to_jsonable(d: Diff) -> dict:
    return {
        "addedComponents": [_component_to_jsonable(c) for c in d.added_components],
        "removedComponents": [_component_to_jsonable(c) for c in d.removed_components],
        "labelChanges": [list(ch) for ch in d.label_changes],
        "addedArrows": [list(a) for a in d.added_arrows],
        "removedArrows": [list(a) for a in d.removed_arrows],
        "notes": list(d.notes),
    }


def trace_to_jsonable(trace: tuple[TraceEvent, ...]) -> list:
    out = []
    for ev in trace:
        row: dict = {"kind": ev.kind, "rule": ev.rule}
        if ev.component is not None:
            row["component"] = _component_to_jsonable(ev.component)
        if ev.family is not None:
            row["family"] = list(ev.family)
        if ev.forest is not None:
            row["forest"] = forest_to_jsonable(ev.forest)
        if ev.arrow is not None:
            row["arrow"] = list(ev.arrow)
        if ev.optional:
            row["optional"] = True
        if ev.note:
            row["note"] = ev.note
        out.append(row)
    return out


def cert_to_jsonable(cert: OptimizedCert) -> dict:
    return {
        "A": sorted(cert.a),
        "B": sorted(cert.b),
        "C": sorted(cert.c),
        "tori": [[alpha, list(betas)] for alpha, betas in cert.tori],
        "handlebodies": [
            [alpha, [list(g) for g in groups]] for alpha, groups in cert.handlebodies
        ],
    }


def document_to_jsonable(doc: Document) -> dict:
    if doc.kind == KIND_SYSTEM:
        payload = system_to_jsonable(doc.payload)
    elif doc.kind == KIND_PRESENTATION:
        payload = presentation_to_jsonable(doc.payload)
    elif doc.kind == KIND_COMPILER_INPUT:
        payload = compiler_input_to_jsonable(doc.payload)
    else:
        raise ValueError(f"unknown document kind {doc.kind!r}")
    return {
        "formatVersion": doc.format_version,
        "kind": doc.kind,
        "payload": payload,
        "metadata": dict(doc.metadata),
    }


def serialize(doc: Document) -> bytes:
    """Canonical bytes: sorted keys, compact separators, ASCII escapes."""
    return json.dumps(
        document_to_jsonable(doc), sort_keys=True, separators=(",", ":"), ensure_ascii=True
    ).encode("utf-8")


# -- decoders ---------------------------------------------------------------


def _expect(value, types, path: str):
    if not isinstance(value, types):
        names = types.__name__ if isinstance(types, type) else "/".join(t.__name__ for t in types)
        raise ParseError(f"expected {names}, got {type(value).__name__}", path)
    return value


def _get(obj: dict, key: str, types, path: str, default=_expect):
    if key not in obj:
        if default is not _expect:
            return default
        raise ParseError(f"missing field {key!r}", path)
    return _expect(obj[key], types, f"{path}.{key}")


def _int_pairs(raw, path: str) -> tuple[tuple[int, int], ...]:
    _expect(raw, list, path)
    out = []
    for n, row in enumerate(raw):
        _expect(row, list, f"{path}[{n}]")
        if len(row) != 2:
            raise ParseError("expected a pair", f"{path}[{n}]")
        out.append((_expect(row[0], int, f"{path}[{n}][0]"), _expect(row[1], int, f"{path}[{n}][1]")))
    return tuple(out)


def twist_from_jsonable(raw, path: str = "$") -> Twist:
    _expect(raw, list, path)
    if len(raw) != 2:
        raise ParseError("twist is a [p, q] pair", path)
    return Twist(_expect(raw[0], int, f"{path}[0]"), _expect(raw[1], int, f"{path}[1]"))


def _disc_from_jsonable(raw, kind: str, path: str) -> DiscRecord:
    _expect(raw, dict, path)
    geometry = None
    if raw.get("geometry") is not None:
        geometry = forest_from_jsonable(raw["geometry"], f"{path}.geometry")
    return DiscRecord(
        red=_get(raw, "red", int, path),
        green=_get(raw, "green", int, path),
        shift=_get(raw, "shift", int, path),
        kind=kind,
        twist=twist_from_jsonable(_get(raw, "twist", list, path, [0, 0]), f"{path}.twist"),
        tubes=_get(raw, "tubes", int, path, 0),
        geometry=geometry,
    )


def _incidence_from_jsonable(raw, path: str) -> IncidenceTables | None:
    if raw is None:
        return None
    _expect(raw, dict, path)

    def triples(key):
        rows = _get(raw, key, list, path, [])
        out = {}
        for n, row in enumerate(rows):
            _expect(row, list, f"{path}.{key}[{n}]")
            if len(row) != 3:
                raise ParseError("expected a triple", f"{path}.{key}[{n}]")
            a, b, c = (_expect(x, int, f"{path}.{key}[{n}]") for x in row)
            out[(a, b)] = c
        return out

    certs_raw = _get(raw, "dualCerts", list, path, [])
    certs = {}
    for n, row in enumerate(certs_raw):
        _expect(row, list, f"{path}.dualCerts[{n}]")
        if len(row) != 3:
            raise ParseError("expected [eye, rg, fw]", f"{path}.dualCerts[{n}]")
        eye, rg, fw = (_expect(x, int, f"{path}.dualCerts[{n}]") for x in row)
        certs[eye] = (rg, fw)
    return IncidenceTables.from_dicts(
        interior_fw=triples("interior"),
        boundary_fw=triples("boundary"),
        whitney_red=triples("whitneyRed"),
        dual_certs=certs,
    )


def system_from_jsonable(raw, path: str = "$") -> FWSystem:
    _expect(raw, dict, path)
    try:
        return FWSystem(
            k=_get(raw, "k", int, path),
            fingers=tuple(
                _disc_from_jsonable(d, "finger", f"{path}.fingers[{n}]")
                for n, d in enumerate(_get(raw, "fingers", list, path, []))
            ),
            whitneys=tuple(
                _disc_from_jsonable(d, "whitney", f"{path}.whitneys[{n}]")
                for n, d in enumerate(_get(raw, "whitneys", list, path, []))
            ),
            pairing=_int_pairs(_get(raw, "pairing", list, path, []), f"{path}.pairing"),
            incidence=_incidence_from_jsonable(raw.get("incidence"), f"{path}.incidence"),
            lifted=_get(raw, "lifted", bool, path, False),
        )
    except ValueError as err:
        if isinstance(err, ParseError):
            raise
        raise ParseError(str(err), path) from err


def _node_from_jsonable(raw, path: str) -> CurveNode:
    _expect(raw, dict, path)
    return CurveNode(
        red_incidence=_int_pairs(_get(raw, "red", list, path, []), f"{path}.red"),
        children=tuple(
            _node_from_jsonable(ch, f"{path}.children[{n}]")
            for n, ch in enumerate(_get(raw, "children", list, path, []))
        ),
    )


def forest_from_jsonable(raw, path: str = "$") -> CurveForest:
    _expect(raw, dict, path)
    discs = []
    for n, d in enumerate(_get(raw, "discs", list, path, [])):
        _expect(d, dict, f"{path}.discs[{n}]")
        discs.append(
            DiscForest(
                roots=tuple(
                    _node_from_jsonable(r, f"{path}.discs[{n}].roots[{m}]")
                    for m, r in enumerate(_get(d, "roots", list, f"{path}.discs[{n}]", []))
                ),
                outside_incidence=_int_pairs(
                    _get(d, "outside", list, f"{path}.discs[{n}]", []),
                    f"{path}.discs[{n}].outside",
                ),
            )
        )
    return CurveForest(tuple(discs))


def _component_from_jsonable(raw, path: str) -> ComponentRef:
    _expect(raw, dict, path)
    fam_raw = _get(raw, "family", dict, path)
    try:
        fam = Family(
            kind=_get(fam_raw, "kind", str, f"{path}.family"),
            i=_get(fam_raw, "i", int, f"{path}.family"),
            j=_get(fam_raw, "j", int, f"{path}.family", None),
            curve=_get(fam_raw, "curve", int, f"{path}.family", None),
        )
        return ComponentRef(
            id=_get(raw, "id", str, path),
            kind=_get(raw, "kind", str, path),
            family=fam,
            label=_get(raw, "label", str, path),
            framing=_get(raw, "framing", int, path),
            partner=_get(raw, "partner", str, path),
        )
    except ValueError as err:
        if isinstance(err, ParseError):
            raise
        raise ParseError(str(err), path) from err


def presentation_from_jsonable(raw, path: str = "$") -> Presentation:
    _expect(raw, dict, path)
    comps = tuple(
        _component_from_jsonable(c, f"{path}.components[{n}]")
        for n, c in enumerate(_get(raw, "components", list, path, []))
    )
    arrows = set()
    for n, row in enumerate(_get(raw, "arrows", list, path, [])):
        _expect(row, list, f"{path}.arrows[{n}]")
        if len(row) != 2:
            raise ParseError("arrow is a [from, to] pair", f"{path}.arrows[{n}]")
        arrows.add((_expect(row[0], str, f"{path}.arrows[{n}]"), _expect(row[1], str, f"{path}.arrows[{n}]")))
    prov = []
    for n, row in enumerate(_get(raw, "provenance", list, path, [])):
        _expect(row, dict, f"{path}.provenance[{n}]")
        key_raw = _get(row, "family", list, f"{path}.provenance[{n}]")
        if len(key_raw) != 3:
            raise ParseError("family key is [kind, i, j]", f"{path}.provenance[{n}].family")
        key = (
            _expect(key_raw[0], str, f"{path}.provenance[{n}].family"),
            _expect(key_raw[1], int, f"{path}.provenance[{n}].family"),
            _expect(key_raw[2], int, f"{path}.provenance[{n}].family"),
        )
        prov.append((key, forest_from_jsonable(_get(row, "forest", dict, f"{path}.provenance[{n}]"), f"{path}.provenance[{n}].forest")))
    try:
        return Presentation(comps, frozenset(arrows), tuple(prov))
    except ValueError as err:
        raise ParseError(str(err), path) from err


def compiler_input_from_jsonable(raw, path: str = "$") -> CompilerInput:
    _expect(raw, dict, path)
    geometry = []
    for n, row in enumerate(_get(raw, "geometry", list, path, [])):
        _expect(row, dict, f"{path}.geometry[{n}]")
        key = _int_pairs([_get(row, "family", list, f"{path}.geometry[{n}]")], f"{path}.geometry[{n}]")[0]
        geometry.append(
            (key, forest_from_jsonable(_get(row, "forest", dict, f"{path}.geometry[{n}]"), f"{path}.geometry[{n}].forest"))
        )
    return CompilerInput(
        system=system_from_jsonable(_get(raw, "system", dict, path), f"{path}.system"),
        geometry=tuple(geometry),
        separation_ok=_get(raw, "separationOk", bool, path, False),
    )


def op_from_jsonable(raw, path: str = "$") -> RewriteOp:
    _expect(raw, dict, path)
    return RewriteOp(
        kind=_get(raw, "kind", str, path),
        targets=tuple(
            _expect(t, str, f"{path}.targets[{n}]")
            for n, t in enumerate(_get(raw, "targets", list, path, []))
        ),
        aprime=tuple(
            _expect(t, str, f"{path}.aprime[{n}]")
            for n, t in enumerate(_get(raw, "aprime", list, path, []))
        ),
        knot=_get(raw, "knot", str, path, None),
        is_split_hopf=_get(raw, "isSplitHopf", bool, path, False),
        alpha=_get(raw, "alpha", str, path, None),
        beta_prime=_get(raw, "betaPrime", str, path, None),
        variant=_get(raw, "variant", str, path, None),
    )


def cert_from_jsonable(raw, path: str = "$") -> OptimizedCert:
    _expect(raw, dict, path)

    def ids(key):
        return frozenset(
            _expect(x, str, f"{path}.{key}[{n}]")
            for n, x in enumerate(_get(raw, key, list, path, []))
        )

    tori = []
    for n, row in enumerate(_get(raw, "tori", list, path, [])):
        _expect(row, list, f"{path}.tori[{n}]")
        if len(row) != 2:
            raise ParseError("torus entry is [alpha, [betas]]", f"{path}.tori[{n}]")
        tori.append((_expect(row[0], str, f"{path}.tori[{n}]"), tuple(_expect(b, str, f"{path}.tori[{n}]") for b in _expect(row[1], list, f"{path}.tori[{n}]"))))
    handles = []
    for n, row in enumerate(_get(raw, "handlebodies", list, path, [])):
        _expect(row, list, f"{path}.handlebodies[{n}]")
        if len(row) != 2:
            raise ParseError("handlebody entry is [alpha, [[group]...]]", f"{path}.handlebodies[{n}]")
        groups = tuple(
            tuple(_expect(g, str, f"{path}.handlebodies[{n}]") for g in _expect(grp, list, f"{path}.handlebodies[{n}]"))
            for grp in _expect(row[1], list, f"{path}.handlebodies[{n}]")
        )
        handles.append((_expect(row[0], str, f"{path}.handlebodies[{n}]"), groups))
    return OptimizedCert(ids("A"), ids("B"), ids("C"), tuple(tori), tuple(handles))


def parse(data: bytes | str) -> Document:
    """Parse and validate a document; raises :class:`ParseError` on violations."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as err:
        raise ParseError(f"invalid JSON at line {err.lineno}, column {err.colno}: {err.msg}") from err
    _expect(raw, dict, "$")
    version = _get(raw, "formatVersion", int, "$")
    if version != FORMAT_VERSION:
        raise ParseError(f"unknown formatVersion {version}", "$.formatVersion")
    kind = _get(raw, "kind", str, "$")
    payload_raw = _get(raw, "payload", dict, "$")
    metadata_raw = _get(raw, "metadata", dict, "$", {})
    metadata = tuple(
        sorted((k, _expect(v, str, f"$.metadata.{k}")) for k, v in metadata_raw.items())
    )
    if kind == KIND_SYSTEM:
        payload = system_from_jsonable(payload_raw, "$.payload")
    elif kind == KIND_PRESENTATION:
        payload = presentation_from_jsonable(payload_raw, "$.payload")
    elif kind == KIND_COMPILER_INPUT:
        payload = compiler_input_from_jsonable(payload_raw, "$.payload")
    else:
        raise ParseError(f"unknown kind {kind!r}", "$.kind")
    return Document(kind, payload, metadata, version)
