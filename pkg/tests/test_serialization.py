"""Round-trips, canonical bytes, schema errors."""
import json
import random

import pytest

from fwbench.compiler import CompilerInput, compile_system
from fwbench.presentations import Presentation
from fwbench.serialization import (
    Document,
    ParseError,
    cert_from_jsonable,
    cert_to_jsonable,
    op_from_jsonable,
    op_to_jsonable,
    parse,
    serialize,
)
from fwbench.fwcs_rules import OptimizedCert
from fwbench.rewrites import RewriteOp
from fwbench.systems import FWSystem

from strategies import random_family_presentation, random_germ_system, random_system


def test_empty_presentation_document_is_minimal_and_stable():
    doc = Document.wrap(Presentation())
    data = serialize(doc)
    assert json.loads(data) == {
        "formatVersion": 1,
        "kind": "presentation",
        "payload": {"components": [], "arrows": [], "provenance": []},
        "metadata": {},
    }
    assert parse(data) == doc


def test_roundtrip_systems():
    rng = random.Random(8)
    for _ in range(150):
        doc = Document.wrap(random_system(rng), {"name": "fuzz"})
        assert parse(serialize(doc)) == doc


def test_roundtrip_system_with_record_geometry():
    from fwbench.presentations import CurveForest, CurveNode, DiscForest
    from fwbench.systems import DiscRecord

    forest = CurveForest((DiscForest(roots=(CurveNode(red_incidence=((1, 2),)),)),))
    s = FWSystem(
        k=1,
        whitneys=(DiscRecord(1, 1, 1, "whitney", geometry=forest),),
    )
    doc = Document.wrap(s)
    assert parse(serialize(doc)) == doc


def test_roundtrip_presentations():
    rng = random.Random(9)
    for _ in range(60):
        doc = Document.wrap(random_family_presentation(rng))
        assert parse(serialize(doc)) == doc


def test_roundtrip_compiler_inputs_and_outputs():
    rng = random.Random(10)
    for _ in range(40):
        s = random_germ_system(rng, max_k=2, max_fingers=2)
        inp = CompilerInput.make(s, separation_ok=True)
        doc = Document.wrap(inp)
        assert parse(serialize(doc)) == doc
        out = compile_system(inp)
        pdoc = Document.wrap(out.presentation)
        assert parse(serialize(pdoc)) == pdoc


def test_serialization_deterministic():
    rng1, rng2 = random.Random(77), random.Random(77)
    a = serialize(Document.wrap(random_family_presentation(rng1)))
    b = serialize(Document.wrap(random_family_presentation(rng2)))
    assert a == b


def test_unknown_format_version():
    doc = serialize(Document.wrap(FWSystem(k=0)))
    raw = json.loads(doc)
    raw["formatVersion"] = 2
    with pytest.raises(ParseError) as err:
        parse(json.dumps(raw))
    assert "formatVersion" in str(err.value)


def test_unknown_kind():
    raw = {"formatVersion": 1, "kind": "mystery", "payload": {}, "metadata": {}}
    with pytest.raises(ParseError):
        parse(json.dumps(raw))


def test_parse_error_carries_field_path():
    raw = {
        "formatVersion": 1,
        "kind": "fwsystem",
        "payload": {"k": "three"},
        "metadata": {},
    }
    with pytest.raises(ParseError) as err:
        parse(json.dumps(raw))
    assert "$.payload.k" in str(err.value)


def test_parse_error_on_bad_json_reports_line():
    with pytest.raises(ParseError) as err:
        parse(b'{"formatVersion": 1,\n  "kind": }')
    assert "line 2" in str(err.value)


def test_parse_rejects_semantic_violations():
    raw = {
        "formatVersion": 1,
        "kind": "fwsystem",
        "payload": {
            "k": 1,
            "fingers": [{"red": 5, "green": 1, "shift": 0}],
            "whitneys": [],
            "pairing": [],
        },
        "metadata": {},
    }
    with pytest.raises(ParseError):
        parse(json.dumps(raw))


def test_op_codec_roundtrip():
    ops = [
        RewriteOp("MakeAbstract", targets=("a", "b")),
        RewriteOp("MakeConcrete", aprime=("a'",)),
        RewriteOp("CancelKnotCircle", knot="k"),
        RewriteOp("CancelHopf", knot="k", is_split_hopf=True),
        RewriteOp("Slide", alpha="a", beta_prime="b'", variant="0•"),
    ]
    for op in ops:
        assert op_from_jsonable(op_to_jsonable(op)) == op


def test_op_variant_aliases():
    raw = {"kind": "Slide", "alpha": "a", "betaPrime": "b'", "variant": "ob"}
    assert op_from_jsonable(raw).variant == "0•"


def test_cert_codec_roundtrip():
    cert = OptimizedCert(
        a=frozenset({"x"}),
        b=frozenset({"y"}),
        c=frozenset({"z"}),
        tori=(("x", ("y",)),),
        handlebodies=(("x", (("z",),)),),
    )
    assert cert_from_jsonable(cert_to_jsonable(cert)) == cert
