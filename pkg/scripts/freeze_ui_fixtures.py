#!/usr/bin/env python3
"""Capture real service responses for the two-finger fixture as JSON files.

The browser UI's unit tests replay these instead of spawning the Python
service, keeping them hermetic while staying faithful to the protocol.
"""
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from fwbench.compiler import CompilerInput, compile_system
from fwbench.presentations import Presentation
from fwbench.serialization import diff_to_jsonable, op_from_jsonable
from fwbench.service import history_body, ops_body, presentation_body
from fwbench.session import Session
from fwbench.systems import DiscRecord, FWSystem

OUT = Path(__file__).resolve().parent.parent / "frontend" / "src" / "fixtures"


def dump(name: str, body: dict):
    OUT.mkdir(parents=True, exist_ok=True)
    (OUT / name).write_text(json.dumps(body, sort_keys=True, indent=2) + "\n")
    print(f"wrote {OUT / name}")


def main():
    s = FWSystem(
        k=1,
        fingers=(DiscRecord(1, 1, 1, "finger"), DiscRecord(1, 1, -1, "finger")),
        whitneys=(DiscRecord(1, 1, 1, "whitney"), DiscRecord(1, 1, -1, "whitney")),
        pairing=((0, 0), (1, 1)),
    )
    session = Session(compile_system(CompilerInput.make(s, separation_ok=True)).presentation)

    dump("presentation0.json", presentation_body(session))
    dump("ops0.json", ops_body(session.presentation))

    op = op_from_jsonable({"kind": "MakeAbstract", "targets": ["b(-1)"]})
    diff = session.apply(op)
    apply_response = presentation_body(session)
    apply_response["diff"] = diff_to_jsonable(diff)
    dump("apply1.json", apply_response)
    dump("ops1.json", ops_body(session.presentation))

    session.undo()
    dump("undo.json", presentation_body(session))
    session.redo()
    dump("history.json", history_body(session))

    # abstracting a circle opens cancellation candidates, including the
    # split-Hopf one whose witness slot stays unsatisfied
    session.apply(op_from_jsonable({"kind": "MakeAbstract", "targets": ["b'(1)"]}))
    dump("ops2.json", ops_body(session.presentation))
    dump("presentation2.json", presentation_body(session))

    dump(
        "empty.json",
        presentation_body(Session(Presentation())),
    )


if __name__ == "__main__":
    main()
