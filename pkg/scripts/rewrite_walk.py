#!/usr/bin/env python3
"""Random legal rewrite walk over a compiled presentation.

Every step prints the chosen operation and its exact diff; the walk stops
when no operation applies or after --steps moves.
"""
import argparse
import json
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from fwbench.compiler import CompilerInput, compile_system
from fwbench.rewrites import apply, enumerate_candidates
from fwbench.serialization import diff_to_jsonable, op_to_jsonable
from fwbench.session import Session
from fwbench.systems import DiscRecord, FWSystem


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--steps", type=int, default=10)
    args = ap.parse_args()
    rng = random.Random(args.seed)

    s = FWSystem(
        k=1,
        fingers=(DiscRecord(1, 1, 1, "finger"), DiscRecord(1, 1, -1, "finger")),
        whitneys=(DiscRecord(1, 1, 1, "whitney"), DiscRecord(1, 1, -1, "whitney")),
        pairing=((0, 0), (1, 1)),
    )
    session = Session(compile_system(CompilerInput.make(s, separation_ok=True)).presentation)
    for step in range(args.steps):
        cands = [c for c in enumerate_candidates(session.presentation) if c.satisfied]
        if not cands:
            print(f"step {step}: no applicable operations, stopping")
            break
        op = rng.choice(cands).op
        diff = session.apply(op)
        print(f"step {step}: {json.dumps(op_to_jsonable(op), sort_keys=True)}")
        print(f"  diff: {json.dumps(diff_to_jsonable(diff), sort_keys=True)}")
    print(f"history length {len(session)}, cursor {session.cursor}")
    print(f"components left: {[c.id for c in session.presentation.components]}")


if __name__ == "__main__":
    main()
