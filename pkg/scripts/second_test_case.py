#!/usr/bin/env python3
"""The smallest undecided configuration: one eye, fingers of winding +1 and -1.

Builds the system, runs the cheap triviality criteria (which do not decide
it), compiles it to its carving/surgery presentation, and prints the rule
trace plus the partial order as DOT.
"""
import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from fwbench.compiler import CompilerInput, compile_system
from fwbench.presentations import depth
from fwbench.serialization import trace_to_jsonable
from fwbench.systems import DiscRecord, FWSystem, winding
from fwbench.triviality import is_monotone, s_trivial_by_graph


def main():
    s = FWSystem(
        k=1,
        fingers=(DiscRecord(1, 1, 1, "finger"), DiscRecord(1, 1, -1, "finger")),
        whitneys=(DiscRecord(1, 1, 1, "whitney"), DiscRecord(1, 1, -1, "whitney")),
        pairing=((0, 0), (1, 1)),
    )
    print("system: one eye, two paired finger/Whitney discs")
    for d in s.fingers:
        print(f"  finger {d.red}->{d.green}, winding {winding(d, s.k)}")
    print(f"monotone: {is_monotone(s)}")
    print(f"graph-criterion trivial: {s_trivial_by_graph(s)}")
    print()

    out = compile_system(CompilerInput.make(s, separation_ok=True))
    p = out.presentation
    print(f"compiled presentation: {len(p.components)} components, {len(p.arrows)} arrows")
    for c in p.components:
        print(f"  {c.id:<12} {c.kind:<14} label {c.label}  depth {depth(p, c.id)}")
    print()
    print("trace:")
    for row in trace_to_jsonable(out.trace):
        print(f"  {json.dumps(row, sort_keys=True)}")
    print()
    print("digraph presentation {")
    for src, dst in sorted(p.arrows):
        print(f'  "{src}" -> "{dst}";')
    print("}")


if __name__ == "__main__":
    main()
