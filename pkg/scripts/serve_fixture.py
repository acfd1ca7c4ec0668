#!/usr/bin/env python3
"""Serve the two-finger fixture for the browser UI (frontend/)."""
import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from fwbench.compiler import CompilerInput, compile_system
from fwbench.service import serve
from fwbench.session import Session
from fwbench.systems import DiscRecord, FWSystem


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--port", type=int, default=8642)
    args = ap.parse_args()
    s = FWSystem(
        k=1,
        fingers=(DiscRecord(1, 1, 1, "finger"), DiscRecord(1, 1, -1, "finger")),
        whitneys=(DiscRecord(1, 1, 1, "whitney"), DiscRecord(1, 1, -1, "whitney")),
        pairing=((0, 0), (1, 1)),
    )
    session = Session(compile_system(CompilerInput.make(s, separation_ok=True)).presentation)
    server = serve(session, port=args.port)
    host, port = server.server_address[:2]
    print(f"two-finger fixture on http://{host}:{port} (ctrl-c to stop)", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


if __name__ == "__main__":
    main()
