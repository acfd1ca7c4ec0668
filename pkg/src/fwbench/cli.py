"""Command-line workbench: validation, compilation, rewrites, DOT export, serving.

Exit codes: 0 on success, 1 on validation or precondition failure, 2 on
usage errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .compiler import CompilerInput, InvalidGeometryError, NeedsCoverError, compile_system
from .fwcs_rules import (
    CannotCheckLevelError,
    InvalidFamilyError,
    check_fwcs,
    check_optimized,
)
from .presentations import Presentation, Report, depth, max_depth, validate
from .rewrites import RewriteError
from .serialization import (
    Document,
    KIND_COMPILER_INPUT,
    KIND_PRESENTATION,
    KIND_SYSTEM,
    ParseError,
    cert_from_jsonable,
    op_from_jsonable,
    diff_to_jsonable,
    parse,
    serialize,
)
from .session import Session
from .systems import FWSystem, InvalidDegreeError, InvalidSystemError, lift_to_cover
from .triviality import is_monotone, s_trivial_by_graph
from . import rewrites


class CliError(Exception):
    pass


def _load(path: str) -> Document:
    try:
        return parse(Path(path).read_bytes())
    except FileNotFoundError:
        raise CliError(f"no such file: {path}")
    except ParseError as err:
        raise CliError(f"{path}: {err}")


def _want(doc: Document, kind: str, path: str):
    if doc.kind != kind:
        raise CliError(f"{path}: expected a {kind} document, found {doc.kind}")
    return doc.payload


def _write_doc(doc: Document, out: str | None):
    data = serialize(doc)
    if out:
        Path(out).write_bytes(data + b"\n")
    else:
        sys.stdout.write(data.decode("utf-8") + "\n")


def _print_report(report: Report) -> int:
    for v in report.violations:
        print(f"violation [{v.code}] {v.message}")
    for note in report.notes:
        print(f"note: {note}")
    print("result: " + ("valid" if report.ok else "invalid"))
    return 0 if report.ok else 1


def _cmd_validate(args) -> int:
    p = _want(_load(args.file), KIND_PRESENTATION, args.file)
    return _print_report(validate(p))


def _cmd_check_fwcs(args) -> int:
    p = _want(_load(args.file), KIND_PRESENTATION, args.file)
    return _print_report(check_fwcs(p))


def _cmd_check_optimized(args) -> int:
    p = _want(_load(args.file), KIND_PRESENTATION, args.file)
    try:
        raw = json.loads(Path(args.cert).read_text())
        cert = cert_from_jsonable(raw)
    except FileNotFoundError:
        raise CliError(f"no such file: {args.cert}")
    except (json.JSONDecodeError, ParseError) as err:
        raise CliError(f"{args.cert}: {err}")
    pre = check_fwcs(p)
    if not pre.ok:
        print("presentation is not a finger|Whitney presentation:")
        return _print_report(pre)
    return _print_report(check_optimized(p, cert))


def _cmd_depth(args) -> int:
    p = _want(_load(args.file), KIND_PRESENTATION, args.file)
    report = validate(p)
    if not report.ok:
        return _print_report(report)
    for c in p.components:
        print(f"{c.id}\t{depth(p, c.id)}")
    print(f"max-depth\t{max_depth(p)}")
    return 0


def _cmd_compile(args) -> int:
    doc = _load(args.file)
    if doc.kind == KIND_COMPILER_INPUT:
        inp = doc.payload
    elif doc.kind == KIND_SYSTEM:
        # Bare systems get the minimal geometry: one cut curve per crossing
        # disc, separation granted when every winding magnitude is below 1.
        inp = CompilerInput.make(doc.payload)
    else:
        raise CliError(f"{args.file}: expected fwsystem or compiler-input, found {doc.kind}")
    out = compile_system(inp)
    _write_doc(Document.wrap(out.presentation), args.output)
    if args.trace:
        from .serialization import trace_to_jsonable

        Path(args.trace).write_text(json.dumps(trace_to_jsonable(out.trace), indent=2) + "\n")
    return 0


def _cmd_apply(args) -> int:
    p = _want(_load(args.file), KIND_PRESENTATION, args.file)
    try:
        raw = json.loads(Path(args.op).read_text())
        op = op_from_jsonable(raw)
    except FileNotFoundError:
        raise CliError(f"no such file: {args.op}")
    except (json.JSONDecodeError, ParseError) as err:
        raise CliError(f"{args.op}: {err}")
    result = rewrites.apply(p, op)
    print(json.dumps(diff_to_jsonable(result.diff), sort_keys=True))
    _write_doc(Document.wrap(result.presentation), args.output)
    return 0


def _cmd_lift(args) -> int:
    s = _want(_load(args.file), KIND_SYSTEM, args.file)
    lifted = lift_to_cover(s, args.degree)
    _write_doc(Document.wrap(lifted), args.output)
    return 0


def _cmd_trivial(args) -> int:
    s = _want(_load(args.file), KIND_SYSTEM, args.file)
    mono = is_monotone(s)
    trivial = s_trivial_by_graph(s)
    print(f"monotone: {mono}")
    print(f"graph-criterion-trivial: {'true' if trivial else 'false'}")
    if mono != "none" or trivial:
        print("verdict: S-trivial by graph criterion")
    else:
        print("verdict: not decided by graph criterion")
    return 0


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _cmd_export_dot(args) -> int:
    p = _want(_load(args.file), KIND_PRESENTATION, args.file)
    report = validate(p)
    if not report.ok:
        return _print_report(report)
    lines = ["digraph presentation {"]
    for c in p.components:
        fam = c.family
        fam_str = f"{fam.kind}({fam.i}" + (f",{fam.j})#{fam.curve}" if fam.j is not None else ")")
        attrs = (
            f"kind={_dot_quote(c.kind)}, label={_dot_quote(c.label)}, "
            f"family={_dot_quote(fam_str)}, depth={depth(p, c.id)}"
        )
        lines.append(f"  {_dot_quote(c.id)} [{attrs}];")
    for src, dst in sorted(p.arrows):
        lines.append(f"  {_dot_quote(src)} -> {_dot_quote(dst)};")
    lines.append("}")
    text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_serve(args) -> int:
    from .service import serve

    if args.file:
        p = _want(_load(args.file), KIND_PRESENTATION, args.file)
    else:
        p = Presentation()
    session = Session(p)
    server = serve(session, port=args.port)
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port} (ctrl-c to stop)", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fwbench",
        description="workbench for finger|Whitney systems and carving/surgery presentations",
    )
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="structural checks on a presentation")
    s.add_argument("file")
    s.set_defaults(fn=_cmd_validate)

    s = sub.add_parser("check-fwcs", help="full finger|Whitney presentation checks")
    s.add_argument("file")
    s.set_defaults(fn=_cmd_check_fwcs)

    s = sub.add_parser("check-optimized", help="optimized-form checks against a certificate")
    s.add_argument("file")
    s.add_argument("--cert", required=True)
    s.set_defaults(fn=_cmd_check_optimized)

    s = sub.add_parser("depth", help="print component depths")
    s.add_argument("file")
    s.set_defaults(fn=_cmd_depth)

    s = sub.add_parser("compile", help="compile a system (or compiler input) to a presentation")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.add_argument("--trace", help="also write the rule trace as JSON")
    s.set_defaults(fn=_cmd_compile)

    s = sub.add_parser("apply", help="apply a rewrite operation")
    s.add_argument("file")
    s.add_argument("--op", required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(fn=_cmd_apply)

    s = sub.add_parser("lift", help="pull a system back to a cyclic cover")
    s.add_argument("file")
    s.add_argument("--degree", type=int, required=True)
    s.add_argument("-o", "--output")
    s.set_defaults(fn=_cmd_lift)

    s = sub.add_parser("trivial", help="monotonicity and graph-criterion triviality")
    s.add_argument("file")
    s.set_defaults(fn=_cmd_trivial)

    s = sub.add_parser("export-dot", help="partial order as a DOT digraph")
    s.add_argument("file")
    s.add_argument("-o", "--output")
    s.set_defaults(fn=_cmd_export_dot)

    s = sub.add_parser("serve", help="run the local session service")
    s.add_argument("file", nargs="?")
    s.add_argument("--port", type=int, default=8642)
    s.set_defaults(fn=_cmd_serve)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1
    except (
        RewriteError,
        NeedsCoverError,
        InvalidGeometryError,
        InvalidFamilyError,
        CannotCheckLevelError,
        InvalidSystemError,
        InvalidDegreeError,
        ParseError,
        KeyError,
    ) as err:
        kind = getattr(err, "code", type(err).__name__)
        print(f"error [{kind}]: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
