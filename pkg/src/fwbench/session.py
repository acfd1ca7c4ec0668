"""Snapshot history for presentations under rewrite operations.

A session owns a list of ``(presentation, diff)`` entries and a cursor.
Entry 0 is the seed with no diff; every later entry's diff transforms its
predecessor into it, so any snapshot can be reproduced by replaying diffs
from the seed.  Applying an operation drops the redo tail.
"""
from __future__ import annotations

from dataclasses import replace

from .presentations import Presentation, validate
from .rewrites import Diff, RewriteOp, apply


class SessionError(Exception):
    code = "session-error"

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class Session:
    def __init__(self, presentation: Presentation):
        report = validate(presentation)
        if not report.ok:
            raise SessionError("invalid-seed", f"seed presentation invalid: {report.summary()}")
        self._entries: list[tuple[Presentation, Diff | None]] = [(presentation, None)]
        self._cursor = 0

    @property
    def cursor(self) -> int:
        return self._cursor

    def __len__(self) -> int:
        return len(self._entries)

    @property
    def presentation(self) -> Presentation:
        return self._entries[self._cursor][0]

    def snapshot(self, index: int) -> Presentation:
        if not 0 <= index < len(self._entries):
            raise SessionError("no-such-snapshot", f"no snapshot {index}")
        return self._entries[index][0]

    def diff(self, index: int) -> Diff | None:
        if not 0 <= index < len(self._entries):
            raise SessionError("no-such-snapshot", f"no snapshot {index}")
        return self._entries[index][1]

    def apply(self, op: RewriteOp) -> Diff:
        result = apply(self.presentation, op)
        del self._entries[self._cursor + 1 :]
        self._entries.append((result.presentation, result.diff))
        self._cursor += 1
        return result.diff

    def undo(self) -> Presentation:
        if self._cursor == 0:
            raise SessionError("nothing-to-undo", "already at the first snapshot")
        self._cursor -= 1
        return self.presentation

    def redo(self) -> Presentation:
        if self._cursor + 1 >= len(self._entries):
            raise SessionError("nothing-to-redo", "already at the last snapshot")
        self._cursor += 1
        return self.presentation

    def replay(self, index: int) -> Presentation:
        """Rebuild snapshot ``index`` by folding diffs over the seed."""
        target = self.snapshot(index)
        current = self.snapshot(0)
        for n in range(1, index + 1):
            current = apply_diff(current, self._entries[n][1])
        assert current == target, "history diffs must reproduce their snapshots"
        return current


def apply_diff(p: Presentation, diff: Diff | None) -> Presentation:
    if diff is None:
        return p
    removed = {c.id for c in diff.removed_components}
    comps = [c for c in p.components if c.id not in removed]
    comps.extend(diff.added_components)
    relabel = {cid: new for cid, _old, new in diff.label_changes}
    comps = [replace(c, label=relabel[c.id]) if c.id in relabel else c for c in comps]
    arrows = (p.arrows - frozenset(diff.removed_arrows)) | frozenset(diff.added_arrows)
    return replace(p, components=tuple(comps), arrows=arrows)
