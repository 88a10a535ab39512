"""Exception types shared across the package.

Two failure families matter to callers: bad input (files, flags, arguments),
and violations of internal invariants that should never happen on any input.
The CLI maps the first to exit status 1 and the second to exit status 2.
"""

from __future__ import annotations


class InputError(Exception):
    """Problem with user-supplied data or arguments."""


class FormatError(InputError):
    """Malformed input file; carries location info when known."""

    def __init__(self, message: str, *, path: str | None = None,
                 line: int | None = None, column: int | None = None):
        self.path = path
        self.line = line
        self.column = column
        where = []
        if path is not None:
            where.append(str(path))
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        prefix = ", ".join(where)
        super().__init__(f"{prefix}: {message}" if prefix else message)


class PolygonError(InputError):
    """Degenerate polygon ring; carries the offending ring index."""

    def __init__(self, ring_index: int, message: str):
        self.ring_index = ring_index
        super().__init__(f"ring {ring_index}: {message}")


class SnapError(InputError):
    """One or more points could not be snapped to a water cell.

    ``failures`` holds (point_index, reason) for every failing point,
    not just the first.
    """

    def __init__(self, failures: list[tuple[int, str]]):
        self.failures = list(failures)
        detail = "; ".join(f"point {i}: {reason}" for i, reason in self.failures)
        super().__init__(f"{len(self.failures)} point(s) failed to snap: {detail}")


class ConsistencyError(Exception):
    """An internal invariant was violated (a bug, not a user error)."""
