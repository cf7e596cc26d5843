"""Source files and spans.

Spans are half-open byte offsets into a named source text; 1-based line and
column numbers are derived lazily for rendering.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field


@dataclass(frozen=True)
class SourceFile:
    name: str
    text: str
    _line_starts: tuple = field(default=None, repr=False, compare=False)

    def line_starts(self):
        starts = [0]
        for i, ch in enumerate(self.text):
            if ch == "\n":
                starts.append(i + 1)
        return starts

    def line_col(self, offset):
        """1-based (line, column) of a byte offset."""
        starts = self.line_starts()
        line = bisect.bisect_right(starts, offset) - 1
        return line + 1, offset - starts[line] + 1

    def line_text(self, line):
        starts = self.line_starts()
        begin = starts[line - 1]
        end = starts[line] - 1 if line < len(starts) else len(self.text)
        return self.text[begin:end]


@dataclass(frozen=True)
class Span:
    """Half-open [start, end) region of one source file."""

    source: SourceFile
    start: int
    end: int

    @property
    def line(self):
        return self.source.line_col(self.start)[0]

    @property
    def col(self):
        return self.source.line_col(self.start)[1]

    def to(self, other: "Span") -> "Span":
        return Span(self.source, self.start, other.end)

    def __repr__(self):
        return f"{self.source.name}:{self.line}:{self.col}"


def synthetic_span(label="<generated>"):
    return Span(SourceFile(label, ""), 0, 0)
