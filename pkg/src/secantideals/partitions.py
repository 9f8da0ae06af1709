"""Integer partitions and Young-diagram bookkeeping."""

from __future__ import annotations

import json
from collections.abc import Iterable, Iterator

from .errors import InvalidInput


class Partition(tuple):
    """Weakly decreasing tuple of positive integers.

    Trailing zeros are dropped on construction, so ``Partition((2, 1, 0))``
    equals ``Partition((2, 1))``; the empty partition is ``Partition(())``.
    """

    __slots__ = ()

    def __new__(cls, parts: Iterable[int] = ()) -> "Partition":
        parts = [int(p) for p in parts]
        while parts and parts[-1] == 0:
            parts.pop()
        for i, p in enumerate(parts):
            if p <= 0:
                raise InvalidInput(f"partition parts must be positive: {parts}")
            if i and p > parts[i - 1]:
                raise InvalidInput(f"partition must be weakly decreasing: {parts}")
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def padded(self, n: int) -> tuple[int, ...]:
        if len(self) > n:
            raise InvalidInput(f"{self} has more than {n} rows")
        return tuple(self) + (0,) * (n - len(self))

    def cells(self) -> Iterator[tuple[int, int]]:
        """Cells (i, j), 1-based, row by row."""
        for i, row in enumerate(self, start=1):
            for j in range(1, row + 1):
                yield i, j

    def to_json(self) -> str:
        return json.dumps(list(self))

    def __repr__(self) -> str:
        return f"Partition({tuple(self)!r})"


def conjugate(p: Iterable[int]) -> Partition:
    p = Partition(p)
    if not p:
        return p
    return Partition(sum(1 for row in p if row > j) for j in range(p[0]))


def hook_content_data(p: Iterable[int]) -> list[tuple[tuple[int, int], int, int]]:
    """One ``((i, j), hook, content)`` per cell; content = j - i."""
    p = Partition(p)
    col = conjugate(p)
    out = []
    for i, j in p.cells():
        arm = p[i - 1] - j
        leg = col[j - 1] - i
        out.append(((i, j), arm + leg + 1, j - i))
    return out


def enumerate_partitions(d: int, max_rows: int | None = None) -> list[Partition]:
    """All partitions of ``d`` with at most ``max_rows`` rows, reverse-lex order."""
    if d < 0:
        raise InvalidInput("d must be non-negative")
    rows = d if max_rows is None else max_rows
    out: list[Partition] = []

    def rec(remaining: int, cap: int, prefix: list[int]) -> None:
        if remaining == 0:
            out.append(Partition(prefix))
            return
        if len(prefix) == rows:
            return
        for part in range(min(remaining, cap), 0, -1):
            prefix.append(part)
            rec(remaining - part, part, prefix)
            prefix.pop()

    rec(d, d, [])
    return out


def partitions_in_box(rows: int, cols: int) -> list[Partition]:
    """Partitions fitting in a ``rows`` x ``cols`` rectangle, all sizes."""
    out: list[Partition] = []

    def rec(prefix: list[int], cap: int) -> None:
        out.append(Partition(prefix))
        if len(prefix) == rows:
            return
        for part in range(min(cap, cols), 0, -1):
            prefix.append(part)
            rec(prefix, part)
            prefix.pop()

    rec([], cols)
    return out


def parse_partition(text: str) -> Partition:
    """Parse a JSON array such as ``[2,1,1]``."""
    try:
        value = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"not a JSON array: {text!r}") from exc
    if not isinstance(value, list) or not all(isinstance(v, int) for v in value):
        raise InvalidInput(f"partition must be a JSON array of integers: {text!r}")
    return Partition(value)
