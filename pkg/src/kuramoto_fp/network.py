"""Undirected simple networks and the generators used throughout the package.

Nodes are the contiguous integers ``0 .. n-1``. A :class:`Network` is
immutable once built: the adjacency matrix is a read-only int8 array and the
edge list is a tuple of ``(i, j)`` pairs with ``i < j``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from .errors import FormatError, InvalidOffsetError, InvalidSizeError


@dataclass(frozen=True)
class Network:
    n: int
    edges: tuple[tuple[int, int], ...]
    adjacency: np.ndarray = field(repr=False, compare=False)

    def __post_init__(self):
        a = self.adjacency
        if a.shape != (self.n, self.n):
            raise InvalidSizeError(f"adjacency shape {a.shape} does not match n={self.n}")
        if np.any(np.diag(a)):
            raise FormatError("self-loops are not allowed")
        if not np.array_equal(a, a.T):
            raise FormatError("adjacency must be symmetric")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Network":
        if n < 1:
            raise InvalidSizeError(f"network needs at least one node, got n={n}")
        adj = np.zeros((n, n), dtype=np.int8)
        for i, j in edges:
            i, j = int(i), int(j)
            if i == j:
                raise FormatError(f"self-loop at node {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidSizeError(f"edge ({i}, {j}) outside 0..{n - 1}")
            adj[i, j] = adj[j, i] = 1
        adj.setflags(write=False)
        iu, ju = np.nonzero(np.triu(adj))
        pairs = tuple((int(i), int(j)) for i, j in zip(iu, ju))
        return cls(n=n, edges=pairs, adjacency=adj)

    @property
    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1).astype(int)

    @property
    def min_degree(self) -> int:
        return int(self.degrees.min())

    @property
    def max_degree(self) -> int:
        return int(self.degrees.max())

    def is_connected(self) -> bool:
        seen = {0}
        queue = deque([0])
        while queue:
            i = queue.popleft()
            for j in np.flatnonzero(self.adjacency[i]):
                if int(j) not in seen:
                    seen.add(int(j))
                    queue.append(int(j))
        return len(seen) == self.n

    def to_edge_list(self) -> str:
        """Serialize in the format read by :func:`load_edge_list`."""
        lines = [f"# n={self.n}"] + [f"{i} {j}" for i, j in self.edges]
        return "\n".join(lines) + "\n"


def complete_network(n: int) -> Network:
    if n < 1:
        raise InvalidSizeError(f"complete network needs n >= 1, got {n}")
    return Network.from_edges(n, ((i, j) for i in range(n) for j in range(i + 1, n)))


def cycle_network(n: int) -> Network:
    if n < 3:
        raise InvalidSizeError(f"cycle needs n >= 3, got {n}")
    return Network.from_edges(n, ((i, (i + 1) % n) for i in range(n)))


def circulant_network(n: int, offsets: Iterable[int]) -> Network:
    """Ring on ``n`` nodes where ``i`` is joined to ``i +/- s`` for each offset ``s``.

    An offset of exactly ``n/2`` contributes a single edge per node.
    """
    if n < 3:
        raise InvalidSizeError(f"circulant needs n >= 3, got {n}")
    offsets = sorted(set(int(s) for s in offsets))
    if not offsets:
        raise InvalidOffsetError("at least one offset is required")
    for s in offsets:
        if not 1 <= s <= n // 2:
            raise InvalidOffsetError(f"offset {s} outside [1, {n // 2}]")
    return Network.from_edges(n, ((i, (i + s) % n) for s in offsets for i in range(n)))


def near_complete_network(n: int, non_edges: Iterable[tuple[int, int]] | None = None) -> Network:
    """Complete network with the given pairs removed.

    With ``non_edges=None`` the matching ``(0,1), (2,3), ...`` is removed, so
    every node (all but one when ``n`` is odd) has degree ``n - 2``.
    """
    if non_edges is None:
        non_edges = [(i, i + 1) for i in range(0, n - 1, 2)]
    drop = {(min(i, j), max(i, j)) for i, j in non_edges}
    return Network.from_edges(
        n, ((i, j) for i in range(n) for j in range(i + 1, n) if (i, j) not in drop)
    )


def load_edge_list(text: str | TextIO) -> Network:
    """Parse whitespace-separated ``i j`` lines into a :class:`Network`.

    Blank lines and lines starting with ``#`` are skipped; duplicate edges
    collapse. The node count is one more than the largest id seen.
    """
    if not isinstance(text, str):
        text = text.read()
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise FormatError(f"line {lineno}: expected two node ids, got {line!r}")
        try:
            i, j = (int(t) for t in tokens)
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer token in {line!r}") from None
        if i < 0 or j < 0:
            raise FormatError(f"line {lineno}: negative node id")
        if i == j:
            raise FormatError(f"line {lineno}: self-loop at node {i}")
        edges.append((i, j))
    if not edges:
        raise FormatError("edge list contains no edges")
    n = max(max(e) for e in edges) + 1
    return Network.from_edges(n, edges)
