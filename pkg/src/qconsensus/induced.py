"""Integer partitions, row-labeled tabloids, and the graphs a generator
set induces on them.

A tabloid of shape ``parts`` is stored as a ``row_of`` tuple: position k
(1-based) sits in row ``row_of[k-1]``.  A permutation p acts by pulling
row labels along positions, ``(t . p)[k] = t[p(k)]``; the induced
Laplacian applies the same attend-to-image rule as the site-label graph
in :mod:`qconsensus.netgraph`, so the shape ``(n-1, 1)`` graph is the
underlying graph up to relabeling vertices by their singleton position.

Partitions compare in the dominance order (prefix sums); enumeration
orders are fixed (descending lexicographic for partitions, ascending
lexicographic for tabloids) so every matrix is reproducible bit for bit.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .permgroup import GeneratorSet, Permutation, is_full_symmetric

Partition = tuple[int, ...]
Tabloid = tuple[int, ...]


def partitions_of(n: int, max_parts: int) -> list[Partition]:
    """Partitions of n with at most ``max_parts`` parts, excluding (n).

    The one-part partition is excluded because its induced graph is a
    single vertex carrying the conserved coefficient.  Output is sorted
    descending lexicographically, a linear extension of dominance with
    the most dominant shape first.
    """
    if n < 1 or max_parts < 1:
        raise ValueError("n and max_parts must be positive")
    out: list[Partition] = []

    def rec(remaining: int, largest: int, prefix: tuple[int, ...]):
        if remaining == 0:
            out.append(prefix)
            return
        if len(prefix) == max_parts:
            return
        for part in range(min(largest, remaining), 0, -1):
            rec(remaining - part, part, prefix + (part,))

    rec(n, n, ())
    out = [p for p in out if p != (n,)]
    out.sort(reverse=True)
    return out


def dominates(a: Partition, b: Partition) -> bool:
    """True iff every prefix sum of ``a`` is >= the matching one of ``b``."""
    if sum(a) != sum(b):
        raise ValueError("partitions must partition the same integer")
    k = max(len(a), len(b))
    sa = sb = 0
    for i in range(k):
        sa += a[i] if i < len(a) else 0
        sb += b[i] if i < len(b) else 0
        if sa < sb:
            return False
    return True


def enumerate_tabloids(parts: Partition) -> list[Tabloid]:
    """All row_of vectors of the given shape, ascending lexicographic."""
    base: list[int] = []
    for row, count in enumerate(parts, start=1):
        if count < 1:
            raise ValueError("partition parts must be positive")
        base.extend([row] * count)
    return sorted(set(permutations(base)))


def act_on_tabloid(t: Tabloid, p: Permutation) -> Tabloid:
    """Pull action: position k of the image takes the row of position p(k)."""
    return tuple(t[p[k] - 1] for k in range(len(p)))


def canonical_tabloid(parts: Partition) -> Tabloid:
    """Positions filled row-wise ascending: 1..parts[0] in row 1, and so on."""
    out: list[int] = []
    for row, count in enumerate(parts, start=1):
        out.extend([row] * count)
    return tuple(out)


@dataclass(frozen=True)
class InducedGraph:
    partition: Partition
    vertices: tuple[Tabloid, ...]
    laplacian: np.ndarray


def induced_laplacian(
    parts: Partition, gens: GeneratorSet, weights
) -> InducedGraph:
    """Weighted Laplacian of the generator action on tabloids of one shape.

    When the generators produce the full symmetric group the action is
    transitive and all tabloids appear.  Otherwise only the orbit of the
    canonical tabloid is kept, which is the component the dynamics of a
    canonically-labeled coefficient actually explores.
    """
    if sum(parts) != gens.n:
        raise ValueError(f"partition {parts} does not partition {gens.n}")
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(gens),):
        raise ValueError("one weight per generator required")

    if is_full_symmetric(gens):
        verts = enumerate_tabloids(parts)
    else:
        start = canonical_tabloid(parts)
        orbit = {start}
        queue: deque[Tabloid] = deque([start])
        while queue:
            t = queue.popleft()
            for p in gens.perms:
                u = act_on_tabloid(t, p)
                if u not in orbit:
                    orbit.add(u)
                    queue.append(u)
        verts = sorted(orbit)

    index = {t: i for i, t in enumerate(verts)}
    m = len(verts)
    L = np.zeros((m, m))
    for p, w in zip(gens.perms, weights):
        for t, i in index.items():
            j = index[act_on_tabloid(t, p)]
            if j == i:
                continue
            L[i, i] += w
            L[i, j] -= w
    return InducedGraph(partition=tuple(parts), vertices=tuple(verts), laplacian=L)
