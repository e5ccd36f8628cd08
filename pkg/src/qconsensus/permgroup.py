"""Permutations of {1..N} and the groups they generate.

Permutations are plain tuples of 1-based images: ``p[i-1]`` is the image
of ``i``.  Composition follows the usual function convention,
``compose(p, q)`` applies ``q`` first.  Cycle notation reads left to
right, so ``(1 2 3)`` sends 1 to 2, 2 to 3 and 3 back to 1.

The effective cycle length of a permutation (the summed lengths of its
nontrivial cycles) is the per-generator cost coefficient in the weight
budget used elsewhere in this package.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

Permutation = tuple[int, ...]

DEFAULT_GROUP_CAP = 10080


class CapExceededError(RuntimeError):
    """Raised when a closure or state-space enumeration would exceed its cap."""


def identity(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def is_valid(p: Permutation) -> bool:
    return sorted(p) == list(range(1, len(p) + 1))


def from_cycles(n: int, cycles: list[list[int]]) -> Permutation:
    """Build a permutation of {1..n} from disjoint cycles.

    Entries not mentioned in any cycle are fixed points.  Raises
    ``ValueError`` for out-of-range or repeated entries.
    """
    if n < 1:
        raise ValueError(f"degree must be >= 1, got {n}")
    img = list(range(1, n + 1))
    seen: set[int] = set()
    for cyc in cycles:
        for a in cyc:
            if not 1 <= a <= n:
                raise ValueError(f"cycle entry {a} out of range 1..{n}")
            if a in seen:
                raise ValueError(f"cycle entry {a} appears twice")
            seen.add(a)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            img[a - 1] = b
    return tuple(img)


def to_cycles(p: Permutation) -> list[list[int]]:
    """Nontrivial cycles of ``p``, each starting at its smallest entry."""
    out: list[list[int]] = []
    done: set[int] = set()
    for start in range(1, len(p) + 1):
        if start in done:
            continue
        cyc = [start]
        done.add(start)
        a = p[start - 1]
        while a != start:
            cyc.append(a)
            done.add(a)
            a = p[a - 1]
        if len(cyc) > 1:
            out.append(cyc)
    return out


def compose(p: Permutation, q: Permutation) -> Permutation:
    """(p o q)(x) = p(q(x)): apply ``q`` first."""
    if len(p) != len(q):
        raise ValueError("degree mismatch")
    return tuple(p[q[i] - 1] for i in range(len(p)))


def inverse(p: Permutation) -> Permutation:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v - 1] = i + 1
    return tuple(out)


def apply(p: Permutation, i: int) -> int:
    return p[i - 1]


def effective_cycle_length(p: Permutation) -> int:
    """Summed length of all cycles of length >= 2 (fixed points cost nothing)."""
    return sum(len(c) for c in to_cycles(p))


def parity(p: Permutation) -> int:
    """+1 for even permutations, -1 for odd."""
    sign = 1
    for c in to_cycles(p):
        if len(c) % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class GeneratorSet:
    """Ordered generators with stable weight-label coordinates.

    The order fixes the coordinate order of every weight vector handed
    to the graph, spectra and optimizer layers.
    """

    n: int
    perms: tuple[Permutation, ...]
    labels: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(
                self, "labels", tuple(f"w{i+1}" for i in range(len(self.perms)))
            )
        if len(self.labels) != len(self.perms):
            raise ValueError("one label per generator required")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError("weight labels must be unique")
        ident = identity(self.n)
        for p in self.perms:
            if len(p) != self.n or not is_valid(p):
                raise ValueError(f"not a permutation of 1..{self.n}: {p}")
            if p == ident:
                raise ValueError("identity is not allowed as a generator")

    def __len__(self) -> int:
        return len(self.perms)

    def cycle_costs(self) -> tuple[int, ...]:
        return tuple(effective_cycle_length(p) for p in self.perms)


def generator_set(
    n: int,
    cycles: list[list[list[int]]],
    labels: list[str] | None = None,
) -> GeneratorSet:
    """Convenience constructor from cycle notation, one cycle list per generator."""
    perms = tuple(from_cycles(n, c) for c in cycles)
    return GeneratorSet(n=n, perms=perms, labels=tuple(labels) if labels else ())


def generate_group(
    gens: GeneratorSet, cap: int = DEFAULT_GROUP_CAP
) -> set[Permutation]:
    """Breadth-first closure of the generators under composition.

    Raises :class:`CapExceededError` as soon as the closure would grow
    past ``cap`` elements.
    """
    start = identity(gens.n)
    group: set[Permutation] = {start}
    queue: deque[Permutation] = deque([start])
    while queue:
        x = queue.popleft()
        for s in gens.perms:
            y = compose(x, s)
            if y not in group:
                if len(group) + 1 > cap:
                    raise CapExceededError(
                        f"generated group exceeds cap of {cap} elements"
                    )
                group.add(y)
                queue.append(y)
    return group


def is_full_symmetric(gens: GeneratorSet, cap: int = DEFAULT_GROUP_CAP) -> bool:
    """True iff the generators generate all n! permutations."""
    import math

    full = math.factorial(gens.n)
    if full > cap:
        raise CapExceededError(f"{gens.n}! = {full} exceeds cap of {cap}")
    return len(generate_group(gens, cap=cap)) == full
