"""Weight optimization on the budget face and Pareto sweeps.

The budget charges each generator its effective cycle length, so the
feasible set is a scaled simplex.  Rates scale linearly with weights,
which pins every optimum to the face sum(l_i w_i) = D; both the grid
scan and the pattern search therefore work in simplex coordinates
u_i = l_i w_i / D.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .induced import induced_laplacian, partitions_of
from .permgroup import GeneratorSet
from .spectra import lambda2_re_batch

CHUNK = 2048


@dataclass(frozen=True)
class BudgetConstraint:
    lengths: tuple[int, ...]
    budget: float

    @classmethod
    def for_generators(cls, gens: GeneratorSet, budget: float = 1.0) -> "BudgetConstraint":
        return cls(lengths=gens.cycle_costs(), budget=float(budget))

    def cost(self, weights) -> float:
        return float(np.dot(self.lengths, weights))

    def is_feasible(self, weights, tol: float = 1e-12) -> bool:
        w = np.asarray(weights, dtype=float)
        return bool(np.all(w >= -tol) and self.cost(w) <= self.budget + tol)


@dataclass(frozen=True)
class ParetoPoint:
    weights: tuple[float, ...]
    lambda_cons: float
    lambda_synch: float
    on_front: bool = False


def _thread_count() -> int:
    raw = os.environ.get("QCL_THREADS", "").strip()
    if raw:
        return max(1, int(raw))
    return 1


class _RateEvaluator:
    """Batched (lambda_cons, lambda_synch) over many weight vectors.

    Per partition the Laplacian is linear in the weights, so one stack
    of per-generator base matrices turns a whole grid chunk into a
    single batched eigenvalue call.
    """

    def __init__(self, gens: GeneratorSet, d: int = 2, synch_only: bool = False):
        self.synch_shape = (gens.n - 1, 1)
        shapes = [self.synch_shape] if synch_only else partitions_of(gens.n, d * d)
        m = len(gens)
        eye = np.eye(m)
        self.stacks = []
        for parts in shapes:
            base = np.stack(
                [induced_laplacian(parts, gens, eye[i]).laplacian for i in range(m)]
            )
            self.stacks.append((parts, base))

    def rates(self, w_batch: np.ndarray, threads: int = 1):
        k = w_batch.shape[0]
        cons = np.full(k, np.inf)
        synch = np.zeros(k)
        slices = [slice(i, min(i + CHUNK, k)) for i in range(0, k, CHUNK)]
        for parts, base in self.stacks:
            def one(sl, base=base):
                ls = np.einsum("km,mij->kij", w_batch[sl], base)
                return lambda2_re_batch(np.linalg.eigvals(ls))
            if threads > 1 and len(slices) > 1:
                with ThreadPoolExecutor(max_workers=threads) as ex:
                    pieces = list(ex.map(one, slices))
            else:
                pieces = [one(sl) for sl in slices]
            r = np.concatenate(pieces)
            np.minimum(cons, r, out=cons)
            if parts == self.synch_shape:
                synch = r
        return cons, synch


def _compositions(total: int, parts: int):
    """All nonnegative integer compositions, ascending lexicographic."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def front_mask(cons: np.ndarray, synch: np.ndarray) -> np.ndarray:
    """Non-dominated mask, maximizing both coordinates, ties kept."""
    k = len(cons)
    mask = np.zeros(k, dtype=bool)
    order = np.lexsort((-cons, -synch))
    best_above = -np.inf
    i = 0
    while i < k:
        j = i
        while j < k and synch[order[j]] == synch[order[i]]:
            j += 1
        group = order[i:j]
        group_best = cons[group].max()
        if group_best > best_above:
            mask[group[cons[group] == group_best]] = True
            best_above = group_best
        i = j
    return mask


def pareto_front(points: list[ParetoPoint]) -> list[ParetoPoint]:
    """Non-dominated subset, sorted by lambda_synch ascending."""
    if not points:
        return []
    cons = np.array([p.lambda_cons for p in points])
    synch = np.array([p.lambda_synch for p in points])
    mask = front_mask(cons, synch)
    kept = [replace(p, on_front=True) for p, m in zip(points, mask) if m]
    kept.sort(key=lambda p: (p.lambda_synch, p.lambda_cons, p.weights))
    return kept


def pareto_scan(
    gens: GeneratorSet,
    constraint: BudgetConstraint,
    resolution: int | None = None,
    d: int = 2,
    threads: int | None = None,
) -> list[ParetoPoint]:
    """Rates over a uniform simplex grid on the budget face.

    Output order is lexicographic in the grid composition index and is
    identical whether or not evaluation is threaded.
    """
    m = len(gens)
    if resolution is None:
        resolution = 200 if m <= 3 else 60
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    if threads is None:
        threads = _thread_count()
    lengths = np.asarray(constraint.lengths, dtype=float)
    grid = np.array(list(_compositions(resolution, m)), dtype=float)
    w_all = constraint.budget * grid / (resolution * lengths[None, :])
    ev = _RateEvaluator(gens, d=d)
    cons, synch = ev.rates(w_all, threads=threads)
    mask = front_mask(cons, synch)
    return [
        ParetoPoint(
            weights=tuple(float(x) for x in w_all[i]),
            lambda_cons=float(cons[i]),
            lambda_synch=float(synch[i]),
            on_front=bool(mask[i]),
        )
        for i in range(len(grid))
    ]


def maximize_rate(
    gens: GeneratorSet,
    constraint: BudgetConstraint,
    objective: str = "consensus",
    d: int = 2,
    n_starts: int = 20,
    seed: int = 0,
    step_floor: float = 1e-8,
) -> tuple[tuple[float, ...], float]:
    """Best-found weights for one rate objective on the budget face.

    Multi-start pattern search over simplex coordinates: all pairwise
    mass transfers at the current step size, doubling on success and
    halving on failure down to ``step_floor``.  Deterministic for a
    fixed seed.

    Rate landscapes here routinely have flat ridges (an inactive
    spectral branch can absorb weight changes without moving the
    minimum), so a polish phase walks along value-preserving directions
    to the balanced representative: among equally fast weight vectors
    the one of least Euclidean norm is returned.
    """
    if objective not in ("consensus", "synchronization"):
        raise ValueError(f"unknown objective {objective!r}")
    if constraint.budget <= 0:
        raise ValueError("budget must be positive")
    m = len(gens)
    lengths = np.asarray(constraint.lengths, dtype=float)
    ev = _RateEvaluator(gens, d=d, synch_only=(objective == "synchronization"))
    pick = 0 if objective == "consensus" else 1

    def f_batch(u_batch: np.ndarray) -> np.ndarray:
        w = constraint.budget * u_batch / lengths[None, :]
        return ev.rates(w)[pick]

    if m == 1:
        w = (constraint.budget / lengths[0],)
        return w, float(f_batch(np.array([[1.0]]))[0])

    rng = np.random.default_rng(seed)
    starts = [np.full(m, 1.0 / m)]
    starts += [rng.dirichlet(np.ones(m)) for _ in range(max(0, n_starts - 1))]

    moves = [(i, j) for i in range(m) for j in range(m) if i != j]

    def transfers(u: np.ndarray, step: float) -> np.ndarray:
        cands = []
        for i, j in moves:
            if u[j] >= step:
                c = u.copy()
                c[i] += step
                c[j] -= step
                cands.append(c / c.sum())
        return np.array(cands) if cands else np.empty((0, m))

    best_u = starts[0]
    best_v = -np.inf
    for u0 in starts:
        u = u0.copy()
        v = float(f_batch(u[None, :])[0])
        step = 0.25
        while step >= step_floor:
            batch = transfers(u, step)
            if len(batch):
                vals = f_batch(batch)
                k = int(np.argmax(vals))
                if vals[k] > v:
                    u = batch[k]
                    v = float(vals[k])
                    step = min(step * 2.0, 0.5)
                    continue
            step *= 0.5
        if v > best_v:
            best_v = v
            best_u = u

    # polish: drift along flat directions toward the least-norm optimum
    u = best_u.copy()
    norm = float(np.sum((u / lengths) ** 2))
    step = 0.25
    while step >= step_floor:
        batch = transfers(u, step)
        if len(batch):
            vals = f_batch(batch)
            norms = np.sum((batch / lengths[None, :]) ** 2, axis=1)
            keep = vals >= best_v - 1e-11
            keep &= norms < norm - 1e-15
            if np.any(keep):
                idx = np.where(keep)[0]
                k = idx[int(np.argmin(norms[idx]))]
                u = batch[k]
                norm = float(norms[k])
                best_v = max(best_v, float(vals[k]))
                step = min(step * 2.0, 0.5)
                continue
        step *= 0.5
    best_u = u
    final_v = float(f_batch(best_u[None, :])[0])

    w = constraint.budget * best_u / lengths
    over = constraint.cost(w) / constraint.budget
    if over > 1.0:
        w = w / over
    return tuple(float(x) for x in w), final_v
