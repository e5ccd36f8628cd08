"""Spectra of the (generally nonsymmetric) consensus Laplacians.

The quantities of interest are real parts of second-smallest
eigenvalues: ``lambda_synch`` from the site-label graph, which is the
shape ``(n-1, 1)`` induced graph, and ``lambda_cons`` as the minimum
over every admissible partition shape.  Eigenvalues of directed
topologies come in conjugate pairs, so everything sorts and compares by
(real, imaginary) with explicit tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .induced import Partition, induced_laplacian, partitions_of, dominates
from .permgroup import GeneratorSet, parity

ZERO_TOL = 1e-9
INCLUSION_TOL = 1e-7


class NumericalFailureError(RuntimeError):
    """Dense eigenvalue computation failed to converge."""


class NotALaplacianError(ValueError):
    """Spectrum has no near-zero eigenvalue, so it cannot be a Laplacian's."""


def eigenvalues(m: np.ndarray) -> np.ndarray:
    """Full complex spectrum, sorted by (real, imaginary)."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("square matrix required")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    try:
        vals = np.linalg.eigvals(m)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigenvalue solve failed: {exc}") from exc
    return np.sort_complex(vals)


def lambda2_re(spectrum: np.ndarray, zero_tol: float = ZERO_TOL) -> float:
    """Smallest real part after discarding the single trivial eigenvalue.

    Exactly one eigenvalue of smallest modulus is removed; it must be
    below ``zero_tol`` in modulus or the input was not a Laplacian
    spectrum.  If further near-zero eigenvalues remain the graph is
    disconnected and the rate is 0.
    """
    vals = np.asarray(spectrum)
    if vals.size == 0:
        raise ValueError("empty spectrum")
    mags = np.abs(vals)
    i0 = int(mags.argmin())
    if mags[i0] >= zero_tol:
        raise NotALaplacianError(
            f"no eigenvalue within {zero_tol} of zero (closest {vals[i0]})"
        )
    rest = np.delete(vals, i0)
    if rest.size == 0 or np.any(np.abs(rest) < zero_tol):
        return 0.0
    return float(rest.real.min())


def lambda2_re_batch(spectra: np.ndarray, zero_tol: float = ZERO_TOL) -> np.ndarray:
    """Vectorized :func:`lambda2_re` over a (k, V) stack of spectra."""
    vals = np.asarray(spectra)
    k, v = vals.shape
    if v == 1:
        return np.zeros(k)
    mags = np.abs(vals)
    i0 = mags.argmin(axis=1)
    rows = np.arange(k)
    if np.any(mags[rows, i0] >= zero_tol):
        raise NotALaplacianError("a spectrum in the batch has no trivial eigenvalue")
    keep = np.ones((k, v), dtype=bool)
    keep[rows, i0] = False
    rest = vals[keep].reshape(k, v - 1)
    rates = rest.real.min(axis=1)
    rates[np.any(np.abs(rest) < zero_tol, axis=1)] = 0.0
    return rates


@dataclass(frozen=True)
class ConvergenceRates:
    lambda_cons: float
    lambda_synch: float
    per_partition: dict[Partition, float] = field(default_factory=dict)


def convergence_rates(gens: GeneratorSet, weights, d: int = 2) -> ConvergenceRates:
    """(lambda_cons, lambda_synch) plus the per-partition breakdown.

    Partitions run over all shapes of n with at most d*d parts (the
    coefficient space of a d-level site supports no finer split).
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    per: dict[Partition, float] = {}
    for parts in partitions_of(gens.n, d * d):
        ig = induced_laplacian(parts, gens, weights)
        per[parts] = lambda2_re(eigenvalues(ig.laplacian))
    synch_shape = (gens.n - 1, 1) if gens.n > 2 else (1, 1)
    return ConvergenceRates(
        lambda_cons=min(per.values()),
        lambda_synch=per[synch_shape],
        per_partition=per,
    )


def alternating_mode_rate(gens: GeneratorSet, weights) -> float:
    """Decay rate of the fully antisymmetric mode: 2 * sum of odd-generator weights."""
    weights = np.asarray(weights, dtype=float)
    return float(2.0 * sum(w for p, w in zip(gens.perms, weights) if parity(p) < 0))


def multiset_contained(
    inner: np.ndarray, outer: np.ndarray, tol: float = INCLUSION_TOL
) -> tuple[bool, float, complex | None]:
    """Greedy matching of ``inner`` into ``outer`` with per-element tolerance.

    Returns (contained, max matched distance, first unmatched value).
    """
    pool = list(np.asarray(outer, dtype=complex))
    worst = 0.0
    for v in sorted(np.asarray(inner, dtype=complex), key=lambda z: (z.real, z.imag)):
        if not pool:
            return False, worst, v
        j = min(range(len(pool)), key=lambda i: abs(pool[i] - v))
        dist = abs(pool[j] - v)
        if dist > tol:
            return False, worst, v
        worst = max(worst, dist)
        pool.pop(j)
    return True, worst, None


def distinct_values(vals: np.ndarray, tol: float = INCLUSION_TOL) -> list[complex]:
    """Collapse a spectrum to representatives separated by more than ``tol``."""
    out: list[complex] = []
    for v in sorted(np.asarray(vals, dtype=complex), key=lambda z: (z.real, z.imag)):
        if not any(abs(v - u) <= tol for u in out):
            out.append(complex(v))
    return out


@dataclass(frozen=True)
class PairCheck:
    inner: Partition
    outer: Partition
    kind: str
    included: bool
    max_defect: float
    witness: complex | None


@dataclass(frozen=True)
class IntertwiningReport:
    pairs: tuple[PairCheck, ...]
    ok: bool


def intertwining_check(
    gens: GeneratorSet, weights, d: int = 2, tol: float = INCLUSION_TOL
) -> IntertwiningReport:
    """Spectral inclusions along the dominance order.

    For every comparable pair the dominant shape's spectrum must embed
    (as a multiset) in the less dominant one's.  When both the
    finest shape (1,..,1) and (2,1,..,1) are admissible, the finest
    spectrum minus its antisymmetric mode must also re-embed upward as a
    set; that mode is the one eigenvalue living outside the coarser
    graph.
    """
    shapes = partitions_of(gens.n, d * d)
    spectra = {
        p: eigenvalues(induced_laplacian(p, gens, weights).laplacian) for p in shapes
    }
    checks: list[PairCheck] = []
    for a in shapes:
        for b in shapes:
            if a != b and dominates(a, b):
                ok, defect, witness = multiset_contained(spectra[a], spectra[b], tol)
                checks.append(
                    PairCheck(
                        inner=a, outer=b, kind="dominance",
                        included=ok, max_defect=defect, witness=witness,
                    )
                )
    finest = (1,) * gens.n
    coarser = (2,) + (1,) * (gens.n - 2)
    if finest in spectra and coarser in spectra:
        alt = alternating_mode_rate(gens, weights)
        kept = [
            v for v in distinct_values(spectra[finest], tol) if abs(v - alt) > tol
        ]
        ok, defect, witness = multiset_contained(
            np.array(kept), spectra[coarser], tol
        )
        checks.append(
            PairCheck(
                inner=finest, outer=coarser, kind="alternating-removed",
                included=ok, max_defect=defect, witness=witness,
            )
        )
    return IntertwiningReport(
        pairs=tuple(checks), ok=all(c.included for c in checks)
    )


def aldous_check(
    gens: GeneratorSet, weights, d: int = 2, tol: float = INCLUSION_TOL
) -> tuple[bool, dict[Partition, float]]:
    """Do all induced graphs share one second-eigenvalue real part?

    Returns the verdict plus the per-partition rates as witness.  A True
    verdict means consensus and synchronization decay at the same speed.
    """
    rates = convergence_rates(gens, weights, d=d).per_partition
    vals = list(rates.values())
    spread = max(vals) - min(vals)
    return spread <= tol, rates
