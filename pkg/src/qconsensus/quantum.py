"""Density-matrix dynamics driven by weighted permutation swaps.

The master equation integrated here is

    drho/dt = -i [H0, rho] + sum_p w_p (U_p rho U_p^dag - rho)

with one unitary U_p per generator permutation.  U_p moves the content
of site j to site p(j); equivalently it conjugates an elementary tensor
Q_1 x ... x Q_N into the tensor with Q_{p^{-1}(k)} at slot k.  With that
orientation the coefficient vector of rho in the tensor-product
Gell-Mann basis obeys dX/dt = -L X for the same pull-rule Laplacian the
induced graphs use, which is what :func:`build_lq` assembles and what
the cross-validation tests lean on.

All operators are plain dense numpy arrays; sites are 1-based and d is
the per-site dimension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .permgroup import (
    GeneratorSet,
    Permutation,
    compose,
    identity,
    inverse,
)

EVOLVE_DIM_CAP = 256
LQ_DIM_CAP = 4096


class StepSizeError(RuntimeError):
    """Integrator invariants drifted too far; a smaller dt is needed."""


class InsufficientDecayError(RuntimeError):
    """Too few trajectory samples inside the decay-fit window."""


def _sites_of(dim: int, d: int) -> int:
    n = round(math.log(dim) / math.log(d))
    if d**n != dim:
        raise ValueError(f"matrix size {dim} is not a power of d={d}")
    return n


def gellmann_basis(d: int) -> np.ndarray:
    """The d*d Hermitian basis matrices, identity first.

    Families come in a fixed order: identity, then the symmetric
    pair matrices (j < k lexicographic), the antisymmetric ones, and the
    diagonal ladder.  Everything is scaled so tr(b_a b_b) = d*delta_ab,
    which for d = 2 gives exactly the identity plus the three Pauli
    matrices.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    mats = [np.eye(d, dtype=complex)]
    s = math.sqrt(d / 2.0)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = m[k, j] = s
            mats.append(m)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j * s
            m[k, j] = 1j * s
            mats.append(m)
    for l in range(1, d):
        m = np.zeros((d, d), dtype=complex)
        for j in range(l):
            m[j, j] = 1.0
        m[l, l] = -l
        mats.append(m * (s * math.sqrt(2.0 / (l * (l + 1)))))
    return np.stack(mats)


def decompose(rho: np.ndarray, d: int = 2) -> np.ndarray:
    """Real coefficient vector of rho over the tensor Gell-Mann basis.

    Entry (mu_1,..,mu_N), flattened row-major, is tr(rho * b_{mu_1} x
    ... x b_{mu_N}).  The (0,..,0) entry equals the trace.
    """
    rho = np.asarray(rho, dtype=complex)
    n = _sites_of(rho.shape[0], d)
    basis = gellmann_basis(d)
    # contraction matrix M[a, i*d+j] = b_a[j, i] so that the trace pairing
    # tr(rho b) = sum_ij rho[i,j] b[j,i] is a flat dot product per site
    m = np.transpose(basis, (0, 2, 1)).reshape(d * d, d * d)
    t = rho.reshape((d,) * (2 * n))
    order = [ax for k in range(n) for ax in (k, k + n)]
    t = np.transpose(t, order).reshape((d * d,) * n)
    for _ in range(n):
        t = np.tensordot(t, m, axes=([0], [1]))
    flat = t.reshape(-1)
    worst = float(np.abs(flat.imag).max()) if flat.size else 0.0
    if worst > 1e-6:
        raise ValueError(f"coefficients are not real (max imag {worst:.2e}); "
                         "input is far from Hermitian")
    return flat.real.copy()


def reconstruct(coeffs: np.ndarray, d: int = 2) -> np.ndarray:
    """Inverse of :func:`decompose` (includes the 1/d^N prefactor)."""
    coeffs = np.asarray(coeffs, dtype=float)
    n = _sites_of(coeffs.size, d * d)
    basis = gellmann_basis(d)
    h = basis.reshape(d * d, d * d).T / d
    t = coeffs.reshape((d * d,) * n).astype(complex)
    for _ in range(n):
        t = np.tensordot(t, h, axes=([0], [1]))
    t = t.reshape((d, d) * n)
    rows = [2 * k for k in range(n)]
    cols = [2 * k + 1 for k in range(n)]
    t = np.transpose(t, rows + cols)
    dim = d**n
    return t.reshape(dim, dim)


def permutation_unitary(p: Permutation, d: int, n_sites: int | None = None) -> np.ndarray:
    """Unitary that transports the state of site j to site p(j).

    On basis kets: U_p |y_1 .. y_N> = |x_1 .. x_N> with x_k = y_{p^{-1}(k)}.
    The map p -> U_p is a group homomorphism.
    """
    n = n_sites if n_sites is not None else len(p)
    if len(p) != n:
        raise ValueError("permutation degree does not match site count")
    dim = d**n
    pinv = inverse(p)
    place = d ** np.arange(n - 1, -1, -1)
    idx = np.arange(dim)
    digits = (idx[:, None] // place[None, :]) % d
    new_digits = digits[:, [pinv[k] - 1 for k in range(n)]]
    target = new_digits @ place
    u = np.zeros((dim, dim))
    u[target, idx] = 1.0
    return u


def lindblad_rhs(
    rho: np.ndarray,
    h0: np.ndarray | None,
    gens: GeneratorSet,
    weights,
    d: int = 2,
    unitaries: list[np.ndarray] | None = None,
) -> np.ndarray:
    """Right-hand side of the master equation at one state."""
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(gens),):
        raise ValueError("one weight per generator required")
    if unitaries is None:
        n = _sites_of(rho.shape[0], d)
        unitaries = [permutation_unitary(p, d, n) for p in gens.perms]
    out = np.zeros_like(rho, dtype=complex)
    if h0 is not None:
        out -= 1j * (h0 @ rho - rho @ h0)
    for u, w in zip(unitaries, weights):
        if w != 0.0:
            out += w * (u @ rho @ u.T - rho)
    return out


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    d: int


def evolve(
    rho0: np.ndarray,
    h0: np.ndarray | None,
    gens: GeneratorSet,
    weights,
    t_final: float,
    dt: float = 1e-3,
    frame: str = "lab",
    d: int = 2,
    store_every: int = 1,
    dim_cap: int = EVOLVE_DIM_CAP,
) -> Trajectory:
    """Fixed-step 4th-order integration of the master equation.

    ``frame='interaction'`` drops the Hamiltonian term (the dissipator
    is unchanged there when H0 commutes with every swap).  Each stored
    state is re-Hermitized and trace-renormalized; drift beyond 1e-6 per
    step unit raises :class:`StepSizeError`.
    """
    if dt <= 0 or t_final < 0:
        raise ValueError("need dt > 0 and t_final >= 0")
    if frame not in ("lab", "interaction"):
        raise ValueError(f"unknown frame {frame!r}")
    rho0 = np.asarray(rho0, dtype=complex)
    dim = rho0.shape[0]
    if dim > dim_cap:
        from .permgroup import CapExceededError

        raise CapExceededError(f"state dimension {dim} exceeds cap {dim_cap}")
    n = _sites_of(dim, d)
    check_density(rho0, d)
    ham = None if frame == "interaction" else h0
    us = [permutation_unitary(p, d, n) for p in gens.perms]
    weights = np.asarray(weights, dtype=float)

    def rhs(r: np.ndarray) -> np.ndarray:
        return lindblad_rhs(r, ham, gens, weights, d=d, unitaries=us)

    steps = int(round(t_final / dt))
    stored_idx = [i for i in range(steps + 1) if i % store_every == 0]
    if stored_idx[-1] != steps:
        stored_idx.append(steps)
    states = np.empty((len(stored_idx), dim, dim), dtype=complex)
    times = np.array([i * dt for i in stored_idx])

    # entry state gets the same conditioning as every step, so all
    # stored states are exactly Hermitian with unit trace
    rho = 0.5 * (rho0 + rho0.conj().T)
    rho = rho / np.trace(rho).real
    pos = 0
    if stored_idx[0] == 0:
        states[0] = rho
        pos = 1
    for i in range(1, steps + 1):
        k1 = rhs(rho)
        k2 = rhs(rho + 0.5 * dt * k1)
        k3 = rhs(rho + 0.5 * dt * k2)
        k4 = rhs(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        tr = np.trace(rho)
        herm_defect = float(np.abs(rho - rho.conj().T).max())
        drift = abs(tr - 1.0) + herm_defect
        if drift > 1e-6:
            raise StepSizeError(
                f"invariant drift {drift:.2e} at t={i*dt:.6g}; reduce dt"
            )
        rho = 0.5 * (rho + rho.conj().T)
        rho = rho / np.trace(rho).real
        if pos < len(stored_idx) and stored_idx[pos] == i:
            states[pos] = rho
            pos += 1
    return Trajectory(times=times, states=states, d=d)


def check_density(rho: np.ndarray, d: int = 2) -> None:
    """Raise ValueError unless rho is Hermitian, unit-trace and positive."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    _sites_of(rho.shape[0], d)
    if np.abs(rho - rho.conj().T).max() > 1e-10:
        raise ValueError("density matrix is not Hermitian (tol 1e-10)")
    if abs(np.trace(rho) - 1.0) > 1e-10:
        raise ValueError("density matrix trace differs from 1 (tol 1e-10)")
    if np.linalg.eigvalsh(0.5 * (rho + rho.conj().T)).min() < -1e-9:
        raise ValueError("density matrix has an eigenvalue below -1e-9")


def symmetric_state(rho: np.ndarray, group, d: int = 2) -> np.ndarray:
    """Group average (1/|G|) sum_g U_g rho U_g^dag.

    ``group`` must be closed under composition; the result is invariant
    under every element's unitary and is the consensus target when the
    group is the full symmetric group.
    """
    members = sorted(set(group))
    if not members:
        raise ValueError("group is empty")
    n = len(members[0])
    gset = set(members)
    if identity(n) not in gset:
        raise ValueError("not a group: identity missing")
    for a in members:
        for b in members:
            if compose(a, b) not in gset:
                raise ValueError(f"not a group: {a} o {b} escapes the set")
    rho = np.asarray(rho, dtype=complex)
    out = np.zeros_like(rho)
    for g in members:
        u = permutation_unitary(g, d, n)
        out += u @ rho @ u.T
    return out / len(members)


def reduced_state(rho: np.ndarray, k: int, d: int = 2) -> np.ndarray:
    """Partial trace onto site k (1-based)."""
    rho = np.asarray(rho, dtype=complex)
    n = _sites_of(rho.shape[0], d)
    if not 1 <= k <= n:
        raise ValueError(f"site index {k} out of range 1..{n}")
    t = rho.reshape((d,) * (2 * n))
    rows = [chr(97 + i) for i in range(n)]
    cols = list(rows)
    cols[k - 1] = chr(97 + n)
    sub = "".join(rows) + "".join(cols) + "->" + rows[k - 1] + cols[k - 1]
    return np.einsum(sub, t)


def sync_distance(rho: np.ndarray, d: int = 2) -> float:
    """Largest Frobenius distance between two single-site reduced states."""
    n = _sites_of(np.asarray(rho).shape[0], d)
    reds = [reduced_state(rho, k, d) for k in range(1, n + 1)]
    worst = 0.0
    for i in range(n):
        for j in range(i + 1, n):
            worst = max(worst, float(np.linalg.norm(reds[i] - reds[j])))
    return worst


def expectation_consensus_gap(rho: np.ndarray, sigma: np.ndarray, d: int = 2) -> float:
    """Largest spread of a single-site observable's expectation across sites."""
    sigma = np.asarray(sigma, dtype=complex)
    if np.abs(sigma - sigma.conj().T).max() > 1e-10:
        raise ValueError("observable must be Hermitian")
    n = _sites_of(np.asarray(rho).shape[0], d)
    vals = [
        float(np.trace(reduced_state(rho, k, d) @ sigma).real)
        for k in range(1, n + 1)
    ]
    return max(vals) - min(vals)


def is_permutation_invariant(
    h0: np.ndarray, gens: GeneratorSet, d: int = 2, tol: float = 1e-10
) -> bool:
    """True iff H0 commutes with every generator's unitary."""
    h0 = np.asarray(h0, dtype=complex)
    n = _sites_of(h0.shape[0], d)
    for p in gens.perms:
        u = permutation_unitary(p, d, n)
        if np.abs(h0 @ u - u @ h0).max() >= tol:
            return False
    return True


def uniform_site_hamiltonian(d: int, n_sites: int) -> np.ndarray:
    """Sum over sites of one diagonal single-site term (sigma_z for d=2).

    Commutes with every permutation unitary, so it is a valid
    Hamiltonian for the invariant-Hamiltonian convergence statements.
    """
    basis = gellmann_basis(d)
    h_site = basis[-1]
    dim = d**n_sites
    out = np.zeros((dim, dim), dtype=complex)
    for k in range(n_sites):
        ops = [np.eye(d, dtype=complex)] * n_sites
        ops[k] = h_site
        term = ops[0]
        for o in ops[1:]:
            term = np.kron(term, o)
        out += term
    return out


def build_lq(
    gens: GeneratorSet,
    weights,
    d: int = 2,
    n_sites: int | None = None,
    dim_cap: int = LQ_DIM_CAP,
) -> np.ndarray:
    """Laplacian of the coefficient dynamics on all d^(2N) multi-indices.

    Row nu couples to nu o p (entry -w) for every generator p: the same
    pull rule as the induced graphs, of which this matrix is the direct
    sum over index-pattern classes.
    """
    n = n_sites if n_sites is not None else gens.n
    if n != gens.n:
        raise ValueError("site count must match generator degree")
    weights = np.asarray(weights, dtype=float)
    if weights.shape != (len(gens),):
        raise ValueError("one weight per generator required")
    q = d * d
    dim = q**n
    if dim > dim_cap:
        from .permgroup import CapExceededError

        raise CapExceededError(f"coefficient dimension {dim} exceeds cap {dim_cap}")
    place = q ** np.arange(n - 1, -1, -1)
    idx = np.arange(dim)
    digits = (idx[:, None] // place[None, :]) % q
    L = np.zeros((dim, dim))
    for p, w in zip(gens.perms, weights):
        target = digits[:, [p[k] - 1 for k in range(n)]] @ place
        moved = target != idx
        rows = idx[moved]
        L[rows, target[moved]] -= w
        L[rows, rows] += w
    return L


def frobenius_distances(states: np.ndarray, reference: np.ndarray) -> np.ndarray:
    """Frobenius distance of each trajectory state to a fixed reference."""
    diff = np.asarray(states) - np.asarray(reference)[None, :, :]
    return np.linalg.norm(diff.reshape(diff.shape[0], -1), axis=1)


def fit_decay_rate(
    times: np.ndarray,
    values: np.ndarray,
    window: tuple[float, float] = (1e-6, 1e-2),
    min_samples: int = 10,
) -> float:
    """Exponential decay rate from the log-linear regime of a series.

    Fits log(values) against time by least squares over the samples
    whose value lies inside ``window`` and returns the negated slope.
    """
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    lo, hi = window
    mask = (values >= lo) & (values <= hi)
    if int(mask.sum()) < min_samples:
        raise InsufficientDecayError(
            f"only {int(mask.sum())} samples inside [{lo:g}, {hi:g}] "
            f"(need {min_samples}); no usable decay regime"
        )
    slope = np.polyfit(times[mask], np.log(values[mask]), 1)[0]
    return float(-slope)


def generic_state(
    d: int,
    n_sites: int,
    seed: int = 0,
    gens: GeneratorSet | None = None,
    weights=None,
) -> np.ndarray:
    """Random product state with a 1e-2 maximally-mixed floor.

    When a weighted generator set is supplied, draws whose coefficient
    vector has essentially no component along the slowest decaying mode
    are rejected and redrawn, so decay-rate fits see that mode.
    """
    rng = np.random.default_rng(seed)
    dim = d**n_sites
    mode = None
    if gens is not None and weights is not None and (d * d) ** n_sites <= LQ_DIM_CAP:
        lq = build_lq(gens, weights, d=d, n_sites=n_sites)
        vals, vecs = np.linalg.eig(lq.T)
        nontrivial = np.abs(vals) > 1e-9
        if np.any(nontrivial):
            positive = np.where(nontrivial)[0]
            slow = positive[np.argmin(vals[positive].real)]
            mode = vecs[:, slow]
    for _ in range(64):
        psi = None
        for _ in range(n_sites):
            v = rng.normal(size=d) + 1j * rng.normal(size=d)
            v /= np.linalg.norm(v)
            psi = v if psi is None else np.kron(psi, v)
        rho = 0.99 * np.outer(psi, psi.conj()) + 0.01 * np.eye(dim) / dim
        if mode is None:
            return rho
        x = decompose(rho, d)
        overlap = abs(np.vdot(mode, x)) / (np.linalg.norm(mode) * np.linalg.norm(x))
        if overlap >= 1e-6:
            return rho
    raise RuntimeError("could not draw a state overlapping the slow mode")
