"""Distinguishable reduced states inside any two-dimensional subspace.

Any 2D subspace of a bipartite space contains an orthonormal pair whose
reduced states, summed over the two sides, are at least 2/3 apart in trace
norm. Only three candidate pairs ever need checking: the input basis and its
two balanced superpositions (real and imaginary relative phase). That bound
is what makes the two-site attack constructive: the more distinguishable
side yields a projector whose expectation separates the pair by at least 1/3.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .operators import (
    HermOp,
    Ket,
    Projector,
    helstrom,
    fidelity,
    partial_trace,
    trace_norm,
)

# The worst-case guarantee for the best candidate pair, and the slack the
# builders allow before declaring a (mathematically impossible) violation.
SCORE_FLOOR = 2.0 / 3.0
SCORE_ATOL = 1e-9

ORTHO_ATOL = 1e-10


@dataclass(eq=False)
class NoHidingWitness:
    """Orthonormal pair with reduced states far apart on at least one side."""

    psi: Ket
    phi: Ket
    score: float            # trace-norm difference summed over both sides
    side: str               # 'A' or 'B': the more distinguishable side
    candidate_id: int       # 0 input pair, 1 real superpositions, 2 imaginary
    fidelity_f: float       # A-side fidelity of the input basis pair
    distance_d: float       # A-side trace distance of the input basis pair
    a_sites: tuple[int, ...]
    side_norms: tuple[float, float] = (0.0, 0.0)


@dataclass(eq=False)
class AttackReport:
    """A single-site perturbation together with what it certifies."""

    site: int
    x: HermOp
    certified_delta_e: float
    witness_psi: Ket
    witness_phi: Ket
    guarantee: str                 # 'analytic' or 'numeric'
    branch: str = ""
    trajectories: tuple = ()
    details: dict = field(default_factory=dict)


def _complement(dims, a_sites) -> tuple[int, ...]:
    a = set(int(s) for s in a_sites)
    if not a or not a.issubset(range(len(dims))):
        raise ValueError(f"bad bipartition {sorted(a)} for {len(dims)} sites")
    b = tuple(i for i in range(len(dims)) if i not in a)
    if not b:
        raise ValueError("bipartition leaves the B side empty")
    return b


def pair_side_norms(psi: np.ndarray, phi: np.ndarray, dims, a_sites) -> tuple[float, float]:
    """Trace norms of the reduced difference on side A and side B."""
    b_sites = _complement(dims, a_sites)
    delta = np.outer(psi, psi.conj()) - np.outer(phi, phi.conj())
    on_a = partial_trace(delta, dims, sorted(int(s) for s in a_sites))
    on_b = partial_trace(delta, dims, b_sites)
    return trace_norm(on_a), trace_norm(on_b)


def _candidates(b0: np.ndarray, b1: np.ndarray):
    s2 = np.sqrt(0.5)
    yield 0, b0, b1
    yield 1, s2 * (b0 + b1), s2 * (b0 - b1)
    yield 2, s2 * (b0 + 1j * b1), s2 * (b0 - 1j * b1)


def _check_pair(b0: Ket, b1: Ket):
    if b0.dims != b1.dims:
        raise ValueError("basis kets live on different site structures")
    if abs(np.vdot(b0.amplitudes, b1.amplitudes)) > ORTHO_ATOL:
        raise ValueError("basis kets are not orthogonal")


def no_hiding_witness(b0: Ket, b1: Ket, a_sites=(0,)) -> NoHidingWitness:
    """Best of the three candidate pairs by summed two-side trace norm.

    The returned score is guaranteed to be at least max(2D, F) for the
    A-side trace distance D and fidelity F of the input pair, hence at
    least 2/3; the builder checks this and refuses to return otherwise.
    """
    _check_pair(b0, b1)
    dims = b0.dims
    a_sites = tuple(sorted(int(s) for s in a_sites))
    _complement(dims, a_sites)

    best = None
    for cid, v0, v1 in _candidates(b0.amplitudes, b1.amplitudes):
        na, nb = pair_side_norms(v0, v1, dims, a_sites)
        if best is None or na + nb > best[0] + 1e-15:
            best = (na + nb, cid, v0, v1, na, nb)
    score, cid, v0, v1, na, nb = best

    rho0 = partial_trace(np.outer(b0.amplitudes, b0.amplitudes.conj()), dims, a_sites)
    rho1 = partial_trace(np.outer(b1.amplitudes, b1.amplitudes.conj()), dims, a_sites)
    dist, _ = helstrom(rho0, rho1)
    fid = fidelity(rho0, rho1)

    floor = max(2.0 * dist, fid, SCORE_FLOOR)
    if score < floor - SCORE_ATOL:
        raise AssertionError(
            f"witness score {score} fell below its floor {floor}; this should be impossible"
        )
    return NoHidingWitness(
        psi=Ket(v0, dims),
        phi=Ket(v1, dims),
        score=float(score),
        side="A" if na >= nb else "B",
        candidate_id=cid,
        fidelity_f=float(fid),
        distance_d=float(dist),
        a_sites=a_sites,
        side_norms=(float(na), float(nb)),
    )


def two_site_attack(p: Projector, redraw_seed: int | None = None) -> AttackReport:
    """Worst-case single-site projector for a two-site ground projector.

    Scans the three candidate pairs and both sides for the largest
    single-side reduced trace-norm difference (that maximum is at least
    2/3: the input pair realizes 2D on side A, the superposition pairs
    realize at least F on side B, and max(2D, F) >= 2/3). The attack is
    the Helstrom projector of the winning reduced pair, and its
    expectation gap, Tr(X delta) = ||delta||_1 / 2, is at least 1/3.
    """
    if len(p.dims) != 2:
        raise ValueError("the attack needs an explicitly two-site projector")
    if p.rank < 2:
        raise ValueError("nothing to split: the projector has rank < 2")
    dims = p.dims

    w, v = np.linalg.eigh(p.matrix)
    cols = v[:, w > 0.5]
    if redraw_seed is None:
        b0, b1 = cols[:, 0], cols[:, 1]
    else:
        rng = np.random.default_rng(redraw_seed)
        z = rng.standard_normal((cols.shape[1], 2)) + 1j * rng.standard_normal((cols.shape[1], 2))
        q, _ = np.linalg.qr(z)
        picked = cols @ q
        b0, b1 = picked[:, 0], picked[:, 1]

    best = None
    for cid, v0, v1 in _candidates(b0, b1):
        na, nb = pair_side_norms(v0, v1, dims, (0,))
        for side, norm in (("A", na), ("B", nb)):
            if best is None or norm > best[0] + 1e-15:
                best = (norm, cid, side, v0, v1)
    norm, cid, side, v0, v1 = best

    site = 0 if side == "A" else 1
    rho_psi = partial_trace(np.outer(v0, v0.conj()), dims, [site])
    rho_phi = partial_trace(np.outer(v1, v1.conj()), dims, [site])
    _, proj = helstrom(rho_psi, rho_phi, dims=(dims[site],))
    x = proj.matrix
    certified = float(np.trace(x @ (rho_psi - rho_phi)).real)
    if certified < SCORE_FLOOR / 2.0 - SCORE_ATOL:
        raise AssertionError(
            f"certified splitting {certified} fell below 1/3; this should be impossible"
        )
    return AttackReport(
        site=site,
        x=HermOp(x, (dims[site],)),
        certified_delta_e=certified,
        witness_psi=Ket(v0, dims),
        witness_phi=Ket(v1, dims),
        guarantee="analytic",
        branch="two-site",
        details={"candidate_id": cid, "side": side, "side_norm": float(norm)},
    )


def subspace_pair_score_scan(b0: Ket, b1: Ket, a_sites=(0,), grid_n: int = 24) -> float:
    """Grid oracle: best summed score over all orthonormal pairs in the span.

    Orthonormal pairs correspond to antipodal points on the Bloch sphere of
    the subspace, so a (theta, phi) grid covers them all; the closed-form
    candidate angles are appended so the oracle provably dominates the
    constructive witness at any grid size.
    """
    if grid_n < 2:
        raise ValueError("grid_n must be at least 2")
    _check_pair(b0, b1)
    dims = b0.dims
    a_sites = tuple(sorted(int(s) for s in a_sites))
    thetas = np.unique(np.concatenate([np.linspace(0.0, np.pi, grid_n), [np.pi / 2]]))
    phis = np.unique(
        np.concatenate(
            [np.linspace(0.0, 2 * np.pi, grid_n, endpoint=False), [0.0, np.pi / 2, np.pi, 1.5 * np.pi]]
        )
    )
    u0, u1 = b0.amplitudes, b1.amplitudes
    best = 0.0
    for th in thetas:
        c, s = np.cos(th / 2.0), np.sin(th / 2.0)
        for ph in phis:
            z = np.exp(1j * ph)
            v0 = c * u0 + z * s * u1
            v1 = s * u0 - z * c * u1
            na, nb = pair_side_norms(v0, v1, dims, a_sites)
            best = max(best, na + nb)
    return float(best)
