"""Induced splitting of a code's degeneracy under a perturbation.

The splitting of V over a code C is the spread of expectation values
max |<psi|V|psi> - <phi|V|phi>| over normalized code states, which equals
the eigenvalue spread of the compressed operator P V P restricted to C.
Half of it is the distance from the compression to the nearest multiple of
the projector, so a zero splitting is exactly the textbook error-detection
condition for V.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .code_space import CodeSubspace, project_onto_code
from .no_hiding import AttackReport
from .operators import (
    HermOp,
    Ket,
    embed,
    helstrom,
    herm_eig,
    operator_norm,
    partial_trace,
    random_herm,
)

# Default relative tolerance for calling a compression scalar.
KL_REL_TOL = 1e-8

# Ascent stops once an iteration improves the splitting by less than this.
ASCENT_IMPROVE_TOL = 1e-12


@dataclass(eq=False)
class IdsReport:
    """Eigenvalue spread of a compressed perturbation, with witnesses."""

    delta_e: float
    lambda_min: float
    lambda_max: float
    alpha_opt: float      # midpoint: the best scalar approximation to P V P
    kl_deviation: float   # distance of P V P from alpha_opt * P, = delta_e / 2
    witness_psi: Ket      # code state with the largest expectation
    witness_phi: Ket      # code state with the smallest expectation


def ids(code: CodeSubspace, v) -> IdsReport:
    """Splitting of the code degeneracy induced by a hermitian perturbation.

    Computed spectrally from the compressed operator, never by searching
    state pairs; the extremal eigenvectors are lifted back to the full
    space as witnesses.
    """
    comp = project_onto_code(code, v)
    w, u = herm_eig(comp.matrix)
    lam_min, lam_max = float(w[0]), float(w[-1])
    delta = lam_max - lam_min
    return IdsReport(
        delta_e=delta,
        lambda_min=lam_min,
        lambda_max=lam_max,
        alpha_opt=0.5 * (lam_max + lam_min),
        kl_deviation=0.5 * delta,
        witness_psi=Ket(code.basis @ u[:, -1], code.dims),
        witness_phi=Ket(code.basis @ u[:, 0], code.dims),
    )


def kl_check(code: CodeSubspace, v, tol: float = KL_REL_TOL) -> tuple[bool, float]:
    """Does the code detect v? True when P V P is a scalar on the code.

    Returns (verdict, best scalar alpha). The verdict compares the
    deviation against ``tol`` times the operator norm of v.
    """
    report = ids(code, v)
    scale = operator_norm(v)
    return report.kl_deviation <= tol * scale, report.alpha_opt


def worst_single_site_ascent(
    code: CodeSubspace,
    site: int,
    iters: int = 50,
    seed: int = 0,
    initial_ops=(),
    restarts: int = 1,
) -> AttackReport:
    """Alternating ascent over unit-norm hermitian operators on one site.

    Each round lifts the current X, takes the extremal witness pair of its
    splitting, reduces the pair to the site, and replaces X with the sign
    observable 2 P_+ - I of the reduced difference (the unit-norm operator
    with the largest expectation gap for that pair). The splitting sequence
    is nondecreasing: the new gap Tr(S delta) = ||delta||_1 dominates
    Tr(X delta), which was the old splitting.

    ``initial_ops`` adds deterministic starting points (the commuting-model
    pipeline passes its constructive attack here); ``restarts`` seeded
    Gaussian starts are appended.
    """
    site = int(site)
    dims = code.dims
    if not 0 <= site < len(dims):
        raise ValueError(f"site {site} out of range")
    d_site = dims[site]
    rng = np.random.default_rng(seed)

    starts = [np.asarray(getattr(x, "matrix", x), dtype=complex) for x in initial_ops]
    starts += [random_herm(d_site, rng) for _ in range(max(1, restarts))]

    best = None
    trajectories = []
    eye = np.eye(d_site)
    for x0 in starts:
        nrm = operator_norm(x0)
        x = x0 / nrm if nrm > 0 else eye.astype(complex)
        prev = -np.inf
        traj = []
        for _ in range(iters):
            report = ids(code, embed(x, [site], dims))
            traj.append(report.delta_e)
            if best is None or report.delta_e > best[0]:
                best = (report.delta_e, x, report)
            if report.delta_e <= prev + ASCENT_IMPROVE_TOL:
                break
            prev = report.delta_e
            rho_psi = partial_trace(report.witness_psi.density(), dims, [site])
            rho_phi = partial_trace(report.witness_phi.density(), dims, [site])
            _, proj = helstrom(rho_psi, rho_phi, dims=(d_site,))
            x = 2.0 * proj.matrix - eye
        trajectories.append(tuple(traj))

    value, x, report = best
    return AttackReport(
        site=site,
        x=HermOp(x, (d_site,)),
        certified_delta_e=float(value),
        witness_psi=report.witness_psi,
        witness_phi=report.witness_phi,
        guarantee="numeric",
        branch="ascent",
        trajectories=tuple(trajectories),
    )
