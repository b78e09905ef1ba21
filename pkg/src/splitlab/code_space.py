"""Ground subspaces of gapped hamiltonians, treated as codes.

A CodeSubspace packages an orthonormal ground basis, the projector onto it,
the spectral gap above it, and the ground energy. Extraction refuses to
guess when the low end of the spectrum has no clean degenerate-plus-gap
structure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import (
    HermOp,
    Projector,
    herm_eig,
    mat_of,
    total_dim,
)

# Eigenvalues within DEGENERACY_TOL times the spectral spread of the minimum
# count as ground; the next level must clear the cluster by SEPARATION_FACTOR
# times that resolution or extraction refuses.
DEGENERACY_TOL = 1e-8
SEPARATION_FACTOR = 10.0


@dataclass(eq=False)
class CodeSubspace:
    """Orthonormal basis of a ground (or declared) subspace with its gap."""

    projector: Projector
    basis: np.ndarray
    degeneracy: int
    gap: float
    ground_energy: float
    dims: tuple[int, ...]

    def __post_init__(self):
        b = np.asarray(self.basis, dtype=complex)
        d = total_dim(self.dims)
        if b.shape != (d, self.degeneracy):
            raise ValueError(f"basis shape {b.shape} does not match ({d}, {self.degeneracy})")
        gram = b.conj().T @ b
        if np.max(np.abs(gram - np.eye(self.degeneracy))) > 1e-10:
            raise ValueError("basis columns are not orthonormal")
        if np.max(np.abs(self.projector.matrix - b @ b.conj().T)) > 1e-10:
            raise ValueError("projector does not match the basis span")
        if not self.gap > 0:
            raise ValueError(f"gap must be positive, got {self.gap}")
        self.basis = b

    @property
    def dim(self) -> int:
        return self.basis.shape[0]


def ground_subspace(h, degeneracy_tol: float = DEGENERACY_TOL) -> CodeSubspace:
    """Extract the degenerate ground subspace of a gapped hamiltonian.

    ``h`` is a HermOp, a model with a ``hamiltonian()`` method, or a plain
    matrix (single-site dims assumed). Eigenvalues within
    ``degeneracy_tol * spread`` of the minimum form the ground cluster; the
    next eigenvalue must clear the minimum by SEPARATION_FACTOR times that
    resolution, otherwise the spectrum is flagged as ill-separated instead
    of silently picking a cutoff.
    """
    if hasattr(h, "hamiltonian"):
        h = h.hamiltonian()
    dims = getattr(h, "dims", None)
    m = mat_of(h)
    if dims is None:
        dims = (m.shape[0],)
    w, v = herm_eig(m)
    spread = float(w[-1] - w[0])
    if spread <= 0:
        raise ValueError(
            "hamiltonian is proportional to the identity, so it has no gap; "
            "use full_space_code for the unprotected case"
        )
    resolution = degeneracy_tol * spread
    d = int(np.sum(w - w[0] <= resolution))
    if d == len(w):
        raise ValueError("no gap above the ground cluster")
    gap = float(w[d] - w[0])
    if gap < SEPARATION_FACTOR * resolution:
        raise ValueError(
            f"ill-separated spectrum: next level at {gap:.3e} above the ground "
            f"cluster, resolution {resolution:.3e}"
        )
    basis = v[:, :d]
    proj = Projector(basis @ basis.conj().T, dims, d)
    return CodeSubspace(
        projector=proj,
        basis=basis,
        degeneracy=d,
        gap=gap,
        ground_energy=float(w[0]),
        dims=tuple(dims),
    )


def full_space_code(dims) -> CodeSubspace:
    """The whole Hilbert space as a code (the unprotected case).

    ground_subspace refuses H = 0; this constructor is the explicit opt-in.
    """
    dims = tuple(int(d) for d in getattr(dims, "dims", dims))
    d = total_dim(dims)
    eye = np.eye(d, dtype=complex)
    return CodeSubspace(
        projector=Projector(eye, dims, d),
        basis=eye,
        degeneracy=d,
        gap=np.inf,
        ground_energy=0.0,
        dims=dims,
    )


def project_onto_code(code: CodeSubspace, v) -> HermOp:
    """Compress an operator to the code: the matrix <b_m| V |b_n>."""
    m = mat_of(v)
    if m.shape != (code.dim, code.dim):
        raise ValueError(f"operator shape {m.shape} does not match code dimension {code.dim}")
    comp = code.basis.conj().T @ m @ code.basis
    scale = max(1.0, float(np.max(np.abs(m))))
    defect = float(np.max(np.abs(comp - comp.conj().T)))
    if defect > 1e-10 * scale:
        raise ValueError("compressed operator is not hermitian; input was not")
    return HermOp(0.5 * (comp + comp.conj().T), (code.degeneracy,))
