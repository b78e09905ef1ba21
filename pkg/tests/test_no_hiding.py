import numpy as np
import pytest
from numpy.testing import assert_allclose

from conftest import random_ket, random_unitary
from splitlab.code_space import CodeSubspace, ground_subspace
from splitlab.models import four_two_two_model
from splitlab.no_hiding import (
    no_hiding_witness,
    pair_side_norms,
    subspace_pair_score_scan,
    two_site_attack,
)
from splitlab.operators import (
    Ket,
    Projector,
    embed,
    fidelity,
    partial_trace,
    trace_norm,
)
from splitlab.splitting import ids


def _ket(vec, dims):
    v = np.asarray(vec, dtype=complex)
    return Ket(v / np.linalg.norm(v), tuple(dims))


def test_bell_span_witness_maximal():
    # orthogonal Bell states hide everything from both marginals, but the
    # superposition pair (b0 +- b1)/sqrt(2) = (|00>, |11>) is perfectly
    # distinguishable on either side: summed score 2 + 2
    b0 = _ket([1, 0, 0, 1], (2, 2))
    b1 = _ket([1, 0, 0, -1], (2, 2))
    w = no_hiding_witness(b0, b1)
    assert w.score == pytest.approx(4.0, abs=1e-9)
    assert w.candidate_id == 1
    # the input pair itself has identical marginals on A
    assert w.distance_d == pytest.approx(0.0, abs=1e-9)
    assert w.fidelity_f == pytest.approx(1.0, abs=1e-9)


def test_product_pair_witness():
    # b0 = |00>, b1 = |10>: differ only on site A
    b0 = _ket([1, 0, 0, 0], (2, 2))
    b1 = _ket([0, 0, 1, 0], (2, 2))
    w = no_hiding_witness(b0, b1)
    assert w.score == pytest.approx(2.0, abs=1e-9)
    assert w.candidate_id == 0
    assert w.side == "A"
    assert w.distance_d == pytest.approx(1.0, abs=1e-9)
    assert w.fidelity_f == pytest.approx(0.0, abs=1e-9)


def test_witness_floor_random_sweep(rng):
    for _ in range(200):
        raw0 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        raw1 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        raw1 = raw1 - (np.vdot(raw0, raw1) / np.vdot(raw0, raw0)) * raw0
        b0 = _ket(raw0, (2, 2))
        b1 = _ket(raw1, (2, 2))
        w = no_hiding_witness(b0, b1)
        assert w.score >= 2.0 / 3.0 - 1e-9
        assert w.score <= 4.0 + 1e-9
        assert w.score >= max(2.0 * w.distance_d, w.fidelity_f) - 1e-9


def test_side_norm_fidelity_identity(rng):
    # the A-side marginal fidelity of an orthogonal pair equals the trace
    # norm of the B-side coherence block Tr_A |b0><b1|
    for _ in range(50):
        raw0 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        raw1 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        raw1 = raw1 - (np.vdot(raw0, raw1) / np.vdot(raw0, raw0)) * raw0
        b0 = np.asarray(raw0 / np.linalg.norm(raw0))
        b1 = np.asarray(raw1 / np.linalg.norm(raw1))
        rho0a = partial_trace(np.outer(b0, b0.conj()), (2, 2), keep=[0])
        rho1a = partial_trace(np.outer(b1, b1.conj()), (2, 2), keep=[0])
        f_a = fidelity(rho0a, rho1a)
        coh_b = partial_trace(np.outer(b0, b1.conj()), (2, 2), keep=[1])
        assert f_a == pytest.approx(trace_norm(coh_b), abs=1e-9)


def test_witness_local_unitary_covariance(rng):
    raw0 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    raw1 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    raw1 = raw1 - (np.vdot(raw0, raw1) / np.vdot(raw0, raw0)) * raw0
    b0 = _ket(raw0, (2, 2))
    b1 = _ket(raw1, (2, 2))
    u = np.kron(random_unitary(2, rng), random_unitary(2, rng))
    c0 = Ket(u @ b0.amplitudes, (2, 2))
    c1 = Ket(u @ b1.amplitudes, (2, 2))
    w1 = no_hiding_witness(b0, b1)
    w2 = no_hiding_witness(c0, c1)
    assert w1.score == pytest.approx(w2.score, abs=1e-9)


def test_pair_side_norms_values():
    b0 = _ket([1, 0, 0, 0], (2, 2)).amplitudes
    b1 = _ket([0, 0, 0, 1], (2, 2)).amplitudes
    na, nb = pair_side_norms(b0, b1, (2, 2), a_sites=(0,))
    # |00> vs |11>: the marginals are orthogonal on both sides
    assert na == pytest.approx(2.0, abs=1e-12)
    assert nb == pytest.approx(2.0, abs=1e-12)
    b2 = _ket([0, 1, 0, 0], (2, 2)).amplitudes
    na, nb = pair_side_norms(b0, b2, (2, 2), a_sites=(0,))
    # |00> vs |01>: identical on A, orthogonal on B
    assert na == pytest.approx(0.0, abs=1e-12)
    assert nb == pytest.approx(2.0, abs=1e-12)


# -------------------------------------------------------------- attacks


def _code_from_projector(p, dims):
    vals, vecs = np.linalg.eigh(p)
    basis = vecs[:, vals > 0.5]
    return CodeSubspace(
        projector=Projector(p, tuple(dims)), basis=basis,
        degeneracy=basis.shape[1], gap=1.0, ground_energy=0.0,
        dims=tuple(dims),
    )


def test_two_site_attack_bell_projector():
    b0 = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    b1 = np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2)
    p = np.outer(b0, b0.conj()) + np.outer(b1, b1.conj())
    report = two_site_attack(Projector(p, (2, 2)))
    assert report.certified_delta_e >= 1.0 / 3.0 - 1e-9
    assert report.guarantee == "analytic"
    # X must be a projector acting on one site
    x = report.x.matrix
    assert_allclose(x @ x, x, atol=1e-10)
    # re-measure the certificate as an actual compressed spread
    code = _code_from_projector(p, (2, 2))
    v = embed(x, [report.site], (2, 2))
    assert ids(code, v).delta_e >= report.certified_delta_e - 1e-9


def test_two_site_attack_random_codes(rng):
    for _ in range(40):
        da, db = int(rng.integers(2, 4)), int(rng.integers(2, 4))
        dim = da * db
        rank = int(rng.integers(2, dim))
        g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
        q, _ = np.linalg.qr(g)
        p = q @ q.conj().T
        report = two_site_attack(Projector(p, (da, db)))
        assert report.certified_delta_e >= 1.0 / 3.0 - 1e-9
        code = _code_from_projector(p, (da, db))
        v = embed(report.x.matrix, [report.site], (da, db))
        measured = ids(code, v).delta_e
        assert measured >= report.certified_delta_e - 1e-9


def test_two_site_attack_witnesses_returned():
    b0 = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    b1 = np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2)
    p = np.outer(b0, b0.conj()) + np.outer(b1, b1.conj())
    report = two_site_attack(Projector(p, (2, 2)))
    psi, phi = report.witness_psi, report.witness_phi
    # both witnesses live in the code space
    assert np.linalg.norm(p @ psi.amplitudes - psi.amplitudes) <= 1e-9
    assert np.linalg.norm(p @ phi.amplitudes - phi.amplitudes) <= 1e-9


def test_two_site_attack_rank_one_rejected():
    p = np.zeros((4, 4), dtype=complex)
    p[0, 0] = 1.0
    with pytest.raises(ValueError, match="nothing to split"):
        two_site_attack(Projector(p, (2, 2)))


def test_two_site_attack_wrong_arity():
    with pytest.raises(ValueError, match="two"):
        two_site_attack(Projector(np.eye(8, dtype=complex), (2, 2, 2)))


def test_two_site_attack_redraw_seed():
    b0 = np.array([1, 0, 0, 1], dtype=complex) / np.sqrt(2)
    b1 = np.array([1, 0, 0, -1], dtype=complex) / np.sqrt(2)
    p = np.outer(b0, b0.conj()) + np.outer(b1, b1.conj())
    r1 = two_site_attack(Projector(p, (2, 2)), redraw_seed=7)
    assert r1.certified_delta_e >= 1.0 / 3.0 - 1e-9


def test_four_two_two_single_block_attack():
    # merging the four qubits into two ququarts makes the code 2-site;
    # the attack then certifies splitting by a 2-local (merged) operator
    from splitlab.models import block_sites

    model = block_sites(four_two_two_model(), [[0, 1], [2, 3]])
    code = ground_subspace(model)
    report = two_site_attack(code.projector)
    assert report.certified_delta_e >= 1.0 / 3.0 - 1e-9


# ----------------------------------------------------------------- scan


def test_scan_dominates_witness(rng):
    for _ in range(10):
        raw0 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        raw1 = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        raw1 = raw1 - (np.vdot(raw0, raw1) / np.vdot(raw0, raw0)) * raw0
        b0 = _ket(raw0, (2, 2))
        b1 = _ket(raw1, (2, 2))
        w = no_hiding_witness(b0, b1)
        best = subspace_pair_score_scan(b0, b1, grid_n=16)
        assert best >= w.score - 1e-9
        assert best <= 4.0 + 1e-9


def test_scan_grid_validation():
    b0 = _ket([1, 0, 0, 0], (2, 2))
    b1 = _ket([0, 1, 0, 0], (2, 2))
    with pytest.raises(ValueError, match="grid"):
        subspace_pair_score_scan(b0, b1, grid_n=1)
