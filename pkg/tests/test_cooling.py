from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaugecool.cooling import (
    CoolingReport,
    Syndrome,
    cool_vertex,
    cooling_sweep,
    gi_overlap,
    iterative_cooling,
    recovery_kraus,
    syndrome_operator,
    syndrome_probabilities,
)
from gaugecool.dynamics import NoiseSpec, TrotterConfig, apply_noise_all_edges, hygiene, trotter_step
from gaugecool.lattice import (
    TOTAL_DIM,
    build_cg_basis,
    physical_subspace_basis,
    singlet_projector,
    vacuum_state,
)


def random_density(rng, rank=8):
    a = rng.standard_normal((TOTAL_DIM, rank)) + 1j * rng.standard_normal((TOTAL_DIM, rank))
    rho = a @ a.conj().T
    return rho / np.trace(rho).real


def random_pure(rng):
    psi = rng.standard_normal(TOTAL_DIM) + 1j * rng.standard_normal(TOTAL_DIM)
    return psi / np.linalg.norm(psi)


def protocol_state():
    """Vacuum, one Trotter step (g2=1, dt=0.1), p=0.005 depolarizing everywhere."""
    vac = vacuum_state()
    rho = np.outer(vac, vac.conj())
    rho = trotter_step(rho, TrotterConfig(g2=1.0, total_time=0.1, n_steps=1))
    return apply_noise_all_edges(rho, NoiseSpec("depolarizing", 0.005))


def test_syndrome_labels_validated():
    s = Syndrome.of(Fraction(1, 2), Fraction(1, 2), Fraction(-1, 2))
    assert s.j == Fraction(1, 2)
    with pytest.raises(ValueError):
        Syndrome.of(-1, 0, 0)
    with pytest.raises(ValueError):
        Syndrome.of(Fraction(1, 2), Fraction(3, 2), Fraction(1, 2))  # |M| > J
    with pytest.raises(ValueError):
        Syndrome.of(1, Fraction(1, 2), 0)  # parity mismatch with J


def test_syndrome_operator_identity_on_singlets():
    for v in range(4):
        t = syndrome_operator(v, 0, 0, 0)
        basis = build_cg_basis(v)
        cols, _ = basis.columns(0, 0)
        s = basis.basis[:, cols]
        assert np.max(np.abs(t @ s - s)) < 1e-12


def test_syndrome_operator_partial_isometry_weight():
    basis = build_cg_basis(1)
    for tj in (1, 2):
        j = Fraction(tj, 2)
        for tm in range(-tj, tj + 1, 2):
            for tn in range(-tj, tj + 1, 2):
                t = syndrome_operator(1, j, Fraction(tm, 2), Fraction(tn, 2))
                cols, _ = basis.columns(tj, tn)
                bn = basis.basis[:, cols]
                p_n = bn @ bn.T.conj()
                assert np.max(np.abs(t.conj().T @ t - p_n / (tj + 1.0))) < 1e-10


def test_syndrome_operator_annihilates_other_sectors():
    t = syndrome_operator(2, Fraction(1, 2), Fraction(1, 2), Fraction(-1, 2))
    basis = build_cg_basis(2)
    for tj in (0, 2):
        for tn in range(-tj, tj + 1, 2):
            cols, _ = basis.columns(tj, tn)
            assert np.max(np.abs(t @ basis.basis[:, cols])) < 1e-10
    # and the right N within J = 1/2: only N = -1/2 survives
    cols, _ = basis.columns(1, 1)
    assert np.max(np.abs(t @ basis.basis[:, cols])) < 1e-10


def test_syndrome_operator_validation():
    with pytest.raises(ValueError):
        syndrome_operator(4, 0, 0, 0)
    with pytest.raises(ValueError):
        syndrome_operator(0, Fraction(1, 2), Fraction(3, 2), Fraction(1, 2))
    with pytest.raises(ValueError):
        syndrome_operator(0, Fraction(3, 2), Fraction(1, 2), Fraction(1, 2))  # no such J


def test_probabilities_vacuum_is_certain():
    vac = vacuum_state()
    rho = np.outer(vac, vac.conj())
    for v in range(4):
        probs = syndrome_probabilities(rho, v)
        assert probs[Syndrome.of(0, 0, 0)] == pytest.approx(1.0, abs=1e-12)
        rest = sum(p for s, p in probs.items() if s.j != 0)
        assert rest == pytest.approx(0.0, abs=1e-12)


def test_probabilities_sum_to_one_and_match_brute_force():
    rng = np.random.default_rng(11)
    for v in range(4):
        for _ in range(5):
            psi = random_pure(rng)
            rho = np.outer(psi, psi.conj())
            probs = syndrome_probabilities(rho, v)
            assert sum(probs.values()) == pytest.approx(1.0, abs=1e-10)
            for syn, p in probs.items():
                t = syndrome_operator(v, syn.j, syn.m, syn.n)
                assert p == pytest.approx(float(np.linalg.norm(t @ psi) ** 2), abs=1e-10)


def test_probabilities_independent_of_m():
    rng = np.random.default_rng(12)
    rho = random_density(rng)
    probs = syndrome_probabilities(rho, 0)
    for syn, p in probs.items():
        tj = int(2 * syn.j)
        for tm in range(-tj, tj + 1, 2):
            other = Syndrome(syn.j, Fraction(tm, 2), syn.n)
            assert abs(probs[other] - p) < 1e-12


def test_recovery_kraus_completeness():
    for v in range(4):
        ch = recovery_kraus(v)
        total = sum(k.conj().T @ k for k in ch.operators)
        assert np.max(np.abs(total - np.eye(TOTAL_DIM))) < 1e-10
        assert ch.vertex == v
        assert sorted(ch.labels) == sorted(
            [
                (Fraction(0), Fraction(0)),
                (Fraction(1, 2), Fraction(-1, 2)),
                (Fraction(1, 2), Fraction(1, 2)),
                (Fraction(1), Fraction(-1)),
                (Fraction(1), Fraction(0)),
                (Fraction(1), Fraction(1)),
            ]
        )


def test_recovery_kraus_fixes_singlets_and_maps_isometrically():
    for v in (0, 2):
        ch = recovery_kraus(v)
        basis = build_cg_basis(v)
        sing_cols, _ = basis.columns(0, 0)
        s = basis.basis[:, sing_cols]
        p0 = singlet_projector(v)
        for (j, n), k in zip(ch.labels, ch.operators):
            if (j, n) == (Fraction(0), Fraction(0)):
                assert np.max(np.abs(k @ s - s)) < 1e-10
                continue
            cols, _ = basis.columns(int(2 * j), int(2 * n))
            b = basis.basis[:, cols]
            image = k @ b
            # isometric on its source block, landing inside the singlet sector
            assert np.max(np.abs(image.conj().T @ image - np.eye(b.shape[1]))) < 1e-10
            assert np.max(np.abs(p0 @ image - image)) < 1e-10


def test_cool_vertex_lands_in_singlet_sector():
    rng = np.random.default_rng(21)
    rho = random_density(rng)
    for v in range(4):
        out = cool_vertex(rho, v)
        p0 = singlet_projector(v)
        assert np.max(np.abs(p0 @ out @ p0 - out)) < 1e-10
        assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)
        trace_dev, herm_dev, min_eig = hygiene(out)
        assert trace_dev < 1e-12 and herm_dev < 1e-12 and min_eig > -1e-10


def test_cool_vertex_idempotent():
    rng = np.random.default_rng(22)
    rho = random_density(rng, rank=4)
    for v in range(4):
        once = cool_vertex(rho, v)
        twice = cool_vertex(once, v)
        assert np.max(np.abs(twice - once)) < 1e-10


def test_cool_vertex_fixes_gauge_invariant_states():
    vac = vacuum_state()
    rho = np.outer(vac, vac.conj())
    for v in range(4):
        assert np.max(np.abs(cool_vertex(rho, v) - rho)) < 1e-12


def test_cooling_sweep_preserves_physical_subspace_states():
    rng = np.random.default_rng(23)
    b = physical_subspace_basis()
    w = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    w = w @ w.conj().T
    w /= np.trace(w).real
    rho = b @ w @ b.conj().T
    out = cooling_sweep(rho)
    assert np.max(np.abs(out - rho)) < 1e-10


def test_cooling_sweep_trace_preserving():
    rng = np.random.default_rng(24)
    rho = random_density(rng)
    out = cooling_sweep(rho)
    assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)
    trace_dev, herm_dev, min_eig = hygiene(out)
    assert trace_dev < 1e-12 and herm_dev < 1e-12 and min_eig > -1e-10


def test_gi_overlap_reference_points():
    vac = vacuum_state()
    assert gi_overlap(np.outer(vac, vac.conj())) == pytest.approx(1.0, abs=1e-12)
    mixed = np.eye(TOTAL_DIM) / TOTAL_DIM
    assert gi_overlap(mixed) == pytest.approx(0.2, abs=1e-12)


def test_gi_overlap_protocol_state_before_and_after_one_sweep():
    rho = protocol_state()
    before = gi_overlap(rho)
    assert before == pytest.approx(0.992, abs=0.002)
    after = gi_overlap(cooling_sweep(rho))
    assert after == pytest.approx(0.993, abs=0.002)
    assert after > before


@given(st.integers(min_value=0, max_value=2**32 - 1))
@settings(max_examples=8, deadline=None)
def test_cooling_hygiene_on_random_states(seed):
    rng = np.random.default_rng(seed)
    rho = random_density(rng, rank=3)
    out = cool_vertex(rho, int(rng.integers(4)))
    trace_dev, herm_dev, min_eig = hygiene(out)
    assert trace_dev < 1e-12 and herm_dev < 1e-12 and min_eig > -1e-10
    assert 0.0 <= gi_overlap(out) <= 1.0 + 1e-10


def test_cooling_contraction_trajectory():
    # Frozen regression for the recovery pairing: the deficit sequence on the
    # standard noisy state contracts by ~0.44 per sweep once transients decay.
    rho = protocol_state()
    _, report = iterative_cooling(rho, tol=1e-5, max_sweeps=10)
    d = report.deficits
    assert d[0] == pytest.approx(7.980e-3, abs=5e-6)
    assert d[1] == pytest.approx(6.953027e-3, abs=1e-8)
    assert d[2] == pytest.approx(4.331657e-3, abs=1e-8)
    assert d[3] == pytest.approx(2.286976e-3, abs=1e-8)
    assert d[10] / d[9] == pytest.approx(0.4442, abs=2e-3)


def test_iterative_cooling_converges_immediately_on_gi_state():
    vac = vacuum_state()
    rho = np.outer(vac, vac.conj())
    out, report = iterative_cooling(rho, tol=1e-5, max_sweeps=10)
    assert report.sweeps_used == 0
    assert report.converged
    assert len(report.overlaps) == 1
    assert np.max(np.abs(out - rho)) < 1e-12


def test_iterative_cooling_report_bookkeeping():
    rho = protocol_state()
    out, report = iterative_cooling(rho, tol=1e-5, max_sweeps=3)
    assert report.sweeps_used <= 3
    assert len(report.overlaps) == report.sweeps_used + 1
    assert report.deficits == [1.0 - x for x in report.overlaps]
    assert report.final_deficit == pytest.approx(1.0 - report.overlaps[-1])
    assert all(0.0 <= x <= 1.0 + 1e-10 for x in report.overlaps)
    assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)


def test_iterative_cooling_validation():
    rho = np.eye(TOTAL_DIM) / TOTAL_DIM
    with pytest.raises(ValueError):
        iterative_cooling(rho, tol=0.0)
    with pytest.raises(ValueError):
        iterative_cooling(rho, tol=1e-5, max_sweeps=0)


def test_report_deficit_properties():
    report = CoolingReport(overlaps=[0.9, 0.99], sweeps_used=1, converged=False)
    assert report.final_deficit == pytest.approx(0.01)
    assert report.deficits == pytest.approx([0.1, 0.01])
