import math
from math import comb, factorial

import numpy as np
import pytest

from gtprobe.fidelity import expected_fidelity
from gtprobe.simulator import (
    CapacityError,
    ExtractionError,
    apply_tensor_power,
    casimir_eigenvalue,
    extract_gt_vectors,
    haar_unitary,
    mc_estimates,
    mc_expected_fidelity,
    mc_total_probability,
    verify_cg_embedding,
    weight_operator,
    weight_sector,
)
from gtprobe.young import GammaParams, gamma_content, gamma_shape, hook_length_dimension


class TestWeightSector:
    def test_counts(self):
        assert len(weight_sector(2, 4, (1, 3))) == comb(4, 1)
        assert len(weight_sector(3, 6, (1, 1, 4))) == factorial(6) // factorial(4)
        assert weight_sector(3, 3, (3, 0, 0)) == [0]

    def test_mismatched_content_is_empty(self):
        assert weight_sector(2, 4, (1, 1)) == []
        assert weight_sector(2, 4, (1, 3, 0)) == []

    def test_lexicographic_order(self):
        sector = weight_sector(2, 4, (1, 3))
        assert sector == sorted(sector)
        assert sector == [0b0111, 0b1011, 0b1101, 0b1110]


class TestWeightOperator:
    def test_counting_operator(self):
        op = weight_operator(2, 2, 2, 4)
        sector = weight_sector(2, 4, (1, 3))
        v = np.zeros(16)
        v[sector] = 1.0
        assert np.allclose(op @ v, 3.0 * v)  # letter 2 appears 3 times

    def test_commutator_identity(self):
        e12 = weight_operator(1, 2, 2, 4)
        e21 = weight_operator(2, 1, 2, 4)
        e11 = weight_operator(1, 1, 2, 4)
        e22 = weight_operator(2, 2, 2, 4)
        comm = (e12 @ e21 - e21 @ e12) - (e11 - e22)
        assert abs(comm).max() == 0.0

    def test_content_shift(self):
        op = weight_operator(1, 3, 3, 4)
        src = weight_sector(3, 4, (1, 1, 2))
        dst = set(weight_sector(3, 4, (2, 1, 1)))
        for k in src:
            v = np.zeros(81)
            v[k] = 1.0
            support = set(np.nonzero(op @ v)[0])
            assert support <= dst

    def test_rejects_bad_letters(self):
        with pytest.raises(ValueError):
            weight_operator(0, 1, 2, 3)


class TestCasimir:
    def test_known_eigenvalues(self):
        assert casimir_eigenvalue((4,), 2) == 20
        assert casimir_eigenvalue((3, 1), 2) == 12

    def test_brute_force_spectrum(self):
        # Assemble sum_ab E_ab E_ba on the full 2^4 space and compare its
        # eigenvalues on the (1,3)-content sector with the shape labels.
        d, n = 2, 4
        c2 = None
        for a in range(1, d + 1):
            for b in range(1, d + 1):
                term = weight_operator(a, b, d, n) @ weight_operator(b, a, d, n)
                c2 = term if c2 is None else c2 + term
        sector = weight_sector(d, n, (1, 3))
        block = c2.toarray()[np.ix_(sector, sector)]
        eigs = sorted(np.linalg.eigvalsh(block).round(8))
        assert eigs == [12, 12, 12, 20]


class TestExtraction:
    def test_qubit_buckets(self):
        vs = extract_gt_vectors(2, 4)
        assert vs.sector_dims == (1, 3)
        assert vs.casimir_values == (20, 12)

    def test_qutrit_buckets_match_hooks(self):
        vs = extract_gt_vectors(3, 6)
        hooks = tuple(
            hook_length_dimension(gamma_shape(GammaParams(3, 1, i))) for i in range(2)
        )
        assert vs.sector_dims == hooks == (5, 10)

    def test_vectors_are_orthonormal_and_sector_supported(self):
        vs = extract_gt_vectors(3, 6)
        gram = vs.vectors @ vs.vectors.conj().T
        assert np.max(np.abs(gram - np.eye(2))) < 1e-10
        support = set(weight_sector(3, 6, gamma_content(3, 1)))
        for v in vs.vectors:
            assert set(np.nonzero(v)[0]) <= support

    def test_capacity_guard(self):
        with pytest.raises(CapacityError):
            extract_gt_vectors(5, 10)

    def test_rejects_bad_n(self):
        with pytest.raises(ValueError):
            extract_gt_vectors(2, 5)

    def test_basis_choice_flag_changes_vector_not_invariants(self):
        first = extract_gt_vectors(2, 4)
        last = extract_gt_vectors(2, 4, pick="last")
        assert first.sector_dims == last.sector_dims
        # bucket 0 is one-dimensional, bucket 1 is not
        assert np.allclose(np.abs(first.vectors[0]), np.abs(last.vectors[0]))
        assert not np.allclose(first.vectors[1], last.vectors[1])


class TestHaar:
    def test_unitarity(self):
        for d in (2, 3, 6):
            u = haar_unitary(d, 11)
            assert np.max(np.abs(u.conj().T @ u - np.eye(d))) < 1e-10

    def test_deterministic(self):
        assert np.array_equal(haar_unitary(4, 5), haar_unitary(4, 5))
        assert not np.array_equal(haar_unitary(4, 5), haar_unitary(4, 6))

    def test_first_moment(self):
        # E|U_11|^2 = 1/d for the Haar measure.
        d, samples = 3, 10_000
        values = np.array(
            [abs(haar_unitary(d, seed)[0, 0]) ** 2 for seed in range(samples)]
        )
        stderr = values.std(ddof=1) / math.sqrt(samples)
        assert abs(values.mean() - 1 / d) < 5 * stderr


class TestTensorPower:
    def test_identity(self):
        v = np.arange(8, dtype=complex)
        assert np.allclose(apply_tensor_power(np.eye(2), v, 3), v)

    def test_product_state(self):
        w = haar_unitary(2, 9)
        v = np.zeros(4, dtype=complex)
        v[0b01] = 1.0  # |0>|1>
        got = apply_tensor_power(w, v, 2)
        assert np.allclose(got, np.kron(w[:, 0], w[:, 1]))

    def test_norm_preserved(self):
        rng = np.random.default_rng(3)
        v = rng.standard_normal(27) + 1j * rng.standard_normal(27)
        v /= np.linalg.norm(v)
        w = haar_unitary(3, 1)
        assert abs(np.linalg.norm(apply_tensor_power(w, v, 3)) - 1) < 1e-10

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            apply_tensor_power(np.eye(2), np.zeros(5), 2)


class TestCGEmbedding:
    def test_qubit_projections(self):
        recs = verify_cg_embedding(2, 4)
        assert recs[0].alpha_proj == pytest.approx(0.8, abs=1e-10)
        assert recs[0].beta_proj == pytest.approx(0.2, abs=1e-10)
        assert recs[1].alpha_proj == pytest.approx(1.0, abs=1e-10)
        assert recs[1].beta_proj == 0.0
        assert all(r.alpha_residual < 1e-8 and r.beta_residual < 1e-8 for r in recs)

    def test_qutrit_projections(self):
        recs = verify_cg_embedding(3, 6)
        assert recs[0].alpha_proj == pytest.approx(6 / 7, abs=1e-10)
        assert recs[0].beta_proj == pytest.approx(1 / 7, abs=1e-10)
        for rec in recs:
            assert rec.alpha_proj + rec.beta_proj == pytest.approx(1.0, abs=1e-8)

    def test_choice_independence(self):
        for pick in ("first", "last"):
            recs = verify_cg_embedding(2, 4, pick=pick)
            assert all(
                r.alpha_residual < 1e-8 and r.beta_residual < 1e-8 for r in recs
            )

    def test_capacity_covers_grown_system(self):
        with pytest.raises(CapacityError):
            verify_cg_embedding(4, 8)  # 4^9 exceeds the dense cap


class TestMonteCarlo:
    def test_qubit_agreement(self):
        est = mc_expected_fidelity(2, 4, 20_000, seed=42)
        assert abs(est.mean - 0.875) <= 3 * est.stderr
        assert est.samples == 20_000

    def test_total_probability(self):
        est = mc_total_probability(2, 4, 20_000, seed=42)
        assert abs(est.mean - 1.0) <= 3 * est.stderr

    def test_single_term_probe_total_probability(self):
        probe = np.array([1.0, 0.0])
        est = mc_total_probability(2, 4, 20_000, seed=1, probe=probe)
        assert abs(est.mean - 1.0) <= 3 * est.stderr

    def test_seed_consistency(self):
        a = mc_expected_fidelity(2, 4, 10_000, seed=1)
        b = mc_expected_fidelity(2, 4, 10_000, seed=2)
        joint = math.hypot(a.stderr, b.stderr)
        assert abs(a.mean - b.mean) <= 5 * joint

    def test_deterministic_under_seed(self):
        a = mc_estimates(2, 4, 1_000, seed=9)
        b = mc_estimates(2, 4, 1_000, seed=9)
        assert a == b

    def test_randomized_target_agrees(self):
        direct = mc_expected_fidelity(2, 4, 20_000, seed=5)
        twisted = mc_expected_fidelity(2, 4, 20_000, seed=6, randomize_target=True)
        joint = math.hypot(direct.stderr, twisted.stderr)
        assert abs(direct.mean - twisted.mean) <= 5 * joint

    def test_basis_choice_independence(self):
        first = extract_gt_vectors(2, 4, pick="first")
        last = extract_gt_vectors(2, 4, pick="last")
        a = mc_expected_fidelity(2, 4, 20_000, seed=3, vectors=first)
        b = mc_expected_fidelity(2, 4, 20_000, seed=3, vectors=last)
        joint = math.hypot(a.stderr, b.stderr)
        assert abs(a.mean - b.mean) <= 3 * joint

    def test_rejects_few_samples(self):
        with pytest.raises(ValueError):
            mc_expected_fidelity(2, 4, 99, seed=0)

    def test_matches_analytic_value_qutrit(self):
        est = mc_expected_fidelity(3, 6, 20_000, seed=42)
        assert abs(est.mean - float(expected_fidelity(3, 6))) <= 3 * est.stderr


class TestIsotypicStructure:
    def test_cross_overlaps_vanish(self):
        vs = extract_gt_vectors(2, 4)
        for seed in range(100):
            u = haar_unitary(2, seed)
            rotated = apply_tensor_power(u, vs.vectors[1], 4)
            assert abs(np.vdot(vs.vectors[0], rotated)) < 1e-8

    def test_tensor_power_norms(self):
        vs = extract_gt_vectors(3, 6)
        u = haar_unitary(3, 4)
        for v in vs.vectors:
            assert abs(np.linalg.norm(apply_tensor_power(u, v, 6)) - 1) < 1e-10
