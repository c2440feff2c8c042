import cmath
import json
import math

import numpy as np
import pytest

from heckelab.errors import AlgebraMembershipError, SearchFailureError
from heckelab.hecke import pair_for_depth
from heckelab.treefam import TreeShape
from heckelab.witness import (ACCEPT_CEILING, SpectralData, WitnessCertificate,
                              cluster_spectrum, decay_entry, decay_table,
                              fejer_coefficients, haar_convergence_check,
                              kronecker_trace_check, moment_table,
                              root_of_unity_scan, search_witness,
                              selfadjoint_from_parameters,
                              selfadjoint_parameter_layout, spectral_data,
                              unitary_from_selfadjoint, verify_certificate,
                              witness_pair)


class TestUnitaries:
    def test_zero_exponent_gives_the_unit(self, flagship_pair):
        a = flagship_pair.zero("float")
        u = unitary_from_selfadjoint(flagship_pair, a)
        assert np.max(np.abs(u.matrix - np.eye(flagship_pair.size))) < 1e-14
        unit = flagship_pair.unit("float").approx
        assert np.max(np.abs(u.element.approx - unit)) < 1e-14

    def test_scalar_exponent(self, flagship_pair):
        t = 0.73
        a = flagship_pair.unit("float").scaled(t)
        u = unitary_from_selfadjoint(flagship_pair, a)
        expected = flagship_pair.unit("float").scaled(cmath.exp(1j * t))
        assert np.max(np.abs(u.element.approx - expected.approx)) < 1e-12

    def test_random_selfadjoint_exponentials_stay_in_the_algebra(self, flagship_pair):
        layout = selfadjoint_parameter_layout(flagship_pair)
        for seed in range(5):
            rng = np.random.default_rng(seed)
            a = selfadjoint_from_parameters(flagship_pair,
                                            1.5 * rng.standard_normal(len(layout)))
            u = unitary_from_selfadjoint(flagship_pair, a)
            assert u.unitarity_defect <= 1e-10
            assert u.fit_residual <= 1e-8

    def test_rejects_non_selfadjoint_input(self, flagship_pair):
        coef = np.zeros(flagship_pair.dim, dtype=complex)
        coef[1] = 1.0  # star pairs class 1 with itself only if coefficient real
        coef[1] = 1j
        a = flagship_pair.element_from_floats(coef)
        with pytest.raises(ValueError):
            unitary_from_selfadjoint(flagship_pair, a)

    def test_selfadjoint_parameterization_roundtrip(self, flagship_pair):
        layout = selfadjoint_parameter_layout(flagship_pair)
        rng = np.random.default_rng(7)
        a = selfadjoint_from_parameters(flagship_pair,
                                        rng.standard_normal(len(layout)))
        coef = a.coefficients_complex()
        assert np.max(np.abs(coef - np.conj(coef[flagship_pair.star_map]))) < 1e-15


class TestMoments:
    def test_unit_has_constant_moments(self, flagship_pair):
        table, defect = moment_table(np.eye(flagship_pair.size), 32)
        assert np.allclose(table, 1.0)
        assert defect < 1e-15

    def test_scalar_rotation(self, flagship_pair):
        theta = 0.41
        matrix = cmath.exp(1j * theta) * np.eye(flagship_pair.size)
        table, _ = moment_table(matrix, 16)
        expected = np.exp(1j * theta * np.arange(1, 17))
        assert np.max(np.abs(table - expected)) < 1e-12

    def test_moments_bounded_by_one(self, flagship_pair):
        rng = np.random.default_rng(12)
        layout = selfadjoint_parameter_layout(flagship_pair)
        a = selfadjoint_from_parameters(flagship_pair,
                                        2.0 * rng.standard_normal(len(layout)))
        u = unitary_from_selfadjoint(flagship_pair, a)
        table, _ = moment_table(u.matrix, 1000)
        assert np.max(np.abs(table)) <= 1.0 + 1e-8


class TestSearch:
    def test_rejects_commutative_pairs(self):
        with pytest.raises(ValueError):
            search_witness(pair_for_depth(2, 2))

    def test_certificate_bound(self, flagship_certificate):
        cert = flagship_certificate
        assert cert.max_abs_moment <= 1.0 - 1e-6
        assert cert.max_abs_moment <= ACCEPT_CEILING
        assert cert.k_max == 1024

    def test_moments_replay(self, flagship_pair, flagship_certificate):
        cert = flagship_certificate
        u = cert.u_coefficients[flagship_pair.cell_class]
        v = cert.v_coefficients[flagship_pair.cell_class]
        w = u @ v @ u.conj().T @ v.conj().T
        table, _ = moment_table(w, cert.k_max)
        assert np.max(np.abs(table - cert.moments)) < 1e-8

    def test_search_is_deterministic(self, flagship_pair, flagship_certificate):
        again = search_witness(flagship_pair)
        assert json.dumps(again.to_json_dict()) == \
            json.dumps(flagship_certificate.to_json_dict())

    def test_budget_exhaustion_reports_best(self, flagship_pair, monkeypatch):
        import heckelab.witness as witness_module
        monkeypatch.setattr(witness_module, "ACCEPT_CEILING", 1e-9)
        with pytest.raises(SearchFailureError) as info:
            search_witness(flagship_pair, budget=2)
        assert info.value.best_score is not None
        assert info.value.best_score > 1e-9


class TestSpectra:
    def test_weights_sum_to_one(self, flagship_pair, flagship_certificate):
        assert abs(flagship_certificate.weights.sum() - 1.0) < 1e-8
        assert flagship_certificate.weights.min() >= -1e-10

    def test_reconstruction_matches_moments(self, flagship_certificate):
        spec = SpectralData(flagship_certificate.angles, flagship_certificate.weights)
        recon = spec.reconstruct(flagship_certificate.k_max)
        assert np.max(np.abs(recon - flagship_certificate.moments)) < 1e-8

    def test_clustering_preserves_mass(self, flagship_certificate):
        spec = SpectralData(flagship_certificate.angles, flagship_certificate.weights)
        atoms = cluster_spectrum(spec)
        assert abs(atoms.weights.sum() - 1.0) < 1e-12
        assert len(atoms.angles) < len(spec.angles)

    def test_root_scan_reports_distinct_atoms(self, flagship_certificate):
        spec = SpectralData(flagship_certificate.angles, flagship_certificate.weights)
        scan = root_of_unity_scan(spec, 360)
        assert scan["visible_atoms"] >= 2
        assert scan["min_distance"] > 0

    def test_spectral_data_of_diagonal_matrix(self):
        angles = np.array([0.3, -1.2, 2.5])
        matrix = np.diag(np.exp(1j * angles))
        spec = spectral_data(matrix)
        assert spec.offdiagonal_residual < 1e-12
        assert abs(spec.weights.sum() - 1.0) < 1e-12
        # the base vector is the first basis vector, so one weight is 1
        assert np.isclose(max(spec.weights), 1.0)


class TestCertificateSerialization:
    def test_round_trip_is_bit_exact(self, flagship_certificate, tmp_path):
        path = tmp_path / "cert.json"
        flagship_certificate.save(path)
        loaded = WitnessCertificate.load(path)
        assert np.array_equal(loaded.moments, flagship_certificate.moments)
        assert np.array_equal(loaded.u_coefficients,
                              flagship_certificate.u_coefficients)
        assert loaded.tolerances == flagship_certificate.tolerances
        # serialize again: identical bytes
        path2 = tmp_path / "cert2.json"
        loaded.save(path2)
        assert path.read_bytes() == path2.read_bytes()

    def test_rejects_unknown_format(self):
        with pytest.raises(ValueError):
            WitnessCertificate.from_json_dict({"format": "bogus"})


class TestVerification:
    def test_fresh_certificate_verifies(self, flagship_pair, flagship_certificate):
        report = verify_certificate(flagship_certificate, flagship_pair)
        assert report.ok, report.failures

    def test_perturbed_coefficient_fails(self, flagship_pair, flagship_certificate,
                                         tmp_path):
        path = tmp_path / "cert.json"
        flagship_certificate.save(path)
        bad = WitnessCertificate.load(path)
        bad.u_coefficients[2] += 1e-3
        report = verify_certificate(bad, flagship_pair)
        assert not report.ok
        assert {"unitarity-u", "moment-table"} & set(report.failures)

    def test_permuted_basis_fails(self, flagship_pair, flagship_certificate, tmp_path):
        path = tmp_path / "cert.json"
        flagship_certificate.save(path)
        bad = WitnessCertificate.load(path)
        bad.basis = [bad.basis[1], bad.basis[0]] + list(bad.basis[2:])
        report = verify_certificate(bad, flagship_pair)
        assert report.failures == ["basis-order"]

    def test_tampered_moment_fails(self, flagship_pair, flagship_certificate,
                                   tmp_path):
        path = tmp_path / "cert.json"
        flagship_certificate.save(path)
        bad = WitnessCertificate.load(path)
        bad.moments[17] *= 1.001
        report = verify_certificate(bad, flagship_pair)
        assert "moment-table" in report.failures or \
            "spectral-reconstruction" in report.failures

    def test_rebuilds_pair_from_parameters(self, flagship_certificate):
        report = verify_certificate(flagship_certificate)
        assert report.ok


class TestDecay:
    def test_level_one_row_equals_base_moments(self, flagship_certificate):
        shape = TreeShape(2, 2)
        # a level of size 1 reproduces the base moment table
        assert shape.level_size(0) == 1
        k = 5
        assert decay_entry(flagship_certificate, 0, k, shape) == pytest.approx(
            complex(flagship_certificate.moments[k - 1]))

    def test_zero_moment_gives_zero_column(self, flagship_certificate):
        synthetic = WitnessCertificate(
            d=2, l=3, basis=flagship_certificate.basis,
            u_coefficients=flagship_certificate.u_coefficients,
            v_coefficients=flagship_certificate.v_coefficients,
            angles=flagship_certificate.angles,
            weights=flagship_certificate.weights,
            moments=np.zeros(8, dtype=complex),
            max_abs_moment=0.0)
        shape = TreeShape(2, 2)
        for n in range(1, 5):
            assert decay_entry(synthetic, n, 3, shape) == 0

    def test_entries_decrease_along_levels(self, flagship_certificate):
        shape = TreeShape(2, 2)
        for k in (1, 7, 100):
            previous = None
            for n in range(1, 12):
                value = abs(decay_entry(flagship_certificate, n, k, shape))
                if previous is not None:
                    assert value <= previous + 1e-15
                previous = value

    def test_report_reaches_threshold(self, flagship_certificate):
        report = decay_table(flagship_certificate, TreeShape(2, 2), n_max=20)
        assert report.first_level_below is not None
        assert report.first_level_below <= 20
        assert report.max_by_level == sorted(report.max_by_level, reverse=True)

    def test_plain_exponent_column_lags_tensor_column(self, flagship_certificate):
        report = decay_table(flagship_certificate, TreeShape(2, 2), n_max=10)
        for tensor, plain in zip(report.max_by_level, report.max_by_level_plain):
            assert tensor <= plain + 1e-15


class TestCircleAverages:
    def test_constant_polynomial(self, flagship_certificate):
        rows = haar_convergence_check(flagship_certificate, {0: 1.0},
                                      range(1, 6), TreeShape(2, 2))
        for row in rows:
            assert row["deviation"] == 0.0

    def test_single_moment_polynomial(self, flagship_certificate):
        shape = TreeShape(2, 2)
        rows = haar_convergence_check(flagship_certificate, {0: 0.0, 1: 1.0},
                                      range(1, 8), shape)
        for row in rows:
            expected = abs(decay_entry(flagship_certificate, row["n"], 1, shape))
            assert row["deviation"] == pytest.approx(expected)

    def test_fejer_deviations_decrease_below_threshold(self, flagship_certificate):
        coeffs = fejer_coefficients()
        assert coeffs[0] == pytest.approx(0.1)
        assert all(c >= 0 for c in coeffs.values())
        rows = haar_convergence_check(flagship_certificate, coeffs,
                                      range(1, 21), TreeShape(2, 2))
        bounds = [row["bound"] for row in rows]
        assert bounds == sorted(bounds, reverse=True)
        assert rows[-1]["deviation"] < 1e-3
        assert min(row["deviation"] for row in rows) < 1e-3


class TestTensorCrossCheck:
    def test_kronecker_trace_on_s4_d4(self, s4_d4_pair):
        rng = np.random.default_rng(3)
        x = s4_d4_pair.random_exact_element(rng).to_float()
        result = kronecker_trace_check(s4_d4_pair, x)
        assert result["difference"] <= 1e-10

    def test_kronecker_trace_on_a_unitary(self, s4_d4_pair):
        layout = selfadjoint_parameter_layout(s4_d4_pair)
        rng = np.random.default_rng(5)
        a = selfadjoint_from_parameters(s4_d4_pair,
                                        rng.standard_normal(len(layout)))
        u = unitary_from_selfadjoint(s4_d4_pair, a)
        result = kronecker_trace_check(s4_d4_pair, u.element)
        assert result["difference"] <= 1e-10
