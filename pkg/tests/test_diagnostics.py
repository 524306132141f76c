import numpy as np
import pytest

from nhdtc.basis import SECTOR
from nhdtc.diagnostics import (MeltScan, envelope_crossing_period,
                               fourier, kl_divergence, melt_scan,
                               peak_variance, sign_alternates)
from nhdtc.dynamics import ImbalanceTrace, evolve_trace, init_polarized
from nhdtc.errors import DimensionError, InvalidParam, NoTransitionDetected
from nhdtc.model import DriveParams, with_protocol


def _trace_from_totals(total, L=2):
    total = np.asarray(total, dtype=float)
    per_site = np.tile(total[:, None], (1, L))
    return ImbalanceTrace(len(total) - 1, per_site, total)


def test_alternating_trace_has_unit_peak_at_pi():
    n = np.arange(40)
    spec = fourier(_trace_from_totals((-1.0) ** n))
    assert spec.freqs[spec.subharmonic_index] == pytest.approx(np.pi)
    assert spec.amp[spec.subharmonic_index] == pytest.approx(1.0, abs=1e-12)
    others = np.delete(spec.amp, spec.subharmonic_index)
    assert others.max() < 1e-12


def test_constant_trace_peaks_at_zero_frequency():
    spec = fourier(_trace_from_totals(np.ones(20)))
    assert spec.amp[0] == pytest.approx(1.0, abs=1e-12)
    assert spec.amp[1:].max() < 1e-12


def test_fourier_rejects_odd_sample_count():
    with pytest.raises(InvalidParam):
        fourier(_trace_from_totals(np.ones(21)))


def test_parseval_identity():
    trace = evolve_trace(DriveParams(L=4, eps_a=0.25, eps_b=0.25),
                         init_polarized(4, SECTOR), 49)
    spec = fourier(trace)
    assert np.sum(spec.amp**2) == pytest.approx(np.mean(trace.total**2),
                                                abs=1e-10)


def test_fourier_scaling_linearity():
    total = np.cos(0.3 * np.arange(30)) * (-1.0) ** np.arange(30)
    base = fourier(_trace_from_totals(total))
    scaled = fourier(_trace_from_totals(-2.5 * total))
    assert np.abs(scaled.amp - 2.5 * base.amp).max() < 1e-12
    assert np.abs(scaled.coef + 2.5 * base.coef).max() < 1e-12


def test_total_spectrum_is_site_average_of_complex_transforms():
    trace = evolve_trace(DriveParams(L=5, eps_a=0.3, eps_b=-0.3),
                         init_polarized(5, SECTOR), 59)
    spec = fourier(trace)
    site_average = spec.per_site_coef.mean(axis=1)
    assert np.abs(np.abs(site_average) - spec.amp).max() < 1e-12


def test_dominant_peak_stays_subharmonic_in_the_ordered_phase():
    params = with_protocol(DriveParams(L=8), "reciprocal", 0.1)
    trace = evolve_trace(params, init_polarized(8, SECTOR), 99)
    spec = fourier(trace)
    assert int(np.argmax(spec.amp)) == spec.subharmonic_index


def test_kl_divergence_vanishes_for_identical_spectra():
    trace = evolve_trace(DriveParams(L=3, eps_a=0.2, eps_b=0.2),
                         init_polarized(3, SECTOR), 19)
    spec = fourier(trace)
    assert np.abs(kl_divergence(spec, spec)).max() == 0.0


def test_kl_divergence_grid_mismatch():
    a = fourier(_trace_from_totals(np.ones(20)))
    b = fourier(_trace_from_totals(np.ones(22)))
    with pytest.raises(DimensionError):
        kl_divergence(a, b)


def _summed_kl(protocol, eps, L=8, n=99):
    reference = fourier(evolve_trace(DriveParams(L=L),
                                     init_polarized(L, SECTOR), n))
    params = with_protocol(DriveParams(L=L), protocol, eps)
    spec = fourier(evolve_trace(params, init_polarized(L, SECTOR), n))
    return float(np.sum(kl_divergence(spec, reference)))


def test_kl_grows_with_imperfection():
    values = [_summed_kl("reciprocal", eps) for eps in (0.1, 0.3, 0.5)]
    assert values[0] < values[1] < values[2]


def test_nonreciprocal_kl_smaller_at_equal_imperfection():
    assert _summed_kl("nonreciprocal", 0.3) < _summed_kl("reciprocal", 0.3)


def test_peak_variance_zero_for_ideal_drive():
    trace = evolve_trace(DriveParams(L=6), init_polarized(6, SECTOR), 99)
    assert peak_variance(fourier(trace)) == 0.0


def test_peak_variance_small_far_beyond_melting():
    near = peak_variance(fourier(evolve_trace(
        with_protocol(DriveParams(L=8), "reciprocal", 0.4),
        init_polarized(8, SECTOR), 99)))
    far = peak_variance(fourier(evolve_trace(
        with_protocol(DriveParams(L=8), "reciprocal", 0.65),
        init_polarized(8, SECTOR), 99)))
    assert far < 0.05 * near


def test_envelope_crossing_and_alternation_helpers():
    n = np.arange(30)
    clean = (-1.0) ** n
    assert sign_alternates(clean)
    assert envelope_crossing_period(clean) is None
    beating = (-1.0) ** n * np.cos(0.1 * n)
    assert envelope_crossing_period(beating) == 16  # cos crosses at 0.1 n = pi/2
    assert not sign_alternates(beating)
    assert sign_alternates(beating, 15)


def test_melt_scan_detects_ordering_of_transitions():
    base = DriveParams(L=6)
    grid = np.round(np.arange(0.02, 0.62, 0.02), 10)
    scan_h = melt_scan(base, grid, protocol="reciprocal", n_samples=100)
    scan_nh = melt_scan(base, grid, protocol="nonreciprocal", n_samples=100)
    assert isinstance(scan_h, MeltScan)
    assert scan_nh.eps_c > scan_h.eps_c
    assert np.all(scan_h.variance >= 0.0)
    # rows against the eps = 0 reference vanish when the drive is ideal
    ideal = melt_scan(base, (0.0, 0.3, 0.5), protocol="reciprocal",
                      n_samples=60)
    assert np.abs(ideal.kl[0]).max() == 0.0


def test_melt_scan_rejects_flat_curves():
    # a grid confined to the variance plateau shows no usable peak
    base = DriveParams(L=8)
    with pytest.raises(NoTransitionDetected):
        melt_scan(base, (0.36, 0.38, 0.40, 0.42), protocol="reciprocal",
                  n_samples=100)


def test_melt_scan_validates_grid():
    with pytest.raises(InvalidParam):
        melt_scan(DriveParams(L=4), (0.3, 0.2, 0.1), protocol="reciprocal")
    with pytest.raises(InvalidParam):
        melt_scan(DriveParams(L=4), (0.1, 0.2), protocol="reciprocal")


def test_melt_scan_parallel_matches_serial():
    base = DriveParams(L=5)
    grid = np.round(np.arange(0.05, 0.65, 0.05), 10)
    serial = melt_scan(base, grid, protocol="nonreciprocal", n_samples=60)
    parallel = melt_scan(base, grid, protocol="nonreciprocal", n_samples=60,
                         workers=2)
    assert np.array_equal(serial.variance, parallel.variance)
    assert serial.eps_c == parallel.eps_c
