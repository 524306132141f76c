import math

import numpy as np
import pytest

from nhdtc.basis import FULL, SECTOR, BasisDescriptor, sector_embedding
from nhdtc.dynamics import (RAW, StateVector, evolve_trace, imbalance,
                            init_polarized, init_theta, spin_inversion,
                            step_period)
from nhdtc.errors import DimensionError, InvalidParam
from nhdtc.model import DriveParams, FloquetOperator, with_protocol


def test_init_polarized_amplitudes():
    full = init_polarized(2, FULL)
    assert full.amps[0b0011] == 1.0
    assert np.count_nonzero(full.amps) == 1
    per_site, total = imbalance(full)
    assert total == 1.0
    assert np.all(per_site == 1.0)


def test_polarized_constructions_agree_under_embedding():
    for L in (1, 3):
        full = init_polarized(L, FULL)
        sector = init_polarized(L, SECTOR)
        assert np.abs(full.amps[sector_embedding(L)] - sector.amps).max() == 0.0


def test_init_theta_limits():
    L = 3
    assert np.abs(init_theta(L, 0.0).amps - init_polarized(L).amps).max() < 1e-15
    partner = spin_inversion(init_polarized(L))
    rotated = init_theta(L, math.pi / 2)
    overlap = np.vdot(partner.amps, rotated.amps)
    assert abs(abs(overlap) - 1.0) < 1e-14  # equal up to sign
    assert np.sum(np.abs(init_theta(3, 0.3).amps) ** 2) == pytest.approx(1.0)


def test_init_theta_range_check():
    with pytest.raises(InvalidParam):
        init_theta(2, -0.01)
    with pytest.raises(InvalidParam):
        init_theta(2, math.pi / 2 + 0.01)


def test_theta_state_imbalance_is_cos_2theta():
    for theta in (0.0, math.pi / 8, math.pi / 5):
        _, total = imbalance(init_theta(3, theta))
        assert total == pytest.approx(math.cos(2 * theta), abs=1e-12)


def test_state_vector_validation():
    desc = BasisDescriptor(2, FULL)
    with pytest.raises(InvalidParam):
        StateVector(desc, np.zeros(desc.dim, dtype=complex), "sometimes")
    with pytest.raises(DimensionError):
        StateVector(desc, np.zeros(3, dtype=complex))


def test_ideal_step_reaches_partner():
    state = init_polarized(3)
    op = FloquetOperator(DriveParams(L=3), state.desc)
    partner = spin_inversion(state)
    stepped = step_period(state, op)
    assert abs(np.vdot(partner.amps, stepped.amps)) == pytest.approx(1.0)


def test_unitary_drive_preserves_norm_without_renormalization():
    state = init_polarized(4, SECTOR, norm_policy=RAW)
    op = FloquetOperator(DriveParams(L=4, eps_a=0.2, eps_b=0.2), state.desc)
    for _ in range(10):
        state = step_period(state, op)
    assert np.linalg.norm(state.amps) == pytest.approx(1.0, abs=1e-12)


def test_step_period_basis_mismatch():
    state = init_polarized(3, SECTOR)
    op = FloquetOperator(DriveParams(L=3), BasisDescriptor(3, FULL))
    with pytest.raises(DimensionError):
        step_period(state, op)


def test_sector_evolution_matches_full_evolution():
    # dual-representation oracle: 20 periods of a non-unitary drive
    params = DriveParams(L=4, eps_a=0.1, eps_b=-0.1)
    full = init_polarized(4, FULL)
    sector = init_polarized(4, SECTOR)
    op_full = FloquetOperator(params, full.desc)
    op_sector = FloquetOperator(params, sector.desc)
    embedded = sector_embedding(4)
    for _ in range(20):
        full = step_period(full, op_full)
        sector = step_period(sector, op_sector)
        assert np.abs(full.amps[embedded] - sector.amps).max() < 1e-10
    outside = np.setdiff1d(np.arange(full.desc.dim), embedded)
    assert np.abs(full.amps[outside]).max() == 0.0


def test_ideal_trace_alternates_exactly():
    for L in (2, 5):
        trace = evolve_trace(DriveParams(L=L), init_polarized(L), 12)
        assert np.array_equal(trace.total, (-1.0) ** np.arange(13))
        assert np.array_equal(trace.per_site,
                              np.outer((-1.0) ** np.arange(13), np.ones(L)))


def test_trace_total_is_site_mean_and_bounded():
    params = DriveParams(L=5, eps_a=0.3, eps_b=-0.3)
    trace = evolve_trace(params, init_polarized(5, SECTOR), 30)
    assert np.abs(trace.total - trace.per_site.mean(axis=1)).max() < 1e-12
    assert np.abs(trace.per_site).max() <= 1.0 + 1e-12


def test_raw_and_renormalized_traces_agree():
    # measurements are taken in the normalized state, so the policies give
    # identical observables for unitary and non-unitary drives alike
    for eps_a, eps_b in ((0.2, 0.2), (0.25, -0.25)):
        params = DriveParams(L=4, eps_a=eps_a, eps_b=eps_b)
        renorm = evolve_trace(params, init_polarized(4, SECTOR), 25)
        raw = evolve_trace(params,
                           init_polarized(4, SECTOR, norm_policy=RAW), 25)
        assert np.abs(renorm.total - raw.total).max() < 1e-10


def test_inversion_partner_trace_negates_for_reciprocal_drive():
    for eps in (0.0, 0.15):
        params = DriveParams(L=4, eps_a=eps, eps_b=eps)
        state = init_polarized(4, SECTOR)
        forward = evolve_trace(params, state, 20)
        backward = evolve_trace(params, spin_inversion(state), 20)
        assert np.abs(forward.total + backward.total).max() < 1e-10


def test_magnetization_is_conserved_along_trace():
    params = DriveParams(L=3, eps_a=0.3, eps_b=-0.2)
    state = init_polarized(3, FULL)
    op = FloquetOperator(params, state.desc)
    desc = state.desc
    idx = np.arange(desc.dim)
    mags = np.array([bin(i).count("1") * 2 - 2 * desc.L for i in idx])
    for _ in range(10):
        state = step_period(state, op)
        prob = np.abs(state.amps) ** 2
        assert abs(float(mags @ prob)) < 1e-10


def test_moderate_imperfections_keep_period_doubling():
    # reciprocal drive at eps = 0.1 and nonreciprocal at eps = 0.3 both
    # alternate sign for at least 50 periods at L = 8
    for protocol, eps in (("reciprocal", 0.1), ("nonreciprocal", 0.3)):
        params = with_protocol(DriveParams(L=8), protocol, eps)
        trace = evolve_trace(params, init_polarized(8, SECTOR), 50)
        assert np.all(trace.total[1:] * trace.total[:-1] < 0.0)


def test_evolve_trace_rejects_zero_periods():
    with pytest.raises(InvalidParam):
        evolve_trace(DriveParams(L=2), init_polarized(2), 0)
