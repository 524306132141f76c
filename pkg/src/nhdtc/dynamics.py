"""Stroboscopic state evolution and the interchain imbalance observable.

States are complex amplitude vectors over a :class:`~nhdtc.basis.BasisDescriptor`.
Under a non-unitary drive the norm drifts; the default policy renormalizes
once per period, which leaves every expectation value identical to the raw
evolution (measurements are always taken in the unit-normalized state) but
keeps amplitudes in floating-point range over long runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from .basis import FULL, BasisDescriptor, spin_inversion_permutation
from .errors import DegenerateEvolution, DimensionError, InvalidParam
from .model import DriveParams, FloquetOperator

RENORMALIZE = "renormalize"
RAW = "raw"

_NORM_FLOOR = 1e-150


@dataclass
class StateVector:
    desc: BasisDescriptor
    amps: np.ndarray
    norm_policy: str = RENORMALIZE

    def __post_init__(self):
        if self.norm_policy not in (RENORMALIZE, RAW):
            raise InvalidParam(f"unknown norm policy {self.norm_policy!r}")
        if self.amps.shape != (self.desc.dim,):
            raise DimensionError(
                f"amplitude shape {self.amps.shape} != ({self.desc.dim},)")


def init_polarized(L: int, kind: str = FULL,
                   norm_policy: str = RENORMALIZE) -> StateVector:
    """Chain a all up, chain b all down: every pair in its pseudo-up state."""
    desc = BasisDescriptor(L, kind)
    amps = np.zeros(desc.dim, dtype=complex)
    if kind == FULL:
        amps[(1 << L) - 1] = 1.0  # a-bits all set, b-bits clear
    else:
        amps[desc.dim - 1] = 1.0  # all pseudo-spins up
    return StateVector(desc, amps, norm_policy)


def init_theta(L: int, theta: float,
               norm_policy: str = RENORMALIZE) -> StateVector:
    """Product state rotating the polarized pair by theta on every site.

    Site factors are cos(theta)|up> + sin(theta)|down> on chain a and
    -sin(theta)|up> + cos(theta)|down> on chain b; theta = 0 recovers the
    polarized state and theta = pi/2 its global spin-inversion partner (up
    to sign).  Full basis only: the state leaves the pair sector.
    """
    if not 0.0 <= theta <= math.pi / 2:
        raise InvalidParam(f"theta must lie in [0, pi/2], got {theta}")
    desc = BasisDescriptor(L, FULL)
    # per-bit amplitude vectors indexed by bit value (0 = down, 1 = up)
    a_site = np.array([math.sin(theta), math.cos(theta)], dtype=complex)
    b_site = np.array([math.cos(theta), -math.sin(theta)], dtype=complex)
    # kron runs most-significant bit first: b-sites L..1, then a-sites L..1
    amps = reduce(np.kron, [b_site] * L + [a_site] * L)
    return StateVector(desc, amps, norm_policy)


def spin_inversion(state: StateVector) -> StateVector:
    """Global spin flip of both chains (pseudo-spin flip in the sector)."""
    perm = spin_inversion_permutation(state.desc)
    return StateVector(state.desc, state.amps[perm], state.norm_policy)


def step_period(state: StateVector, op: FloquetOperator) -> StateVector:
    """Advance one period: amps <- U @ amps, renormalized per policy."""
    if op.desc != state.desc:
        raise DimensionError("operator and state bases differ")
    amps = op.apply(state.amps)
    if state.norm_policy == RENORMALIZE:
        norm = np.linalg.norm(amps)
        if norm < _NORM_FLOOR:
            raise DegenerateEvolution(
                "period step collapsed the state norm below "
                f"{_NORM_FLOOR}; parameters outside the validated regime")
        amps = amps / norm
    return StateVector(state.desc, amps, state.norm_policy)


@lru_cache(maxsize=16)
def _imbalance_weights(desc: BasisDescriptor) -> np.ndarray:
    """(dim, L) matrix of per-configuration imbalance contributions."""
    idx = np.arange(desc.dim, dtype=np.int64)
    if desc.kind == FULL:
        columns = []
        for j in range(desc.L):
            s_a = 2.0 * ((idx >> j) & 1) - 1.0
            s_b = 2.0 * ((idx >> (desc.L + j)) & 1) - 1.0
            columns.append(0.5 * (s_a - s_b))
    else:
        columns = [2.0 * ((idx >> j) & 1) - 1.0 for j in range(desc.L)]
    return np.column_stack(columns)


def imbalance(state: StateVector) -> tuple[np.ndarray, float]:
    """Per-site and site-averaged interchain imbalance.

    Site value: half the difference of the chain-a and chain-b z
    expectations, evaluated in the unit-normalized state; in the pair
    sector this is the pseudo-spin z expectation.
    """
    prob = np.abs(state.amps) ** 2
    total_weight = prob.sum()
    if total_weight <= 0.0:
        raise DegenerateEvolution("cannot measure a zero-norm state")
    prob = prob / total_weight
    per_site = prob @ _imbalance_weights(state.desc)
    return per_site, float(per_site.mean())


@dataclass
class ImbalanceTrace:
    """Stroboscopic imbalance record: row n holds the state after n periods."""

    n_periods: int
    per_site: np.ndarray  # (n_periods + 1, L)
    total: np.ndarray     # (n_periods + 1,)


def evolve_trace(params: DriveParams, state0: StateVector,
                 n_periods: int) -> ImbalanceTrace:
    """Evolve n_periods full periods, recording the imbalance after each
    (and at n = 0)."""
    if n_periods < 1:
        raise InvalidParam(f"n_periods must be >= 1, got {n_periods}")
    op = FloquetOperator(params, state0.desc)
    L = state0.desc.L
    per_site = np.empty((n_periods + 1, L))
    total = np.empty(n_periods + 1)
    state = state0
    per_site[0], total[0] = imbalance(state)
    for n in range(1, n_periods + 1):
        state = step_period(state, op)
        per_site[n], total[n] = imbalance(state)
    return ImbalanceTrace(n_periods, per_site, total)
