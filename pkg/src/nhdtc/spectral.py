"""Biorthogonal spectral analysis of the one-period operator.

The dense operator U is generally non-unitary.  Its eigenvalues lambda_k
are written lambda = exp(-decay) * exp(-i*phase) with phase in (-pi, pi];
phase is the (dimensionless) quasienergy and decay vanishes whenever the
spectrum lies on the unit circle.  Right eigenvectors come from a dense
eigensolve; left eigenvectors from the inverse-adjoint relation
left = inv(right_matrix)^H, which makes <L_l|R_k> = delta_lk, completeness
and spectral reconstruction hold to solver precision even through
degenerate clusters.  Norms are then rebalanced so paired left/right
vectors have equal length (the products <L|psi><psi|R> are invariant under
that rescaling).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import BasisDescriptor
from .dynamics import StateVector, spin_inversion
from .errors import DimensionError, NearDefective, WeakPairing
from .model import DriveParams, FloquetOperator

COND_LIMIT = 1e8
DOMINANCE_FLOOR = 0.5
GAP_WINDOW = 0.5

# pairs built from more candidates than this are never dominant
_MAX_CANDIDATES = 64


@dataclass
class BiorthogonalSpectrum:
    """Quasienergies with biorthonormal right/left eigenvector pairs.

    Columns right[:, k] and left[:, k] satisfy <left_k|right_l> = delta_kl;
    sum_k lambda_k |right_k><left_k| reconstructs the operator.
    """

    desc: BasisDescriptor
    eigenvalues: np.ndarray  # (dim,) complex
    phase: np.ndarray        # (dim,) in (-pi, pi]
    decay: np.ndarray        # (dim,) -log|lambda|
    right: np.ndarray        # (dim, dim)
    left: np.ndarray         # (dim, dim)
    condition: float         # 1-norm condition estimate of the eigenbasis

    @property
    def dim(self) -> int:
        return self.desc.dim


@dataclass
class PiPair:
    """Dominant eigenstate pair for a reference state, with its gap."""

    indices: tuple[int, int]
    weights: tuple[complex, complex]
    gap: float        # circular quasienergy distance, in [0, pi]
    deviation: float  # |pi - gap|

    @property
    def weight_sum(self) -> float:
        return abs(self.weights[0]) + abs(self.weights[1])


def eigendecompose(op: FloquetOperator | np.ndarray,
                   desc: BasisDescriptor | None = None, *,
                   cond_limit: float = COND_LIMIT) -> BiorthogonalSpectrum:
    """Full non-Hermitian eigendecomposition with biorthonormalization.

    Raises NearDefective when the eigenbasis condition estimate exceeds
    cond_limit (proximity to an exceptional point).
    """
    if isinstance(op, FloquetOperator):
        matrix = op.as_matrix()
        desc = op.desc
    else:
        matrix = np.asarray(op, dtype=complex)
        if desc is None:
            raise DimensionError("a basis descriptor is required for raw matrices")
    if matrix.shape != (desc.dim, desc.dim):
        raise DimensionError(f"matrix shape {matrix.shape} != dim {desc.dim}")

    eigvals, right = np.linalg.eig(matrix)
    singular = np.linalg.svd(right, compute_uv=False)
    condition = float(singular[0] / singular[-1]) if singular[-1] > 0 else np.inf
    if not np.isfinite(condition) or condition > cond_limit:
        raise NearDefective(
            f"eigenbasis condition estimate {condition:.3g} exceeds "
            f"{cond_limit:.3g}")
    left = np.linalg.inv(right).conj().T

    # equalize paired vector lengths; <L_k|R_k> = 1 is preserved
    scale = np.sqrt(np.linalg.norm(left, axis=0) / np.linalg.norm(right, axis=0))
    right = right * scale
    left = left / scale

    phase = -np.angle(eigvals)
    phase[phase <= -np.pi] += 2.0 * np.pi  # branch (-pi, pi]
    decay = -np.log(np.abs(eigvals))

    order = np.lexsort((decay, phase))
    return BiorthogonalSpectrum(
        desc=desc,
        eigenvalues=eigvals[order],
        phase=phase[order],
        decay=decay[order],
        right=right[:, order],
        left=left[:, order],
        condition=condition,
    )


def overlap_weights(spectrum: BiorthogonalSpectrum,
                    ref: StateVector) -> np.ndarray:
    """Spectral weights A_k = <ref|R_k><L_k|ref>; they sum to <ref|ref>."""
    if ref.desc != spectrum.desc:
        raise DimensionError("reference state and spectrum bases differ")
    bra_right = ref.amps.conj() @ spectrum.right
    left_ket = spectrum.left.conj().T @ ref.amps
    return bra_right * left_ket


def circular_gap(phase_a: float, phase_b: float) -> float:
    """Distance of two quasienergy phases on the circle, reduced to [0, pi]."""
    d = abs(phase_a - phase_b) % (2.0 * np.pi)
    return min(d, 2.0 * np.pi - d)


def find_pi_pair(spectrum: BiorthogonalSpectrum, ref: StateVector, *,
                 dominance_floor: float = DOMINANCE_FLOOR,
                 gap_window: float = GAP_WINDOW) -> PiPair:
    """Dominant pair of eigenstates with a quasienergy gap near pi.

    Among pairs whose circular gap lies within gap_window of pi, picks the
    one maximizing |A_i| + |A_j|.  Raises WeakPairing when no such pair
    exists or the best pair carries less than dominance_floor total weight
    (the melting regime, where pairing is not meaningful).
    """
    weights = overlap_weights(spectrum, ref)
    strength = np.abs(weights)
    order = np.argsort(strength)[::-1]
    heavy = order[: min(len(order), _MAX_CANDIDATES)]
    best = None
    best_sum = -1.0
    for i in heavy:
        for j in order:
            if j == i:
                continue
            if circular_gap(spectrum.phase[i], spectrum.phase[j]) < np.pi - gap_window:
                continue
            # j runs in descending weight: the first qualifying partner is
            # the best one for this i
            if strength[i] + strength[j] > best_sum:
                best_sum = strength[i] + strength[j]
                best = (int(i), int(j))
            break
    if best is None:
        raise WeakPairing(
            f"no eigenstate pair with gap within {gap_window} of pi")
    if best_sum < dominance_floor:
        raise WeakPairing(
            f"dominant pair weight {best_sum:.3f} below floor {dominance_floor}")
    i, j = best
    gap = circular_gap(spectrum.phase[i], spectrum.phase[j])
    return PiPair(
        indices=(i, j),
        weights=(complex(weights[i]), complex(weights[j])),
        gap=gap,
        deviation=abs(np.pi - gap),
    )


def gap_deviation(params: DriveParams, ref: StateVector, **kwargs) -> float:
    """delta_E of the dominant pair for ref under the given drive."""
    op = FloquetOperator(params, ref.desc)
    spectrum = eigendecompose(op)
    return find_pi_pair(spectrum, ref, **kwargs).deviation


def dtc_lifetime(deviation: float) -> float:
    """Periods until the dominant-pair beat carries the initial state to
    its inversion partner: tau = pi / (2 * delta_E)."""
    return np.pi / (2.0 * deviation)


@dataclass
class ReturnProbability:
    """Two-period return/transfer probabilities and their spectral prediction."""

    p_stay: float
    p_swap: float
    predicted_stay: float  # cos^2(delta_E) of the dominant pair
    predicted_swap: float  # sin^2(delta_E)
    pair: PiPair


def return_probability_check(params: DriveParams,
                             ref: StateVector) -> ReturnProbability:
    """Compare |<ref|U^2|ref>|^2 and |<ref~|U^2|ref>|^2 against the
    dominant-pair prediction (cos^2, sin^2) of delta_E.

    Both probabilities are evaluated through the spectral sums
    sum_k lambda_k^2 <.|R_k><L_k|ref>, which equal the direct matrix
    elements by completeness.  Requires a strongly paired reference.
    """
    op = FloquetOperator(params, ref.desc)
    spectrum = eigendecompose(op)
    pair = find_pi_pair(spectrum, ref)
    lam2 = spectrum.eigenvalues**2
    left_ket = spectrum.left.conj().T @ ref.amps
    bra_ref = ref.amps.conj() @ spectrum.right
    bra_tilde = spin_inversion(ref).amps.conj() @ spectrum.right
    p_stay = float(np.abs(np.sum(lam2 * bra_ref * left_ket)) ** 2)
    p_swap = float(np.abs(np.sum(lam2 * bra_tilde * left_ket)) ** 2)
    return ReturnProbability(
        p_stay=p_stay,
        p_swap=p_swap,
        predicted_stay=float(np.cos(pair.deviation) ** 2),
        predicted_swap=float(np.sin(pair.deviation) ** 2),
        pair=pair,
    )
