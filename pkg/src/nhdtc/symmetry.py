"""Parity and time-reversal operators and the symmetry certificates.

Two parity variants exist on the two-chain ladder:

* ``site``: reflection j <-> L-1-j within each chain.  This linear
  operator squares to the identity and commutes with both drive phases
  for every (eps_a, eps_b), which certifies a real quasienergy spectrum.
* ``ladder``: point inversion of the whole ladder, i.e. site reflection
  combined with chain exchange.

Time reversal is the antiunitary (product of sigma_y over all spins)
followed by complex conjugation.  It maps each hopping term to its
reverse, so the antiunitary that commutes with the directional-hopping
phase for eps_a != eps_b is the ladder-inversion parity composed with
time reversal; the site-only composition restores reciprocity only up to
an exchange of the two hopping strengths.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce

import numpy as np

from .basis import FULL, BasisDescriptor
from .errors import InvalidParam
from .model import DriveParams, FloquetOperator
from .spectral import eigendecompose

# Single-spin operators in the bit-ordered basis (index 0 = down, 1 = up).
SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, 1.0j], [-1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[-1.0, 0.0], [0.0, 1.0]], dtype=complex)
SIGMA_PLUS = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=complex)   # down -> up
SIGMA_MINUS = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # up -> down

PARITY_SITE = "site"
PARITY_LADDER = "ladder"


def site_operator(op: np.ndarray, chain: str, j: int, L: int) -> np.ndarray:
    """Embed a single-spin operator at site j (0-based) of chain a or b."""
    if chain not in ("a", "b"):
        raise InvalidParam(f"chain must be 'a' or 'b', got {chain!r}")
    if not 0 <= j < L:
        raise InvalidParam(f"site {j} out of range for L={L}")
    bit = j if chain == "a" else L + j
    eye = np.eye(2, dtype=complex)
    # kron runs most-significant bit first
    factors = [op if b == bit else eye for b in range(2 * L - 1, -1, -1)]
    return reduce(np.kron, factors)


def _parity_permutation(L: int, variant: str) -> np.ndarray:
    idx = np.arange(4**L, dtype=np.int64)
    a_bits = [(idx >> j) & 1 for j in range(L)]
    b_bits = [(idx >> (L + j)) & 1 for j in range(L)]
    out = np.zeros_like(idx)
    for j in range(L):
        fa, fb = (a_bits, b_bits) if variant == PARITY_SITE else (b_bits, a_bits)
        out |= fa[L - 1 - j] << j
        out |= fb[L - 1 - j] << (L + j)
    return out


def build_parity(L: int, variant: str = PARITY_SITE) -> np.ndarray:
    """Permutation matrix reflecting site order within each chain.

    variant="ladder" additionally exchanges the chains (point inversion
    of the two-chain ladder).  Either way P @ P is exactly the identity.
    """
    if variant not in (PARITY_SITE, PARITY_LADDER):
        raise InvalidParam(f"unknown parity variant {variant!r}")
    perm = _parity_permutation(L, variant)
    P = np.zeros((4**L, 4**L))
    P[perm, np.arange(4**L)] = 1.0
    return P


@dataclass
class AntiUnitaryOp:
    """W followed by complex conjugation: psi -> W @ conj(psi)."""

    matrix: np.ndarray
    conjugates: bool = True

    def apply(self, amps: np.ndarray) -> np.ndarray:
        return self.matrix @ (np.conj(amps) if self.conjugates else amps)

    def conjugate_operator(self, A: np.ndarray) -> np.ndarray:
        """O A O^{-1} for this operator O."""
        inner = np.conj(A) if self.conjugates else A
        return self.matrix @ inner @ self.matrix.conj().T

    def squared_phase(self) -> complex:
        """O^2 must be a phase times the identity; returns that phase."""
        square = self.matrix @ (np.conj(self.matrix) if self.conjugates
                                else self.matrix)
        phase = square[0, 0]
        if not np.allclose(square, phase * np.eye(square.shape[0]), atol=1e-10):
            raise InvalidParam("operator squared is not proportional to identity")
        return complex(phase)


def build_time_reversal(L: int) -> AntiUnitaryOp:
    """Antiunitary spin flip: sigma_y on every spin of both chains, then
    complex conjugation."""
    W = reduce(np.kron, [SIGMA_Y] * (2 * L))
    return AntiUnitaryOp(W, conjugates=True)


def build_pt(L: int, parity_variant: str = PARITY_LADDER) -> AntiUnitaryOp:
    """Composition of a parity variant with time reversal.

    The ladder variant is the one that commutes with the directional
    hopping for eps_a != eps_b; the site variant does so only in the
    reciprocal case.
    """
    P = build_parity(L, parity_variant)
    T = build_time_reversal(L)
    return AntiUnitaryOp(P @ T.matrix, conjugates=True)


def ising_hamiltonian(params: DriveParams) -> np.ndarray:
    """Dense intrachain phase generator -jz * sum sigma_z sigma_z (open
    boundaries, both chains), full basis."""
    desc = BasisDescriptor(params.L, FULL)
    idx = np.arange(desc.dim, dtype=np.int64)
    L = params.L
    s = [2.0 * ((idx >> b) & 1) - 1.0 for b in range(2 * L)]
    bond_sum = np.zeros(desc.dim)
    for j in range(L - 1):
        bond_sum += s[j] * s[j + 1] + s[L + j] * s[L + j + 1]
    return np.diag(-params.jz * bond_sum).astype(complex)


def hopping_hamiltonian(params: DriveParams) -> np.ndarray:
    """Dense interchain hopping generator, full basis.

    sum_j (J_a sp_j^a sm_j^b + J_b sm_j^a sp_j^b) with couplings
    J_mu = (swap_phase_base / t2) * (1 + eps_mu), so exp(-i * t2 * H)
    reproduces the pair gates at the configured calibration.
    """
    L = params.L
    coupling = params.swap_phase_base / params.t2
    j_a = coupling * (1.0 + params.eps_a)
    j_b = coupling * (1.0 + params.eps_b)
    dim = 4**L
    H = np.zeros((dim, dim), dtype=complex)
    for j in range(L):
        up_a = site_operator(SIGMA_PLUS, "a", j, L)
        dn_a = site_operator(SIGMA_MINUS, "a", j, L)
        up_b = site_operator(SIGMA_PLUS, "b", j, L)
        dn_b = site_operator(SIGMA_MINUS, "b", j, L)
        H += j_a * (up_a @ dn_b) + j_b * (dn_a @ up_b)
    return H


def magnetization_operator(L: int) -> np.ndarray:
    """Dense total sigma_z over both chains, full basis."""
    desc = BasisDescriptor(L, FULL)
    idx = np.arange(desc.dim, dtype=np.int64)
    n_up = np.zeros(desc.dim)
    for b in range(2 * L):
        n_up += (idx >> b) & 1
    return np.diag(2.0 * n_up - 2 * L).astype(complex)


@dataclass
class SymmetryReport:
    """Max-norm symmetry residuals for one parameter point."""

    params: DriveParams
    pt_variant: str
    commutator_ising: float       # ||PT H_z PT^-1 - H_z||
    commutator_hopping: float     # ||PT H_I PT^-1 - H_I||
    parity_commutator: float      # ||[P_site, U_F]||
    parity_square_deviation: float
    magnetization_commutator: float
    max_imag_quasienergy: float

    def to_text(self) -> str:
        lines = [
            f"L: {self.params.L}",
            f"eps_a: {self.params.eps_a!r}",
            f"eps_b: {self.params.eps_b!r}",
            f"pt_variant: {self.pt_variant}",
            f"commutator_ising: {self.commutator_ising:.3e}",
            f"commutator_hopping: {self.commutator_hopping:.3e}",
            f"parity_commutator: {self.parity_commutator:.3e}",
            f"parity_square_deviation: {self.parity_square_deviation:.3e}",
            f"magnetization_commutator: {self.magnetization_commutator:.3e}",
            f"max_imag_quasienergy: {self.max_imag_quasienergy:.3e}",
        ]
        return "\n".join(lines)


def pt_report(params: DriveParams,
              pt_variant: str = PARITY_LADDER) -> SymmetryReport:
    """Evaluate every symmetry certificate at one parameter point.

    Uses the full basis throughout; keep L <= 4 so dense 4**L work stays
    cheap.  The parity checks always use the site-reflection variant (the
    linear operator squaring to one); pt_variant selects the parity
    entering the antiunitary composition.
    """
    desc = BasisDescriptor(params.L, FULL)
    pt = build_pt(params.L, pt_variant)
    h_ising = ising_hamiltonian(params)
    h_hop = hopping_hamiltonian(params)
    u = FloquetOperator(params, desc).as_matrix()
    p_site = build_parity(params.L, PARITY_SITE)
    sz = magnetization_operator(params.L)
    spectrum = eigendecompose(u, desc)
    return SymmetryReport(
        params=params,
        pt_variant=pt_variant,
        commutator_ising=float(
            np.abs(pt.conjugate_operator(h_ising) - h_ising).max()),
        commutator_hopping=float(
            np.abs(pt.conjugate_operator(h_hop) - h_hop).max()),
        parity_commutator=float(np.abs(p_site @ u - u @ p_site).max()),
        parity_square_deviation=float(
            np.abs(p_site @ p_site - np.eye(desc.dim)).max()),
        magnetization_commutator=float(np.abs(sz @ u - u @ sz).max()),
        max_imag_quasienergy=float(np.abs(spectrum.decay).max()),
    )
