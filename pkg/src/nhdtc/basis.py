"""Bit-level encoding of two-chain spin-1/2 configurations.

A configuration of two chains a and b, each with L sites, is stored in one
integer of 2L bits: bit j (0-based, little-endian) holds site j of chain a
and bit L+j holds site j of chain b, with bit value 1 meaning spin up.
The full space has dimension 4**L.

The interchain hopping conserves the magnetization of every pair (a_j, b_j),
so the states in which all pairs are antialigned span an invariant
2**L-dimensional subspace ("pair sector").  There one pseudo-spin bit per
pair suffices: reduced bit j = 1 means (a_j, b_j) = (up, down) and bit j = 0
means (down, up).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidConfig

FULL = "full"
SECTOR = "sector"

# 4**L must stay below 2**63 so indices fit signed 64-bit arithmetic.
L_MAX = 31


@dataclass(frozen=True)
class BasisDescriptor:
    """State-space label: chain length and full vs pair-sector encoding."""

    L: int
    kind: str = FULL

    def __post_init__(self):
        if not 1 <= self.L <= L_MAX:
            raise InvalidConfig(f"L must be in [1, {L_MAX}], got {self.L}")
        if self.kind not in (FULL, SECTOR):
            raise InvalidConfig(f"unknown basis kind {self.kind!r}")

    @property
    def dim(self) -> int:
        return 4**self.L if self.kind == FULL else 2**self.L

    @property
    def n_bits(self) -> int:
        return 2 * self.L if self.kind == FULL else self.L


def encode(spins) -> int:
    """Map 2L spin values (+1 up / -1 down, chain a sites first) to an index."""
    spins = list(spins)
    if len(spins) % 2 != 0 or not spins:
        raise InvalidConfig(f"expected 2L spin labels, got {len(spins)}")
    if any(s not in (+1, -1) for s in spins):
        raise InvalidConfig("spin labels must be +1 or -1")
    index = 0
    for bit, s in enumerate(spins):
        if s == +1:
            index |= 1 << bit
    return index


def decode(index: int, L: int) -> list[int]:
    """Inverse of :func:`encode`: index to 2L spin values (+1/-1)."""
    if not 0 <= index < 4**L:
        raise IndexError(f"index {index} out of range for L={L}")
    return [1 if (index >> bit) & 1 else -1 for bit in range(2 * L)]


def total_magnetization(index: int, desc: BasisDescriptor) -> int:
    """(number up) - (number down) over both chains, full basis only."""
    if desc.kind != FULL:
        raise InvalidConfig("total_magnetization is defined on the full basis")
    if not 0 <= index < desc.dim:
        raise IndexError(f"index {index} out of range for dim={desc.dim}")
    n_up = int(index).bit_count()
    return 2 * n_up - 2 * desc.L


def pair_sector_embed(reduced_index: int, L: int) -> int:
    """Full-basis index of a pair-sector configuration.

    Reduced bit j = 1 puts pair j in (up, down), bit j = 0 in (down, up);
    the image is the all-pairs-antialigned, zero-magnetization subspace.
    """
    if not 0 <= reduced_index < 2**L:
        raise IndexError(f"reduced index {reduced_index} out of range for L={L}")
    mask = (1 << L) - 1
    a_bits = reduced_index
    b_bits = ~reduced_index & mask
    return a_bits | (b_bits << L)


def sector_embedding(L: int) -> np.ndarray:
    """Full-basis indices of all 2**L pair-sector configurations, in order."""
    reduced = np.arange(2**L, dtype=np.int64)
    mask = (1 << L) - 1
    return reduced | ((~reduced & mask) << L)


def spin_inversion_permutation(desc: BasisDescriptor) -> np.ndarray:
    """Index permutation that flips every spin (both chains).

    In the pair sector the global flip toggles every pseudo-spin.  The
    permutation is an involution: amps[perm] applies it to a state vector.
    """
    mask = desc.dim - 1  # dim is a power of two in both encodings
    return np.arange(desc.dim, dtype=np.int64) ^ mask
