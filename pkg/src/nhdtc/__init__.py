"""Exact simulation of period-doubled dynamics in two spin chains coupled
by reciprocal or non-reciprocal (non-unitary) interchain hopping.

The package builds the one-period drive operator in a full 4**L basis or
the invariant antialigned pair sector (dimension 2**L), evolves states
stroboscopically, extracts biorthogonal quasienergy spectra, and provides
the diagnostics layered on top: imbalance traces, dominant-pair gap
deviations with scaling fits, subharmonic Fourier / KL melting maps, and
parity / time-reversal symmetry certificates.
"""

__version__ = "0.1.0"

from .basis import (FULL, SECTOR, BasisDescriptor, decode, encode,
                    pair_sector_embed, sector_embedding, total_magnetization)
from .diagnostics import (FourierSpectrum, MeltScan, envelope_crossing_period,
                          fourier, kl_divergence, melt_scan, peak_variance,
                          sign_alternates)
from .dynamics import (RAW, RENORMALIZE, ImbalanceTrace, StateVector,
                       evolve_trace, imbalance, init_polarized, init_theta,
                       spin_inversion, step_period)
from .fitting import (FitResult, extract_alpha, fit_exponential_decay,
                      fit_log_exponent, gamma_sweep, gap_deviation_curve)
from .model import (NONRECIPROCAL, RECIPROCAL, DriveParams, FloquetOperator,
                    build_floquet, ising_phases, pair_gate, pair_gate_block,
                    with_protocol)
from .spectral import (BiorthogonalSpectrum, PiPair, ReturnProbability,
                       circular_gap, dtc_lifetime, eigendecompose,
                       find_pi_pair, gap_deviation, overlap_weights,
                       return_probability_check)
from .symmetry import (AntiUnitaryOp, SymmetryReport, build_parity, build_pt,
                       build_time_reversal, hopping_hamiltonian,
                       ising_hamiltonian, magnetization_operator, pt_report,
                       site_operator)
