"""Self-contained invariant battery behind the `validate` subcommand.

Each check re-derives a quantity through an independent route (series
matrix exponential, dense restriction, exhaustive enumeration) and
compares at a fixed tolerance, printing one PASS/FAIL line per check.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

from .basis import BasisDescriptor, decode, encode, sector_embedding
from .diagnostics import fourier
from .dynamics import evolve_trace, init_polarized
from .fitting import fit_exponential_decay, fit_log_exponent
from .model import DriveParams, FloquetOperator, pair_gate_block
from .spectral import eigendecompose
from .symmetry import pt_report

_CHECKS = []


def _check(name):
    def register(fn):
        _CHECKS.append((name, fn))
        return fn
    return register


@_check("encode/decode bijection (L=3, exhaustive)")
def _encode_roundtrip() -> float:
    misses = sum(encode(decode(i, 3)) != i for i in range(4**3))
    return float(misses)


@_check("pair gate closed form vs series exponential")
def _gate_vs_expm() -> float:
    worst = 0.0
    for eps_a, eps_b in [(0.0, 0.0), (0.2, 0.2), (0.3, -0.3), (0.25, -0.45)]:
        params = DriveParams(L=1, eps_a=eps_a, eps_b=eps_b)
        gen = params.swap_phase_base * np.array(
            [[0.0, 1.0 + eps_a], [1.0 + eps_b, 0.0]], dtype=complex)
        ref = scipy.linalg.expm(-1j * gen)
        worst = max(worst, float(np.abs(pair_gate_block(params) - ref).max()))
    return worst


@_check("gate sequence vs dense matrix columns (L=3)")
def _gates_vs_dense() -> float:
    params = DriveParams(L=3, eps_a=0.2, eps_b=-0.2)
    op = FloquetOperator(params, BasisDescriptor(3, "full"))
    dense = op.as_matrix()
    worst = 0.0
    for i in range(dense.shape[0]):
        unit = np.zeros(dense.shape[0], dtype=complex)
        unit[i] = 1.0
        worst = max(worst, float(np.abs(op.apply(unit) - dense[:, i]).max()))
    return worst


@_check("pair-sector operator vs restricted full operator (L=3)")
def _sector_vs_full() -> float:
    params = DriveParams(L=3, eps_a=0.1, eps_b=-0.3)
    full = FloquetOperator(params, BasisDescriptor(3, "full")).as_matrix()
    sector = FloquetOperator(params, BasisDescriptor(3, "sector")).as_matrix()
    embedded = sector_embedding(3)
    return float(np.abs(full[np.ix_(embedded, embedded)] - sector).max())


@_check("biorthogonality / completeness / reconstruction (L=4 sector)")
def _spectral_identities() -> float:
    params = DriveParams(L=4, eps_a=0.3, eps_b=-0.3)
    op = FloquetOperator(params, BasisDescriptor(4, "sector"))
    spectrum = eigendecompose(op)
    eye = np.eye(spectrum.dim)
    gram = spectrum.left.conj().T @ spectrum.right
    complete = spectrum.right @ spectrum.left.conj().T
    recon = (spectrum.right * spectrum.eigenvalues) @ spectrum.left.conj().T
    return float(max(np.abs(gram - eye).max(), np.abs(complete - eye).max(),
                     np.abs(recon - op.as_matrix()).max()))


@_check("unitarity iff eps_a == eps_b")
def _unitarity() -> float:
    eye = np.eye(4**2)
    u_eq = FloquetOperator(DriveParams(L=2, eps_a=0.3, eps_b=0.3),
                           BasisDescriptor(2, "full")).as_matrix()
    u_ne = FloquetOperator(DriveParams(L=2, eps_a=0.3, eps_b=-0.3),
                           BasisDescriptor(2, "full")).as_matrix()
    hermitian_defect = float(np.abs(u_eq.conj().T @ u_eq - eye).max())
    nonunitarity = float(np.abs(u_ne.conj().T @ u_ne - eye).max())
    return hermitian_defect if nonunitarity > 0.01 else 1.0


@_check("Fourier Parseval identity (L=4, 40 periods)")
def _parseval() -> float:
    trace = evolve_trace(DriveParams(L=4, eps_a=0.15, eps_b=0.15),
                         init_polarized(4, "sector"), 39)
    spec = fourier(trace)
    lhs = float(np.sum(spec.amp**2))
    rhs = float(np.mean(trace.total**2))
    return abs(lhs - rhs)


@_check("fit recovery on exact synthetic data")
def _fit_recovery() -> float:
    sizes = np.arange(4, 10)
    decay = fit_exponential_decay(
        np.column_stack([sizes, 3.0 * np.exp(-0.8 * sizes)]))
    eps = np.array([0.2, 0.3, 0.4, 0.5])
    slope = fit_log_exponent(
        np.column_stack([eps, 1.5 + 2.0 * np.log(1.0 / eps)]))
    return float(max(abs(decay.params["alpha"] - 0.8),
                     abs(slope.params["beta"] - 2.0)))


@_check("symmetry certificates at (0.3, -0.3), L=3")
def _symmetry() -> float:
    report = pt_report(DriveParams(L=3, eps_a=0.3, eps_b=-0.3))
    return float(max(report.commutator_ising, report.commutator_hopping,
                     report.parity_commutator,
                     report.parity_square_deviation,
                     report.max_imag_quasienergy))


def run_validation(tolerance: float = 1e-10) -> int:
    """Run every registered check; returns a process exit code."""
    failures = 0
    for name, fn in _CHECKS:
        residual = fn()
        ok = residual < tolerance
        failures += 0 if ok else 1
        print(f"{'PASS' if ok else 'FAIL'}  {name}  (residual {residual:.3e})")
    print(f"{len(_CHECKS) - failures}/{len(_CHECKS)} checks passed")
    return 0 if failures == 0 else 1
