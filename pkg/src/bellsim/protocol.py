"""Composite figures of merit: Bell-state measurement and CNOT truth tables.

Both protocols chain two photon-detection stages (or one stage wrapped in
local operations).  Atom motion during different stages is uncorrelated, so
each stage contributes its own interference-damping factor; the two-stage
sequence therefore dephases through f1 = d - d^2/2 rather than d itself.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gates
from .linalg import elementwise_sqmod


def _check_d(d: float):
    if not 0.0 <= d <= 1.0:
        raise ValueError(f"decoherence level must lie in [0, 1], got {d}")


def _check_xi(xi: float):
    if xi < 0.0:
        raise ValueError(f"scattering ratio must be >= 0, got {xi}")


def two_stage_dephasing(d: float) -> float:
    """Cross-term damping of a prepare-then-measure sequence: d - d^2/2."""
    _check_d(d)
    return d - 0.5 * d * d


def bell_meas_matrix(d: float, xi: float) -> np.ndarray:
    """Probability matrix of preparing a Bell state and measuring it back.

    Symmetric and doubly stochastic: the diagonal is the success probability,
    the anti-diagonal carries the motional error f1, and the remaining
    entries the single-sided double-excitation leaks 2 xi.
    """
    _check_d(d)
    _check_xi(xi)
    f1 = two_stage_dephasing(d)
    diag = 1.0 - f1 + 4.0 * xi**2
    leak = 2.0 * xi
    m = np.array(
        [[diag, leak, leak, f1],
         [leak, diag, f1, leak],
         [leak, f1, diag, leak],
         [f1, leak, leak, diag]])
    return m / (1.0 + 2.0 * xi) ** 2


def bell_meas_fidelity(d: float, xi: float) -> float:
    """Probability of recovering the prepared state; the diagonal of the
    measurement matrix, 1 - (4 xi + f1) / (1 + 2 xi)^2.

    Non-monotone in xi at fixed motion: for d = 0 it dips to 1/2 at
    xi = 1/2 and climbs back because double-double scattering events
    return the pair to its initial state.
    """
    _check_d(d)
    _check_xi(xi)
    f1 = two_stage_dephasing(d)
    return float(1.0 - (4.0 * xi + f1) / (1.0 + 2.0 * xi) ** 2)


def cnot_composite(p1: float, p2: float, xi: float) -> tuple[np.ndarray, np.ndarray]:
    """Both branch matrices of the CNOT sequence at fixed motional phases.

    The first is h1 @ bell(p1, p2) @ h2 (single detected photon), the second
    replaces the Bell operator by the double-excitation branch.
    """
    _check_xi(xi)
    left, right = gates.h1(), gates.h2()
    c1 = left @ gates.bell_matrix(p1, p2) @ right
    c2 = left @ gates.b2_matrix(xi) @ right
    return c1, c2


def cnot_prob_matrix(d: float, xi: float) -> np.ndarray:
    """Motion-averaged CNOT truth table from the composed operators.

    The detected branch decomposes into the two scattering paths
    X e^{i p1} + Y e^{i p2}; its averaged squared moduli get the usual
    (1 - d) cross-term weight.  The double-excitation branch adds
    incoherently and the total is normalized by 1 + 2 xi.
    """
    _check_d(d)
    _check_xi(xi)
    left, right = gates.h1(), gates.h2()
    x = left @ (gates.BRANCH_ATOM1 / np.sqrt(2.0)) @ right
    y = left @ (gates.BRANCH_ATOM2 / np.sqrt(2.0)) @ right
    detected = (np.abs(x) ** 2 + np.abs(y) ** 2
                + 2.0 * (1.0 - d) * (x * y.conj()).real)
    double = elementwise_sqmod(left @ gates.b2_matrix(xi) @ right)
    return (detected + double) / (1.0 + 2.0 * xi)


def cnot_fidelity(d: float, xi: float) -> float:
    """Truth-table fidelity of the conditional CNOT, (1 - d) / (1 + 2 xi)."""
    _check_d(d)
    _check_xi(xi)
    return float((1.0 - d) / (1.0 + 2.0 * xi))


@dataclass(frozen=True)
class FidelityReport:
    """Fidelity together with the probability matrix it was read from."""

    fidelity: float
    prob_matrix: np.ndarray
    d: float
    xi: float


def bell_meas_report(d: float, xi: float) -> FidelityReport:
    return FidelityReport(bell_meas_fidelity(d, xi), bell_meas_matrix(d, xi), d, xi)


def cnot_report(d: float, xi: float) -> FidelityReport:
    return FidelityReport(cnot_fidelity(d, xi), cnot_prob_matrix(d, xi), d, xi)


__all__ = [
    "FidelityReport",
    "bell_meas_fidelity",
    "bell_meas_matrix",
    "bell_meas_report",
    "cnot_composite",
    "cnot_fidelity",
    "cnot_prob_matrix",
    "cnot_report",
    "two_stage_dephasing",
]
