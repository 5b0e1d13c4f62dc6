"""Physical parameters, effective couplings and regime classification.

All frequencies are angular (rad/s). The dimensionless couplings are
obtained by dividing by ``c * alpha0`` so that the propagation coordinate is
measured in units of the unperturbed absorption length.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

C_LIGHT = 299_792_458.0
MHZ = 2.0 * math.pi * 1e6  # rad/s per MHz
BOUNDARY_RTOL = 1e-12


class Regime(str, enum.Enum):
    PROPAGATING = "Propagating"
    BANDGAP = "BandGap"
    BOUNDARY = "Boundary"


class DispersiveWarning(UserWarning):
    """Raised (as a warning) when the dispersive-interaction ratios are not small."""


@dataclass(frozen=True)
class PhysicalParams:
    omega_rabi: float
    g_coupling: float
    delta_one: float
    delta_two: float
    k_pump: float
    k_quantum: float
    alpha0: float = 1.0
    c_light: float = C_LIGHT
    length: float = 0.0

    def __post_init__(self):
        if self.delta_one == 0:
            raise ValueError("one-photon detuning delta_one must be nonzero")
        if self.delta_two == 0:
            raise ValueError("two-photon detuning delta_two must be nonzero")
        if not self.alpha0 > 0:
            raise ValueError("alpha0 must be positive")
        if not self.c_light > 0:
            raise ValueError("c_light must be positive")
        if self.length < 0:
            raise ValueError("length must be non-negative")

    @property
    def delta_k(self) -> float:
        return self.k_pump - self.k_quantum


@dataclass(frozen=True)
class Couplings:
    chi0: float
    sigma0: float
    delta_k: float
    chi: float
    sigma: float
    p_param: float | None
    regime: Regime


def classify_regime(chi: float, sigma: float) -> Regime:
    """Classify (chi, sigma) by the sign of chi**2 - sigma**2.

    Equality is decided relative to ``max(chi**2, sigma**2)``.
    """
    chi2, sig2 = chi * chi, sigma * sigma
    scale = max(chi2, sig2)
    if scale == 0.0 or abs(chi2 - sig2) <= BOUNDARY_RTOL * scale:
        return Regime.BOUNDARY
    return Regime.BANDGAP if chi2 < sig2 else Regime.PROPAGATING


def regime_from_p(p: float) -> Regime:
    """Band-gap interval test on P alone: gap iff 1/3 < P < 1."""
    if p in (1.0 / 3.0, 1.0):
        return Regime.BOUNDARY
    return Regime.BANDGAP if 1.0 / 3.0 < p < 1.0 else Regime.PROPAGATING


def couplings_from_p(p: float, scale: float = 1.0) -> tuple[float, float]:
    """Dimensionless (chi, sigma) realising a given P.

    Uses sigma = P*scale and chi = (2P - 1)*scale, i.e. ``scale`` is the
    dimensionless phase mismatch -delta_k/alpha0. Only the ratio
    chi/sigma = 2 - 1/P matters for the scattering pair at fixed |s|L.
    """
    return (2.0 * p - 1.0) * scale, p * scale


def derive_couplings(phys: PhysicalParams) -> Couplings:
    """Effective self-phase and cross couplings of the beamsplitter Hamiltonian."""
    sigma0 = (phys.omega_rabi * phys.g_coupling) ** 2 / (phys.delta_one**2 * phys.delta_two)
    dk = phys.delta_k
    mismatch = dk * phys.c_light
    chi0 = 2.0 * sigma0 - mismatch
    norm = phys.c_light * phys.alpha0
    chi = -chi0 / norm
    sigma = -sigma0 / norm
    p = sigma0 / mismatch if dk != 0 else None
    return Couplings(
        chi0=chi0,
        sigma0=sigma0,
        delta_k=dk,
        chi=chi,
        sigma=sigma,
        p_param=p,
        regime=classify_regime(chi, sigma),
    )


@dataclass(frozen=True)
class DispersiveReport:
    pump_ratio: float
    photon_ratio: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.pump_ratio < self.threshold and self.photon_ratio < self.threshold


def validate_dispersive(phys: PhysicalParams, n_max: int, threshold: float = 0.1) -> DispersiveReport:
    """Check the two small ratios that justify eliminating the excited states.

    ``pump_ratio`` is |W/Delta| with W = 2*Omega, ``photon_ratio`` is
    g*sqrt(n_max)*W/|Delta*delta|. A failing report only warns.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    w = 2.0 * phys.omega_rabi
    r1 = abs(w / phys.delta_one)
    r2 = abs(phys.g_coupling * math.sqrt(n_max) * w / (phys.delta_one * phys.delta_two))
    report = DispersiveReport(r1, r2, threshold)
    if not report.passed:
        warnings.warn(
            f"dispersive conditions not met: |W/Delta|={r1:.3g}, "
            f"g*sqrt(n)*W/|Delta*delta|={r2:.3g} (threshold {threshold})",
            DispersiveWarning,
            stacklevel=2,
        )
    return report
