"""Input-output scattering pair for the two counterpropagating modes.

The modes obey

    da/dz =  i*chi*a + i*sigma*b
    db/dz = -i*sigma*a - i*chi*b

with a(0) = a_0 and b(L) = b_L given. The outputs are

    a_L = S1*a_0 + S2*b_L
    b_0 = S2*a_0 + S1*b_L
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

SERIES_THRESHOLD = 1e-6


@dataclass(frozen=True)
class SMatrix:
    s1: complex
    s2: complex
    s_param: complex
    length: float

    def as_matrix(self) -> np.ndarray:
        """2x2 complex map (a_0, b_L) -> (a_L, b_0)."""
        return np.array([[self.s1, self.s2], [self.s2, self.s1]], dtype=complex)


IDENTITY = SMatrix(1.0 + 0j, 0j, 0j, 0.0)


def s_param(chi, sigma):
    """Principal square root of chi**2 - sigma**2 as a complex number."""
    chi = np.asarray(chi, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    # factored form keeps the difference exact near the chi**2 == sigma**2 boundary
    s = np.sqrt(((chi - sigma) * (chi + sigma)).astype(complex))
    return s[()] if s.ndim == 0 else s


def _cos_sinc(s, length):
    """cos(sL) and sin(sL)/s with a series branch for small |sL|."""
    sl = s * length
    small = np.abs(sl) < SERIES_THRESHOLD
    x2 = sl * sl
    safe_s = np.where(small, 1.0, s)
    cos_sl = np.where(small, 1.0 - x2 / 2.0 + x2 * x2 / 24.0, np.cos(sl))
    sinc = np.where(
        small,
        length * (1.0 - x2 / 6.0 + x2 * x2 / 120.0),
        np.sin(sl) / safe_s,
    )
    return cos_sl, sinc


def transfer_arrays(chi, sigma, length, *, branch: int = 1):
    """Vectorised closed form returning ``(s1, s2, s)`` arrays.

    ``branch=-1`` evaluates with the negated square root; results are even in
    s so this exists only to test that claim.
    """
    chi = np.asarray(chi, dtype=float)
    sigma = np.asarray(sigma, dtype=float)
    length = np.asarray(length, dtype=float)
    s = branch * np.asarray(s_param(chi, sigma))
    cos_sl, sinc = _cos_sinc(s, length)
    s1 = 1.0 / (cos_sl - 1j * chi * sinc)
    s2 = 1j * s1 * sigma * sinc
    return s1, s2, s


def transfer(chi: float, sigma: float, length: float, *, branch: int = 1) -> SMatrix:
    """Closed-form scattering pair for coupling constants chi, sigma and length L."""
    if length < 0:
        raise ValueError("length must be non-negative")
    s1, s2, s = transfer_arrays(chi, sigma, length, branch=branch)
    return SMatrix(complex(s1), complex(s2), complex(s), float(length))


def unitarity_defect(m: SMatrix) -> float:
    return abs(abs(m.s1) ** 2 + abs(m.s2) ** 2 - 1.0)


class ShootingError(RuntimeError):
    pass


def transfer_shooting(chi: float, sigma: float, length: float, tol: float = 1e-8) -> SMatrix:
    """Scattering pair from direct integration of the mode equations.

    Both basis initial conditions are propagated from z = 0 to L to get the
    fundamental matrix F, then the split boundary conditions are solved:
    b_0 = (b_L - F21*a_0)/F22, so S1 = 1/F22 and S2 = -F21/F22.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if length < 0:
        raise ValueError("length must be non-negative")
    gen = np.array([[1j * chi, 1j * sigma], [-1j * sigma, -1j * chi]])
    if length == 0:
        fund = np.eye(2, dtype=complex)
    else:
        def rhs(_z, y):
            return (gen @ y.reshape(2, 2)).ravel()

        sol = solve_ivp(
            rhs,
            (0.0, float(length)),
            np.eye(2, dtype=complex).ravel(),
            method="DOP853",
            rtol=max(min(tol, 1e-6) * 1e-4, 1e-13),
            atol=1e-15,
        )
        if not sol.success:
            raise ShootingError(sol.message)
        fund = sol.y[:, -1].reshape(2, 2)
    f21, f22 = fund[1, 0], fund[1, 1]
    if abs(f22) < tol * np.linalg.norm(fund):
        raise ShootingError("boundary-value inversion is ill-conditioned")
    s1 = 1.0 / f22
    s2 = -f21 / f22
    return SMatrix(complex(s1), complex(s2), complex(s_param(chi, sigma)), float(length))
