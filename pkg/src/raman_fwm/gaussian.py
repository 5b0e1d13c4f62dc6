"""Two-mode Gaussian states in the quadrature convention X = (a + a^+)/2, Y = (a - a^+)/2i.

Vacuum variance is 1/4. Phase-space ordering is (X_a, Y_a, X_b, Y_b). Mode a
enters at z = 0, mode b at z = L; after scattering the same slots hold the
output modes a_L and b_0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .scattering import SMatrix, unitarity_defect

VACUUM_VAR = 0.25
UNITARITY_TOL = 1e-8

# symplectic form in this convention: [X, Y] = i/2
_OMEGA = np.kron(np.eye(2), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True)
class ModeSpec:
    """Input state of a single mode: ``vacuum``, ``coherent`` or ``squeezed``."""

    kind: str = "vacuum"
    alpha: complex = 0j
    r: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        if self.kind not in ("vacuum", "coherent", "squeezed"):
            raise ValueError(f"unknown mode kind {self.kind!r}")
        if self.r < 0:
            raise ValueError("squeezing parameter r must be non-negative")

    @classmethod
    def vacuum(cls) -> "ModeSpec":
        return cls("vacuum")

    @classmethod
    def coherent(cls, alpha: complex) -> "ModeSpec":
        return cls("coherent", alpha=complex(alpha))

    @classmethod
    def squeezed(cls, r: float, theta: float = 0.0) -> "ModeSpec":
        return cls("squeezed", r=float(r), theta=float(theta))

    @property
    def photon_number(self) -> float:
        if self.kind == "coherent":
            return abs(self.alpha) ** 2
        if self.kind == "squeezed":
            return math.sinh(self.r) ** 2
        return 0.0

    @property
    def mean_field(self) -> complex:
        return self.alpha if self.kind == "coherent" else 0j

    def moments(self) -> tuple[np.ndarray, np.ndarray]:
        mean = np.array([self.mean_field.real, self.mean_field.imag])
        if self.kind != "squeezed":
            return mean, VACUUM_VAR * np.eye(2)
        # squeezed quadrature axis sits at angle theta/2 from X
        c, s = math.cos(self.theta / 2), math.sin(self.theta / 2)
        rot = np.array([[c, -s], [s, c]])
        diag = np.diag([math.exp(-2 * self.r), math.exp(2 * self.r)])
        return mean, VACUUM_VAR * rot @ diag @ rot.T


@dataclass(frozen=True)
class InputSpec:
    mode_a: ModeSpec = field(default_factory=ModeSpec)
    mode_b: ModeSpec = field(default_factory=ModeSpec)


@dataclass(frozen=True)
class GaussianState:
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).reshape(4)
        cov = np.asarray(self.cov, dtype=float).reshape(4, 4)
        mean.setflags(write=False)
        cov.setflags(write=False)
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    def is_physical(self, tol: float = 1e-12) -> bool:
        """Symmetry plus the uncertainty bound cov + (i/4)*Omega >= 0."""
        if np.max(np.abs(self.cov - self.cov.T)) > 1e-14:
            return False
        eig = np.linalg.eigvalsh(self.cov + 0.25j * _OMEGA)
        return bool(eig.min() >= -tol)

    def purity_det(self) -> float:
        """det(4*cov); equals 1 for pure states."""
        return float(np.linalg.det(4.0 * self.cov))

    def mode_cov(self, mode: int) -> np.ndarray:
        i = 2 * mode
        return self.cov[i : i + 2, i : i + 2]


def make_state(spec: InputSpec) -> GaussianState:
    ma, va = spec.mode_a.moments()
    mb, vb = spec.mode_b.moments()
    cov = np.zeros((4, 4))
    cov[:2, :2] = va
    cov[2:, 2:] = vb
    return GaussianState(np.concatenate([ma, mb]), cov)


def _complex_block(z: complex) -> np.ndarray:
    return np.array([[z.real, -z.imag], [z.imag, z.real]])


def symplectic_matrix(m: SMatrix) -> np.ndarray:
    """Real 4x4 matrix acting on (X_a, Y_a, X_b, Y_b) for the map [[S1, S2], [S2, S1]]."""
    b1, b2 = _complex_block(m.s1), _complex_block(m.s2)
    return np.block([[b1, b2], [b2, b1]])


def check_passive(m: SMatrix, tol: float = UNITARITY_TOL) -> None:
    """Reject pairs for which [[S1, S2], [S2, S1]] is not unitary."""
    defect = unitarity_defect(m)
    cross = abs((m.s1.conjugate() * m.s2).real)
    if defect > tol or 2 * cross > tol:
        raise ValueError(
            f"scattering pair is not unitary (norm defect {defect:.3g}, "
            f"cross term {2 * cross:.3g})"
        )


def apply_scattering(state: GaussianState, m: SMatrix) -> GaussianState:
    check_passive(m)
    sym = symplectic_matrix(m)
    cov = sym @ state.cov @ sym.T
    return GaussianState(sym @ state.mean, 0.5 * (cov + cov.T))


def amplitudes(spec: InputSpec, m: SMatrix) -> tuple[float, float]:
    """Output photon numbers (A_a at z = L, A_b at z = 0) for uncorrelated inputs.

    The interference term from two displaced inputs is kept; it vanishes
    whenever either input has zero mean field.
    """
    na, nb = spec.mode_a.photon_number, spec.mode_b.photon_number
    p1, p2 = abs(m.s1) ** 2, abs(m.s2) ** 2
    fa, fb = spec.mode_a.mean_field, spec.mode_b.mean_field
    beat = fa.conjugate() * fb
    out_a = p1 * na + p2 * nb + 2 * (m.s1.conjugate() * m.s2 * beat).real
    out_b = p2 * na + p1 * nb + 2 * (m.s2.conjugate() * m.s1 * beat).real
    return float(out_a), float(out_b)


def photon_numbers(state: GaussianState) -> tuple[float, float]:
    """<n> per mode read off the moments: VarX + VarY + <X>^2 + <Y>^2 - 1/2."""
    out = []
    for k in (0, 1):
        i = 2 * k
        n = (
            state.cov[i, i]
            + state.cov[i + 1, i + 1]
            + state.mean[i] ** 2
            + state.mean[i + 1] ** 2
            - 0.5
        )
        out.append(float(n))
    return out[0], out[1]


def quadrature_variances_closed(m: SMatrix, r: float, theta: float = 0.0):
    """(VarX_a, VarY_a, VarX_b, VarY_b) for coherent a and squeezed-vacuum b.

    Mode a picks up the squeezed noise through S2, mode b through S1.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    if theta != 0.0:
        raise ValueError("closed forms assume real squeezing (theta = 0); use the covariance path")
    sh2 = math.sinh(r) ** 2
    shch = math.sinh(r) * math.cosh(r)

    def pair(c: complex):
        excess = 2 * abs(c) ** 2 * sh2
        phase = 2 * (c * c).real * shch
        return 0.25 + 0.25 * (excess - phase), 0.25 + 0.25 * (excess + phase)

    xa, ya = pair(m.s2)
    xb, yb = pair(m.s1)
    return xa, ya, xb, yb


def duan_q(m: SMatrix, r: float) -> float:
    """Closed-form entanglement function Q used for the figure curves.

    Q = (1 + sinh^2 r)(|S1|^2 + |S2|^2)
        - (1/2) sinh r cosh r [S1^2 + S2^2 + c.c.]

    This expression equals 2*(VarX_a + VarX_b), not Var(X_a + X_b) +
    Var(Y_a - Y_b); see :func:`duan_q_exact` for the latter.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    norm = abs(m.s1) ** 2 + abs(m.s2) ** 2
    sq = (m.s1 * m.s1 + m.s2 * m.s2).real
    return (1 + math.sinh(r) ** 2) * norm - math.sinh(r) * math.cosh(r) * sq


def duan_q_exact(m: SMatrix, r: float) -> float:
    """Var(X_a + X_b) + Var(Y_a - Y_b) for coherent a and squeezed-vacuum b.

    The cross term involves S1*S2 rather than S1^2 + S2^2.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    norm = abs(m.s1) ** 2 + abs(m.s2) ** 2
    return (1 + math.sinh(r) ** 2) * norm - 2 * math.sinh(r) * math.cosh(r) * (m.s1 * m.s2).real


def is_entangled(q: float) -> bool:
    return q < 1.0


_U = np.array([1.0, 0.0, 1.0, 0.0])
_V = np.array([0.0, 1.0, 0.0, -1.0])


def variances_from_covariance(state: GaussianState):
    d = np.diag(state.cov)
    return float(d[0]), float(d[1]), float(d[2]), float(d[3])


def q_from_covariance(state: GaussianState) -> float:
    """Var(X_a + X_b) + Var(Y_a - Y_b) straight from the covariance matrix."""
    return float(_U @ state.cov @ _U + _V @ state.cov @ _V)


def noise_reduction_db(variance: float) -> float:
    """Noise reduction below vacuum, in dB (positive when squeezed)."""
    return -10.0 * math.log10(variance / VACUUM_VAR)


def squeezing_transfer(state_out: GaussianState, r_in: float) -> tuple[float, float]:
    """Fraction of the input squeezing (in dB) present in each output mode.

    The output reduction is taken along the best quadrature of each mode,
    i.e. the smallest eigenvalue of its 2x2 covariance block. Values are
    negative when a mode ends up noisier than vacuum in every quadrature.
    """
    if r_in <= 0:
        raise ValueError("transfer efficiency needs r > 0")
    ref = noise_reduction_db(VACUUM_VAR * math.exp(-2 * r_in))
    out = []
    for k in (0, 1):
        vmin = np.linalg.eigvalsh(state_out.mode_cov(k))[0]
        out.append(noise_reduction_db(vmin) / ref)
    return out[0], out[1]


def coherent_squeezed_input(alpha: complex, r: float) -> InputSpec:
    """Coherent mode a and squeezed-vacuum mode b."""
    return InputSpec(ModeSpec.coherent(alpha), ModeSpec.squeezed(r))
