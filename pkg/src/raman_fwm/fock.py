"""Truncated Fock-space model of the three-level atom plus two photon modes.

Basis ordering is atom-major: index = atom * D**2 + n_a * D + n_b with
D = n_max + 1 and atom in (a, b, c) -> (0, 1, 2). The pump amplitude W is
held constant (single spatial point), and s = g*(a + b).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.linalg import logm
from scipy.sparse.linalg import expm_multiply
from scipy.special import gammaln

ATOM_A, ATOM_B, ATOM_C = 0, 1, 2
TRUNCATION_WARN = 1e-8
TRUNCATION_FAIL = 1e-4


class TruncationWarning(UserWarning):
    pass


class TruncationError(RuntimeError):
    pass


class NormDriftError(RuntimeError):
    pass


@dataclass(frozen=True)
class FockConfig:
    n_max: int
    w_amp: float
    g_coupling: float
    delta_one: float
    delta_two: float

    def __post_init__(self):
        if int(self.n_max) != self.n_max or self.n_max < 1:
            raise ValueError("n_max must be an integer >= 1")
        if self.delta_one == 0 or self.delta_two == 0:
            raise ValueError("detunings must be nonzero")

    @property
    def dim_mode(self) -> int:
        return self.n_max + 1

    @property
    def dim_photonic(self) -> int:
        return self.dim_mode**2

    @property
    def dim(self) -> int:
        return 3 * self.dim_photonic

    @property
    def kappa(self) -> float:
        """Effective coupling W^2 g^2 / (Delta^2 delta)."""
        return (self.w_amp * self.g_coupling) ** 2 / (self.delta_one**2 * self.delta_two)

    @property
    def beat_period(self) -> float:
        """Period of the single-photon beat, 2*pi over the splitting 2*kappa."""
        return math.pi / abs(self.kappa)


def annihilation(n_max: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, n_max + 1, dtype=float)), 1)


def mode_operators(n_max: int) -> tuple[np.ndarray, np.ndarray]:
    """Annihilators for modes a and b on the photonic two-mode space."""
    ann = annihilation(n_max)
    eye = np.eye(n_max + 1)
    return np.kron(ann, eye), np.kron(eye, ann)


def _projector(atom: int) -> np.ndarray:
    p = np.zeros((3, 3))
    p[atom, atom] = 1.0
    return p


def _transition(to: int, frm: int) -> np.ndarray:
    t = np.zeros((3, 3))
    t[to, frm] = 1.0
    return t


def build_full_hamiltonian(cfg: FockConfig) -> np.ndarray:
    a, b = mode_operators(cfg.n_max)
    eye = np.eye(cfg.dim_photonic)
    s = cfg.g_coupling * (a + b)
    h = (
        -cfg.delta_one * np.kron(_projector(ATOM_C), eye)
        - cfg.delta_two * np.kron(_projector(ATOM_B), eye)
        + cfg.w_amp * np.kron(_transition(ATOM_A, ATOM_C) + _transition(ATOM_C, ATOM_A), eye)
        + np.kron(_transition(ATOM_B, ATOM_C), s.conj().T)
        + np.kron(_transition(ATOM_C, ATOM_B), s)
    )
    return h.astype(complex)


def build_effective_hamiltonian(cfg: FockConfig) -> np.ndarray:
    a, b = mode_operators(cfg.n_max)
    s = a + b
    return (cfg.kappa * s.conj().T @ s).astype(complex)


def beamsplitter_hamiltonian(n_max: int, self_phase: float, cross: float) -> np.ndarray:
    """self_phase*(n_a + n_b) + cross*(a b^+ + a^+ b)."""
    a, b = mode_operators(n_max)
    ad, bd = a.T, b.T
    return (self_phase * (ad @ a + bd @ b) + cross * (a @ bd + ad @ b)).astype(complex)


def evolve(h: np.ndarray, psi0: np.ndarray, t: float, tol: float = 1e-10) -> np.ndarray:
    """Solve i dpsi/dt = H psi by spectral decomposition of the Hermitian H."""
    herm = np.max(np.abs(h - h.conj().T)) if h.size else 0.0
    if herm > 1e-12:
        raise ValueError(f"Hamiltonian is not Hermitian (defect {herm:.3g})")
    energies, vecs = np.linalg.eigh(h)
    coeff = vecs.conj().T @ psi0
    psi = vecs @ (np.exp(-1j * energies * t) * coeff)
    drift = abs(np.vdot(psi, psi).real - np.vdot(psi0, psi0).real)
    if drift > tol:
        raise NormDriftError(f"norm drift {drift:.3g} exceeds {tol:.1g}")
    return psi


# --- photonic states -------------------------------------------------------


def coherent_amplitudes(alpha: complex, n_max: int) -> np.ndarray:
    n = np.arange(n_max + 1)
    log_mag = -0.5 * abs(alpha) ** 2 - 0.5 * gammaln(n + 1)
    if alpha == 0:
        out = np.zeros(n_max + 1, dtype=complex)
        out[0] = 1.0
        return out
    return np.exp(log_mag + n * np.log(complex(alpha)))


def squeezed_vacuum_amplitudes(r: float, theta: float, n_max: int) -> np.ndarray:
    """Number-basis expansion of S(xi)|0> with xi = r*exp(i*theta).

    Convention S(xi) = exp((xi^* a^2 - xi a^+2)/2), which squeezes X for theta = 0.
    """
    out = np.zeros(n_max + 1, dtype=complex)
    t = -np.exp(1j * theta) * math.tanh(r)
    for m in range(n_max // 2 + 1):
        log_c = 0.5 * gammaln(2 * m + 1) - m * math.log(2) - gammaln(m + 1)
        out[2 * m] = t**m * math.exp(log_c)
    return out / math.sqrt(math.cosh(r))


def product_state(psi_a: np.ndarray, psi_b: np.ndarray) -> np.ndarray:
    return np.kron(psi_a, psi_b)


def with_atom(psi_photonic: np.ndarray, atom: int = ATOM_A) -> np.ndarray:
    out = np.zeros(3 * psi_photonic.size, dtype=complex)
    d = psi_photonic.size
    out[atom * d : (atom + 1) * d] = psi_photonic
    return out


def atomic_component(psi: np.ndarray, atom: int) -> np.ndarray:
    d = psi.size // 3
    return psi[atom * d : (atom + 1) * d]


def apply_passive(m, psi_photonic: np.ndarray, n_max: int) -> np.ndarray:
    """Apply the Fock-space unitary U with U^+ (a, b) U = [[S1, S2], [S2, S1]] (a, b)."""
    mat = np.array([[m.s1, m.s2], [m.s2, m.s1]], dtype=complex)
    gen = 1j * logm(mat)
    gen = 0.5 * (gen + gen.conj().T)
    ops = _sparse_mode_operators(n_max)
    h = sum(gen[i, j] * (ops[i].T @ ops[j]) for i in range(2) for j in range(2))
    return expm_multiply(-1j * sparse.csr_matrix(h), psi_photonic)


def _sparse_mode_operators(n_max: int):
    ann = sparse.diags(np.sqrt(np.arange(1, n_max + 1, dtype=float)), 1, format="csr")
    eye = sparse.identity(n_max + 1, format="csr")
    return sparse.kron(ann, eye, format="csr"), sparse.kron(eye, ann, format="csr")


def _cutoff_population(psi_photonic: np.ndarray, n_max: int) -> float:
    d = n_max + 1
    prob = np.abs(psi_photonic.reshape(-1, d, d)) ** 2
    edge = prob[:, -1, :].sum() + prob[:, :, -1].sum() - prob[:, -1, -1].sum()
    return float(edge / prob.sum())


def fock_quadrature_stats(psi: np.ndarray, n_max: int) -> dict:
    """Quadrature moments of a photonic (or atom x photonic) state vector.

    Returns means ``x``/``y``, ``var_x``/``var_y`` and ``n`` per mode (keys
    suffixed ``_a``/``_b``), the 4x4 symmetrised covariance ``cov`` in
    (X_a, Y_a, X_b, Y_b) order and the Duan sum ``q``.
    """
    dph = (n_max + 1) ** 2
    if psi.size == 3 * dph:
        comps = psi.reshape(3, dph)
    elif psi.size == dph:
        comps = psi.reshape(1, dph)
    else:
        raise ValueError("state size does not match n_max")
    pop = _cutoff_population(comps, n_max)
    if pop > TRUNCATION_FAIL:
        raise TruncationError(f"cutoff population {pop:.3g} exceeds {TRUNCATION_FAIL}")
    if pop > TRUNCATION_WARN:
        warnings.warn(f"cutoff population {pop:.3g}", TruncationWarning, stacklevel=2)
    norm = float(np.sum(np.abs(comps) ** 2))

    a, b = _sparse_mode_operators(n_max)
    quads = [
        0.5 * (a + a.T),
        -0.5j * (a - a.T),
        0.5 * (b + b.T),
        -0.5j * (b - b.T),
    ]
    # Q_i psi for every atomic component; truncated operators stay Hermitian so
    # <Q_i Q_j> = <Q_i psi | Q_j psi>
    applied = [[q @ c for c in comps] for q in quads]

    def inner(u, v):
        return sum(np.vdot(x, y) for x, y in zip(u, v)) / norm

    mean = np.array([inner(comps, v).real for v in applied])
    cov = np.empty((4, 4))
    for i in range(4):
        for j in range(i, 4):
            cov[i, j] = cov[j, i] = inner(applied[i], applied[j]).real - mean[i] * mean[j]
    q = cov[0, 0] + cov[2, 2] + 2 * cov[0, 2] + cov[1, 1] + cov[3, 3] - 2 * cov[1, 3]
    n_a = inner([a @ c for c in comps], [a @ c for c in comps]).real
    n_b = inner([b @ c for c in comps], [b @ c for c in comps]).real
    return {
        "x_a": mean[0],
        "y_a": mean[1],
        "x_b": mean[2],
        "y_b": mean[3],
        "var_x_a": cov[0, 0],
        "var_y_a": cov[1, 1],
        "var_x_b": cov[2, 2],
        "var_y_b": cov[3, 3],
        "n_a": n_a,
        "n_b": n_b,
        "cov": cov,
        "q": q,
        "cutoff_population": pop,
    }


def elimination_fidelity(cfg: FockConfig, psi_photonic_0: np.ndarray, t: float) -> tuple[float, float]:
    """Compare full three-level evolution with the effective photonic one.

    Returns ``(fidelity, leakage)``: the overlap of the normalised ground-state
    component of the full state with the effectively evolved state, and the
    population that has left the atomic ground state.
    """
    psi0 = psi_photonic_0 / np.linalg.norm(psi_photonic_0)
    full = evolve(build_full_hamiltonian(cfg), with_atom(psi0), t)
    eff = evolve(build_effective_hamiltonian(cfg), psi0, t)
    ground = atomic_component(full, ATOM_A)
    p_ground = float(np.vdot(ground, ground).real)
    fidelity = abs(np.vdot(eff, ground)) ** 2 / p_ground
    return float(min(fidelity, 1.0)), float(max(1.0 - p_ground, 0.0))


def scaled_config(base: FockConfig, reduction: float) -> FockConfig:
    """Shrink both dispersive ratios by ``reduction`` while also suppressing delta/Delta.

    Delta -> lam^2 Delta, delta -> lam delta, W -> lam W, g -> lam g.
    """
    lam = reduction
    return FockConfig(
        n_max=base.n_max,
        w_amp=base.w_amp * lam,
        g_coupling=base.g_coupling * lam,
        delta_one=base.delta_one * lam**2,
        delta_two=base.delta_two * lam,
    )


def dispersive_ratios(cfg: FockConfig) -> tuple[float, float]:
    """(|W/Delta|, g sqrt(n_max) W / |Delta delta|)."""
    r1 = abs(cfg.w_amp / cfg.delta_one)
    r2 = abs(cfg.g_coupling * math.sqrt(cfg.n_max) * cfg.w_amp / (cfg.delta_one * cfg.delta_two))
    return r1, r2


def config_from_ratios(
    pump_ratio: float,
    photon_ratio: float,
    n_max: int,
    delta_one: float = 1.0,
    detuning_ratio: float = 0.1,
) -> FockConfig:
    """Build a config hitting the requested dispersive ratios exactly.

    ``detuning_ratio`` is delta/Delta.
    """
    delta_two = detuning_ratio * delta_one
    w = pump_ratio * delta_one
    g = photon_ratio * abs(delta_one * delta_two) / (w * math.sqrt(n_max))
    return FockConfig(n_max, w, g, delta_one, delta_two)
