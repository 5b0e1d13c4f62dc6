"""Sweep engine: turn a SweepConfig into a deterministic CSV table."""

from __future__ import annotations

import io
import math
import sys
import warnings
from dataclasses import dataclass

import numpy as np

from . import fock, gaussian
from .config import ConfigError, SweepConfig
from .params import (
    MHZ,
    PhysicalParams,
    Regime,
    classify_regime,
    couplings_from_p,
    derive_couplings,
    validate_dispersive,
)
from .scattering import transfer


class ValidityError(RuntimeError):
    """Physical parameters violate the dispersive conditions beyond repair."""


@dataclass
class Table:
    header: list[str]
    rows: list[list]
    comments: list[str]

    def column(self, name: str) -> np.ndarray:
        i = self.header.index(name)
        return np.array([row[i] for row in self.rows], dtype=float)


def physical_params(cfg: SweepConfig) -> PhysicalParams:
    required = ("omega_mhz", "g_mhz", "delta_one_mhz", "delta_two_mhz", "k_pump", "k_quantum", "alpha0")
    missing = [k for k in required if getattr(cfg, k) is None]
    if missing:
        raise ConfigError(f"physical mode needs {', '.join(missing)}")
    try:
        return PhysicalParams(
            omega_rabi=cfg.omega_mhz * MHZ,
            g_coupling=cfg.g_mhz * MHZ,
            delta_one=cfg.delta_one_mhz * MHZ,
            delta_two=cfg.delta_two_mhz * MHZ,
            k_pump=cfg.k_pump,
            k_quantum=cfg.k_quantum,
            alpha0=cfg.alpha0,
            length=(cfg.length_m or 0.0) * cfg.alpha0,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def resolve_couplings(cfg: SweepConfig) -> tuple[float, float, list[str]]:
    """Dimensionless (chi, sigma) from explicit values, from P, or from physical inputs."""
    notes: list[str] = []
    if cfg.chi is not None:
        return cfg.chi, cfg.sigma, notes
    if cfg.p is not None:
        if cfg.p == 0:
            raise ConfigError("p: P = 0 has no cross coupling; give chi and sigma instead")
        chi, sigma = couplings_from_p(cfg.p)
        return chi, sigma, notes
    if cfg.uses_physical:
        phys = physical_params(cfg)
        coup = derive_couplings(phys)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            report = validate_dispersive(phys, cfg.n_max, cfg.threshold)
        notes.append(
            f"dispersive ratios |W/Delta|={_fmt(report.pump_ratio)} "
            f"g*sqrt(n)*W/|Delta*delta|={_fmt(report.photon_ratio)} "
            f"{'pass' if report.passed else 'FAIL'}"
        )
        if max(report.pump_ratio, report.photon_ratio) >= 1.0:
            raise ValidityError("dispersive conditions violated: a ratio is >= 1")
        if not report.passed:
            print("warning: " + notes[-1], file=sys.stderr)
        if coup.p_param is None:
            raise ConfigError("k_pump == k_quantum gives delta_k = 0 and an undefined P; give chi and sigma instead")
        notes.append(f"P={_fmt(coup.p_param)}")
        return coup.chi, coup.sigma, notes
    raise ConfigError("need p, chi+sigma, or physical parameters")


def _grid(cfg: SweepConfig) -> np.ndarray:
    start, stop, points = cfg.grid
    return np.linspace(start, stop, points)


def _lengths(chi: float, sigma: float, sl: np.ndarray) -> np.ndarray:
    if classify_regime(chi, sigma) is Regime.BOUNDARY:
        raise ConfigError("chi^2 == sigma^2: the |s|L axis is degenerate")
    s_abs = math.sqrt(abs((chi - sigma) * (chi + sigma)))
    return sl / s_abs


def _amplitudes(cfg: SweepConfig) -> Table:
    chi, sigma, notes = resolve_couplings(cfg)
    if cfg.alpha == 0:
        raise ConfigError("alpha: amplitudes are normalised by |alpha|^2 and need alpha != 0")
    mode_b = gaussian.ModeSpec.squeezed(cfg.r) if cfg.r > 0 else gaussian.ModeSpec.vacuum()
    spec = gaussian.InputSpec(gaussian.ModeSpec.coherent(cfg.alpha), mode_b)
    a0 = abs(cfg.alpha) ** 2
    sl = _grid(cfg)
    rows = []
    for x, length in zip(sl, _lengths(chi, sigma, sl)):
        out_a, out_b = gaussian.amplitudes(spec, transfer(chi, sigma, length))
        rows.append([x, out_a / a0, out_b / a0])
    return Table(["sL", "A_a/A0", "A_b/A0"], rows, notes)


def _quadratures(cfg: SweepConfig) -> Table:
    chi, sigma, notes = resolve_couplings(cfg)
    sl = _grid(cfg)
    header = ["sL", "VarX_a", "VarX_b", "VarY_a", "VarY_b"]
    if cfg.r > 0:
        header += ["transfer_a", "transfer_b"]
    state_in = gaussian.make_state(gaussian.coherent_squeezed_input(cfg.alpha, cfg.r))
    rows = []
    for x, length in zip(sl, _lengths(chi, sigma, sl)):
        m = transfer(chi, sigma, length)
        xa, ya, xb, yb = gaussian.quadrature_variances_closed(m, cfg.r)
        row = [x, xa, xb, ya, yb]
        if cfg.r > 0:
            row += list(gaussian.squeezing_transfer(gaussian.apply_scattering(state_in, m), cfg.r))
        rows.append(row)
    return Table(header, rows, notes)


def _entanglement(cfg: SweepConfig) -> Table:
    chi, sigma, notes = resolve_couplings(cfg)
    sl = _grid(cfg)
    rows = []
    for x, length in zip(sl, _lengths(chi, sigma, sl)):
        m = transfer(chi, sigma, length)
        q = gaussian.duan_q(m, cfg.r)
        qx = gaussian.duan_q_exact(m, cfg.r)
        rows.append([x, q, int(gaussian.is_entangled(q)), qx, int(gaussian.is_entangled(qx))])
    notes.append("Q: closed form (equals 2*(VarX_a+VarX_b)); Q_cov: Var(X_a+X_b)+Var(Y_a-Y_b)")
    return Table(["sL", "Q", "entangled", "Q_cov", "entangled_cov"], rows, notes)


def _regime_map(cfg: SweepConfig) -> Table:
    rows = []
    for p in _grid(cfg):
        chi, sigma = couplings_from_p(p)
        regime = classify_regime(chi, sigma)
        m = transfer(chi, sigma, cfg.length)
        rows.append([p, regime.value, abs(m.s2) ** 2])
    return Table(["P", "regime", "S2_sq"], rows, [f"length={_fmt(cfg.length)}"])


def _elimination(cfg: SweepConfig) -> Table:
    base = fock.config_from_ratios(cfg.pump_ratio, cfg.photon_ratio, cfg.n_max, detuning_ratio=cfg.detuning_ratio)
    psi = fock.product_state(
        fock.coherent_amplitudes(cfg.alpha, cfg.n_max), fock.coherent_amplitudes(0, cfg.n_max)
    )
    rows = []
    for exponent in _grid(cfg):
        scale = 10.0**exponent
        fc = fock.scaled_config(base, scale)
        times = np.linspace(0.0, fc.beat_period, cfg.samples + 1)[1:]
        results = [fock.elimination_fidelity(fc, psi, t) for t in times]
        rows.append([scale, min(f for f, _ in results), max(l for _, l in results)])
    notes = [
        f"base ratios ({_fmt(cfg.pump_ratio)}, {_fmt(cfg.photon_ratio)}), delta/Delta={_fmt(cfg.detuning_ratio)}",
        "fidelity: minimum over one beat period; leakage: maximum",
    ]
    return Table(["scale", "fidelity", "leakage"], rows, notes)


_BUILDERS = {
    "amplitudes": _amplitudes,
    "quadratures": _quadratures,
    "entanglement": _entanglement,
    "regime_map": _regime_map,
    "elimination": _elimination,
}


def build_table(cfg: SweepConfig) -> Table:
    cfg.validate()
    table = _BUILDERS[cfg.mode](cfg)
    table.comments = [f"mode={cfg.mode}"] + [f"assumption: {a}" for a in cfg.assumption] + table.comments
    return table


def _fmt(value) -> str:
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(int(value))
    text = f"{float(value):.9g}"
    return "0" if text == "-0" else text


def format_csv(table: Table) -> str:
    buf = io.StringIO()
    for c in table.comments:
        buf.write(f"# {c}\n")
    buf.write(",".join(table.header) + "\n")
    for row in table.rows:
        buf.write(",".join(_fmt(v) for v in row) + "\n")
    return buf.getvalue()


def run_sweep(cfg: SweepConfig, output: str | None = None) -> str:
    """Compute the sweep and write it to ``output`` (or ``cfg.output``); returns the CSV text."""
    text = format_csv(build_table(cfg))
    path = output or cfg.output
    if path and path != "-":
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise ConfigError(f"cannot write output {path!r}: {exc}") from None
    return text


@dataclass(frozen=True)
class TransferMax:
    efficiency: float
    p: float
    sl: float
    r: float


def transfer_report(p_values, sl_values, r: float, mode: int = 0) -> TransferMax:
    """Largest squeezing-transfer efficiency into output ``mode`` over a (P, |s|L) grid.

    Grid points on the chi^2 == sigma^2 boundary (P = 1) are skipped since
    the |s|L axis is degenerate there.
    """
    state_in = gaussian.make_state(gaussian.coherent_squeezed_input(1.0, r))
    best = TransferMax(-math.inf, math.nan, math.nan, r)
    sl_values = np.asarray(sl_values, dtype=float)
    for p in p_values:
        chi, sigma = couplings_from_p(p)
        if classify_regime(chi, sigma) is Regime.BOUNDARY:
            continue
        for x, length in zip(sl_values, _lengths(chi, sigma, sl_values)):
            out = gaussian.apply_scattering(state_in, transfer(chi, sigma, length))
            eff = gaussian.squeezing_transfer(out, r)[mode]
            if eff > best.efficiency:
                best = TransferMax(eff, float(p), float(x), r)
    return best
