"""Plain-text ``key=value`` sweep configuration and named presets."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

MODES = ("amplitudes", "quadratures", "entanglement", "regime_map", "elimination")
TWO_PI = 2.0 * math.pi

# physical inputs, frequencies in MHz (converted to rad/s downstream)
PHYSICAL_KEYS = (
    "omega_mhz",
    "g_mhz",
    "delta_one_mhz",
    "delta_two_mhz",
    "k_pump",
    "k_quantum",
    "alpha0",
    "length_m",
)


class ConfigError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


@dataclass(frozen=True)
class SweepConfig:
    mode: str
    p: float | None = None
    chi: float | None = None
    sigma: float | None = None
    r: float = 0.0
    alpha: float = 1.0
    grid: tuple[float, float, int] = (0.0, TWO_PI, 401)
    length: float = 1.0
    output: str | None = None
    # elimination sweep
    n_max: int = 8
    pump_ratio: float = 0.05
    photon_ratio: float = 0.01
    detuning_ratio: float = 0.1
    samples: int = 8
    # physical layer
    omega_mhz: float | None = None
    g_mhz: float | None = None
    delta_one_mhz: float | None = None
    delta_two_mhz: float | None = None
    k_pump: float | None = None
    k_quantum: float | None = None
    alpha0: float | None = None
    length_m: float | None = None
    threshold: float = 0.1
    assumption: tuple[str, ...] = field(default_factory=tuple)

    @property
    def uses_physical(self) -> bool:
        return any(getattr(self, k) is not None for k in PHYSICAL_KEYS)

    def validate(self) -> None:
        if self.mode not in MODES:
            raise ConfigError(f"mode must be one of {', '.join(MODES)}, got {self.mode!r}")
        start, stop, points = self.grid
        if points < 2:
            raise ConfigError("grid: points must be >= 2")
        if not (stop > start >= 0):
            raise ConfigError("grid: need stop > start >= 0")
        if self.r < 0:
            raise ConfigError("r: must be >= 0")
        if self.length < 0:
            raise ConfigError("length: must be >= 0")
        if self.n_max < 1:
            raise ConfigError("n_max: must be >= 1")
        if self.samples < 1:
            raise ConfigError("samples: must be >= 1")
        if not self.threshold > 0:
            raise ConfigError("threshold: must be > 0")
        if (self.chi is None) != (self.sigma is None):
            raise ConfigError("chi and sigma must be given together")


def _parse_float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise ValueError("not finite")
    return value


def _parse_int(text: str) -> int:
    return int(text)


def _parse_grid(text: str) -> tuple[float, float, int]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError("expected start, stop, points")
    return (_parse_float(parts[0]), _parse_float(parts[1]), _parse_int(parts[2]))


def _field_parsers():
    parsers = {}
    for f in dataclasses.fields(SweepConfig):
        if f.name in ("mode", "output"):
            parsers[f.name] = str
        elif f.name == "grid":
            parsers[f.name] = _parse_grid
        elif f.name in ("n_max", "samples"):
            parsers[f.name] = _parse_int
        elif f.name == "assumption":
            parsers[f.name] = str
        else:
            parsers[f.name] = _parse_float
    return parsers


_PARSERS = _field_parsers()


def parse_config(text: str, overrides: dict[str, str] | None = None) -> SweepConfig:
    """Parse ``key=value`` lines (``#`` starts a comment) into a validated config.

    ``assumption`` may repeat; every other key may appear once.
    """
    values: dict[str, object] = {}
    notes: list[str] = []
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError("expected key=value", lineno, 1)
        key, _, value = line.partition("=")
        col = raw.index("=") + 2
        entries.append((key.strip(), value.strip(), lineno, col))
    for key, value in (overrides or {}).items():
        entries.append((key.strip(), str(value).strip(), None, None))

    for key, value, lineno, col in entries:
        if key not in _PARSERS:
            raise ConfigError(f"unknown key {key!r}", lineno, 1 if lineno else None)
        try:
            parsed = _PARSERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {value!r} ({exc})", lineno, col) from None
        if key == "assumption":
            notes.append(parsed)
            continue
        if key in values and lineno is not None:
            raise ConfigError(f"duplicate key {key!r}", lineno, 1)
        values[key] = parsed

    if "mode" not in values:
        raise ConfigError("mode is required")
    cfg = SweepConfig(**values, assumption=tuple(notes))
    cfg.validate()
    return cfg


def _format_value(value) -> str:
    if isinstance(value, tuple):
        return ", ".join(_format_value(v) for v in value)
    if isinstance(value, float):
        return repr(value)
    return str(value)


def to_config_text(cfg: SweepConfig) -> str:
    """Serialise a config so that ``parse_config`` returns an equal object."""
    lines = []
    defaults = SweepConfig(mode=cfg.mode)
    for f in dataclasses.fields(SweepConfig):
        value = getattr(cfg, f.name)
        if f.name == "assumption":
            lines.extend(f"assumption={note}" for note in value)
            continue
        if value is None or (f.name != "mode" and value == getattr(defaults, f.name)):
            continue
        lines.append(f"{f.name}={_format_value(value)}")
    return "\n".join(lines) + "\n"


# --- presets ------------------------------------------------------------------

FIGURE_P = {"a": 10.0, "b": 1.1, "c": 0.4}
ASSUME_ALPHA = "alpha=1 assumed (coherent amplitude not stated for the figure)"
ASSUME_R = "r=0.5 assumed (squeezing parameter not stated for the figure)"


@dataclass(frozen=True)
class Preset:
    name: str
    config: SweepConfig
    required: tuple[str, ...] = ()


def _figure_preset(name: str) -> Preset:
    fig, panel = name[3], name[4]
    p = FIGURE_P[panel]
    if fig == "2":
        cfg = SweepConfig(mode="amplitudes", p=p, alpha=1.0, assumption=(ASSUME_ALPHA,))
    elif fig == "3":
        cfg = SweepConfig(
            mode="quadratures", p=p, r=0.5, alpha=1.0, assumption=(ASSUME_R, ASSUME_ALPHA)
        )
    else:
        # extends past 2*pi so the second dip is an interior point of the grid
        cfg = SweepConfig(
            mode="entanglement",
            p=p,
            r=0.5,
            alpha=1.0,
            grid=(0.0, 3.0 * math.pi, 601),
            assumption=(ASSUME_R,),
        )
    return Preset(name, cfg)


SODIUM_REQUIRED = ("g_mhz", "alpha0", "k_pump", "k_quantum")


def _sodium_preset() -> Preset:
    cfg = SweepConfig(
        mode="amplitudes",
        omega_mhz=60.0,
        delta_one_mhz=3000.0,
        delta_two_mhz=50.0,
        length_m=0.1,
        assumption=(
            "sodium D1 estimate: density ~1e12 cm^-3, length ~10 cm",
            "Omega recorded as quoted; half- vs full-Rabi convention unstated",
            "g_mhz, alpha0, k_pump, k_quantum must be supplied by the user",
        ),
    )
    return Preset("sodium_d1", cfg, SODIUM_REQUIRED)


PRESET_NAMES = ("sodium_d1",) + tuple(f"fig{f}{p}" for f in "234" for p in "abc")


def preset(name: str) -> Preset:
    if name not in PRESET_NAMES:
        raise ConfigError(f"unknown preset {name!r}; choose from {', '.join(PRESET_NAMES)}")
    if name == "sodium_d1":
        return _sodium_preset()
    return _figure_preset(name)
