"""Command-line entry point.

Exit codes: 0 success, 2 configuration error, 3 numerical-validity failure.
"""

from __future__ import annotations

import argparse
import sys
import warnings

import numpy as np

from . import __version__
from .config import ConfigError, PRESET_NAMES, parse_config, preset, to_config_text
from .params import MHZ, PhysicalParams, validate_dispersive
from .sweep import ValidityError, run_sweep, transfer_report

EXIT_CONFIG = 2
EXIT_VALIDITY = 3


def _pairs(items: list[str]) -> dict[str, str]:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        key, _, value = item.partition("=")
        out[key.strip()] = value.strip()
    return out


def _emit(text: str, output: str | None) -> None:
    if not output or output == "-":
        sys.stdout.write(text)


def cmd_sweep(args) -> int:
    try:
        with open(args.config, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read {args.config!r}: {exc}") from None
    cfg = parse_config(text, _pairs(args.set))
    output = args.output or cfg.output
    _emit(run_sweep(cfg, output), output)
    return 0


def cmd_preset(args) -> int:
    pre = preset(args.name)
    text = to_config_text(pre.config)
    cfg = parse_config(text, _pairs(args.set))
    if args.print_config:
        sys.stdout.write(to_config_text(cfg))
        return 0
    missing = [k for k in pre.required if getattr(cfg, k) is None]
    if missing:
        raise ConfigError(f"preset {args.name} needs --set for: {', '.join(missing)}")
    output = args.output or cfg.output
    _emit(run_sweep(cfg, output), output)
    return 0


def cmd_validate(args) -> int:
    kv = _pairs(args.params)
    known = {"omega_mhz", "g_mhz", "delta_one_mhz", "delta_two_mhz"}
    unknown = set(kv) - known
    if unknown:
        raise ConfigError(f"unknown keys: {', '.join(sorted(unknown))}")
    missing = known - set(kv)
    if missing:
        raise ConfigError(f"missing keys: {', '.join(sorted(missing))}")
    try:
        vals = {k: float(v) * MHZ for k, v in kv.items()}
        phys = PhysicalParams(
            omega_rabi=vals["omega_mhz"],
            g_coupling=vals["g_mhz"],
            delta_one=vals["delta_one_mhz"],
            delta_two=vals["delta_two_mhz"],
            k_pump=0.0,
            k_quantum=0.0,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = validate_dispersive(phys, args.n_max, args.threshold)
    print(f"pump_ratio={rep.pump_ratio:.9g}")
    print(f"photon_ratio={rep.photon_ratio:.9g}")
    print(f"threshold={rep.threshold:.9g}")
    print("pass" if rep.passed else "fail")
    return 0 if rep.passed else EXIT_VALIDITY


def cmd_transfer(args) -> int:
    p_values = np.linspace(args.p_start, args.p_stop, args.p_points)
    sl_values = np.linspace(0.0, args.sl_stop, args.sl_points)
    best = transfer_report(p_values, sl_values, args.r, mode=0 if args.mode == "a" else 1)
    print(f"max_transfer={best.efficiency:.9g}")
    print(f"P={best.p:.9g}")
    print(f"sL={best.sl:.9g}")
    print(f"r={best.r:.9g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="raman-fwm",
        description="Counterpropagating four-wave mixing: scattering, squeezing and entanglement sweeps.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a sweep from a key=value config file")
    p.add_argument("config")
    p.add_argument("-o", "--output")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("preset", help="run a named preset")
    p.add_argument("name", choices=PRESET_NAMES)
    p.add_argument("-o", "--output")
    p.add_argument("--set", action="append", metavar="KEY=VALUE")
    p.add_argument("--print-config", action="store_true", help="print the resolved config and exit")
    p.set_defaults(func=cmd_preset)

    p = sub.add_parser("validate", help="check the dispersive-interaction ratios (MHz inputs)")
    p.add_argument("params", nargs="+", metavar="KEY=VALUE")
    p.add_argument("--n-max", type=int, default=1)
    p.add_argument("--threshold", type=float, default=0.1)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("transfer", help="maximum squeezing-transfer efficiency over a (P, |s|L) grid")
    p.add_argument("--r", type=float, default=1.0)
    p.add_argument("--p-start", type=float, default=1.0)
    p.add_argument("--p-stop", type=float, default=20.0)
    p.add_argument("--p-points", type=int, default=191)
    p.add_argument("--sl-stop", type=float, default=2 * np.pi)
    p.add_argument("--sl-points", type=int, default=401)
    p.add_argument("--mode", choices=("a", "b"), default="a")
    p.set_defaults(func=cmd_transfer)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValidityError as exc:
        print(f"validity error: {exc}", file=sys.stderr)
        return EXIT_VALIDITY


if __name__ == "__main__":
    sys.exit(main())
