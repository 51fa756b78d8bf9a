"""Command-line front end: declarative configs in, deterministic CSV out.

Configuration is flat ``key = value`` text with dotted section prefixes
(``system.J12_Hz = 15.9``).  Precedence, lowest to highest: built-in
defaults, config file, repeated ``--set KEY=VALUE`` overrides, then the
dedicated flags (``--out``, ``--workers``, ``--steps-per-period``), which
are shorthand for the corresponding ``run.*`` keys.

Exit codes: 0 success, 2 configuration error, 3 runtime failure.
"""

import argparse
import math
import sys
from dataclasses import dataclass, replace
from importlib import resources

import numpy as np

from . import engine as engine_registry
from .analytic import (
    analytic_model,
    pi_pulse_duration,
    validity_metrics,
)
from .constants import gamma_rad_per_s_per_t
from .experiments import (
    amplitude_scan,
    analytic_vs_numeric_report,
    duration_scan,
    frequency_scan,
)
from .hamiltonian import FieldSchedule, SpinSystem, mixing_angles, omega_st, omega_tt
from .propagator import evolve, phip_initial_state

TWO_PI = 2.0 * math.pi

COMMANDS = (
    "info",
    "simulate",
    "scan-duration",
    "scan-frequency",
    "scan-amplitude",
    "report",
)

DEFAULT_OUTPUTS = {
    "simulate": "trajectory.csv",
    "scan-duration": "scan_duration.csv",
    "scan-frequency": "scan_frequency.csv",
    "scan-amplitude": "scan_amplitude.csv",
    "report": "report.csv",
}

#: Scan/trajectory column order; extra observables are appended after these.
CANONICAL_COLUMNS = (
    "parameter",
    "s_polarization",
    "s_polarization_normalized",
    "p_S0beta",
    "p_T0beta",
    "p_Tm1alpha",
    "analytic_prediction",
)


class ConfigError(Exception):
    """Bad configuration; maps to exit code 2."""


@dataclass
class RunConfig:
    """Fully resolved run description (fields in user-facing units)."""

    j12_hz: float
    j13_hz: float
    j23_hz: float
    isotope_i: str
    isotope_s: str
    gamma_i: float
    gamma_s: float
    b_bias_ut: float
    b_wolf_ut: float
    f_wolf_hz: float | None
    phase_rad: float
    tau_s: float | None
    command: str | None
    grid_start: float | None
    grid_stop: float | None
    grid_count: int | None
    grid_list: tuple | None
    steps_per_period: int
    snap_to_period: bool
    workers: int
    sample_stride: int
    engine: str
    out: str | None
    validity_threshold: float

    def spin_system(self) -> SpinSystem:
        try:
            return SpinSystem(
                j12_hz=self.j12_hz,
                j13_hz=self.j13_hz,
                j23_hz=self.j23_hz,
                gamma_i=self.gamma_i,
                gamma_s=self.gamma_s,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def omega_wolf(self) -> float:
        if self.f_wolf_hz is not None:
            return TWO_PI * self.f_wolf_hz
        return omega_st(self.spin_system(), self.b_bias_ut * 1e-6)

    def field_schedule(self, duration: float = 0.0) -> FieldSchedule:
        try:
            return FieldSchedule(
                b_bias=self.b_bias_ut * 1e-6,
                b_wolf_peak=self.b_wolf_ut * 1e-6,
                omega_wolf=self.omega_wolf(),
                phase=self.phase_rad,
                duration=duration,
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def resolve_tau(self) -> float:
        if self.tau_s is not None:
            return self.tau_s
        tau = pi_pulse_duration(self.spin_system(), self.field_schedule())
        if not math.isfinite(tau):
            raise ConfigError(
                "field.tau_s = auto needs a finite pi-pulse duration, but the "
                "analytic transfer vanishes (J13 = J23); set field.tau_s explicitly"
            )
        return tau

    def grid(self, name: str) -> np.ndarray:
        if self.grid_list is not None:
            return np.asarray(self.grid_list, dtype=float)
        if None in (self.grid_start, self.grid_stop, self.grid_count):
            raise ConfigError(
                f"{name} needs a grid: set run.grid or all of "
                "run.grid_start/run.grid_stop/run.grid_count"
            )
        return np.linspace(self.grid_start, self.grid_stop, self.grid_count)


_DEFAULTS = {
    "system.isotope_I": "1H",
    "system.isotope_S": "13C",
    "field.B_bias_uT": "2.0",
    "field.B_wolf_uT": "2.0",
    "field.f_wolf_Hz": "auto",
    "field.phase_rad": "0.0",
    "field.tau_s": "auto",
    "run.steps_per_period": "1000",
    "run.snap_to_period": "false",
    "run.workers": "1",
    "run.sample_stride": "10",
    "run.engine": "auto",
    "run.validity_threshold": "0.2",
}

_KNOWN_KEYS = set(_DEFAULTS) | {
    "system.J12_Hz",
    "system.J13_Hz",
    "system.J23_Hz",
    "system.gamma_I_rad_per_sT",
    "system.gamma_S_rad_per_sT",
    "run.command",
    "run.grid",
    "run.grid_start",
    "run.grid_stop",
    "run.grid_count",
    "run.out",
}


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Flat key = value parser; '#' starts a comment, blank lines ignored."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _KNOWN_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if not value:
            raise ConfigError(f"{source}:{lineno}: empty value for {key!r}")
        values[key] = value
    return values


def load_config_file(path: str) -> dict:
    """Read a config file; bare names fall back to the bundled examples."""
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_config_text(fh.read(), source=path)
    except FileNotFoundError:
        bundled = resources.files("wolfsim") / "configs" / f"{path}.cfg"
        if "/" not in path and bundled.is_file():
            return parse_config_text(bundled.read_text(encoding="utf-8"), source=f"{path}.cfg (bundled)")
        raise ConfigError(f"config file not found: {path}") from None
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None


def _parse_float(values: dict, key: str) -> float:
    raw = values[key]
    try:
        out = float(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected a number, got {raw!r}") from None
    if not math.isfinite(out):
        raise ConfigError(f"{key}: value must be finite")
    return out


def _parse_optional_float(values: dict, key: str) -> float | None:
    if values[key] == "auto":
        return None
    return _parse_float(values, key)


def _parse_int(values: dict, key: str, minimum: int) -> int:
    raw = values[key]
    try:
        out = int(raw)
    except ValueError:
        raise ConfigError(f"{key}: expected an integer, got {raw!r}") from None
    if out < minimum:
        raise ConfigError(f"{key}: must be >= {minimum}")
    return out


def _parse_bool(values: dict, key: str) -> bool:
    raw = values[key].lower()
    if raw in ("true", "yes", "1", "on"):
        return True
    if raw in ("false", "no", "0", "off"):
        return False
    raise ConfigError(f"{key}: expected a boolean, got {values[key]!r}")


def resolve_config(values: dict) -> RunConfig:
    """Apply defaults and typed parsing; raise ConfigError on anything off."""
    merged = dict(_DEFAULTS)
    merged.update(values)

    for key in ("system.J12_Hz", "system.J13_Hz", "system.J23_Hz"):
        if key not in merged:
            raise ConfigError(f"missing required key {key}")

    isotope_i = merged["system.isotope_I"]
    isotope_s = merged["system.isotope_S"]
    try:
        gamma_i = gamma_rad_per_s_per_t(isotope_i)
        gamma_s = gamma_rad_per_s_per_t(isotope_s)
    except KeyError as exc:
        raise ConfigError(str(exc.args[0])) from None
    if "system.gamma_I_rad_per_sT" in merged:
        gamma_i = _parse_float(merged, "system.gamma_I_rad_per_sT")
    if "system.gamma_S_rad_per_sT" in merged:
        gamma_s = _parse_float(merged, "system.gamma_S_rad_per_sT")

    command = merged.get("run.command")
    if command is not None and command not in COMMANDS:
        raise ConfigError(f"run.command: unknown command {command!r}")

    grid_list = None
    if "run.grid" in merged:
        try:
            grid_list = tuple(float(tok) for tok in merged["run.grid"].split(",") if tok.strip())
        except ValueError:
            raise ConfigError("run.grid: expected comma-separated numbers") from None
        if not grid_list:
            raise ConfigError("run.grid: empty grid")

    grid_count = None
    if "run.grid_count" in merged:
        grid_count = _parse_int(merged, "run.grid_count", minimum=1)

    engine = merged["run.engine"]
    if engine != "auto":
        try:
            engine_registry.get_engine(engine)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    tau = _parse_optional_float(merged, "field.tau_s")
    if tau is not None and tau < 0.0:
        raise ConfigError("field.tau_s: must be >= 0")

    return RunConfig(
        j12_hz=_parse_float(merged, "system.J12_Hz"),
        j13_hz=_parse_float(merged, "system.J13_Hz"),
        j23_hz=_parse_float(merged, "system.J23_Hz"),
        isotope_i=isotope_i,
        isotope_s=isotope_s,
        gamma_i=gamma_i,
        gamma_s=gamma_s,
        b_bias_ut=_parse_float(merged, "field.B_bias_uT"),
        b_wolf_ut=_parse_float(merged, "field.B_wolf_uT"),
        f_wolf_hz=_parse_optional_float(merged, "field.f_wolf_Hz"),
        phase_rad=_parse_float(merged, "field.phase_rad"),
        tau_s=tau,
        command=command,
        grid_start=_parse_float(merged, "run.grid_start") if "run.grid_start" in merged else None,
        grid_stop=_parse_float(merged, "run.grid_stop") if "run.grid_stop" in merged else None,
        grid_count=grid_count,
        grid_list=grid_list,
        steps_per_period=_parse_int(merged, "run.steps_per_period", minimum=100),
        snap_to_period=_parse_bool(merged, "run.snap_to_period"),
        workers=_parse_int(merged, "run.workers", minimum=1),
        sample_stride=_parse_int(merged, "run.sample_stride", minimum=1),
        engine=engine,
        out=merged.get("run.out"),
        validity_threshold=_parse_float(merged, "run.validity_threshold"),
    )


def dump_config(cfg: RunConfig) -> str:
    """Canonical re-emission; parsing the output reproduces cfg exactly."""
    pairs = {
        "system.J12_Hz": repr(cfg.j12_hz),
        "system.J13_Hz": repr(cfg.j13_hz),
        "system.J23_Hz": repr(cfg.j23_hz),
        "system.isotope_I": cfg.isotope_i,
        "system.isotope_S": cfg.isotope_s,
        "system.gamma_I_rad_per_sT": repr(cfg.gamma_i),
        "system.gamma_S_rad_per_sT": repr(cfg.gamma_s),
        "field.B_bias_uT": repr(cfg.b_bias_ut),
        "field.B_wolf_uT": repr(cfg.b_wolf_ut),
        "field.f_wolf_Hz": "auto" if cfg.f_wolf_hz is None else repr(cfg.f_wolf_hz),
        "field.phase_rad": repr(cfg.phase_rad),
        "field.tau_s": "auto" if cfg.tau_s is None else repr(cfg.tau_s),
        "run.steps_per_period": str(cfg.steps_per_period),
        "run.snap_to_period": "true" if cfg.snap_to_period else "false",
        "run.workers": str(cfg.workers),
        "run.sample_stride": str(cfg.sample_stride),
        "run.engine": cfg.engine,
        "run.validity_threshold": repr(cfg.validity_threshold),
    }
    if cfg.command is not None:
        pairs["run.command"] = cfg.command
    if cfg.grid_list is not None:
        pairs["run.grid"] = ",".join(repr(x) for x in cfg.grid_list)
    if cfg.grid_start is not None:
        pairs["run.grid_start"] = repr(cfg.grid_start)
    if cfg.grid_stop is not None:
        pairs["run.grid_stop"] = repr(cfg.grid_stop)
    if cfg.grid_count is not None:
        pairs["run.grid_count"] = str(cfg.grid_count)
    if cfg.out is not None:
        pairs["run.out"] = cfg.out
    return "\n".join(f"{key} = {pairs[key]}" for key in sorted(pairs)) + "\n"


def _format_value(x) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    return repr(x)


def write_csv(path, parameter_name, series, header_comments):
    """Write '#'-commented header plus rows, LF endings, round-trip floats.

    series: ordered dict name -> array; first entry is the parameter.
    """
    names = list(series)
    rows = len(series[names[0]])
    lines = []
    for comment in header_comments:
        lines.append(f"# {comment}")
    lines.append(f"# parameter: {parameter_name}")
    lines.append(",".join(names))
    for i in range(rows):
        lines.append(",".join(_format_value(series[name][i]) for name in names))
    text = "\n".join(lines) + "\n"
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise RuntimeError(f"cannot write output file {path}: {exc}") from None


def _config_comments(cfg: RunConfig, command: str) -> list:
    comments = ["wolfsim output", f"command = {command}"]
    resolved_engine = engine_registry.get_engine(
        None if cfg.engine == "auto" else cfg.engine
    ).name
    comments.append(f"engine = {resolved_engine}")
    comments.extend(dump_config(cfg).strip().splitlines())
    return comments


def _scan_series(result) -> dict:
    series = {"parameter": result.grid}
    for name in CANONICAL_COLUMNS[1:]:
        series[name] = result.observables[name]
    for name in sorted(result.observables):
        if name not in series:
            series[name] = result.observables[name]
    return series


def _cmd_info(cfg: RunConfig, args) -> int:
    if args.dump_config:
        sys.stdout.write(dump_config(cfg))
        return 0
    system = cfg.spin_system()
    b_bias = cfg.b_bias_ut * 1e-6
    field = cfg.field_schedule()
    theta, phi = mixing_angles(system)
    model = analytic_model(system, field)
    vm = validity_metrics(system, field, threshold=cfg.validity_threshold)
    tau_pi = pi_pulse_duration(system, field)
    lines = [
        f"system: J12 = {cfg.j12_hz} Hz, J13 = {cfg.j13_hz} Hz, J23 = {cfg.j23_hz} Hz",
        f"gamma_I = {cfg.gamma_i:.6e} rad/s/T ({cfg.isotope_i}), "
        f"gamma_S = {cfg.gamma_s:.6e} rad/s/T ({cfg.isotope_s})",
        f"B_bias = {cfg.b_bias_ut} uT, B_wolf_peak = {cfg.b_wolf_ut} uT",
        f"omega_ST/2pi = {omega_st(system, b_bias) / TWO_PI:.6f} Hz",
        f"omega_TT/2pi = {omega_tt(system, b_bias) / TWO_PI:.6f} Hz",
        f"theta = {theta:.6f} rad",
        f"phi = {phi:.6f} rad",
        f"omega_x/2pi = {model.omega_x / TWO_PI:.6f} Hz",
        f"modulation index A = {model.modulation_index:.6f}",
        f"|omega_nut|/2pi = {abs(model.omega_nut) / TWO_PI:.6f} Hz",
        f"pi-pulse duration tau_pi = {tau_pi:.6f} s",
        f"drive: f_wolf = {field.omega_wolf / TWO_PI:.6f} Hz, "
        f"phase = {cfg.phase_rad} rad, tau = "
        + ("auto" if cfg.tau_s is None else f"{cfg.tau_s} s"),
        f"validity: |omega_x/omega_ST| = {vm.coupling_ratio:.6f} "
        f"(bound {vm.coupling_bound:.6f}) [{'ok' if vm.coupling_ok else 'FLAG'}]",
        f"validity: |J13-J23|/|J12| = {vm.near_equivalence:.6f} "
        f"[{'ok' if vm.near_equivalence_ok else 'FLAG'}]",
        f"validity: (2pi)^2(J13^2+J23^2)/omega_ST^2 = {vm.frequency_ratio_sq:.6f} "
        f"[{'ok' if vm.frequency_ok else 'FLAG'}]",
        f"engine: {engine_registry.get_engine(None if cfg.engine == 'auto' else cfg.engine).name} "
        f"(available: {', '.join(engine_registry.available_engines())})",
    ]
    sys.stdout.write("\n".join(lines) + "\n")
    return 0


def _cmd_simulate(cfg: RunConfig, args) -> int:
    system = cfg.spin_system()
    tau = cfg.resolve_tau()
    field = cfg.field_schedule(duration=tau)
    traj = evolve(
        system,
        field,
        phip_initial_state(),
        steps_per_period=cfg.steps_per_period,
        sample_stride=cfg.sample_stride,
        engine=None if cfg.engine == "auto" else cfg.engine,
    )
    s_pol = traj.observables["s_polarization"]
    model = analytic_model(system, field)
    on_resonance = abs(field.omega_wolf - model.omega_st) <= 1e-9 * abs(model.omega_st)
    if on_resonance:
        prediction = 0.5 * (1.0 - np.cos(abs(model.omega_nut) * traj.times))
    else:
        # closed form only covers the resonant drive
        prediction = np.full(traj.times.size, math.nan)
    s_peak = float(np.max(np.abs(s_pol)))
    series = {
        "parameter": traj.times,
        "s_polarization": s_pol,
        "s_polarization_normalized": s_pol / s_peak if s_peak else np.zeros_like(s_pol),
        "p_S0beta": traj.observables["p_S0beta"],
        "p_T0beta": traj.observables["p_T0beta"],
        "p_Tm1alpha": traj.observables["p_Tm1alpha"],
        "analytic_prediction": prediction,
    }
    for name in sorted(traj.observables):
        if name not in series:
            series[name] = traj.observables[name]
    out = cfg.out or DEFAULT_OUTPUTS["simulate"]
    write_csv(out, "time_s", series, _config_comments(cfg, "simulate"))
    print(f"wrote {out} ({traj.times.size} rows)")
    return 0


def _scan_common(cfg: RunConfig):
    return dict(
        steps_per_period=cfg.steps_per_period,
        workers=cfg.workers,
        engine=None if cfg.engine == "auto" else cfg.engine,
    )


def _cmd_scan_duration(cfg: RunConfig, args) -> int:
    system = cfg.spin_system()
    field = cfg.field_schedule()
    grid = cfg.grid("scan-duration")
    result = duration_scan(
        system,
        field,
        grid,
        snap_to_period=cfg.snap_to_period,
        **_scan_common(cfg),
    )
    out = cfg.out or DEFAULT_OUTPUTS["scan-duration"]
    comments = _config_comments(cfg, "scan-duration")
    comments.append(
        f"omega_nut_analytic_rad_s = {_format_value(result.metadata['omega_nut_analytic'])}"
    )
    write_csv(out, "tau_s", _scan_series(result), comments)
    print(f"wrote {out} ({result.grid.size} rows)")
    return 0


def _cmd_scan_frequency(cfg: RunConfig, args) -> int:
    system = cfg.spin_system()
    field = cfg.field_schedule()
    grid_hz = cfg.grid("scan-frequency")
    result = frequency_scan(
        system,
        field,
        TWO_PI * grid_hz,
        tau=cfg.tau_s,
        **_scan_common(cfg),
    )
    out = cfg.out or DEFAULT_OUTPUTS["scan-frequency"]
    comments = _config_comments(cfg, "scan-frequency")
    comments.append(f"tau_s = {_format_value(result.metadata['tau_s'])}")
    comments.append(f"peak_f_Hz = {_format_value(result.metadata['peak_omega'] / TWO_PI)}")
    comments.append(f"peak_value = {_format_value(result.metadata['peak_value'])}")
    fwhm = result.metadata["fwhm"]
    comments.append(
        "fwhm_Hz = unavailable (peak lobe not bracketed)"
        if fwhm is None
        else f"fwhm_Hz = {_format_value(fwhm / TWO_PI)}"
    )
    series = _scan_series(result)
    series["parameter"] = result.grid / TWO_PI
    write_csv(out, "f_wolf_Hz", series, comments)
    print(f"wrote {out} ({result.grid.size} rows)")
    return 0


def _cmd_scan_amplitude(cfg: RunConfig, args) -> int:
    system = cfg.spin_system()
    field = cfg.field_schedule()
    grid_ut = cfg.grid("scan-amplitude")
    result = amplitude_scan(
        system,
        field,
        grid_ut * 1e-6,
        tau_probe=cfg.tau_s,
        **_scan_common(cfg),
    )
    out = cfg.out or DEFAULT_OUTPUTS["scan-amplitude"]
    comments = _config_comments(cfg, "scan-amplitude")
    comments.append(f"tau_probe_s = {_format_value(result.metadata['tau_probe_s'])}")
    comments.append(f"argmax_B_uT = {_format_value(result.metadata['argmax_b_peak'] * 1e6)}")
    comments.append(
        f"argmax_modulation_index = {_format_value(result.metadata['argmax_modulation_index'])}"
    )
    series = _scan_series(result)
    series["parameter"] = result.grid * 1e6
    write_csv(out, "B_wolf_uT", series, comments)
    print(f"wrote {out} ({result.grid.size} rows)")
    return 0


def _cmd_report(cfg: RunConfig, args) -> int:
    system = cfg.spin_system()
    field = cfg.field_schedule()
    report = analytic_vs_numeric_report(
        system,
        field,
        steps_per_period=cfg.steps_per_period,
        engine=None if cfg.engine == "auto" else cfg.engine,
    )
    out = cfg.out or DEFAULT_OUTPUTS["report"]
    metrics = [
        f"rms_deviation = {_format_value(report.rms_deviation)}",
        f"max_deviation = {_format_value(report.max_deviation)}",
        f"predicted_f_Hz = {_format_value(report.predicted_omega / TWO_PI)}",
    ]
    if report.fitted_omega is not None:
        metrics.append(f"fitted_f_Hz = {_format_value(report.fitted_omega / TWO_PI)}")
        metrics.append(
            f"relative_frequency_error = {_format_value(report.relative_frequency_error)}"
        )
    series = {
        "parameter": report.times,
        "numeric_normalized": report.numeric_normalized,
        "analytic_prediction": report.analytic,
    }
    write_csv(out, "time_s", series, _config_comments(cfg, "report") + metrics)
    for line in metrics:
        print(line)
    print(f"wrote {out} ({report.times.size} rows)")
    return 0


_HANDLERS = {
    "info": _cmd_info,
    "simulate": _cmd_simulate,
    "scan-duration": _cmd_scan_duration,
    "scan-frequency": _cmd_scan_frequency,
    "scan-amplitude": _cmd_scan_amplitude,
    "report": _cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wolfsim",
        description="Simulate low-frequency driving of singlet-triplet transitions "
        "in a three-spin system.",
        epilog="Precedence: defaults < --config file < --set overrides < "
        "dedicated flags. Bare --config names resolve to bundled examples "
        "(fumarate, maleate).",
    )
    parser.add_argument("command", nargs="?", choices=COMMANDS, help="what to run; may also come from run.command")
    parser.add_argument("--config", metavar="PATH", help="config file (or bundled name)")
    parser.add_argument(
        "--set",
        metavar="KEY=VALUE",
        action="append",
        default=[],
        dest="overrides",
        help="override a config key (repeatable)",
    )
    parser.add_argument("--out", metavar="PATH", help="output file (run.out)")
    parser.add_argument("--workers", type=int, metavar="N", help="scan worker processes (run.workers)")
    parser.add_argument(
        "--steps-per-period", type=int, metavar="N", help="integration steps per drive period (run.steps_per_period)"
    )
    parser.add_argument(
        "--dump-config",
        action="store_true",
        help="with info: print the resolved config and exit",
    )
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        values = load_config_file(args.config) if args.config else {}
        for item in args.overrides:
            if "=" not in item:
                raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
            key, _, value = item.partition("=")
            values.update(parse_config_text(f"{key} = {value}", source="--set"))
        if args.out is not None:
            values["run.out"] = args.out
        if args.workers is not None:
            values["run.workers"] = str(args.workers)
        if args.steps_per_period is not None:
            values["run.steps_per_period"] = str(args.steps_per_period)
        cfg = resolve_config(values)
        command = args.command or cfg.command
        if command is None:
            raise ConfigError("no command given (positional argument or run.command)")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    try:
        return _HANDLERS[command](cfg, args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (RuntimeError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
