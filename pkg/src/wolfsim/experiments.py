"""Measurement protocols: parameter scans over the exact propagator.

Each scan point is an independent pulse from the fresh parahydrogen-derived
initial state; points are trivially parallel and a worker pool distributes
them while the assembled result keeps grid order.  Analytic overlays come
from the resonant closed form, which is exactly what the scans are meant
to be compared against.
"""

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from . import engine as engine_registry
from .analytic import analytic_model, nutation_frequency, pi_pulse_duration
from .hamiltonian import FieldSchedule, SpinSystem, omega_st
from .propagator import evolve, phip_initial_state

#: Observable names every scan point reports, in output order.
POINT_KEYS = (
    "s_polarization",
    "p_S0beta",
    "p_T0beta",
    "p_Tm1alpha",
    "p_S0alpha",
    "p_T0alpha",
    "p_Tm1beta",
    "p_Tp1alpha",
    "p_Tp1beta",
)


@dataclass(frozen=True)
class ScanResult:
    """One scanned parameter against named observable series.

    grid is strictly monotonic (increasing, except for frequency scans
    given a descending grid); every series in observables has the same
    length.  metadata snapshots the system, the field template, and
    scan-specific summaries (peak positions, widths, probe durations).
    """

    parameter_name: str
    grid: np.ndarray
    observables: dict
    metadata: dict


def _scan_point(payload):
    """Evaluate one grid point; module-level so worker processes can pickle it."""
    (sys_args, field_args, steps_per_period, engine_name) = payload
    sys = SpinSystem(*sys_args)
    field = FieldSchedule(*field_args)
    traj = evolve(
        sys,
        field,
        phip_initial_state(),
        steps_per_period=steps_per_period,
        sample_stride=2**62,
        engine=engine_name,
    )
    return tuple(float(traj.observables[k][-1]) for k in POINT_KEYS)


def _run_points(payloads, workers):
    if workers <= 1:
        return [_scan_point(p) for p in payloads]
    chunk = max(1, len(payloads) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_scan_point, payloads, chunksize=chunk))


def _sys_args(sys: SpinSystem):
    return (sys.j12_hz, sys.j13_hz, sys.j23_hz, sys.gamma_i, sys.gamma_s)


def _engine_name(engine) -> str:
    """Resolved kernel name, accepting a name, None, or a kernel module."""
    if hasattr(engine, "step_unitaries"):
        return engine.name
    return engine_registry.get_engine(engine).name


def _check_grid(grid, name, allow_descending=False):
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise ValueError(f"{name} grid is empty")
    if grid.size > 1:
        diffs = np.diff(grid)
        if allow_descending and np.all(diffs < 0):
            return grid
        if not np.all(diffs > 0):
            word = "strictly monotonic" if allow_descending else "strictly increasing"
            raise ValueError(f"{name} grid must be {word}")
    return grid


def _normalized(series: np.ndarray) -> np.ndarray:
    peak = float(np.max(np.abs(series)))
    if peak == 0.0:
        return np.zeros_like(series)
    return series / peak


def _assemble(parameter_name, grid, rows, analytic_prediction, sys, field, extra):
    observables = {
        key: np.array([row[i] for row in rows]) for i, key in enumerate(POINT_KEYS)
    }
    observables["s_polarization_normalized"] = _normalized(
        observables["s_polarization"]
    )
    observables["analytic_prediction"] = analytic_prediction
    metadata = {"system": sys, "field_template": field}
    metadata.update(extra)
    return ScanResult(parameter_name, grid, observables, metadata)


def duration_scan(
    sys: SpinSystem,
    field_template: FieldSchedule,
    tau_grid,
    *,
    steps_per_period: int = 1000,
    snap_to_period: bool = False,
    workers: int = 1,
    engine=None,
) -> ScanResult:
    """Final polarization and populations versus pulse duration.

    The drive frequency and amplitude come from field_template; callers
    wanting resonance set omega_wolf = omega_st beforehand.  With
    snap_to_period each duration is rounded to an integer number of drive
    periods (duplicates collapse, so the returned grid may be shorter).
    The analytic overlay is the resonant transfer (1 - cos(omega_nut*tau))/2.
    """
    grid = _check_grid(tau_grid, "duration")
    if grid[0] < 0.0:
        raise ValueError("durations must be >= 0")
    if snap_to_period:
        period = 2.0 * math.pi / field_template.omega_wolf
        grid = np.unique(np.round(grid / period) * period)
    engine_name = _engine_name(engine)
    payloads = [
        (
            _sys_args(sys),
            (
                field_template.b_bias,
                field_template.b_wolf_peak,
                field_template.omega_wolf,
                field_template.phase,
                float(tau),
            ),
            steps_per_period,
            engine_name,
        )
        for tau in grid
    ]
    rows = _run_points(payloads, workers)
    w_nut = nutation_frequency(sys, field_template)
    prediction = 0.5 * (1.0 - np.cos(w_nut * grid))
    extra = {
        "steps_per_period": steps_per_period,
        "workers": workers,
        "engine": engine_name,
        "snap_to_period": snap_to_period,
        "omega_nut_analytic": w_nut,
    }
    return _assemble("tau_s", grid, rows, prediction, sys, field_template, extra)


def _local_fwhm(x: np.ndarray, y: np.ndarray):
    """Full width at half maximum of the lobe containing the maximum.

    Walks outward from the peak to the nearest half-maximum crossings and
    interpolates linearly; returns None when either side never crosses
    inside the grid (the peak lobe is not fully bracketed).
    """
    i = int(np.argmax(y))
    peak = y[i]
    if peak <= 0.0:
        return None
    half = 0.5 * peak

    left = None
    for k in range(i, 0, -1):
        if y[k - 1] <= half <= y[k]:
            rise = y[k] - y[k - 1]
            frac = (half - y[k - 1]) / rise if rise else 0.0
            left = x[k - 1] + frac * (x[k] - x[k - 1])
            break
    right = None
    for k in range(i, y.size - 1):
        if y[k + 1] <= half <= y[k]:
            fall = y[k] - y[k + 1]
            frac = (y[k] - half) / fall if fall else 0.0
            right = x[k] + frac * (x[k + 1] - x[k])
            break
    if left is None or right is None:
        return None
    return float(right - left)


def frequency_scan(
    sys: SpinSystem,
    field_template: FieldSchedule,
    omega_grid,
    tau: float | None = None,
    *,
    steps_per_period: int = 1000,
    workers: int = 1,
    engine=None,
) -> ScanResult:
    """Final polarization versus drive frequency at fixed pulse duration.

    tau defaults to the analytic pi-pulse duration, the most selective
    single choice.  The resonant closed form says nothing off resonance,
    so the analytic_prediction column is NaN here; metadata reports the
    peak position and the half-maximum width of the peak lobe (None when
    the grid does not bracket it).

    Each point is an independent run, so the grid may also be given in
    strictly decreasing order; the output is then the ascending scan
    reversed, metadata included.
    """
    grid = _check_grid(omega_grid, "frequency", allow_descending=True)
    if np.any(grid <= 0.0):
        raise ValueError("frequency grid must be positive")
    if tau is None:
        tau = pi_pulse_duration(sys, field_template)
        if not math.isfinite(tau):
            raise ValueError(
                "analytic transfer vanishes (J13 = J23); pass tau explicitly"
            )
    if tau <= 0.0:
        raise ValueError("tau must be positive")
    engine_name = _engine_name(engine)
    payloads = [
        (
            _sys_args(sys),
            (
                field_template.b_bias,
                field_template.b_wolf_peak,
                float(w),
                field_template.phase,
                float(tau),
            ),
            steps_per_period,
            engine_name,
        )
        for w in grid
    ]
    rows = _run_points(payloads, workers)
    prediction = np.full(grid.size, math.nan)
    s_pol = np.array([row[0] for row in rows])
    peak_index = int(np.argmax(s_pol))
    # the width walk assumes ascending x
    order = slice(None, None, -1) if grid.size > 1 and grid[0] > grid[-1] else slice(None)
    extra = {
        "steps_per_period": steps_per_period,
        "workers": workers,
        "engine": engine_name,
        "tau_s": float(tau),
        "peak_omega": float(grid[peak_index]),
        "peak_value": float(s_pol[peak_index]),
        "fwhm": _local_fwhm(grid[order], s_pol[order]),
    }
    return _assemble("omega_wolf_rad_s", grid, rows, prediction, sys, field_template, extra)


def amplitude_scan(
    sys: SpinSystem,
    field_template: FieldSchedule,
    b_peak_grid,
    *,
    tau_probe: float | None = None,
    steps_per_period: int = 1000,
    workers: int = 1,
    engine=None,
) -> ScanResult:
    """Transfer rate versus drive amplitude, analytic and numeric.

    The analytic series is |omega_nut| over the grid; the numeric one
    inverts the transfer of a fixed short probe pulse back to an effective
    nutation rate.  The probe duration defaults to a quarter pi-pulse at
    the fastest analytic rate on the grid, which keeps every point on the
    invertible rising flank.  metadata reports the analytic argmax both in
    field units and in modulation-index units.
    """
    grid = _check_grid(b_peak_grid, "amplitude")
    if np.any(grid < 0.0):
        raise ValueError("amplitude grid must be non-negative")
    w_st = omega_st(sys, field_template.b_bias)
    index_grid = (sys.gamma_i - sys.gamma_s) * grid / w_st
    w_nut_grid = np.array(
        [
            abs(
                nutation_frequency(
                    sys, replace(field_template, b_wolf_peak=float(b))
                )
            )
            for b in grid
        ]
    )
    w_max = float(np.max(w_nut_grid))
    if tau_probe is None:
        if w_max > 0.0:
            tau_probe = 0.25 * math.pi / w_max
        elif field_template.duration > 0.0:
            tau_probe = field_template.duration
        else:
            tau_probe = 10.0 * 2.0 * math.pi / field_template.omega_wolf
    if tau_probe <= 0.0:
        raise ValueError("tau_probe must be positive")

    engine_name = _engine_name(engine)
    payloads = [
        (
            _sys_args(sys),
            (
                field_template.b_bias,
                float(b),
                field_template.omega_wolf,
                field_template.phase,
                float(tau_probe),
            ),
            steps_per_period,
            engine_name,
        )
        for b in grid
    ]
    rows = _run_points(payloads, workers)
    prediction = 0.5 * (1.0 - np.cos(w_nut_grid * tau_probe))

    # Invert p = sin^2(w*tau/2) on the rising flank to an effective rate.
    p_tm1 = np.array([row[3] for row in rows])
    p_s0b_initial = 0.5
    transfer = np.clip(p_tm1 / p_s0b_initial, 0.0, 1.0)
    w_nut_numeric = (2.0 / tau_probe) * np.arcsin(np.sqrt(transfer))

    peak_index = int(np.argmax(w_nut_grid))
    extra = {
        "steps_per_period": steps_per_period,
        "workers": workers,
        "engine": engine_name,
        "tau_probe_s": float(tau_probe),
        "argmax_b_peak": float(grid[peak_index]),
        "argmax_modulation_index": float(index_grid[peak_index]),
    }
    result = _assemble("b_wolf_peak_T", grid, rows, prediction, sys, field_template, extra)
    result.observables["omega_nut_analytic"] = w_nut_grid
    result.observables["omega_nut_numeric"] = w_nut_numeric
    result.observables["modulation_index"] = index_grid
    return result


@dataclass(frozen=True)
class ComparisonReport:
    """Exact trajectory against the resonant cosine, on a shared time grid.

    numeric_normalized is the driven-state population divided by its
    initial value; analytic is (1 + cos(omega_nut*t))/2.  fitted_omega is
    a least-squares cosine fit to the numeric series (None when the
    analytic rate is zero and there is nothing to fit).
    """

    times: np.ndarray
    numeric_normalized: np.ndarray
    analytic: np.ndarray
    rms_deviation: float
    max_deviation: float
    fitted_omega: float | None
    predicted_omega: float
    relative_frequency_error: float | None


def analytic_vs_numeric_report(
    sys: SpinSystem,
    field: FieldSchedule,
    *,
    n_periods: float = 1.0,
    steps_per_period: int = 1000,
    engine=None,
) -> ComparisonReport:
    """Quantify how well the closed form tracks the exact dynamics.

    Runs one resonant pulse spanning n_periods full population
    oscillations (2*pi/|omega_nut| each; ten drive periods when the
    analytic rate vanishes) and compares the normalized driven-state
    population against the cosine.
    """
    model = analytic_model(sys, field)
    w_nut = abs(model.omega_nut)
    if w_nut > 0.0:
        window = n_periods * 2.0 * math.pi / w_nut
    else:
        window = 10.0 * 2.0 * math.pi / field.omega_wolf
    run_field = replace(field, duration=window)
    n_steps_estimate = steps_per_period * window * field.omega_wolf / (2.0 * math.pi)
    stride = max(1, int(round(n_steps_estimate / 2000)))
    traj = evolve(
        sys,
        run_field,
        phip_initial_state(),
        steps_per_period=steps_per_period,
        sample_stride=stride,
        engine=engine,
    )
    p = traj.observables["p_S0beta"]
    numeric = p / p[0]
    analytic = 0.5 * (1.0 + np.cos(w_nut * traj.times))
    deviation = numeric - analytic
    rms = float(np.sqrt(np.mean(deviation**2)))
    peak_dev = float(np.max(np.abs(deviation)))

    fitted = None
    rel_err = None
    if w_nut > 0.0:
        from scipy.optimize import minimize_scalar

        def sse(w):
            return float(
                np.sum((numeric - 0.5 * (1.0 + np.cos(w * traj.times))) ** 2)
            )

        res = minimize_scalar(
            sse, bounds=(0.5 * w_nut, 1.5 * w_nut), method="bounded",
            options={"xatol": 1e-10 * w_nut},
        )
        fitted = float(res.x)
        rel_err = abs(fitted - w_nut) / w_nut
    return ComparisonReport(
        times=traj.times,
        numeric_normalized=numeric,
        analytic=analytic,
        rms_deviation=rms,
        max_deviation=peak_dev,
        fitted_omega=fitted,
        predicted_omega=w_nut,
        relative_frequency_error=rel_err,
    )
