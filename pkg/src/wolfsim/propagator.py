"""Exact density-operator evolution under the full time-dependent Hamiltonian.

Propagation is piecewise-constant: the Hamiltonian is sampled at each step
midpoint and exponentiated exactly by Hermitian eigendecomposition, which
gives second-order accuracy in the step size without any commutator
machinery.  The drive is periodic, so only one period's worth of step
unitaries is ever computed; longer evolutions reuse them cyclically.

The initial state delivered by the parahydrogen chemistry is the proton
singlet with an unpolarized third spin.  It is mixed, hence density-matrix
(not state-vector) propagation throughout.  No relaxation is included.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import engine as engine_registry
from .hamiltonian import FieldSchedule, SpinSystem, build_terms, drive_operator
from .spincore import POPULATION_KEYS, BasisState, coupled_basis, spin_operator

_STATE_TOL = 1e-9

_S3Z = spin_operator(3, 3, "z")


def step_propagator(h: np.ndarray, dt: float) -> np.ndarray:
    """U = exp(-i*h*dt) for Hermitian h, by eigendecomposition."""
    h = np.asarray(h, dtype=np.complex128)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError("h must be a square matrix")
    scale = max(1.0, float(np.max(np.abs(h))))
    if float(np.max(np.abs(h - h.conj().T))) > 1e-12 * scale:
        raise ValueError("h is not Hermitian within tolerance")
    if dt < 0.0:
        raise ValueError("dt must be >= 0")
    energies, vectors = np.linalg.eigh(h)
    return (vectors * np.exp(-1j * energies * dt)) @ vectors.conj().T


def phip_initial_state() -> np.ndarray:
    """Proton-pair singlet with an unpolarized third spin, trace 1.

    Populations sit entirely in the two singlet product states (1/2 each);
    the third spin carries no polarization.
    """
    by_label = {s.label: s.vector for s in coupled_basis()}
    rho = np.zeros((8, 8), dtype=np.complex128)
    for label in ("S0a", "S0b"):
        v = by_label[label]
        rho += 0.5 * np.outer(v, v.conj())
    return rho


def s_polarization(rho: np.ndarray) -> float:
    """Longitudinal polarization of the third spin, 2*Tr(rho*S3z)."""
    return 2.0 * float(np.real(np.trace(np.asarray(rho) @ _S3Z)))


def population(rho: np.ndarray, state: BasisState) -> float:
    """<state|rho|state> as a real number."""
    v = state.vector
    return float(np.real(v.conj() @ np.asarray(rho) @ v))


@dataclass(frozen=True)
class Trajectory:
    """Sampled evolution: times (s), 8x8 states, and named real series.

    observables carries one entry per coupled-basis population plus
    's_polarization', each aligned with times.
    """

    times: np.ndarray
    states: np.ndarray
    observables: dict


def _observable_series(states: np.ndarray) -> dict:
    basis = coupled_basis()
    obs = {}
    for key, bstate in zip(POPULATION_KEYS, basis):
        v = bstate.vector
        obs[key] = np.real(np.einsum("i,sij,j->s", v.conj(), states, v))
    obs["s_polarization"] = 2.0 * np.real(np.einsum("sij,ji->s", states, _S3Z))
    return obs


def _check_states(states: np.ndarray, times: np.ndarray) -> None:
    herm = np.max(np.abs(states - states.conj().transpose(0, 2, 1)), axis=(1, 2))
    traces = np.abs(np.einsum("sii->s", states) - 1.0)
    bad = np.flatnonzero((herm > _STATE_TOL) | (traces > _STATE_TOL))
    if bad.size:
        i = int(bad[0])
        raise RuntimeError(
            f"state invariants violated at t = {times[i]:.6g} s: "
            f"hermiticity error {herm[i]:.3e}, trace error {traces[i]:.3e}"
        )


def evolve(
    sys: SpinSystem,
    field: FieldSchedule,
    rho0: np.ndarray,
    steps_per_period: int = 1000,
    sample_stride: int = 1,
    engine=None,
) -> Trajectory:
    """Propagate rho0 through the drive of the given FieldSchedule.

    The step size is one drive period divided by steps_per_period; a final
    shorter step lands exactly on field.duration when it is not an integer
    number of steps.  Every sample_stride-th step is sampled (plus the end
    point).  engine may be an engine name, None for the default, or a
    kernel module.

    Raises ValueError for bad inputs and RuntimeError when the propagated
    state drifts beyond the trace/Hermiticity tolerance.
    """
    if steps_per_period < 100:
        raise ValueError("steps_per_period must be >= 100")
    if sample_stride < 1:
        raise ValueError("sample_stride must be >= 1")
    eng = engine if hasattr(engine, "step_unitaries") else engine_registry.get_engine(engine)

    rho0 = np.asarray(rho0, dtype=np.complex128)
    if rho0.shape != (8, 8):
        raise ValueError("rho0 must be an 8x8 density matrix")
    if float(np.max(np.abs(rho0 - rho0.conj().T))) > _STATE_TOL:
        raise ValueError("rho0 is not Hermitian within tolerance")
    if abs(complex(np.trace(rho0)).real - 1.0) > _STATE_TOL:
        raise ValueError("rho0 must have unit trace")

    if field.duration == 0.0:
        states = rho0[None, :, :].copy()
        times = np.zeros(1)
        return Trajectory(times, states, _observable_series(states))

    if field.omega_wolf <= 0.0:
        raise ValueError("omega_wolf must be positive to define the step size")

    period = 2.0 * math.pi / field.omega_wolf
    dt = period / steps_per_period
    n_full = int(math.floor(field.duration / dt + 1e-9))
    tail = field.duration - n_full * dt
    if tail < 1e-9 * dt:
        tail = 0.0

    m_unique = min(n_full, steps_per_period)
    mids = (np.arange(m_unique) + 0.5) * dt
    coeffs = field.drive_field(mids)
    dts = np.full(m_unique, dt)
    order = np.arange(n_full, dtype=np.int64) % steps_per_period
    if tail > 0.0:
        coeffs = np.append(coeffs, field.drive_field(n_full * dt + 0.5 * tail))
        dts = np.append(dts, tail)
        order = np.append(order, np.int64(m_unique))

    n_total = order.size
    sample_steps = np.arange(0, n_total + 1, sample_stride, dtype=np.int64)
    if sample_steps[-1] != n_total:
        sample_steps = np.append(sample_steps, np.int64(n_total))

    h_static = build_terms(sys, field.b_bias).total()
    h_drive = drive_operator(sys)
    units = eng.step_unitaries(h_static, h_drive, coeffs, dts)
    cumulative = eng.accumulate(units, order, sample_steps)

    states = np.einsum("sij,jk,slk->sil", cumulative, rho0, cumulative.conj(), optimize=True)
    times = sample_steps * dt
    times[-1] = field.duration
    _check_states(states, times)
    return Trajectory(times, states, _observable_series(states))
