"""Spin-1/2 operator algebra and basis sets for the three-spin system.

Conventions (fixed here, relied on by every other module):

* Zeeman product basis ordering is spin-1 (x) spin-2 (x) spin-3 with alpha
  before beta, i.e. index = 4*b1 + 2*b2 + b3 where alpha -> 0 and beta -> 1.
* Spin operators use the physics normalization: x/y/z components have
  eigenvalues +-1/2 (no hbar), raising/lowering are z-basis ladder operators.
* The proton pair (spins 1, 2) is combined into singlet/triplet states with
  the standard Condon-Shortley phases:
      T+1 = |aa>, T0 = (|ab> + |ba>)/sqrt(2), T-1 = |bb>,
      S0  = (|ab> - |ba>)/sqrt(2).
* Everything is complex128 throughout, even where matrices happen to be
  real, because the propagators built on top are genuinely complex.
"""

from dataclasses import dataclass, field

import numpy as np

_SINGLE_SPIN = {
    "x": 0.5 * np.array([[0, 1], [1, 0]], dtype=complex),
    "y": 0.5 * np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": 0.5 * np.array([[1, 0], [0, -1]], dtype=complex),
    "+": np.array([[0, 1], [0, 0]], dtype=complex),
    "-": np.array([[0, 0], [1, 0]], dtype=complex),
}

#: Coupled (singlet-triplet product) basis labels, in the fixed order used
#: everywhere: labels pair an I-pair state with the S-spin Zeeman state
#: (a = alpha, b = beta).
COUPLED_LABELS = ("T+1a", "T+1b", "T0a", "T0b", "T-1a", "T-1b", "S0a", "S0b")

#: CSV/observable names matching COUPLED_LABELS element by element.
POPULATION_KEYS = (
    "p_Tp1alpha",
    "p_Tp1beta",
    "p_T0alpha",
    "p_T0beta",
    "p_Tm1alpha",
    "p_Tm1beta",
    "p_S0alpha",
    "p_S0beta",
)


def spin_operator(n_spins: int, index: int, component: str) -> np.ndarray:
    """Single-spin operator embedded into the n-spin product space.

    Parameters
    ----------
    n_spins : number of spin-1/2 sites in the register.
    index : 1-based site index.
    component : one of 'x', 'y', 'z', '+', '-'.

    Returns the 2^n x 2^n complex matrix acting as the requested component
    on the chosen site and as identity elsewhere.
    """
    if not 1 <= index <= n_spins:
        raise ValueError(f"spin index {index} out of range 1..{n_spins}")
    try:
        op = _SINGLE_SPIN[component]
    except KeyError:
        raise ValueError(f"unknown component {component!r}; expected x, y, z, + or -") from None
    out = np.ones((1, 1), dtype=complex)
    for site in range(1, n_spins + 1):
        out = np.kron(out, op if site == index else np.eye(2, dtype=complex))
    return out


def swap_operator(n_spins: int, i: int, j: int) -> np.ndarray:
    """Permutation operator exchanging spins i and j (1-based)."""
    if not (1 <= i <= n_spins and 1 <= j <= n_spins):
        raise ValueError(f"swap indices ({i}, {j}) out of range 1..{n_spins}")
    dim = 2**n_spins
    perm = np.zeros((dim, dim), dtype=complex)
    for k in range(dim):
        bits = [(k >> (n_spins - 1 - s)) & 1 for s in range(n_spins)]
        bits[i - 1], bits[j - 1] = bits[j - 1], bits[i - 1]
        k2 = 0
        for b in bits:
            k2 = (k2 << 1) | b
        perm[k2, k] = 1.0
    return perm


@dataclass(frozen=True, eq=False)
class BasisState:
    """A labelled unit vector in the Zeeman product basis."""

    label: str
    vector: np.ndarray


def coupled_basis() -> list[BasisState]:
    """The eight singlet-triplet product states, ordered as COUPLED_LABELS.

    The I-spin pair (spins 1, 2) carries the singlet/triplet structure; the
    S-spin (spin 3) contributes its alpha/beta Zeeman state.
    """
    rt2 = np.sqrt(2.0)
    pair = {
        "T+1": _two_spin("aa"),
        "T0": (_two_spin("ab") + _two_spin("ba")) / rt2,
        "T-1": _two_spin("bb"),
        "S0": (_two_spin("ab") - _two_spin("ba")) / rt2,
    }
    s_spin = {"a": np.array([1.0, 0.0], dtype=complex), "b": np.array([0.0, 1.0], dtype=complex)}
    states = []
    for label in COUPLED_LABELS:
        pair_label, m_s = label[:-1], label[-1]
        states.append(BasisState(label, np.kron(pair[pair_label], s_spin[m_s])))
    return states


def _two_spin(pattern: str) -> np.ndarray:
    idx = (0 if pattern[0] == "a" else 2) + (0 if pattern[1] == "a" else 1)
    vec = np.zeros(4, dtype=complex)
    vec[idx] = 1.0
    return vec


@dataclass(frozen=True, eq=False)
class RotatedBasis:
    """The tilted three-state basis used to absorb singlet-triplet mixing.

    states holds (S'0b, T'0b, T'-1a) where the primed pair is a rotation by
    theta/2 inside the {S0b, T0b} plane and T'-1a = T-1a unchanged.
    """

    theta: float
    states: tuple[BasisState, BasisState, BasisState] = field(repr=False)


def rotated_basis(theta: float) -> RotatedBasis:
    """Rotate the {S0b, T0b} pair by the mixing angle theta.

        |S'0b>  = cos(theta/2) |S0b> + sin(theta/2) |T0b>
        |T'0b>  = cos(theta/2) |T0b> - sin(theta/2) |S0b>
        |T'-1a> = |T-1a>
    """
    if not np.isfinite(theta):
        raise ValueError("theta must be finite")
    by_label = {s.label: s.vector for s in coupled_basis()}
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    sp = c * by_label["S0b"] + s * by_label["T0b"]
    tp = c * by_label["T0b"] - s * by_label["S0b"]
    return RotatedBasis(
        theta,
        (
            BasisState("S'0b", sp),
            BasisState("T'0b", tp),
            BasisState("T'-1a", by_label["T-1a"].copy()),
        ),
    )


def expectation(rho: np.ndarray, obs: np.ndarray) -> complex:
    """Tr(rho . obs); real up to roundoff when obs is Hermitian."""
    rho = np.asarray(rho)
    obs = np.asarray(obs)
    if rho.shape != obs.shape or rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"dimension mismatch: rho {rho.shape} vs obs {obs.shape}")
    return complex(np.trace(rho @ obs))


def total_z_operator(n_spins: int = 3) -> np.ndarray:
    """Sum of all z components; its eigenvalue blocks are conserved here."""
    dim = 2**n_spins
    out = np.zeros((dim, dim), dtype=complex)
    for k in range(1, n_spins + 1):
        out += spin_operator(n_spins, k, "z")
    return out
