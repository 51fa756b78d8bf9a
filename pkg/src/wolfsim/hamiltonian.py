"""Hamiltonian construction for a scalar-coupled I2S system in low field.

The model is a pair of like spins (1, 2; gyromagnetic ratio gamma_i) plus
one unlike spin (3; gamma_s) in a static bias field with a parallel
oscillating low-frequency drive field.  The static Hamiltonian splits into
four pieces classified by their action in the singlet-triplet product
basis:

    h_diag     Zeeman terms at the bias field, the full 1-2 coupling and
               the exchange-symmetric zz part of the 1-3/2-3 couplings;
               diagonal in the singlet-triplet product basis.
    h_zz_diff  exchange-antisymmetric zz part, pi*(J13-J23)*(I1z-I2z)*S3z.
    h_ff_sum   exchange-symmetric heteronuclear flip-flop part.
    h_ff_diff  exchange-antisymmetric flip-flop part; this is the piece
               that connects |S0 b> with |T-1 a> and makes the drive work.

plus the drive term -B_drive(t)*(gamma_i*(I1z+I2z) + gamma_s*S3z).

All operator matrices are in angular-frequency units (rad/s) and use the
Zeeman product basis ordering declared in spincore.  Public constructors
take couplings in Hz and fields in Tesla.
"""

import math
from dataclasses import dataclass

import numpy as np

from .constants import gamma_rad_per_s_per_t
from .spincore import coupled_basis, spin_operator

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SpinSystem:
    """Coupling constants (Hz) and gyromagnetic ratios (rad s^-1 T^-1).

    j12_hz couples the like-spin pair; j13_hz/j23_hz couple each of them to
    the third spin.  Defaults for the ratios correspond to a 1H pair with a
    13C third spin.
    """

    j12_hz: float
    j13_hz: float
    j23_hz: float
    gamma_i: float = gamma_rad_per_s_per_t("1H")
    gamma_s: float = gamma_rad_per_s_per_t("13C")

    def __post_init__(self) -> None:
        for name in ("j12_hz", "j13_hz", "j23_hz", "gamma_i", "gamma_s"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.gamma_i == self.gamma_s:
            raise ValueError(
                "gamma_i and gamma_s must differ; equal ratios collapse the "
                "singlet-triplet transition frequency"
            )

    def near_equivalence_ratio(self) -> float:
        """|J13 - J23| / |J12|; small values mean the pair is nearly equivalent."""
        if self.j12_hz == 0.0:
            return math.inf
        return abs(self.j13_hz - self.j23_hz) / abs(self.j12_hz)


def fumarate() -> SpinSystem:
    """Singly 13C-labelled fumarate coupling set."""
    return SpinSystem(j12_hz=15.9, j13_hz=3.3, j23_hz=5.8)


def maleate() -> SpinSystem:
    """Singly 13C-labelled maleate coupling set."""
    return SpinSystem(j12_hz=12.3, j13_hz=2.5, j23_hz=12.9)


@dataclass(frozen=True)
class FieldSchedule:
    """Bias plus parallel cosine drive: B(t) = b_bias + b_wolf_peak*cos(omega_wolf*t + phase).

    All fields in Tesla, omega_wolf in rad/s, phase in radians, duration in
    seconds.
    """

    b_bias: float
    b_wolf_peak: float
    omega_wolf: float
    phase: float = 0.0
    duration: float = 0.0

    def __post_init__(self) -> None:
        for name in ("b_bias", "b_wolf_peak", "omega_wolf", "phase", "duration"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.duration < 0.0:
            raise ValueError("duration must be >= 0")
        if self.b_wolf_peak < 0.0:
            raise ValueError("b_wolf_peak must be >= 0")

    def drive_field(self, t):
        """Oscillating part of the field at time t (accepts arrays)."""
        return self.b_wolf_peak * np.cos(self.omega_wolf * np.asarray(t) + self.phase)

    def total_field(self, t):
        """Instantaneous total longitudinal field b_bias + drive."""
        return self.b_bias + self.drive_field(t)


def _zeeman_generator() -> tuple[np.ndarray, np.ndarray]:
    """Pair (I1z+I2z, S3z) from which both Zeeman terms are assembled."""
    i12z = spin_operator(3, 1, "z") + spin_operator(3, 2, "z")
    s3z = spin_operator(3, 3, "z")
    return i12z, s3z


@dataclass(frozen=True)
class HamiltonianTerms:
    """The four static pieces, each an 8x8 Hermitian matrix in rad/s."""

    h_diag: np.ndarray
    h_zz_diff: np.ndarray
    h_ff_sum: np.ndarray
    h_ff_diff: np.ndarray

    def total(self) -> np.ndarray:
        return self.h_diag + self.h_zz_diff + self.h_ff_sum + self.h_ff_diff


def build_terms(sys: SpinSystem, b_bias: float) -> HamiltonianTerms:
    """Static Hamiltonian split into its four symmetry-classified pieces.

    h_diag and h_ff_sum are symmetric under exchange of spins 1 and 2;
    h_zz_diff and h_ff_diff are antisymmetric (conjugation by the swap
    negates them).
    """
    i12z, s3z = _zeeman_generator()
    i1 = [spin_operator(3, 1, c) for c in "xyz"]
    i2 = [spin_operator(3, 2, c) for c in "xyz"]
    dot12 = sum(a @ b for a, b in zip(i1, i2))
    j_sum = sys.j13_hz + sys.j23_hz
    j_diff = sys.j13_hz - sys.j23_hz

    h_diag = (
        -b_bias * (sys.gamma_i * i12z + sys.gamma_s * s3z)
        + TWO_PI * sys.j12_hz * dot12
        + math.pi * j_sum * (i12z @ s3z)
    )
    h_zz_diff = (
        math.pi
        * j_diff
        * ((spin_operator(3, 1, "z") - spin_operator(3, 2, "z")) @ s3z)
    )
    s3p = spin_operator(3, 3, "+")
    s3m = spin_operator(3, 3, "-")
    ff1 = spin_operator(3, 1, "+") @ s3m + spin_operator(3, 1, "-") @ s3p
    ff2 = spin_operator(3, 2, "+") @ s3m + spin_operator(3, 2, "-") @ s3p
    h_ff_sum = 0.5 * math.pi * j_sum * (ff1 + ff2)
    h_ff_diff = 0.5 * math.pi * j_diff * (ff1 - ff2)
    return HamiltonianTerms(h_diag, h_zz_diff, h_ff_sum, h_ff_diff)


def drive_operator(sys: SpinSystem) -> np.ndarray:
    """Zeeman response to the longitudinal drive, per Tesla of field."""
    i12z, s3z = _zeeman_generator()
    return -(sys.gamma_i * i12z + sys.gamma_s * s3z)


def build_wolf(sys: SpinSystem, field: FieldSchedule, t: float) -> np.ndarray:
    """Instantaneous oscillating-field Zeeman term at time t."""
    if not math.isfinite(t):
        raise ValueError("t must be finite")
    return float(field.drive_field(t)) * drive_operator(sys)


def total_hamiltonian(sys: SpinSystem, field: FieldSchedule, t: float) -> np.ndarray:
    """Full 8x8 Hamiltonian at time t (static pieces plus drive), rad/s."""
    return build_terms(sys, field.b_bias).total() + build_wolf(sys, field, t)


#: Ordered state labels of the two conserved-Mz 3x3 blocks.
BLOCK_LABELS = {
    "V": ("S0a", "T0a", "T+1b"),
    "W": ("S0b", "T0b", "T-1a"),
}


def block_restrict(sys: SpinSystem, field: FieldSchedule, t: float, block: str) -> np.ndarray:
    """Closed-form 3x3 restriction of H(t) to one conserved-Mz block.

    Basis order follows BLOCK_LABELS.  The total z angular momentum is
    conserved, so these blocks evolve independently; W hosts the
    singlet-to-triplet population transfer.
    """
    if block not in BLOCK_LABELS:
        raise ValueError(f"block must be 'V' or 'W', got {block!r}")
    b = float(field.total_field(t))
    j12 = sys.j12_hz
    j_sum = sys.j13_hz + sys.j23_hz
    j_diff = sys.j13_hz - sys.j23_hz
    pi = math.pi
    if block == "W":
        # {S0b, T0b, T-1a}: the I pair carries Mz 0, 0, -1 and the third
        # spin -1/2, -1/2, +1/2.
        return np.array(
            [
                [
                    0.5 * (b * sys.gamma_s - 3.0 * pi * j12),
                    0.5 * pi * (-j_diff),
                    pi / math.sqrt(2.0) * j_diff,
                ],
                [
                    0.5 * pi * (-j_diff),
                    0.5 * (b * sys.gamma_s + pi * j12),
                    pi / math.sqrt(2.0) * j_sum,
                ],
                [
                    pi / math.sqrt(2.0) * j_diff,
                    pi / math.sqrt(2.0) * j_sum,
                    (sys.gamma_i - 0.5 * sys.gamma_s) * b + 0.5 * pi * (j12 - j_sum),
                ],
            ]
        )
    # V = {S0a, T0a, T+1b}: mirror block with all Zeeman signs reversed and
    # the antisymmetric couplings picking up a sign.
    return np.array(
        [
            [
                -0.5 * (b * sys.gamma_s + 3.0 * pi * j12),
                0.5 * pi * j_diff,
                -pi / math.sqrt(2.0) * j_diff,
            ],
            [
                0.5 * pi * j_diff,
                -0.5 * b * sys.gamma_s + 0.5 * pi * j12,
                pi / math.sqrt(2.0) * j_sum,
            ],
            [
                -pi / math.sqrt(2.0) * j_diff,
                pi / math.sqrt(2.0) * j_sum,
                (0.5 * sys.gamma_s - sys.gamma_i) * b + 0.5 * pi * (j12 - j_sum),
            ],
        ]
    )


def block_project(h: np.ndarray, labels) -> np.ndarray:
    """Restriction of an 8x8 operator to the span of named coupled states."""
    by_label = {s.label: s.vector for s in coupled_basis()}
    vecs = np.column_stack([by_label[name] for name in labels])
    return vecs.conj().T @ h @ vecs


def mixing_angles(sys: SpinSystem) -> tuple[float, float]:
    """Singlet-triplet mixing angle theta and coupling polar angle phi.

    theta has tangent (J13-J23)/(2*J12): rotating the {S0b, T0b} pair by
    theta/2 removes their static coupling exactly.  phi has tangent
    (J13-J23)/(J13+J23) and satisfies
    sqrt(J13^2+J23^2)*sin(phi) = (J13-J23)/sqrt(2) (same for cos with the
    sum).  Both angles are small in the near-equivalence regime.
    """
    j_diff = sys.j13_hz - sys.j23_hz
    if sys.j12_hz == 0.0 and j_diff == 0.0:
        raise ValueError("theta undefined: J12 = 0 and J13 = J23")
    if sys.j13_hz == 0.0 and sys.j23_hz == 0.0:
        raise ValueError("phi undefined: J13 = J23 = 0")
    theta = math.atan2(j_diff, 2.0 * sys.j12_hz)
    phi = math.atan2(j_diff, sys.j13_hz + sys.j23_hz)
    return theta, phi


def rotated_block(sys: SpinSystem, field: FieldSchedule, t: float) -> np.ndarray:
    """W block expressed in the theta-rotated basis by exact conjugation.

    The rotation acts in the {S0b, T0b} plane with the angle from
    mixing_angles, leaving the third state untouched.  No near-equivalence
    approximation is made, so the output is exact; the (1,2) entry vanishes
    identically because theta is chosen to cancel it and the diagonal gap
    it rotates against is field-independent.
    """
    theta, _ = mixing_angles(sys)
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    rot = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
    w = block_restrict(sys, field, t, "W")
    return rot.T @ w @ rot


def omega_st(sys: SpinSystem, b_bias: float) -> float:
    """Singlet-triplet transition angular frequency (rad/s).

    Gap between the |T-1 a> and |S0 b> diagonal energies of the dominant
    static part: b_bias*(gamma_i-gamma_s) + (pi/2)*(4*J12-J13-J23).
    """
    return b_bias * (sys.gamma_i - sys.gamma_s) + 0.5 * math.pi * (
        4.0 * sys.j12_hz - sys.j13_hz - sys.j23_hz
    )


def omega_tt(sys: SpinSystem, b_bias: float) -> float:
    """Triplet-triplet (T'0 b to T'-1 a) transition angular frequency (rad/s).

    Sits 2*pi*J12 below the singlet-triplet transition, which is what makes
    the drive selective.
    """
    return b_bias * (sys.gamma_i - sys.gamma_s) - 0.5 * math.pi * (
        sys.j13_hz + sys.j23_hz
    )


@dataclass(frozen=True)
class PauliModel:
    """Two-level reduction of the driven W block, all coefficients rad/s.

    The reduced Hamiltonian is
        h(t) = omega0(t)*identity + omega_x*sigma_x/2 + omega_z(t)*sigma_z/2
    with omega0(t) = omega0_static + omega0_cos_amp*cos(omega_drive*t) and
    likewise for omega_z.  The cosine runs at the drive frequency of the
    FieldSchedule that built the model.
    """

    omega0_static: float
    omega0_cos_amp: float
    omega_x: float
    omega_z_static: float
    omega_z_cos_amp: float


def transverse_rate(sys: SpinSystem) -> float:
    """sigma_x coefficient of the two-level model (rad/s).

    pi*sqrt(2)*(cos(theta/2)*(J13-J23) + sin(theta/2)*(J13+J23)): the
    rotated-basis coupling between |S'0 b> and |T'-1 a>.
    """
    theta, _ = mixing_angles(sys)
    return (
        math.pi
        * math.sqrt(2.0)
        * (
            math.cos(theta / 2.0) * (sys.j13_hz - sys.j23_hz)
            + math.sin(theta / 2.0) * (sys.j13_hz + sys.j23_hz)
        )
    )


def transverse_rate_polar(sys: SpinSystem) -> float:
    """Equivalent polar form 2*pi*sqrt(J13^2+J23^2)*sin(phi + theta/2)."""
    theta, phi = mixing_angles(sys)
    return (
        TWO_PI
        * math.hypot(sys.j13_hz, sys.j23_hz)
        * math.sin(phi + theta / 2.0)
    )


def two_level_model(sys: SpinSystem, field: FieldSchedule) -> PauliModel:
    """Pauli coefficients of the {S'0 b, T'-1 a} two-level reduction.

    Valid off resonance as well: the static parts depend only on the bias
    field and couplings, while the cosine amplitudes scale the drive peak.
    On resonance omega_z_static equals -omega_st exactly.
    """
    j_sum = sys.j13_hz + sys.j23_hz
    omega0_static = 0.5 * sys.gamma_i * field.b_bias - 0.25 * math.pi * (
        2.0 * sys.j12_hz + j_sum
    )
    omega0_cos_amp = 0.5 * sys.gamma_i * field.b_wolf_peak
    omega_z_static = field.b_bias * (sys.gamma_s - sys.gamma_i) + 0.5 * math.pi * (
        j_sum - 4.0 * sys.j12_hz
    )
    omega_z_cos_amp = -field.b_wolf_peak * (sys.gamma_i - sys.gamma_s)
    return PauliModel(
        omega0_static=omega0_static,
        omega0_cos_amp=omega0_cos_amp,
        omega_x=transverse_rate(sys),
        omega_z_static=omega_z_static,
        omega_z_cos_amp=omega_z_cos_amp,
    )
