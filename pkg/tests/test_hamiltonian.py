import math

import numpy as np
import pytest

from wolfsim.constants import gamma_rad_per_s_per_t
from wolfsim.hamiltonian import (
    BLOCK_LABELS,
    FieldSchedule,
    SpinSystem,
    block_project,
    block_restrict,
    build_terms,
    build_wolf,
    fumarate,
    maleate,
    mixing_angles,
    omega_st,
    omega_tt,
    rotated_block,
    total_hamiltonian,
    two_level_model,
)
from wolfsim.spincore import spin_operator, swap_operator, total_z_operator

GAMMA_H = gamma_rad_per_s_per_t("1H")
GAMMA_C = gamma_rad_per_s_per_t("13C")

SYSTEMS = [
    fumarate(),
    maleate(),
    SpinSystem(j12_hz=7.3, j13_hz=-2.1, j23_hz=4.9),
]

FIELDS = [
    FieldSchedule(b_bias=2e-6, b_wolf_peak=2e-6, omega_wolf=486.1),
    FieldSchedule(b_bias=0.7e-6, b_wolf_peak=3.4e-6, omega_wolf=120.0, phase=1.1),
]


def test_spin_system_validation():
    with pytest.raises(ValueError):
        SpinSystem(j12_hz=float("nan"), j13_hz=1.0, j23_hz=1.0)
    with pytest.raises(ValueError):
        SpinSystem(j12_hz=1.0, j13_hz=1.0, j23_hz=1.0, gamma_i=5.0, gamma_s=5.0)


def test_presets():
    f = fumarate()
    assert (f.j12_hz, f.j13_hz, f.j23_hz) == (15.9, 3.3, 5.8)
    assert f.gamma_i == pytest.approx(GAMMA_H)
    assert f.gamma_s == pytest.approx(GAMMA_C)
    m = maleate()
    assert (m.j12_hz, m.j13_hz, m.j23_hz) == (12.3, 2.5, 12.9)


def test_field_schedule():
    f = FieldSchedule(b_bias=2e-6, b_wolf_peak=1e-6, omega_wolf=100.0, phase=0.5)
    t = np.array([0.0, 0.01, 0.02])
    assert np.allclose(f.drive_field(t), 1e-6 * np.cos(100.0 * t + 0.5))
    assert np.allclose(f.total_field(t), 2e-6 + f.drive_field(t))
    with pytest.raises(ValueError):
        FieldSchedule(b_bias=2e-6, b_wolf_peak=1e-6, omega_wolf=100.0, duration=-1.0)


def test_terms_hermitian_and_sum():
    for sys in SYSTEMS:
        terms = build_terms(sys, 2e-6)
        total = np.zeros((8, 8), dtype=complex)
        for h in (terms.h_diag, terms.h_zz_diff, terms.h_ff_sum, terms.h_ff_diff):
            assert np.allclose(h, h.conj().T, atol=1e-12)
            total += h
        assert np.allclose(terms.total(), total)


def test_terms_swap_symmetry():
    # exchanging the proton pair: zz_diff and ff_diff are odd, the rest even
    p = swap_operator(3, 1, 2)
    terms = build_terms(fumarate(), 2e-6)
    assert np.allclose(p @ terms.h_diag @ p, terms.h_diag, atol=1e-12)
    assert np.allclose(p @ terms.h_ff_sum @ p, terms.h_ff_sum, atol=1e-12)
    assert np.allclose(p @ terms.h_zz_diff @ p, -terms.h_zz_diff, atol=1e-12)
    assert np.allclose(p @ terms.h_ff_diff @ p, -terms.h_ff_diff, atol=1e-12)


def test_total_mz_conserved():
    fz = total_z_operator(3)
    for sys in SYSTEMS:
        for field in FIELDS:
            h = total_hamiltonian(sys, field, t=0.0137)
            assert np.max(np.abs(h @ fz - fz @ h)) < 1e-9


def test_drive_operator_matrix_elements():
    # independent route: the drive is diagonal in the product basis with
    # entry -B(t)*(gamma_i*mI + gamma_s*mS) read off the bit pattern
    sys = fumarate()
    field = FIELDS[0]
    for t in (0.0, 0.003, 0.011):
        h = build_wolf(sys, field, t)
        b = field.drive_field(t)
        diag = np.zeros(8)
        for k in range(8):
            bits = [(k >> (2 - s)) & 1 for s in range(3)]
            m = [0.5 if bit == 0 else -0.5 for bit in bits]
            diag[k] = -b * (sys.gamma_i * (m[0] + m[1]) + sys.gamma_s * m[2])
        assert np.allclose(h, np.diag(diag), atol=1e-20)


def test_total_hamiltonian_is_sum_of_parts():
    sys = maleate()
    field = FIELDS[1]
    t = 0.004
    want = build_terms(sys, field.b_bias).total() + build_wolf(sys, field, t)
    assert np.allclose(total_hamiltonian(sys, field, t), want)


def test_block_restrict_matches_projection():
    # dual route: closed-form 3x3 entries vs projecting the full 8x8
    for sys in SYSTEMS:
        for field in FIELDS:
            for t in (0.0, 0.0021, 0.09):
                h = total_hamiltonian(sys, field, t)
                for block, labels in BLOCK_LABELS.items():
                    closed = block_restrict(sys, field, t, block)
                    projected = block_project(h, labels)
                    assert np.max(np.abs(closed - projected)) < 1e-12
                    assert np.max(np.abs(projected.imag)) < 1e-15


def test_blocks_are_decoupled():
    # no matrix element connects the W block to its complement
    sys = fumarate()
    field = FIELDS[0]
    h = total_hamiltonian(sys, field, t=0.002)
    from wolfsim.spincore import coupled_basis

    by_label = {s.label: s.vector for s in coupled_basis()}
    w = np.column_stack([by_label[n] for n in BLOCK_LABELS["W"]])
    rest = np.column_stack(
        [by_label[n] for n in by_label if n not in BLOCK_LABELS["W"]]
    )
    assert np.max(np.abs(w.conj().T @ h @ rest)) < 1e-12


def test_block_restrict_bad_name():
    with pytest.raises(ValueError):
        block_restrict(fumarate(), FIELDS[0], 0.0, "X")


def test_mixing_angles():
    for sys in SYSTEMS:
        theta, phi = mixing_angles(sys)
        j_diff = sys.j13_hz - sys.j23_hz
        assert math.tan(theta) == pytest.approx(j_diff / (2 * sys.j12_hz), rel=1e-12)
        assert math.tan(phi) == pytest.approx(
            j_diff / (sys.j13_hz + sys.j23_hz), rel=1e-12
        )
    # fumarate: J13 < J23 so both angles come out negative
    theta, phi = mixing_angles(fumarate())
    assert theta < 0 and phi < 0
    with pytest.raises(ValueError):
        mixing_angles(SpinSystem(j12_hz=0.0, j13_hz=2.0, j23_hz=2.0))
    with pytest.raises(ValueError):
        mixing_angles(SpinSystem(j12_hz=1.0, j13_hz=0.0, j23_hz=0.0))


def test_rotation_cancels_singlet_triplet_coupling():
    # (1,2) entry of the rotated W block vanishes at every time, not just
    # on average: the entry being rotated away is drive-independent
    for sys in SYSTEMS:
        for field in FIELDS:
            for t in np.linspace(0.0, 0.05, 7):
                rb = rotated_block(sys, field, t)
                assert abs(rb[0, 1]) < 1e-12
                assert abs(rb[1, 0]) < 1e-12
                w = block_restrict(sys, field, t, "W")
                assert rb[2, 2] == pytest.approx(w[2, 2], abs=1e-12)


def test_transition_frequencies_match_block_diagonals():
    # omega_st and omega_tt are the static W-block diagonal gaps
    for sys in SYSTEMS:
        for b in (0.5e-6, 2e-6, 7e-6):
            field = FieldSchedule(b_bias=b, b_wolf_peak=0.0, omega_wolf=1.0)
            w = block_restrict(sys, field, 0.0, "W")
            assert omega_st(sys, b) == pytest.approx(
                (w[2, 2] - w[0, 0]).real, abs=1e-9
            )
            assert omega_tt(sys, b) == pytest.approx(
                (w[2, 2] - w[1, 1]).real, abs=1e-9
            )
            # the two transitions are split by exactly 2*pi*J12
            assert omega_st(sys, b) - omega_tt(sys, b) == pytest.approx(
                2 * math.pi * sys.j12_hz, rel=1e-12
            )


def test_fumarate_resonance_value():
    assert omega_st(fumarate(), 2e-6) / (2 * math.pi) == pytest.approx(
        77.363, abs=0.001
    )
    assert omega_tt(fumarate(), 2e-6) / (2 * math.pi) == pytest.approx(
        61.463, abs=0.001
    )


def test_two_level_model_matches_block():
    # Pauli decomposition vs the {S'0b, T'-1a} corners of the W block:
    # omega0 is the half-trace, omega_z the diagonal gap (leading order in
    # theta, exact in the unrotated diagonals), omega_x twice the rotated
    # corner coupling
    for sys in SYSTEMS:
        for field in FIELDS:
            pm = two_level_model(sys, field)
            theta, phi = mixing_angles(sys)
            for t in (0.0, 0.0042, 0.031):
                c = math.cos(field.omega_wolf * t + field.phase)
                w = block_restrict(sys, field, t, "W")
                rb = rotated_block(sys, field, t)
                w0 = pm.omega0_static + pm.omega0_cos_amp * c
                wz = pm.omega_z_static + pm.omega_z_cos_amp * c
                assert w0 == pytest.approx(0.5 * (w[0, 0] + w[2, 2]).real, abs=1e-9)
                assert wz == pytest.approx((w[0, 0] - w[2, 2]).real, abs=1e-9)
                assert pm.omega_x == pytest.approx(2.0 * rb[0, 2].real, abs=1e-9)
            # static z splitting is minus the transition frequency
            assert pm.omega_z_static == pytest.approx(
                -omega_st(sys, field.b_bias), rel=1e-12
            )


def test_omega_x_polar_form():
    for sys in SYSTEMS:
        theta, phi = mixing_angles(sys)
        pm = two_level_model(sys, FIELDS[0])
        want = (
            2.0
            * math.pi
            * math.hypot(sys.j13_hz, sys.j23_hz)
            * math.sin(phi + theta / 2.0)
        )
        assert pm.omega_x == pytest.approx(want, rel=1e-12)
