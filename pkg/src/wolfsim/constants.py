"""Tabulated physical constants.

Gyromagnetic ratios are stored as gamma / 2 pi in Hz/T (CODATA-style NMR
tables); helpers convert to the angular (rad s^-1 T^-1) values used
throughout the Hamiltonian builders.
"""

import math

# gamma / 2 pi in Hz per Tesla
GAMMA_OVER_2PI_HZ_PER_T = {
    "1H": 42.577478e6,
    "13C": 10.7084e6,
    "15N": -4.3163e6,
    "19F": 40.0776e6,
    "31P": 17.2515e6,
}


def gamma_rad_per_s_per_t(isotope: str) -> float:
    """Angular gyromagnetic ratio in rad s^-1 T^-1 for a tabulated isotope."""
    try:
        return 2.0 * math.pi * GAMMA_OVER_2PI_HZ_PER_T[isotope]
    except KeyError:
        known = ", ".join(sorted(GAMMA_OVER_2PI_HZ_PER_T))
        raise KeyError(f"unknown isotope {isotope!r}; tabulated: {known}") from None
