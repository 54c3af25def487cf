"""Physical constants and the dimensionless unit system used everywhere else.

Internal unit system:

* lengths in electron Compton wavelengths  (lambda_e = hbar / m_e c)
* energies in electron rest energies       (m_e c^2)
* magnetic fields in units of the critical field B_c = m_e^2 c^3 / (hbar e)
* times in Compton times                   (tau_C = hbar / m_e c^2)

In these units lambda_e / tau_C = c, and the combination k * lambda_e * B_c
(with k = e / m_e c^2) is exactly 1, so a power-law field B = B0 * rho^n
enters the radial problem only through the single dimensionless strength

    b0 = B0 * lambda_e^n / B_c        (B0 given in G pm^-n, lambda_e in pm).

Constants are fixed to 5 significant figures (CODATA-consistent); tolerance
budgets elsewhere absorb the truncation.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Constants:
    """Electron-scale constants in laboratory units (Gaussian CGS + pm)."""

    electron_rest_energy_mev: float = 0.51100
    compton_wavelength_pm: float = 0.38616
    critical_field_g: float = 4.414e13
    compton_time_s: float = 1.28809e-21
    speed_of_light_cm_s: float = 2.99792e10


CONSTANTS = Constants()

_MAX_EXPONENT = 64.0  # guards nonsense exponents; physics needs only |n| <~ 30


def to_dimensionless_field(b0_lab: float, n: float) -> float:
    """Convert a field scale B0 in G pm^-n to the dimensionless strength b0.

    Requires B0 > 0 and n > -1 (below n = -1 the effective radial potential
    stops being attractive and the bound-state problem is ill-posed).
    """
    if not b0_lab > 0.0:
        raise ValueError(f"field scale must be positive, got {b0_lab!r}")
    _validate_exponent(n)
    return b0_lab * CONSTANTS.compton_wavelength_pm**n / CONSTANTS.critical_field_g


def from_dimensionless_field(b0: float, n: float) -> float:
    """Inverse of :func:`to_dimensionless_field`; returns B0 in G pm^-n."""
    if not b0 > 0.0:
        raise ValueError(f"dimensionless field must be positive, got {b0!r}")
    _validate_exponent(n)
    return b0 * CONSTANTS.critical_field_g / CONSTANTS.compton_wavelength_pm**n


def _validate_exponent(n: float) -> None:
    if not n > -1.0:
        raise ValueError(f"field exponent must satisfy n > -1, got {n!r}")
    if not n <= _MAX_EXPONENT:
        raise ValueError(f"field exponent unreasonably large, got {n!r}")
