"""Power-law magnetic field, its vector potential, and the pole-piece design map.

The field is B = B0 * rho^n z-hat in cylindrical coordinates, with rho in pm
and B in G, so B0 carries units G pm^-n.  The gauge choice for the vector
potential is the azimuthal A = B0 rho^(n+1) / (n+2).

The laboratory realization is an electromagnet whose pole-piece surfaces
follow z = z0 (r + r0)^p_surf; the air-gap field of such a magnet falls off
as the inverse gap, which maps the surface exponent onto a power-law field
with n = -p_surf.  Electromagnet formulas are evaluated in Gaussian practical
units (G, cm, A) to avoid SI/CGS factor drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

from .constants import to_dimensionless_field

_CM_PER_PM = 1.0e-10

# B [G] = 0.4 pi N I / L [cm] for a solenoid of N total turns carrying I ampere
_SOLENOID_G_CM_PER_A = 0.4 * math.pi


@dataclass(frozen=True)
class PowerLawField:
    """The pair (B0, n) plus the cached dimensionless strength b0."""

    B0: float  # G pm^-n
    n: float
    b0: float = dataclass_field(init=False)

    def __post_init__(self) -> None:
        # to_dimensionless_field validates B0 > 0 and n > -1
        object.__setattr__(self, "b0", to_dimensionless_field(self.B0, self.n))


def field_at(f: PowerLawField, rho_pm: float) -> float:
    """Field magnitude B0 * rho^n in G at radius rho (pm)."""
    if rho_pm < 0.0:
        raise ValueError(f"radius must be non-negative, got {rho_pm!r}")
    if rho_pm == 0.0 and f.n < 0.0:
        raise ValueError("field of negative exponent is singular on the axis")
    return f.B0 * rho_pm**f.n


def vector_potential_at(f: PowerLawField, rho_pm: float) -> float:
    """Azimuthal vector potential B0 * rho^(n+1) / (n+2) in G pm."""
    if rho_pm < 0.0:
        raise ValueError(f"radius must be non-negative, got {rho_pm!r}")
    return f.B0 * rho_pm ** (f.n + 1.0) / (f.n + 2.0)


@dataclass(frozen=True)
class PolePieceDesign:
    """Electromagnet with machined pole pieces, z = z0 (r + r0)^p_surf.

    Lengths in cm.  z0 carries units cm^(1 - p_surf) so the gap
    L_G(r) = 2 z0 (r + r0)^p_surf comes out in cm.  p_surf is the surface
    exponent (concave pole pieces have p_surf < 0 and give a field growing
    with radius).
    """

    turns_per_cm: float
    current_a: float
    mu_rel: float
    core_length_cm: float
    z0: float
    r0: float
    p_surf: float

    def __post_init__(self) -> None:
        if self.turns_per_cm <= 0.0 or self.current_a <= 0.0:
            raise ValueError("winding density and current must be positive")
        if self.mu_rel < 1.0:
            raise ValueError(f"relative permeability must be >= 1, got {self.mu_rel!r}")
        if self.core_length_cm <= 0.0:
            raise ValueError("core length must be positive")
        if self.z0 <= 0.0 or self.r0 < 0.0:
            raise ValueError("surface scale z0 must be positive and offset r0 non-negative")

    @property
    def k_g_cm(self) -> float:
        """Magnetomotive constant K = mu0 N I, in G cm."""
        return _SOLENOID_G_CM_PER_A * self.turns_per_cm * self.core_length_cm * self.current_a

    def gap_cm(self, r_cm: float) -> float:
        """Pole gap L_G(r) = 2 z0 (r + r0)^p_surf."""
        return 2.0 * self.z0 * (r_cm + self.r0) ** self.p_surf


def solenoid_gap_field(d: PolePieceDesign, gap_cm: float) -> float:
    """Air-gap field B = N I mu0 mu / (L_c mu0 + L_G mu) in G.

    For mu >> mu0 this approaches K / L_G; the denominator stays bounded
    below by the core reluctance, so the field saturates for tiny gaps.
    """
    if gap_cm <= 0.0:
        raise ValueError(f"gap must be positive, got {gap_cm!r}")
    n_total = d.turns_per_cm * d.core_length_cm
    return _SOLENOID_G_CM_PER_A * n_total * d.current_a / (d.core_length_cm / d.mu_rel + gap_cm)


def design_to_powerlaw(d: PolePieceDesign, r_probe_pm: float) -> PowerLawField:
    """Map the design onto B = B0 r^n with n = -p_surf and B0 = K / (2 z0).

    Valid where r >> r0 and the core reluctance is negligible; enforced as
    r_probe >= 10 r0.  The returned B0 is converted to G pm^-n.
    """
    r_probe_cm = r_probe_pm * _CM_PER_PM
    if r_probe_cm < 10.0 * d.r0:
        raise ValueError(
            f"power-law approximation invalid: r_probe = {r_probe_cm!r} cm "
            f"is not >= 10 r0 = {10.0 * d.r0!r} cm"
        )
    n = -d.p_surf
    b0_cm_units = d.k_g_cm / (2.0 * d.z0)  # G cm^-n
    b0_pm_units = b0_cm_units * _CM_PER_PM**n
    return PowerLawField(B0=b0_pm_units, n=n)
