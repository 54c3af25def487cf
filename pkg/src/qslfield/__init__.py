"""Quantum speed limits for an electron in a power-law magnetic field.

The package solves the dimensionless second-order radial problem for an
electron in B = B0 * rho^n z-hat, turns the eigenpairs into quantum-speed-limit
(QSL) velocities and saturated QSL values, evaluates the Bremermann-Bekenstein
bound and the spin-crossing critical field, and ships a sweep CLI that emits
CSV/JSON tables.

Internal unit system: lengths in electron Compton wavelengths, energies in
electron rest energies, magnetic fields in units of the critical field, times
in Compton times.  See :mod:`qslfield.constants`.
"""

from .constants import CONSTANTS, Constants, from_dimensionless_field, to_dimensionless_field
from .errors import ConvergenceError, DegenerateLevelsError, QslFieldError
from .field import (
    PolePieceDesign,
    PowerLawField,
    design_to_powerlaw,
    field_at,
    solenoid_gap_field,
    vector_potential_at,
)
from .eigensolver import (
    EigenRequest,
    EigenSolution,
    RadialGrid,
    assemble_potential,
    solve,
    wavefunction_moment,
)
from .spectrum import (
    AnsatzFit,
    EnergyLevel,
    analytic_sqsl_up,
    energies,
    fit_ansatz,
    highfield_energy_uniform,
    sqsl_ansatz_displacement,
    uniform_alpha,
)
from .qsl import (
    QslResult,
    SaturationResult,
    qsl_time,
    qsl_velocity,
    radial_displacement,
    saturated_qsl,
    state_sweep,
)
from .bounds import BBPoint, CriticalFieldResult, bb_point, classify_region, critical_field

__version__ = "0.1.0"

__all__ = [
    "CONSTANTS",
    "Constants",
    "to_dimensionless_field",
    "from_dimensionless_field",
    "QslFieldError",
    "ConvergenceError",
    "DegenerateLevelsError",
    "PowerLawField",
    "PolePieceDesign",
    "field_at",
    "vector_potential_at",
    "solenoid_gap_field",
    "design_to_powerlaw",
    "EigenRequest",
    "EigenSolution",
    "RadialGrid",
    "assemble_potential",
    "solve",
    "wavefunction_moment",
    "EnergyLevel",
    "AnsatzFit",
    "energies",
    "uniform_alpha",
    "highfield_energy_uniform",
    "fit_ansatz",
    "analytic_sqsl_up",
    "sqsl_ansatz_displacement",
    "QslResult",
    "SaturationResult",
    "radial_displacement",
    "qsl_time",
    "qsl_velocity",
    "saturated_qsl",
    "state_sweep",
    "BBPoint",
    "CriticalFieldResult",
    "bb_point",
    "critical_field",
    "classify_region",
    "__version__",
]
