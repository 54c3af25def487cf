"""Bremermann-Bekenstein bound evaluation and the spin-crossing critical field.

For one bit of information the bound reads <H> > hbar ln2 / (pi tau_QSL).
With the equal superposition of levels (nu, nu+1), <H> is the mean of the two
energies (rest energy included by default) and the right side reduces to
(eps_{nu+1} - eps_nu) ln2 / pi^2, both in rest energies.

The right side is proportional to the level gap, so the field where the
spin-up and spin-down gaps coincide is where the two right-side curves cross;
for growing fields (n > 0) that crossing exists and serves as the critical
field separating the non-relativistic and relativistic regimes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import from_dimensionless_field
from .eigensolver import EigenRequest, solve
from .field import PowerLawField
from .spectrum import energies

_REGION_I_MAX = 0.1    # alpha_1 below this: non-relativistic
_REGION_II_MAX = 10.0  # alpha_1 above this: relativistic
_BRACKET_RTOL = 1.0e-5
_SCAN_POINTS_PER_DECADE = 2


@dataclass(frozen=True)
class BBPoint:
    """Both sides of the bound at one field strength, in rest energies."""

    n: float
    b0: float
    spin: str
    lhs_energy_per_bit: float
    rhs: float
    region: str

    @property
    def bound_holds(self) -> bool:
        return self.lhs_energy_per_bit > self.rhs


@dataclass(frozen=True)
class CriticalFieldResult:
    n: float
    found: bool
    b0_critical: float | None
    B0_critical: float | None  # G pm^-n
    bracket: tuple[float, float]


def classify_region(alpha1: float) -> str:
    """Regime from the first-excited eigenvalue: I / II / III.

    Thresholds 0.1 and 10 put the uniform-field critical strength b0 = 1
    (alpha_1 of 2..4) in the transition region II.
    """
    if alpha1 < 0.0:
        raise ValueError(f"alpha_1 must be non-negative, got {alpha1!r}")
    if alpha1 < _REGION_I_MAX:
        return "I"
    if alpha1 <= _REGION_II_MAX:
        return "II"
    return "III"


def bb_point(
    n: float,
    b0: float,
    spin: str = "up",
    nu: int = 0,
    include_rest_energy: bool = True,
) -> BBPoint:
    """Evaluate both sides of the bound for the (nu, nu+1) superposition.

    ``include_rest_energy = False`` subtracts the rest energy from <H> for
    sensitivity studies; the default convention is the literal expectation of
    the Hamiltonian in the superposition state.
    """
    field = PowerLawField(B0=from_dimensionless_field(b0, n), n=n)
    sol = solve(EigenRequest(field=field, spin=spin, levels=nu + 2))
    levels = energies(sol)
    eps_lo = levels[nu].energy
    eps_hi = levels[nu + 1].energy
    lhs = 0.5 * (eps_lo + eps_hi) - (0.0 if include_rest_energy else 1.0)
    rhs = (eps_hi - eps_lo) * math.log(2.0) / math.pi**2
    return BBPoint(
        n=n,
        b0=b0,
        spin=spin,
        lhs_energy_per_bit=lhs,
        rhs=rhs,
        region=classify_region(float(sol.alphas[min(1, len(levels) - 1)])),
    )


def critical_field(
    n: float, bracket: tuple[float, float] = (1.0e-6, 1.0e6)
) -> CriticalFieldResult:
    """Locate the b0 where the spin-up and spin-down (0,1) gaps coincide.

    Scans the bracket on a log grid for a sign change of
    g(b0) = gap_up - gap_down, then bisects to relative width 1e-4.  Without
    a sign change (the uniform field never crosses) ``found`` is False.
    """
    lo, hi = bracket
    if not (0.0 < lo < hi):
        raise ValueError(f"invalid bracket {bracket!r}")

    def gap_diff(b0: float) -> float:
        gaps = {}
        for spin in ("up", "down"):
            field = PowerLawField(B0=from_dimensionless_field(b0, n), n=n)
            levels = energies(solve(EigenRequest(field=field, spin=spin, levels=2)))
            gaps[spin] = levels[1].energy - levels[0].energy
        return gaps["up"] - gaps["down"]

    decades = math.log10(hi / lo)
    count = max(int(round(decades * _SCAN_POINTS_PER_DECADE)) + 1, 2)
    grid = np.logspace(math.log10(lo), math.log10(hi), count)
    values = [gap_diff(float(b)) for b in grid]

    crossing = None
    for i in range(len(grid) - 1):
        if values[i] == 0.0:
            crossing = (float(grid[i]), float(grid[i]))
            break
        if values[i] * values[i + 1] < 0.0:
            crossing = (float(grid[i]), float(grid[i + 1]))
            break
    if crossing is None:
        return CriticalFieldResult(
            n=n, found=False, b0_critical=None, B0_critical=None, bracket=bracket
        )

    blo, bhi = crossing
    glo = gap_diff(blo)
    while bhi - blo > _BRACKET_RTOL * bhi:
        mid = math.sqrt(blo * bhi)
        gm = gap_diff(mid)
        if gm == 0.0:
            blo = bhi = mid
            break
        if glo * gm < 0.0:
            bhi = mid
        else:
            blo, glo = mid, gm
    b0c = math.sqrt(blo * bhi)
    return CriticalFieldResult(
        n=n,
        found=True,
        b0_critical=b0c,
        B0_critical=from_dimensionless_field(b0c, n),
        bracket=(blo, bhi),
    )
