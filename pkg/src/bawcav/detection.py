"""Readout figures of merit: optomechanical and piezoelectric detection.

Electrode overlap, zero-point output current, optimal electrode sizing and
the resulting parasitic shunt capacitance/impedance.  Within this module the
leading-order frequency is evaluated with the overtone-limit elastic
coefficient ``c_bar_z`` (the piezoelectric overtone correction vanishes for
large n), which keeps the derived shunt impedance exactly independent of the
overtone number.  All operations are pure and reentrant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cavity import CavityGeometry, ModeIndex, effective_mass
from .constants import HBAR
from .material import MaterialParams
from .specfun import QuadratureSpec, erf, erf_inv, hermite, integrate_1d

__all__ = [
    "ElectrodeDesign",
    "OptomechReadout",
    "MotionalComparison",
    "MU_OPT_3SIGMA",
    "overlap_factor",
    "optomech_displacement",
    "piezo_current_zpf",
    "optimal_electrode",
    "shunt_impedance",
    "shunt_vs_motional",
    "design_electrode",
]

_SQRT_PI = math.sqrt(math.pi)
_FALLBACK_QUAD = QuadratureSpec(rel_tol=1e-11, abs_tol=1e-280, max_depth=40)

# Default electrode coverage target: three envelope standard deviations per
# axis, mu = erf(3/sqrt(2))^2.
MU_OPT_3SIGMA = erf(3.0 / math.sqrt(2.0)) ** 2

# Motional resistance of high-overtone quartz resonators stays below this
# bound at cryogenic temperatures; used as the comparison scale for the
# parasitic shunt impedance.
MOTIONAL_RESISTANCE_BOUND_OHM = 100.0


@dataclass(frozen=True)
class ElectrodeDesign:
    """Sized electrode with its overlap and parasitic figures."""

    L_tilde: float  # electrode half-width (m)
    mu: float  # achieved overlap factor
    C0: float  # parasitic capacitance (F)
    Z_shunt_mag: float  # shunt impedance magnitude (ohm)
    mu_opt: float  # coverage target the size was derived from

    def __post_init__(self):
        if not self.L_tilde > 0:
            raise ValueError(f"L_tilde must be positive, got {self.L_tilde!r}")
        for name in ("mu", "mu_opt"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {v!r}")
        for name in ("C0", "Z_shunt_mag"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class OptomechReadout:
    """Optically detectable displacement and its gain over a flat plate."""

    x_detect: float  # m
    gain_vs_flat: float  # x_detect / x_zpf_flat = sqrt(xi)


@dataclass(frozen=True)
class MotionalComparison:
    """Parasitic shunt impedance against the motional-resistance bound."""

    ratio: float
    negligible: bool
    verdict: str


def _omega_ref(mat: MaterialParams, geo: CavityGeometry, n: int) -> float:
    # leading-order frequency with the overtone-limit elastic coefficient;
    # exactly proportional to n by construction
    return (n * math.pi / (2.0 * geo.h0)) * math.sqrt(mat.c_bar_z / mat.rho)


def _axis_overlap_integral(m: int, t: float) -> float:
    # integral of e^{-z^2/2} H_m(z) over |z| <= t
    if m == 0:
        return math.sqrt(2.0 * math.pi) * erf(t / math.sqrt(2.0))
    return integrate_1d(
        lambda z: np.exp(-0.5 * z * z) * hermite(m, z), -t, t, _FALLBACK_QUAD
    )


def overlap_factor(mode: ModeIndex, alpha: float, beta: float, L_tilde: float) -> float:
    """Electrode overlap factor mu for square electrodes of half-width L_tilde.

    Closed form for the fundamental family: mu = Erf(sqrt(n) nu_x / sqrt(2))
    * Erf(sqrt(n) nu_y / sqrt(2)) with nu = sqrt(pi * alpha) * L_tilde;
    monotone in L_tilde and saturating at 1.  Other even in-plane numbers are
    integrated numerically (their overlap can change sign at nodal lines).
    """
    if not (alpha > 0 and beta > 0 and L_tilde > 0):
        raise ValueError("alpha, beta and L_tilde must be positive")
    nu_x = math.sqrt(math.pi * alpha) * L_tilde
    nu_y = math.sqrt(math.pi * beta) * L_tilde
    rn = math.sqrt(mode.n)
    if (mode.m, mode.p) == (0, 0):
        return erf(rn * nu_x / math.sqrt(2.0)) * erf(rn * nu_y / math.sqrt(2.0))
    jx = _axis_overlap_integral(mode.m, rn * nu_x)
    jy = _axis_overlap_integral(mode.p, rn * nu_y)
    return jx * jy / (2.0 * math.pi)


def optomech_displacement(char) -> OptomechReadout:
    """Detectable displacement for a narrow beam at the cavity centre.

    Returns the mode's x_zpf together with the curvature gain sqrt(xi) over
    the equivalent flat plate.
    """
    return OptomechReadout(x_detect=char.x_zpf, gain_vs_flat=math.sqrt(char.xi))


def piezo_current_zpf(
    mat: MaterialParams,
    geo: CavityGeometry,
    mode: ModeIndex,
    eta_x: float,
    eta_y: float,
    mu: float,
) -> float:
    """RMS zero-point output current of the piezoelectric readout (A).

    I_rms = e_z * pi * mu / (sqrt(alpha beta) h0 m_flat) * sqrt(xi)
    * p_zpf_flat; linear in mu, and the geometric part grows as sqrt(xi).
    Requires a piezoelectric material (e_z > 0).
    """
    if mat.e_z <= 0.0:
        raise ValueError(
            "piezoelectric readout requires e_z > 0; this material cannot use it"
        )
    if not 0.0 < mu <= 1.0:
        raise ValueError(f"mu must lie in (0, 1], got {mu!r}")
    if not (eta_x > 0 and eta_y > 0):
        raise ValueError("trapping parameters must be positive")
    alpha = eta_x**2 / (math.pi * geo.L**2)
    beta = eta_y**2 / (math.pi * geo.L**2)
    _, m_flat, xi = effective_mass(mat, geo, mode, eta_x, eta_y)
    p_flat = math.sqrt(HBAR * _omega_ref(mat, geo, mode.n) * m_flat / 2.0)
    prefactor = mat.e_z * math.pi * mu / (math.sqrt(alpha * beta) * geo.h0 * m_flat)
    return prefactor * math.sqrt(xi) * p_flat


def optimal_electrode(geo: CavityGeometry, eta: float, n: int, mu_opt: float = MU_OPT_3SIGMA) -> float:
    """Smallest electrode half-width reaching overlap mu_opt (alpha = beta).

    L_tilde_opt = (L / eta) sqrt(2 / n) Erf^-1(sqrt(mu_opt)); shrinks as
    n^(-1/2) because higher overtones focus the mode tighter.
    """
    if not 0.0 < mu_opt < 1.0:
        raise ValueError(f"mu_opt must lie in (0, 1), got {mu_opt!r}")
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta!r}")
    if n < 1 or n % 2 == 0:
        raise ValueError(f"overtone must be odd and positive, got {n!r}")
    return (geo.L / eta) * math.sqrt(2.0 / n) * erf_inv(math.sqrt(mu_opt))


def shunt_impedance(
    mat: MaterialParams,
    geo: CavityGeometry,
    eta: float,
    n: int,
    mu_opt: float = MU_OPT_3SIGMA,
) -> tuple[float, float, float]:
    """Parasitic figures (C0, Z_closed_form, Z_derived) for the optimal electrode.

    C0 treats the electrodes as a parallel-plate capacitor: square plates of
    side 2*L_tilde_opt separated by the full thickness 2*h0, no fringe
    fields.  Z_derived = 1 / (omega_n C0) with the leading-order frequency;
    since C0 is proportional to 1/n this is exactly overtone-independent.
    Z_closed_form evaluates the published closed-form impedance expression
    verbatim; the two conventions disagree by an O(1) factor and are both
    reported.
    """
    lt = optimal_electrode(geo, eta, n, mu_opt)
    c0 = mat.eps_z * (2.0 * lt) ** 2 / (2.0 * geo.h0)
    z_derived = 1.0 / (_omega_ref(mat, geo, n) * c0)
    z_closed = (
        (2.0 * geo.h0**2 / (mat.eps_z * geo.L**2))
        * math.sqrt(mat.rho / mat.c_bar_z)
        * eta**2
        * erf(math.sqrt(mu_opt)) ** 2
    )
    return c0, z_closed, z_derived


def shunt_vs_motional(z_shunt_mag: float) -> MotionalComparison:
    """Compare a shunt impedance against the motional-resistance bound."""
    if not z_shunt_mag > 0:
        raise ValueError(f"shunt impedance must be positive, got {z_shunt_mag!r}")
    ratio = z_shunt_mag / MOTIONAL_RESISTANCE_BOUND_OHM
    negligible = ratio > 100.0
    verdict = (
        "parasitic impedance negligible" if negligible else "parasitic impedance significant"
    )
    return MotionalComparison(ratio=ratio, negligible=negligible, verdict=verdict)


def design_electrode(
    mat: MaterialParams,
    geo: CavityGeometry,
    eta: float,
    n: int,
    mu_opt: float = MU_OPT_3SIGMA,
) -> ElectrodeDesign:
    """Size the electrode for mode (n, 0, 0) and collect its figures."""
    lt = optimal_electrode(geo, eta, n, mu_opt)
    if lt >= geo.L:
        raise ValueError(
            f"optimal electrode half-width {lt:.4g} m does not fit the plate (L={geo.L:.4g} m)"
        )
    alpha = eta**2 / (math.pi * geo.L**2)
    mu = overlap_factor(ModeIndex(n), alpha, alpha, lt)
    c0, _, z_derived = shunt_impedance(mat, geo, eta, n, mu_opt)
    return ElectrodeDesign(L_tilde=lt, mu=mu, C0=c0, Z_shunt_mag=z_derived, mu_opt=mu_opt)
