"""Scalar quantities of the constrained problem.

Energy and its breakdown, the Lagrange multiplier, the virial functional,
the Gagliardo-Nirenberg quotient and sharp constant, the kinetic-ball
radius with its boundary energy gap, the Hardy constant, the collapse
(nonexistence) certificate, and the Schwarz rearrangement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import ConfigurationError, NumericalConsistencyError
from .grid import (
    FractionalSymbol,
    Grid2D,
    ScalarField,
    frac_seminorm_sq,
    make_symbol,
    mass,
)
from .special import gamma_pos

__all__ = [
    "Potential",
    "ProblemParams",
    "EnergyBreakdown",
    "energy",
    "virial",
    "gn_quotient",
    "gn_constant",
    "kinetic_ball_radius",
    "TS_UNDEFINED_AT_S1",
    "BoundaryGap",
    "boundary_gap",
    "hardy_constant",
    "nonexistence_gap",
    "NONEXISTENCE_RHS",
    "schwarz_rearrange",
    "modulus_seminorm_check",
    "lambda1_estimate",
]


# ---------------------------------------------------------------------------
# Problem data


@dataclass(frozen=True)
class Potential:
    """Trapping potential: the harmonic trap |x|^2 or a user radial table.

    User tables carry V(r) samples and optionally r*V'(r) samples (needed
    by the virial functional).  On construction the table is checked for
    V >= 0 and, when the derivative is present, the growth constant
    C = max |r V'| / (1 + V) is recorded.
    """

    kind: str = "harmonic"
    r: np.ndarray | None = None
    V: np.ndarray | None = None
    rVp: np.ndarray | None = None
    growth_constant: float | None = None

    @staticmethod
    def harmonic() -> "Potential":
        return Potential(kind="harmonic")

    @staticmethod
    def from_table(r, V, rVp=None) -> "Potential":
        r = np.asarray(r, dtype=np.float64)
        V = np.asarray(V, dtype=np.float64)
        if r.ndim != 1 or r.size < 2 or np.any(np.diff(r) <= 0):
            raise ConfigurationError("potential table needs strictly increasing r samples")
        if V.shape != r.shape:
            raise ConfigurationError("potential table V shape mismatch")
        if np.any(V < 0.0):
            raise ConfigurationError("potential must be nonnegative (V_0 violated)")
        growth = None
        if rVp is not None:
            rVp = np.asarray(rVp, dtype=np.float64)
            if rVp.shape != r.shape:
                raise ConfigurationError("potential table rVp shape mismatch")
            growth = float(np.max(np.abs(rVp) / (1.0 + V)))
        return Potential(kind="radial_table", r=r, V=V, rVp=rVp, growth_constant=growth)

    def values_on(self, grid: Grid2D) -> np.ndarray:
        if self.kind == "harmonic":
            return grid.r2
        rq = np.sqrt(grid.r2)
        return np.interp(rq, self.r, self.V, right=float(self.V[-1]))

    def half_dilation_weight_on(self, grid: Grid2D) -> np.ndarray:
        """Samples of (x . grad V) / 2 = r V'(r) / 2.

        For the harmonic trap this equals |x|^2, so the harmonic and
        general code paths agree when V = |x|^2.
        """
        if self.kind == "harmonic":
            return grid.r2
        if self.rVp is None:
            raise ConfigurationError(
                "virial functional needs r*V'(r) samples for a user potential"
            )
        rq = np.sqrt(grid.r2)
        return 0.5 * np.interp(rq, self.r, self.rVp, right=float(self.rVp[-1]))


@dataclass(frozen=True)
class ProblemParams:
    """Fractional order s in (1/2, 1], target mass N, trapping potential."""

    s: float
    N: float
    potential: Potential = dc_field(default_factory=Potential.harmonic)

    def __post_init__(self):
        if not (0.5 < self.s <= 1.0):
            raise ConfigurationError(f"order s must lie in (1/2, 1], got {self.s!r}")
        if not (self.N > 0.0) or not math.isfinite(self.N):
            raise ConfigurationError(f"mass N must be positive, got {self.N!r}")


# ---------------------------------------------------------------------------
# Energy breakdown


@dataclass(frozen=True)
class EnergyBreakdown:
    """All quadratic/quartic integrals of a field plus derived scalars.

    total  = (kinetic + potential_term)/2 - quartic/4
    mu     = (kinetic + potential_term - quartic) / mass
    virial = s*kinetic - int (x.grad V)/2 u^2 - quartic/2
    """

    kinetic: float
    potential_term: float
    quartic: float
    total: float
    mu: float
    virial: float
    mass_value: float

    def as_dict(self) -> dict:
        return {
            "kinetic": self.kinetic,
            "potential_term": self.potential_term,
            "quartic": self.quartic,
            "total": self.total,
            "mu": self.mu,
            "virial": self.virial,
            "mass": self.mass_value,
        }


def energy(u: ScalarField, p: ProblemParams, sym: FractionalSymbol | None = None) -> EnergyBreakdown:
    """Energy decomposition of a field under the given problem parameters."""
    if sym is None:
        sym = make_symbol(u.grid, p.s)
    elif sym.s != p.s:
        raise ConfigurationError(f"symbol order {sym.s} does not match params s={p.s}")
    cell = u.grid.cell
    v2 = u.values**2
    kin = frac_seminorm_sq(u, sym)
    pot = float((p.potential.values_on(u.grid) * v2).sum()) * cell
    quart = float((v2 * v2).sum()) * cell
    m = float(v2.sum()) * cell
    if m == 0.0:
        mu = 0.0
        vir = 0.0
    else:
        mu = (kin + pot - quart) / m
        w = p.potential.half_dilation_weight_on(u.grid)
        vir = p.s * kin - float((w * v2).sum()) * cell - 0.5 * quart
    total = 0.5 * (kin + pot) - 0.25 * quart
    return EnergyBreakdown(
        kinetic=kin,
        potential_term=pot,
        quartic=quart,
        total=total,
        mu=mu,
        virial=vir,
        mass_value=m,
    )


def virial(u: ScalarField, p: ProblemParams, sym: FractionalSymbol | None = None) -> float:
    """s*kinetic - int (x.grad V)/2 |u|^2 - quartic/2; zero at critical points."""
    if sym is None:
        sym = make_symbol(u.grid, p.s)
    cell = u.grid.cell
    v2 = u.values**2
    kin = frac_seminorm_sq(u, sym)
    w = p.potential.half_dilation_weight_on(u.grid)
    return p.s * kin - float((w * v2).sum()) * cell - 0.5 * float((v2 * v2).sum()) * cell


# ---------------------------------------------------------------------------
# Gagliardo-Nirenberg quotient and constant


def gn_quotient(u: ScalarField, s: float, sym: FractionalSymbol | None = None) -> float:
    """quartic / (kinetic^(1/s) * mass^(2 - 1/s)); scale invariant."""
    if sym is None:
        sym = make_symbol(u.grid, s)
    m = mass(u)
    if m == 0.0:
        raise ConfigurationError("Gagliardo-Nirenberg quotient of the zero field")
    kin = frac_seminorm_sq(u, sym)
    quart = float((u.values**4).sum()) * u.grid.cell
    return quart / (kin ** (1.0 / s) * m ** (2.0 - 1.0 / s))


def gn_constant(s: float, Ns_star: float) -> float:
    """Sharp constant 2s / ((2s-1)^(1 - 1/s) * Ns_star)."""
    if not (0.5 < s <= 1.0):
        raise ConfigurationError(f"order s must lie in (1/2, 1], got {s!r}")
    if not (Ns_star > 0.0):
        raise ConfigurationError(f"critical mass must be positive, got {Ns_star!r}")
    return 2.0 * s / ((2.0 * s - 1.0) ** (1.0 - 1.0 / s) * Ns_star)


# ---------------------------------------------------------------------------
# Kinetic-ball radius and boundary gap


class _TsUndefined:
    """Sentinel: the kinetic-ball radius is undefined at s = 1 (the exponent
    s/(1-s) diverges).  Consumers must branch on it, never use it as a
    number."""

    __slots__ = ()

    def __repr__(self) -> str:  # pragma: no cover
        return "TS_UNDEFINED_AT_S1"

    def __bool__(self) -> bool:
        raise ConfigurationError("kinetic-ball radius is undefined at s = 1")


TS_UNDEFINED_AT_S1 = _TsUndefined()


def kinetic_ball_radius(p: ProblemParams, Ns_star: float):
    """Radius t_s = N/(2s-1) * (Ns_star/N)^(s/(1-s)) of the constraint ball.

    Returns the typed sentinel TS_UNDEFINED_AT_S1 when s = 1.
    """
    if not (Ns_star > 0.0):
        raise ConfigurationError(f"critical mass must be positive, got {Ns_star!r}")
    if p.s == 1.0:
        return TS_UNDEFINED_AT_S1
    s, N = p.s, p.N
    with np.errstate(over="ignore"):
        ratio_pow = float(np.float64(Ns_star / N) ** np.float64(s / (1.0 - s)))
    return N / (2.0 * s - 1.0) * ratio_pow


@dataclass(frozen=True)
class BoundaryGap:
    """Certified boundary lower bound and the sampled barrier curve f(t)."""

    ts: float
    gap: float
    lambda_s: float
    t: np.ndarray
    f: np.ndarray


def boundary_gap(p: ProblemParams, Ns_star: float, num_points: int = 241) -> BoundaryGap:
    """Lower bound (1-s)*t_s/2 for the energy on the ball boundary, plus the
    curve f(t) = t - lambda_s N^(2-1/s) t^(1/s) / Ns_star on a log grid."""
    ts = kinetic_ball_radius(p, Ns_star)
    if ts is TS_UNDEFINED_AT_S1:
        raise ConfigurationError("boundary gap is undefined at s = 1")
    s, N = p.s, p.N
    lambda_s = s / (2.0 * s - 1.0) ** (1.0 - 1.0 / s)
    t = ts * np.logspace(-3.0, 3.0, num_points)
    f = t - lambda_s * N ** (2.0 - 1.0 / s) / Ns_star * t ** (1.0 / s)
    return BoundaryGap(ts=ts, gap=0.5 * (1.0 - s) * ts, lambda_s=lambda_s, t=t, f=f)


# ---------------------------------------------------------------------------
# Hardy constant and the collapse certificate


def hardy_constant(s: float) -> float:
    """C_s = 4^s Gamma((1+s)/2)^2 / Gamma((1-s)/2)^2 for 0 < s < 1."""
    if not (0.0 < s < 1.0):
        raise ConfigurationError(f"Hardy constant requires 0 < s < 1, got {s!r}")
    return 4.0**s * (gamma_pos((1.0 + s) / 2.0) / gamma_pos((1.0 - s) / 2.0)) ** 2


#: Constant right-hand side of the collapse certificate, (1 - 1/e)^2 (2e)^-2.
NONEXISTENCE_RHS = (1.0 - math.exp(-1.0)) ** 2 / (2.0 * math.e) ** 2


def nonexistence_gap(p: ProblemParams, Ns_star: float) -> tuple[float, float]:
    """Both sides of the collapse certificate; lhs < rhs certifies that no
    positive local minimizer exists inside the kinetic ball at this (N, s).

    lhs = 4^-s s^s (N/(2s-1))^s (Ns_star/N)^(s^2/(1-s)) (1-s)^-2 N^(1-s).
    The ratio power overflows to +inf for N < Ns_star and s near 1, which
    correctly reports "no certificate".
    """
    if not (0.5 < p.s < 1.0):
        raise ConfigurationError(f"certificate requires 1/2 < s < 1, got {p.s!r}")
    if not (Ns_star > 0.0):
        raise ConfigurationError(f"critical mass must be positive, got {Ns_star!r}")
    s, N = p.s, p.N
    with np.errstate(over="ignore"):
        ratio_pow = float(np.float64(Ns_star / N) ** np.float64(s * s / (1.0 - s)))
        lhs = float(
            4.0 ** (-s)
            * s**s
            * (N / (2.0 * s - 1.0)) ** s
            * ratio_pow
            * (1.0 - s) ** (-2.0)
            * N ** (1.0 - s)
        )
    return lhs, NONEXISTENCE_RHS


# ---------------------------------------------------------------------------
# Schwarz rearrangement and the modulus check


def schwarz_rearrange(u: ScalarField) -> ScalarField:
    """Symmetric decreasing rearrangement on the grid.

    Sorts the node values descending and reassigns them to nodes ordered
    by radius (ties broken lexicographically), i.e. a permutation of the
    values: every l^p norm is preserved exactly and the trap integral can
    only decrease.
    """
    v = u.values
    vmax = float(v.max(initial=0.0))
    if float(v.min(initial=0.0)) < -1e-12 * max(vmax, 1.0):
        raise ConfigurationError("rearrangement requires a nonnegative field")
    g = u.grid
    n = g.n
    ii, jj = np.indices((n, n))
    order = np.lexsort((jj.ravel(), ii.ravel(), g.r2.ravel()))
    vals_desc = np.sort(v.ravel())[::-1]
    out = np.empty(n * n, dtype=np.float64)
    out[order] = vals_desc
    return ScalarField(grid=g, values=out.reshape(n, n), kind="nonnegative")


def modulus_seminorm_check(u: ScalarField, s: float) -> tuple[float, float]:
    """(seminorm^2 of |u|, seminorm^2 of u); the first never exceeds the
    second beyond rounding."""
    sym = make_symbol(u.grid, s)
    lhs = frac_seminorm_sq(ScalarField(grid=u.grid, values=np.abs(u.values)), sym)
    rhs = frac_seminorm_sq(u, sym)
    return lhs, rhs


# ---------------------------------------------------------------------------
# Principal eigenvalue of (-Delta)^s + V (numerical estimate)


def lambda1_estimate(
    grid: Grid2D,
    p: ProblemParams,
    iters: int = 3000,
    dt: float | None = None,
) -> float:
    """Smallest eigenvalue of (-Delta)^s + V via preconditioned descent on
    the Rayleigh quotient.  Deterministic Gaussian start; the step size
    defaults below the stability bound set by the trap maximum."""
    sym = make_symbol(grid, p.s)
    m_half = sym.half_table()
    V = p.potential.values_on(grid)
    if dt is None:
        dt = 1.5 / (1.0 + float(V.max()))
    cell = grid.cell
    u = np.exp(-grid.r2 / 2.0)
    u /= math.sqrt(float((u**2).sum()) * cell)
    lam = 0.0
    for _ in range(iters):
        uh = np.fft.rfft2(u)
        Au = np.fft.irfft2(m_half * uh, s=u.shape)
        Hu = Au + V * u
        lam = float((u * Hu).sum()) * cell
        r = Hu - lam * u
        d = np.fft.irfft2(np.fft.rfft2(r) / (1.0 + m_half), s=u.shape)
        u = u - dt * d
        u /= math.sqrt(float((u**2).sum()) * cell)
    return lam
