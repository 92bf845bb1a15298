"""Constrained solvers on the mass sphere: the local minimizer inside the
kinetic ball and the mountain-pass (saddle) solution.

Both solvers drive the Euler-Lagrange residual

    R(u) = (-Delta)^s u + V u - u^3 - mu(u) u,   mu = (kin + pot - quart)/N,

to zero over S(N) = { ||u||_2^2 = N } using a Fourier-preconditioned
descent step u <- normalize(u - dt (I + (-Delta)^s)^(-1) R).  The fixed
point is the discrete critical point for every dt.  The local-min flow
rejects any step that raises the energy (halving dt), so the recorded
energy trace is nonincreasing.  The saddle flow additionally applies a
one-parameter dilation correction after each step, realized as an exact
grid relabeling u(x) -> lam u(lam x), which pins the virial functional to
zero and removes the single unstable (dilation) direction.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import numpy as np
from scipy.interpolate import RegularGridInterpolator

from .errors import (
    ConfigurationError,
    NumericalConsistencyError,
    ResolutionError,
)
from .functionals import (
    EnergyBreakdown,
    ProblemParams,
    TS_UNDEFINED_AT_S1,
    energy,
    kinetic_ball_radius,
)
from .grid import Grid2D, ScalarField, make_grid, save_field
from .groundstate import GroundStateResult, _half_spectrum_weights, annulus_mass_fraction
from .radial import RadialInterpolant

__all__ = [
    "SolveReport",
    "solve_local_min",
    "solve_mountain_pass",
    "mountain_pass_bracket",
    "MountainPassBracket",
    "dilation_path_profile",
    "dilate_field",
    "default_trap_init",
    "seeded_initial_field",
]


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class SolveReport:
    """Outcome of a constrained solve.

    classification is one of local_min, saddle, escaped, fell_to_min,
    failed.  A local_min/saddle report guarantees mass N to 1e-10, the
    Euler-Lagrange residual at or below its tolerance, and the virial
    residual at or below p_tol * kinetic.
    """

    solution: ScalarField
    s: float
    N: float
    breakdown: EnergyBreakdown
    el_residual: float
    inside_ball: bool | None
    classification: str
    trace: np.ndarray  # columns: iteration, energy, kinetic, virial
    iterations: int
    dt_final: float
    t_s: float | None
    message: str = ""
    extras: dict = dc_field(default_factory=dict)

    def scalars(self) -> dict:
        d = {
            "s": self.s,
            "N": self.N,
            "classification": self.classification,
            "el_residual": self.el_residual,
            "inside_ball": self.inside_ball,
            "iterations": self.iterations,
            "dt_final": self.dt_final,
            "t_s": self.t_s,
            "message": self.message,
        }
        d.update(self.breakdown.as_dict())
        d.update({k: v for k, v in self.extras.items() if np.isscalar(v) or v is None})
        return d

    def save(self, basepath: str | Path) -> None:
        base = Path(basepath)
        save_field(self.solution, base, s=self.s, N=self.N)
        payload = self.scalars()
        payload["grid"] = {"n": self.solution.grid.n, "L": self.solution.grid.L}
        payload["trace"] = self.trace.tolist()
        report = base.parent / (base.name + ".report.json")
        report.write_text(json.dumps(payload, indent=1) + "\n")


# ---------------------------------------------------------------------------
# Initial fields


def default_trap_init(grid: Grid2D, N: float) -> ScalarField:
    """Unit-width Gaussian scaled to mass N."""
    v = np.exp(-grid.r2 / 2.0)
    v *= math.sqrt(N / (float((v**2).sum()) * grid.cell))
    return ScalarField(grid=grid, values=v, kind="nonnegative")


def seeded_initial_field(grid: Grid2D, N: float, seed: int) -> ScalarField:
    """Deterministic randomized start: Gaussian envelope modulated by a
    smooth random low-band perturbation, scaled to mass N."""
    rng = np.random.default_rng(seed)
    n = grid.n
    coeff = np.zeros((n, n), dtype=np.complex128)
    kmax = max(2, n // 16)
    block = rng.standard_normal((2 * kmax + 1, 2 * kmax + 1)) + 1j * rng.standard_normal(
        (2 * kmax + 1, 2 * kmax + 1)
    )
    idx = np.arange(-kmax, kmax + 1)
    coeff[np.ix_(idx % n, idx % n)] = block
    bump = np.fft.ifft2(coeff).real
    bump /= max(np.abs(bump).max(), 1e-300)
    v = np.exp(-grid.r2 / 2.0) * (1.0 + 0.5 * bump)
    v *= math.sqrt(N / (float((v**2).sum()) * grid.cell))
    return ScalarField(grid=grid, values=v)


# ---------------------------------------------------------------------------
# Internal flow state (mutable; the grid may be relabeled during saddle solves)


class _FlowState:
    def __init__(self, grid: Grid2D, p: ProblemParams, values: np.ndarray):
        self.p = p
        self.n = grid.n
        self.h = grid.h
        self.s = p.s
        k = 2.0 * np.pi * np.fft.fftfreq(grid.n, d=grid.h)
        kh = k[: grid.n // 2 + 1]
        k2h = k[:, None] ** 2 + kh[None, :] ** 2
        self.m_half = k2h if p.s == 1.0 else k2h**p.s
        if p.s != 1.0:
            self.m_half[0, 0] = 0.0
        self.col_w = _half_spectrum_weights(grid.n)[None, :]
        ax = (np.arange(grid.n) - grid.n // 2) * grid.h
        self.r2 = ax[:, None] ** 2 + ax[None, :] ** 2
        self.harmonic = p.potential.kind == "harmonic"
        self._refresh_potential()
        self.u = values

    def _refresh_potential(self):
        if self.harmonic:
            self.V = self.r2
            self.w_half_dil = self.r2
        else:
            grid = self.grid()
            self.V = self.p.potential.values_on(grid)
            self.w_half_dil = self.p.potential.half_dilation_weight_on(grid)

    def grid(self) -> Grid2D:
        return Grid2D(n=self.n, h=self.h)

    @property
    def cell(self) -> float:
        return self.h * self.h

    def snapshot(self) -> tuple:
        return (self.u, self.h, self.m_half, self.r2)

    def restore(self, snap: tuple) -> None:
        self.u, self.h, self.m_half, self.r2 = snap
        self._refresh_potential()

    def scalars(self, uh=None):
        u = self.u
        if uh is None:
            uh = np.fft.rfft2(u)
        spec_norm = self.cell / (self.n * self.n)
        kin = float((self.m_half * (uh.real**2 + uh.imag**2) * self.col_w).sum()) * spec_norm
        v2 = u * u
        pot = float((self.V * v2).sum()) * self.cell
        quart = float((v2 * v2).sum()) * self.cell
        wmom = pot if self.harmonic else float((self.w_half_dil * v2).sum()) * self.cell
        return uh, kin, pot, quart, wmom

    def relabel(self, lam: float) -> None:
        """Exact dilation u(x) -> lam u(lam x): rescale samples and grid.

        All quadratic/quartic integrals transform by their continuum power
        laws exactly, because the relabeled samples are the dilation of
        the trigonometric interpolant.
        """
        self.u = lam * self.u
        self.h = self.h / lam
        self.m_half = self.m_half * lam ** (2.0 * self.s)
        self.r2 = self.r2 / (lam * lam)
        self._refresh_potential()

    def recenter(self) -> None:
        v2 = self.u**2
        tot = v2.sum()
        if tot <= 0.0:
            return
        n = self.n
        ci = float((np.arange(n)[:, None] * v2).sum()) / tot
        cj = float((np.arange(n)[None, :] * v2).sum()) / tot
        si = int(round(ci - n // 2))
        sj = int(round(cj - n // 2))
        if si or sj:
            self.u = np.roll(self.u, (-si, -sj), axis=(0, 1))


def _el_pieces(state: _FlowState, uh, kin, pot, quart, N):
    mu = (kin + pot - quart) / N
    Au = np.fft.irfft2(state.m_half * uh, s=state.u.shape)
    R = Au + state.V * state.u - state.u**3 - mu * state.u
    el = math.sqrt(float((R * R).sum()) * state.cell / N)
    return mu, R, el


def _precondition(state: _FlowState, R):
    return np.fft.irfft2(np.fft.rfft2(R) / (1.0 + state.m_half), s=R.shape)


def _el_residual_of(state: _FlowState, N: float) -> float:
    uh, kin, pot, quart, _ = state.scalars()
    _, _, el = _el_pieces(state, uh, kin, pot, quart, N)
    return el


def _dilation_generator(state: _FlowState) -> np.ndarray:
    """Tangent of the mass-preserving dilation t -> t u(t x) at t = 1,
    i.e. u + x . grad u, with spectral derivatives (Nyquist mode zeroed)."""
    n, h = state.n, state.h
    kx = 2.0 * np.pi * np.fft.fftfreq(n, d=h)
    kx[n // 2] = 0.0
    ky = kx[: n // 2 + 1].copy()
    if n // 2 < ky.size:
        ky[n // 2] = 0.0
    uh = np.fft.rfft2(state.u)
    ux = np.fft.irfft2(1j * kx[:, None] * uh, s=(n, n))
    uy = np.fft.irfft2(1j * ky[None, :] * uh, s=(n, n))
    ax = (np.arange(n) - n // 2) * h
    return state.u + ax[:, None] * ux + ax[None, :] * uy


def _newton_delta(state: _FlowState, N: float, mu: float, R: np.ndarray, el: float,
                  deflate: np.ndarray | None = None):
    """One tangent-space Newton correction for R(u) = 0 on the mass sphere.

    The projected Jacobian Proj ((-Delta)^s + V - 3u^2 - mu) Proj is
    symmetric (indefinite at a saddle), so the linear solve uses MINRES
    preconditioned by (I + (-Delta)^s)^(-1).  An optional extra deflation
    vector (the dilation generator during saddle solves, where that
    direction is near null and handled separately) is projected out of
    the system alongside u.
    """
    from scipy.sparse.linalg import LinearOperator, minres

    n2 = state.n * state.n
    shape = (state.n, state.n)
    u = state.u
    cell = state.cell
    diag = state.V - 3.0 * u * u - mu

    basis = [u / math.sqrt(N)]
    if deflate is not None:
        w = deflate.copy()
        for b in basis:
            w -= (float((b * w).sum()) * cell) * b
        wn = math.sqrt(float((w * w).sum()) * cell)
        if wn > 0.0:
            basis.append(w / wn)

    def project(v):
        for b in basis:
            v = v - (float((b * v).sum()) * cell) * b
        return v

    # symmetric preconditioning: solve S H S y = -S R with
    # S = sqrt(c/(c+m)), delta = S y.  S caps the Fourier part at the
    # physical scale c, so the conditioned spectrum spans O(u^2, mu)/c and
    # MINRES converges in tens of iterations even on concentrated grids.
    c = max(1.0, abs(mu), 3.0 * float((state.u**2).max()) / 50.0)
    sq_table = np.sqrt(c / (c + state.m_half))

    def smooth(v):
        return np.fft.irfft2(np.fft.rfft2(v) * sq_table, s=shape)

    def cond_hess(vflat):
        v = smooth(vflat.reshape(shape))
        v = project(v)
        Hv = np.fft.irfft2(state.m_half * np.fft.rfft2(v), s=shape) + diag * v
        return smooth(project(Hv)).ravel()

    A = LinearOperator((n2, n2), matvec=cond_hess, dtype=np.float64)
    inner_rtol = min(1e-2, max(math.sqrt(el) * 1e-2, 1e-12))
    y, _ = minres(A, -smooth(project(R)).ravel(), rtol=inner_rtol, maxiter=400)
    return project(smooth(y.reshape(shape)))


def _try_step(state: _FlowState, N: float, direction: np.ndarray, el: float,
              scale: float = 1.0, halvings: int = 10):
    """Backtracking update u <- normalize(u + scale*direction) accepted on
    residual decrease; returns the new residual or None if no scale works."""
    u = state.u
    cell = state.cell
    for _ in range(halvings):
        u_try = u + scale * direction
        u_try *= math.sqrt(N / (float((u_try**2).sum()) * cell))
        save = state.u
        state.u = u_try
        el_try = _el_residual_of(state, N)
        if el_try < el:
            return el_try
        state.u = save
        scale *= 0.5
    return None


def _newton_polish(state: _FlowState, N: float, tol: float, max_steps: int = 20):
    """Damped Newton iteration for R(u) = 0; returns (residual, converged)."""
    el = math.inf
    for _ in range(max_steps):
        uh, kin, pot, quart, wmom = state.scalars()
        mu, R, el = _el_pieces(state, uh, kin, pot, quart, N)
        if el <= tol:
            return el, True
        delta = _newton_delta(state, N, mu, R, el)
        el_new = _try_step(state, N, delta, el)
        if el_new is None:
            return el, False
        el = el_new
    return el, el <= tol


def _virial_of(state: _FlowState, kin, quart, wmom) -> float:
    return state.s * kin - wmom - 0.5 * quart


def _finalize(state, p, classification, el, trace, it, dt, ts, message="", extras=None):
    grid = state.grid()
    vmax = max(float(state.u.max()), 1.0)
    if float(state.u.min()) >= -1e-12 * vmax:
        sol = ScalarField(grid=grid, values=np.maximum(state.u, 0.0), kind="nonnegative")
    else:
        sol = ScalarField(grid=grid, values=state.u)
    br = energy(sol, p)
    inside = True if ts is None else bool(br.kinetic < ts)
    return SolveReport(
        solution=sol,
        s=p.s,
        N=p.N,
        breakdown=br,
        el_residual=el,
        inside_ball=inside,
        classification=classification,
        trace=np.asarray(trace, dtype=np.float64).reshape(-1, 4),
        iterations=it,
        dt_final=dt,
        t_s=ts,
        message=message,
        extras=extras or {},
    )


# ---------------------------------------------------------------------------
# Local minimizer inside the kinetic ball


def solve_local_min(
    p: ProblemParams,
    Ns_star: float,
    grid: Grid2D | None = None,
    init: ScalarField | None = None,
    dt: float = 1e-2,
    tol: float = 1e-8,
    p_tol: float = 1e-6,
    max_iter: int = 20_000,
    dt_max: float = 0.25,
    recenter_every: int = 100,
    newton_from: float = 1e-2,
) -> SolveReport:
    """Minimizer of the energy inside the kinetic ball of radius t_s.

    Two phases: a normalized, energy-monotone preconditioned descent
    (globalization, escape detection), then a Newton polish once the EL
    residual drops below newton_from.  Success yields classification
    local_min with mass renormalized to N every step, nonincreasing
    recorded energies, EL residual <= tol and |virial| <= p_tol * kinetic.
    If the kinetic energy crosses t_s the run stops as escaped with the
    crossing iterate recorded (the expected outcome for masses above the
    critical one, where t_s collapses).
    """
    if init is None:
        if grid is None:
            raise ConfigurationError("solve_local_min needs a grid or an initial field")
        init = default_trap_init(grid, p.N)
    elif grid is not None and not init.grid.same_as(grid):
        raise ConfigurationError("initial field lives on a different grid")
    N = p.N
    ts = kinetic_ball_radius(p, Ns_star)
    ts_val = None if ts is TS_UNDEFINED_AT_S1 else float(ts)

    state = _FlowState(init.grid, p, init.values.copy())
    state.u *= math.sqrt(N / (float((state.u**2).sum()) * state.cell))

    def result(cls, el, trace, it, dt, msg="", extras=None):
        return _finalize(state, p, cls, el, trace, it, dt, ts_val, message=msg, extras=extras)

    def classify_converged(el, trace, it, dt):
        uh, kin, pot, quart, wmom = state.scalars()
        P = _virial_of(state, kin, quart, wmom)
        E = 0.5 * (kin + pot) - 0.25 * quart
        trace.append((it, E, kin, P))
        if abs(P) <= p_tol * kin:
            return result("local_min", el, trace, it, dt)
        return result(
            "failed", el, trace, it, dt,
            msg=(f"EL residual converged but |virial|={abs(P):.3e} exceeds "
                 f"p_tol*kinetic={p_tol * kin:.3e} on this grid"),
        )

    trace = []
    E_prev = math.inf
    u_prev = None
    el = math.inf
    switch = newton_from
    it = 0
    while it <= max_iter:
        uh, kin, pot, quart, wmom = state.scalars()
        E = 0.5 * (kin + pot) - 0.25 * quart
        if E > E_prev + 1e-12 * max(1.0, abs(E_prev)) and u_prev is not None:
            state.u = u_prev
            dt *= 0.5
            if dt < 1e-9:
                return result("failed", el, trace, it, dt,
                              msg="step size underflow before reaching tolerance")
            continue
        P = _virial_of(state, kin, quart, wmom)
        trace.append((it, E, kin, P))
        mu, R, el = _el_pieces(state, uh, kin, pot, quart, N)
        if ts_val is not None and kin > ts_val:
            return result(
                "escaped", el, trace, it, dt,
                msg=f"kinetic energy crossed t_s={ts_val:.6g} at iterate {it}",
                extras={"crossing_iteration": it, "crossing_kinetic": kin},
            )
        if el <= tol:
            if abs(P) <= p_tol * kin:
                return result("local_min", el, trace, it, dt)
            return result(
                "failed", el, trace, it, dt,
                msg=(f"EL residual converged but |virial|={abs(P):.3e} exceeds "
                     f"p_tol*kinetic={p_tol * kin:.3e} on this grid"),
            )
        if el <= switch:
            el, done = _newton_polish(state, N, tol)
            if done:
                return classify_converged(el, trace, it, dt)
            switch *= 0.1  # polish stalled; flow further before retrying
            if switch < tol:
                return result("failed", el, trace, it, dt,
                              msg=f"Newton polish stalled at residual {el:.3e}")
            continue
        E_prev = E
        u_prev = state.u
        d = _precondition(state, R)
        u_new = state.u - dt * d
        u_new *= math.sqrt(N / (float((u_new**2).sum()) * state.cell))
        state.u = u_new
        dt = min(dt * 1.1, dt_max)
        it += 1
        if recenter_every and it % recenter_every == 0:
            state.recenter()
    return result("failed", el, trace, it, dt,
                  msg=f"no convergence to tol={tol:g} within {max_iter} iterations")


# ---------------------------------------------------------------------------
# Dilation of grid fields (spectral, same grid) and the energy path


def _spectral_radius(u: ScalarField, rel_floor: float = 1e-13) -> float:
    uh = np.abs(np.fft.fft2(u.values))
    peak = uh.max()
    if peak == 0.0:
        return 0.0
    k = np.sqrt(u.grid.k2)
    return float(k[uh > rel_floor * peak].max())


def dilate_field(u: ScalarField, t: float, pad_factor: int = 4) -> ScalarField:
    """Sample t*u(t*x) on u's own grid via zero-padded spectral upsampling.

    Rejects factors that would push significant spectral content past the
    Nyquist band; points t*x outside the box read as zero (fields here
    decay toward the box edge).
    """
    if not np.isfinite(t) or t <= 0.0:
        raise ConfigurationError(f"dilation factor must be positive, got {t!r}")
    g = u.grid
    if t > 1.0:
        nyq = math.pi / g.h
        if t * _spectral_radius(u) > 0.98 * nyq:
            raise ResolutionError(
                f"dilation t={t:g} pushes spectral content past the Nyquist band"
            )
    n, pf = g.n, pad_factor
    uh = np.fft.fftshift(np.fft.fft2(u.values))
    big = np.zeros((pf * n, pf * n), dtype=np.complex128)
    lo = (pf * n - n) // 2
    big[lo : lo + n, lo : lo + n] = uh
    fine = np.fft.ifft2(np.fft.ifftshift(big)).real * (pf * pf)
    ax_fine = (np.arange(pf * n) - (pf * n) // 2) * (g.h / pf)
    interp = RegularGridInterpolator(
        (ax_fine, ax_fine), fine, method="linear", bounds_error=False, fill_value=0.0
    )
    ax = g.axis
    pts = np.stack(np.meshgrid(t * ax, t * ax, indexing="ij"), axis=-1)
    vals = t * interp(pts)
    return ScalarField(grid=g, values=vals)


def dilation_path_profile(ground: GroundStateResult, p: ProblemParams, t_grid) -> list[dict]:
    """Energies along the mass-preserving dilation path t -> t*phi(t x),
    phi = sqrt(N) Q / ||Q||_2.

    Each row carries the discrete energy (when the dilation is resolvable)
    and the closed-form curve from the measured ground-state scalars:
    E(t) = N t^(2s)/(2(2s-1)) + N W t^(-2)/(2 Ns) - s N^2 t^2/(2(2s-1) Ns),
    where W = int |x|^2 Q^2 and Ns = ||Q||_2^2.
    """
    if p.potential.kind != "harmonic":
        raise ConfigurationError("the dilation path is defined for the harmonic trap")
    s, N = p.s, p.N
    Ns = ground.Ns_star
    W = ground.trap_moment
    phi = ScalarField(
        grid=ground.Q.grid,
        values=math.sqrt(N / Ns) * ground.Q.values,
        kind="nonnegative",
    )
    rows = []
    for t in t_grid:
        t = float(t)
        closed = (
            N * t ** (2 * s) / (2.0 * (2.0 * s - 1.0))
            + N * W * t ** (-2.0) / (2.0 * Ns)
            - s * N * N * t**2 / (2.0 * (2.0 * s - 1.0) * Ns)
        )
        kinetic_closed = N * t ** (2.0 * s) / (2.0 * s - 1.0)
        row = {"t": t, "energy_closed": closed, "kinetic_closed": kinetic_closed}
        try:
            ut = dilate_field(phi, t)
            br = energy(ut, p)
            row.update(energy_discrete=br.total, kinetic_discrete=br.kinetic, status="ok")
        except ResolutionError:
            row.update(energy_discrete=None, kinetic_discrete=None, status="aliased")
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# Mountain-pass bracket


@dataclass(frozen=True)
class MountainPassBracket:
    lower: float
    upper: float
    rho_max: float  # maximizer of the path-energy barrier
    rho_one: float  # trap-free maximizer (Ns/N)^(1/(2(1-s)))
    ts: float


def mountain_pass_bracket(ground: GroundStateResult, p: ProblemParams) -> MountainPassBracket:
    """Analytic two-sided bracket for the saddle energy level.

    lower = (1-s) t_s / 2; upper = N/(2(2s-1) Ns) * max_rho f(rho) with
    f(rho) = Ns rho^(2s) + (2s-1) W rho^(-2) - s N rho^2 maximized on a
    log grid and golden-section refined.
    """
    s, N = p.s, p.N
    if not (0.5 < s < 1.0):
        raise ConfigurationError("the bracket requires 1/2 < s < 1")
    Ns = ground.Ns_star
    if not (N < Ns):
        raise ConfigurationError(f"bracket requires N < critical mass ({N} >= {Ns})")
    W = ground.trap_moment
    ts = kinetic_ball_radius(p, Ns)
    lower = 0.5 * (1.0 - s) * ts
    rho_one = (Ns / N) ** (1.0 / (2.0 * (1.0 - s)))

    def f(rho):
        return Ns * rho ** (2.0 * s) + (2.0 * s - 1.0) * W / rho**2 - s * N * rho**2

    grid_rho = np.exp(np.linspace(0.0, math.log(8.0 * rho_one), 2049))
    vals = f(grid_rho)
    k = int(np.argmax(vals))
    a = grid_rho[max(k - 1, 0)]
    b = grid_rho[min(k + 1, len(grid_rho) - 1)]
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(200):
        if b - a < 1e-13 * max(1.0, b):
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    rho_max = float(0.5 * (a + b))
    upper = float(N / (2.0 * (2.0 * s - 1.0) * Ns) * f(rho_max))
    if upper < lower * (1.0 - 1e-9):
        raise NumericalConsistencyError(
            f"bracket inversion: lower={lower:.6g} > upper={upper:.6g}"
        )
    # upper >= lower holds analytically; for s near 1 the trap correction
    # sits below float resolution, so clamp away pure rounding
    upper = max(upper, float(lower))
    return MountainPassBracket(lower=float(lower), upper=upper, rho_max=rho_max,
                               rho_one=float(rho_one), ts=float(ts))


# ---------------------------------------------------------------------------
# Mountain-pass (saddle) solver


def _dilation_root(state: _FlowState, kin, quart, wmom, span=(0.25, 4.0)):
    """Factor lam with virial(u_lam) = 0 under exact relabeling, chosen as
    the root nearest 1 in log scale.

    The scaled virial s K lam^(2s) - M(lam) - Q lam^2 / 2 generically has
    two positive roots (a trap-dominated branch and a concentration
    branch); the saddle sits at the concentration one, which is the root
    closest to 1 near convergence.  Returns None when no root lies inside
    span (the correction is then skipped).
    """
    from scipy.optimize import brentq

    s = state.s
    if kin <= 0.0 or quart <= 0.0:
        return None
    if state.harmonic:
        # lam^2 * virial(u_lam): s K lam^(2s+2) - Q lam^4 / 2 - W
        def g(lam):
            return s * kin * lam ** (2 * s + 2) - 0.5 * quart * lam**4 - wmom
    else:
        r = np.sqrt(state.r2)
        u2 = state.u**2
        pot = state.p.potential

        def g(lam):
            w = 0.5 * np.interp(r / lam, pot.r, pot.rVp, right=float(pot.rVp[-1]))
            mom = float((w * u2).sum()) * state.cell
            return s * kin * lam ** (2 * s) - mom - 0.5 * quart * lam**2

    lams = np.exp(np.linspace(math.log(span[0]), math.log(span[1]), 65))
    vals = np.array([g(l) for l in lams])
    roots = []
    for a, b, ga, gb in zip(lams[:-1], lams[1:], vals[:-1], vals[1:]):
        if ga == 0.0:
            roots.append(a)
        elif (ga < 0.0) != (gb < 0.0):
            roots.append(brentq(g, a, b, xtol=1e-15, rtol=8.9e-16, maxiter=200))
    if not roots:
        return None
    return min(roots, key=lambda l: abs(math.log(l)))


def solve_mountain_pass(
    p: ProblemParams,
    ground: GroundStateResult,
    n_points: int = 512,
    points_per_eps: float = 4.5,
    tol: float = 1e-5,
    p_tol: float = 1e-6,
    max_iter: int = 120,
    init: ScalarField | None = None,
) -> SolveReport:
    """Saddle point on the mass sphere via damped Newton iteration with a
    dilation stabilizer.

    The iteration starts from the dilation-path maximizer, on a box
    auto-sized to the predicted concentration scale eps = t_s^(-1/(2s))
    (about points_per_eps nodes per eps).  The dilation direction, which
    is near null at orders close to 1 and carries the instability, is
    deflated out of each Newton solve and controlled instead by the exact
    relabeling dilation u(x) -> lam u(lam x) that restores virial = 0
    (root nearest 1) after every accepted step; the final iterate is
    polished the same way, so the reported field satisfies the virial
    identity to rounding.

    tol is relative to the natural residual scale max(1, |mu|): saddles
    at orders near 1 concentrate and their multiplier grows like the
    kinetic energy, so a raw EL-residual tolerance would be meaningless
    across s.  The raw residual is reported in el_residual; the scaled
    one lands in extras["el_scaled"].
    """
    s, N = p.s, p.N
    if not (0.5 < s < 1.0):
        raise ConfigurationError("the saddle solver requires 1/2 < s < 1")
    if not (N < ground.Ns_star):
        raise ConfigurationError("the saddle solver requires N below the critical mass")
    bracket = mountain_pass_bracket(ground, p)
    ts = bracket.ts
    eps_pred = ts ** (-1.0 / (2.0 * s))

    if init is None:
        L_sad = n_points * eps_pred / points_per_eps
        grid = make_grid(L_sad, n_points)
        r_q, q_vals = ground.profile()
        interp = RadialInterpolant(r_q, q_vals)
        rho0 = bracket.rho_max
        amp = rho0 * math.sqrt(N / ground.Ns_star)
        vals = amp * interp(rho0 * np.sqrt(grid.r2))
        init = ScalarField(grid=grid, values=vals)
    grid = init.grid

    state = _FlowState(grid, p, init.values.copy())
    state.u *= math.sqrt(N / (float((state.u**2).sum()) * state.cell))

    trace = []
    el = math.inf
    below_ts = 0
    newton_target = max(1e-13, 0.01 * tol)
    best_el = math.inf
    flat_streak = 0
    on_manifold = False
    it = 0
    # stage 1: deflated Newton driven onto the virial-zero slice by exact
    # dilations after every accepted step.  The deflated system cannot
    # push the residual below the slice's own floor (the grid-level
    # virial defect seen through the dilation direction), so stagnation
    # of the residual marks convergence on the slice.
    while it <= max_iter:
        uh, kin, pot, quart, wmom = state.scalars()
        E = 0.5 * (kin + pot) - 0.25 * quart
        P = _virial_of(state, kin, quart, wmom)
        trace.append((it, E, kin, P))
        mu, R, el = _el_pieces(state, uh, kin, pot, quart, N)
        if el / max(1.0, abs(mu)) <= newton_target:
            on_manifold = True
            break
        if el > 0.95 * best_el:
            flat_streak += 1
            if flat_streak >= 2:
                on_manifold = True
                break
        else:
            flat_streak = 0
        best_el = min(best_el, el)
        if kin < 0.5 * ts:
            below_ts += 1
            if below_ts > 10:
                return _finalize(
                    state, p, "fell_to_min", el, trace, it, 0.0, ts,
                    message="descended into the kinetic ball (local-min basin)",
                )
        else:
            below_ts = 0
        delta = _newton_delta(state, N, mu, R, el, deflate=_dilation_generator(state))
        el_new = _try_step(state, N, delta, el)
        if el_new is None:
            # steepest descent on the squared residual as a safeguard
            shape = (state.n, state.n)
            diag = state.V - 3.0 * state.u**2 - mu
            HR = np.fft.irfft2(state.m_half * np.fft.rfft2(R), s=shape) + diag * R
            d = -_precondition(state, HR)
            el_new = _try_step(state, N, d, el, scale=0.1, halvings=20)
        if el_new is not None:
            _, kin2, pot2, quart2, wmom2 = state.scalars()
            lam = _dilation_root(state, kin2, quart2, wmom2)
            if lam is not None and abs(math.log(lam)) < 0.4:
                state.relabel(lam)
        else:
            flat_streak = 99  # no descent direction left: slice-converged
            continue
        it += 1
    if not on_manifold:
        return _finalize(
            state, p, "failed", el, trace, it, 0.0, ts,
            message=(f"saddle iteration did not settle on the virial-zero "
                     f"slice in {max_iter} steps (residual {el:.3e})"),
        )

    # stage 2: attempt the exact discrete critical point (undeflated
    # Newton, no dilation corrections); keep it only if its own virial
    # defect passes the threshold, otherwise return the slice point whose
    # virial vanishes to rounding
    manifold_snap = state.snapshot()
    _, kin0, pot0, quart0, _ = state.scalars()
    mu0 = (kin0 + pot0 - quart0) / N
    el_exact, exact_ok = _newton_polish(
        state, N, max(1e-13, 0.01 * tol) * max(1.0, abs(mu0)), max_steps=12
    )
    uh, kin, pot, quart, wmom = state.scalars()
    mu, R, el = _el_pieces(state, uh, kin, pot, quart, N)
    P = _virial_of(state, kin, quart, wmom)
    polished = False
    if not (exact_ok and abs(P) <= p_tol * kin):
        state.restore(manifold_snap)
        uh, kin, pot, quart, wmom = state.scalars()
        lam = _dilation_root(state, kin, quart, wmom)
        if lam is not None and abs(lam - 1.0) > 1e-16:
            state.relabel(lam)
        polished = True
        uh, kin, pot, quart, wmom = state.scalars()
        mu, R, el = _el_pieces(state, uh, kin, pot, quart, N)
        P = _virial_of(state, kin, quart, wmom)
    el_unpolished, p_unpolished = el_exact, P
    E = 0.5 * (kin + pot) - 0.25 * quart
    trace.append((it, E, kin, P))

    eps_meas = kin ** (-1.0 / (2.0 * s))
    under_resolved = eps_meas < 4.0 * state.h
    el_scaled = el / max(1.0, abs(mu))
    extras = {
        "eps": eps_meas,
        "bracket_lower": bracket.lower,
        "bracket_upper": bracket.upper,
        "rho_init": bracket.rho_max,
        "under_resolved": under_resolved,
        "virial_polished": polished,
        "el_scaled": el_scaled,
        "el_unpolished": el_unpolished,
        "virial_unpolished": p_unpolished,
    }
    if el_scaled > tol:
        cls = "failed"
        msg = f"virial polish left scaled EL residual {el_scaled:.3e} above tol={tol:g}"
    elif abs(P) > p_tol * kin:
        cls = "failed"
        msg = f"saddle converged but |virial|={abs(P):.3e} above p_tol*kinetic"
    elif under_resolved:
        cls = "failed"
        msg = f"under-resolved: eps={eps_meas:.3e} below 4h={4 * state.h:.3e}"
    else:
        cls, msg = "saddle", ""
    report = _finalize(state, p, cls, el, trace, it, 0.0, ts, message=msg, extras=extras)
    report.extras["annulus_fraction"] = annulus_mass_fraction(report.solution)
    return report
