"""Periodic spectral grid, fractional Laplacian, and field storage.

Conventions fixed repo-wide:

* forward FFTs are unnormalized, inverse FFTs carry the 1/n^2 factor
  (numpy's default pair);
* every integral is the plain node quadrature h^2 * sum;
* the fractional Laplacian of order s acts as the Fourier multiplier
  |xi|^(2s), with the zero mode set to exactly 0 for every s.

All operations here are pure functions over immutable values and safe to
call concurrently; per-grid tables (wavenumbers, multiplier tables) are
cached on their frozen owners, so concurrent lookups never mutate shared
state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import ConfigurationError, GridMismatchError, NumericalConsistencyError

__all__ = [
    "Grid2D",
    "ScalarField",
    "FractionalSymbol",
    "make_grid",
    "make_symbol",
    "frac_laplacian",
    "frac_seminorm_sq",
    "integral",
    "mass",
    "l2_norm",
    "spectral_mass",
    "save_field",
    "load_field",
]


def _power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid2D:
    """Square periodic box [-L/2, L/2)^2 with n nodes per axis.

    The spacing h is the stored primitive and the extent is defined as
    n * h, so h * n == L holds bit for bit.  n is restricted to powers of
    two, which keeps FFT sizes exact and makes h = L/n a dyadic rational
    whenever L is.
    """

    n: int
    h: float

    def __post_init__(self):
        if not isinstance(self.n, int) or not _power_of_two(self.n) or self.n < 16:
            raise ConfigurationError(
                f"points_per_axis must be a power of two >= 16, got {self.n!r}"
            )
        if not np.isfinite(self.h) or self.h <= 0.0:
            raise ConfigurationError(f"grid spacing must be positive, got {self.h!r}")

    @property
    def L(self) -> float:
        return self.n * self.h

    @cached_property
    def axis(self) -> np.ndarray:
        """Node coordinates along one axis: -L/2, ..., L/2 - h."""
        a = (np.arange(self.n) - self.n // 2) * self.h
        a.flags.writeable = False
        return a

    @cached_property
    def x(self) -> np.ndarray:
        x = np.broadcast_to(self.axis[:, None], (self.n, self.n))
        return x

    @cached_property
    def y(self) -> np.ndarray:
        return np.broadcast_to(self.axis[None, :], (self.n, self.n))

    @cached_property
    def r2(self) -> np.ndarray:
        r2 = self.axis[:, None] ** 2 + self.axis[None, :] ** 2
        r2.flags.writeable = False
        return r2

    @cached_property
    def k_axis(self) -> np.ndarray:
        """Wavenumbers 2*pi*fftfreq in FFT layout; index 0 is the zero mode."""
        k = 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.h)
        k.flags.writeable = False
        return k

    @cached_property
    def k2(self) -> np.ndarray:
        k2 = self.k_axis[:, None] ** 2 + self.k_axis[None, :] ** 2
        k2.flags.writeable = False
        return k2

    @property
    def cell(self) -> float:
        """Quadrature weight of one node."""
        return self.h * self.h

    def same_as(self, other: "Grid2D") -> bool:
        return self.n == other.n and self.h == other.h

    def scaled(self, lam: float) -> "Grid2D":
        """Grid carrying the exact dilation x -> x/lam (extent L/lam)."""
        if not np.isfinite(lam) or lam <= 0.0:
            raise ConfigurationError(f"dilation factor must be positive, got {lam!r}")
        return replace(self, h=self.h / lam)


def make_grid(L: float, n: int) -> Grid2D:
    """Build the periodic box [-L/2, L/2)^2 with n nodes per axis."""
    if not np.isfinite(L) or L <= 0.0:
        raise ConfigurationError(f"box extent must be positive, got {L!r}")
    if not isinstance(n, (int, np.integer)) or not _power_of_two(int(n)) or n < 16:
        raise ConfigurationError(f"points_per_axis must be a power of two >= 16, got {n!r}")
    return Grid2D(n=int(n), h=float(L) / int(n))


_KIND_TAGS = ("generic", "nonnegative")


@dataclass(frozen=True)
class ScalarField:
    """Real samples of a function on a Grid2D, row-major values[i, j] at
    (x_i, y_j).  Treated as immutable by all operations."""

    grid: Grid2D
    values: np.ndarray
    kind: str = "generic"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (self.grid.n, self.grid.n):
            raise ConfigurationError(
                f"field shape {v.shape} does not match grid n={self.grid.n}"
            )
        if not np.all(np.isfinite(v)):
            raise NumericalConsistencyError("field contains non-finite values")
        if self.kind not in _KIND_TAGS:
            raise ConfigurationError(f"unknown field kind {self.kind!r}")
        if self.kind == "nonnegative":
            vmax = float(v.max(initial=0.0))
            if float(v.min(initial=0.0)) < -1e-12 * max(vmax, 1.0):
                raise NumericalConsistencyError(
                    "field tagged nonnegative has significantly negative values"
                )
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class FractionalSymbol:
    """Fourier multiplier table m = |xi|^(2s) on a grid.

    At s = 1 the table is the squared-wavenumber array itself, so the
    operator coincides bit for bit with the standard spectral Laplacian.
    """

    grid: Grid2D
    s: float
    table: np.ndarray

    def half_table(self) -> np.ndarray:
        """Multiplier restricted to the rfft2 layout."""
        return self.table[:, : self.grid.n // 2 + 1]


def make_symbol(grid: Grid2D, s: float) -> FractionalSymbol:
    if not (0.0 < s <= 1.0):
        raise ConfigurationError(f"fractional order must lie in (0, 1], got {s!r}")
    if s == 1.0:
        m = grid.k2
    else:
        m = grid.k2**s
        m = m.copy()
        m[0, 0] = 0.0  # zero mode of the continuous-symbol limit
        m.flags.writeable = False
    return FractionalSymbol(grid=grid, s=float(s), table=m)


def _check_same_grid(u: ScalarField, sym: FractionalSymbol) -> None:
    if not u.grid.same_as(sym.grid):
        raise GridMismatchError(
            f"field grid (n={u.grid.n}, h={u.grid.h}) does not match symbol grid "
            f"(n={sym.grid.n}, h={sym.grid.h})"
        )


def frac_laplacian(u: ScalarField, sym: FractionalSymbol) -> ScalarField:
    """Apply the fractional Laplacian via its Fourier multiplier.

    The output must be real up to rounding; an imaginary residue above
    1e-10 of the field norm signals a corrupted input and raises.
    """
    _check_same_grid(u, sym)
    w = np.fft.ifft2(sym.table * np.fft.fft2(u.values))
    scale = float(np.sqrt(np.mean(u.values**2) * np.mean(sym.table**2))) or 1.0
    residue = float(np.sqrt(np.mean(w.imag**2)))
    if residue > 1e-10 * max(scale, 1e-300):
        raise NumericalConsistencyError(
            f"fractional Laplacian produced imaginary residue {residue:.3e}"
        )
    return ScalarField(grid=u.grid, values=w.real)


def _spectral_weighted_sum(grid: Grid2D, weighted_sq_modes: np.ndarray) -> float:
    # Parseval: h^2 * sum_x = (h^2 / n^2) * sum_k on the full complex grid.
    return float(weighted_sq_modes.sum()) * grid.cell / (grid.n * grid.n)


def frac_seminorm_sq(u: ScalarField, sym: FractionalSymbol) -> float:
    """Quadrature-consistent value of the squared seminorm
    integral |(-Delta)^(s/2) u|^2 dx = sum m |u_hat|^2 (Plancherel)."""
    _check_same_grid(u, sym)
    uh = np.fft.fft2(u.values)
    return _spectral_weighted_sum(u.grid, sym.table * (uh.real**2 + uh.imag**2))


def integral(u: ScalarField) -> float:
    return float(u.values.sum()) * u.grid.cell


def mass(u: ScalarField) -> float:
    """Squared L2 norm, the conserved particle number."""
    return float((u.values**2).sum()) * u.grid.cell


def l2_norm(u: ScalarField) -> float:
    return float(np.sqrt(mass(u)))


def spectral_mass(u: ScalarField) -> float:
    """Squared L2 norm evaluated on the spectral side (Plancherel check)."""
    uh = np.fft.fft2(u.values)
    return _spectral_weighted_sum(u.grid, uh.real**2 + uh.imag**2)


# ---------------------------------------------------------------------------
# Field storage: raw little-endian doubles plus a JSON sidecar.


def save_field(
    u: ScalarField,
    basepath: str | Path,
    s: float | None = None,
    N: float | None = None,
) -> tuple[Path, Path]:
    """Write <base>.f64 (row-major '<f8') and <base>.json sidecar.

    Round trips are bit exact: n is a power of two, so L/n reproduces the
    stored spacing exactly.
    """
    base = Path(basepath)
    # append rather than with_suffix: base names may contain dots (s0.95)
    raw = base.parent / (base.name + ".f64")
    meta = base.parent / (base.name + ".json")
    raw.parent.mkdir(parents=True, exist_ok=True)
    u.values.astype("<f8").tofile(raw)
    sidecar = {"n": u.grid.n, "L": u.grid.L, "s": s, "N": N, "kind": u.kind}
    meta.write_text(json.dumps(sidecar, indent=1) + "\n")
    return raw, meta


def load_field(basepath: str | Path) -> tuple[ScalarField, dict]:
    base = Path(basepath)
    raw = base.parent / (base.name + ".f64")
    meta = base.parent / (base.name + ".json")
    sidecar = json.loads(meta.read_text())
    n = int(sidecar["n"])
    grid = make_grid(float(sidecar["L"]), n)
    values = np.fromfile(raw, dtype="<f8")
    if values.size != n * n:
        raise ConfigurationError(
            f"field file {raw} holds {values.size} values, expected {n * n}"
        )
    field = ScalarField(grid=grid, values=values.reshape(n, n), kind=sidecar.get("kind", "generic"))
    return field, sidecar
