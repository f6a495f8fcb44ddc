"""Uniform cell-centered grid on a truncated plane, plus field containers."""

from dataclasses import dataclass, field

import numpy as np

from .errors import NotPowerOfTwo, ZeroMass

MASS_TOL = 1e-6  # |h^2 sum(omega) - 1| allowed for probability-tagged fields


@dataclass(frozen=True)
class Grid:
    """Square mesh of n x n cells covering [-L, L]^2, nodes at cell centers.

    Spacing is h = 2L/n exactly; node (i, j) sits at
    (-L + (i + 1/2) h, -L + (j + 1/2) h).
    """

    n: int
    half_width: float
    h: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "h", 2.0 * self.half_width / self.n)

    def coords(self):
        """1-D array of node coordinates along one axis."""
        return -self.half_width + (np.arange(self.n) + 0.5) * self.h

    def meshgrid(self):
        """(X, Y) node coordinate arrays, shape (n, n), x varying on axis 0."""
        c = self.coords()
        return np.meshgrid(c, c, indexing="ij")

    def radius(self):
        X, Y = self.meshgrid()
        return np.hypot(X, Y)

    @property
    def cell_area(self):
        return self.h * self.h


def make_grid(n, half_width):
    """Build a Grid; n must be a power of two >= 16, half_width > 0."""
    if n < 16 or (n & (n - 1)) != 0:
        raise NotPowerOfTwo(f"n={n} must be a power of two >= 16")
    if half_width <= 0:
        raise ValueError(f"half_width={half_width} must be positive")
    return Grid(int(n), float(half_width))


@dataclass
class ScalarField:
    """Real samples of one scalar quantity on a Grid."""

    grid: Grid
    values: np.ndarray
    time: float = 0.0

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (self.grid.n, self.grid.n):
            raise ValueError(f"values shape {self.values.shape} != grid ({self.grid.n}, {self.grid.n})")

    def copy(self):
        return ScalarField(self.grid, self.values.copy(), self.time)

    def mass(self):
        return float(self.values.sum() * self.grid.cell_area)

    def check_finite(self):
        if not np.isfinite(self.values).all():
            raise ValueError("field contains non-finite values")
        return self

    def normalized(self, tol=1e-12):
        """Unit-mass copy; raises ZeroMass when there is nothing to scale."""
        m = self.mass()
        if m < tol:
            raise ZeroMass(f"mass {m:.3e} below {tol:.1e}")
        return ScalarField(self.grid, self.values / m, self.time)

    def is_probability(self, tol=MASS_TOL):
        return bool(self.values.min() >= 0.0 and abs(self.mass() - 1.0) <= tol)


@dataclass
class VectorField:
    """Node-sampled plane vector field (ux, uy) on a Grid."""

    grid: Grid
    ux: np.ndarray
    uy: np.ndarray

    def __post_init__(self):
        self.ux = np.asarray(self.ux, dtype=np.float64)
        self.uy = np.asarray(self.uy, dtype=np.float64)
        shape = (self.grid.n, self.grid.n)
        if self.ux.shape != shape or self.uy.shape != shape:
            raise ValueError("component shape mismatch with grid")

    def max_norm(self):
        return float(max(np.abs(self.ux).max(), np.abs(self.uy).max()))
