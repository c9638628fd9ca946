"""Discretized (x, y, t) domain, its spectral axes, and the propagation step.

All coordinates are unit-less. The grid is uniform and periodic along every
axis; the spectral axes hold angular frequencies in discrete-transform
ordering (value 0 at index 0, Nyquist limit pi/spacing).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fourier
from .fourier import AXES

#: Fraction of bins (per axis, ranked by |frequency|) counted as the spectral
#: tail by the sampling monitor. Documented constant, overridable per call.
DEFAULT_TAIL_FRACTION = 0.1


@dataclass(frozen=True, eq=False)
class Grid:
    """Immutable sampling description shared by all fields of a run.

    `kx_axis`, `ky_axis`, `w_axis` are the angular-frequency axes matching
    the real axes in length and transform ordering. `dzeta` is the fixed
    propagation step and `n_steps` the number of slices a run advances.
    """

    nx: int
    ny: int
    nt: int
    dx: float
    dy: float
    dt: float
    kx_axis: np.ndarray = field(repr=False)
    ky_axis: np.ndarray = field(repr=False)
    w_axis: np.ndarray = field(repr=False)
    dzeta: float
    n_steps: int

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.nx, self.ny, self.nt)

    @property
    def x_axis(self) -> np.ndarray:
        """Centered real x axis (0 at index nx // 2)."""
        return (np.arange(self.nx) - self.nx // 2) * self.dx

    @property
    def y_axis(self) -> np.ndarray:
        return (np.arange(self.ny) - self.ny // 2) * self.dy

    @property
    def t_axis(self) -> np.ndarray:
        return (np.arange(self.nt) - self.nt // 2) * self.dt

    def spacing(self, axis: str) -> float:
        return {"x": self.dx, "y": self.dy, "t": self.dt}[axis]

    def size(self, axis: str) -> int:
        return {"x": self.nx, "y": self.ny, "t": self.nt}[axis]

    def spectral_axis(self, axis: str) -> np.ndarray:
        return {"x": self.kx_axis, "y": self.ky_axis, "t": self.w_axis}[axis]


def build_grid(
    nx: int,
    ny: int,
    nt: int,
    dx: float,
    dy: float,
    dt: float,
    dzeta: float,
    n_steps: int,
) -> Grid:
    """Construct a grid with transform-ordered spectral axes.

    Spectral axis values are 2*pi*j/(N*spacing) for signed integer j, mapped
    to [-pi/spacing, pi/spacing). Counts must be >= 1 (powers of two
    recommended), spacings and dzeta positive, n_steps >= 0.
    """
    for name, count in (("nx", nx), ("ny", ny), ("nt", nt)):
        if not isinstance(count, (int, np.integer)) or count < 1:
            raise ValueError(f"{name} must be a positive integer, got {count!r}")
    for name, spacing in (("dx", dx), ("dy", dy), ("dt", dt)):
        if not spacing > 0:
            raise ValueError(f"{name} must be positive, got {spacing!r}")
    if not dzeta > 0:
        raise ValueError(f"dzeta must be positive, got {dzeta!r}")
    if not isinstance(n_steps, (int, np.integer)) or n_steps < 0:
        raise ValueError(f"n_steps must be a non-negative integer, got {n_steps!r}")

    return Grid(
        nx=int(nx),
        ny=int(ny),
        nt=int(nt),
        dx=float(dx),
        dy=float(dy),
        dt=float(dt),
        kx_axis=2.0 * np.pi * np.fft.fftfreq(nx, d=dx),
        ky_axis=2.0 * np.pi * np.fft.fftfreq(ny, d=dy),
        w_axis=2.0 * np.pi * np.fft.fftfreq(nt, d=dt),
        dzeta=float(dzeta),
        n_steps=int(n_steps),
    )


@dataclass(frozen=True)
class NyquistReport:
    """Per-axis spectral tail-energy fractions and the exceed flag."""

    fractions: dict[str, float]
    threshold: float
    flagged: bool


def nyquist_margin(
    field: "fourier.ComplexField",
    threshold: float,
    tail_fraction: float = DEFAULT_TAIL_FRACTION,
) -> NyquistReport:
    """Fraction of spectral power in the outermost bins of each axis.

    For every non-degenerate axis, the ceil(tail_fraction * N) bins with the
    largest |frequency| are summed and divided by the total spectral power.
    The flag is set when any fraction exceeds `threshold`. A zero-power field
    reports zero fractions and no flag. The result is invariant under
    multiplication of the field by a global complex constant.
    """
    grid = field.grid
    fractions: dict[str, float] = {}
    for axis in AXES:
        n = grid.size(axis)
        if n == 1:
            fractions[axis] = 0.0
            continue
        probe = field if field.is_spectral(axis) else fourier.forward(field, (axis,))
        dim = AXES.index(axis)
        other = tuple(d for d in range(3) if d != dim)
        power = np.sum(np.abs(probe.values) ** 2, axis=other)
        total = float(np.sum(power))
        if total == 0.0:
            fractions[axis] = 0.0
            continue
        count = max(1, int(np.ceil(tail_fraction * n)))
        tail_bins = np.argsort(np.abs(grid.spectral_axis(axis)), kind="stable")[-count:]
        fractions[axis] = float(np.sum(power[tail_bins]) / total)
    flagged = any(f > threshold for f in fractions.values())
    return NyquistReport(fractions=fractions, threshold=threshold, flagged=flagged)
