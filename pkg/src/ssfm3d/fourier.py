"""Transform engine for complex fields over the (x, y, t) axes.

Convention (fixed for the whole package): the forward transform uses the
kernel exp(+i*w*t) (and exp(+i*k*x) transversely) and carries the axis
spacing, the inverse uses exp(-i*w*t) and carries bin_spacing/(2*pi), so
discrete sums approximate the continuous transform pair

    F(w) = integral f(t) exp(+i w t) dt
    f(t) = (1/2pi) integral F(w) exp(-i w t) dw.

Under this convention d/dt becomes multiplication by (-i*w) in spectral
space, and multiplying a spectrum by exp(-i*w*s) shifts the signal to
f(t + s). Every operator in the package is a pure multiplier in frequency,
so the choice of real-axis origin is immaterial: transforms are defined
with respect to the sample index (t_n = n*dt), and round trips cancel any
origin phase.

Transforms are pure functions; distinct fields may be transformed
concurrently, a single field must not be handed to two transforms at once.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import TYPE_CHECKING, Iterable

import numpy as np

from .errors import DomainStateError

if TYPE_CHECKING:
    from .grid import Grid

AXES = ("x", "y", "t")

REAL = "real"
SPECTRAL = "spectral"


@dataclass(eq=False)
class ComplexField:
    """Solution samples on a grid, with a per-axis real/spectral tag.

    `values` is complex with shape (nx, ny, nt) (or the per-axis spectral
    counterparts). Treat instances as immutable: operations return new
    fields and never mutate their inputs.
    """

    values: np.ndarray
    domains: tuple[str, str, str] = dc_field(default=(REAL, REAL, REAL))
    grid: "Grid" = None  # type: ignore[assignment]

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.grid is not None and self.values.shape != self.grid.shape:
            raise ValueError(
                f"field shape {self.values.shape} does not match grid {self.grid.shape}"
            )

    def is_real(self, axis: str) -> bool:
        return self.domains[AXES.index(axis)] == REAL

    def is_spectral(self, axis: str) -> bool:
        return self.domains[AXES.index(axis)] == SPECTRAL

    def replace(self, values: np.ndarray, domains: tuple[str, str, str] | None = None) -> "ComplexField":
        return ComplexField(values, self.domains if domains is None else domains, self.grid)

    def copy(self) -> "ComplexField":
        return ComplexField(self.values.copy(), self.domains, self.grid)


def make_field(grid: "Grid", values: np.ndarray) -> ComplexField:
    """Wrap an (nx, ny, nt) array as an all-real-representation field."""
    return ComplexField(np.asarray(values, dtype=np.complex128), (REAL, REAL, REAL), grid)


def _normalize_axes(axes: str | Iterable[str]) -> tuple[str, ...]:
    if isinstance(axes, str):
        axes = (axes,)
    axes = tuple(axes)
    for a in axes:
        if a not in AXES:
            raise ValueError(f"unknown axis {a!r}, expected one of {AXES}")
    if len(set(axes)) != len(axes):
        raise ValueError(f"duplicate axis in {axes}")
    return axes


def forward(field: ComplexField, axes: str | Iterable[str] = AXES) -> ComplexField:
    """Transform the named axes from real to spectral representation."""
    axes = _normalize_axes(axes)
    grid = field.grid
    dims = []
    scale = 1.0
    for a in axes:
        if not field.is_real(a):
            raise DomainStateError(f"axis {a!r} is already spectral")
        dims.append(AXES.index(a))
        scale *= grid.size(a) * grid.spacing(a)
    # Forward kernel exp(+i w t) is numpy's ifft kernel; undo its 1/N and
    # weight by the spacing so the sum approximates the integral.
    out = np.fft.ifftn(field.values, axes=dims) * scale
    domains = list(field.domains)
    for d in dims:
        domains[d] = SPECTRAL
    return ComplexField(out, tuple(domains), grid)


def inverse(field: ComplexField, axes: str | Iterable[str] = AXES) -> ComplexField:
    """Transform the named axes from spectral back to real representation."""
    axes = _normalize_axes(axes)
    grid = field.grid
    dims = []
    scale = 1.0
    for a in axes:
        if not field.is_spectral(a):
            raise DomainStateError(f"axis {a!r} is already real")
        dims.append(AXES.index(a))
        scale /= grid.size(a) * grid.spacing(a)
    # Inverse kernel exp(-i w t) is numpy's fft kernel; the bin spacing
    # 2pi/(N dt) together with the 1/(2pi) prefactor gives 1/(N dt).
    out = np.fft.fftn(field.values, axes=dims) * scale
    domains = list(field.domains)
    for d in dims:
        domains[d] = REAL
    return ComplexField(out, tuple(domains), grid)


def axis_derivative(values: np.ndarray, grid: "Grid", axis: str = "t", order: int = 1) -> np.ndarray:
    """Spectral derivative of real-representation samples along one axis.

    Computes inverse((-i w)^order * forward(values)) along `axis`; the
    forward/inverse weights cancel, leaving a plain FFT round trip. Exact
    (to round-off) for band-limited periodic data.
    """
    dim = AXES.index(axis)
    freq = grid.spectral_axis(axis)
    mult = (-1j * freq) ** order
    shape = [1, 1, 1]
    shape[dim] = len(freq)
    spec = np.fft.ifft(np.asarray(values, dtype=np.complex128), axis=dim)
    return np.fft.fft(mult.reshape(shape) * spec, axis=dim)


def axis_weight(field: ComplexField, axis: str) -> float:
    """L2 quadrature weight of one axis in the field's current representation."""
    grid = field.grid
    if field.is_real(axis):
        return grid.spacing(axis)
    return 1.0 / (grid.size(axis) * grid.spacing(axis))


def l2_norm(field: ComplexField) -> float:
    """L2 norm with the representation-dependent quadrature weights.

    Parseval consistency: the norm is preserved by forward/inverse to
    round-off, in any mix of representations.
    """
    weight = 1.0
    for a in AXES:
        weight *= axis_weight(field, a)
    return float(np.sqrt(np.sum(np.abs(field.values) ** 2) * weight))
