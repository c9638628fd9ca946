"""Constant-coefficient derivative operator as a spectral multiplier.

The operator is a double power series over the transverse del operator and
the time derivative,

    P = sum_{n,j} c_nj * (d^n/dx^n + d^n/dy^n) * (d/dt)^j,

which becomes the pointwise function

    P(kx, ky, w) = sum_{n,j} c_nj * ((-i kx)^n + (-i ky)^n) * (-i w)^j

on the spectral grid (note (-i kx)^0 + (-i ky)^0 = 2). A closed-form
evaluator may be supplied instead of the series; its convergence domain, if
declared, must contain every grid frequency. The exponential exp(P * step)
is applied by spectral multiplication, which is exact in the propagation
step for fields resolved by the grid.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field
from typing import Callable, Mapping

import numpy as np

from . import fourier
from .errors import (
    AmplificationWarning,
    ConvergenceDomainError,
    DomainStateError,
    SingularSymbolError,
    TruncationWarning,
)
from .fourier import AXES, ComplexField
from .grid import Grid

#: Relative cache change above which raising the truncation order by two
#: triggers a TruncationWarning.
TRUNCATION_TOL = 1e-10

#: |multiplier| above which an amplification warning is emitted even without
#: floating-point overflow.
AMPLIFICATION_LIMIT = 1e150


@dataclass(frozen=True)
class CoefficientSeries:
    """Sparse table of series coefficients c_nj with truncation orders.

    Entries with n > n_max or j > j_max are excluded from the symbol but are
    used by the truncation self-check. Orders default to the largest indices
    present.
    """

    coefficients: Mapping[tuple[int, int], complex]
    n_max: int | None = None
    j_max: int | None = None

    def orders(self) -> tuple[int, int]:
        n_max = self.n_max
        j_max = self.j_max
        if n_max is None:
            n_max = max((n for n, _ in self.coefficients), default=0)
        if j_max is None:
            j_max = max((j for _, j in self.coefficients), default=0)
        return n_max, j_max


@dataclass(frozen=True)
class ClosedForm:
    """Closed-form symbol evaluator over (kx, ky, w) meshes.

    `convergence_domain` optionally maps axis names ("kx", "ky", "w") to
    open intervals that must contain every grid frequency on that axis.
    """

    evaluator: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
    convergence_domain: Mapping[str, tuple[float, float]] | None = None


@dataclass(eq=False)
class LinearSymbol:
    """Symbol values cached on the grid, plus memoized step exponentials.

    Immutable after build apart from the exponential memo; applications are
    pure with respect to the symbol and safe on distinct fields concurrently.
    """

    grid: Grid
    form: CoefficientSeries | ClosedForm
    cache: np.ndarray
    _exp_cache: dict[float, np.ndarray] = dc_field(default_factory=dict, repr=False)

    def exp_multiplier(self, effective_step: float) -> np.ndarray:
        """exp(cache * step), memoized per distinct step value."""
        key = float(effective_step)
        mult = self._exp_cache.get(key)
        if mult is None:
            with np.errstate(over="ignore", invalid="ignore"):
                mult = np.exp(self.cache * key)
            _warn_on_amplification(mult, "linear operator exponential")
            self._exp_cache[key] = mult
        return mult


def _warn_on_amplification(multiplier: np.ndarray, label: str) -> None:
    finite = np.isfinite(multiplier)
    if not finite.all():
        peak = np.max(np.abs(multiplier[finite])) if finite.any() else np.inf
        warnings.warn(
            AmplificationWarning(
                f"{label} overflowed; max finite |multiplier| = {peak:.3e}"
            ),
            stacklevel=3,
        )
        return
    # Cheap sqrt-free bound first; the exact magnitude only when it matters.
    bound = max(np.max(np.abs(multiplier.real)), np.max(np.abs(multiplier.imag)))
    if bound > AMPLIFICATION_LIMIT / 2:
        peak = np.max(np.abs(multiplier))
        if peak > AMPLIFICATION_LIMIT:
            warnings.warn(
                AmplificationWarning(f"{label} reached |multiplier| = {peak:.3e}"),
                stacklevel=3,
            )


def _series_cache(grid: Grid, series: CoefficientSeries, n_max: int, j_max: int) -> np.ndarray:
    mikx = -1j * grid.kx_axis
    miky = -1j * grid.ky_axis
    miw = -1j * grid.w_axis
    cache = np.zeros(grid.shape, dtype=np.complex128)
    for (n, j), c in series.coefficients.items():
        if n > n_max or j > j_max:
            continue
        if c == 0:
            continue
        transverse = mikx[:, None] ** n + miky[None, :] ** n
        cache += c * transverse[:, :, None] * (miw**j)[None, None, :]
    return cache


def _first_nonfinite(cache: np.ndarray, grid: Grid) -> str:
    idx = tuple(int(i) for i in np.argwhere(~np.isfinite(cache))[0])
    kx = grid.kx_axis[idx[0]]
    ky = grid.ky_axis[idx[1]]
    w = grid.w_axis[idx[2]]
    return f"bin {idx} at (kx={kx:g}, ky={ky:g}, w={w:g})"


def build_symbol(
    grid: Grid,
    form: CoefficientSeries | ClosedForm,
    truncation_tol: float = TRUNCATION_TOL,
) -> LinearSymbol:
    """Evaluate the symbol on every grid bin and cache it.

    Raises ConvergenceDomainError when a grid frequency leaves a declared
    convergence domain and SingularSymbolError when the evaluation is
    non-finite anywhere (e.g. a pole landing on a bin). For series forms the
    cache is recomputed at truncation orders raised by two; a relative
    change above `truncation_tol` emits a TruncationWarning.
    """
    if isinstance(form, ClosedForm):
        if form.convergence_domain:
            axes_freq = {"kx": grid.kx_axis, "ky": grid.ky_axis, "w": grid.w_axis}
            for name, (lo, hi) in form.convergence_domain.items():
                freq = axes_freq[name]
                bad = (freq <= lo) | (freq >= hi)
                if bad.any():
                    offender = freq[bad][np.argmax(np.abs(freq[bad]))]
                    raise ConvergenceDomainError(
                        f"{name} = {offender:g} outside convergence domain ({lo:g}, {hi:g});"
                        " refine the spacing or shift the symbol parameters"
                    )
        kx, ky, w = np.meshgrid(grid.kx_axis, grid.ky_axis, grid.w_axis, indexing="ij")
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            cache = np.asarray(form.evaluator(kx, ky, w), dtype=np.complex128)
        cache = np.broadcast_to(cache, grid.shape).copy()
    else:
        n_max, j_max = form.orders()
        cache = _series_cache(grid, form, n_max, j_max)
        extended = _series_cache(grid, form, n_max + 2, j_max + 2)
        scale = np.max(np.abs(extended))
        if scale > 0:
            drift = np.max(np.abs(extended - cache)) / scale
            if drift > truncation_tol:
                warnings.warn(
                    TruncationWarning(
                        f"raising truncation orders to ({n_max + 2}, {j_max + 2}) changes"
                        f" the symbol by {drift:.3e} (tol {truncation_tol:g})"
                    ),
                    stacklevel=2,
                )

    if not np.isfinite(cache).all():
        raise SingularSymbolError(
            f"symbol is non-finite at {_first_nonfinite(cache, grid)}"
        )
    return LinearSymbol(grid=grid, form=form, cache=cache)


def apply_exp_linear(
    field: ComplexField, symbol: LinearSymbol, effective_step: float
) -> ComplexField:
    """Apply exp(symbol * step) by a full spectral round trip.

    The field must be in real representation on all three axes; the input is
    left unchanged.
    """
    if effective_step < 0:
        raise ValueError(f"effective_step must be >= 0, got {effective_step!r}")
    for a in AXES:
        if not field.is_real(a):
            raise DomainStateError(f"linear step expects real representation, axis {a!r} is spectral")
    mult = symbol.exp_multiplier(effective_step)
    spectral = fourier.forward(field, AXES)
    with np.errstate(invalid="ignore"):
        return fourier.inverse(spectral.replace(mult * spectral.values), AXES)


def apply_symbol(field: ComplexField, symbol: LinearSymbol) -> ComplexField:
    """Apply the (non-exponentiated) operator itself: P u via one round trip."""
    for a in AXES:
        if not field.is_real(a):
            raise DomainStateError(f"symbol application expects real representation, axis {a!r} is spectral")
    spectral = fourier.forward(field, AXES)
    return fourier.inverse(spectral.replace(symbol.cache * spectral.values), AXES)
