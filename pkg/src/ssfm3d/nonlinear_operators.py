"""Nonlinear operator exponentials: pointwise, mixed-domain, and convolution.

The nonlinear part of the equation, (c1 + c2*d/dt)(N u) with N a pointwise
functional of the field, splits into

    alpha1 = c1*N + c2*dN/dt        (a pointwise multiplier), and
    alpha2 = c2*N*d/dt              (an advection with field-dependent speed).

exp(alpha1 * dz) multiplies the field in the original domain. exp(alpha2 * dz)
is applied through a mixed-domain multiplier M(t, w') acting on the time
spectrum u(w'): for each time sample t the inverse transform of
M(t, .) * u(.) is evaluated at that same t. With the commuting approximation
M = exp(-c2*N(t)*dz*i*w'); because N(t) and d/dt do not commute this is
accurate to O(dz^2) per application, and optional correction terms restore
O(dz^3) or O(dz^4):

    M += dz^2/2! * R R' (-i w')
       + dz^3/3! * [(R^2 R'' + R (R')^2)(-i w') + 3 R^2 R' (-i w')^2],

where R = c2*N and primes are spectral time derivatives. Convolution terms
f(t) o u exponentiate to the plain frequency multiplier exp(dz * f(w)).

All operations are pure; the N values entering them are frozen by the
caller (the stepper) from the field that enters the substep.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np

from . import fourier
from .errors import (
    AuxiliaryBlowupError,
    DomainStateError,
    ModelEvaluationError,
)
from .fourier import AXES, ComplexField
from .grid import Grid
from .linear_operator import _warn_on_amplification


class Alpha2Order(enum.Enum):
    """Accuracy of the mixed-domain operator in the substep size."""

    COMMUTING = "commuting"
    THIRD = "third"
    FOURTH = "fourth"


@dataclass(eq=False)
class RamanKernel:
    """Convolution kernel over the time axis, in both representations.

    `f_time` holds the kernel samples f(t); `f_freq` its forward transform
    under the package convention. Either may be supplied, the other is
    derived once.
    """

    f_time: np.ndarray
    f_freq: np.ndarray

    def __post_init__(self):
        if not (np.isfinite(self.f_time).all() and np.isfinite(self.f_freq).all()):
            raise ValueError("kernel values must be finite")

    @classmethod
    def from_time(cls, grid: Grid, f_time: np.ndarray) -> "RamanKernel":
        f_time = np.asarray(f_time, dtype=np.complex128)
        if f_time.shape != (grid.nt,):
            raise ValueError(f"kernel shape {f_time.shape} != ({grid.nt},)")
        f_freq = grid.dt * grid.nt * np.fft.ifft(f_time)
        return cls(f_time=f_time, f_freq=f_freq)

    @classmethod
    def from_freq(cls, grid: Grid, f_freq: np.ndarray) -> "RamanKernel":
        f_freq = np.asarray(f_freq, dtype=np.complex128)
        if f_freq.shape != (grid.nt,):
            raise ValueError(f"kernel shape {f_freq.shape} != ({grid.nt},)")
        f_time = np.fft.fft(f_freq) / (grid.dt * grid.nt)
        return cls(f_time=f_time, f_freq=f_freq)


@dataclass(eq=False)
class AuxiliaryPlugin:
    """First-order auxiliary state v(x, y, t) driven along the time axis.

    `rate(v, u, t)` returns dv/dt for transverse slabs v and u at time t.
    Integration starts from `initial_value` at the earliest time bin.
    """

    rate: Callable[[np.ndarray, np.ndarray, float], np.ndarray]
    initial_value: complex = 0.0
    integrator: str = "rk4"


@dataclass(eq=False)
class EquationModel:
    """Constants and functionals defining the nonlinear part of the equation.

    `beta(u, aux, grid)` returns the pointwise multiplicative functional N
    (the coefficient of u in the nonlinear term). When c2 == 0 the
    mixed-domain operator is the identity and schedules may skip it.
    """

    c1: complex
    c2: complex
    beta: Callable[[np.ndarray, np.ndarray | None, Grid], np.ndarray]
    auxiliary: AuxiliaryPlugin | None = None
    convolution_kernel: RamanKernel | None = None
    alpha2_order: Alpha2Order = Alpha2Order.FOURTH


def _require_real(field: ComplexField, what: str) -> None:
    for a in AXES:
        if not field.is_real(a):
            raise DomainStateError(f"{what} expects real representation, axis {a!r} is spectral")


def eval_N(
    model: EquationModel, field: ComplexField, aux: np.ndarray | None = None
) -> np.ndarray:
    """Evaluate the pointwise functional N on a real-representation field."""
    _require_real(field, "eval_N")
    out = np.asarray(model.beta(field.values, aux, field.grid), dtype=np.complex128)
    out = np.broadcast_to(out, field.values.shape)
    if not np.isfinite(out).all():
        idx = tuple(int(i) for i in np.argwhere(~np.isfinite(out))[0])
        g = field.grid
        raise ModelEvaluationError(
            f"N is non-finite at index {idx}, (x={g.x_axis[idx[0]]:g},"
            f" y={g.y_axis[idx[1]]:g}, t={g.t_axis[idx[2]]:g})"
        )
    return np.array(out)


def integrate_auxiliary(model: EquationModel, field: ComplexField) -> np.ndarray:
    """March the auxiliary ODE along the time axis for every transverse point.

    Classical 4th-order one-step method on the time grid; the field at the
    half-bin stage points is obtained by spectral interpolation (a half-bin
    shift in frequency), which is exact for band-limited data.
    """
    plugin = model.auxiliary
    if plugin is None:
        raise ValueError("model has no auxiliary plugin configured")
    if plugin.integrator != "rk4":
        raise ValueError(f"unsupported auxiliary integrator {plugin.integrator!r}")
    _require_real(field, "integrate_auxiliary")

    grid = field.grid
    u = field.values
    dt = grid.dt
    taxis = grid.t_axis

    # u(t + dt/2) via the spectral shift identity.
    spec = np.fft.ifft(u, axis=2)
    u_mid = np.fft.fft(np.exp(-1j * grid.w_axis * (dt / 2.0)) * spec, axis=2)

    v = np.empty(grid.shape, dtype=np.complex128)
    v[:, :, 0] = plugin.initial_value
    rate = plugin.rate
    with np.errstate(over="ignore", invalid="ignore"):
        for j in range(grid.nt - 1):
            vj = v[:, :, j]
            t0 = taxis[j]
            k1 = rate(vj, u[:, :, j], t0)
            k2 = rate(vj + 0.5 * dt * k1, u_mid[:, :, j], t0 + 0.5 * dt)
            k3 = rate(vj + 0.5 * dt * k2, u_mid[:, :, j], t0 + 0.5 * dt)
            k4 = rate(vj + dt * k3, u[:, :, j + 1], t0 + dt)
            v[:, :, j + 1] = vj + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if not np.isfinite(v[:, :, j + 1]).all():
                raise AuxiliaryBlowupError(
                    f"auxiliary state became non-finite between time bins {j} and {j + 1}"
                )
    return v


def apply_exp_alpha1(
    field: ComplexField,
    model: EquationModel,
    N_frozen: np.ndarray,
    effective_step: float,
) -> ComplexField:
    """Pointwise exponential of c1*N + c2*dN/dt, N frozen by the caller."""
    _require_real(field, "alpha1 step")
    alpha1 = model.c1 * N_frozen
    if model.c2 != 0:
        alpha1 = alpha1 + model.c2 * fourier.axis_derivative(N_frozen, field.grid, "t")
    with np.errstate(over="ignore", invalid="ignore"):
        mult = np.exp(alpha1 * effective_step)
    _warn_on_amplification(mult, "alpha1 exponential")
    return field.replace(mult * field.values)


@lru_cache(maxsize=8)
def _inverse_kernel_matrix(nt: int) -> np.ndarray:
    """E[l, m] = exp(-2 pi i l m / nt), the inverse-transform kernel."""
    lm = np.outer(np.arange(nt), np.arange(nt))
    return np.exp(-2j * np.pi * lm / nt)


def apply_exp_alpha2(
    field: ComplexField,
    model: EquationModel,
    N_frozen: np.ndarray,
    effective_step: float,
) -> ComplexField:
    """Mixed-domain exponential of c2*N*d/dt.

    The field must arrive with the time axis in spectral representation and
    the transverse axes real; `N_frozen` is in real time representation. For
    every transverse point the multiplier M(t, w') is contracted against the
    time spectrum row by row, which realizes "inverse transform evaluated at
    the matching time sample" exactly, at O(nt^2) cost per point. Returns
    the field in real time representation. Transverse points share no
    mutable state, so the loop over them is safely parallelizable.
    """
    if not field.is_spectral("t"):
        raise DomainStateError("alpha2 step expects the time axis in spectral representation")
    for a in ("x", "y"):
        if not field.is_real(a):
            raise DomainStateError(f"alpha2 step expects real representation on axis {a!r}")

    grid = field.grid
    dz = float(effective_step)
    out_domains = tuple(
        fourier.REAL if a == "t" else d for a, d in zip(AXES, field.domains)
    )
    if model.c2 == 0:
        # M is identically one; the contraction reduces to the plain inverse
        # transform of the input spectrum.
        return fourier.inverse(field, ("t",))

    w = grid.w_axis
    miw = -1j * w
    E = _inverse_kernel_matrix(grid.nt)
    R = model.c2 * np.asarray(N_frozen, dtype=np.complex128)
    order = model.alpha2_order

    # Correction coefficients grouped by their power of (-i w'), so each
    # transverse slab needs at most two broadcast products besides the
    # exponential. All derivatives of c2*N are spectral.
    coeff1 = coeff2 = None
    if order is not Alpha2Order.COMMUTING:
        R1 = fourier.axis_derivative(R, grid, "t")
        coeff1 = (dz**2 / 2.0) * R * R1
    if order is Alpha2Order.FOURTH:
        R2 = fourier.axis_derivative(R, grid, "t", order=2)
        coeff1 = coeff1 + (dz**3 / 6.0) * (R**2 * R2 + R * R1**2)
        coeff2 = (dz**3 / 2.0) * R**2 * R1

    out = np.empty(grid.shape, dtype=np.complex128)
    norm = 1.0 / (grid.nt * grid.dt)
    for ix in range(grid.nx):
        with np.errstate(over="ignore", invalid="ignore"):
            M = np.exp((-1j * dz) * R[ix][:, :, None] * w[None, None, :])
        if coeff1 is not None:
            M += coeff1[ix][:, :, None] * miw[None, None, :]
        if coeff2 is not None:
            M += coeff2[ix][:, :, None] * (miw**2)[None, None, :]
        _warn_on_amplification(M, "alpha2 mixed multiplier")
        M *= E[None, :, :]
        out[ix] = norm * np.matmul(M, field.values[ix][:, :, None])[:, :, 0]

    return ComplexField(out, out_domains, grid)


def apply_exp_convolution(
    field: ComplexField, kernel: RamanKernel, effective_step: float
) -> ComplexField:
    """Exponential of a convolution term: multiply by exp(step * f(w)).

    Applied per transverse point over the time axis. The field must be in
    real representation (the time transform is performed internally).
    """
    if effective_step < 0:
        raise ValueError(f"effective_step must be >= 0, got {effective_step!r}")
    _require_real(field, "convolution step")
    with np.errstate(over="ignore", invalid="ignore"):
        mult = np.exp(effective_step * kernel.f_freq)
    _warn_on_amplification(mult, "convolution exponential")
    spectral = fourier.forward(field, ("t",))
    return fourier.inverse(
        spectral.replace(mult[None, None, :] * spectral.values), ("t",)
    )
