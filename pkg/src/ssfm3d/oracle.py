"""Reference integrators and brute-force operator realizations.

These routines validate the split-step pipeline from an independent route:
`rhs` evaluates the true instantaneous right-hand side (no freezing of the
nonlinear coefficient), `reference_integrate` marches it with a classical
4th-order one-step method, and `dense_alpha2_expm` exponentiates the
advective nonlinear operator exactly through a dense matrix exponential.
They trade speed for transparency and are meant for desk-scale grids.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fourier
from .errors import (
    AuxiliaryBlowupError,
    DomainStateError,
    ModelEvaluationError,
    OracleError,
)
from .fourier import AXES, ComplexField
from .linear_operator import LinearSymbol
from .nonlinear_operators import EquationModel, eval_N, integrate_auxiliary

#: Largest time-axis size accepted by the dense matrix-exponential oracle.
DENSE_NT_CAP = 256

#: Term-ratio stopping tolerance of the matrix-exponential series.
EXPM_TOL = 1e-12


@dataclass(frozen=True)
class RhsEvaluation:
    """Instantaneous derivative of the field along the propagation coordinate."""

    derivative: np.ndarray


def rhs(field: ComplexField, model: EquationModel, symbol: LinearSymbol) -> RhsEvaluation:
    """du/dzeta = P u + c1 N u + c2 d(N u)/dt (+ f o u with a kernel).

    N is evaluated on the current field, never frozen; this is the true
    right-hand side the split-step scheme approximates.
    """
    for a in AXES:
        if not field.is_real(a):
            raise DomainStateError(f"rhs expects real representation, axis {a!r} is spectral")
    grid = field.grid
    u = field.values

    spectral = fourier.forward(field, AXES)
    lin = fourier.inverse(spectral.replace(symbol.cache * spectral.values), AXES).values

    aux = integrate_auxiliary(model, field) if model.auxiliary is not None else None
    N = eval_N(model, field, aux)
    out = lin + model.c1 * N * u
    if model.c2 != 0:
        out = out + model.c2 * fourier.axis_derivative(N * u, grid, "t")
    if model.convolution_kernel is not None:
        spec_t = np.fft.ifft(u, axis=2) * (grid.dt * grid.nt)
        conv = np.fft.fft(model.convolution_kernel.f_freq[None, None, :] * spec_t, axis=2)
        out = out + conv / (grid.dt * grid.nt)
    return RhsEvaluation(derivative=out)


def reference_integrate(
    initial: ComplexField,
    model: EquationModel,
    symbol: LinearSymbol,
    dzeta_ref: float,
    n_ref: int,
) -> ComplexField:
    """Classical 4th-order one-step march of `rhs` over n_ref steps.

    A blow-up at any stage (non-finite field or nonlinearity) is reported
    as an OracleError naming the step.
    """
    field = initial.copy()
    h = float(dzeta_ref)
    for step in range(n_ref):
        u = field.values
        try:
            k1 = rhs(field, model, symbol).derivative
            k2 = rhs(field.replace(u + 0.5 * h * k1), model, symbol).derivative
            k3 = rhs(field.replace(u + 0.5 * h * k2), model, symbol).derivative
            k4 = rhs(field.replace(u + h * k3), model, symbol).derivative
        except (ModelEvaluationError, AuxiliaryBlowupError) as exc:
            raise OracleError(
                f"reference integration diverged at step {step + 1}: {exc}"
            ) from exc
        field = field.replace(u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4))
        if not np.isfinite(field.values).all():
            raise OracleError(f"reference integration diverged at step {step + 1}")
    return field


def spectral_diff_matrix(nt: int, dt: float) -> np.ndarray:
    """Dense matrix of the spectral time derivative on an nt-point line."""
    w = 2.0 * np.pi * np.fft.fftfreq(nt, d=dt)
    return np.fft.fft((-1j * w)[:, None] * np.fft.ifft(np.eye(nt), axis=0), axis=0)


def dense_alpha2_expm(
    N_frozen: np.ndarray, c2: complex, dz: float, u_line: np.ndarray, dt: float
) -> np.ndarray:
    """exp(dz * diag(c2 N) D_t) applied to a single time line.

    D_t is the exact spectral differentiation matrix. The exponential is
    computed by scaling and squaring with a truncated series and a
    term-ratio convergence check; this is the ground truth for the accuracy
    ladder of the mixed-domain operator.
    """
    N_frozen = np.asarray(N_frozen, dtype=np.complex128)
    u_line = np.asarray(u_line, dtype=np.complex128)
    nt = len(u_line)
    if nt > DENSE_NT_CAP:
        raise OracleError(f"dense oracle capped at nt = {DENSE_NT_CAP}, got {nt}")
    if N_frozen.shape != (nt,):
        raise OracleError(f"N shape {N_frozen.shape} != ({nt},)")

    A = (c2 * N_frozen)[:, None] * spectral_diff_matrix(nt, dt)
    B = dz * A
    norm = np.linalg.norm(B, 1)
    squarings = max(0, int(np.ceil(np.log2(norm / 0.5)))) if norm > 0.5 else 0
    Bs = B / (2.0**squarings)

    term = np.eye(nt, dtype=np.complex128)
    total = term.copy()
    for k in range(1, 64):
        term = term @ Bs / k
        total += term
        if np.linalg.norm(term, 1) <= EXPM_TOL * np.linalg.norm(total, 1):
            break
    else:
        raise OracleError(f"matrix-exponential series did not converge to {EXPM_TOL:g}")

    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(squarings):
            total = total @ total
    if not np.isfinite(total).all():
        raise OracleError("matrix exponential overflowed during squaring")
    return total @ u_line
