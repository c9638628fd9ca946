"""Symmetrized multi-operator stepping along the propagation coordinate.

Each slice of length dzeta applies an ordered schedule of operator
exponentials, each over a fraction of the slice; per operator the fractions
sum to one. The default palindromic schedule

    linear 1/4 | alpha2 1/2 | linear 1/4 | alpha1 1 |
    linear 1/4 | alpha2 1/2 | linear 1/4

cancels the leading commutator error of the composition. Fractions are kept
as exact rationals and act purely as multipliers of dzeta. Before every
nonlinear substep the pointwise functional N (and the auxiliary state, when
configured) is refrozen from the field produced by the previous substep, so
each nonlinear exponential sees the value at the midpoint of its own
interval.

Propagation is sequential across slices; the stepper's control flow is
single-threaded and re-entrant across independent runs.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from numbers import Rational
from typing import Any, Callable

import numpy as np

from . import fourier
from .errors import NyquistWarning, PropagationError
from .fourier import ComplexField
from .grid import Grid, nyquist_margin
from .linear_operator import LinearSymbol, apply_exp_linear
from .nonlinear_operators import (
    EquationModel,
    apply_exp_alpha1,
    apply_exp_alpha2,
    apply_exp_convolution,
    eval_N,
    integrate_auxiliary,
)

OPERATOR_IDS = ("linear", "alpha1", "alpha2", "convolution")

DIAGNOSTIC_QUANTITIES = (
    "l2_norm",
    "peak_intensity",
    "time_spectrum",
    "transverse_spectrum",
    "full_field",
)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Rational):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value)
    raise ValueError(f"cannot interpret step fraction {value!r}")


@dataclass(frozen=True)
class StepSchedule:
    """Ordered (operator_id, fraction-of-dzeta) entries for one slice."""

    entries: tuple[tuple[str, Fraction], ...]
    name: str = ""

    def __post_init__(self):
        normalized = tuple((op, _as_fraction(frac)) for op, frac in self.entries)
        object.__setattr__(self, "entries", normalized)
        totals: dict[str, Fraction] = {}
        for op, frac in normalized:
            if op not in OPERATOR_IDS:
                raise ValueError(f"unknown operator id {op!r}")
            if not 0 < frac <= 1:
                raise ValueError(f"fraction {frac} for {op!r} outside (0, 1]")
            totals[op] = totals.get(op, Fraction(0)) + frac
        for op, total in totals.items():
            if total != 1:
                raise ValueError(
                    f"fractions for {op!r} sum to {total}, each operator must advance"
                    " exactly one full dzeta per slice"
                )

    @property
    def is_palindromic(self) -> bool:
        return self.entries == tuple(reversed(self.entries))

    def operators(self) -> set[str]:
        return {op for op, _ in self.entries}


def strang7() -> StepSchedule:
    """The default 7-substep palindromic schedule."""
    q = Fraction(1, 4)
    h = Fraction(1, 2)
    return StepSchedule(
        entries=(
            ("linear", q),
            ("alpha2", h),
            ("linear", q),
            ("alpha1", Fraction(1)),
            ("linear", q),
            ("alpha2", h),
            ("linear", q),
        ),
        name="strang-7",
    )


def strang7_with_convolution() -> StepSchedule:
    """strang-7 with a full-fraction convolution substep next to alpha1."""
    q = Fraction(1, 4)
    h = Fraction(1, 2)
    return StepSchedule(
        entries=(
            ("linear", q),
            ("alpha2", h),
            ("linear", q),
            ("alpha1", Fraction(1)),
            ("convolution", Fraction(1)),
            ("linear", q),
            ("alpha2", h),
            ("linear", q),
        ),
        name="strang-7-raman",
    )


SCHEDULES: dict[str, Callable[[], StepSchedule]] = {
    "strang-7": strang7,
    "strang-7-raman": strang7_with_convolution,
}


@dataclass(eq=False)
class PropagationState:
    """Field plus progress bookkeeping; zeta == slice_index * dzeta."""

    field: ComplexField
    zeta: float = 0.0
    slice_index: int = 0
    diagnostics_log: list[dict[str, Any]] = dc_field(default_factory=list)


@dataclass
class DiagnosticsConfig:
    """What to record during a run and how often."""

    record_every: int = 1
    quantities: tuple[str, ...] = ("l2_norm", "peak_intensity")
    nyquist_threshold: float | None = 0.01
    on_record: Callable[[dict[str, Any]], None] | None = None

    def __post_init__(self):
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")
        for q in self.quantities:
            if q not in DIAGNOSTIC_QUANTITIES:
                raise ValueError(f"unknown diagnostic quantity {q!r}")


def _frozen_nonlinearity(model: EquationModel, field: ComplexField) -> np.ndarray:
    aux = integrate_auxiliary(model, field) if model.auxiliary is not None else None
    return eval_N(model, field, aux)


def step(
    state: PropagationState,
    model: EquationModel,
    symbol: LinearSymbol,
    schedule: StepSchedule,
) -> PropagationState:
    """Advance one slice by applying the schedule entries in order.

    alpha2 entries are skipped when c2 == 0 (the operator is the identity),
    convolution entries when no kernel is configured. Any substep failure,
    including a non-finite field, is re-raised with the slice index and
    substep label attached.
    """
    grid = state.field.grid
    field = state.field
    for pos, (op, frac) in enumerate(schedule.entries):
        label = f"{pos}:{op}"
        eff = float(frac) * grid.dzeta
        try:
            if op == "linear":
                field = apply_exp_linear(field, symbol, eff)
            elif op == "alpha1":
                frozen = _frozen_nonlinearity(model, field)
                field = apply_exp_alpha1(field, model, frozen, eff)
            elif op == "alpha2":
                if model.c2 == 0:
                    continue
                frozen = _frozen_nonlinearity(model, field)
                spectral = fourier.forward(field, ("t",))
                field = apply_exp_alpha2(spectral, model, frozen, eff)
            elif op == "convolution":
                if model.convolution_kernel is None:
                    continue
                field = apply_exp_convolution(field, model.convolution_kernel, eff)
            if not np.isfinite(field.values).all():
                raise PropagationError(
                    "field left the finite range", state.slice_index, label
                )
        except PropagationError:
            raise
        except Exception as exc:
            raise PropagationError(str(exc), state.slice_index, label) from exc

    new_index = state.slice_index + 1
    return PropagationState(
        field=field,
        zeta=new_index * grid.dzeta,
        slice_index=new_index,
        diagnostics_log=state.diagnostics_log,
    )


def _record(
    state: PropagationState, hooks: DiagnosticsConfig
) -> dict[str, Any]:
    field = state.field
    rec: dict[str, Any] = {"slice": state.slice_index, "zeta": state.zeta}
    if "l2_norm" in hooks.quantities:
        rec["l2_norm"] = fourier.l2_norm(field)
    if "peak_intensity" in hooks.quantities:
        rec["peak_intensity"] = float(np.max(np.abs(field.values) ** 2))
    if "time_spectrum" in hooks.quantities:
        spec = fourier.forward(field, ("t",))
        weight = field.grid.dx * field.grid.dy / (field.grid.nt * field.grid.dt)
        rec["time_spectrum"] = np.sum(np.abs(spec.values) ** 2, axis=(0, 1)) * weight
    if "transverse_spectrum" in hooks.quantities:
        spec = fourier.forward(field, ("x",))
        weight = field.grid.dy * field.grid.dt / (field.grid.nx * field.grid.dx)
        rec["transverse_spectrum"] = np.sum(np.abs(spec.values) ** 2, axis=(1, 2)) * weight
    if "full_field" in hooks.quantities:
        rec["full_field"] = field.copy()
    if hooks.nyquist_threshold is not None:
        report = nyquist_margin(field, hooks.nyquist_threshold)
        rec["nyquist_flag"] = report.flagged
        rec["nyquist_fractions"] = report.fractions
        if report.flagged:
            worst = max(report.fractions, key=report.fractions.get)
            warnings.warn(
                NyquistWarning(
                    f"slice {state.slice_index}: spectral tail fraction"
                    f" {report.fractions[worst]:.3g} on axis {worst!r} exceeds"
                    f" threshold {hooks.nyquist_threshold:g}"
                ),
                stacklevel=3,
            )
    state.diagnostics_log.append(rec)
    if hooks.on_record is not None:
        hooks.on_record(rec)
    return rec


def run(
    initial: ComplexField,
    model: EquationModel,
    symbol: LinearSymbol,
    schedule: StepSchedule,
    grid: Grid,
    hooks: DiagnosticsConfig | None = None,
) -> PropagationState:
    """Iterate `step` grid.n_steps times, recording diagnostics every k slices.

    On a substep failure the PropagationError is re-raised with the last
    fully completed state attached as `last_state`.
    """
    if hooks is None:
        hooks = DiagnosticsConfig()
    if not np.isfinite(initial.values).all():
        raise ValueError("initial field must be finite")
    state = PropagationState(field=initial, zeta=0.0, slice_index=0)
    for _ in range(grid.n_steps):
        try:
            state = step(state, model, symbol, schedule)
        except PropagationError as exc:
            exc.last_state = state
            raise
        if state.slice_index % hooks.record_every == 0:
            _record(state, hooks)
    return state
