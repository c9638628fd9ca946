"""Desk-scale self-checks behind the CLI `validate` subcommand.

Each check compares a pipeline operation against an independent route
(analytic solution, dense matrix exponential, brute-force series) and
returns a (name, passed, detail) triple. The whole suite runs in seconds.
"""

from __future__ import annotations

import numpy as np

from . import fourier, oracle, stepper
from .fourier import make_field
from .grid import build_grid
from .linear_operator import ClosedForm, apply_exp_linear, apply_symbol, build_symbol
from .nonlinear_operators import (
    Alpha2Order,
    EquationModel,
    RamanKernel,
    apply_exp_alpha2,
    apply_exp_convolution,
)
from .presets import PRESETS, InitialCondition, PresetSpec, instantiate


def _rel_l2(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.linalg.norm(a - b) / np.linalg.norm(b))


def _slope(steps, errors) -> float:
    return float(np.polyfit(np.log(steps), np.log(errors), 1)[0])


def _zero_beta(u, aux, grid):
    return np.zeros_like(u)


def check_linear_semigroup() -> tuple[str, bool, str]:
    """50 slices of a linear-only run equal one exponential of the total step."""
    grid = build_grid(1, 1, 64, 1.0, 1.0, 0.25, dzeta=1e-2, n_steps=50)
    symbol = build_symbol(grid, ClosedForm(lambda kx, ky, w: -0.5j * w**2))
    model = EquationModel(c1=0.0, c2=0.0, beta=_zero_beta)
    initial = make_field(
        grid, np.exp(-grid.t_axis**2 / 2.0)[None, None, :] * np.ones(grid.shape)
    )
    final = stepper.run(initial, model, symbol, stepper.strang7(), grid)
    direct = apply_exp_linear(initial, symbol, grid.n_steps * grid.dzeta)
    err = _rel_l2(final.field.values, direct.values)
    return ("linear_semigroup", err < 1e-10, f"rel err {err:.3e} (tol 1e-10)")


def check_alpha2_shift() -> tuple[str, bool, str]:
    """Constant advection speed shifts a band-limited signal exactly."""
    grid = build_grid(1, 1, 64, 1.0, 1.0, 0.25, dzeta=1e-2, n_steps=1)
    rng = np.random.default_rng(7)
    modes = np.arange(-3, 4)
    coeffs = rng.normal(size=7) + 1j * rng.normal(size=7)
    tau = grid.dt * np.arange(grid.nt)
    w_of = 2.0 * np.pi * modes / (grid.nt * grid.dt)

    def sample(shift: float) -> np.ndarray:
        return sum(
            c * np.exp(-1j * w * (tau + shift)) for c, w in zip(coeffs, w_of)
        )

    c2, n_const, dz = -0.4, 0.75, 0.05
    u = make_field(grid, sample(0.0)[None, None, :])
    model = EquationModel(c1=0.0, c2=c2, beta=_zero_beta, alpha2_order=Alpha2Order.COMMUTING)
    frozen = np.full(grid.shape, n_const, dtype=complex)
    out = apply_exp_alpha2(fourier.forward(u, ("t",)), model, frozen, dz)
    expected = sample(c2 * n_const * dz)
    err = _rel_l2(out.values[0, 0], expected)
    return ("alpha2_exact_shift", err < 1e-10, f"rel err {err:.3e} (tol 1e-10)")


def check_alpha2_ladder() -> tuple[str, bool, str]:
    """Accuracy orders 2/3/4 of the mixed-domain operator variants."""
    grid = build_grid(1, 1, 64, 1.0, 1.0, 0.25, dzeta=1e-2, n_steps=1)
    tau = grid.t_axis
    u_line = np.exp(-(tau**2) / 2.0) * np.exp(-1j * tau)
    n_line = 2.0 * np.exp(-(tau**2) / 4.0)
    c2 = -0.8
    frozen = n_line[None, None, :].astype(complex)
    u = make_field(grid, u_line[None, None, :])
    u_spec = fourier.forward(u, ("t",))

    steps = np.array([1e-2, 5e-3, 2.5e-3])
    expected = {Alpha2Order.COMMUTING: 2.0, Alpha2Order.THIRD: 3.0, Alpha2Order.FOURTH: 4.0}
    slopes = {}
    ok = True
    for order, target in expected.items():
        errs = []
        for dz in steps:
            ref = oracle.dense_alpha2_expm(n_line, c2, dz, u_line, grid.dt)
            model = EquationModel(c1=0.0, c2=c2, beta=_zero_beta, alpha2_order=order)
            out = apply_exp_alpha2(u_spec, model, frozen, dz)
            errs.append(_rel_l2(out.values[0, 0], ref))
        slopes[order.value] = _slope(steps, errs)
        ok = ok and abs(slopes[order.value] - target) <= 0.3
    detail = ", ".join(f"{k}: {v:.2f}" for k, v in slopes.items())
    return ("alpha2_order_ladder", ok, f"slopes {detail} (targets 2/3/4 +- 0.3)")


def check_soliton() -> tuple[str, bool, str]:
    """Bright soliton keeps its profile and phase over 500 slices."""
    grid = build_grid(1, 1, 256, 1.0, 1.0, 40.0 / 256, dzeta=1e-3, n_steps=500)
    spec = PresetSpec(
        name="cubic-nlse-1d",
        initial_condition=InitialCondition("sech", {"amplitude": 1.0, "width": 1.0}),
    )
    bundle = instantiate(spec, grid)
    final = stepper.run(bundle.initial, bundle.model, bundle.symbol, bundle.schedule, grid)
    zeta = grid.n_steps * grid.dzeta
    exact = (1.0 / np.cosh(grid.t_axis)) * np.exp(0.5j * zeta)
    err = _rel_l2(final.field.values[0, 0], exact)
    return ("soliton_regression", err < 1e-4, f"rel err {err:.3e} at zeta {zeta:g} (tol 1e-4)")


def check_convolution_series() -> tuple[str, bool, str]:
    """Frequency-space exponential equals the brute-force convolution series."""
    grid = build_grid(1, 1, 32, 1.0, 1.0, 0.5, dzeta=1e-2, n_steps=1)
    tau = grid.t_axis
    f_time = np.exp(-(tau**2) / 2.0)
    kernel = RamanKernel.from_time(grid, f_time)
    rng = np.random.default_rng(11)
    u_line = rng.normal(size=grid.nt) + 1j * rng.normal(size=grid.nt)
    u = make_field(grid, u_line[None, None, :])
    dz = 0.01

    def circ(a, b):
        out = np.zeros(grid.nt, dtype=complex)
        for shift in range(grid.nt):
            out += a[shift] * np.roll(b, shift)
        return grid.dt * out

    series = u_line.copy()
    term = u_line.copy()
    for m in range(1, 11):
        term = dz * circ(kernel.f_time, term) / m
        series += term
    out = apply_exp_convolution(u, kernel, dz)
    err = _rel_l2(out.values[0, 0], series)
    return ("convolution_series", err < 1e-10, f"rel err {err:.3e} (tol 1e-10)")


def check_maclaurin() -> tuple[str, bool, str]:
    """Spectral exponential equals the 8-term operator series on a tiny grid."""
    grid = build_grid(1, 1, 16, 1.0, 1.0, 0.5, dzeta=1e-2, n_steps=1)
    symbol = build_symbol(grid, ClosedForm(lambda kx, ky, w: 0.03j * w**2 - 0.01 * w))
    rng = np.random.default_rng(3)
    coeffs = rng.normal(size=5) + 1j * rng.normal(size=5)
    tau_idx = np.arange(grid.nt)
    u_line = sum(
        c * np.exp(-2j * np.pi * m * tau_idx / grid.nt)
        for c, m in zip(coeffs, range(-2, 3))
    )
    u = make_field(grid, u_line[None, None, :])
    dzeta = 0.25
    series = u.values.copy()
    term = u
    fact = 1.0
    for m in range(1, 9):
        term = apply_symbol(term, symbol)
        fact *= m
        series = series + (dzeta**m / fact) * term.values
    out = apply_exp_linear(u, symbol, dzeta)
    err = _rel_l2(out.values, series)
    return ("maclaurin_equivalence", err < 1e-10, f"rel err {err:.3e} (tol 1e-10)")


def check_presets_smoke() -> tuple[str, bool, str]:
    """Every preset instantiates and survives ten slices with finite output."""
    grid = build_grid(8, 1, 64, 0.5, 1.0, 0.5, dzeta=1e-3, n_steps=10)
    problems = []
    for name, info in PRESETS.items():
        constants = {k: _SMOKE_CONSTANTS.get(k, 1.0) for k in info.required}
        cond = InitialCondition(
            "gaussian", {"amplitude": 0.5, "width_x": 1.0, "width_t": 2.0}
        )
        bundle = instantiate(PresetSpec(name, constants, cond), grid)
        final = stepper.run(bundle.initial, bundle.model, bundle.symbol, bundle.schedule, grid)
        if not np.isfinite(final.field.values).all():
            problems.append(name)
    ok = not problems
    return ("presets_smoke", ok, "all finite" if ok else f"non-finite: {problems}")


_SMOKE_CONSTANTS = {"a": 7.0, "b": 0.1, "c": 0.5, "d": 0.01, "e": 1.0, "f": 0.0, "m": 2.0}

ALL_CHECKS = (
    check_linear_semigroup,
    check_alpha2_shift,
    check_alpha2_ladder,
    check_soliton,
    check_convolution_series,
    check_maclaurin,
    check_presets_smoke,
)


def run_all(report=print) -> bool:
    """Run every check, print one PASS/FAIL line each, return overall success."""
    all_ok = True
    for check in ALL_CHECKS:
        name, ok, detail = check()
        report(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        all_ok = all_ok and ok
    return all_ok
