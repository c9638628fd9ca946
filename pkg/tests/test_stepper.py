import warnings
from fractions import Fraction

import numpy as np
import pytest

from ssfm3d import (
    DiagnosticsConfig,
    EquationModel,
    NyquistWarning,
    PropagationError,
    PropagationState,
    StepSchedule,
    build_grid,
    InitialCondition,
    PresetSpec,
    apply_exp_linear,
    instantiate,
    l2_norm,
    make_field,
    reference_integrate,
    run,
    step,
    strang7,
    strang7_with_convolution,
)
from ssfm3d.linear_operator import CoefficientSeries, build_symbol

from reference import rel_l2


def _zero_problem(grid):
    symbol = build_symbol(grid, CoefficientSeries({}))
    model = EquationModel(c1=0.0, c2=0.0, beta=lambda u, aux, g: np.zeros_like(u))
    return model, symbol


# --- schedules -----------------------------------------------------------------

def test_default_schedule_shape_and_fractions():
    sched = strang7()
    ops = [op for op, _ in sched.entries]
    fracs = [frac for _, frac in sched.entries]
    assert ops == ["linear", "alpha2", "linear", "alpha1", "linear", "alpha2", "linear"]
    assert fracs == [
        Fraction(1, 4),
        Fraction(1, 2),
        Fraction(1, 4),
        Fraction(1),
        Fraction(1, 4),
        Fraction(1, 2),
        Fraction(1, 4),
    ]


def test_default_schedule_is_palindromic():
    assert strang7().is_palindromic


def test_convolution_schedule_sums_per_operator():
    sched = strang7_with_convolution()
    totals = {}
    for op, frac in sched.entries:
        totals[op] = totals.get(op, Fraction(0)) + frac
    assert all(total == 1 for total in totals.values())


def test_schedule_rejects_bad_fraction_sum():
    with pytest.raises(ValueError, match="sum"):
        StepSchedule(entries=(("linear", Fraction(1, 2)),))


def test_schedule_rejects_unknown_operator():
    with pytest.raises(ValueError, match="unknown operator"):
        StepSchedule(entries=(("magic", Fraction(1)),))


def test_schedule_rejects_out_of_range_fraction():
    with pytest.raises(ValueError, match="outside"):
        StepSchedule(entries=(("linear", Fraction(3, 2)), ("linear", Fraction(-1, 2))))


def test_schedule_accepts_strings_and_floats():
    sched = StepSchedule(entries=(("linear", "1/2"), ("linear", 0.5), ("alpha1", 1)))
    assert sched.entries[0][1] == Fraction(1, 2)
    assert sched.entries[1][1] == Fraction(1, 2)


# --- step ----------------------------------------------------------------------

def test_all_identity_step_leaves_field(rng):
    grid = build_grid(2, 1, 32, 0.5, 1.0, 0.5, dzeta=0.1, n_steps=1)
    model, symbol = _zero_problem(grid)
    values = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    state = PropagationState(field=make_field(grid, values))
    out = step(state, model, symbol, strang7())
    assert rel_l2(out.field.values, values) < 1e-13
    assert out.slice_index == 1
    assert out.zeta == grid.dzeta


def test_zeta_is_product_not_accumulation():
    grid = build_grid(1, 1, 8, 1.0, 1.0, 1.0, dzeta=0.1, n_steps=7)
    model, symbol = _zero_problem(grid)
    state = PropagationState(field=make_field(grid, np.ones(grid.shape)))
    for k in range(7):
        state = step(state, model, symbol, strang7())
        assert state.zeta == (k + 1) * grid.dzeta


def test_single_step_richardson_order():
    # One slice at dz vs two at dz/2, both against the freezing-free
    # reference; the error ratio should approach 2^2 for a 2nd-order scheme.
    spec = PresetSpec(
        "derivative-nlse-toy",
        initial_condition=InitialCondition(
            "gaussian", {"amplitude": 1.5, "width_t": 1.0}
        ),
    )
    dz = 2e-3
    errors = []
    reference = None
    for halvings in (0, 1):
        n = 2**halvings
        grid = build_grid(1, 1, 64, 1.0, 1.0, 0.25, dzeta=dz / n, n_steps=n)
        bundle = instantiate(spec, grid)
        if reference is None:
            reference = reference_integrate(
                bundle.initial, bundle.model, bundle.symbol, dz / 100, 100
            ).values
        final = run(bundle.initial, bundle.model, bundle.symbol, bundle.schedule, grid)
        errors.append(rel_l2(final.field.values, reference))
    ratio = errors[0] / errors[1]
    assert np.log2(ratio) > 1.6, f"observed error ratio {ratio:.2f}"


def test_skipping_alpha2_when_c2_zero_matches_explicit_schedule(rng):
    grid = build_grid(1, 1, 64, 1.0, 1.0, 0.5, dzeta=5e-3, n_steps=20)
    spec = PresetSpec(
        "cubic-nlse-1d",
        initial_condition=InitialCondition("sech", {"amplitude": 1.0, "width": 1.0}),
    )
    bundle = instantiate(spec, grid)
    with_alpha2 = run(bundle.initial, bundle.model, bundle.symbol, strang7(), grid)
    explicit = StepSchedule(
        entries=(
            ("linear", Fraction(1, 4)),
            ("linear", Fraction(1, 4)),
            ("alpha1", Fraction(1)),
            ("linear", Fraction(1, 4)),
            ("linear", Fraction(1, 4)),
        ),
        name="no-alpha2",
    )
    without = run(bundle.initial, bundle.model, bundle.symbol, explicit, grid)
    assert rel_l2(with_alpha2.field.values, without.field.values) < 1e-12


def test_convolution_entries_skipped_without_kernel():
    grid = build_grid(1, 1, 32, 1.0, 1.0, 0.5, dzeta=1e-2, n_steps=5)
    spec = PresetSpec(
        "cubic-nlse-1d",
        initial_condition=InitialCondition("sech", {"amplitude": 0.5, "width": 1.0}),
    )
    bundle = instantiate(spec, grid)
    plain = run(bundle.initial, bundle.model, bundle.symbol, strang7(), grid)
    with_conv = run(
        bundle.initial, bundle.model, bundle.symbol, strang7_with_convolution(), grid
    )
    assert np.array_equal(plain.field.values, with_conv.field.values)


# --- run -----------------------------------------------------------------------

def test_run_zero_steps_returns_initial(rng):
    grid = build_grid(1, 1, 16, 1.0, 1.0, 0.5, dzeta=0.1, n_steps=0)
    model, symbol = _zero_problem(grid)
    values = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    final = run(make_field(grid, values), model, symbol, strang7(), grid)
    assert np.array_equal(final.field.values, values)
    assert final.slice_index == 0


def test_linear_only_run_equals_single_exponential():
    grid = build_grid(1, 1, 128, 1.0, 1.0, 0.25, dzeta=1e-2, n_steps=100)
    symbol = build_symbol(grid, CoefficientSeries({(0, 2): 0.25j}))
    model = EquationModel(c1=0.0, c2=0.0, beta=lambda u, aux, g: np.zeros_like(u))
    initial = make_field(grid, np.exp(-grid.t_axis**2 / 2.0)[None, None, :])
    final = run(initial, model, symbol, strang7(), grid)
    direct = apply_exp_linear(initial, symbol, 100 * grid.dzeta)
    assert rel_l2(final.field.values, direct.values) < 1e-10


def test_norm_conservation_over_1000_slices():
    # Purely imaginary symbol, real N with c1 = i, c2 = 0, no kernel.
    grid = build_grid(1, 1, 64, 1.0, 1.0, 0.5, dzeta=1e-3, n_steps=1000)
    spec = PresetSpec(
        "cubic-nlse-1d",
        initial_condition=InitialCondition("sech", {"amplitude": 1.0, "width": 1.0}),
    )
    bundle = instantiate(spec, grid)
    start = l2_norm(bundle.initial)
    final = run(bundle.initial, bundle.model, bundle.symbol, bundle.schedule, grid)
    assert abs(l2_norm(final.field) / start - 1.0) < 1e-10


def test_run_records_every_k_slices():
    grid = build_grid(1, 1, 32, 1.0, 1.0, 0.5, dzeta=1e-2, n_steps=50)
    model, symbol = _zero_problem(grid)
    initial = make_field(grid, np.exp(-grid.t_axis**2 / 8.0)[None, None, :])
    hooks = DiagnosticsConfig(
        record_every=10,
        quantities=("l2_norm", "peak_intensity", "time_spectrum"),
        nyquist_threshold=0.5,
    )
    final = run(initial, model, symbol, strang7(), grid, hooks)
    log = final.diagnostics_log
    assert [rec["slice"] for rec in log] == [10, 20, 30, 40, 50]
    for rec in log:
        assert rec["zeta"] == rec["slice"] * grid.dzeta
        assert rec["l2_norm"] > 0
        assert rec["peak_intensity"] > 0
        assert rec["time_spectrum"].shape == (grid.nt,)
        assert rec["nyquist_flag"] is False


def test_run_warns_on_under_resolved_field():
    grid = build_grid(1, 1, 64, 1.0, 1.0, 0.5, dzeta=1e-3, n_steps=2)
    model, symbol = _zero_problem(grid)
    narrow = np.exp(-((grid.t_axis / (0.5 * grid.dt)) ** 2))
    initial = make_field(grid, narrow[None, None, :])
    hooks = DiagnosticsConfig(record_every=1, nyquist_threshold=0.01)
    with pytest.warns(NyquistWarning):
        final = run(initial, model, symbol, strang7(), grid, hooks)
    assert final.diagnostics_log[-1]["nyquist_flag"] is True


def test_run_abort_reports_last_good_slice():
    grid = build_grid(1, 1, 32, 1.0, 1.0, 0.5, dzeta=1.0, n_steps=10)
    symbol = build_symbol(grid, CoefficientSeries({}))
    # Strong real gain overflows the pointwise exponential within a few slices.
    model = EquationModel(c1=400.0, c2=0.0, beta=lambda u, aux, g: np.abs(u) ** 2)
    initial = make_field(grid, np.ones(grid.shape))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        with pytest.raises(PropagationError) as excinfo:
            run(initial, model, symbol, strang7(), grid)
    err = excinfo.value
    assert err.last_state is not None
    assert err.last_state.slice_index == err.slice_index
    assert "alpha1" in err.substep or "linear" in err.substep


def test_run_rejects_nonfinite_initial():
    grid = build_grid(1, 1, 8, 1.0, 1.0, 0.5, dzeta=0.1, n_steps=1)
    model, symbol = _zero_problem(grid)
    bad = np.ones(grid.shape, dtype=complex)
    bad[0, 0, 0] = np.nan
    with pytest.raises(ValueError):
        run(make_field(grid, bad), model, symbol, strang7(), grid)
