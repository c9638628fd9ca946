"""Ready-made model + symbol bundles for standard validation problems.

Presets wire together an EquationModel, a LinearSymbol form, an initial
condition, and a schedule. Three are shipped:

  cubic-nlse-1d        focusing cubic Schrodinger equation in time only;
                       its fundamental bright soliton sech(t)*exp(i zeta/2)
                       is the classic regression target.
  gdnlse-eq5           generalized derivative equation with a rational
                       transverse symbol, Kerr and saturable terms, and an
                       auxiliary density driven by the field intensity.
  derivative-nlse-toy  cubic equation plus a real steepening constant c2;
                       the smallest problem that exercises the mixed-domain
                       operator, used by the convergence sweeps.

Constants are plain floats from the run configuration; the nonlinear
functionals are registered here and selected by preset name.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

import numpy as np

from . import fielddump, fourier
from .errors import ConfigError
from .fourier import ComplexField
from .grid import Grid
from .linear_operator import ClosedForm, CoefficientSeries, LinearSymbol, build_symbol
from .nonlinear_operators import AuxiliaryPlugin, EquationModel
from .stepper import SCHEDULES, StepSchedule

PROFILES = ("gaussian", "sech", "plane-wave", "file")


@dataclass(frozen=True)
class InitialCondition:
    """Named launch profile plus its parameters."""

    profile: str
    params: dict[str, float | str] = dc_field(default_factory=dict)


@dataclass(frozen=True)
class PresetSpec:
    """Everything needed to instantiate a preset on a grid."""

    name: str
    constants: dict[str, float] = dc_field(default_factory=dict)
    initial_condition: InitialCondition = InitialCondition("plane-wave", {"amplitude": 1.0})
    schedule_name: str = "strang-7"


@dataclass(eq=False)
class PresetBundle:
    model: EquationModel
    symbol: LinearSymbol
    initial: ComplexField
    schedule: StepSchedule


@dataclass(frozen=True)
class PresetInfo:
    builder: Callable[[PresetSpec, Grid], tuple[EquationModel, LinearSymbol]]
    required: tuple[str, ...]
    optional: dict[str, float]
    description: str


def _constants(spec: PresetSpec, info: PresetInfo) -> dict[str, float]:
    values = dict(info.optional)
    for key in info.required:
        if key not in spec.constants:
            raise ConfigError(f"preset {spec.name!r} requires constant {key!r}")
        values[key] = spec.constants[key]
    for key, val in spec.constants.items():
        if key not in info.required and key not in info.optional:
            raise ConfigError(f"preset {spec.name!r} does not accept constant {key!r}")
        values[key] = val
    return values


# --- cubic-nlse-1d -----------------------------------------------------------

def _kerr_beta(u: np.ndarray, aux, grid: Grid) -> np.ndarray:
    return np.abs(u) ** 2


def _build_cubic(spec: PresetSpec, grid: Grid):
    kerr = _constants(spec, PRESETS["cubic-nlse-1d"])["kerr"]
    symbol = build_symbol(grid, ClosedForm(lambda kx, ky, w: -0.5j * w**2))
    if kerr == 1.0:
        beta = _kerr_beta
    else:
        def beta(u, aux, g, _k=kerr):
            return _k * np.abs(u) ** 2
    model = EquationModel(c1=1j, c2=0.0, beta=beta)
    return model, symbol


# --- derivative-nlse-toy -----------------------------------------------------

def _build_toy(spec: PresetSpec, grid: Grid):
    consts = _constants(spec, PRESETS["derivative-nlse-toy"])
    steepening = consts["steepening"]
    kerr = consts["kerr"]
    amp = consts["profile_amplitude"]
    width = consts["profile_width"]
    symbol = build_symbol(
        grid, ClosedForm(lambda kx, ky, w: -0.5j * (kx**2 + ky**2 + w**2))
    )
    profile = amp * np.exp(-((grid.t_axis / width) ** 2))

    def beta(u, aux, g):
        # Prescribed time profile: with kerr == 0 the frozen coefficient is
        # exact and a convergence sweep isolates the pure composition order.
        out = np.broadcast_to(profile[None, None, :], u.shape).astype(complex)
        if kerr != 0:
            out = out + kerr * np.abs(u) ** 2
        return out

    model = EquationModel(c1=1j, c2=complex(steepening), beta=beta)
    return model, symbol


# --- gdnlse-eq5 --------------------------------------------------------------

def eq5_symbol_form(a: float, b: float, gvd_factor: float = 1.0) -> ClosedForm:
    """Closed-form linear symbol of the gdnlse-eq5 preset.

    -(i/4)(kx^2 + ky^2)/(1 + w/a) + i*b_eff*w^2, with b_eff = gvd_factor*b.
    The rational factor comes from a binomial series in (i/a)d/dt, so the
    time frequencies must satisfy |w| < a (declared as the convergence
    domain; widen dt or raise `a` if violated).
    """
    b_eff = gvd_factor * b

    def evaluator(kx, ky, w):
        return -0.25j * (kx**2 + ky**2) / (1.0 + w / a) + 1j * b_eff * w**2

    return ClosedForm(evaluator=evaluator, convergence_domain={"w": (-a, a)})


def eq5_series_form(
    a: float, b: float, gvd_factor: float = 1.0, j_max: int = 100
) -> CoefficientSeries:
    """Series-table equivalent of `eq5_symbol_form`, truncated at j_max.

    The binomial expansion of the rational factor puts weight only on the
    second transverse order: c_2j = (i/4) (-1)^j (i/a)^j. The group-velocity
    dispersion term contributes at (n=0, j=2) with half weight because the
    zeroth del power counts both transverse axes. Coefficients are generated
    two orders past j_max so the truncation self-check in build_symbol can
    detect an insufficient j_max.
    """
    coeffs: dict[tuple[int, int], complex] = {}
    for j in range(j_max + 3):
        coeffs[(2, j)] = (0.25j) * (-1.0) ** j * (1j / a) ** j
    coeffs[(0, 2)] = coeffs.get((0, 2), 0.0) + (-1j * gvd_factor * b) / 2.0
    return CoefficientSeries(coefficients=coeffs, n_max=2, j_max=j_max)


def _build_eq5(spec: PresetSpec, grid: Grid):
    c = _constants(spec, PRESETS["gdnlse-eq5"])
    symbol = build_symbol(grid, eq5_symbol_form(c["a"], c["b"], c["gvd_factor"]))

    kerr, d, e, f, m = c["c"], c["d"], c["e"], c["f"], c["m"]

    def beta(u, aux, g):
        out = kerr * np.abs(u) ** 2
        if d != 0:
            out = out - d * (1.0 - 1j / e) * aux
        if f != 0:
            out = out + 1j * f * np.abs(u) ** (2.0 * (m - 1.0))
        return out

    rho_rate = c["rho_rate"]

    def rate(v, u_slab, t):
        # Example density source driven by the local intensity to the m-th
        # power; a stand-in with no claim of material fidelity.
        return rho_rate * np.abs(u_slab) ** (2.0 * m)

    auxiliary = AuxiliaryPlugin(rate=rate, initial_value=c["rho_initial"])
    # The operator i(1 + (i/a) d/dt) expands to i + (i*i/a) d/dt.
    model = EquationModel(c1=1j, c2=-1.0 / c["a"], beta=beta, auxiliary=auxiliary)
    return model, symbol


PRESETS: dict[str, PresetInfo] = {
    "cubic-nlse-1d": PresetInfo(
        builder=_build_cubic,
        required=(),
        optional={"kerr": 1.0},
        description="focusing cubic Schrodinger equation in time; soliton testbed",
    ),
    "derivative-nlse-toy": PresetInfo(
        builder=_build_toy,
        required=(),
        optional={
            "steepening": -0.2,
            "kerr": 0.0,
            "profile_amplitude": 2.0,
            "profile_width": 1.0,
        },
        description="derivative equation with a prescribed time-profile coefficient"
        " (plus optional Kerr term) and a real steepening constant c2",
    ),
    "gdnlse-eq5": PresetInfo(
        builder=_build_eq5,
        required=("a", "b", "c", "d", "e", "f", "m"),
        optional={"gvd_factor": 1.0, "rho_rate": 1.0, "rho_initial": 0.0},
        description="generalized derivative equation with rational transverse symbol",
    ),
}


def make_initial(grid: Grid, cond: InitialCondition) -> ComplexField:
    """Sample a named launch profile on the grid (centered axes)."""
    params = cond.params
    if cond.profile not in PROFILES:
        raise ConfigError(f"unknown initial profile {cond.profile!r}")

    def need(key: str) -> float:
        if key not in params:
            raise ConfigError(f"initial profile {cond.profile!r} requires {key!r}")
        return float(params[key])

    if cond.profile == "file":
        path = params.get("path")
        if path is None:
            raise ConfigError("initial profile 'file' requires 'path'")
        field, _ = fielddump.read_dump(str(path))
        if field.grid.shape != grid.shape:
            raise ConfigError(
                f"dump grid {field.grid.shape} does not match run grid {grid.shape}"
            )
        return fourier.make_field(grid, field.values)

    amplitude = need("amplitude")
    if cond.profile == "plane-wave":
        values = np.full(grid.shape, amplitude, dtype=np.complex128)
    elif cond.profile == "sech":
        width = need("width")
        if width <= 0:
            raise ConfigError("sech width must be positive")
        line = amplitude / np.cosh(grid.t_axis / width)
        values = np.broadcast_to(line[None, None, :], grid.shape).copy()
    else:  # gaussian
        arg = np.zeros(grid.shape)
        for axis, key in (("x", "width_x"), ("y", "width_y"), ("t", "width_t")):
            if grid.size(axis) == 1:
                continue
            width = need(key)
            if width <= 0:
                raise ConfigError(f"{key} must be positive")
            coord = {"x": grid.x_axis, "y": grid.y_axis, "t": grid.t_axis}[axis]
            shape = [1, 1, 1]
            shape[("x", "y", "t").index(axis)] = len(coord)
            arg = arg + (coord.reshape(shape) / width) ** 2 / 2.0
        values = amplitude * np.exp(-arg)
    return fourier.make_field(grid, values)


def instantiate(spec: PresetSpec, grid: Grid) -> PresetBundle:
    """Build the model, cached symbol, initial field, and schedule."""
    if spec.name not in PRESETS:
        raise ConfigError(
            f"unknown preset {spec.name!r}; available: {', '.join(sorted(PRESETS))}"
        )
    model, symbol = PRESETS[spec.name].builder(spec, grid)
    initial = make_initial(grid, spec.initial_condition)
    if spec.schedule_name not in SCHEDULES:
        raise ConfigError(f"unknown schedule {spec.schedule_name!r}")
    schedule = SCHEDULES[spec.schedule_name]()
    return PresetBundle(model=model, symbol=symbol, initial=initial, schedule=schedule)
