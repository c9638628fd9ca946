"""Exponential split-step Fourier propagator for 3+1D nonlinear fields.

A pseudo-spectral solver for equations of the form

    du/dzeta = P u + (c1 + c2 d/dt)(N(u, v) u)  [+ f(t) o u]

on a periodic (x, y, t) grid: P is a constant-coefficient derivative series
applied as a spectral multiplier, the nonlinear term splits into a pointwise
exponential and a mixed-domain advection exponential (with optional
higher-order commutator corrections), and convolution terms exponentiate in
frequency space. Substeps compose in a palindromic schedule per propagation
slice.
"""

from .errors import (
    AmplificationWarning,
    AuxiliaryBlowupError,
    ConfigError,
    ConvergenceDomainError,
    DomainStateError,
    DumpFormatError,
    ModelEvaluationError,
    NyquistWarning,
    OracleError,
    PropagationError,
    SingularSymbolError,
    SolverError,
    TruncationWarning,
)
from .fourier import ComplexField, forward, inverse, l2_norm, make_field
from .grid import Grid, NyquistReport, build_grid, nyquist_margin
from .linear_operator import (
    ClosedForm,
    CoefficientSeries,
    LinearSymbol,
    apply_exp_linear,
    build_symbol,
)
from .nonlinear_operators import (
    Alpha2Order,
    AuxiliaryPlugin,
    EquationModel,
    RamanKernel,
    apply_exp_alpha1,
    apply_exp_alpha2,
    apply_exp_convolution,
    eval_N,
    integrate_auxiliary,
)
from .oracle import dense_alpha2_expm, reference_integrate, rhs
from .presets import InitialCondition, PresetSpec, instantiate, make_initial
from .stepper import (
    DiagnosticsConfig,
    PropagationState,
    StepSchedule,
    run,
    step,
    strang7,
    strang7_with_convolution,
)

__version__ = "0.1.0"

__all__ = [
    "Alpha2Order",
    "AmplificationWarning",
    "AuxiliaryBlowupError",
    "AuxiliaryPlugin",
    "ClosedForm",
    "CoefficientSeries",
    "ComplexField",
    "ConfigError",
    "ConvergenceDomainError",
    "DiagnosticsConfig",
    "DomainStateError",
    "DumpFormatError",
    "EquationModel",
    "Grid",
    "InitialCondition",
    "LinearSymbol",
    "ModelEvaluationError",
    "NyquistReport",
    "NyquistWarning",
    "OracleError",
    "PresetSpec",
    "PropagationError",
    "PropagationState",
    "RamanKernel",
    "SingularSymbolError",
    "SolverError",
    "StepSchedule",
    "TruncationWarning",
    "apply_exp_alpha1",
    "apply_exp_alpha2",
    "apply_exp_convolution",
    "apply_exp_linear",
    "build_grid",
    "build_symbol",
    "dense_alpha2_expm",
    "eval_N",
    "forward",
    "instantiate",
    "integrate_auxiliary",
    "inverse",
    "l2_norm",
    "make_field",
    "make_initial",
    "nyquist_margin",
    "reference_integrate",
    "rhs",
    "run",
    "step",
    "strang7",
    "strang7_with_convolution",
]
