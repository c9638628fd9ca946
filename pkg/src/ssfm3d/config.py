"""Run configuration: a line-oriented key = value format with [section] headers.

Sections and keys (see README for the full reference):

    [grid]        nx ny nt dx dy dt dzeta n_steps          (required)
    [preset]      name, plus the preset's constants        (required)
    [initial]     profile, plus the profile's parameters   (required)
    [schedule]    name | entries                           (optional)
    [run]         alpha2_order, nyquist_threshold          (optional)
    [diagnostics] record_every, quantities                 (optional)
    [output]      directory, precision, dump_format        (optional)

Comments start with '#' or ';' (full line, or preceded by whitespace).
Unknown sections and keys are hard errors carrying the line number.
Re-parsing a printed configuration yields an identical RunConfig.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .errors import ConfigError
from .grid import Grid, build_grid
from .presets import PRESETS, InitialCondition, PresetSpec
from .stepper import DIAGNOSTIC_QUANTITIES, OPERATOR_IDS, SCHEDULES

ALPHA2_ORDERS = ("commuting", "third", "fourth")
PRECISIONS = ("single", "double")
DUMP_FORMATS = ("fdump1",)

_PROFILE_KEYS = {
    "gaussian": {"amplitude", "width_x", "width_y", "width_t"},
    "sech": {"amplitude", "width"},
    "plane-wave": {"amplitude"},
    "file": {"path"},
}


@dataclass(frozen=True)
class GridSpec:
    nx: int
    ny: int
    nt: int
    dx: float
    dy: float
    dt: float
    dzeta: float
    n_steps: int

    def build(self) -> Grid:
        return build_grid(
            self.nx, self.ny, self.nt, self.dx, self.dy, self.dt, self.dzeta, self.n_steps
        )


@dataclass(frozen=True)
class DiagnosticsSpec:
    record_every: int = 1
    quantities: tuple[str, ...] = ("l2_norm", "peak_intensity")


@dataclass(frozen=True)
class OutputSpec:
    directory: str = "out"
    precision: str = "double"
    dump_format: str = "fdump1"


@dataclass(frozen=True)
class RunConfig:
    grid: GridSpec
    preset: PresetSpec
    schedule_name: str | None = "strang-7"
    schedule_entries: tuple[tuple[str, str], ...] | None = None
    alpha2_order: str = "fourth"
    nyquist_threshold: float = 0.01
    diagnostics: DiagnosticsSpec = dc_field(default_factory=DiagnosticsSpec)
    output: OutputSpec = dc_field(default_factory=OutputSpec)


@dataclass(frozen=True)
class _Entry:
    line: int
    key: str
    value: str


def _strip_comment(line: str) -> str:
    for marker in ("#", ";"):
        pos = line.find(marker)
        while pos != -1:
            if pos == 0 or line[pos - 1].isspace():
                line = line[:pos]
                break
            pos = line.find(marker, pos + 1)
    return line.strip()


def _tokenize(text: str) -> dict[str, list[_Entry]]:
    sections: dict[str, list[_Entry]] = {}
    current: str | None = None
    seen_keys: dict[tuple[str, str], int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in _SECTIONS:
                raise ConfigError(f"unknown section [{current}]", lineno)
            sections.setdefault(current, [])
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {line!r}", lineno)
        if current is None:
            raise ConfigError("key outside of any [section]", lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if not key:
            raise ConfigError("empty key", lineno)
        if (current, key) in seen_keys:
            raise ConfigError(
                f"duplicate key {key!r} in [{current}] (first at line {seen_keys[(current, key)]})",
                lineno,
            )
        seen_keys[(current, key)] = lineno
        sections[current].append(_Entry(lineno, key, value))
    return sections


def _parse_int(entry: _Entry, minimum: int | None = None) -> int:
    try:
        value = int(entry.value)
    except ValueError:
        raise ConfigError(f"{entry.key} must be an integer, got {entry.value!r}", entry.line)
    if minimum is not None and value < minimum:
        raise ConfigError(f"{entry.key} must be >= {minimum}, got {value}", entry.line)
    return value


def _parse_float(entry: _Entry, positive: bool = False) -> float:
    try:
        value = float(entry.value)
    except ValueError:
        raise ConfigError(f"{entry.key} must be a number, got {entry.value!r}", entry.line)
    if positive and not value > 0:
        raise ConfigError(f"{entry.key} must be positive, got {value}", entry.line)
    return value


def _parse_choice(entry: _Entry, choices: tuple[str, ...]) -> str:
    if entry.value not in choices:
        raise ConfigError(
            f"{entry.key} must be one of {', '.join(choices)}; got {entry.value!r}",
            entry.line,
        )
    return entry.value


def _as_map(entries: list[_Entry]) -> dict[str, _Entry]:
    return {e.key: e for e in entries}


def _require(section: str, entries: dict[str, _Entry], key: str) -> _Entry:
    if key not in entries:
        raise ConfigError(f"missing required key {key!r} in [{section}]")
    return entries[key]


def _reject_unknown(section: str, entries: dict[str, _Entry], known: set[str]) -> None:
    for key, entry in entries.items():
        if key not in known:
            raise ConfigError(f"unknown key {key!r} in [{section}]", entry.line)


_SECTIONS = ("grid", "preset", "initial", "schedule", "run", "diagnostics", "output")

_GRID_KEYS = ("nx", "ny", "nt", "dx", "dy", "dt", "dzeta", "n_steps")


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a configuration; defaults are filled in."""
    sections = _tokenize(text)
    for required in ("grid", "preset", "initial"):
        if required not in sections:
            raise ConfigError(f"missing required section [{required}]")

    g = _as_map(sections["grid"])
    _reject_unknown("grid", g, set(_GRID_KEYS))
    grid = GridSpec(
        nx=_parse_int(_require("grid", g, "nx"), minimum=1),
        ny=_parse_int(_require("grid", g, "ny"), minimum=1),
        nt=_parse_int(_require("grid", g, "nt"), minimum=1),
        dx=_parse_float(_require("grid", g, "dx"), positive=True),
        dy=_parse_float(_require("grid", g, "dy"), positive=True),
        dt=_parse_float(_require("grid", g, "dt"), positive=True),
        dzeta=_parse_float(_require("grid", g, "dzeta"), positive=True),
        n_steps=_parse_int(_require("grid", g, "n_steps"), minimum=0),
    )

    p = _as_map(sections["preset"])
    name_entry = _require("preset", p, "name")
    preset_name = name_entry.value
    if preset_name not in PRESETS:
        raise ConfigError(
            f"unknown preset {preset_name!r}; available: {', '.join(sorted(PRESETS))}",
            name_entry.line,
        )
    info = PRESETS[preset_name]
    allowed = set(info.required) | set(info.optional) | {"name"}
    _reject_unknown("preset", p, allowed)
    constants = {k: _parse_float(e) for k, e in p.items() if k != "name"}
    for key in info.required:
        if key not in constants:
            raise ConfigError(f"preset {preset_name!r} requires constant {key!r}")

    i = _as_map(sections["initial"])
    profile_entry = _require("initial", i, "profile")
    profile = _parse_choice(profile_entry, tuple(_PROFILE_KEYS))
    _reject_unknown("initial", i, _PROFILE_KEYS[profile] | {"profile"})
    params: dict[str, float | str] = {}
    for key, entry in i.items():
        if key == "profile":
            continue
        params[key] = entry.value if key == "path" else _parse_float(entry)
    if profile == "file":
        _require("initial", i, "path")
    else:
        _require("initial", i, "amplitude")

    schedule_name: str | None = "strang-7"
    schedule_entries: tuple[tuple[str, str], ...] | None = None
    if "schedule" in sections:
        s = _as_map(sections["schedule"])
        _reject_unknown("schedule", s, {"name", "entries"})
        if "name" in s and "entries" in s:
            raise ConfigError(
                "schedule takes either 'name' or 'entries', not both", s["entries"].line
            )
        if "entries" in s:
            schedule_name = None
            schedule_entries = _parse_schedule_entries(s["entries"])
        elif "name" in s:
            schedule_name = s["name"].value
            if schedule_name not in SCHEDULES:
                raise ConfigError(
                    f"unknown schedule {schedule_name!r}; available:"
                    f" {', '.join(sorted(SCHEDULES))}",
                    s["name"].line,
                )

    alpha2_order = "fourth"
    nyquist_threshold = 0.01
    if "run" in sections:
        r = _as_map(sections["run"])
        _reject_unknown("run", r, {"alpha2_order", "nyquist_threshold"})
        if "alpha2_order" in r:
            alpha2_order = _parse_choice(r["alpha2_order"], ALPHA2_ORDERS)
        if "nyquist_threshold" in r:
            nyquist_threshold = _parse_float(r["nyquist_threshold"], positive=True)

    diagnostics = DiagnosticsSpec()
    if "diagnostics" in sections:
        d = _as_map(sections["diagnostics"])
        _reject_unknown("diagnostics", d, {"record_every", "quantities"})
        record_every = (
            _parse_int(d["record_every"], minimum=1) if "record_every" in d else 1
        )
        quantities = DiagnosticsSpec().quantities
        if "quantities" in d:
            entry = d["quantities"]
            items = tuple(q.strip() for q in entry.value.split(",") if q.strip())
            for q in items:
                if q not in DIAGNOSTIC_QUANTITIES:
                    raise ConfigError(
                        f"unknown diagnostic quantity {q!r}; available:"
                        f" {', '.join(DIAGNOSTIC_QUANTITIES)}",
                        entry.line,
                    )
            quantities = items
        diagnostics = DiagnosticsSpec(record_every=record_every, quantities=quantities)

    output = OutputSpec()
    if "output" in sections:
        o = _as_map(sections["output"])
        _reject_unknown("output", o, {"directory", "precision", "dump_format"})
        output = OutputSpec(
            directory=o["directory"].value if "directory" in o else "out",
            precision=_parse_choice(o["precision"], PRECISIONS) if "precision" in o else "double",
            dump_format=_parse_choice(o["dump_format"], DUMP_FORMATS)
            if "dump_format" in o
            else "fdump1",
        )

    preset = PresetSpec(
        name=preset_name,
        constants=constants,
        initial_condition=InitialCondition(profile=profile, params=params),
        schedule_name=schedule_name if schedule_name is not None else "strang-7",
    )
    return RunConfig(
        grid=grid,
        preset=preset,
        schedule_name=schedule_name,
        schedule_entries=schedule_entries,
        alpha2_order=alpha2_order,
        nyquist_threshold=nyquist_threshold,
        diagnostics=diagnostics,
        output=output,
    )


def _parse_schedule_entries(entry: _Entry) -> tuple[tuple[str, str], ...]:
    items = []
    for chunk in entry.value.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        op, sep, frac = chunk.partition(":")
        op = op.strip()
        frac = frac.strip()
        if not sep or op not in OPERATOR_IDS:
            raise ConfigError(
                f"schedule entry {chunk!r} must look like 'operator:fraction' with"
                f" operator in {', '.join(OPERATOR_IDS)}",
                entry.line,
            )
        try:
            frac_value = Fraction(frac)
        except (ValueError, ZeroDivisionError):
            raise ConfigError(f"invalid fraction {frac!r}", entry.line)
        items.append((op, str(frac_value)))
    if not items:
        raise ConfigError("schedule entries are empty", entry.line)
    return tuple(items)


def print_config(config: RunConfig) -> str:
    """Render a configuration to its canonical text form.

    parse_config(print_config(c)) == c for any c produced by parse_config.
    """
    lines: list[str] = []
    g = config.grid
    lines.append("[grid]")
    for key in _GRID_KEYS:
        lines.append(f"{key} = {getattr(g, key)!r}")
    lines.append("")
    lines.append("[preset]")
    lines.append(f"name = {config.preset.name}")
    for key in sorted(config.preset.constants):
        lines.append(f"{key} = {config.preset.constants[key]!r}")
    lines.append("")
    lines.append("[initial]")
    cond = config.preset.initial_condition
    lines.append(f"profile = {cond.profile}")
    for key in sorted(cond.params):
        value = cond.params[key]
        lines.append(f"{key} = {value if isinstance(value, str) else repr(value)}")
    lines.append("")
    lines.append("[schedule]")
    if config.schedule_entries is not None:
        rendered = ", ".join(f"{op}:{frac}" for op, frac in config.schedule_entries)
        lines.append(f"entries = {rendered}")
    else:
        lines.append(f"name = {config.schedule_name}")
    lines.append("")
    lines.append("[run]")
    lines.append(f"alpha2_order = {config.alpha2_order}")
    lines.append(f"nyquist_threshold = {config.nyquist_threshold!r}")
    lines.append("")
    lines.append("[diagnostics]")
    lines.append(f"record_every = {config.diagnostics.record_every}")
    lines.append(f"quantities = {', '.join(config.diagnostics.quantities)}")
    lines.append("")
    lines.append("[output]")
    lines.append(f"directory = {config.output.directory}")
    lines.append(f"precision = {config.output.precision}")
    lines.append(f"dump_format = {config.output.dump_format}")
    lines.append("")
    return "\n".join(lines)
