import numpy as np
import pytest

from ssfm3d.cli import main
from ssfm3d.fielddump import read_dump

SOLITON_SHORT = """\
[grid]
nx = 1
ny = 1
nt = 256
dx = 1.0
dy = 1.0
dt = 0.15625
dzeta = 1e-3
n_steps = 50

[preset]
name = cubic-nlse-1d

[initial]
profile = sech
amplitude = 1.0
width = 1.0

[diagnostics]
record_every = 10
quantities = l2_norm, peak_intensity, time_spectrum
"""

BLOWUP = """\
[grid]
nx = 1
ny = 1
nt = 32
dx = 1.0
dy = 1.0
dt = 1.0
dzeta = 0.5
n_steps = 40

[preset]
name = gdnlse-eq5
a = 4.0
b = 0.1
c = 0.1
d = 0.0
e = 1.0
f = -5.0
m = 2.0

[initial]
profile = gaussian
amplitude = 2.0
width_t = 3.0
"""


def _write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_describe_presets(capsys):
    assert main(["describe-presets"]) == 0
    out = capsys.readouterr().out
    for name in ("cubic-nlse-1d", "gdnlse-eq5", "derivative-nlse-toy"):
        assert name in out
    assert "required constants" in out
    assert "strang-7" in out


def test_run_soliton_writes_diagnostics_and_dump(tmp_path, capsys):
    config = _write(tmp_path, "run.cfg", SOLITON_SHORT)
    outdir = tmp_path / "out"
    assert main(["run", config, "--output-dir", str(outdir)]) == 0

    rows = (outdir / "diagnostics.tsv").read_text().splitlines()
    header = rows[0].split("\t")
    assert header[:4] == ["slice", "zeta", "l2_norm", "peak_intensity"]
    data = [r.split("\t") for r in rows[1:]]
    assert [int(r[0]) for r in data] == [10, 20, 30, 40, 50]
    norms = [float(r[2]) for r in data]
    assert abs(norms[-1] / norms[0] - 1.0) < 1e-10

    spectra = (outdir / "time_spectrum.tsv").read_text().splitlines()
    assert len(spectra) == 5
    assert len(spectra[0].split("\t")) == 1 + 256

    field, zeta = read_dump(str(outdir / "field_final.fdump"))
    assert zeta == pytest.approx(0.05)
    profile = np.abs(field.values[0, 0])
    assert profile.max() == pytest.approx(1.0, abs=1e-4)


def test_run_full_field_dumps_per_record(tmp_path):
    config = SOLITON_SHORT.replace(
        "quantities = l2_norm, peak_intensity, time_spectrum",
        "quantities = l2_norm, full_field",
    ).replace("n_steps = 50", "n_steps = 20")
    path = _write(tmp_path, "run.cfg", config)
    outdir = tmp_path / "out"
    assert main(["run", path, "--output-dir", str(outdir)]) == 0
    assert (outdir / "field_000010.fdump").exists()
    assert (outdir / "field_000020.fdump").exists()


def test_run_invalid_config_exits_2(tmp_path, capsys):
    path = _write(tmp_path, "bad.cfg", SOLITON_SHORT.replace("nt = 256", "nt = -4"))
    assert main(["run", path]) == 2
    assert "config error" in capsys.readouterr().err


def test_run_missing_config_file_exits_2(tmp_path, capsys):
    assert main(["run", str(tmp_path / "nope.cfg")]) == 2


def test_run_blowup_exits_3_with_last_good_dump(tmp_path, capsys):
    path = _write(tmp_path, "blowup.cfg", BLOWUP)
    outdir = tmp_path / "out"
    with pytest.warns():  # amplification warnings precede the abort
        code = main(["run", path, "--output-dir", str(outdir)])
    assert code == 3
    err = capsys.readouterr().err
    assert "last good slice" in err
    field, _ = read_dump(str(outdir / "field_lastgood.fdump"))
    assert np.isfinite(field.values).all()


def test_convergence_sweep_quick(capsys):
    code = main(
        [
            "convergence-sweep",
            "--dzeta",
            "4e-3,2e-3",
            "--zeta-end",
            "8e-3",
            "--ref-step",
            "4e-5",
            "--nx",
            "16",
            "--nt",
            "64",
        ]
    )
    out = capsys.readouterr().out
    assert code == 0, out
    assert "measured order:" in out
    slope = float(out.rsplit("measured order:", 1)[1].strip())
    assert slope >= 1.8


def test_convergence_sweep_rejects_misaligned_interval(capsys):
    assert main(["convergence-sweep", "--dzeta", "3e-3", "--zeta-end", "1e-2"]) == 2


def test_validate_suite_passes(capsys):
    assert main(["validate"]) == 0
    out = capsys.readouterr().out
    lines = [l for l in out.splitlines() if l.startswith(("PASS", "FAIL"))]
    assert len(lines) == 7
    assert all(l.startswith("PASS") for l in lines)
