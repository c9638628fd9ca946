import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ssfm3d import DumpFormatError, build_grid, forward, make_field
from ssfm3d.fielddump import HEADER_SIZE, pack_header, read_dump, write_dump

# Frozen bytes of a version-1 header for a 2x1x4 grid (dx=0.5, dy=1.0,
# dt=0.25, dzeta=1e-3, n_steps=10) at zeta=0.25, double precision. Any
# change to this constant is a format break.
GOLDEN_HEADER_V1 = (
    "5353464d44554d500100000004030201080000000000000002000000000000000100"
    "0000000000000400000000000000000000000000e03f000000000000f03f00000000"
    "0000d03ffca9f1d24d62503f000000000000d03f0a00000000000000"
)


def _grid(nx=2, ny=1, nt=4, dx=0.5, dy=1.0, dt=0.25, dzeta=1e-3, n_steps=10):
    return build_grid(nx, ny, nt, dx, dy, dt, dzeta, n_steps)


def test_golden_header_bytes_frozen():
    grid = _grid()
    field = make_field(grid, np.zeros(grid.shape))
    header = pack_header(field, zeta=0.25, precision="double")
    assert len(header) == HEADER_SIZE == 96
    assert header.hex() == GOLDEN_HEADER_V1


@given(seed=st.integers(0, 2**32 - 1))
def test_round_trip_is_bit_exact(tmp_path_factory, seed):
    rng = np.random.default_rng(seed)
    grid = _grid(nx=3, ny=2, nt=8)
    values = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    field = make_field(grid, values)
    path = tmp_path_factory.mktemp("dump") / "field.fdump"
    write_dump(field, str(path), zeta=0.125)
    back, zeta = read_dump(str(path))
    assert zeta == 0.125
    assert np.array_equal(back.values, values)
    assert back.domains == field.domains
    g = back.grid
    assert (g.nx, g.ny, g.nt) == (3, 2, 8)
    assert (g.dx, g.dy, g.dt, g.dzeta, g.n_steps) == (0.5, 1.0, 0.25, 1e-3, 10)


def test_round_trip_preserves_domain_tags(tmp_path):
    grid = _grid(nt=8)
    field = forward(make_field(grid, np.ones(grid.shape)), ("t",))
    path = tmp_path / "spec.fdump"
    write_dump(field, str(path))
    back, _ = read_dump(str(path))
    assert back.domains == ("real", "real", "spectral")
    assert np.array_equal(back.values, field.values)


def test_single_precision_round_trip_error_bound(tmp_path):
    rng = np.random.default_rng(7)
    grid = _grid(nx=4, ny=2, nt=16)
    values = rng.normal(size=grid.shape) + 1j * rng.normal(size=grid.shape)
    path = tmp_path / "single.fdump"
    write_dump(make_field(grid, values), str(path), precision="single")
    back, _ = read_dump(str(path))
    rel = np.abs(back.values - values) / np.abs(values)
    assert np.max(rel) < 1e-6
    # Bit-exact at the declared precision:
    assert np.array_equal(back.values.real, values.real.astype(np.float32).astype(np.float64))


def test_version_mismatch_rejected(tmp_path):
    grid = _grid()
    path = tmp_path / "v2.fdump"
    write_dump(make_field(grid, np.zeros(grid.shape)), str(path))
    raw = bytearray(path.read_bytes())
    raw[8] = 2  # bump the version field
    path.write_bytes(bytes(raw))
    with pytest.raises(DumpFormatError, match="version"):
        read_dump(str(path))


def test_bad_magic_rejected(tmp_path):
    path = tmp_path / "junk.fdump"
    path.write_bytes(b"NOTADUMP" + bytes(100))
    with pytest.raises(DumpFormatError, match="magic"):
        read_dump(str(path))


def test_endian_mismatch_rejected(tmp_path):
    grid = _grid()
    path = tmp_path / "endian.fdump"
    write_dump(make_field(grid, np.zeros(grid.shape)), str(path))
    raw = bytearray(path.read_bytes())
    raw[12:16] = raw[12:16][::-1]  # byte-swapped sentinel
    path.write_bytes(bytes(raw))
    with pytest.raises(DumpFormatError, match="endian"):
        read_dump(str(path))


def test_truncated_payload_rejected(tmp_path):
    grid = _grid()
    path = tmp_path / "short.fdump"
    write_dump(make_field(grid, np.zeros(grid.shape)), str(path))
    raw = path.read_bytes()
    path.write_bytes(raw[:-8])
    with pytest.raises(DumpFormatError, match="payload"):
        read_dump(str(path))


def test_truncated_header_rejected(tmp_path):
    path = tmp_path / "tiny.fdump"
    path.write_bytes(b"SSFMDUMP")
    with pytest.raises(DumpFormatError, match="short"):
        read_dump(str(path))


def test_invalid_precision_rejected(tmp_path):
    grid = _grid()
    with pytest.raises(DumpFormatError, match="precision"):
        write_dump(make_field(grid, np.zeros(grid.shape)), str(tmp_path / "x"), precision="half")
