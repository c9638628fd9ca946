"""Binary field dump format, version 1.

Layout (all little-endian; big-endian files are rejected, not converted):

    offset size  field
    0      8     magic, the bytes b"SSFMDUMP"
    8      4     format version, uint32 (currently 1)
    12     4     endianness sentinel, uint32 0x01020304
    16     4     precision, uint32 bytes per real scalar (4 or 8)
    20     3     per-axis domain tags, uint8 (0 real, 1 spectral), order x,y,t
    23     1     padding byte (zero)
    24     24    nx, ny, nt as int64
    48     40    dx, dy, dt, dzeta, zeta as float64
    88     8     n_steps as int64
    96     ...   payload: 2*nx*ny*nt scalars (float32 or float64),
                 row-major over (x, y, t) with x outermost and t innermost,
                 real and imaginary parts interleaved per sample.

Write-then-read reproduces the field bit-exactly at the declared precision.
"""

from __future__ import annotations

import struct

import numpy as np

from .errors import DumpFormatError
from .fourier import REAL, SPECTRAL, ComplexField
from .grid import build_grid

MAGIC = b"SSFMDUMP"
VERSION = 1
ENDIAN_SENTINEL = 0x01020304
HEADER_STRUCT = struct.Struct("<8sIII3Bxqqqdddddq")
HEADER_SIZE = HEADER_STRUCT.size  # 96 bytes

_TAG_TO_CODE = {REAL: 0, SPECTRAL: 1}
_CODE_TO_TAG = {0: REAL, 1: SPECTRAL}
_PRECISIONS = {"single": 4, "double": 8}


def pack_header(field: ComplexField, zeta: float, precision: str) -> bytes:
    if precision not in _PRECISIONS:
        raise DumpFormatError(f"precision must be 'single' or 'double', got {precision!r}")
    g = field.grid
    tags = [_TAG_TO_CODE[d] for d in field.domains]
    return HEADER_STRUCT.pack(
        MAGIC,
        VERSION,
        ENDIAN_SENTINEL,
        _PRECISIONS[precision],
        tags[0],
        tags[1],
        tags[2],
        g.nx,
        g.ny,
        g.nt,
        g.dx,
        g.dy,
        g.dt,
        g.dzeta,
        float(zeta),
        g.n_steps,
    )


def write_dump(
    field: ComplexField, path: str, zeta: float = 0.0, precision: str = "double"
) -> None:
    """Write a field with its grid metadata; see the module docstring."""
    header = pack_header(field, zeta, precision)
    scalar = np.float32 if precision == "single" else np.float64
    payload = np.empty(field.values.shape + (2,), dtype=scalar)
    payload[..., 0] = field.values.real
    payload[..., 1] = field.values.imag
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(np.ascontiguousarray(payload).tobytes())


def read_dump(path: str) -> tuple[ComplexField, float]:
    """Read a version-1 dump; returns the field and its zeta coordinate."""
    with open(path, "rb") as fh:
        raw = fh.read()
    if len(raw) < HEADER_SIZE:
        raise DumpFormatError(f"file too short for a header ({len(raw)} bytes)")
    (
        magic,
        version,
        sentinel,
        prec_bytes,
        tag_x,
        tag_y,
        tag_t,
        nx,
        ny,
        nt,
        dx,
        dy,
        dt,
        dzeta,
        zeta,
        n_steps,
    ) = HEADER_STRUCT.unpack_from(raw)
    if magic != MAGIC:
        raise DumpFormatError(f"bad magic {magic!r}, not a field dump")
    if version != VERSION:
        raise DumpFormatError(f"unsupported dump version {version}, this reader handles {VERSION}")
    if sentinel != ENDIAN_SENTINEL:
        raise DumpFormatError("endianness mismatch; dumps are little-endian only")
    if prec_bytes not in (4, 8):
        raise DumpFormatError(f"invalid precision {prec_bytes} bytes")
    try:
        domains = (_CODE_TO_TAG[tag_x], _CODE_TO_TAG[tag_y], _CODE_TO_TAG[tag_t])
    except KeyError:
        raise DumpFormatError(f"invalid domain tags {(tag_x, tag_y, tag_t)}") from None

    expected = 2 * nx * ny * nt * prec_bytes
    body = raw[HEADER_SIZE:]
    if len(body) != expected:
        raise DumpFormatError(
            f"payload is {len(body)} bytes, header implies {expected}"
        )
    scalar = np.dtype("<f4") if prec_bytes == 4 else np.dtype("<f8")
    flat = np.frombuffer(body, dtype=scalar).reshape(nx, ny, nt, 2)
    values = flat[..., 0].astype(np.complex128)
    values += 1j * flat[..., 1]
    grid = build_grid(nx, ny, nt, dx, dy, dt, dzeta, n_steps)
    return ComplexField(values, domains, grid), zeta
