"""Binary checkpoint format for flow states.

Layout (little-endian): magic "R2D1", version uint32, Nx int64, Ny int64,
L_x float64, time float64, then rho, mx, my as float64 arrays in row-major
order with y fastest.
"""

from __future__ import annotations

import struct

import numpy as np

from .solver import FlowState

MAGIC = b"R2D1"
VERSION = 1
_HEADER = struct.Struct("<4sIqqdd")


class CheckpointError(ValueError):
    pass


def write_checkpoint(path, state: FlowState):
    header = _HEADER.pack(MAGIC, VERSION, state.nx, state.ny, state.L_x, state.time)
    with open(path, "wb") as fh:
        fh.write(header)
        for arr in (state.rho, state.mx, state.my):
            fh.write(np.ascontiguousarray(arr, dtype="<f8").tobytes())


def read_checkpoint(path) -> FlowState:
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        if len(raw) < _HEADER.size:
            raise CheckpointError(f"truncated checkpoint header in {path}")
        magic, version, nx, ny, l_x, time = _HEADER.unpack(raw)
        if magic != MAGIC:
            raise CheckpointError(f"bad magic {magic!r} in {path}")
        if version != VERSION:
            raise CheckpointError(f"unsupported checkpoint version {version}")
        count = nx * ny
        arrays = []
        for name in ("rho", "mx", "my"):
            buf = fh.read(8 * count)
            if len(buf) < 8 * count:
                raise CheckpointError(f"truncated {name} payload in {path}")
            arrays.append(np.frombuffer(buf, dtype="<f8").reshape(nx, ny).copy())
    return FlowState(time, l_x, *arrays)
