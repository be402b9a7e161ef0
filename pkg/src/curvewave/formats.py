"""On-disk formats: field files, coefficient CSV, and PGM quick-looks.

Field2D format: one JSON header line {"N": ..., "m": ..., "dtype": "c128le"}
followed by raw little-endian interleaved re/im float64 samples, row-major,
components contiguous.  Coefficient CSV columns: j,l,k1,k2,nu,re,im.
"""

from __future__ import annotations

import csv
import json

import numpy as np

from .frame import CoeffSet, CurveletIndex, FrameTable

__all__ = ["write_field", "read_field", "write_coeffs_csv", "read_coeffs_csv", "write_pgm"]

_MAGIC_DTYPE = "c128le"


class FormatError(ValueError):
    """Malformed field or coefficient file."""


def write_field(path, f: np.ndarray) -> None:
    """Write a scalar (N,N) or vector (m,N,N) complex field."""
    f = np.asarray(f, dtype=np.complex128)
    if f.ndim == 2:
        m = 1
    elif f.ndim == 3:
        m = f.shape[0]
    else:
        raise FormatError(f"field must be (N,N) or (m,N,N), got {f.shape}")
    n = f.shape[-1]
    if f.shape[-2] != n:
        raise FormatError("field must be square")
    header = json.dumps({"N": n, "m": m, "dtype": _MAGIC_DTYPE})
    with open(path, "wb") as fh:
        fh.write(header.encode("ascii") + b"\n")
        fh.write(np.ascontiguousarray(f).astype("<c16").tobytes())


def read_field(path) -> np.ndarray:
    with open(path, "rb") as fh:
        line = fh.readline()
        try:
            header = json.loads(line.decode("ascii"))
            n, m, dtype = int(header["N"]), int(header["m"]), header["dtype"]
        except (ValueError, KeyError, UnicodeDecodeError) as exc:
            raise FormatError(f"bad field header: {exc}") from exc
        if dtype != _MAGIC_DTYPE:
            raise FormatError(f"unsupported dtype {dtype!r}")
        raw = fh.read()
    expect = m * n * n * 16
    if len(raw) != expect:
        raise FormatError(f"field payload has {len(raw)} bytes, expected {expect}")
    data = np.frombuffer(raw, dtype="<c16").astype(np.complex128)
    return data.reshape((n, n) if m == 1 else (m, n, n))


def write_coeffs_csv(path, coeffs: CoeffSet, tol: float = 0.0, component: int = 0) -> None:
    """Write nonzero coefficients as rows j,l,k1,k2,nu,re,im."""
    j, ell, k1, k2, vals = coeffs.nonzero_rows(tol)
    with open(path, "w", newline="") as fh:
        wr = csv.writer(fh)
        wr.writerow(["j", "l", "k1", "k2", "nu", "re", "im"])
        for i in range(len(vals)):
            wr.writerow(
                [j[i], ell[i], k1[i], k2[i], component,
                 f"{vals[i].real:.17g}", f"{vals[i].imag:.17g}"]
            )


def read_coeffs_csv(path, table: FrameTable) -> CoeffSet:
    out = CoeffSet.zeros(table)
    with open(path, newline="") as fh:
        rd = csv.DictReader(fh)
        for row in rd:
            mu = CurveletIndex(int(row["j"]), int(row["l"]), int(row["k1"]), int(row["k2"]))
            out[mu] = complex(float(row["re"]), float(row["im"]))
    return out


def write_pgm(path, f: np.ndarray, floor_db: float = -80.0) -> None:
    """8-bit log-magnitude quick-look image of a complex field."""
    mag = np.abs(np.asarray(f))
    peak = mag.max()
    if peak == 0:
        img = np.zeros(mag.shape, dtype=np.uint8)
    else:
        db = 20.0 * np.log10(np.maximum(mag / peak, 10 ** (floor_db / 20.0)))
        img = np.round((db - floor_db) / (-floor_db) * 255.0).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii"))
        fh.write(img.tobytes())
