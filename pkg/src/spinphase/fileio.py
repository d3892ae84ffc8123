"""Readers and writers for the documented file formats.

State JSON:   {"twice_J": int, "kind": "pure"|"density",
               "amplitudes"|"matrix": [[re, im], ...]} in m = J..-J order.
Coefficient JSON: {"twice_J": int, "s": float|null, "coeffs": [[j, m, re, im], ...]}.
Grid CSV:     header "theta,phi,value", row-major in k then q.
Raster dumps: 8-bit binary PGM (gray |value|) and PPM with the red/green
              diverging map (positive red, negative green, brightness
              proportional to |value| / max).

Floats are written with 17 significant digits so every writer round-trips
bit-exactly through its reader.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import FormatError
from .halfint import HalfInteger
from .phasespace import SphericalFunction, coeff_index, spherical_function
from .states import DensityMatrix, PureState

_MODULE = "fileio"


def fmt(x: float) -> str:
    return format(float(x), ".17g")


def _pairs(values: np.ndarray) -> list:
    return [[float(v.real), float(v.imag)] for v in values]


def _from_pairs(pairs) -> np.ndarray:
    try:
        return np.array([complex(re, im) for re, im in pairs], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise FormatError(_MODULE, f"malformed [re, im] pair list: {exc}") from exc


def state_to_dict(state) -> dict:
    if isinstance(state, PureState):
        return {
            "twice_J": state.J.twice,
            "kind": "pure",
            "amplitudes": _pairs(state.amplitudes),
        }
    if isinstance(state, DensityMatrix):
        return {
            "twice_J": state.J.twice,
            "kind": "density",
            "matrix": [_pairs(row) for row in state.matrix],
        }
    raise FormatError(_MODULE, f"cannot serialize {type(state).__name__}")


def state_from_dict(data: dict):
    try:
        twice_j = int(data["twice_J"])
        kind = data["kind"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(_MODULE, f"state JSON missing twice_J/kind: {exc}") from exc
    J = HalfInteger(twice_j)
    dim = twice_j + 1
    if kind == "pure":
        amps = _from_pairs(data.get("amplitudes", []))
        if amps.shape != (dim,):
            raise FormatError(_MODULE, f"expected {dim} amplitudes, got {amps.shape}")
        return PureState(J, amps)
    if kind == "density":
        rows = data.get("matrix", [])
        if len(rows) != dim:
            raise FormatError(_MODULE, f"expected {dim} matrix rows, got {len(rows)}")
        matrix = np.stack([_from_pairs(row) for row in rows])
        if matrix.shape != (dim, dim):
            raise FormatError(_MODULE, f"expected {dim}x{dim} matrix, got {matrix.shape}")
        return DensityMatrix(J, matrix)
    raise FormatError(_MODULE, f"unknown state kind {kind!r}")


def _dump(data: dict, path) -> None:
    Path(path).write_text(json.dumps(data, sort_keys=True, separators=(",", ": "), indent=1))


def _load(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(_MODULE, f"invalid JSON in {path}: {exc}") from exc


def save_state(state, path) -> None:
    _dump(state_to_dict(state), path)


def load_state(path):
    return state_from_dict(_load(path))


def coeffs_to_dict(f: SphericalFunction) -> dict:
    entries = []
    for j in range(f.twice_J + 1):
        for m in range(-j, j + 1):
            c = f.coeffs[coeff_index(j, m)]
            entries.append([j, m, float(c.real), float(c.imag)])
    return {
        "twice_J": f.twice_J,
        "s": None if f.s_tag is None else float(f.s_tag),
        "coeffs": entries,
    }


def coeffs_from_dict(data: dict) -> SphericalFunction:
    try:
        twice_j = int(data["twice_J"])
        entries = data["coeffs"]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(_MODULE, f"coefficient JSON missing keys: {exc}") from exc
    s_tag = data.get("s")
    coeffs = np.zeros((twice_j + 1) ** 2, dtype=complex)
    seen = set()
    for entry in entries:
        try:
            j, m, re, im = int(entry[0]), int(entry[1]), float(entry[2]), float(entry[3])
        except (TypeError, ValueError, IndexError) as exc:
            raise FormatError(_MODULE, f"malformed coefficient entry {entry!r}") from exc
        if j > twice_j:
            raise FormatError(
                _MODULE, f"coefficient rank j = {j} exceeds the band limit 2J = {twice_j}"
            )
        if abs(m) > j:
            raise FormatError(_MODULE, f"coefficient order |m| = {abs(m)} exceeds j = {j}")
        if (j, m) in seen:
            raise FormatError(_MODULE, f"duplicate coefficient (j={j}, m={m})")
        seen.add((j, m))
        coeffs[coeff_index(j, m)] = complex(re, im)
    return spherical_function(twice_j, coeffs, None if s_tag is None else float(s_tag))


def save_coeffs(f: SphericalFunction, path) -> None:
    _dump(coeffs_to_dict(f), path)


def load_coeffs(path) -> SphericalFunction:
    return coeffs_from_dict(_load(path))


def save_grid_csv(path, thetas, phis, values) -> None:
    """Row-major grid values: one line per (theta_k, phi_q) pair."""
    values = np.asarray(values)
    lines = ["theta,phi,value"]
    for k, theta in enumerate(thetas):
        for q, phi in enumerate(phis):
            lines.append(f"{fmt(theta)},{fmt(phi)},{fmt(values[k, q])}")
    Path(path).write_text("\n".join(lines) + "\n")


def load_grid_csv(path):
    lines = Path(path).read_text().strip().splitlines()
    if not lines or lines[0].strip() != "theta,phi,value":
        raise FormatError(_MODULE, "grid CSV must start with header 'theta,phi,value'")
    thetas, phis, values = [], [], []
    for line in lines[1:]:
        parts = line.split(",")
        if len(parts) != 3:
            raise FormatError(_MODULE, f"malformed grid CSV line {line!r}")
        thetas.append(float(parts[0]))
        phis.append(float(parts[1]))
        values.append(float(parts[2]))
    return np.array(thetas), np.array(phis), np.array(values)


def save_parity_csv(path, m_values, diag) -> None:
    lines = ["m,weight"]
    for m, w in zip(m_values, diag):
        lines.append(f"{fmt(m)},{fmt(w)}")
    Path(path).write_text("\n".join(lines) + "\n")


def _brightness(values: np.ndarray) -> np.ndarray:
    peak = np.abs(values).max()
    if peak == 0.0:
        return np.zeros_like(values)
    return values / peak


def save_pgm(path, values: np.ndarray) -> None:
    """Grayscale P5 raster of |value| relative to the global maximum."""
    rel = np.abs(_brightness(np.asarray(values, dtype=float)))
    pixels = np.round(255.0 * rel).astype(np.uint8)
    h, w = pixels.shape
    header = f"P5\n{w} {h}\n255\n".encode("ascii")
    Path(path).write_bytes(header + pixels.tobytes())


def save_ppm(path, values: np.ndarray) -> None:
    """P6 raster, red for positive and green for negative values.

    Brightness is |value| relative to the global maximum, matching the
    color convention of the reference plots.
    """
    rel = _brightness(np.asarray(values, dtype=float))
    h, w = rel.shape
    rgb = np.zeros((h, w, 3), dtype=np.uint8)
    pos = np.clip(rel, 0.0, 1.0)
    neg = np.clip(-rel, 0.0, 1.0)
    rgb[:, :, 0] = np.round(255.0 * pos).astype(np.uint8)
    rgb[:, :, 1] = np.round(255.0 * neg).astype(np.uint8)
    header = f"P6\n{w} {h}\n255\n".encode("ascii")
    Path(path).write_bytes(header + rgb.tobytes())
