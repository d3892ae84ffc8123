"""File format round trips and raster writers."""

import json
import math

import numpy as np
import pytest

from spinphase.errors import FormatError
from spinphase.fileio import (
    coeffs_from_dict,
    coeffs_to_dict,
    load_coeffs,
    load_grid_csv,
    load_state,
    save_coeffs,
    save_grid_csv,
    save_parity_csv,
    save_pgm,
    save_ppm,
    save_state,
    state_from_dict,
)
from spinphase.halfint import HalfInteger
from spinphase.phasespace import to_spherical_coeffs
from spinphase.states import make_named_state, random_hs, random_pure


def test_pure_state_round_trip_bit_exact(tmp_path):
    state = random_pure(HalfInteger(7), 5)
    path = tmp_path / "pure.json"
    save_state(state, path)
    back = load_state(path)
    assert back.J.twice == 7
    assert np.array_equal(back.amplitudes, state.amplitudes)


def test_density_round_trip_bit_exact(tmp_path):
    rho = random_hs(HalfInteger(4), 6)
    path = tmp_path / "dm.json"
    save_state(rho, path)
    back = load_state(path)
    assert np.array_equal(back.matrix, rho.matrix)


def test_state_json_shape_is_documented_format(tmp_path):
    state = make_named_state("ghz", HalfInteger(5))
    path = tmp_path / "ghz.json"
    save_state(state, path)
    data = json.loads(path.read_text())
    assert data["twice_J"] == 5
    assert data["kind"] == "pure"
    assert data["amplitudes"][0] == [1.0 / math.sqrt(2.0), 0.0]


def test_state_reader_rejects_malformed():
    with pytest.raises(FormatError):
        state_from_dict({"kind": "pure"})
    with pytest.raises(FormatError):
        state_from_dict({"twice_J": 2, "kind": "pure", "amplitudes": [[1, 0]]})
    with pytest.raises(FormatError):
        state_from_dict({"twice_J": 1, "kind": "wat", "amplitudes": [[1, 0], [0, 0]]})


def test_coeffs_round_trip_bit_exact(tmp_path):
    f = to_spherical_coeffs(random_hs(HalfInteger(5), 3), -0.5)
    path = tmp_path / "coeffs.json"
    save_coeffs(f, path)
    back = load_coeffs(path)
    assert back.twice_J == 5
    assert back.s_tag == -0.5
    assert np.array_equal(back.coeffs, f.coeffs)


def test_coeffs_untagged_round_trip(tmp_path):
    f = to_spherical_coeffs(random_hs(HalfInteger(2), 3), 0.0).with_coeffs(
        np.zeros(9, dtype=complex)
    )
    path = tmp_path / "c.json"
    save_coeffs(f, path)
    assert load_coeffs(path).s_tag is None


def test_coeffs_reader_rejects_band_violation():
    data = coeffs_to_dict(to_spherical_coeffs(random_hs(HalfInteger(2), 1), 0.0))
    data["coeffs"].append([3, 0, 1.0, 0.0])  # rank above the band limit
    with pytest.raises(FormatError):
        coeffs_from_dict(data)
    data = {"twice_J": 2, "coeffs": [[1, 2, 0.0, 0.0]]}
    with pytest.raises(FormatError):
        coeffs_from_dict(data)
    data = {"twice_J": 2, "coeffs": [[1, 0, 0.0, 0.0], [1, 0, 0.0, 0.0]]}
    with pytest.raises(FormatError):
        coeffs_from_dict(data)


def test_grid_csv_round_trip(tmp_path):
    thetas = np.array([0.0, 0.5])
    phis = np.array([0.0, 1.0, 2.0])
    values = np.arange(6.0).reshape(2, 3) / 7.0
    path = tmp_path / "grid.csv"
    save_grid_csv(path, thetas, phis, values)
    t, p, v = load_grid_csv(path)
    assert np.array_equal(v.reshape(2, 3), values)
    assert t[0] == 0.0 and p[2] == 2.0
    text = path.read_text().splitlines()
    assert text[0] == "theta,phi,value"
    (tmp_path / "bad.csv").write_text("nope\n1,2,3\n")
    with pytest.raises(FormatError):
        load_grid_csv(tmp_path / "bad.csv")


def test_parity_csv(tmp_path):
    path = tmp_path / "parity.csv"
    save_parity_csv(path, [0.5, -0.5], [1.0, 0.0])
    lines = path.read_text().splitlines()
    assert lines[0] == "m,weight"
    assert lines[1].startswith("0.5,")


def test_pgm_writer(tmp_path):
    values = np.array([[0.0, 0.5], [-1.0, 1.0]])
    path = tmp_path / "map.pgm"
    save_pgm(path, values)
    raw = path.read_bytes()
    assert raw.startswith(b"P5\n2 2\n255\n")
    pixels = np.frombuffer(raw[len(b"P5\n2 2\n255\n"):], dtype=np.uint8).reshape(2, 2)
    assert pixels[0, 0] == 0
    assert pixels[1, 0] == 255 and pixels[1, 1] == 255  # |value| map


def test_ppm_writer_red_positive_green_negative(tmp_path):
    values = np.array([[1.0, -1.0, 0.0]])
    path = tmp_path / "map.ppm"
    save_ppm(path, values)
    raw = path.read_bytes()
    header = b"P6\n3 1\n255\n"
    assert raw.startswith(header)
    rgb = np.frombuffer(raw[len(header):], dtype=np.uint8).reshape(1, 3, 3)
    assert tuple(rgb[0, 0]) == (255, 0, 0)  # positive -> red
    assert tuple(rgb[0, 1]) == (0, 255, 0)  # negative -> green
    assert tuple(rgb[0, 2]) == (0, 0, 0)  # zero -> black
