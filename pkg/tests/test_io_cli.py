import json
import os
import subprocess
import sys
from importlib import resources
from pathlib import Path

import numpy as np
import pytest

from dtcwt_fht import analyze, analyze2d, build_system
from dtcwt_fht.checks import FINE_GRID_ENV, resolve_fine_grid
from dtcwt_fht.cli import main
from dtcwt_fht.io import (
    FormatError,
    MetadataError,
    load_coeffs,
    read_image,
    read_matrix,
    read_pgm,
    read_signal,
    save_coeffs,
    write_matrix,
    write_pgm,
    write_signal,
)

DATA = resources.files("dtcwt_fht") / "data"
CHIRP = str(DATA / "chirp.csv")
TEXTURE = str(DATA / "texture.pgm")


def test_fixtures_are_valid():
    assert read_signal(CHIRP).size == 1024
    img = read_pgm(TEXTURE)
    assert img.shape == (128, 128) and img.max() <= 65535


def test_signal_round_trip_is_exact(tmp_path, rng):
    x = rng.standard_normal(64) * 1e-7
    write_signal(tmp_path / "s.txt", x)
    assert np.array_equal(read_signal(tmp_path / "s.txt"), x)


def test_matrix_round_trip_is_exact(tmp_path, rng):
    m = rng.standard_normal((8, 8))
    write_matrix(tmp_path / "m.txt", m)
    assert np.array_equal(read_matrix(tmp_path / "m.txt"), m)
    assert np.array_equal(read_image(tmp_path / "m.txt"), m)


def test_pgm_round_trip(tmp_path, rng):
    img = rng.integers(0, 65536, size=(16, 16))
    write_pgm(tmp_path / "i.pgm", img)
    assert np.array_equal(read_image(tmp_path / "i.pgm"), img)


@pytest.mark.parametrize("text", ["P5\n1 1\n255\n0\n", "P2\n2 2\n255\n1 2 3\n", "P2\n1 1\n255\n300\n"])
def test_bad_pgm(tmp_path, text):
    (tmp_path / "b.pgm").write_text(text)
    with pytest.raises(FormatError):
        read_pgm(tmp_path / "b.pgm")


def test_bad_signal(tmp_path):
    (tmp_path / "s.txt").write_text("1 2\n")
    with pytest.raises(FormatError):
        read_signal(tmp_path / "s.txt")


def test_coefficient_round_trip_1d(tmp_path, rng):
    s = build_system((8.0, 0.0), 64, 2)
    c = analyze(rng.standard_normal(64), s)
    save_coeffs(tmp_path / "c", c)
    back, meta = load_coeffs(tmp_path / "c")
    assert meta["byte_order"] == "little" and meta["kind"] == "dtcwt1d"
    assert all(np.array_equal(a, b) for a, b in zip(back.levels, c.levels))
    assert np.array_equal(back.residue_b, c.residue_b)


def test_coefficient_blob_layout(tmp_path):
    s = build_system((4.0, 0.0), 16, 1)
    c = analyze(np.zeros(16), s)
    c.levels[0][:] = np.arange(8) + 1j * np.arange(8) / 10
    save_coeffs(tmp_path / "c", c)
    raw = np.frombuffer((tmp_path / "c" / "level_01.bin").read_bytes(), dtype="<f8")
    assert raw[0] == 0 and raw[2] == 1 and raw[3] == pytest.approx(0.1)


def test_coefficient_round_trip_2d(tmp_path, rng):
    s = build_system((4.0, 0.0), 32, 2)
    c = analyze2d(rng.standard_normal((32, 32)), s)
    save_coeffs(tmp_path / "c", c)
    back, _ = load_coeffs(tmp_path / "c")
    assert all(np.array_equal(a, b) for a, b in zip(back.levels, c.levels))
    assert all(np.array_equal(back.residues[t], c.residues[t]) for t in c.residues)


def test_save_replaces_existing_directory(tmp_path, rng):
    s = build_system((4.0, 0.0), 32, 1)
    save_coeffs(tmp_path / "c", analyze(np.zeros(32), s))
    c = analyze(rng.standard_normal(32), s)
    save_coeffs(tmp_path / "c", c)
    assert np.array_equal(load_coeffs(tmp_path / "c")[0].levels[0], c.levels[0])
    assert sorted(p.name for p in tmp_path.iterdir()) == ["c"]


def test_checksum_mismatch(tmp_path, rng):
    s = build_system((4.0, 0.0), 32, 1)
    save_coeffs(tmp_path / "c", analyze(rng.standard_normal(32), s))
    blob = tmp_path / "c" / "level_01.bin"
    data = bytearray(blob.read_bytes())
    data[0] ^= 1
    blob.write_bytes(bytes(data))
    with pytest.raises(MetadataError):
        load_coeffs(tmp_path / "c")


def run(*argv):
    return main([str(a) for a in argv])


def test_cli_analyze_synth_1d(tmp_path):
    assert run("analyze1d", "--input", CHIRP, "--output", tmp_path / "c", "--alpha", 8, "--levels", 4) == 0
    files = sorted(p.name for p in (tmp_path / "c").iterdir())
    assert files == ["level_01.bin", "level_02.bin", "level_03.bin", "level_04.bin",
                     "metadata.json", "residue_a.bin", "residue_b.bin"]
    assert run("synth1d", "--input", tmp_path / "c", "--output", tmp_path / "r.txt") == 0
    assert np.abs(read_signal(tmp_path / "r.txt") - read_signal(CHIRP)).max() < 1e-9


def test_cli_is_deterministic(tmp_path):
    for name in ("a", "b"):
        assert run("analyze1d", "--input", CHIRP, "--output", tmp_path / name, "--levels", 2) == 0
    for f in (tmp_path / "a").iterdir():
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_cli_amp_phase_export(tmp_path):
    assert run("analyze1d", "--input", CHIRP, "--output", tmp_path / "c", "--levels", 2, "--amp-phase") == 0
    rows = np.loadtxt(tmp_path / "c" / "amp_phase.txt")
    assert rows.shape == (512 + 256, 4)
    assert np.all((rows[:, 3] > -1) & (rows[:, 3] <= 1))


def test_cli_missing_file(tmp_path):
    assert run("analyze1d", "--input", tmp_path / "nope.csv", "--output", tmp_path / "c") == 2
    assert not (tmp_path / "c").exists()


def test_cli_non_power_of_two(tmp_path, capsys):
    (tmp_path / "s.csv").write_text("\n".join(["1.0"] * 100))
    assert run("analyze1d", "--input", tmp_path / "s.csv", "--output", tmp_path / "c") == 3
    assert "power of two" in capsys.readouterr().err
    assert not (tmp_path / "c").exists()


def test_cli_parse_error(tmp_path):
    (tmp_path / "s.csv").write_text("1.0\nabc\n")
    assert run("analyze1d", "--input", tmp_path / "s.csv", "--output", tmp_path / "c") == 2


def test_cli_tampered_metadata(tmp_path):
    run("analyze1d", "--input", CHIRP, "--output", tmp_path / "c", "--levels", 2)
    meta_path = tmp_path / "c" / "metadata.json"
    meta = json.loads(meta_path.read_text())
    meta["n"] = 512
    meta_path.write_text(json.dumps(meta))
    assert run("synth1d", "--input", tmp_path / "c", "--output", tmp_path / "r.txt") == 3
    assert not (tmp_path / "r.txt").exists()


def test_cli_residue_only(tmp_path):
    run("analyze1d", "--input", CHIRP, "--output", tmp_path / "c", "--levels", 2)
    meta_path = tmp_path / "c" / "metadata.json"
    meta = json.loads(meta_path.read_text())
    for band in meta["bands"]:
        band["file"] = None
    meta_path.write_text(json.dumps(meta))
    assert run("synth1d", "--input", tmp_path / "c", "--output", tmp_path / "r.txt") == 0
    coeffs, _ = load_coeffs(tmp_path / "c")
    s = build_system((8.0, 0.0), 1024, 2)
    from dtcwt_fht import synthesize
    assert np.abs(read_signal(tmp_path / "r.txt") - synthesize(coeffs, s)).max() < 1e-12
    assert all(not lv.any() for lv in coeffs.levels)


def test_cli_2d_round_trip(tmp_path):
    assert run("analyze2d", "--input", TEXTURE, "--output", tmp_path / "c", "--levels", 3) == 0
    assert run("synth2d", "--input", tmp_path / "c", "--output", tmp_path / "img.txt") == 0
    assert np.abs(read_matrix(tmp_path / "img.txt") - read_pgm(TEXTURE)).max() < 1e-9 * 65535


def test_cli_kind_mismatch(tmp_path):
    run("analyze2d", "--input", TEXTURE, "--output", tmp_path / "c", "--levels", 1)
    assert run("synth1d", "--input", tmp_path / "c", "--output", tmp_path / "r.txt") == 3


def test_cli_wavelet_gen(tmp_path):
    out = tmp_path / "t.txt"
    assert run("wavelet-gen", "--alpha", 8, "--tau", 0, 0.25, 0.5, "--output", out) == 0
    header = out.read_text().splitlines()[0]
    assert header == ("# x w1_tau=0.0 w2_tau=0.0 envelope_tau=0.0 w1_tau=0.25 w2_tau=0.25 envelope_tau=0.25"
                      " w1_tau=0.5 w2_tau=0.5 envelope_tau=0.5")
    table = np.loadtxt(out)
    assert table.shape[1] == 10
    env = table[:, 3::3]
    scale = np.abs(env[:, 0]).max()
    assert np.abs(env - env[:, :1]).max() < 1e-10 * scale


def test_cli_wavelet_gen_single_tau_is_mother(tmp_path):
    out = tmp_path / "t.txt"
    assert run("wavelet-gen", "--alpha", 8, "--tau", 0, "--output", out) == 0
    table = np.loadtxt(out)
    s = build_system((8.0, 0.0), 64, 1)
    assert np.array_equal(table[:, 0], s.x)
    assert np.abs(table[:, 1] - s.psi_a).max() < 1e-15


def test_cli_verify(capsys):
    assert run("verify") == 0
    out = capsys.readouterr().out
    assert "proposition2_sin_reading" in out and "proposition2_cos_reading" in out
    assert run("verify", "--inject-fault") == 1


def test_fine_grid_env(monkeypatch):
    monkeypatch.delenv(FINE_GRID_ENV, raising=False)
    assert resolve_fine_grid() == 4096
    monkeypatch.setenv(FINE_GRID_ENV, "8192")
    assert resolve_fine_grid() == 8192
    assert resolve_fine_grid(2048) == 2048


def test_cli_bad_env_value(monkeypatch):
    monkeypatch.setenv(FINE_GRID_ENV, "1000")
    assert run("verify") == 3


def test_console_script_usage_error():
    proc = subprocess.run([sys.executable, "-m", "dtcwt_fht.cli", "frobnicate"], capture_output=True)
    assert proc.returncode == 2
