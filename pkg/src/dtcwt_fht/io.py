"""Plain-text, PGM and raw-binary codecs with atomic writes.

Coefficient sets are stored as a directory::

    metadata.json       shapes, parameters, byte order, sha256 of every blob
    level_01.bin ...    complex grids as interleaved little-endian float64 (re, im)
    residue_*.bin       real grids as little-endian float64

A level entry whose ``file`` is ``null`` stands for an all-zero band.
"""
from __future__ import annotations

import hashlib
import json
import os
import shutil
import tempfile
from pathlib import Path

import numpy as np

from ._validation import DtcwtError, ShapeError
from .dualtree import DtCoeffs1D
from .dualtree2d import TREES2D, DtCoeffs2D

__all__ = [
    "FormatError",
    "MetadataError",
    "FORMAT_VERSION",
    "read_signal",
    "write_signal",
    "read_pgm",
    "write_pgm",
    "read_matrix",
    "write_matrix",
    "read_image",
    "write_table",
    "save_coeffs",
    "load_coeffs",
    "atomic_write_text",
]

FORMAT_VERSION = 1
_LE = np.dtype("<f8")


class FormatError(DtcwtError):
    """A file could not be parsed."""


class MetadataError(DtcwtError):
    """A coefficient set's metadata disagrees with its blobs or with itself."""


def _fmt(value):
    return repr(float(value))


def atomic_write_text(path, text):
    """Write ``text`` to ``path`` through a temporary file and ``os.replace``."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _data_lines(path):
    try:
        text = Path(path).read_text(encoding="ascii")
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: not an ASCII text file") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def read_signal(path):
    """Single-column text file (``#`` starts a comment) -> 1D float array."""
    values = []
    for lineno, line in _data_lines(path):
        fields = line.replace(",", " ").split()
        if len(fields) != 1:
            raise FormatError(f"{path}:{lineno}: expected one value per line, got {len(fields)}")
        try:
            values.append(float(fields[0]))
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: cannot parse {fields[0]!r} as a number") from exc
    if not values:
        raise FormatError(f"{path}: no samples found")
    return np.array(values)


def write_signal(path, signal):
    atomic_write_text(path, "".join(_fmt(v) + "\n" for v in np.asarray(signal, float)))


def read_matrix(path):
    rows = []
    for lineno, line in _data_lines(path):
        try:
            rows.append([float(v) for v in line.replace(",", " ").split()])
        except ValueError as exc:
            raise FormatError(f"{path}:{lineno}: non-numeric entry") from exc
    if not rows or len({len(r) for r in rows}) != 1:
        raise FormatError(f"{path}: expected a non-empty matrix with equal-length rows")
    return np.array(rows)


def write_matrix(path, matrix):
    matrix = np.asarray(matrix, float)
    atomic_write_text(path, "".join(" ".join(_fmt(v) for v in row) + "\n" for row in matrix))


def read_pgm(path):
    """Plain (P2) PGM with any maxval up to 65535, returned as floats in the stored scale."""
    tokens = []
    for _, line in _data_lines(path):
        tokens.extend(line.split())
    if not tokens or tokens[0] != "P2":
        raise FormatError(f"{path}: not a plain PGM (P2) file")
    try:
        width, height, maxval = (int(t) for t in tokens[1:4])
        pixels = np.array([int(t) for t in tokens[4:]], dtype=float)
    except ValueError as exc:
        raise FormatError(f"{path}: malformed PGM header or pixel data") from exc
    if not 0 < maxval <= 65535:
        raise FormatError(f"{path}: maxval {maxval} outside 1..65535")
    if pixels.size != width * height:
        raise FormatError(f"{path}: expected {width * height} pixels, found {pixels.size}")
    if pixels.size and (pixels.min() < 0 or pixels.max() > maxval):
        raise FormatError(f"{path}: pixel values outside 0..{maxval}")
    return pixels.reshape(height, width)


def write_pgm(path, image, maxval=65535):
    image = np.asarray(image)
    if image.min() < 0 or image.max() > maxval:
        raise FormatError(f"pixel values must lie in 0..{maxval}")
    h, w = image.shape
    body = "\n".join(" ".join(str(int(round(v))) for v in row) for row in image)
    atomic_write_text(path, f"P2\n{w} {h}\n{maxval}\n{body}\n")


def read_image(path):
    """PGM if the file starts with ``P2``, else a plain-text float matrix."""
    with open(path, "rb") as fh:
        magic = fh.read(2)
    return read_pgm(path) if magic == b"P2" else read_matrix(path)


def write_table(path, header, columns):
    """Whitespace-separated table with a ``#``-prefixed header row."""
    columns = [np.asarray(c, float) for c in columns]
    lines = ["# " + " ".join(header)]
    lines += [" ".join(_fmt(c[i]) for c in columns) for i in range(columns[0].size)]
    atomic_write_text(path, "\n".join(lines) + "\n")


def _encode(array):
    array = np.asarray(array)
    if np.iscomplexobj(array):
        flat = np.empty(array.size * 2, dtype=_LE)
        flat[0::2] = array.real.ravel()
        flat[1::2] = array.imag.ravel()
    else:
        flat = array.astype(_LE).ravel()
    return flat.tobytes()


def _decode(blob, shape, is_complex):
    flat = np.frombuffer(blob, dtype=_LE)
    count = int(np.prod(shape)) * (2 if is_complex else 1)
    if flat.size != count:
        raise MetadataError(f"blob holds {flat.size} values, metadata implies {count}")
    if is_complex:
        return (flat[0::2] + 1j * flat[1::2]).reshape(shape)
    return flat.reshape(shape).copy()


def _entries(coeffs):
    """(name, array) pairs for the level bands and the residues."""
    if isinstance(coeffs, DtCoeffs1D):
        residues = [("residue_a", coeffs.residue_a), ("residue_b", coeffs.residue_b)]
    else:
        residues = [(f"residue_{t}", coeffs.residues[t]) for t in TREES2D]
    levels = [(f"level_{i:02d}", c) for i, c in enumerate(coeffs.levels, start=1)]
    return levels, residues


def save_coeffs(directory, coeffs, extra=None, attachments=None):
    """Write a coefficient set atomically: the directory appears complete or not at all.

    ``extra`` is stored under ``"extra"`` in the metadata; ``attachments`` maps
    file names to text written alongside the blobs.
    """
    directory = Path(directory)
    kind = "dtcwt1d" if isinstance(coeffs, DtCoeffs1D) else "dtcwt2d"
    levels, residues = _entries(coeffs)
    parent = directory.parent
    parent.mkdir(parents=True, exist_ok=True)
    tmp = Path(tempfile.mkdtemp(dir=parent, prefix=f".{directory.name}."))
    os.chmod(tmp, 0o755)
    try:
        def blob(name, array, is_complex):
            data = _encode(array.astype(complex) if is_complex else array)
            (tmp / f"{name}.bin").write_bytes(data)
            return {"name": name, "file": f"{name}.bin", "shape": list(array.shape),
                    "complex": is_complex, "sha256": hashlib.sha256(data).hexdigest()}

        meta = {
            "format": "dtcwt-fht-coefficients",
            "version": FORMAT_VERSION,
            "kind": kind,
            "alpha": float(coeffs.alpha),
            "tau": float(coeffs.tau),
            "basis": coeffs.basis,
            "n": int(coeffs.n),
            "levels": len(levels),
            "byte_order": "little",
            "dtype": "float64",
            "bands": [blob(name, a, True) for name, a in levels],
            "residues": [blob(name, a, False) for name, a in residues],
        }
        if extra:
            meta["extra"] = extra
        for name, text in (attachments or {}).items():
            (tmp / name).write_text(text)
        (tmp / "metadata.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
        if directory.exists():
            old = Path(tempfile.mkdtemp(dir=parent, prefix=f".{directory.name}.old."))
            os.replace(directory, old / "prev")
            os.replace(tmp, directory)
            shutil.rmtree(old)
        else:
            os.replace(tmp, directory)
    except BaseException:
        shutil.rmtree(tmp, ignore_errors=True)
        raise
    return directory


def _read_blob(directory, entry, is_complex):
    try:
        shape = tuple(int(s) for s in entry["shape"])
        fname = entry["file"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MetadataError(f"malformed entry {entry!r}") from exc
    if fname is None:
        return np.zeros(shape, dtype=complex if is_complex else float)
    data = (directory / fname).read_bytes()
    digest = hashlib.sha256(data).hexdigest()
    if "sha256" in entry and entry["sha256"] != digest:
        raise MetadataError(f"checksum mismatch for {fname}")
    return _decode(data, shape, is_complex)


def load_coeffs(directory):
    """Read a coefficient set written by :func:`save_coeffs`.

    Raises FileNotFoundError for missing files, FormatError for unparseable
    metadata, and MetadataError for inconsistent shapes or checksums.
    """
    directory = Path(directory)
    text = (directory / "metadata.json").read_text()
    try:
        meta = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{directory / 'metadata.json'}: {exc}") from exc
    if not isinstance(meta, dict) or meta.get("format") != "dtcwt-fht-coefficients":
        raise FormatError(f"{directory}: not a coefficient set")
    if meta.get("byte_order") != "little" or meta.get("dtype") != "float64":
        raise MetadataError("only little-endian float64 blobs are supported")
    try:
        n, depth, kind = int(meta["n"]), int(meta["levels"]), meta["kind"]
        alpha, tau, basis = float(meta["alpha"]), float(meta["tau"]), meta["basis"]
        bands = meta["bands"]
        residues = meta["residues"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MetadataError(f"incomplete metadata: {exc}") from exc
    if len(bands) != depth:
        raise MetadataError(f"metadata lists {len(bands)} bands for {depth} levels")
    levels = [_read_blob(directory, e, True) for e in bands]
    try:
        if kind == "dtcwt1d":
            if len(residues) != 2:
                raise MetadataError("a 1D set needs two residues")
            ra, rb = (_read_blob(directory, e, False) for e in residues)
            return DtCoeffs1D(levels, ra, rb, alpha, tau, basis, n), meta
        if kind == "dtcwt2d":
            if len(residues) != 4:
                raise MetadataError("a 2D set needs four residues")
            res = {t: _read_blob(directory, e, False) for t, e in zip(TREES2D, residues)}
            return DtCoeffs2D(levels, res, alpha, tau, basis, n), meta
    except ShapeError as exc:
        raise MetadataError(str(exc)) from exc
    raise MetadataError(f"unknown coefficient kind {kind!r}")
