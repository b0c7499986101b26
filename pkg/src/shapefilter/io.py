"""On-disk formats: binary PGM masks, CSV tables, manifests.

Masks travel as one binary PGM (P5, maxval 255) per frame with zero-padded
frame indices; gray values above 127 are foreground.  All writers are
atomic (temp file + rename) and deterministic, so identical runs produce
byte-identical outputs.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .contours import Contour
from .errors import DimensionMismatch, EmptyInput

FORMAT_VERSIONS = {
    "manifest": 1,
    "mask_pgm": 1,
    "contours_csv": 1,
    "weights_csv": 1,
    "embedding_csv": 1,
    "flags_csv": 1,
    "metrics_json": 1,
}

FRAME_PATTERN = "frame_{:04d}.pgm"


def _atomic_write_bytes(path: Path, payload: bytes) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp_", suffix=path.suffix)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _atomic_write_text(path: Path, text: str) -> None:
    _atomic_write_bytes(path, text.encode("utf-8"))


# --- PGM masks ---------------------------------------------------------------

def write_pgm(path, mask: np.ndarray) -> None:
    mask = np.asarray(mask).astype(bool)
    if mask.ndim != 2:
        raise ValueError(f"mask must be 2D, got {mask.shape}")
    h, w = mask.shape
    header = f"P5\n{w} {h}\n255\n".encode("ascii")
    _atomic_write_bytes(Path(path), header + (mask.astype(np.uint8) * 255).tobytes())


def read_pgm(path) -> np.ndarray:
    """Read a binary PGM, thresholding gray > 127 to foreground."""
    data = Path(path).read_bytes()
    if not data.startswith(b"P5"):
        raise ValueError(f"{path}: not a binary PGM (P5) file")
    fields: list[bytes] = []
    pos = 2
    while len(fields) < 3:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos] != 0x0A:
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        fields.append(data[start:pos])
    pos += 1  # single whitespace after maxval
    w, h, maxval = (int(f) for f in fields)
    if maxval > 255:
        raise ValueError(f"{path}: 16-bit PGM not supported")
    pixels = np.frombuffer(data, dtype=np.uint8, count=w * h, offset=pos)
    return (pixels.reshape(h, w) > 127)


def read_mask_dir(directory) -> np.ndarray:
    """Load all PGM frames of a directory (sorted by name) as a stack."""
    directory = Path(directory)
    if not directory.is_dir():
        raise EmptyInput(f"input directory not found: {directory}")
    paths = sorted(directory.glob("*.pgm"))
    if not paths:
        raise EmptyInput(f"no .pgm frames in {directory}")
    frames = [read_pgm(p) for p in paths]
    shape = frames[0].shape
    if any(f.shape != shape for f in frames):
        raise DimensionMismatch(f"frames in {directory} disagree in size")
    return np.stack(frames, axis=0)


def write_mask_dir(directory, stack: np.ndarray) -> list[Path]:
    directory = Path(directory)
    out = []
    for t, frame in enumerate(stack):
        path = directory / FRAME_PATTERN.format(t)
        write_pgm(path, frame)
        out.append(path)
    return out


# --- CSV tables --------------------------------------------------------------

def _fmt(value: float) -> str:
    return repr(float(value))


def write_contours_csv(path, contours: list[Contour]) -> None:
    lines = ["t,i,x,y"]
    for t, contour in enumerate(contours):
        for i, (x, y) in enumerate(contour.points):
            lines.append(f"{t},{i},{_fmt(x)},{_fmt(y)}")
    _atomic_write_text(Path(path), "\n".join(lines) + "\n")


def read_contours_csv(path) -> list[Contour]:
    path = Path(path)
    if not path.is_file():
        raise EmptyInput(f"contours file not found: {path}")
    by_frame: dict[int, list[tuple[int, float, float]]] = {}
    with path.open() as fh:
        header = fh.readline().strip()
        if header != "t,i,x,y":
            raise ValueError(f"{path}: expected header 't,i,x,y', got {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            t_s, i_s, x_s, y_s = line.split(",")
            by_frame.setdefault(int(t_s), []).append(
                (int(i_s), float(x_s), float(y_s))
            )
    if not by_frame:
        raise EmptyInput(f"{path}: no contour rows")
    contours = []
    for t in sorted(by_frame):
        rows = sorted(by_frame[t])
        contours.append(Contour(np.array([[x, y] for _, x, y in rows])))
    return contours


def write_weights_csv(path, weights) -> None:
    lines = ["t,w"]
    lines += [f"{t},{_fmt(w)}" for t, w in enumerate(np.asarray(weights).reshape(-1))]
    _atomic_write_text(Path(path), "\n".join(lines) + "\n")


def read_weights_csv(path) -> np.ndarray:
    rows = _read_two_column_csv(Path(path), "t,w")
    return np.array([v for _, v in rows])


def read_flags_csv(path) -> np.ndarray:
    path = Path(path)
    if not path.is_file():
        raise EmptyInput(f"flags file not found: {path}")
    rows = _read_two_column_csv(path, "t,flag")
    return np.array([bool(int(v)) for _, v in rows])


def _read_two_column_csv(path: Path, expected_header: str):
    with path.open() as fh:
        header = fh.readline().strip()
        if header != expected_header:
            raise ValueError(
                f"{path}: expected header {expected_header!r}, got {header!r}"
            )
        rows = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            t_s, v_s = line.split(",")
            rows.append((int(t_s), float(v_s)))
    rows.sort()
    return rows


def write_embedding_csv(path, coords: np.ndarray, times=None) -> None:
    coords = np.asarray(coords)
    if times is None:
        times = np.arange(coords.shape[0])
    lines = ["t,x,y"]
    lines += [
        f"{int(t)},{_fmt(x)},{_fmt(y)}" for t, (x, y) in zip(times, coords)
    ]
    _atomic_write_text(Path(path), "\n".join(lines) + "\n")


def read_embedding_csv(path) -> np.ndarray:
    path = Path(path)
    with path.open() as fh:
        header = fh.readline().strip()
        if header != "t,x,y":
            raise ValueError(f"{path}: expected header 't,x,y', got {header!r}")
        rows = []
        for line in fh:
            line = line.strip()
            if not line:
                continue
            t_s, x_s, y_s = line.split(",")
            rows.append((int(t_s), float(x_s), float(y_s)))
    rows.sort()
    return np.array([[x, y] for _, x, y in rows])


# --- JSON --------------------------------------------------------------------

def write_json(path, payload: dict) -> None:
    _atomic_write_text(Path(path), json.dumps(payload, indent=2, sort_keys=True) + "\n")


def read_json(path) -> dict:
    path = Path(path)
    if not path.is_file():
        raise EmptyInput(f"file not found: {path}")
    return json.loads(path.read_text())


def build_manifest(command: str, config: dict, version: str) -> dict:
    """Run manifest: full resolved config plus tool and format versions.

    Output paths are intentionally excluded so re-running into a different
    directory reproduces every artifact byte for byte, manifest included.
    """
    return {
        "tool": "shapefilter",
        "version": version,
        "formats": FORMAT_VERSIONS,
        "command": command,
        "config": config,
    }
