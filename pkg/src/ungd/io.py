"""Signal and table file formats.

Signal text files hold one decimal sample per line. Lines starting with
``#`` are comments; an optional ``# fs=<rate>`` line records the original
sampling rate, which is informational only. Raw files are headerless
little-endian int16, single channel.

Tables are tab-separated with one ``#``-prefixed header row and values
written to 12 significant digits.
"""

import math
from pathlib import Path
import re
import sys

import numpy as np

RAW_SUFFIXES = {".raw", ".bin", ".dat", ".i16"}
_FS_RE = re.compile(r"^#\s*fs\s*=\s*(\S+)\s*$")


class SignalFormatError(ValueError):
    """A signal file could not be parsed."""


def format_value(v):
    return f"{float(v):.12g}"


def read_signal(path):
    """Read a text signal file; returns ``(samples, fs)`` with fs possibly None."""
    fs = None
    values = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            text = line.strip()
            if not text:
                continue
            if text.startswith("#"):
                m = _FS_RE.match(text)
                if m:
                    try:
                        fs = float(m.group(1))
                    except ValueError:
                        raise SignalFormatError(f"{path}:{lineno}: bad sampling rate {m.group(1)!r}")
                continue
            try:
                v = float(text)
            except ValueError:
                raise SignalFormatError(f"{path}:{lineno}: not a number: {text!r}") from None
            if not math.isfinite(v):
                raise SignalFormatError(f"{path}:{lineno}: non-finite sample {text!r}")
            values.append(v)
    if not values:
        raise SignalFormatError(f"{path}: no samples")
    return np.array(values), fs


def write_signal(path, x, fs=None):
    x = np.asarray(x, dtype=float)
    lines = []
    if fs is not None:
        lines.append(f"# fs={format_value(fs)}")
    lines.extend(format_value(v) for v in x)
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def read_raw_int16(path, demean=True):
    """Headerless little-endian int16 samples as floats, mean removed by default."""
    raw = Path(path).read_bytes()
    if len(raw) % 2:
        raise SignalFormatError(f"{path}: odd byte length {len(raw)} for int16 samples")
    if not raw:
        raise SignalFormatError(f"{path}: no samples")
    x = np.frombuffer(raw, dtype="<i2").astype(float)
    return x - x.mean() if demean else x


def write_raw_int16(path, x):
    Path(path).write_bytes(np.asarray(np.round(x), dtype="<i2").tobytes())


def load_signal(path, fmt="auto", demean=None):
    """Load either format. ``fmt`` is "text", "raw16" or "auto" (by suffix).

    ``demean`` defaults to True for raw files and False for text files.
    Returns ``(samples, fs)``.
    """
    if fmt == "auto":
        fmt = "raw16" if Path(path).suffix.lower() in RAW_SUFFIXES else "text"
    if fmt == "raw16":
        return read_raw_int16(path, demean=True if demean is None else demean), None
    if fmt != "text":
        raise ValueError(f"unknown signal format {fmt!r}")
    x, fs = read_signal(path)
    if demean:
        x = x - x.mean()
    return x, fs


def write_table(path, columns, rows):
    """Write a TSV table; ``rows`` is a 2-D array-like with len(columns) columns."""
    rows = np.asarray(rows, dtype=float)
    if rows.ndim == 1:
        rows = rows[:, None]
    if rows.shape[1] != len(columns):
        raise ValueError(f"{len(columns)} columns declared, {rows.shape[1]} given")
    out = ["#" + "\t".join(columns)]
    out.extend("\t".join(format_value(v) for v in row) for row in rows)
    text = "\n".join(out) + "\n"
    if path == "-" or path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def read_table(path):
    """Inverse of :func:`write_table`; returns ``(columns, array)``."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        if not header.startswith("#"):
            raise SignalFormatError(f"{path}: missing '#' header row")
        columns = header[1:].rstrip("\n").split("\t")
        data = np.loadtxt(fh, delimiter="\t", ndmin=2)
    return columns, data
