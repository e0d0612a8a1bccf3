"""Dense matrix files: Matrix Market ``array real general`` and plain CSV."""
import io
from importlib import resources
from pathlib import Path

import numpy as np

from .errors import ParseError, UnsupportedFormatError

MM_BANNER = "%%MatrixMarket"


def _parse_float(tok, lineno):
    try:
        return float(tok)
    except ValueError:
        raise ParseError(f"not a real number: {tok!r}", line=lineno) from None


def read_matrix_market(text):
    lines = text.splitlines()
    if not lines or not lines[0].startswith(MM_BANNER):
        raise ParseError("missing %%MatrixMarket banner", line=1)
    head = lines[0].split()
    if len(head) != 5:
        raise ParseError("banner must read '%%MatrixMarket matrix array <field> <symmetry>'", line=1)
    obj, fmt, fld, sym = (h.lower() for h in head[1:])
    if obj != "matrix":
        raise UnsupportedFormatError(f"object {obj!r} is not supported")
    if fmt != "array":
        raise UnsupportedFormatError(f"format {fmt!r} is not supported (dense 'array' only)")
    if fld not in ("real", "integer", "double"):
        raise UnsupportedFormatError(f"field {fld!r} is not supported (real only)")
    if sym != "general":
        raise UnsupportedFormatError(f"symmetry {sym!r} is not supported")

    body = [(i, ln.strip()) for i, ln in enumerate(lines[1:], 2)]
    body = [(i, ln) for i, ln in body if ln and not ln.startswith("%")]
    if not body:
        raise ParseError("missing size line", line=len(lines) + 1)
    lineno, size = body[0]
    parts = size.split()
    if len(parts) != 2 or not all(p.isdigit() for p in parts):
        raise ParseError(f"size line must hold two integers, got {size!r}", line=lineno)
    rows, cols = int(parts[0]), int(parts[1])
    if rows < 1 or cols < 1:
        raise ParseError("matrix dimensions must be positive", line=lineno)
    vals = []
    for lineno, ln in body[1:]:
        toks = ln.split()
        if len(toks) != 1:
            raise ParseError(f"expected one value per line, got {len(toks)}", line=lineno)
        vals.append(_parse_float(toks[0], lineno))
    if len(vals) != rows * cols:
        raise ParseError(
            f"expected {rows * cols} entries, found {len(vals)}", line=len(lines)
        )
    return np.ascontiguousarray(np.array(vals, dtype=np.float64).reshape((rows, cols), order="F"))


def read_csv(text):
    rows = []
    width = None
    for lineno, ln in enumerate(text.splitlines(), 1):
        s = ln.strip()
        if not s or s.startswith("#"):
            continue
        toks = [t.strip() for t in s.split(",")]
        if width is None:
            width = len(toks)
        elif len(toks) != width:
            raise ParseError(f"ragged row: {len(toks)} fields, expected {width}", line=lineno)
        rows.append([_parse_float(t, lineno) for t in toks])
    if not rows:
        raise ParseError("no data rows", line=1)
    return np.array(rows, dtype=np.float64)


def parse_matrix(path):
    """Read a dense matrix from a Matrix Market array file or a CSV file.

    The format is sniffed from the first line (``%%MatrixMarket`` banner or
    not), not from the file extension.
    """
    text = Path(path).read_text()
    if text.lstrip().startswith(MM_BANNER):
        return read_matrix_market(text.lstrip())
    return read_csv(text)


def format_matrix_market(a, comment=None):
    a = np.atleast_2d(np.asarray(a, dtype=np.float64))
    if a.ndim != 2:
        raise ValueError("only 2-D arrays can be written")
    buf = io.StringIO()
    buf.write("%%MatrixMarket matrix array real general\n")
    if comment:
        for ln in comment.splitlines():
            buf.write(f"% {ln}\n")
    buf.write(f"{a.shape[0]} {a.shape[1]}\n")
    # repr gives the shortest string that round-trips exactly
    for v in a.ravel(order="F"):
        buf.write(f"{float(v)!r}\n")
    return buf.getvalue()


def write_matrix_market(path, a, comment=None):
    Path(path).write_text(format_matrix_market(a, comment))


FIXTURES = ("ex51", "ex52", "ex52_v", "ex53", "ex81", "ex81_y")


def fixture_path(name):
    """Path of a bundled example matrix (``ex53`` or ``ex53.mtx``)."""
    stem = name[:-4] if name.endswith(".mtx") else name
    if stem not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    return resources.files("perron_eig") / "data" / f"{stem}.mtx"


def load_fixture(name):
    return read_matrix_market(fixture_path(name).read_text())
