"""Edge-list text files: tab-separated ids, '#' comment lines."""

import hashlib

import numpy as np

from .errors import EmptyInput, MalformedLine

_BLOCK = 1 << 20


def parse_edge_list(stream):
    """Read whitespace-separated id pairs; return ``(edges, n)`` with n = 1 + max id."""
    pairs = []
    append = pairs.append
    for line_no, line in enumerate(stream, start=1):
        s = line.strip()
        if not s or s.startswith("#"):
            continue
        parts = s.split()
        if len(parts) != 2:
            raise MalformedLine(line_no, s)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise MalformedLine(line_no, s) from None
        if u < 0 or v < 0:
            raise MalformedLine(line_no, s)
        append((u, v))
    if not pairs:
        raise EmptyInput("no edges found")
    edges = np.array(pairs, dtype=np.uint64)
    return edges, int(edges.max()) + 1


def read_edge_file(path):
    with open(path) as fh:
        return parse_edge_list(fh)


def read_header(path):
    """``key: value`` pairs from the leading comment block."""
    header = {}
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            body = line[1:].strip()
            if ":" in body:
                key, value = body.split(":", 1)
                header[key.strip()] = value.strip()
    return header


def write_edge_list(path, edges, header=()):
    """Write ``edges`` as ``u<TAB>v`` lines after ``# key: value`` header lines."""
    edges = np.asarray(edges).reshape(-1, 2)
    with open(path, "w", newline="\n") as fh:
        for key, value in header:
            fh.write(f"# {key}: {value}\n")
        for lo in range(0, len(edges), _BLOCK):
            block = edges[lo:lo + _BLOCK].tolist()
            fh.write("".join(f"{u}\t{v}\n" for u, v in block))


def file_sha256(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def write_csv(path, columns, rows):
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def _fmt(x):
    if x is None:
        return ""
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def write_pgm(path, grid):
    """Binary PGM of a count grid, log-scaled to 0..255 (dark = dense)."""
    grid = np.asarray(grid, dtype=np.float64)
    scaled = np.log1p(grid)
    top = scaled.max()
    if top > 0:
        scaled = scaled / top
    pixels = (255 - np.round(scaled * 255)).astype(np.uint8)
    h, w = pixels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode())
        fh.write(pixels.tobytes())
