"""Dot-plot images of relation matrices and CSV output of gamma sweeps."""

import io

import numpy as np

from .errors import DomainError
from .partial_order import Relation, Source

MAX_RENDER_N = 12

BLACK = (0, 0, 0)
RED = (255, 0, 0)
WHITE = (255, 255, 255)


def relation_image(R):
    """``(N, N, 3)`` uint8 array; pixel ``[i - 1, j - 1]`` shows ``rel(i, j)`` for ``i > j``.

    Black marks PO-determined pairs, red DR-added pairs, white everything else.
    """
    if R.n > MAX_RENDER_N:
        raise DomainError(f"refusing to render n={R.n} > {MAX_RENDER_N}")
    N = R.N
    img = np.full((N, N, 3), 255, dtype=np.uint8)
    mask = np.tri(N, k=-1, dtype=bool)
    det = R.values() != Relation.UNKNOWN
    dr = R.sources() == Source.DR
    po_px = np.zeros((N, N), dtype=bool)
    dr_px = np.zeros((N, N), dtype=bool)
    po_px[mask] = det & ~dr
    dr_px[mask] = det & dr
    img[po_px] = BLACK
    img[dr_px] = RED
    return img


def to_ppm(img):
    """Binary PPM (P6) bytes of an RGB uint8 image."""
    h, w, _ = img.shape
    return f"P6\n{w} {h}\n255\n".encode("ascii") + np.ascontiguousarray(img, dtype=np.uint8).tobytes()


def read_ppm(data):
    """Parse P6 bytes written by :func:`to_ppm` back to an array."""
    parts = data.split(b"\n", 3)
    if len(parts) != 4 or parts[0] != b"P6" or parts[2] != b"255":
        raise ValueError("not a P6 image written by to_ppm")
    w, h = (int(v) for v in parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(h, w, 3)


def sweep_csv(rows):
    """CSV text with header ``x,gamma_po,gamma_po_dr``; gammas to six decimals.

    ``rows`` are ``(x, gamma_po, gamma_po_dr)``; a ``None`` gamma leaves the cell empty.
    """
    out = io.StringIO()
    out.write("x,gamma_po,gamma_po_dr\n")
    for x, g_po, g_dr in rows:
        cells = [_fmt_x(x)] + ["" if g is None else f"{g:.6f}" for g in (g_po, g_dr)]
        out.write(",".join(cells) + "\n")
    return out.getvalue()


def _fmt_x(x):
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))
