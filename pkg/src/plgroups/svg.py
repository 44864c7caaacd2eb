"""Deterministic SVG figures: map graphs and nested orbital bars.

The canvas is a fixed 1000x1000 viewport. Coordinates are exact rationals
until the last moment, when they are rounded half-up to six decimals, so the
same input always gives the same bytes.
"""

from .plmap import orbital_intervals
from .rat import Rat, as_rat, format_rat

SIZE = 1000
MARGIN = 50
_PALETTE = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf"]


def _num(v):
    """Exact rational -> fixed six-decimal string."""
    q = as_rat(v)
    num, den = int(q.numerator), int(q.denominator)
    sign = "-" if num < 0 else ""
    scaled = (abs(num) * 10 ** 6 * 2 + den) // (2 * den)  # round half up
    whole, frac = divmod(scaled, 10 ** 6)
    return f"{sign}{whole}.{frac:06d}"


def _sx(x):
    return MARGIN + (SIZE - 2 * MARGIN) * as_rat(x)


def _sy(y):
    return SIZE - MARGIN - (SIZE - 2 * MARGIN) * as_rat(y)


def _doc(body, title):
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">\n'
        f"<title>{_escape(title)}</title>\n"
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>\n'
    )
    return head + "".join(body) + "</svg>\n"


def _escape(s):
    return str(s).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _frame():
    lo, hi = MARGIN, SIZE - MARGIN
    return (
        f'<rect x="{lo}" y="{lo}" width="{hi - lo}" height="{hi - lo}" '
        f'fill="none" stroke="#999999" stroke-width="1"/>\n'
    )


def map_polyline(f, color="#1f77b4", label=None):
    pts = " ".join(f"{_num(_sx(x))},{_num(_sy(y))}" for x, y in f.nodes)
    out = f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"'
    if label:
        out += f' data-name="{_escape(label)}"'
    return out + "/>\n"


def plot_maps(named_maps, title="maps"):
    """Graphs of (name, map) pairs on the unit square."""
    body = [_frame()]
    for i, (name, f) in enumerate(named_maps):
        color = _PALETTE[i % len(_PALETTE)]
        body.append(map_polyline(f, color, name))
        body.append(
            f'<text x="{MARGIN + 10}" y="{MARGIN + 20 + 18 * i}" font-size="14" '
            f'fill="{color}">{_escape(name)}</text>\n'
        )
    return _doc(body, title)


def plot_map(f, name="f"):
    return plot_maps([(name, f)], name)


def _bar(A, row, rows, color, label):
    height = Rat(SIZE - 2 * MARGIN, max(rows, 1))
    y = SIZE - MARGIN - height * (row + 1)
    x0, x1 = _sx(A.left), _sx(A.right)
    return (
        f'<rect x="{_num(x0)}" y="{_num(y + height / 8)}" width="{_num(x1 - x0)}" '
        f'height="{_num(height * 3 / 4)}" fill="{color}" fill-opacity="0.35" stroke="{color}" '
        f'data-interval="({format_rat(A.left)},{format_rat(A.right)})"/>\n'
        f'<text x="{_num(x0 + 4)}" y="{_num(y + height / 2)}" font-size="12">{_escape(label)}</text>\n'
    )


def plot_tower(T, title="tower"):
    """Levels as horizontal bars, innermost at the bottom."""
    body = [_frame()]
    n = len(T)
    for i, lv in enumerate(T):
        A = lv.orbital
        body.append(_bar(A, i, n, _PALETTE[i % len(_PALETTE)],
                         f"{i + 1}: ({format_rat(A.left)}, {format_rat(A.right)})"))
    return _doc(body, title)


def plot_group(G, title="group"):
    """Generator graphs, with each generator's orbitals drawn as a strip below."""
    body = [_frame()]
    for i, (name, f) in enumerate(G):
        color = _PALETTE[i % len(_PALETTE)]
        body.append(map_polyline(f, color, name))
        y = SIZE - MARGIN + 8 + 10 * i
        for A in orbital_intervals(f):
            body.append(
                f'<line x1="{_num(_sx(A.left))}" y1="{y}" x2="{_num(_sx(A.right))}" y2="{y}" '
                f'stroke="{color}" stroke-width="4"/>\n'
            )
        body.append(
            f'<text x="{MARGIN + 10}" y="{MARGIN + 20 + 18 * i}" font-size="14" '
            f'fill="{color}">{_escape(name)}</text>\n'
        )
    return _doc(body, title)
