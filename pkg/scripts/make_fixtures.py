"""Regenerate the bundled ``.knot`` fixtures in ``src/ropelength/data``.

Run from the repository root::

    python3 scripts/make_fixtures.py
"""
from __future__ import annotations

import math
from pathlib import Path

import numpy as np

DATA = Path(__file__).resolve().parents[1] / "src" / "ropelength" / "data"


def trefoil(n: int = 64) -> np.ndarray:
    u = 2 * np.pi * np.arange(n) / n
    return np.column_stack([(2 + np.cos(3 * u)) * np.cos(2 * u),
                            (2 + np.cos(3 * u)) * np.sin(2 * u),
                            np.sin(3 * u)])


def figure_eight(n: int = 32) -> np.ndarray:
    u = 2 * np.pi * np.arange(n) / n
    return np.column_stack([(2 + np.cos(2 * u)) * np.cos(3 * u),
                            (2 + np.cos(2 * u)) * np.sin(3 * u),
                            np.sin(4 * u)])


def convex_polygon(n: int = 20) -> np.ndarray:
    # an ellipse, so the polygon is convex but not regular
    u = 2 * np.pi * np.arange(n) / n
    return np.column_stack([3 * np.cos(u), 2 * np.sin(u), np.zeros(n)])


def unit_square() -> np.ndarray:
    return np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0]], dtype=float)


def simple_quadrisecant_unknot(per_hump: int = 8) -> np.ndarray:
    """A planar-ish wave crossing the x-axis four times, closed by a wide return.

    The wave ``y = 2 sin(pi x / 3)``, ``z = 0.6 sin(2 pi x / 3)`` for x in
    [0, 9] crosses the x-axis at x = 0, 3, 6, 9 in order, and the return arc
    stays far from the axis, so the x-axis is a quadrisecant whose points
    appear along the knot in the same order as along the line.
    """
    # offset the samples so no vertex lies on the x-axis
    x = np.linspace(-0.7, 9.7, 4 * per_hump + 1)
    wave = np.column_stack([x, 2 * np.sin(np.pi * x / 3), 0.6 * np.sin(2 * np.pi * x / 3)])
    end, start = wave[-1], wave[0]
    # the return arc runs at height z = 3, away from the axis
    ret = [[end[0] + 3, end[1], 3.0], [end[0] + 3, -14.0, 3.0],
           [start[0] - 3, -14.0, 3.0], [start[0] - 3, start[1], 3.0]]
    return np.vstack([wave, ret])


FIXTURES = {
    "trefoil64": (trefoil, "64-vertex trefoil, (2+cos 3u)(cos 2u, sin 2u, 0) + (0, 0, sin 3u)"),
    "figure_eight32": (figure_eight, "32-vertex figure-eight, ((2+cos 2u) cos 3u, (2+cos 2u) sin 3u, sin 4u)"),
    "convex20": (convex_polygon, "convex planar 20-gon inscribed in the ellipse x^2/9 + y^2/4 = 1"),
    "square": (unit_square, "unit square"),
    "simple_unknot": (simple_quadrisecant_unknot, "unknot whose x-axis is a simple quadrisecant"),
}


def write_knot(path: Path, vertices: np.ndarray, comment: str) -> None:
    lines = [f"# {comment}", f"# {len(vertices)} vertices"]
    lines += [" ".join(repr(float(c)) for c in row) for row in vertices]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def main() -> None:
    DATA.mkdir(parents=True, exist_ok=True)
    for name, (make, comment) in FIXTURES.items():
        write_knot(DATA / f"{name}.knot", make(), comment)
        print(f"wrote {name}.knot")


if __name__ == "__main__":
    main()
