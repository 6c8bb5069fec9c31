"""Zero-curve extraction on rectangular grids and segment intersections.

Minimal marching squares: each grid cell with mixed corner signs yields
one or two line segments by linear interpolation along its edges; saddle
cells are disambiguated by the cell-centre average.  Segments are merged
into polylines by shared endpoints.  Intersections between two segment
families use the standard parametric test.
"""

from __future__ import annotations

import numpy as np

Point = tuple[float, float]
Segment = tuple[Point, Point]


def extract_segments(field: np.ndarray, xs: np.ndarray, ys: np.ndarray) -> list[Segment]:
    """Line segments approximating the zero set of field[j, i] = F(xs[i], ys[j])."""
    pos = field > 0
    # visit only cells whose corners disagree in sign
    corner_sum = (
        pos[:-1, :-1].astype(np.int8)
        + pos[:-1, 1:]
        + pos[1:, :-1]
        + pos[1:, 1:]
    )
    mixed = (corner_sum > 0) & (corner_sum < 4)
    segments: list[Segment] = []
    for j, i in np.argwhere(mixed):
        f00 = field[j, i]
        f10 = field[j, i + 1]
        f01 = field[j + 1, i]
        f11 = field[j + 1, i + 1]
        x0, x1 = xs[i], xs[i + 1]
        y0, y1 = ys[j], ys[j + 1]
        pts = {}
        if pos[j, i] != pos[j, i + 1]:
            t = f00 / (f00 - f10)
            pts["b"] = (x0 + t * (x1 - x0), y0)
        if pos[j, i + 1] != pos[j + 1, i + 1]:
            t = f10 / (f10 - f11)
            pts["r"] = (x1, y0 + t * (y1 - y0))
        if pos[j + 1, i] != pos[j + 1, i + 1]:
            t = f01 / (f01 - f11)
            pts["t"] = (x0 + t * (x1 - x0), y1)
        if pos[j, i] != pos[j + 1, i]:
            t = f00 / (f00 - f01)
            pts["l"] = (x0, y0 + t * (y1 - y0))
        keys = list(pts)
        if len(keys) == 2:
            segments.append((pts[keys[0]], pts[keys[1]]))
        elif len(keys) == 4:
            centre_pos = (f00 + f10 + f01 + f11) > 0
            if centre_pos == bool(pos[j, i]):
                segments.append((pts["b"], pts["r"]))
                segments.append((pts["t"], pts["l"]))
            else:
                segments.append((pts["b"], pts["l"]))
                segments.append((pts["t"], pts["r"]))
    return segments


def merge_polylines(segments: list[Segment], snap: float) -> list[np.ndarray]:
    """Chain segments sharing endpoints (within snap) into polylines."""
    if not segments:
        return []

    def key(p: Point) -> tuple[int, int]:
        return (int(round(p[0] / snap)), int(round(p[1] / snap)))

    adjacency: dict[tuple[int, int], list[int]] = {}
    for idx, (a, b) in enumerate(segments):
        adjacency.setdefault(key(a), []).append(idx)
        adjacency.setdefault(key(b), []).append(idx)

    used = [False] * len(segments)
    polylines = []

    def walk(start_idx: int, start_point: Point) -> list[Point]:
        chain = [start_point]
        idx, point = start_idx, start_point
        while True:
            used[idx] = True
            a, b = segments[idx]
            nxt = b if key(a) == key(point) else a
            chain.append(nxt)
            candidates = [m for m in adjacency.get(key(nxt), []) if not used[m]]
            if not candidates:
                return chain
            idx, point = candidates[0], nxt

    # open chains first (endpoints of degree 1), then leftover loops
    degree_one = [k for k, lst in adjacency.items() if len(lst) == 1]
    for k in degree_one:
        for idx in adjacency[k]:
            if not used[idx]:
                a, b = segments[idx]
                start = a if key(a) == k else b
                polylines.append(np.array(walk(idx, start)))
    for idx in range(len(segments)):
        if not used[idx]:
            polylines.append(np.array(walk(idx, segments[idx][0])))
    return polylines


def intersect_segments(seg_a: list[Segment], seg_b: list[Segment]) -> list[Point]:
    """Intersection points between two segment families."""
    points: list[Point] = []
    if not seg_a or not seg_b:
        return points
    A = np.asarray(seg_a, dtype=float)
    B = np.asarray(seg_b, dtype=float)
    p0, p1 = A[:, 0, :], A[:, 1, :]
    q0, q1 = B[:, 0, :], B[:, 1, :]
    d1 = p1 - p0
    d2 = q1 - q0
    for i in range(len(A)):
        den = d1[i, 0] * d2[:, 1] - d1[i, 1] * d2[:, 0]
        w = q0 - p0[i]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = (w[:, 0] * d2[:, 1] - w[:, 1] * d2[:, 0]) / den
            s = (w[:, 0] * d1[i, 1] - w[:, 1] * d1[i, 0]) / den
        hit = np.isfinite(t) & np.isfinite(s) & (t >= 0) & (t <= 1) & (s >= 0) & (s <= 1)
        for k in np.nonzero(hit)[0]:
            points.append((p0[i, 0] + t[k] * d1[i, 0], p0[i, 1] + t[k] * d1[i, 1]))
    return points


def polylines_to_segments(polylines: list[np.ndarray]) -> list[Segment]:
    segs = []
    for poly in polylines:
        for a, b in zip(poly[:-1], poly[1:]):
            segs.append(((a[0], a[1]), (b[0], b[1])))
    return segs
