"""Generates the synthetic demo inputs: coast.geojson and bathymetry.asc.

Two noisy landmasses either side of a sea, a deep bay in the eastern one,
a few islands and islets. Deterministic; rerun after editing:
python3 make_demo.py
"""
import json

import numpy as np

rng = np.random.default_rng(20240607)


def resample(vertices, spacing):
    """Closed polyline resampled uniformly by arc length (no repeated end)."""
    v = np.asarray(vertices + [vertices[0]], dtype=float)
    seg = np.linalg.norm(np.diff(v, axis=0), axis=1)
    s = np.concatenate([[0.0], np.cumsum(seg)])
    n = int(round(s[-1] / spacing))
    t = np.arange(n) * s[-1] / n
    return np.stack([np.interp(t, s, v[:, 0]), np.interp(t, s, v[:, 1])], axis=1)


def roughen(pts, amp, mask=None):
    """Displaces points along their normals by random-phase ripples."""
    n = len(pts)
    tangent = np.roll(pts, -1, axis=0) - np.roll(pts, 1, axis=0)
    normal = np.stack([tangent[:, 1], -tangent[:, 0]], axis=1)
    normal /= np.linalg.norm(normal, axis=1)[:, None]
    i = np.arange(n)
    d = np.zeros(n)
    for _ in range(6):
        cycles = rng.integers(8, 80)
        d += rng.uniform(0.3, 1.0) * np.sin(2 * np.pi * cycles * i / n + rng.uniform(0, 2 * np.pi))
    d = amp * d / np.abs(d).max() + rng.normal(0.0, amp * 0.15, n)
    if mask is not None:
        d *= mask(pts)
    return pts + d[:, None] * normal


def ccw(pts):
    x, y = pts[:, 0], pts[:, 1]
    area = 0.5 * np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y)
    return pts if area > 0 else pts[::-1]


def ellipse(cx, cy, rx, ry, n):
    t = 2 * np.pi * np.arange(n) / n
    return np.stack([cx + rx * np.cos(t), cy + ry * np.sin(t)], axis=1)


def feature(fid, cls, pts):
    ring = [[round(float(x), 6), round(float(y), 6)] for x, y in pts]
    ring.append(ring[0])
    return {
        "type": "Feature",
        "properties": {"id": fid, "class": cls},
        "geometry": {"type": "Polygon", "coordinates": [ring]},
    }


def main():
    west = roughen(resample([tuple(p) for p in ellipse(-4.0, 55.0, 3.5, 5.0, 400)], 0.02), 0.08)
    east_outline = [
        (7.0, 49.0), (20.0, 49.0), (20.0, 69.0), (12.0, 69.0), (7.0, 66.0), (5.0, 63.0),
        (5.0, 61.0), (6.0, 59.5), (10.0, 59.2), (10.6, 59.05), (10.95, 58.75), (11.0, 58.5),
        (10.95, 58.25), (10.6, 57.95), (10.0, 57.8), (6.0, 57.5),
        (5.5, 55.0), (6.0, 52.0),
    ]
    east = roughen(resample(east_outline, 0.03), 0.06, mask=lambda p: np.clip(12.0 - p[:, 0], 0.0, 1.0))
    features = [
        feature("westland", "red", ccw(west)),
        feature("eastland", "blue", ccw(east)),
        feature("north-isle", "red", ccw(roughen(ellipse(1.0, 58.0, 0.6, 0.4, 300), 0.03))),
        feature("far-isle", "blue", ccw(roughen(ellipse(2.5, 61.0, 0.4, 0.5, 240), 0.03))),
    ]
    for k, (cx, cy, n) in enumerate([(0.0, 55.0, 40), (2.0, 56.5, 60), (-0.3, 60.5, 90)]):
        features.append(feature(f"islet-{k}", "red", ccw(roughen(ellipse(cx, cy, 0.08, 0.06, n), 0.005))))
    with open("coast.geojson", "w") as f:
        f.write('{"type":"FeatureCollection","features":[\n')
        f.write(",\n".join(json.dumps(ft, separators=(",", ":")) for ft in features))
        f.write("\n]}\n")

    nr, nc = 40, 48
    r, c = np.mgrid[0:nr, 0:nc]
    depth = -80.0 - 60.0 * np.exp(-((r - 22.0) ** 2 / 150.0 + (c - 20.0) ** 2 / 260.0))
    depth += 12.0 * np.sin(c / 3.0) * np.cos(r / 4.0) + rng.normal(0.0, 4.0, (nr, nc))
    with open("bathymetry.asc", "w") as f:
        f.write(f"ncols {nc}\nnrows {nr}\nxllcorner 0.5\nyllcorner 54\ncellsize 0.1\nNODATA_value -9999\n")
        for row in depth:
            f.write(" ".join(f"{v:.3f}" for v in row) + "\n")


if __name__ == "__main__":
    main()
