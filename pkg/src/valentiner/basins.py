"""Basin-of-attraction grids on the distinguished slices, with PPM output.

A grid cell is colored by the attractor its center's trajectory reaches
(period-2 pairs of 72-points on the real-plane and conic slices, the four
fixed mirror points on a line slice); cells that fail to converge within
the iteration budget stay black.
"""

from dataclasses import dataclass

import numpy as np

from .projective import fs_distance

PALETTE = np.array([
    [230, 60, 50], [60, 140, 230], [70, 190, 90], [240, 190, 40],
    [170, 90, 220], [80, 210, 200], [240, 120, 180], [150, 150, 150],
], dtype=np.uint8)


@dataclass
class BasinGrid:
    slice_id: str
    resolution: int
    extent: float
    labels: np.ndarray          # (res, res) int16, -1 for nonconverged
    iterations: np.ndarray      # (res, res) uint16
    n_attractors: int

    def converged_fraction(self):
        return float(np.mean(self.labels >= 0))

    def to_ppm(self, path):
        img = np.zeros((self.resolution, self.resolution, 3), dtype=np.uint8)
        for k in range(self.n_attractors):
            img[self.labels == k] = PALETTE[k % len(PALETTE)]
        with open(path, "wb") as f:
            f.write(b"P6\n%d %d\n255\n" % (self.resolution, self.resolution))
            f.write(img.tobytes())

    def to_json_dict(self):
        return {
            "schema": "valentiner/1",
            "slice": self.slice_id,
            "resolution": self.resolution,
            "extent": self.extent,
            "n_attractors": self.n_attractors,
            "converged_fraction": self.converged_fraction(),
            "labels": self.labels.tolist(),
        }


def _eval_components_real(components, pts):
    """Evaluate map components at an (n, 3) real array, degree-19 real tables."""
    from .hpoly import exps

    d = components[0].degree
    e = exps(d)
    out = []
    pw = [np.ones((d + 1, len(pts))) for _ in range(3)]
    for v in range(3):
        for p in range(1, d + 1):
            pw[v][p] = pw[v][p - 1] * pts[:, v]
    for c in components:
        coeffs = c.coeffs.real
        acc = np.zeros(len(pts))
        nz = np.nonzero(np.abs(c.coeffs) > 0)[0]
        for t in nz:
            i, j, k = e[t]
            acc += coeffs[t] * (pw[0][i] * pw[1][j] * pw[2][k])
        out.append(acc)
    return np.stack(out, axis=1)


def _eval_components_complex(components, pts):
    from .hpoly import exps

    d = components[0].degree
    e = exps(d)
    out = []
    pw = [np.ones((d + 1, len(pts)), dtype=complex) for _ in range(3)]
    for v in range(3):
        for p in range(1, d + 1):
            pw[v][p] = pw[v][p - 1] * pts[:, v]
    for c in components:
        acc = np.zeros(len(pts), dtype=complex)
        nz = np.nonzero(np.abs(c.coeffs) > 0)[0]
        for t in nz:
            i, j, k = e[t]
            acc += c.coeffs[t] * (pw[0][i] * pw[1][j] * pw[2][k])
        out.append(acc)
    return np.stack(out, axis=1)


def _match_attractors(pts, attractors, tol):
    """Labels of nearest attractors within FS tolerance, else -1 (vectorized)."""
    p = pts / np.linalg.norm(pts, axis=1, keepdims=True)[:, :]
    a = attractors / np.linalg.norm(attractors, axis=1, keepdims=True)
    overlap = np.abs(np.conj(p) @ a.T if np.iscomplexobj(p) or np.iscomplexobj(a) else p @ a.T)
    best = np.argmax(overlap, axis=1)
    good = overlap[np.arange(len(p)), best] > np.cos(tol)
    out = np.where(good, best, -1)
    return out


def render_rp2(reg, catalog, resolution=180, max_iter=200, extent=2.0, match_tol=1e-6,
               chunk=65536, cell_transform=None, chart=None):
    """Basins of the canonical degree-19 map on the real conic-swap plane."""
    from .slices import rp2_chart

    chart = chart or rp2_chart(reg, catalog)
    comps = reg.h19.components
    xs = np.linspace(-extent, extent, resolution)
    labels = np.full(resolution * resolution, -1, dtype=np.int16)
    iters = np.zeros(resolution * resolution, dtype=np.uint16)
    t1, t2 = np.meshgrid(xs, xs)
    cells = np.stack([t1.ravel(), t2.ravel()], axis=1)
    if cell_transform is not None:
        cells = cells @ np.asarray(cell_transform).T
    att = chart.attractor_points
    pair = chart.pair_label
    for lo in range(0, len(cells), chunk):
        hi = min(lo + chunk, len(cells))
        pts = chart.to_points(cells[lo:hi])
        pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
        live = np.arange(hi - lo)
        labs = np.full(hi - lo, -1, dtype=np.int16)
        itcount = np.zeros(hi - lo, dtype=np.uint16)
        for k in range(max_iter):
            pts = _eval_components_real(comps, pts)
            nrm = np.linalg.norm(pts, axis=1, keepdims=True)
            nrm[nrm == 0] = 1.0
            pts = pts / nrm
            if k % 3 == 2 or k == max_iter - 1:
                m = _match_attractors(pts, att, match_tol)
                hit = m >= 0
                if np.any(hit):
                    labs[live[hit]] = pair[m[hit]].astype(np.int16)
                    itcount[live[hit]] = k + 1
                    pts = pts[~hit]
                    live = live[~hit]
                    if len(live) == 0:
                        break
        labels[lo:hi] = labs
        iters[lo:hi] = itcount
    return BasinGrid("rp2", resolution, extent,
                     labels.reshape(resolution, resolution),
                     iters.reshape(resolution, resolution), 5)


def render_conic(reg, catalog, resolution=180, max_iter=200, extent=2.0, match_tol=1e-6,
                 chunk=65536):
    """Basins of the restricted map on the first barred conic, in the
    rational-parametrization chart."""
    from .slices import conic_slice

    sl = conic_slice(reg, catalog)
    comps = reg.h19.components
    xs = np.linspace(-extent, extent, resolution)
    s1, s2 = np.meshgrid(xs, xs)
    svals = (s1 + 1j * s2).ravel()
    labels = np.full(len(svals), -1, dtype=np.int16)
    iters = np.zeros(len(svals), dtype=np.uint16)
    att = sl.vertices
    pair = sl.pair_label
    for lo in range(0, len(svals), chunk):
        hi = min(lo + chunk, len(svals))
        s = svals[lo:hi]
        pts = np.stack([s * s, np.full_like(s, -sl.a_coef), sl.a_coef * s], axis=1)
        pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
        live = np.arange(hi - lo)
        labs = np.full(hi - lo, -1, dtype=np.int16)
        itcount = np.zeros(hi - lo, dtype=np.uint16)
        for k in range(max_iter):
            pts = _eval_components_complex(comps, pts)
            nrm = np.linalg.norm(pts, axis=1, keepdims=True)
            nrm[nrm == 0] = 1.0
            pts = pts / nrm
            if k % 3 == 2 or k == max_iter - 1:
                m = _match_attractors(pts, att, match_tol)
                hit = m >= 0
                if np.any(hit):
                    labs[live[hit]] = pair[m[hit]].astype(np.int16)
                    itcount[live[hit]] = k + 1
                    pts = pts[~hit]
                    live = live[~hit]
                    if len(live) == 0:
                        break
        labels[lo:hi] = labs
        iters[lo:hi] = itcount
    return BasinGrid("conic", resolution, extent,
                     labels.reshape(resolution, resolution),
                     iters.reshape(resolution, resolution), 6)


def render_line45(reg, catalog, resolution=180, max_iter=60, extent=2.0, match_tol=1e-6):
    """Basins of the degree-15 restricted map on a mirror line (complex chart)."""
    from .slices import restricted_psi16

    lm = restricted_psi16(reg, catalog)
    xs = np.linspace(-extent, extent, resolution)
    u1, u2 = np.meshgrid(xs, xs)
    u = (u1 + 1j * u2).ravel()
    labels = np.full(len(u), -1, dtype=np.int16)
    iters = np.zeros(len(u), dtype=np.uint16)
    live = np.arange(len(u))
    for k in range(max_iter):
        u = np.polyval(lm.num, u) / np.polyval(lm.den, u)
        bad = ~np.isfinite(u)
        if np.any(bad):
            u[bad] = 1e30
        close = np.abs(u[:, None] - lm.fixed_points[None, :]) < 1e-4 * np.maximum(1.0, np.abs(u[:, None]))
        hit = close.any(axis=1)
        if np.any(hit):
            labels[live[hit]] = np.argmax(close[hit], axis=1).astype(np.int16)
            iters[live[hit]] = k + 1
            u = u[~hit]
            live = live[~hit]
            if len(live) == 0:
                break
    return BasinGrid("line45", resolution, extent,
                     labels.reshape(resolution, resolution),
                     iters.reshape(resolution, resolution), len(lm.fixed_points))


def render_basins(slice_id, reg=None, catalog=None, resolution=180, max_iter=None, extent=2.0):
    from .equivariants import registry as _registry

    reg = reg or _registry()
    if catalog is None:
        from .frames import bub_frame
        from .group import enumerate_group
        from .orbits import special_orbits

        catalog = special_orbits(enumerate_group().conjugate_to_frame(bub_frame()), reg.inv)
    if slice_id == "rp2":
        return render_rp2(reg, catalog, resolution, max_iter or 200, extent)
    if slice_id == "conic":
        return render_conic(reg, catalog, resolution, max_iter or 200, extent)
    if slice_id == "line45":
        return render_line45(reg, catalog, resolution, max_iter or 60, extent)
    raise ValueError(slice_id)


def d5_symmetry_mismatch(grid, reg, catalog):
    """Fraction of cells whose label breaks five-fold rotation symmetry.

    A second grid is rendered from the exactly rotated cell centers (basin
    boundaries are fractal, so a nearest-cell lookup would decorrelate in
    the streaked regions and measure resolution, not symmetry); the two
    label fields must then agree up to one label permutation, estimated by
    majority vote.
    """
    ang = 2 * np.pi / 5
    rot = np.array([[np.cos(ang), -np.sin(ang)], [np.sin(ang), np.cos(ang)]])
    rotated = render_rp2(reg, catalog, grid.resolution, 300, grid.extent,
                         cell_transform=rot)
    src = grid.labels
    dst = rotated.labels
    ok = (src >= 0) & (dst >= 0)
    perm = np.full(grid.n_attractors, -2, dtype=np.int16)
    for k in range(grid.n_attractors):
        sel = ok & (src == k)
        if not np.any(sel):
            continue
        vals, counts = np.unique(dst[sel], return_counts=True)
        perm[k] = vals[np.argmax(counts)]
    mismatch = ok & (dst != perm[np.clip(src, 0, grid.n_attractors - 1)])
    return float(np.sum(mismatch)) / max(1, int(np.sum(ok)))
