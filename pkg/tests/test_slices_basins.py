import os

import numpy as np
import pytest

from valentiner.basins import d5_symmetry_mismatch, render_basins
from valentiner.projective import fs_distance
from valentiner.slices import conic_slice, restricted_psi16, rp2_chart


def test_rp2_chart_geometry(reg, catalog):
    ch = rp2_chart(reg, catalog)
    radii = np.linalg.norm(ch.attractors, axis=1)
    assert np.max(np.abs(radii - 1)) < 1e-9
    # one attractor on the positive horizontal axis (the image of [1,0,0])
    angles = np.degrees(np.arctan2(ch.attractors[:, 1], ch.attractors[:, 0]))
    assert np.min(np.abs(angles)) < 1e-6
    # the attractor set is closed under rotation by 72 degrees
    for a in ch.attractors:
        rot = np.array([[np.cos(2 * np.pi / 5), -np.sin(2 * np.pi / 5)],
                        [np.sin(2 * np.pi / 5), np.cos(2 * np.pi / 5)]]) @ a
        assert min(np.linalg.norm(ch.attractors - rot, axis=1)) < 1e-8
    assert sorted(set(ch.pair_label.tolist())) == [0, 1, 2, 3, 4]


def test_chart_roundtrip(reg, catalog, rng):
    ch = rp2_chart(reg, catalog)
    for _ in range(10):
        t = rng.uniform(-1.5, 1.5, 2)
        p = ch.to_point(t)
        t2 = ch.to_chart(p)
        assert np.max(np.abs(t - t2)) < 1e-10


def test_conic_slice_structure(reg, catalog):
    sl = conic_slice(reg, catalog)
    assert len(sl.vertices) == 12
    assert sorted(set(sl.pair_label.tolist())) == [0, 1, 2, 3, 4, 5]
    c1 = reg.inv.conics_barred[0]
    for s in (0.3, -1.2 + 0.7j):
        assert abs(c1.eval(sl.to_point(s))) < 1e-12


def test_restricted_map_degree_and_fixed_points(reg, catalog):
    lm = restricted_psi16(reg, catalog)
    assert lm.degree == 15
    assert len(lm.fixed_points) == 4
    for u in lm.fixed_points:
        assert abs(lm(u) - u) < 1e-8
        # attracting: tiny derivative
        h = 1e-6
        assert abs((lm(u + h) - lm(u)) / h) < 1e-3


def test_rp2_basins(reg, catalog):
    grid = render_basins("rp2", reg, catalog, resolution=120, max_iter=200)
    assert grid.converged_fraction() >= 0.95
    assert set(np.unique(grid.labels)) <= {0, 1, 2, 3, 4}
    assert d5_symmetry_mismatch(grid, reg, catalog) < 0.01


def test_conic_basins(reg, catalog):
    grid = render_basins("conic", reg, catalog, resolution=100, max_iter=200)
    assert grid.converged_fraction() >= 0.95
    labels = set(np.unique(grid.labels)) - {-1}
    assert labels == {0, 1, 2, 3, 4, 5}


def test_line45_basins(reg, catalog):
    grid = render_basins("line45", reg, catalog, resolution=100, max_iter=60)
    assert grid.converged_fraction() > 0.8
    assert len(set(np.unique(grid.labels)) - {-1}) == 4


def test_ppm_output(tmp_path, reg, catalog):
    grid = render_basins("rp2", reg, catalog, resolution=32, max_iter=60)
    path = tmp_path / "out.ppm"
    grid.to_ppm(path)
    data = path.read_bytes()
    assert data.startswith(b"P6\n32 32\n255\n")
    assert len(data) == len(b"P6\n32 32\n255\n") + 32 * 32 * 3
