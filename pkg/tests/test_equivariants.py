import json
from importlib import resources

import numpy as np
import pytest

import valentiner.exactpoly as xp
from valentiner.equivariants import (build_h19_exact, conic_points,
                                     frame_determinant_ratio, h19_exact,
                                     verify_h19)
from valentiner.invariants import exact_chain, exact_g48
from valentiner.projective import fs_distance, normalize_point, random_unit_points


def test_h19_matches_published_table():
    h19, f19 = h19_exact()
    with resources.files("valentiner.data").joinpath("h19_printed.json").open() as f:
        printed = json.load(f)
    for i in range(3):
        ref = {tuple(int(v) for v in k.split(",")): val for k, val in printed[i].items()}
        assert ref == h19[i], f"component {i + 1} disagrees"


def test_h19_anchor_coefficients():
    h19, _ = h19_exact()
    assert h19[2][(0, 0, 19)] == -1023516
    assert h19[0][(15, 4, 0)] == -3591
    assert h19[1][(19, 0, 0)] == -81


def test_f19_definition():
    h19, f19 = h19_exact()
    f = exact_chain()[0]
    f3 = xp.xpow(f, 3)
    ids = ({(1, 0, 0): 1}, {(0, 1, 0): 1}, {(0, 0, 1): 1})
    for i in range(3):
        recon = xp.xadd(xp.xscale(xp.xmul(f3, ids[i]), 1620), f19[i])
        assert recon == h19[i]


def test_f64_divisible_by_x45():
    _, f19 = h19_exact()
    x45 = exact_chain()[3]
    f64 = [xp.xmul(c, x45) for c in f19]
    for c, q in zip(f64, f19):
        assert xp.xdivide_exact(c, x45) == q


def test_jacobian_factorization_exact():
    h19, _ = h19_exact()
    j = xp.xjacobian_det(h19[0], h19[1], h19[2])
    fg = xp.xmul(exact_chain()[0], exact_g48())
    assert xp.xdivide_exact(j, fg) == {(0, 0, 0): 1}


def test_promotion_basis_rank_14():
    from valentiner.equivariants import _exact_basis_64

    basis = _exact_basis_64()
    keys = sorted({(i, e) for b in basis for i in range(3) for e in b[i]})
    key_index = {k: t for t, k in enumerate(keys)}
    m = np.zeros((len(keys), 14), dtype=complex)
    for col, b in enumerate(basis):
        for i in range(3):
            for e, c in b[i].items():
                m[key_index[(i, e)], col] = complex(c)
    assert np.linalg.matrix_rank(m / np.max(np.abs(m))) == 14


def test_equivariance(reg, group_bub, rng):
    pts = random_unit_points(rng, 5)
    idx = rng.choice(len(group_bub.lift), 20, replace=False)
    for t in group_bub.lift[idx]:
        m = np.asarray(t, dtype=complex)
        for p in pts:
            assert fs_distance(reg.h19(m @ p), m @ reg.h19(p)) < 1e-8
            assert fs_distance(reg.psi16(m @ p), m @ reg.psi16(p)) < 1e-8
            assert fs_distance(reg.k25(m @ p), m @ reg.k25(p)) < 1e-8


def test_k25_degree_and_determinant(reg, rng):
    assert reg.k25.degree == 25
    ratios = [frame_determinant_ratio(reg.inv, reg.h19, reg.k25,
                                      normalize_point(rng.standard_normal(3) + 1j * rng.standard_normal(3)))
              for _ in range(10)]
    assert np.max(np.abs(np.array(ratios) + 1458)) < 1e-6


def test_h19_published_dynamical_anchors(reg):
    assert fs_distance(reg.h19(np.array([0, 0, 1.0])), [0, 0, 1.0]) < 1e-12
    assert fs_distance(reg.h19(np.array([1.0, 0, 0])), [0, 1.0, 0]) < 1e-12
    assert fs_distance(reg.h19(np.array([0, 1.0, 0])), [1.0, 0, 0]) < 1e-12


def test_verify_h19_report(reg, catalog):
    items = verify_h19(reg, catalog, seed=7, n_conic=25)
    for item in items:
        assert item["pass"], item


def test_psi16_collapses_mirror_line_to_companion_point(reg, catalog):
    from valentiner.projective import fs_distance

    want = np.array([1.0, -1.0, 0]) / np.sqrt(2)
    li = int(np.argmin([fs_distance(e, want) for e in catalog.line45]))
    p_z = catalog.orbit45[li]
    for t in np.linspace(0.3, 1.7, 6):
        a = np.array([1.0, 1.0, t], dtype=complex)
        img = reg.psi16(a)
        assert fs_distance(img, np.asarray(p_z)) < 1e-8


def test_g19_family_on_72_points(reg, catalog, rng):
    for _ in range(5):
        a = rng.standard_normal() + 1j * rng.standard_normal()
        b = rng.standard_normal() + 1j * rng.standard_normal()
        g = reg.g19(a, b)
        for p in catalog.orbit72[rng.choice(72, 6, replace=False)]:
            assert fs_distance(g(np.asarray(p)), reg.h19(np.asarray(p))) < 1e-7


def test_bub_symmetry_of_h19(reg, rng):
    # coordinates of the canonical map are real, so conjugation symmetry is
    # exact; check it pointwise anyway
    for _ in range(10):
        p = normalize_point(rng.standard_normal(3) + 1j * rng.standard_normal(3))
        lhs = reg.h19(np.conj(p))
        rhs = np.conj(reg.h19(p))
        assert fs_distance(lhs, rhs) < 1e-10


def test_critical_degree():
    h19, _ = h19_exact()
    j = xp.xjacobian_det(h19[0], h19[1], h19[2])
    assert max(sum(e) for e in j) == 54


def test_conic_points_helper(reg, rng):
    c = reg.inv.conics_barred[2]
    pts = conic_points(c, 10, rng)
    assert max(abs(c.eval(p)) for p in pts) < 1e-9 * c.supnorm()
