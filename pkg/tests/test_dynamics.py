import numpy as np
import pytest

from valentiner.dynamics import (IterationConfig, certified_cycle, iterate_to_cycle,
                                 polish_72point, solve_resolvent)
from valentiner.projective import fs_distance, normalize_point, random_unit_points


def test_reference_map_cycles_from_72_point(reg):
    pair, iters = iterate_to_cycle(reg.h19, np.array([1.0, 0, 0]), IterationConfig())
    assert pair is not None and iters <= 3
    a, b = pair
    assert (fs_distance(a, [1.0, 0, 0]) < 1e-10 and fs_distance(b, [0, 1.0, 0]) < 1e-10) or \
           (fs_distance(a, [0, 1.0, 0]) < 1e-10 and fs_distance(b, [1.0, 0, 0]) < 1e-10)


def test_fixed_36_point_degenerate_cycle(reg):
    pair, _ = iterate_to_cycle(reg.h19, np.array([0, 0, 1.0]), IterationConfig())
    assert pair is not None
    assert fs_distance(pair[0], pair[1]) < 1e-10
    assert fs_distance(pair[0], [0, 0, 1.0]) < 1e-10


def test_random_starts_converge_to_certified_72_cycles(reg, inv, rng):
    fsup, psup = inv.F.supnorm(), inv.Phi.supnorm()
    converged = 0
    for _ in range(10):
        w0 = normalize_point(rng.standard_normal(3) + 1j * rng.standard_normal(3))
        pair, iters = iterate_to_cycle(reg.h19, w0, IterationConfig(cycle_tolerance=1e-12))
        if pair is None:
            continue
        converged += 1
        for p in pair:
            assert abs(inv.F.eval(p)) < 1e-7 * fsup
            assert abs(inv.Phi.eval(p)) < 1e-7 * psup
    assert converged >= 9


def test_trajectory_equivariance(reg, group_bub, rng):
    t = np.asarray(group_bub.projective[33], dtype=complex)
    w0 = normalize_point(rng.standard_normal(3) + 1j * rng.standard_normal(3))
    a, b = w0.copy(), normalize_point(t @ w0)
    for _ in range(20):
        a = normalize_point(reg.h19(a))
        b = normalize_point(reg.h19(b))
    assert fs_distance(normalize_point(t @ a), b) < 1e-6


def test_mirror_line_repulsion(reg, catalog, rng):
    # desk-scale experiment in support of the repulsion conjecture: starts
    # within 1e-3 of a mirror line (but off it) end up farther from the
    # line after five iterations; the rate is the recorded metric
    want = np.array([1.0, -1.0, 0]) / np.sqrt(2)
    li = int(np.argmin([fs_distance(e, want) for e in catalog.line45]))
    ell = np.asarray(catalog.line45[li])
    away = 0
    trials = 100
    for _ in range(trials):
        t = rng.standard_normal() + 1j * rng.standard_normal()
        base = normalize_point(np.array([1.0, 1.0, t]))
        p = normalize_point(base + 1e-3 * rng.standard_normal(3))
        d0 = abs(ell @ p)
        for _ in range(5):
            p = normalize_point(reg.h19(p))
        away += abs(ell @ p) >= d0
    print(f"\nmirror-line repulsion rate: {away}/{trials}")
    assert away >= 0.90 * trials


def test_polish_is_local(reg, inv, rng):
    from valentiner.resolvents import instantiate_family

    fam = instantiate_family((0.8 + 0.4j, 0.9 - 0.2j), "general")
    pair = None
    for _ in range(12):
        pair, iters, strict = certified_cycle(
            fam, rng.standard_normal(3) + 1j * rng.standard_normal(3),
            IterationConfig(seed=1))
        if pair is not None:
            break
    assert pair is not None
    # polish from a point already on the locus barely moves
    p = pair[0]
    q = polish_72point(fam, p)
    assert fs_distance(p, q) < 1e-9


def test_solve_determinism(selector_general):
    cfg = IterationConfig(seed=7)
    r1 = solve_resolvent((0.9 + 0.1j, 1.1 - 0.3j), "general", cfg, selector_general)
    r2 = solve_resolvent((0.9 + 0.1j, 1.1 - 0.3j), "general", cfg, selector_general)
    assert r1.root == r2.root and r1.residual == r2.residual
    assert r1.iterations == r2.iterations


def test_solve_special_residual(selector_special):
    r = solve_resolvent((0.45 + 0.65j,), "special", IterationConfig(seed=2), selector_special)
    assert r.converged and r.residual < 1e-6


def test_solve_general_matches_oracle(reg, inv, rng, selector_general):
    from valentiner.resolvents import oracle_roots_general, quotient_y

    while True:
        z = random_unit_points(rng, 1)[0]
        y1, y2 = quotient_y(inv, z)
        if 0.4 < abs(y1) < 2.0 and 0.4 < abs(y2) < 2.0:
            break
    r = solve_resolvent((y1, y2), "general", IterationConfig(seed=5), selector_general)
    assert r.converged and r.residual < 1e-6
    roots = oracle_roots_general(inv, z)
    assert np.min(np.abs(roots - r.root) / np.abs(roots)) < 1e-5
