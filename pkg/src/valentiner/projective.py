"""Points of CP^2: canonical normalization and the Fubini-Study metric."""

import numpy as np

from .errors import ZeroVector

_PHASE_TOL = 1e-12


def normalize_point(v):
    """Canonical representative of [v] in CP^2.

    Unit Euclidean norm, with the first coordinate of significant modulus
    rotated onto the positive real axis, so equality testing is a plain
    vector comparison up to tolerance.
    """
    v = np.asarray(v, dtype=complex)
    if v.shape != (3,):
        raise ValueError("expected a 3-vector")
    nrm = np.linalg.norm(v)
    if not np.isfinite(nrm) or nrm < 1e-150:
        raise ZeroVector("cannot normalize a zero (or non-finite) vector")
    v = v / nrm
    mx = np.max(np.abs(v))
    for c in v:
        if abs(c) > _PHASE_TOL * mx and abs(c) > 1e-14:
            v = v * (abs(c) / c)
            break
    return v


def fs_distance(p, q):
    """Fubini-Study distance between two points of CP^2.

    Zero iff the points are projectively equal; at most pi/2.  Inputs need
    not be normalized.  Small separations use the sine form (the wedge
    norm), which keeps full precision where arccos would lose half of it.
    """
    p = np.asarray(p, dtype=complex)
    q = np.asarray(q, dtype=complex)
    denom = np.linalg.norm(p) * np.linalg.norm(q)
    if denom == 0:
        raise ZeroVector("zero vector has no projective class")
    c = abs(np.vdot(p, q)) / denom
    if c < 0.7:
        return float(np.arccos(min(1.0, c)))
    w = np.array([p[0] * q[1] - p[1] * q[0],
                  p[0] * q[2] - p[2] * q[0],
                  p[1] * q[2] - p[2] * q[1]])
    s = np.linalg.norm(w) / denom
    return float(np.arcsin(min(1.0, s)))


def random_unit_points(rng, n):
    """n points drawn uniformly from the unit sphere of C^3, canonicalized."""
    raw = rng.standard_normal((n, 3)) + 1j * rng.standard_normal((n, 3))
    return np.array([normalize_point(v) for v in raw])
