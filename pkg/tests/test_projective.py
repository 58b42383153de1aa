import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from valentiner.errors import ZeroVector
from valentiner.projective import fs_distance, normalize_point

finite = st.floats(-10, 10, allow_nan=False)
vec = st.tuples(*[finite] * 6).filter(lambda t: sum(abs(x) for x in t) > 1e-3)


def _to_c3(t):
    return np.array([t[0] + 1j * t[1], t[2] + 1j * t[3], t[4] + 1j * t[5]])


def test_examples():
    assert np.allclose(normalize_point([0, 0, 5j]), [0, 0, 1])
    assert np.allclose(normalize_point([2, 0, 0]), [1, 0, 0])
    a = normalize_point([1 + 1j, 1 + 1j, 1 + 1j])
    b = normalize_point([1, 1, 1])
    assert fs_distance(a, b) < 1e-14


def test_fs_examples():
    assert fs_distance([1, 0, 0], [1, 0, 0]) == 0
    assert abs(fs_distance([1, 0, 0], [0, 1, 0]) - np.pi / 2) < 1e-14
    # independent oracle: arccos(|<p,q>| / (|p||q|))
    expected = np.arccos(1 / np.sqrt(2))
    assert abs(fs_distance([1, 0, 0], [1, 1, 0]) - expected) < 1e-14


def test_zero_vector():
    with pytest.raises(ZeroVector):
        normalize_point([0, 0, 0])
    with pytest.raises(ZeroVector):
        fs_distance([0, 0, 0], [1, 0, 0])


@settings(max_examples=200, deadline=None)
@given(vec, st.tuples(finite, finite).filter(lambda t: abs(t[0]) + abs(t[1]) > 1e-3))
def test_scalar_invariance(t, lam):
    v = _to_c3(t)
    scale = lam[0] + 1j * lam[1]
    assert fs_distance(normalize_point(v), normalize_point(scale * v)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(vec, vec, vec)
def test_triangle_inequality(a, b, c):
    pa, pb, pc = _to_c3(a), _to_c3(b), _to_c3(c)
    assert fs_distance(pa, pc) <= fs_distance(pa, pb) + fs_distance(pb, pc) + 1e-10
