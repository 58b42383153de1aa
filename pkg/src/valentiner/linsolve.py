"""Small dense least-squares solving with rank and residual reporting."""

import numpy as np

from .errors import Inconsistent, RankDeficient


def solve_linear(a, b, rel_tol=1e-10, rank_tol=1e-10):
    """Solve A x = b in the least-squares sense with certificates.

    A is m x n with m >= n.  Raises RankDeficient when the numerical rank
    of A falls below n, and Inconsistent when the relative residual
    ||Ax - b|| / ||b|| exceeds rel_tol.  Returns (x, residual).
    """
    a = np.asarray(a)
    b = np.asarray(b)
    m, n = a.shape
    if m < n:
        raise RankDeficient(f"system is {m}x{n}: fewer equations than unknowns")
    x, _, rank, sv = np.linalg.lstsq(a, b, rcond=None)
    if rank < n or (sv[0] > 0 and sv[-1] < rank_tol * sv[0]):
        raise RankDeficient(f"numerical rank {rank} < {n}")
    bn = np.linalg.norm(b)
    res = float(np.linalg.norm(a @ x - b))
    rel = res / bn if bn > 0 else res
    if rel > rel_tol:
        raise Inconsistent(f"relative residual {rel:.3e} exceeds {rel_tol:.1e}")
    return x, rel
