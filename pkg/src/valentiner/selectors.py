"""Root-selector functions: offline coefficient fit and root extraction.

The selector of the general family is the sum, over the root-system
conics, of the products of the five other conic forms pulled through the
parametrized frame, weighted by the conic form at the parameter point:

    Gamma_z(w) = sum_m prod_{n != m} C_n(frame_z(w)) * C_m(z)

At a period-2 cycle point over a 72-point, five of the six summands die
and the survivor isolates one root of the resolvent.  Divided by F(z)^42
(general) or Phi(z) Psi(z)^16 (special), the w-coefficients are
polynomials in the quotient parameters over a fixed monomial basis; they
are fitted once in extended precision from sample parameter points and
cached as JSON.

The final root constant is calibrated during the fit from samples whose
six roots are known exactly, exercising the same code path as runtime
extraction, which makes the formula immune to normalization conventions.
"""

import json
import os
from dataclasses import dataclass
from pathlib import Path

import mpmath
import numpy as np

from .context import CTX64, high_context
from .errors import FitResidualTooLarge
from .hpoly import exps

GENERAL_Y_MONOMIALS = [(b, c) for c in range(9) for b in range(22) if 12 * b + 30 * c <= 252]
SPECIAL_V_POWERS = list(range(9))

# printed anchor fragments for the reference normalization
ANCHOR_GENERAL_LEAD = {"monomial": (10, 0, 0), "y": (0, 0)}       # (3 + sqrt15 i) w1^10
ANCHOR_GENERAL_TRAIL = {"monomial": (0, 0, 10), "y": (1, 8)}      # 663552 (3 + 5 sqrt15 i) w3^10
ANCHOR_SPECIAL_LEAD = {"monomial": (0, 10, 0), "v": 0}            # 1944 w2^10
ANCHOR_SPECIAL_TRAIL = {"monomial": (10, 0, 0), "v": 8}           # w1^10 V^8


@dataclass
class SelectorTable:
    case: str
    w_monomials: list              # exponent triples, degree 10
    basis: list                    # (b, c) pairs or V powers
    coefficients: np.ndarray       # (n_w, n_basis) complex
    sel_const: complex             # calibrated root constant
    fit_residual: float
    beta: complex                  # ratio of fitted lead anchor to its printed value

    def gamma_value(self, params, w_table_unit):
        # extended precision: the coefficient table spans many orders
        # between its head and tail blocks, and the basis monomials run to
        # the 21st power, so binary64 loses several digits here
        w = np.asarray(w_table_unit).astype(np.clongdouble)
        pw = [np.power(w[v], np.arange(11)) for v in range(3)]
        wvals = np.array([pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]] for e in self.w_monomials])
        if self.case == "general":
            y1, y2 = (np.clongdouble(p) for p in params)
            bvals = np.array([y1 ** b * y2 ** c for b, c in self.basis])
        else:
            v = np.clongdouble(params[0])
            bvals = np.array([v ** k for k in self.basis])
        return complex(wvals @ (self.coefficients.astype(np.clongdouble) @ bvals))

    def gamma_scale(self, params, w_table_unit):
        """Largest term magnitude in the table evaluation: values far below
        it sit at the cache's storage noise floor."""
        w = np.abs(np.asarray(w_table_unit, dtype=complex))
        pw = [np.power(w[v], np.arange(11)) for v in range(3)]
        wvals = np.array([pw[0][e[0]] * pw[1][e[1]] * pw[2][e[2]] for e in self.w_monomials])
        if self.case == "general":
            y1, y2 = (abs(p) for p in params)
            bvals = np.array([y1 ** b * y2 ** c for b, c in self.basis])
        else:
            v = abs(params[0])
            bvals = np.array([v ** k for k in self.basis])
        return float(np.max(wvals[:, None] * np.abs(self.coefficients) * bvals[None, :]))

    def anchor_report(self):
        """Fitted anchor coefficients after beta-normalization vs printed."""
        widx = {e: i for i, e in enumerate(self.w_monomials)}
        s15 = np.sqrt(15.0)
        if self.case == "general":
            lead = self.coefficients[widx[(10, 0, 0)], self.basis.index((0, 0))] / self.beta
            trail = self.coefficients[widx[(0, 0, 10)], self.basis.index((1, 8))] / self.beta
            return {
                "lead": {"fitted": lead, "printed": 3 + 1j * s15},
                "trail": {"fitted": trail, "printed": 663552 * (3 + 5j * s15)},
            }
        lead = self.coefficients[widx[(0, 10, 0)], self.basis.index(0)] / self.beta
        trail = self.coefficients[widx[(10, 0, 0)], self.basis.index(8)] / self.beta
        return {
            "lead": {"fitted": lead, "printed": 1944 + 0j},
            "trail": {"fitted": trail, "printed": 1 + 0j},
        }

    def to_json_dict(self):
        return {
            "schema": "valentiner/1",
            "case": self.case,
            "w_monomials": [list(e) for e in self.w_monomials],
            "basis": [list(b) if isinstance(b, tuple) else b for b in self.basis],
            "coefficients": [[[c.real, c.imag] for c in row] for row in self.coefficients],
            "sel_const": [self.sel_const.real, self.sel_const.imag],
            "fit_residual": self.fit_residual,
            "beta": [self.beta.real, self.beta.imag],
        }

    @classmethod
    def from_json_dict(cls, d):
        co = np.array([[complex(re, im) for re, im in row] for row in d["coefficients"]])
        basis = [tuple(b) if isinstance(b, list) else b for b in d["basis"]]
        return cls(d["case"], [tuple(e) for e in d["w_monomials"]], basis, co,
                   complex(*d["sel_const"]), d["fit_residual"], complex(*d["beta"]))


# --- runtime root extraction ------------------------------------------------------


def selector_raw_value(table, fam, p_internal):
    """(T_Y Gamma)^3 / Psi_T (general) or V^5 (V-1)^3 Gamma^3 / Psi_T."""
    wt = fam.to_table_coords(p_internal)
    wt = wt / np.linalg.norm(wt)
    g = table.gamma_value(fam.params, wt)
    psi_t = fam.psi_table_value(wt)
    if table.case == "general":
        from .resolvents import tau_det_value

        t_y = complex(tau_det_value(*fam.params))
        return (t_y * g) ** 3 / psi_t
    (v,) = fam.params
    return v ** 5 * (v - 1) ** 3 * g ** 3 / psi_t


def select_root(table, fam, p_internal):
    """Root of the family's resolvent from one (polished) cycle point."""
    return table.sel_const * selector_raw_value(table, fam, p_internal)


# --- high-precision fit machinery -------------------------------------------------


def _mp_setup(dps):
    from .equivariants import h19_exact
    from .frames import bub_frame
    from .group import conic_forms_octahedral, transport_conics
    from .invariants import exact_chain

    ctx = high_context(dps)
    fr = bub_frame(ctx)
    barred_o, unbarred_o = conic_forms_octahedral(ctx)
    tb, tu = transport_conics(barred_o, unbarred_o, fr, normalize_bub=True)
    f_x, phi_x, psi_x, x45_x = exact_chain()[:4]
    h19, _ = h19_exact()

    def xeval(poly, z):
        acc = mpmath.mpc(0)
        for (i, j, k), c in poly.items():
            acc += c * z[0] ** i * z[1] ** j * z[2] ** k
        return acc

    k25 = _mp_k25(ctx, fr, h19, x45_x, xeval)
    return {"ctx": ctx, "frame": fr, "barred": tb, "unbarred": tu,
            "F": f_x, "Phi": phi_x, "Psi": psi_x, "X": x45_x,
            "h19": h19, "k25": k25, "xeval": xeval}


def _mp_k25(ctx, fr, h19, x45_x, xeval):
    """k25 at mp: gradbar(F_ref) after grad(F_ref) in the unitary frame."""
    from .equivariants import _compose_polys
    from .hpoly import HPoly
    from .invariants import build_invariants

    inv_oct = build_invariants("octahedral", CTX64)
    gf_mp = []
    for g in inv_oct.F.grad():
        gf_mp.append(HPoly(5, np.array([mpmath.mpc(c) for c in g.coeffs], dtype=object)))
    gfbar = [HPoly(5, np.array([mpmath.conj(c) for c in g.coeffs], dtype=object)) for g in gf_mp]
    k_oct = [_compose_polys(gb, gf_mp) for gb in gfbar]
    m = fr.to_octahedral
    minv = fr.from_octahedral
    comps = [c.compose_linear(m) for c in k_oct]
    out = []
    for r in range(3):
        out.append(comps[0].scale(minv[r][0]) + comps[1].scale(minv[r][1]) + comps[2].scale(minv[r][2]))

    def k_eval(z):
        return np.array([c.eval(z) for c in out], dtype=object)

    z = np.array([mpmath.mpc("0.32", "0.11"), mpmath.mpc("-0.74", "0.41"),
                  mpmath.mpc("0.52", "-0.23")], dtype=object)
    hv = np.array([xeval(c, z) for c in h19], dtype=object)
    det = _det3_obj(np.stack([z, hv, k_eval(z)], axis=1))
    s = mpmath.mpc(-1458) * xeval(x45_x, z) / det
    return lambda zz: k_eval(zz) * s


def _det3_obj(m):
    return (m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]))


def _inv3_obj(m):
    det = _det3_obj(m)
    adj = np.empty((3, 3), dtype=object)
    for i in range(3):
        for j in range(3):
            a = [[m[r][c] for c in range(3) if c != i] for r in range(3) if r != j]
            minor = a[0][0] * a[1][1] - a[0][1] * a[1][0]
            adj[i, j] = minor if (i + j) % 2 == 0 else -minor
    return adj / det


def _w_change_mp(case):
    from fractions import Fraction

    if case == "general":
        m = [[Fraction(v) for v in row] for row in ([8, -92, 800], [2, -104, 128], [0, 0, 6])]
        adj = [[(m[(j + 1) % 3][(i + 1) % 3] * m[(j + 2) % 3][(i + 2) % 3]
                 - m[(j + 1) % 3][(i + 2) % 3] * m[(j + 2) % 3][(i + 1) % 3])
                for j in range(3)] for i in range(3)]
        d = m[0][0] * adj[0][0] + m[0][1] * adj[1][0] + m[0][2] * adj[2][0]
        rows = [[adj[i][j] / d for j in range(3)] for i in range(3)]
    else:
        rows = [[Fraction(16, 3), 0, Fraction(-10, 3)], [0, 4, 0], [1, 0, -1]]
    return np.array([[mpmath.mpc(mpmath.mpf(r.numerator) / r.denominator) if isinstance(r, Fraction)
                      else mpmath.mpc(r) for r in row] for row in rows], dtype=object)


def _conic_gram_mp(c):
    from .group import quad_to_gram

    g = quad_to_gram(c)
    return np.array([[mpmath.mpc(g[a][b]) for b in range(3)] for a in range(3)], dtype=object)


def _quad_prod_coeffs(quads):
    """Degree-2k coefficient dict of a product of quadratic-form coefficient dicts."""
    poly = {(0, 0, 0): mpmath.mpc(1)}
    for q in quads:
        new = {}
        for e1, c1 in poly.items():
            for e2, c2 in q.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                if e in new:
                    new[e] += c1 * c2
                else:
                    new[e] = c1 * c2
        poly = new
    return poly


def _gram_to_quad_dict(g):
    q = {}
    for a in range(3):
        for b in range(a, 3):
            c = g[a, a] if a == b else g[a, b] + g[b, a]
            e = [0, 0, 0]
            e[a] += 1
            e[b] += 1
            q[tuple(e)] = g[a, b] + g[b, a] if a != b else g[a, a]
    return q


def _sample_frame_mp(setup, z, case):
    """(frame matrix at mp, quotient params at mp) for a sample point."""
    xeval = setup["xeval"]
    F = xeval(setup["F"], z)
    Phi = xeval(setup["Phi"], z)
    Psi = xeval(setup["Psi"], z)
    hv = np.array([xeval(c, z) for c in setup["h19"]], dtype=object)
    kv = setup["k25"](z)
    zv = np.array(list(z), dtype=object)
    if case == "general":
        m0 = np.stack([F ** 4 * zv, F * hv, kv], axis=1)
        params = (Phi / F ** 2, Psi / (4 * F ** 5))
        norm = F ** 42
    else:
        m0 = np.stack([72 * Phi ** 4 * zv, Psi * hv, 24 * Phi ** 2 * kv], axis=1)
        params = ((mpmath.mpf(8) / 3) * Phi ** 5 / Psi ** 2,)
        norm = Phi * Psi ** 16
    return m0 @ _w_change_mp(case), params, norm


def _gamma_coeffs_at_z(setup, z, case):
    """w-monomial coefficient vector of Gamma_z / norm at one sample."""
    m, params, norm = _sample_frame_mp(setup, z, case)
    conics = setup["unbarred"] if case == "general" else setup["barred"]
    xeval = setup["xeval"]
    grams, cz = [], []
    for c in conics:
        g = _conic_gram_mp(c)
        grams.append(m.T @ g @ m)
        cz.append(_eval_hpoly_mp(c, z))
    quads = [_gram_to_quad_dict(g) for g in grams]
    acc = {}
    for mi in range(6):
        prod = _quad_prod_coeffs([quads[n] for n in range(6) if n != mi])
        for e, v in prod.items():
            t = v * cz[mi]
            if e in acc:
                acc[e] += t
            else:
                acc[e] = t
    e10 = [tuple(int(v) for v in row) for row in exps(10)]
    vec = np.array([acc.get(e, mpmath.mpc(0)) / norm for e in e10], dtype=object)
    return vec, params, m


def _eval_hpoly_mp(p, z):
    acc = mpmath.mpc(0)
    for e, c in p.terms().items():
        acc += mpmath.mpc(c) * z[0] ** int(e[0]) * z[1] ** int(e[1]) * z[2] ** int(e[2])
    return acc


def _sample_points(case, n, seed):
    from .equivariants import registry
    from .resolvents import curve_point, quotient_v, quotient_y

    reg = registry()
    inv = reg.inv
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < n:
        if case == "general":
            v = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            z = v / np.linalg.norm(v)
            try:
                y1, y2 = quotient_y(inv, z)
            except Exception:
                continue
            if 0.25 < abs(y1) < 2.5 and 0.25 < abs(y2) < 2.5:
                out.append(z)
        else:
            try:
                z = curve_point(rng, inv, reg)
                v = quotient_v(inv, z)
            except Exception:
                continue
            if 0.25 < abs(v) < 4.0 and abs(v - 1) > 0.15:
                out.append(z)
    return out


def fit_selectors(case="general", dps=70, n_samples=None, seed=1234, progress=None):
    """Fit the selector coefficient table in extended precision (one-time batch)."""
    basis = GENERAL_Y_MONOMIALS if case == "general" else SPECIAL_V_POWERS
    nb = len(basis)
    n = n_samples or (2 * nb + 40 if case == "general" else 42)
    zs = _sample_points(case, n, seed)
    setup = _mp_setup(dps)
    with mpmath.workdps(dps):
        rows, targets, params_list = [], [], []
        for i, z in enumerate(zs):
            zmp = np.array([mpmath.mpc(c) for c in z], dtype=object)
            vec, params, _ = _gamma_coeffs_at_z(setup, zmp, case)
            targets.append(vec)
            params_list.append(params)
            if case == "general":
                y1, y2 = params
                rows.append([y1 ** b * y2 ** c for (b, c) in basis])
            else:
                (v,) = params
                rows.append([v ** k for k in basis])
            if progress and (i + 1) % 25 == 0:
                progress(f"samples {i + 1}/{len(zs)}")
        a = mpmath.matrix(len(zs), nb)
        for i, r in enumerate(rows):
            for j, vv in enumerate(r):
                a[i, j] = vv
        if progress:
            progress("QR factorization")
        # QR on the rectangular system: the monomial basis on the reachable
        # parameter set is spectacularly ill conditioned, and normal
        # equations would square that
        q, rmat = mpmath.mp.qr(a)
        qh = q.H
        nw = len(targets[0])
        coeffs = np.empty((nw, nb), dtype=object)
        resid = 0.0
        for k in range(nw):
            b = mpmath.matrix([targets[i][k] for i in range(len(zs))])
            rhs_full = qh * b
            rhs = mpmath.matrix([rhs_full[i] for i in range(nb)])
            sol = mpmath.mp.U_solve(rmat[:nb, :nb], rhs)
            pred = a * mpmath.matrix(sol)
            num = max(abs(pred[i] - b[i]) for i in range(len(zs)))
            den = max(max(abs(b[i]) for i in range(len(zs))), mpmath.mpf("1e-300"))
            resid = max(resid, float(num / den))
            for j in range(nb):
                coeffs[k, j] = sol[j]
    if resid > 1e-6:
        raise FitResidualTooLarge(f"selector fit residual {resid:.3e}")
    if progress:
        progress(f"fit residual {resid:.2e}; calibrating root constant")
    return _finalize_table(case, basis, coeffs, resid, zs)


def _finalize_table(case, basis, coeffs, resid, zs):
    e10 = [tuple(int(v) for v in row) for row in exps(10)]
    widx = {e: i for i, e in enumerate(e10)}
    if case == "general":
        lead = coeffs[widx[ANCHOR_GENERAL_LEAD["monomial"]], basis.index(ANCHOR_GENERAL_LEAD["y"])]
        printed = mpmath.mpc(3) + mpmath.sqrt(mpmath.mpf(-15))
    else:
        lead = coeffs[widx[ANCHOR_SPECIAL_LEAD["monomial"]], basis.index(ANCHOR_SPECIAL_LEAD["v"])]
        printed = mpmath.mpc(1944)
    beta = complex(lead / printed)
    co = np.array([[complex(coeffs[i, j]) for j in range(coeffs.shape[1])]
                   for i in range(coeffs.shape[0])])
    table = SelectorTable(case, e10, basis, co, 1.0 + 0j, float(resid), beta)
    table.sel_const = _calibrate_root_constant(table, zs[:10])
    return table


def _calibrate_root_constant(table, zs):
    """Exact roots at known samples divided by the raw selector value.

    The cycle point is pushed back through the frame to identify which of
    the six roots it selects (the conic of the root system vanishing at
    its image); samples where the Newton polish slides to a badly scaled
    zero of the pair are discarded by majority clustering.
    """
    from .dynamics import polish_72point
    from .equivariants import registry
    from .projective import normalize_point
    from .resolvents import (instantiate_family, oracle_roots_general,
                             oracle_roots_special, quotient_v, quotient_y,
                             sigma_frame, tau_frame)

    reg = registry()
    inv = reg.inv
    conics = inv.conics_unbarred if table.case == "general" else inv.conics_barred
    consts = []
    for z in zs:
        if table.case == "general":
            params = quotient_y(inv, z)
            frame = tau_frame(z, inv, reg)
            roots = oracle_roots_general(inv, z)
        else:
            params = (quotient_v(inv, z),)
            frame = sigma_frame(z, inv, reg)
            roots = oracle_roots_special(inv, z)
        try:
            fam = instantiate_family(params, table.case)
            wt = np.linalg.solve(frame, np.array([1.0, 0, 0]))
            p_int = normalize_point(fam.from_table_coords(wt))
            p_int = polish_72point(fam, p_int)
        except Exception:
            continue
        y = frame @ fam.to_table_coords(p_int)
        y = y / np.linalg.norm(y)
        b = int(np.argmin([abs(c.eval(y)) for c in conics]))
        raw = selector_raw_value(table, fam, p_int)
        consts.append(roots[b] / raw)
    if len(consts) < 4:
        raise FitResidualTooLarge("too few usable calibration samples")
    consts = np.array(consts)
    # majority cluster around the median magnitude/phase
    med = np.median(consts.real) + 1j * np.median(consts.imag)
    close = np.abs(consts - med) < 1e-4 * abs(med)
    if np.sum(close) < max(3, len(consts) // 2):
        raise FitResidualTooLarge(
            f"root-constant calibration did not cluster: {consts}")
    cluster = consts[close]
    spread = float(np.max(np.abs(cluster / cluster[0] - 1)))
    if spread > 1e-4:
        raise FitResidualTooLarge(f"root-constant calibration drift {spread:.3e}")
    return complex(np.mean(cluster))


# --- cache ------------------------------------------------------------------------


def default_cache_dir():
    env = os.environ.get("VALENTINER_CACHE")
    if env:
        return Path(env)
    return Path(".valentiner_cache")


def load_or_fit_selectors(case="general", cache_dir=None, dps=70, progress=None):
    cache_dir = Path(cache_dir) if cache_dir else default_cache_dir()
    path = cache_dir / f"selector_{case}.json"
    if path.exists():
        return SelectorTable.from_json_dict(json.load(open(path)))
    from importlib import resources

    try:
        with resources.files("valentiner.data").joinpath(f"selector_{case}.json").open() as f:
            return SelectorTable.from_json_dict(json.load(f))
    except FileNotFoundError:
        pass
    table = fit_selectors(case, dps=dps, progress=progress)
    cache_dir.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(table.to_json_dict(), f)
    return table
