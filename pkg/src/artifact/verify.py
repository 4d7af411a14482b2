"""Registry of identity checks.

Each check computes the same quantity along two independent routes and reports
the largest discrepancy.  Discrepancies are measured after dividing by
max(1, |rhs|) entrywise, so one tolerance works across magnitudes.  Default
parameter grids live in grids.json next to this module.
"""

import itertools
import json
import time
from dataclasses import dataclass
from importlib import resources

import numpy as np
import sympy

from . import mks, repth
from .chars import MultChar, gauss_sum, inflate, orbit_rep
from .etale import BudgetError
from .expsums import (composite_char, composite_exotic_gauss, exotic_gauss,
                      exotic_gauss_product, kloosterman_table, lpolynomial,
                      lpolynomial_residuals, sign)
from .fields import orbit_degree
from .glq import enumerate_classes, gl_order, orbits_of_degree, tower_for

DEFAULT_TOL = 1e-6


@dataclass
class CheckReport:
    id: str
    params: dict
    lhs: list
    rhs: list
    abs_err: float
    tol: float
    passed: bool
    wall: float
    note: str = ""

    def to_dict(self, full=True):
        out = {"id": self.id, "params": _plain(self.params), "abs_err": float(f"{self.abs_err:.6g}"),
               "tol": self.tol, "pass": self.passed, "wall": round(self.wall, 3)}
        if full:
            out["lhs"] = [encode_complex(x) for x in self.lhs]
            out["rhs"] = [encode_complex(x) for x in self.rhs]
        if self.note:
            out["note"] = self.note
        return out

    def to_json(self, full=True):
        return json.dumps(self.to_dict(full), sort_keys=True)


def encode_complex(z, digits=12):
    z = complex(z)
    re = float(f"{z.real:.{digits}g}")
    im = float(f"{z.imag:.{digits}g}")
    return {"re": re + 0.0, "im": im + 0.0}


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def scaled_error(lhs, rhs):
    lhs = np.asarray(lhs, dtype=complex).ravel()
    rhs = np.asarray(rhs, dtype=complex).ravel()
    if lhs.size == 0:
        return 0.0
    return float(np.max(np.abs(lhs - rhs) / np.maximum(1.0, np.abs(rhs))))


# parameter helpers

def _chars(tower, level, regular=False, reps=True):
    q = tower.q
    out = []
    for j in range(q ** level - 1):
        if reps and orbit_rep(j, q, level) != j:
            continue
        if regular and orbit_degree(j, q, level) != level:
            continue
        out.append(MultChar(tower, level, j))
    return out


def composites(q, lam, regular=True, limit=None):
    """Composite characters for the partition lam, one per tuple of orbit representatives."""
    tower = tower_for(q)
    lam = tuple(sorted(lam, reverse=True))
    pools = [[a.index for a in _chars(tower, k, regular)] for k in lam]
    out = [composite_char(tower, lam, idx) for idx in itertools.product(*pools)]
    return out if limit is None else out[:limit]


def _alphas(params):
    q = params["q"]
    if "alpha" in params:
        from .expsums import parse_composite
        tower = tower_for(q)
        spec = params["alpha"]
        lam = "+".join(s.split(":")[0] for s in spec.split(","))
        return [parse_composite(tower, lam, spec)]
    return composites(q, params["lam"], params.get("regular", True), params.get("limit"))


# checks

REGISTRY = {}


def check(cid, tol=DEFAULT_TOL):
    def deco(fn):
        REGISTRY[cid] = (fn, tol)
        return fn
    return deco


@check("HD-GAUSS")
def _hd_gauss(p):
    tower = tower_for(p["q"])
    q, m, b = p["q"], p["m"], p["b"]
    lhs, rhs = [], []
    for chi in _chars(tower, m, reps=False):
        g = gauss_sum(chi)
        lhs += [g ** b, abs(g)]
        rhs += [gauss_sum(inflate(chi, b * m)), q ** (m / 2) if chi.index else 1.0]
    return lhs, rhs


@check("HD-EXOTIC")
def _hd_exotic(p):
    """Direct sum against the product formula, and both Hasse-Davenport lifts."""
    tower = tower_for(p["q"])
    lam, m, b = tuple(p["lam"]), p["m"], p.get("b", 1)
    lhs, rhs = [], []
    for alpha in composites(p["q"], lam, regular=False):
        for chi in _chars(tower, m, reps=False):
            g = composite_exotic_gauss(alpha, m, chi)
            lhs.append(composite_exotic_gauss(alpha, m, chi, path="direct"))
            rhs.append(g)
            if b > 1:
                lhs.append(g ** b)
                rhs.append(composite_exotic_gauss(alpha, b * m, inflate(chi, b * m)))
                if alpha.s == 1:
                    a = alpha.chars[0]
                    lhs.append(exotic_gauss_product(a.level, m, a, chi) ** b)
                    rhs.append(exotic_gauss_product(b * a.level, m, inflate(a, b * a.level), chi))
    return lhs, rhs


@check("EXOTIC-GAUSS")
def _exotic_gauss(p):
    """Defining sum of tau_{k,m} against the product formula, all characters."""
    tower = tower_for(p["q"])
    k, m = p["k"], p["m"]
    lhs, rhs = [], []
    for a in _chars(tower, k, reps=False):
        for chi in _chars(tower, m, reps=False):
            lhs.append(exotic_gauss(k, m, a, chi))
            rhs.append(exotic_gauss_product(k, m, a, chi))
    return lhs, rhs


@check("GAUSS-KL-TRANSFORM")
def _gauss_kl(p):
    tower = tower_for(p["q"])
    m = p["m"]
    lhs, rhs = [], []
    for alpha in composites(p["q"], p["lam"], regular=False):
        V = kloosterman_table(alpha, m, "brute")
        sg = sign(alpha.k, alpha.s, m)
        for chi in _chars(tower, m, reps=False):
            lhs.append(composite_exotic_gauss(alpha, m, chi))
            rhs.append(sg * np.dot(V, chi.values()))
    return lhs, rhs


@check("L-PURITY", tol=1.0)
def _purity(p):
    """Series tail (tolerance 1e-6) and root moduli (tolerance 1e-4), in units of tolerance."""
    tower = tower_for(p["q"])
    a = p["a"]
    tails, devs = [], []
    for alpha in composites(p["q"], p["lam"], p.get("regular", False), p.get("limit")):
        for t in sorted({orbit_rep(t, p["q"], a) for t in range(p["q"] ** a - 1)}):
            tail, _, pur = lpolynomial_residuals(lpolynomial(alpha, a, tower.from_log(a, t)))
            tails.append(tail)
            devs.append(pur)
    err = max(max(tails) / 1e-6, max(devs) / 1e-4)
    return [max(tails), max(devs)], [0.0, 0.0], err


def _irreps(q, c):
    return repth.green_parameters(q, c)


@check("KONDO")
def _kondo(p):
    q, c = p["q"], p["c"]
    tower = tower_for(q)
    lhs, rhs = [], []
    for phi in _irreps(q, c):
        for chi in _chars(tower, 1, reps=False):
            lhs.append(repth.kondo_scalar(phi, chi, "brute", p.get("budget")))
            rhs.append(repth.kondo_scalar(phi, chi, "kondo"))
    return lhs, rhs


@check("EXOTIC-KONDO")
def _exotic_kondo(p):
    """Trace sum over GL_c(F_{q^k}) against the exotic Gauss sum product."""
    q, c = p["q"], p["c"]
    lhs, rhs = [], []
    for alpha in composites(q, p["lam"], regular=False, limit=p.get("limit")):
        for phi in _irreps(q, c):
            lhs.append(repth.kondo_scalar(phi, alpha, "brute", p.get("budget")))
            rhs.append(repth.kondo_scalar(phi, alpha, "closed"))
    return lhs, rhs


@check("HD-KONDO")
def _hd_kondo(p):
    q, c, k, kp = p["q"], p["c"], p["k"], p["kp"]
    tower = tower_for(q)
    m = k // kp
    lhs, rhs = [], []
    for chip in _chars(tower, kp, reps=False):
        chi = inflate(chip, k)
        for phi in _irreps(q, c):
            lhs.append(repth.kondo_scalar(phi, chi, "brute", p.get("budget")))
            rhs.append((-1) ** (c * (m - 1)) * repth.kondo_scalar(phi, chip, "brute") ** m)
    return lhs, rhs


@check("MKS-DEF")
def _mks_def(p):
    q, c = p["q"], p["c"]
    sizes = repth.class_sizes(q, c)
    lhs, rhs = [], []
    for alpha in _alphas(p):
        K = mks.mks_convolve_function(alpha, c, p.get("budget"))
        for phi in _irreps(q, c):
            ch = repth.irreducible_character(phi)
            lhs.append(q ** (-alpha.k * c * c / 2) * np.sum(sizes * K.values * ch.values))
            rhs.append(repth.dimension(phi) * repth.kondo_scalar(phi, alpha, "closed"))
    return lhs, rhs


@check("MKS-REDUCE")
def _mks_reduce(p):
    q, c, k, kp = p["q"], p["c"], p["k"], p["kp"]
    tower = tower_for(q)
    lhs, rhs = [], []
    scale = q ** (-(k - 1) * c * c / 2)
    for chip in _chars(tower, kp, reps=False):
        r = mks.mks_reduce_nonregular(inflate(chip, k), kp, c, p.get("budget"))
        lhs += list(r["lhs"] * scale)
        rhs += list(r["rhs"] * scale)
    return lhs, rhs


@check("EPS-GAMMA")
def _eps_gamma(p):
    """Gamma factor from the Bessel-Speh sum against epsilon_0, and the exotic Kondo
    scalar against epsilon_0 of the contragredients."""
    q, c = p["q"], p["c"]
    lhs, rhs = [], []
    for alpha in _alphas(p):
        k, s = alpha.k, alpha.s
        phi_tau = repth.generic_parameter(alpha)
        phi_tau_dual = repth.generic_parameter(alpha.inverse())
        B = repth.bessel_speh_function(alpha, c) if p.get("gamma", True) else None
        for phi in _irreps(q, c):
            if B is not None:
                lhs.append(repth.gamma_GK(phi, alpha, B=B))
                rhs.append(repth.epsilon0(phi, phi_tau))
            lhs.append(repth.kondo_scalar(phi, alpha, "closed"))
            rhs.append((-1) ** ((k + s) * c) * repth.epsilon0(phi.contragredient(), phi_tau_dual))
    return lhs, rhs


@check("BS-MULT-TAU")
def _bs_mult_tau(p):
    tower = tower_for(p["q"])
    a1 = MultChar(tower, *p["alpha1"])
    a2 = MultChar(tower, *p["alpha2"])
    B, C = mks.bessel_tau_multiplicativity(a1, a2, p["c"])
    return B.values, C.values


@check("BS-MULT-CLASS")
def _bs_mult_class(p):
    lhs, rhs = [], []
    for alpha in _alphas(p):
        for row in mks.bessel_class_multiplicativity(alpha, p["c1"], p["c2"]):
            lhs.append(row[2])
            rhs.append(row[3])
    return lhs, rhs


@check("BS-KLOOSTERMAN")
def _bs_kloosterman(p):
    lhs, rhs = [], []
    for alpha in _alphas(p):
        B, R = mks.bessel_kloosterman(alpha, p["c"], p.get("path"))
        lhs += list(B)
        rhs += list(R)
    return lhs, rhs


@check("MKS-MULT")
def _mks_mult(p):
    """Unipotent average and disjoint-spectrum factorization, on normalized values."""
    q, c1, c2 = p["q"], p["c1"], p["c2"]
    lhs, rhs = [], []
    for alpha in _alphas(p):
        k = alpha.k
        scale = q ** (-(k - 1) * (c1 + c2) ** 2 / 2)
        for l1, l2, avg, block, prodv in mks.mks_multiplicativity(alpha, c1, c2):
            lhs.append(avg * scale)
            rhs.append(prodv * scale)
            if not set(l1.orbits()) & set(l2.orbits()):
                lhs.append(block * scale)
                rhs.append(prodv * scale)
    return lhs, rhs


@check("MKS-HL")
def _mks_hl(p):
    """Convolution against Hall-Littlewood on every class (normalized), the regular-class
    symmetric-power form, and the explicit Bessel-Speh formula when kc <= 4."""
    q, c = p["q"], p["c"]
    labels = enumerate_classes(q, c)
    lhs, rhs = [], []
    for alpha in _alphas(p):
        k = alpha.k
        K = mks.mks_convolve_function(alpha, c, p.get("budget"))
        for lab in labels:
            hl = mks.mks_normalized(mks.MKSQuery(alpha, lab), "hl")
            lhs.append(mks.normalize(K(lab), q, k, c))
            rhs.append(hl)
            if all(len(mu) == 1 for _, mu in lab.blocks):
                lhs.append(mks.cycle_kstar(alpha, lab))
                rhs.append(hl)
        if k * c <= p.get("bessel_max", 4) and k > 1:
            B = repth.bessel_speh_function(alpha, c)
            for lab in labels:
                lhs.append(q ** ((k - 1) * c * c / 2) * B(lab))
                rhs.append(mks.bessel_speh_hl(alpha, lab))
    return lhs, rhs


@check("CHMAP")
def _chmap(p):
    """Orthonormality of the Green character table through both inner products,
    dimensions against the hook formula, and the forward/inverse round trip."""
    q, n = p["q"], p["n"]
    params, table = repth.character_table(q, n)
    sizes = repth.class_sizes(q, n)
    gram = (table * sizes) @ table.conj().T / gl_order(n, q)
    lhs = list(gram.ravel())
    rhs = list(np.eye(len(params)).ravel())
    chars = [repth.irreducible_character(phi) for phi in params]
    images = [repth.charmap(ch) for ch in chars]
    for i, j in itertools.combinations_with_replacement(range(len(params)), 2):
        lhs.append(repth.lambda_inner(images[i], images[j]))
        rhs.append(chars[i].inner(chars[j]))
    idl = repth.identity_label(n)
    for phi, ch in zip(params, chars):
        lhs.append(ch(idl))
        rhs.append(repth.dimension(phi))
    for d in range(1, n + 1):
        for (_, j) in orbits_of_degree(q, d):
            for r in range(1, n // d + 1):
                lhs.append(repth.roundtrip_error(q, (d, j), r))
                rhs.append(0.0)
    return lhs, rhs


@check("GLOBAL-G", tol=1e-5)
def _global(p):
    lhs, rhs = [], []
    for alpha in _alphas(p):
        for n in range(1, p["n"] + 1):
            r = mks.global_truncation(alpha, n)
            lhs += list(r["charmap"]) * 2
            rhs += list(r["geometric"]) + list(r["character"])
    return lhs, rhs


@check("WHITTAKER")
def _whittaker(p):
    lhs, rhs = [], []
    for alpha in _alphas(p):
        for _, w, f in mks.whittaker_check(alpha, p["c"]):
            lhs.append(w)
            rhs.append(f)
    return lhs, rhs


@check("ZEROCYCLE")
def _zerocycle(p):
    q, c = p["q"], p["c"]
    lhs, rhs = [], []
    for alpha in _alphas(p):
        k = alpha.k
        phi = repth.generic_parameter(alpha)
        ch = repth.irreducible_character(phi)
        for t1 in range(q - 1):
            for t2 in range(q - 1):
                M = mks.voronoi_matrix(q, k, c, t1, t2)
                lhs.append(q ** (((c - 1) + (k - c) + (c - 1) * (k - c)) / 2)
                           * repth.bessel(phi, M, ch))
                rhs.append((-1) ** ((k + alpha.s) * c) * q ** (-(c - 1) / 2)
                           * mks.zero_cycle_sum(alpha, c, t1, t2))
    return lhs, rhs


@check("GENSERIES")
def _genseries(p):
    """Inverted Bessel series against the Bessel-Speh series (both to T^order), plus the
    direct Speh average for small r."""
    q = p["q"]
    order = p.get("order", 4)
    lhs, rhs = [], []
    for alpha in _alphas(p):
        for x in range(q - 1):
            g = mks.generating_series(alpha, x, order, p.get("direct", 2))
            lhs += list(g["inverse"]) + list(g["speh_direct"])
            rhs += list(g["bessel_speh"]) + list(g["bessel_speh"][:len(g["speh_direct"])])
    return lhs, rhs


@check("BOUNDS", tol=1e-9)
def _bounds(p):
    """Excess of |K*| over the flag count; regular classes also against the binomial."""
    q, c = p["q"], p["c"]
    excess = [0.0]
    lhs, rhs = [], []
    for alpha in _alphas(p):
        k = alpha.k
        for lab in enumerate_classes(q, c):
            v = abs(mks.mks_normalized(mks.MKSQuery(alpha, lab), "hl"))
            b = mks.flag_bound(lab, k, q)
            lhs.append(v)
            rhs.append(b)
            excess.append(v - b)
            if all(len(mu) == 1 for _, mu in lab.blocks):
                excess.append(abs(b - mks.regular_bound(lab, k)))
    return lhs, rhs, max(0.0, max(excess))


# Speh character of GL_4 for a cuspidal tau of GL_2, as polynomials in q.  Each row lists
# blocks (degree a, Jordan type, variable); T(x), Tq(x) are theta(N x) and theta^q(N x)
# with N the norm to F_{q^2} (or the inclusion for degree 1).
SPEH_TABLE = [
    ([(4, (1,), "x")], "T(x) + Tq(x)"),
    ([(2, (1,), "x"), (2, (1,), "y")], "(T(x) + Tq(x))*(T(y) + Tq(y))"),
    ([(2, (1,), "y"), (1, (2,), "x")], "T(x)*T(y) + T(x)*Tq(y)"),
    ([(2, (1,), "y"), (1, (1, 1), "x")], "(1 - q)*(T(x)*T(y) + T(x)*Tq(y))"),
    ([(2, (2,), "x")], "T(x)**2 + Tq(x)**2 + T(x)*Tq(x)"),
    ([(2, (1, 1), "x")], "(q**2 + 1)*T(x)*Tq(x) + T(x)**2 + Tq(x)**2"),
    ([(1, (2,), "x"), (1, (2,), "y")], "T(x)*T(y)"),
    ([(1, (2,), "x"), (1, (1, 1), "y")], "(1 - q)*T(x)*T(y)"),
    ([(1, (1, 1), "x"), (1, (1, 1), "y")], "(q**2 - 2*q + 1)*T(x)*T(y)"),
    ([(1, (4,), "x")], "T(x)**2"),
    ([(1, (3, 1), "x")], "(1 - q)*T(x)**2"),
    ([(1, (2, 2), "x")], "(q**2 - q + 1)*T(x)**2"),
    ([(1, (2, 1, 1), "x")], "(1 - q)*T(x)**2"),
    ([(1, (1, 1, 1, 1), "x")], "(q**4 - q**3 - q + 1)*T(x)**2"),
]


def _match_row(pattern, label):
    """Variable binding (name -> (a, j)) if the class has the row's shape."""
    blocks = list(label.blocks)
    if len(blocks) != len(pattern):
        return None
    for perm in itertools.permutations(blocks):
        binding = {}
        if all(a == pa and mu == pmu and binding.setdefault(v, (a, j)) == (a, j)
               for ((a, j), mu), (pa, pmu, v) in zip(perm, pattern)):
            if len(set(binding.values())) == len(binding):
                return binding
    return None


def speh_table_value(q, theta_index, row, binding):
    """Evaluate a table row at q for theta the level-2 character with the given index."""
    qs = sympy.Symbol("q")
    T, Tq = sympy.Function("T"), sympy.Function("Tq")
    names = {v: sympy.Symbol(v) for v in binding}
    expr = sympy.sympify(row, locals={"q": qs, "T": T, "Tq": Tq, **names}).subs(qs, q)
    N2 = q * q - 1
    reps = {}
    for v, (a, j) in binding.items():
        t = j % N2 if a != 1 else j * (q + 1)
        reps[T(names[v])] = sympy.exp(2 * sympy.pi * sympy.I * sympy.Rational(theta_index * t % N2, N2))
        reps[Tq(names[v])] = sympy.exp(2 * sympy.pi * sympy.I * sympy.Rational(theta_index * q * t % N2, N2))
    return complex(sympy.N(expr.subs(reps), 30))


def speh_table_rows(q, j):
    """(label, table row index, table value, computed value) over the support, plus
    classes where only the computed character is nonzero."""
    tower = tower_for(q)
    ch = repth.speh_character(MultChar(tower, 2, j), 2)
    out = []
    for lab, val in zip(ch.labels, ch.values):
        hit = None
        for i, (pattern, expr) in enumerate(SPEH_TABLE):
            binding = _match_row(pattern, lab)
            if binding is not None:
                hit = (i, speh_table_value(q, j, expr, binding))
                break
        if hit is None:
            out.append((lab, None, 0j, complex(val)))
        else:
            out.append((lab, hit[0], hit[1], complex(val)))
    return out


@check("APPENDIX-TABLE")
def _appendix(p):
    q = p["q"]
    lhs, rhs = [], []
    rows = set()
    for (_, j) in orbits_of_degree(q, 2):
        for lab, i, tv, cv in speh_table_rows(q, j):
            lhs.append(cv)
            rhs.append(tv)
            if i is not None:
                rows.add(i)
    return lhs, rhs, scaled_error(lhs, rhs), f"{len(rows)} table rows instantiated"


# running

def _grids():
    text = resources.files("artifact").joinpath("grids.json").read_text()
    return json.loads(text)


def default_grid(cid):
    return _grids().get(cid, [])


def run_check(cid, params=None, **kw):
    if cid not in REGISTRY:
        raise KeyError(f"unknown check {cid!r}")
    params = dict(params or {}, **kw)
    fn, tol = REGISTRY[cid]
    tol = params.pop("tol", tol)
    t0 = time.perf_counter()
    note = ""
    try:
        out = fn(params)
    except BudgetError as exc:
        return CheckReport(cid, params, [], [], float("inf"), tol, False,
                           time.perf_counter() - t0, f"budget exceeded: {exc.size}")
    lhs, rhs = out[0], out[1]
    err = out[2] if len(out) > 2 else scaled_error(lhs, rhs)
    if len(out) > 3:
        note = out[3]
    lhs = [complex(x) for x in np.asarray(lhs, dtype=complex).ravel()]
    rhs = [complex(x) for x in np.asarray(rhs, dtype=complex).ravel()]
    return CheckReport(cid, params, lhs, rhs, float(err), tol, bool(err <= tol),
                       time.perf_counter() - t0, note)


def run_grid(cid, overrides=None):
    """Run the default grid of a check; overrides filter grid points (q=2 keeps
    points with q == 2) or, if nothing matches, become a single parameter point."""
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    grid = default_grid(cid)
    points = [g for g in grid if all(g.get(k) == v for k, v in overrides.items())]
    if not points and overrides:
        base = dict(grid[0]) if grid else {}
        base.update(overrides)
        points = [base]
    return [run_check(cid, pt) for pt in points]


def run_all(overrides=None):
    for cid in REGISTRY:
        yield from run_grid(cid, overrides)
