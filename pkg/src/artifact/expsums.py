"""Exotic Gauss sums, exotic Kloosterman sums and their L-polynomials.

Sums over units of F_lam (x) F_m are reduced to one histogram indexed by
(N1 logs, N2 log, trace); every character pair is then read off with an FFT.
Kloosterman sums have three routes: the fiber histogram ("brute"), Fourier
inversion of product-formula Gauss sums ("fourier"), and a table-free walk over
the fiber inside a large field ("fiber", single part coprime to m).
"""

import itertools
import os
from dataclasses import dataclass
from math import gcd, prod

import numpy as np

from .chars import MultChar, TWO_PI_I, gauss_sums, orbit_rep
from .etale import BudgetError, EtaleAlgebra, lcm, parse_partition, resolve_budget
from .fields import BigField, FieldElement, FieldError

CHUNK = 1 << 20


def sign(k, s, m):
    return -1 if (k + s * m + m * k) % 2 else 1


@dataclass(frozen=True)
class CompositeChar:
    parts: tuple
    chars: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        object.__setattr__(self, "chars", tuple(self.chars))
        if len(self.parts) != len(self.chars):
            raise FieldError("one character per part")
        for k, a in zip(self.parts, self.chars):
            if a.level != k:
                raise FieldError(f"character at level {a.level} for part {k}")

    @property
    def tower(self):
        return self.chars[0].tower

    @property
    def k(self):
        return sum(self.parts)

    @property
    def s(self):
        return len(self.parts)

    @property
    def indices(self):
        return tuple(a.index for a in self.chars)

    def inverse(self):
        return CompositeChar(self.parts, tuple(a.inverse() for a in self.chars))

    def __str__(self):
        return "x".join(f"{a.level}:{a.index}" for a in self.chars)


def composite_char(tower, parts, indices):
    parts = tuple(parts)
    return CompositeChar(parts, tuple(MultChar(tower, k, j) for k, j in zip(parts, indices)))


def parse_composite(tower, lam, alpha):
    """lam like '2+1'; alpha a comma list of indices (or 'level:index')."""
    parts = parse_partition(lam) if isinstance(lam, str) else tuple(lam)
    items = [x for x in str(alpha).split(",") if x.strip()] if alpha not in (None, "") else []
    if not items:
        items = ["0"] * len(parts)
    if len(items) != len(parts):
        raise FieldError(f"need {len(parts)} characters, got {len(items)}")
    idx = []
    for k, it in zip(parts, items):
        if ":" in it:
            lvl, j = it.split(":")
            if int(lvl) != k:
                raise FieldError(f"character level {lvl} does not match part {k}")
            idx.append(int(j))
        else:
            idx.append(int(it))
    return composite_char(tower, parts, idx)


def _cache(tower):
    c = getattr(tower, "_sum_cache", None)
    if c is None:
        c = {}
        tower._sum_cache = c
    return c


def unit_histogram(tower, parts, m, budget=None):
    """Counts of units z of F_lam (x) F_m by (N1 log per part, N2 log, Tr z in F_p).

    Enumeration runs over per-coordinate discrete logs in fixed chunks, so the
    result is independent of chunking and exact.
    """
    budget = resolve_budget(budget)
    parts = tuple(parts)
    alg = EtaleAlgebra(tower, parts)
    size = alg.unit_count(m)
    if size > budget:
        raise BudgetError(size, budget)
    key = ("hist", parts, m)
    c = _cache(tower)
    if key in c:
        return c[key]
    q, p = tower.q, tower.p
    Nm = q ** m - 1
    shape = alg.shape(m)
    coords = []  # (component, position in component, level)
    for i, (l, d) in enumerate(shape):
        tower.level(l)
        coords.extend((i, j, l) for j in range(d))
    sizes = [q ** l - 1 for _, _, l in coords]
    # trailing coordinates are vectorized, leading ones looped
    split, inner = len(sizes), 1
    while split > 0 and (inner == 1 or inner * sizes[split - 1] <= CHUNK):
        split -= 1
        inner *= sizes[split]
    inner_grid = np.indices(sizes[split:], dtype=np.int64).reshape(len(sizes) - split, -1)
    Nk = [q ** k - 1 for k in parts]
    hshape = tuple(Nk) + (Nm, p)
    hist = np.zeros(int(np.prod(hshape)), dtype=np.int64)
    w2 = [pow(q, j, Nm) for _, j, _ in coords]
    for outer in itertools.product(*[range(n) for n in sizes[:split]]):
        logs = [np.full(inner, e, dtype=np.int64) for e in outer] + list(inner_grid)
        n1 = [0] * len(parts)
        sums = [None] * len(parts)
        n2 = np.zeros(inner, dtype=np.int64)
        for (i, j, l), e, w in zip(coords, logs, w2):
            n1[i] = n1[i] + e
            n2 = (n2 + e * w) % Nm
            sums[i] = 1 + e if sums[i] is None else tower.level(l).vadd(sums[i], 1 + e)
        tr = np.zeros(inner, dtype=np.int64)
        for (l, d), sm in zip(shape, sums):
            tr += tower.level(l).trp[sm]
        idx = np.zeros(inner, dtype=np.int64)
        for i in range(len(parts)):
            idx = idx * Nk[i] + n1[i] % Nk[i]
        idx = (idx * Nm + n2) * p + tr % p
        hist += np.bincount(idx, minlength=hist.size)
    hist = hist.reshape(hshape)
    c[key] = hist
    return hist


def _psi_weights(p):
    return np.exp(TWO_PI_I * np.arange(p) / p)


def _direct_table(tower, parts, m, budget=None):
    """S[a_1..a_s, b] = sum over units of prod alpha_i(N1) chi_b(N2) psi(Tr), unsigned."""
    cap = resolve_budget(budget)
    size = EtaleAlgebra(tower, parts).unit_count(m)
    if size > cap:
        raise BudgetError(size, cap)
    key = ("gtable", tuple(parts), m)
    c = _cache(tower)
    if key not in c:
        H = unit_histogram(tower, parts, m, budget)
        V = H @ _psi_weights(tower.p)
        c[key] = np.fft.ifftn(V) * V.size
    return c[key]


def exotic_gauss(k, m, alpha, chi, budget=None):
    """Defining sum over units of F_k (x) F_m, with sign (-1)^{k+m+km}."""
    if alpha.level != k or chi.level != m:
        raise FieldError("character levels do not match (k, m)")
    S = _direct_table(alpha.tower, (k,), m, budget)
    return complex(sign(k, 1, m) * S[alpha.index, chi.index])


def _product_values(alpha, m, chi_idx):
    """prod_j tau(alpha o N * chi^{q^j} o N, psi_l) for an array of chi indices at level m."""
    tower, k = alpha.tower, alpha.level
    q = tower.q
    l, d = lcm(k, m), gcd(k, m)
    if l > tower.max_deg:
        raise FieldError(f"level {l} above max_deg {tower.max_deg}")
    G = gauss_sums(tower, l)
    Nl = q ** l - 1
    rk, rm = Nl // (q ** k - 1), Nl // (q ** m - 1)
    chi_idx = np.asarray(chi_idx, dtype=np.int64)
    out = np.ones(chi_idx.shape, dtype=complex)
    for j in range(d):
        out = out * G[(alpha.index * rk + (chi_idx * pow(q, j, Nl)) % Nl * rm) % Nl]
    return out


def exotic_gauss_product(k, m, alpha, chi):
    if alpha.level != k or chi.level != m:
        raise FieldError("character levels do not match (k, m)")
    return complex(_product_values(alpha, m, chi.index))


def composite_exotic_gauss(alpha, m, chi, path="product", budget=None):
    """tau_{lam, m}(alpha, chi).  path='product' multiplies the per-part product
    formulas; path='direct' is the single signed sum over units of F_lam (x) F_m."""
    if chi.level != m:
        raise FieldError("chi must be at level m")
    if path == "product":
        return complex(prod(_product_values(a, m, chi.index) for a in alpha.chars))
    if path == "direct":
        S = _direct_table(alpha.tower, alpha.parts, m, budget)
        return complex(sign(alpha.k, alpha.s, m) * S[alpha.indices + (chi.index,)])
    raise ValueError(f"unknown path {path!r}")


# Kloosterman sums

def _kl_brute(alpha, M, budget):
    H = unit_histogram(alpha.tower, alpha.parts, M, budget)
    V = H @ _psi_weights(alpha.tower.p)
    for a in alpha.chars:
        V = np.tensordot(a.values(), V, axes=([0], [0]))
    return V


def _kl_fourier(alpha, M):
    tower = alpha.tower
    Nm = tower.q ** M - 1
    b = np.arange(Nm, dtype=np.int64)
    T = np.ones(Nm, dtype=complex)
    for a in alpha.chars:
        T = T * _product_values(a, M, b)
    return sign(alpha.k, alpha.s, M) * np.fft.fft(T) / Nm


def kloosterman_table(alpha, M, path="auto", budget=None):
    """Kl_M(alpha, psi, g_M^t) for all t (brute/fourier), cached per alpha."""
    tower = alpha.tower
    if path == "auto":
        path = _auto_path(alpha, M, budget)
    if path == "brute":
        # checked before the cache so a cached table never bypasses the budget
        cap = resolve_budget(budget)
        size = EtaleAlgebra(tower, alpha.parts).unit_count(M)
        if size > cap:
            raise BudgetError(size, cap)
    key = ("kl", alpha.parts, alpha.indices, M, path)
    c = _cache(tower)
    if key in c:
        return c[key]
    if path == "brute":
        val = _kl_brute(alpha, M, budget)
    elif path == "fourier":
        val = _kl_fourier(alpha, M)
    else:
        raise ValueError(f"no full table for path {path!r}")
    c[key] = val
    return val


def _auto_path(alpha, M, budget=None):
    tower = alpha.tower
    alg = EtaleAlgebra(tower, alpha.parts)
    fits = all(lcm(k, M) <= tower.max_deg for k in alpha.parts)
    if fits and alg.unit_count(M) <= min(resolve_budget(budget), 2 * 10 ** 6):
        return "brute"
    if fits:
        return "fourier"
    if alpha.s == 1 and gcd(alpha.k, M) == 1:
        return "fiber"
    raise BudgetError(alg.unit_count(M), resolve_budget(budget))


def kloosterman_log(alpha, M, t, path="auto", budget=None):
    """Kl_M(alpha, psi, xi) for xi with discrete log t at level M."""
    tower = alpha.tower
    Nm = tower.q ** M - 1
    t = orbit_rep(t, tower.q, M)
    if path == "auto":
        path = _auto_path(alpha, M, budget)
    if path == "fiber":
        k = alpha.k
        H = fiber_histogram(tower, k, M, t)
        V = H @ _psi_weights(tower.p)
        return complex(alpha.chars[0].values() @ V)
    return complex(kloosterman_table(alpha, M, path, budget)[t % Nm])


def _xi_log(xi, level):
    if not isinstance(xi, FieldElement):
        raise FieldError("xi must be a FieldElement")
    if xi.is_zero():
        raise FieldError("xi must be nonzero")
    if xi.level != level:
        raise FieldError(f"xi must lie at level {level}")
    return xi.dlog()


def kloosterman(alpha, a, m, xi, path="auto", budget=None):
    """Kl_{m, F_a}(alpha, psi, xi) for xi at level a*m; equals Kl_{am}."""
    t = _xi_log(xi, a * m)
    return kloosterman_log(alpha, a * m, t, path, budget)


def kloosterman_normalized(alpha, a, m, xi, path="auto", budget=None):
    q = alpha.tower.q
    return kloosterman(alpha, a, m, xi, path, budget) * q ** (-(alpha.k - 1) * a * m / 2)


# table-free fiber walk

try:
    import numba

    @numba.njit(cache=True)
    def _fiber_kernel(codes, a_giant, tabs, starts, cvals, Nk, p, hist):
        # baby steps are pre-sorted by their N1 class; count traces per class
        G, ng = codes.shape
        B = tabs.shape[2]
        smax = ng * (p - 1)
        cnt = np.zeros(smax + 1, dtype=np.int64)
        srow = np.empty(B, dtype=np.uint8)
        for i in range(G):
            srow[:] = tabs[0, codes[i, 0]]
            for g in range(1, ng):
                srow += tabs[g, codes[i, g]]
            ai = a_giant[i]
            for c in range(len(cvals)):
                cnt[:] = 0
                for r in range(starts[c], starts[c + 1]):
                    cnt[srow[r]] += 1
                a = ai + cvals[c]
                if a >= Nk:
                    a -= Nk
                for v in range(smax + 1):
                    hist[a * p + v % p] += cnt[v]
except ImportError:  # pragma: no cover
    numba = None
    _fiber_kernel = None


def _fiber_kernel_numpy(codes, a_giant, tabs, starts, cvals, Nk, p, hist):
    G, ng = codes.shape
    a_baby = np.repeat(cvals, np.diff(starts))
    for i in range(G):
        s = np.zeros(tabs.shape[2], dtype=np.int64)
        for g in range(ng):
            s += tabs[g, codes[i, g]]
        a = (a_giant[i] + a_baby) % Nk
        hist += np.bincount(a * p + s % p, minlength=hist.size)


def _bigfield(tower, k, M):
    key = ("big", k, M)
    c = _cache(tower)
    if key not in c:
        c[key] = BigField(tower, k * M, [k, M])
    return c[key]


def _giant_codes_py(y, MB, pw, Gf, p):
    ng, n = pw.shape
    codes = np.empty((Gf, ng), dtype=np.int64)
    y = y.copy()
    z = np.empty(n, dtype=np.int64)
    for i in range(Gf):
        for g in range(ng):
            acc = 0
            for j in range(n):
                acc += pw[g, j] * y[j]
            codes[i, g] = acc
        for a in range(n):
            acc = 0
            for j in range(n):
                acc += MB[a, j] * y[j]
            z[a] = acc % p
        y[:] = z
    return codes, y


if numba is not None:
    _giant_codes = numba.njit(cache=True)(_giant_codes_py)
else:  # pragma: no cover
    _giant_codes = _giant_codes_py


def _fiber_setup(tower, k, M, baby):
    key = ("fiber-setup", k, M, baby)
    c = _cache(tower)
    if key in c:
        return c[key]
    q, p = tower.q, tower.p
    F = _bigfield(tower, k, M)
    n = F.n
    Nm, Nk = q ** M - 1, q ** k - 1
    J = F.N // Nm
    B = min(baby, J)
    u = F.pow(F.g, Nm)
    # phi_r[c] = Tr(x^c u^r); multiplication operators commute, so phi_{r+1} = M_u^T phi_r
    phis = np.empty((B, n), dtype=np.int64)
    phi = F.trace_coeffs.copy()
    MuT = F.mul_matrix(u).T.copy()
    for r in range(B):
        phis[r] = phi
        phi = MuT @ phi % p
    width = 1
    while p ** (width + 1) <= 1024 and width + 1 <= n:
        width += 1
    groups = [list(range(s, min(n, s + width))) for s in range(0, n, width)]
    tabs = np.zeros((len(groups), p ** width, B), dtype=np.uint8)
    pw = np.zeros((len(groups), n), dtype=np.int64)
    for gi, cols in enumerate(groups):
        vals = np.arange(p ** len(cols))
        dig = np.stack([(vals // p ** j) % p for j in range(len(cols))], axis=1)
        tabs[gi, :len(vals)] = (dig @ phis[:, cols].T) % p
        pw[gi, cols] = p ** np.arange(len(cols))
    a_baby = (Nm * np.arange(B, dtype=np.int64)) % Nk
    order = np.argsort(a_baby, kind="stable")
    tabs = np.ascontiguousarray(tabs[:, :, order])
    cvals, counts = np.unique(a_baby, return_counts=True)
    starts = np.concatenate([[0], np.cumsum(counts)])
    MB = F.mul_matrix(F.pow(u, B))
    out = dict(F=F, J=J, B=B, phis=phis, tabs=tabs, pw=pw, starts=starts, cvals=cvals, MB=MB)
    c[key] = out
    return out


def fiber_histogram(tower, k, M, t0, baby=1 << 14):
    """Counts over x in F_{q^{kM}} with N(x) = g_M^{t0} by (N_{kM/k} log, Tr x),
    for gcd(k, M) = 1.  Baby-step giant-step over the fiber with trace functionals."""
    if gcd(k, M) != 1:
        raise FieldError("fiber walk needs gcd(k, M) = 1")
    key = ("fiber", k, M, t0)
    c = _cache(tower)
    if key in c:
        return c[key]
    q, p = tower.q, tower.p
    S = _fiber_setup(tower, k, M, baby)
    F, J, B = S["F"], S["J"], S["B"]
    Nm, Nk = q ** M - 1, q ** k - 1
    # giant states y_i = g^{t0} u^{B i}; the last, partial block is done directly
    Gf = J // B
    y0 = F.vec(F.pow(F.g, t0))
    codes, y = _giant_codes(y0, S["MB"], S["pw"], Gf, p)
    a_giant = (t0 + Nm * B * np.arange(Gf, dtype=np.int64)) % Nk
    hist = np.zeros(Nk * p, dtype=np.int64)
    use_numba = _fiber_kernel is not None and os.environ.get("ARTIFACT_NO_NUMBA") is None
    kernel = _fiber_kernel if use_numba else _fiber_kernel_numpy
    kernel(codes, a_giant, S["tabs"], S["starts"], S["cvals"], Nk, p, hist)
    rest = J - Gf * B
    if rest:
        tr = (S["phis"][:rest] @ y) % p
        a = (t0 + Nm * (Gf * B + np.arange(rest, dtype=np.int64))) % Nk
        hist += np.bincount(a * p + tr, minlength=hist.size)
    hist = hist.reshape(Nk, p)
    c[key] = hist
    return hist


# L-polynomials

@dataclass
class LPolynomial:
    a: int
    coeffs: np.ndarray  # c_0..c_k of L*(T), c_0 = 1
    roots: np.ndarray  # normalized roots
    power_sums: np.ndarray  # (-1)^{k-1} Kl*_m for m = 1..len

    @property
    def k(self):
        return len(self.coeffs) - 1

    def __call__(self, T):
        return complex(np.polyval(self.coeffs[::-1], T))

    def series(self, order):
        """Coefficients of exp(-sum p_m T^m / m) up to T^order, using the stored power sums."""
        if order > len(self.power_sums):
            raise ValueError("not enough power sums")
        return _exp_series(-self.power_sums[:order] / np.arange(1, order + 1), order)


def _exp_series(b, order):
    # exp of sum_{m>=1} b_m T^m, b[0] is the T^1 coefficient
    e = np.zeros(order + 1, dtype=complex)
    e[0] = 1
    for n in range(1, order + 1):
        acc = 0
        for m in range(1, n + 1):
            acc += m * b[m - 1] * e[n - m]
        e[n] = acc / n
    return e


def elementary_from_power_sums(ps):
    """Newton's identities: e_0..e_k from p_1..p_k."""
    k = len(ps)
    e = [1 + 0j]
    for j in range(1, k + 1):
        acc = 0
        for i in range(1, j + 1):
            acc += (-1) ** (i - 1) * e[j - i] * ps[i - 1]
        e.append(acc / j)
    return np.array(e, dtype=complex)


def roots_from_elementary(e):
    """Roots of prod (X - w) = X^k - e_1 X^{k-1} + ..., via the companion matrix."""
    k = len(e) - 1
    if k == 0:
        return np.zeros(0, dtype=complex)
    monic = np.array([(-1) ** j * e[j] for j in range(k + 1)], dtype=complex)
    C = np.zeros((k, k), dtype=complex)
    C[0, :] = -monic[1:]
    if k > 1:
        C[1:, :-1] = np.eye(k - 1)
    return np.linalg.eigvals(C)


def lpolynomial(alpha, a, xi, extra=3, path="auto", budget=None):
    """L*(T, Kl_{F_a}(alpha, psi, xi)) with xi at level a.  Power sums are computed
    for m <= k + extra so the series check needs no further sums."""
    tower = alpha.tower
    q, k = tower.q, alpha.k
    t = _xi_log(xi, a)
    Na = q ** a - 1
    ps = []
    for m in range(1, k + extra + 1):
        M = a * m
        tM = t * ((q ** M - 1) // Na)
        kl = kloosterman_log(alpha, M, tM, path, budget)
        ps.append((-1) ** (k - 1) * kl * q ** (-(k - 1) * M / 2))
    ps = np.array(ps, dtype=complex)
    e = elementary_from_power_sums(ps[:k])
    coeffs = np.array([(-1) ** j * e[j] for j in range(k + 1)], dtype=complex)
    return LPolynomial(a, coeffs, roots_from_elementary(e), ps)


def lpolynomial_residuals(lp):
    """(max |series coeff| for degrees k+1..k+extra, max power-sum mismatch, max ||w|-1|)."""
    k, extra = lp.k, len(lp.power_sums) - lp.k
    ser = lp.series(k + extra)
    tail = float(np.max(np.abs(ser[k + 1:]))) if extra else 0.0
    ms = np.arange(1, len(lp.power_sums) + 1)
    from_roots = np.array([np.sum(lp.roots ** m) for m in ms])
    mism = float(np.max(np.abs(from_roots - lp.power_sums)))
    pur = float(np.max(np.abs(np.abs(lp.roots) - 1))) if k else 0.0
    return tail, mism, pur
