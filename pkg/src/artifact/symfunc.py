"""Symmetric functions in a graded piece of degree d, with exact coefficients.

Every basis is stored through its expansion in monomial symmetric functions over
d variables (enough to be faithful in degree d).  Hall-Littlewood P comes from
the symmetrization formula: antisymmetrizing X^lam * prod (X_i - t X_j) and
dividing by the Vandermonde turns each monomial into a signed Schur function.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import factorial, prod

import numpy as np

MAX_DEGREE = 6
MAX_VARS = 8


class SymError(ValueError):
    pass


# partitions

def partitions(d, maxlen=None):
    """Partitions of d in reverse lexicographic order, as tuples."""
    out = []

    def rec(rem, cap, acc):
        if rem == 0:
            out.append(tuple(acc))
            return
        if maxlen is not None and len(acc) >= maxlen:
            return
        for x in range(min(rem, cap), 0, -1):
            acc.append(x)
            rec(rem - x, x, acc)
            acc.pop()

    rec(d, d, [])
    return out


def as_partition(parts):
    lam = tuple(sorted((int(x) for x in parts if int(x) != 0), reverse=True))
    if any(x < 0 for x in lam):
        raise SymError(f"negative part in {parts}")
    return lam


def transpose(lam):
    if not lam:
        return ()
    return tuple(sum(1 for x in lam if x > i) for i in range(lam[0]))


def n_of(lam):
    return sum(i * x for i, x in enumerate(lam))


def multiplicities(lam):
    out = {}
    for x in lam:
        out[x] = out.get(x, 0) + 1
    return out


def z_of(lam):
    return prod(factorial(c) * i ** c for i, c in multiplicities(lam).items())


def dominates(lam, mu):
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam[i] if i < len(lam) else 0
        b += mu[i] if i < len(mu) else 0
        if a < b:
            return False
    return True


def t_integer(k, t):
    """[k]_t = (1 - t^k)/(1 - t) = 1 + t + ... + t^{k-1}."""
    return sum(t ** j for j in range(k))


def t_factorial(k, t):
    return prod((t_integer(j, t) for j in range(1, k + 1)), start=Fraction(1))


def _frac(x):
    return x if isinstance(x, Fraction) else Fraction(x)


# monomial coordinates

@lru_cache(maxsize=None)
def _kostka(lam, mu):
    """Number of SSYT of shape lam and content mu (mu any composition)."""
    if not mu:
        return 1 if not lam else 0
    last = mu[-1]
    total = 0
    # remove a horizontal strip of size `last` from lam
    for nu in _strip_removals(lam, last):
        total += _kostka(nu, mu[:-1])
    return total


def _strip_removals(lam, r):
    out = []
    lam = list(lam)
    L = len(lam)

    def rec(i, rem, acc):
        if i == L:
            if rem == 0:
                out.append(tuple(x for x in acc if x > 0))
            return
        nxt = lam[i + 1] if i + 1 < L else 0
        for take in range(0, min(rem, lam[i] - nxt) + 1):
            acc.append(lam[i] - take)
            rec(i + 1, rem - take, acc)
            acc.pop()

    rec(0, r, [])
    return out


@lru_cache(maxsize=None)
def _power_to_monomial(rho, lam):
    """Coefficient of m_lam in p_rho: ways to pour the parts of rho into the parts of lam."""
    L = len(lam)

    @lru_cache(maxsize=None)
    def rec(i, rem):
        if i == len(rho):
            return 1 if all(x == 0 for x in rem) else 0
        tot = 0
        for j in range(L):
            if rem[j] >= rho[i]:
                r = list(rem)
                r[j] -= rho[i]
                tot += rec(i + 1, tuple(r))
        return tot

    return rec(0, tuple(lam))


@lru_cache(maxsize=None)
def _basis_matrix(d, kind):
    """Rows: basis elements over partitions(d); columns: m-coordinates."""
    P = partitions(d)
    if kind == "monomial":
        return tuple(tuple(Fraction(int(i == j)) for j in range(len(P))) for i in range(len(P)))
    if kind == "powersum":
        return tuple(tuple(Fraction(_power_to_monomial(r, l)) for l in P) for r in P)
    if kind == "schur":
        return tuple(tuple(Fraction(_kostka(r, l)) for l in P) for r in P)
    if kind == "complete":
        # h_mu = sum_lam K_{lam mu} s_lam; via monomials h_mu = sum (#matrices) m
        S = _basis_matrix(d, "schur")
        K = [[_kostka(l, m) for l in P] for m in P]
        return tuple(tuple(sum(K[i][a] * S[a][j] for a in range(len(P))) for j in range(len(P)))
                     for i in range(len(P)))
    raise SymError(f"unknown basis {kind}")


def _inverse(rows):
    """Exact inverse of a square Fraction matrix (Gauss-Jordan)."""
    n = len(rows)
    A = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            raise SymError("singular transition matrix")
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c] != 0:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    return tuple(tuple(r[n:]) for r in A)


# Hall-Littlewood family

@lru_cache(maxsize=None)
def _hl_p_schur(lam, t):
    """P_lam(X; t) in the Schur basis via the symmetrization formula in n = |lam| variables
    (n = len(lam) if larger).  Returns dict partition -> Fraction."""
    d = sum(lam)
    n = max(d, len(lam), 1)
    lam_n = tuple(lam) + (0,) * (n - len(lam))
    # F = X^lam * prod_{i<j} (X_i - t X_j); track exponents as tuples
    poly = {lam_n: Fraction(1)}
    for i in range(n):
        for j in range(i + 1, n):
            new = {}
            for e, c in poly.items():
                e1 = list(e)
                e1[i] += 1
                k1 = tuple(e1)
                new[k1] = new.get(k1, 0) + c
                e2 = list(e)
                e2[j] += 1
                k2 = tuple(e2)
                new[k2] = new.get(k2, 0) - t * c
            poly = {e: c for e, c in new.items() if c != 0}
    delta = tuple(range(n - 1, -1, -1))
    out = {}
    for e, c in poly.items():
        if len(set(e)) < n:
            continue
        order = sorted(range(n), key=lambda i: -e[i])
        sgn = _perm_sign(order)
        gamma = tuple(e[order[i]] - delta[i] for i in range(n))
        key = tuple(x for x in gamma if x)
        out[key] = out.get(key, 0) + sgn * c
    mult = multiplicities(lam)
    mult0 = n - len(lam)
    v = t_factorial(mult0, t) * prod((t_factorial(m, t) for m in mult.values()), start=Fraction(1))
    if v == 0:
        raise SymError("normalizing constant vanishes at this t")
    return {k: c / v for k, c in out.items() if c != 0}


def _perm_sign(order):
    seen, sgn = set(), 1
    for i in range(len(order)):
        if i in seen:
            continue
        j, L = i, 0
        while j not in seen:
            seen.add(j)
            j = order[j]
            L += 1
        if L % 2 == 0:
            sgn = -sgn
    return sgn


@dataclass
class SymElement:
    d: int
    n: int
    basis: str
    coeffs: dict
    t: object = None

    def __post_init__(self):
        self.coeffs = {as_partition(k): v for k, v in self.coeffs.items() if v != 0}
        for k in self.coeffs:
            if sum(k) != self.d:
                raise SymError(f"partition {k} not of degree {self.d}")

    def __getitem__(self, lam):
        return self.coeffs.get(as_partition(lam), 0)

    def vector(self):
        """m-coordinates over partitions(d) (the full symmetric function)."""
        P = partitions(self.d)
        M = _rows(self.d, self.basis, self.t)
        idx = {p: i for i, p in enumerate(P)}
        out = [Fraction(0)] * len(P)
        zero = 0
        for lam, c in self.coeffs.items():
            row = M[idx[lam]]
            for j in range(len(P)):
                if row[j]:
                    out[j] = out[j] + c * row[j] if out[j] is not zero else c * row[j]
        return out

    def __add__(self, other):
        a = basis_convert(other, self.basis, self.t)
        c = dict(self.coeffs)
        for k, v in a.coeffs.items():
            c[k] = c.get(k, 0) + v
        return SymElement(self.d, min(self.n, other.n), self.basis, c, self.t)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, s):
        return SymElement(self.d, self.n, self.basis, {k: v * s for k, v in self.coeffs.items()}, self.t)

    def __mul__(self, other):
        if not isinstance(other, SymElement):
            return self.scale(other)
        a = basis_convert(self, "powersum")
        b = basis_convert(other, "powersum")
        c = {}
        for k1, v1 in a.coeffs.items():
            for k2, v2 in b.coeffs.items():
                k = as_partition(k1 + k2)
                c[k] = c.get(k, 0) + v1 * v2
        return SymElement(self.d + other.d, min(self.n, other.n), "powersum", c)

    __rmul__ = scale

    def __eq__(self, other):
        if not isinstance(other, SymElement) or self.d != other.d:
            return NotImplemented
        return self.vector() == other.vector()

    def restrict(self, n):
        """Monomial expansion in n variables (drops m_lam with more than n parts)."""
        m = basis_convert(self, "monomial")
        return SymElement(self.d, n, "monomial", {k: v for k, v in m.coeffs.items() if len(k) <= n})


def _check_caps(d, n):
    if d > MAX_DEGREE:
        raise SymError(f"degree {d} above cap {MAX_DEGREE}")
    if n is not None and n > MAX_VARS:
        raise SymError(f"{n} variables above cap {MAX_VARS}")


@lru_cache(maxsize=None)
def _rows(d, basis, t):
    """m-coordinates of each basis element, rows indexed like partitions(d)."""
    if basis in ("monomial", "powersum", "schur", "complete"):
        return _basis_matrix(d, basis)
    P = partitions(d)
    if basis == "hl_p":
        return tuple(tuple(_schur_to_m(_hl_p_schur(lam, t), d)) for lam in P)
    if basis == "ptilde":
        return tuple(tuple(_schur_to_m(_ptilde_schur(lam, t), d)) for lam in P)
    if basis == "hhat":
        return tuple(tuple(_schur_to_m(_hhat_schur(lam, t), d)) for lam in P)
    if basis == "hl_q":
        return tuple(tuple(_schur_to_m({k: v * _b(lam, t) for k, v in _hl_p_schur(lam, t).items()}, d))
                     for lam in P)
    raise SymError(f"unknown basis {basis}")


def _schur_to_m(sdict, d):
    P = partitions(d)
    S = _basis_matrix(d, "schur")
    idx = {p: i for i, p in enumerate(P)}
    out = [Fraction(0)] * len(P)
    for lam, c in sdict.items():
        row = S[idx[lam]]
        for j in range(len(P)):
            out[j] += c * row[j]
    return out


def _b(lam, t):
    return (1 - t) ** len(lam) * prod((t_factorial(m, t) for m in multiplicities(lam).values()),
                                      start=Fraction(1))


def _ptilde_schur(lam, t):
    if t == 0:
        raise SymError("P-tilde needs t != 0")
    base = _hl_p_schur(lam, 1 / _frac(t))
    f = _frac(t) ** (-n_of(lam))
    return {k: v * f for k, v in base.items()}


def _is_generic(t):
    return t not in (0, 1, -1)


@lru_cache(maxsize=None)
def _hhat_schur(mu, t):
    """Modified HL polynomial in the Schur basis; polynomial in t of degree <= n(mu),
    so degenerate t are reached by exact interpolation."""
    t = _frac(t)
    if not _is_generic(t):
        deg = n_of(mu)
        nodes = [Fraction(j + 2) for j in range(deg + 1)]
        vals = [_hhat_schur(mu, x) for x in nodes]
        keys = set().union(*vals)
        out = {}
        for k in keys:
            ys = [v.get(k, Fraction(0)) for v in vals]
            out[k] = _lagrange(nodes, ys, t)
        return {k: v for k, v in out.items() if v != 0}
    d = sum(mu)
    s = 1 / t
    # Q_mu(s) in p-coordinates, then p_j -> p_j / (1 - s^j), then scale by t^{n(mu)}
    q_m = _schur_to_m({k: v * _b(mu, s) for k, v in _hl_p_schur(mu, s).items()}, d)
    p_coef = _solve_in_basis(q_m, d, "powersum")
    P = partitions(d)
    h_p = {}
    for rho, c in zip(P, p_coef):
        if c:
            h_p[rho] = c / prod((1 - s ** r for r in rho), start=Fraction(1))
    f = t ** n_of(mu)
    m = [Fraction(0)] * len(P)
    R = _basis_matrix(d, "powersum")
    idx = {p: i for i, p in enumerate(P)}
    for rho, c in h_p.items():
        row = R[idx[rho]]
        for j in range(len(P)):
            m[j] += f * c * row[j]
    schur = _solve_in_basis(m, d, "schur")
    return {lam: c for lam, c in zip(P, schur) if c != 0}


def _lagrange(xs, ys, x):
    tot = Fraction(0)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        w = Fraction(1)
        for j, xj in enumerate(xs):
            if j != i:
                w *= (x - xj) / (xi - xj)
        tot += yi * w
    return tot


@lru_cache(maxsize=None)
def _inverse_rows(d, basis, t):
    return _inverse(_rows(d, basis, t))


def _solve_in_basis(mvec, d, basis, t=None):
    inv = _inverse_rows(d, basis, t)
    n = len(mvec)
    return [sum((mvec[i] * inv[i][j] for i in range(n) if mvec[i]), Fraction(0)) for j in range(n)]


def _norm_t(t):
    return None if t is None else _frac(t)


# public constructors

def _from_schur(sdict, d, n, t):
    m = _schur_to_m(sdict, d)
    P = partitions(d)
    coeffs = {lam: c for lam, c in zip(P, m) if c != 0 and len(lam) <= n}
    return SymElement(d, n, "monomial", coeffs, None)


def hl_p(lam, n, t):
    lam = as_partition(lam)
    if n < len(lam):
        raise SymError(f"need at least {len(lam)} variables")
    _check_caps(sum(lam), n)
    return _from_schur(_hl_p_schur(lam, _frac(t)), sum(lam), n, None)


def hl_q(lam, n, t):
    lam = as_partition(lam)
    t = _frac(t)
    return hl_p(lam, n, t).scale(_b(lam, t))


def hl_ptilde(lam, n, t):
    lam = as_partition(lam)
    _check_caps(sum(lam), n)
    return _from_schur(_ptilde_schur(lam, _frac(t)), sum(lam), n, None)


def hl_transformed(mu, n, t):
    """H_mu(X; t): image of Q_mu under p_j -> p_j / (1 - t^j)."""
    mu = as_partition(mu)
    t = _frac(t)
    if t == 0:
        raise SymError("transformed HL needs t != 0 here")
    # H_mu(t) = t^{n(mu)} Hhat_mu(1/t)
    hh = _hhat_schur(mu, 1 / t)
    f = t ** n_of(mu)
    return _from_schur({k: v * f for k, v in hh.items()}, sum(mu), n, None)


def hl_modified(mu, n, t):
    mu = as_partition(mu)
    _check_caps(sum(mu), n)
    if not mu:
        return SymElement(0, n, "monomial", {(): Fraction(1)})
    return _from_schur(_hhat_schur(mu, _frac(t)), sum(mu), n, None)


def schur(lam, n=None):
    lam = as_partition(lam)
    return SymElement(sum(lam), n or MAX_VARS, "schur", {lam: Fraction(1)})


def power_sum(rho, n=None):
    rho = as_partition(rho)
    return SymElement(sum(rho), n or MAX_VARS, "powersum", {rho: Fraction(1)})


def monomial(lam, n=None):
    lam = as_partition(lam)
    return SymElement(sum(lam), n or MAX_VARS, "monomial", {lam: Fraction(1)})


def complete(lam, n=None):
    lam = as_partition(lam)
    return SymElement(sum(lam), n or MAX_VARS, "complete", {lam: Fraction(1)})


# conversions

BASES = ("monomial", "powersum", "schur", "complete", "hl_p", "hl_q", "ptilde", "hhat")


def basis_convert(f, target, t=None):
    """Re-expand f in `target`; parametrized bases take t (defaults to f.t)."""
    if target not in BASES:
        raise SymError(f"unknown basis {target}")
    tt = _norm_t(t if t is not None else f.t) if target in ("hl_p", "hl_q", "ptilde", "hhat") else None
    if target == f.basis and tt == f.t:
        return f
    if f.n < f.d and target != "monomial":
        raise SymError("conversion needs at least d variables")
    vec = f.vector()
    coef = _solve_in_basis(vec, f.d, target, tt)
    P = partitions(f.d)
    return SymElement(f.d, f.n, target, {lam: c for lam, c in zip(P, coef) if c != 0}, tt)


def _rows_public(d, basis, t):
    return _rows(d, basis, _norm_t(t))


def transition(d, source, target, ts=None, tt=None):
    """Matrix T with source_lam = sum_mu T[lam][mu] target_mu, rows/cols over partitions(d)."""
    A = _rows(d, source, _norm_t(ts))
    inv = _inverse_rows(d, target, _norm_t(tt))
    n = len(A)
    return [[sum((A[i][k] * inv[k][j] for k in range(n) if A[i][k]), Fraction(0)) for j in range(n)]
            for i in range(n)]


def hall_inner(f, g):
    a = basis_convert(f, "powersum")
    b = basis_convert(g, "powersum")
    if a.d != b.d:
        return Fraction(0)
    return sum((v * b.coeffs.get(k, 0) * z_of(k) for k, v in a.coeffs.items()), Fraction(0))


def hall_inner_t(f, g, t):
    """<p_lam, p_mu>_t = delta z_lam prod 1/(1 - t^{lam_i}) (Hall-Littlewood scalar product)."""
    t = _frac(t)
    a = basis_convert(f, "powersum")
    b = basis_convert(g, "powersum")
    if a.d != b.d:
        return Fraction(0)
    tot = Fraction(0)
    for k, v in a.coeffs.items():
        if k in b.coeffs:
            tot += v * b.coeffs[k] * z_of(k) / prod((1 - t ** r for r in k), start=Fraction(1))
    return tot


def _distinct_perms(vals):
    vals = sorted(vals)
    yield tuple(vals)
    while True:
        i = len(vals) - 2
        while i >= 0 and vals[i] >= vals[i + 1]:
            i -= 1
        if i < 0:
            return
        j = len(vals) - 1
        while vals[j] <= vals[i]:
            j -= 1
        vals[i], vals[j] = vals[j], vals[i]
        vals[i + 1:] = reversed(vals[i + 1:])
        yield tuple(vals)


def evaluate_monomial(lam, point):
    n = len(point)
    if len(lam) > n:
        return 0
    pt = [complex(x) for x in point]
    tot = 0
    for e in _distinct_perms(list(lam) + [0] * (n - len(lam))):
        term = 1
        for x, k in zip(pt, e):
            if k:
                term *= x ** k
        tot += term
    return tot


def evaluate(f, point):
    m = basis_convert(f, "monomial")
    if len(point) > m.n and m.n < m.d:
        raise SymError("more evaluation points than variables")
    return complex(sum(complex(c) * evaluate_monomial(lam, point) for lam, c in m.coeffs.items()))


# flag counts

def hl_modified_flag_count(mu, n, a, q, budget=4096):
    """Coefficients of Hhat_mu(X; q^a) counted as weak flags in F_{q^a}^b fixed by J_mu(1)."""
    from .fields import build_tower, prime_factors

    mu = as_partition(mu)
    b = sum(mu)
    Q = q ** a
    if Q ** b > budget:
        from .etale import BudgetError
        raise BudgetError(Q ** b, budget)
    ps = prime_factors(q)
    p = ps[0]
    f = 0
    while p ** f < q:
        f += 1
    tower = build_tower(p, f * a, 1)
    L = tower.level(1)
    subspaces = invariant_subspaces(mu, L)
    coeffs = {}
    for lam in partitions(b, maxlen=n):
        dims = list(itertools.accumulate(lam))
        coeffs[lam] = Fraction(_count_chains(subspaces, dims))
    return SymElement(b, n, "monomial", coeffs)


def _shift(mu, rows):
    """N v for N = J_mu(1) - 1: within each block, coordinate i takes coordinate i + 1."""
    out = np.zeros_like(rows)
    pos = 0
    for m in mu:
        out[..., pos:pos + m - 1] = rows[..., pos + 1:pos + m]
        pos += m
    return out


def invariant_subspaces(mu, L):
    """J_mu(1)-invariant subspaces of F^b (F = level L), as bitmasks over vector codes,
    keyed by dimension.  Subspaces are enumerated through reduced echelon bases."""
    b = sum(mu)
    Q = L.order
    w = Q ** np.arange(b, dtype=np.int64)
    out = {}
    for r in range(b + 1):
        combos = np.indices((Q,) * r, dtype=np.int64).reshape(r, -1).T if r else np.zeros((1, 0), np.int64)
        masks = []
        for piv in itertools.combinations(range(b), r):
            free = [(i, j) for i in range(r) for j in range(piv[i] + 1, b) if j not in piv]
            for vals in itertools.product(range(Q), repeat=len(free)):
                B = np.zeros((r, b), dtype=np.int64)
                for i, j in enumerate(piv):
                    B[i, j] = 1
                for (i, j), v in zip(free, vals):
                    B[i, j] = v
                span = _span(L, combos, B)
                codes = span @ w
                codeset = set(codes.tolist())
                img = _shift(mu, B) @ w if r else np.zeros(0, np.int64)
                if all(int(x) in codeset for x in img):
                    masks.append(sum(1 << int(x) for x in codeset))
        out[r] = masks
    return out


def _span(L, combos, B):
    """All combinations sum c_i B_i with raw-valued coefficients."""
    r, b = B.shape
    acc = np.zeros((combos.shape[0], b), dtype=np.int64)
    for i in range(r):
        term = L.vmul(combos[:, i:i + 1], B[i][None, :])
        acc = L.vadd(acc, term)
    return acc


def _count_chains(subspaces, dims):
    # weak flags: consecutive equal dimensions force equal subspaces
    counts = {m: 1 for m in subspaces.get(dims[0], [])}
    for prev_d, d in zip(dims, dims[1:]):
        if d == prev_d:
            continue
        new = {}
        for m in subspaces.get(d, []):
            new[m] = sum(c for pm, c in counts.items() if pm & ~m == 0)
        counts = new
    return sum(counts.values())
