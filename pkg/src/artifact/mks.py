"""Exotic matrix Kloosterman sums K(alpha, psi, h) on GL_c(F_q).

Three routes: the defining sum over GL_c(F_{q^k}) grouped by the class of the
Shintani norm, the convolution over the parts of a composite character, and
the product of modified Hall-Littlewood polynomials evaluated at the roots of
the one-variable exotic Kloosterman sums.
"""

from dataclasses import dataclass
from math import comb, factorial, prod

import numpy as np

from .chars import TWO_PI_I, MultChar, descend, orbit_rep, psi_values
from .expsums import CompositeChar, composite_exotic_gauss, kloosterman_log
from .fields import FieldError
from .glq import (ConjClassLabel, bmatmul, binv, classify_batch, class_representative,
                  enumerate_classes, group_batches, make_label, norm_histogram,
                  orbits_of_degree, tower_for, unipotent_batch)
from .repth import (ClassFunction, _as_tau, _ps_to_labels, _trans, apply_forward, bessel,
                    bessel_speh_function, class_sizes, f_transform, generic_parameter,
                    irreducible_character)
from .symfunc import hl_modified_flag_count, partitions, z_of


@dataclass(frozen=True)
class MKSQuery:
    alpha: CompositeChar
    label: ConjClassLabel

    @property
    def q(self):
        return self.alpha.tower.q

    @property
    def c(self):
        return self.label.n

    @property
    def k(self):
        return self.alpha.k


def _composite(alpha):
    if isinstance(alpha, MultChar):
        return CompositeChar((alpha.level,), (alpha,))
    return alpha


# brute force

def mks_brute_function(chi, c, budget=None):
    """K(chi, psi, .) on GL_c(F_q) for a single character chi at level k."""
    q, p = chi.tower.q, chi.tower.p
    H = norm_histogram(q, c, chi.level, budget)
    psi = np.exp(TWO_PI_I * np.arange(p) / p)
    sums = np.einsum("ltr,t,r->l", H, chi.values(), psi)
    return ClassFunction(q, c, sums / class_sizes(q, c))


def mks_bruteforce(chi, label, budget=None):
    if isinstance(chi, CompositeChar):
        if chi.s != 1:
            raise FieldError("brute force takes a single character; use mks_convolve")
        chi = chi.chars[0]
    return mks_brute_function(chi, label.n, budget)(label)


# convolution

_GROUP = {}


def _group_data(q, c):
    """All of GL_c(F_q) with inverses and labels."""
    if (q, c) not in _GROUP:
        tower = tower_for(q)
        A = np.concatenate(list(group_batches(tower, c, 1)))
        L = tower.level(1)
        _GROUP[(q, c)] = (A, binv(L, A), classify_batch(tower, 1, A))
    return _GROUP[(q, c)]


def convolve(f, g):
    """(f * g)(h) = sum_{h1 h2 = h} f(h1) g(h2)."""
    q, c = f.q, f.n
    tower = tower_for(q)
    L = tower.level(1)
    A, Ainv, labs = _group_data(q, c)
    fv = f.at(labs)
    out = []
    for lab in f.labels:
        h = class_representative(lab, q).raw
        rest = bmatmul(L, Ainv, np.broadcast_to(h, A.shape))
        out.append(np.sum(fv * g.at(classify_batch(tower, 1, rest))))
    return ClassFunction(q, c, out)


def mks_convolve_function(alpha, c, budget=None):
    alpha = _composite(alpha)
    K = None
    for a in alpha.chars:
        Ka = mks_brute_function(a, c, budget)
        K = Ka if K is None else convolve(K, Ka)
    return K


def mks_convolve(query, budget=None):
    return mks_convolve_function(query.alpha, query.c, budget)(query.label)


# Hall-Littlewood route

def root_power_sums(alpha, a, j, count):
    """p_m(w) = (-1)^{k-1} Kl_{am}(alpha, xi) for xi = g_a^j, m = 1..count (unnormalized roots)."""
    q, k = alpha.tower.q, alpha.k
    out = []
    for m in range(1, count + 1):
        M = a * m
        t = j * ((q ** M - 1) // (q ** a - 1))
        out.append((-1) ** (k - 1) * kloosterman_log(alpha, M, t))
    return np.array(out, dtype=complex)


def hhat_at_roots(mu, ps, t):
    """Hhat_mu(w; t) from the power sums p_1.. of the roots w."""
    b = sum(mu)
    P, idx, T = _trans(b, "hhat", "powersum", t)
    row = T[idx[tuple(mu)]]
    return complex(sum(row[i] * prod(ps[r - 1] for r in rho) for i, rho in enumerate(P) if row[i]))


def mks_hl(query):
    alpha = _composite(query.alpha)
    q, k, c = query.q, alpha.k, query.c
    val = (-1) ** ((k - 1) * c) * q ** ((k - 1) * c * (c - 1) // 2)
    for (a, j), mu in query.label.blocks:
        ps = root_power_sums(alpha, a, j, sum(mu))
        val *= hhat_at_roots(mu, ps, q ** a)
    return complex(val)


def mks_hl_function(alpha, c):
    alpha = _composite(alpha)
    q = alpha.tower.q
    return ClassFunction(q, c, [mks_hl(MKSQuery(alpha, lab)) for lab in enumerate_classes(q, c)])


def normalize(value, q, k, c):
    return value * q ** (-(k - 1) * c * c / 2)


def mks_normalized(query, path="hl"):
    f = {"hl": mks_hl, "conv": mks_convolve,
         "brute": lambda qu: mks_bruteforce(qu.alpha, qu.label)}[path]
    return complex(normalize(f(query), query.q, query.k, query.c))


# reduction of non-regular characters

def mks_reduce_nonregular(chi, kprime, c, budget=None):
    """Both sides of K(chi, h) = (-1)^{c(m-1)} K(chi'^{x m}, h) for every class h."""
    chip = descend(chi, kprime)
    m = chi.level // kprime
    lhs = mks_brute_function(chi, c, budget)
    rhs = mks_convolve_function(CompositeChar((kprime,) * m, (chip,) * m), c, budget)
    rhs = rhs * ((-1) ** (c * (m - 1)))
    return {"labels": [str(x) for x in lhs.labels], "lhs": lhs.values, "rhs": rhs.values,
            "abs_err": float(np.max(np.abs(lhs.values - rhs.values)))}


# global function and its two Euler products

def _truncated_exp(orbit, deg, ys, n):
    """sum over rho with deg*|rho| <= n of p_rho^{[orbit]} prod y_{rho_i} / z_rho."""
    out = {(): 1.0}
    for size in range(1, n // deg + 1):
        for rho in partitions(size):
            out[tuple((orbit, r) for r in rho)] = prod(ys[r - 1] for r in rho) / z_of(rho)
    return out


def _degree(key):
    return sum(o[0] * r for o, r in key)


def _truncated_product(factors, n):
    acc = {(): 1.0}
    for F in factors:
        nxt = {}
        for ka, va in acc.items():
            da = _degree(ka)
            for kb, vb in F.items():
                if da + _degree(kb) <= n:
                    key = tuple(sorted(ka + kb))
                    nxt[key] = nxt.get(key, 0) + va * vb
        acc = nxt
    return {k: v for k, v in acc.items() if _degree(k) == n}


def global_geometric(alpha, n):
    """Degree-n slice of prod_xi prod_{i,j} 1/(1 - X_i w**_j) in geometric power sums."""
    alpha = _composite(alpha)
    q, k = alpha.tower.q, alpha.k
    factors = []
    for a in range(1, n + 1):
        for (_, j) in orbits_of_degree(q, a):
            ps = root_power_sums(alpha, a, j, n // a)
            ys = [ps[m - 1] * (-1) ** ((k - 1) * a * m) * q ** (-(k - 1) * a * m / 2)
                  for m in range(1, n // a + 1)]
            factors.append(_truncated_exp((a, j), a, ys, n))
    return _truncated_product(factors, n)


def global_character(alpha, n):
    """Degree-n slice of the character-side Euler product, pushed to geometric power sums."""
    alpha = _composite(alpha)
    tower = alpha.tower
    q, k, s = tower.q, alpha.k, alpha.s
    factors = []
    for d in range(1, n + 1):
        for (_, j) in orbits_of_degree(q, d):
            g = composite_exotic_gauss(alpha, d, MultChar(tower, d, -j))
            cb = ((-1) ** s * q ** (-(k - 1) / 2)) ** d * g
            ys = [cb ** m / (q ** (m * d) - 1) for m in range(1, n // d + 1)]
            factors.append(_truncated_exp((d, j), d, ys, n))
    return apply_forward(q, _truncated_product(factors, n))


def global_truncation(alpha, n):
    """charmap of K* on GL_n against both Euler products; coefficient arrays over
    enumerate_classes(q, n)."""
    alpha = _composite(alpha)
    q, k = alpha.tower.q, alpha.k
    K = mks_hl_function(alpha, n)
    direct = normalize(K.values, q, k, n)
    geo = ClassFunction.from_dict(q, n, _ps_to_labels(q, global_geometric(alpha, n))).values
    chat = ClassFunction.from_dict(q, n, _ps_to_labels(q, global_character(alpha, n))).values
    return {"labels": [str(x) for x in K.labels], "charmap": direct, "geometric": geo,
            "character": chat,
            "abs_err": float(max(np.max(np.abs(direct - geo)), np.max(np.abs(direct - chat))))}


# zero cycles

def _h_from_p(ps, m):
    """Complete symmetric h_m from power sums."""
    return sum(prod(ps[r - 1] for r in rho) / z_of(rho) for rho in partitions(m)) if m else 1


def cycle_kstar(alpha, label):
    """K*(alpha, psi, c) for the zero cycle of a regular class: symmetric powers of
    the stalks, from the unnormalized roots."""
    alpha = _composite(alpha)
    q, k = alpha.tower.q, alpha.k
    c = label.n
    val = (-1) ** ((k - 1) * c) * q ** (-(k - 1) * c / 2)
    for (a, j), mu in label.blocks:
        if len(mu) != 1:
            raise FieldError("zero cycles correspond to regular classes")
        val *= _h_from_p(root_power_sums(alpha, a, j, mu[0]), mu[0])
    return complex(val)


def zero_cycle_terms(q, c):
    """Regular classes of GL_c(F_q) as (label, log norm, raw trace)."""
    tower = tower_for(q)
    L = tower.level(1)
    out = []
    for lab in enumerate_classes(q, c):
        if any(len(mu) != 1 for _, mu in lab.blocks):
            continue
        lognorm, tr = 0, 0
        for (a, j), mu in lab.blocks:
            lognorm += mu[0] * j
            t = tower.trace_raw(j + 1, a, 1)
            for _ in range(mu[0]):
                tr = L.add(tr, t)
        out.append((lab, lognorm % (q - 1), tr))
    return out


def zero_cycle_sum(alpha, c, t1, t2):
    """sum over degree-c cycles with norm (-1)^{ck-1} t1^{-1} t2^{-(c-1)} of
    K*(alpha^{-1}, psi, cycle) psi((-1)^{k-1} t2 tr cycle); t1, t2 are level-1 logs."""
    alpha = _composite(alpha)
    tower = alpha.tower
    q, k = tower.q, alpha.k
    L = tower.level(1)
    m1 = 0 if q % 2 == 0 else (q - 1) // 2
    target = ((c * k - 1) * m1 - t1 - (c - 1) * t2) % (q - 1)
    # the character comes from the c-1 superdiagonal entries; empty when c = 1
    coef = t2 + 1 if c > 1 else 0
    if (k - 1) % 2:
        coef = L.neg(coef)
    psi = psi_values(tower, 1)
    inv = alpha.inverse()
    total = 0
    for lab, ln, tr in zero_cycle_terms(q, c):
        if ln != target:
            continue
        total += cycle_kstar(inv, lab) * psi[L.mul(coef, tr)]
    return complex(total)


def voronoi_matrix(q, k, c, t1, t2):
    """[[0, 0, I_{k-c}], [0, t2 I_{c-1}, 0], [t1, 0, 0]] with level-1 logs t1, t2."""
    g = np.zeros((k, k), dtype=np.int64)
    g[:k - c, c:] = np.eye(k - c, dtype=np.int64)
    for i in range(c - 1):
        g[k - c + i, 1 + i] = t2 + 1
    g[k - 1, 0] = t1 + 1
    return g


# bounds

def flag_bound(label, k, q):
    """prod over blocks of the number of weak flags of length k fixed by J_mu(1)."""
    tot = 1
    for (a, _), mu in label.blocks:
        if len(mu) == 1:
            tot *= comb(mu[0] + k - 1, mu[0])
            continue
        H = hl_modified_flag_count(mu, k, a, q, budget=1 << 16)
        cnt = 0
        for lam, cf in H.coeffs.items():
            padded = list(lam) + [0] * (k - len(lam))
            mult = {}
            for x in padded:
                mult[x] = mult.get(x, 0) + 1
            cnt += cf * factorial(k) // prod(factorial(v) for v in mult.values())
        tot *= int(cnt)
    return tot


def regular_bound(label, k):
    return prod(comb(mu[0] + k - 1, mu[0]) for _, mu in label.blocks)


def twist_labels(q, c, invert=False, negate=False):
    """Labels of -h and/or h^{-1} for each class h, in enumerate_classes order."""
    tower = tower_for(q)
    L = tower.level(1)
    labs = enumerate_classes(q, c)
    A = np.stack([class_representative(lab, q).raw for lab in labs])
    if invert:
        A = binv(L, A)
    if negate:
        A = np.vectorize(L.neg, otypes=[np.int64])(A)
    return classify_batch(tower, 1, A)


def pullback(f, labels):
    return ClassFunction(f.q, f.n, f.at(labels))


def _labels_of(q, A):
    return classify_batch(tower_for(q), 1, np.asarray(A, dtype=np.int64))


def _blockdiag(h1, h2):
    c1, c2 = len(h1), len(h2)
    h = np.zeros((c1 + c2, c1 + c2), dtype=np.int64)
    h[:c1, :c1] = h1
    h[c1:, c1:] = h2
    return h


def _unipotent_average(f, h, c1, c2):
    """|U|^{-1} sum over the (c1, c2) block unipotent radical of f(h n)."""
    tower = tower_for(f.q)
    U = unipotent_batch(tower, c1 + c2, (c1, c2))
    prodm = bmatmul(tower.level(1), np.broadcast_to(h, U.shape), U)
    return complex(np.mean(f.at(classify_batch(tower, 1, prodm))))


# multiplicativity

def block_pairs(q, c1, c2, disjoint=None):
    """Pairs of class representatives (h1, h2) with h1 in GL_c1 and h2 in GL_c2;
    disjoint=True keeps pairs without common eigenvalues, False those with."""
    out = []
    for l1 in enumerate_classes(q, c1):
        for l2 in enumerate_classes(q, c2):
            share = bool({o for o, _ in l1.blocks} & {o for o, _ in l2.blocks})
            if disjoint is None or disjoint != share:
                out.append((l1, l2))
    return out


def mks_multiplicativity(alpha, c1, c2, K=None, K1=None, K2=None):
    """Both parts of the block factorization for K(alpha, .) on GL_{c1+c2}.
    Returns rows (l1, l2, unipotent average, block value, product)."""
    alpha = _composite(alpha)
    q, k = alpha.tower.q, alpha.k
    K = mks_hl_function(alpha, c1 + c2) if K is None else K
    K1 = mks_hl_function(alpha, c1) if K1 is None else K1
    K2 = mks_hl_function(alpha, c2) if K2 is None else K2
    rows = []
    for l1, l2 in block_pairs(q, c1, c2):
        h = _blockdiag(class_representative(l1, q).raw, class_representative(l2, q).raw)
        avg = _unipotent_average(K, h, c1, c2)
        block = K(_labels_of(q, h[None])[0])
        rhs = q ** ((k - 1) * c1 * c2) * K1(l1) * K2(l2)
        rows.append((l1, l2, avg, block, rhs))
    return rows


def bessel_class_multiplicativity(alpha, c1, c2, path=None):
    """Rows (l1, l2, unipotent average of B, q^{-c1 c2 (k-1)} B(h1) B(h2))."""
    tau = _as_tau(alpha)
    q, k = tau.tower.q, tau.k
    B = bessel_speh_function(tau, c1 + c2, path)
    B1 = bessel_speh_function(tau, c1, path)
    B2 = B1 if c2 == c1 else bessel_speh_function(tau, c2, path)
    rows = []
    for l1, l2 in block_pairs(q, c1, c2):
        h = _blockdiag(class_representative(l1, q).raw, class_representative(l2, q).raw)
        rows.append((l1, l2, _unipotent_average(B, h, c1, c2),
                     q ** (-c1 * c2 * (k - 1)) * B1(l1) * B2(l2)))
    return rows


def bessel_tau_multiplicativity(alpha1, alpha2, c, path=None):
    """B_{tau1 x tau2}(h) against q^{-c^2} sum_{xy=-h} B_tau1(x) B_tau2(y), per class."""
    t1, t2 = _as_tau(alpha1), _as_tau(alpha2)
    tau = CompositeChar(t1.parts + t2.parts, t1.chars + t2.chars)
    q = tau.tower.q
    B = bessel_speh_function(tau, c, path)
    B1 = bessel_speh_function(t1, c, path)
    B2 = bessel_speh_function(t2, c, path)
    neg = ClassFunction(q, c, B2.at(twist_labels(q, c, negate=True)))
    conv = convolve(B1, neg)
    return B, conv * (q ** (-c * c))


def bessel_kloosterman(alpha, c, path=None):
    """(B*_tau, (-1)^{(k+s)c} K*(alpha^{-1}, (-1)^{k-1} h^{-1})) as arrays over the classes."""
    tau = _as_tau(alpha)
    q, k, s = tau.tower.q, tau.k, tau.s
    B = bessel_speh_function(tau, c, path)
    K = mks_hl_function(tau.inverse(), c)
    labs = twist_labels(q, c, invert=True, negate=(k - 1) % 2 == 1)
    rhs = (-1) ** ((k + s) * c) * normalize(K.at(labs), q, k, c)
    return q ** ((k - 1) * c * c / 2) * B.values, rhs


# Whittaker transform

def whittaker_transform(alpha, c, h, B=None, path=None):
    """q^{(k-1)C(c,2)} sum_{u in U_c} B_tau(h u) psi^{-1}(u)."""
    tau = _as_tau(alpha)
    q, k = tau.tower.q, tau.k
    tower = tau.tower
    B = bessel_speh_function(tau, c, path) if B is None else B
    U = unipotent_batch(tower, c)
    psi = psi_values(tower, 1)
    w = np.ones(len(U), dtype=complex)
    for i in range(c - 1):
        w *= psi[U[:, i, i + 1]]
    prodm = bmatmul(tower.level(1), np.broadcast_to(h, U.shape), U)
    vals = B.at(classify_batch(tower, 1, prodm))
    return complex(q ** ((k - 1) * c * (c - 1) // 2) * np.sum(vals * w.conj()))


def whittaker_check(alpha, c, path=None):
    """Rows (label, transform of B, f_transform) over the classes of GL_c."""
    tau = _as_tau(alpha)
    q = tau.tower.q
    B = bessel_speh_function(tau, c, path)
    rows = []
    for lab in enumerate_classes(q, c):
        h = class_representative(lab, q).raw
        rows.append((lab, whittaker_transform(tau, c, h, B), f_transform(tau, c, h)))
    return rows


# generating series

def _series_inverse(a, order):
    b = [1.0 + 0j] + [0j] * order
    for n in range(1, order + 1):
        b[n] = -sum(a[i] * b[n - i] for i in range(1, min(n, len(a) - 1) + 1)) / a[0]
    return b


def _jordan_label(q, r, x):
    return make_label([((1, x), (r,))])


def bessel_jordan(alpha, r, x, path="kloosterman"):
    """B_tau(J_(r)(x)), x a level-1 log; from the Kloosterman side or the Speh average."""
    tau = _as_tau(alpha)
    q, k, s = tau.tower.q, tau.k, tau.s
    if path != "kloosterman":
        return bessel_speh_function(tau, r, path)(_jordan_label(q, r, x))
    # (-1)^{k-1} J_(r)(x)^{-1} is conjugate to J_(r)(y)
    y = (-x) % (q - 1)
    if (k - 1) % 2 and q % 2:
        y = (y + (q - 1) // 2) % (q - 1)
    K = mks_hl(MKSQuery(tau.inverse(), _jordan_label(q, r, y)))
    return complex((-1) ** ((k + s) * r) * q ** (-(k - 1) * r * r) * K)


def generating_series(alpha, x, order=4, direct=2):
    """Coefficients 1..order of the inverted Bessel series and of the Bessel-Speh series
    at Jordan blocks; values with r <= direct also come from the Speh average."""
    tau = _as_tau(alpha)
    q, k = tau.tower.q, tau.k
    tower = tau.tower
    phi = generic_parameter(tau)
    ch = irreducible_character(phi)
    a = []
    for r in range(k + 1):
        g = np.zeros((k, k), dtype=np.int64)
        g[:k - r, r:] = np.eye(k - r, dtype=np.int64)
        g[k - r:, :r] = np.eye(r, dtype=np.int64) * (x + 1)
        a.append(q ** (r * (k - r) / 2) * bessel(phi, g, ch))
    lhs = _series_inverse(a, order)[1:]
    rhs = [(-1) ** r * q ** ((k - 1) * r * r / 2) * bessel_jordan(tau, r, x)
           for r in range(1, order + 1)]
    speh = [(-1) ** r * q ** ((k - 1) * r * r / 2) * bessel_jordan(tau, r, x, path=None)
            for r in range(1, min(direct, order) + 1)] if k > 1 else []
    return {"inverse": np.array(lhs), "bessel_speh": np.array(rhs), "speh_direct": np.array(speh)}


def _dual_orbit(q, a, j, k):
    """Orbit label at level a of (-1)^{k-1} xi^{-1} for xi = g_a^j."""
    Na = q ** a - 1
    t = -j
    if (k - 1) % 2 and q % 2:
        t += Na // 2
    return orbit_rep(t % Na, q, a)


def bessel_speh_hl(alpha, label):
    """B*_tau(h) as a product of Hhat_mu at the sign-twisted normalized roots of the
    Kloosterman sums of alpha^{-1} at (-1)^{k-1} xi^{-1}."""
    tau = _as_tau(alpha)
    q, k, s = tau.tower.q, tau.k, tau.s
    inv = tau.inverse()
    val = 1
    for (a, j), mu in label.blocks:
        b = sum(mu)
        ps = root_power_sums(inv, a, _dual_orbit(q, a, j, k), b)
        eps = (-1) ** ((s - 1) * a)
        ps = [ps[m - 1] * (eps * q ** (-(k - 1) * a / 2)) ** m for m in range(1, b + 1)]
        val *= hhat_at_roots(mu, ps, q ** a)
    return complex(val)
