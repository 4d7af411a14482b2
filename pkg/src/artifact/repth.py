"""Class functions of GL_n(F_q) and the representation-theoretic side.

Class functions are arrays aligned with enumerate_classes(q, n).  The
characteristic map sends the indicator of a class to a product of modified
Hall-Littlewood P-polynomials, one alphabet per Frobenius orbit; products and
inner products are computed after expanding every orbit factor in power sums.
Irreducible characters come from Schur functions on the character side pushed
through the power-sum transition.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, prod

import numpy as np

from .chars import TWO_PI_I, MultChar, gauss_sum, orbit_rep, psi_values
from .etale import BudgetError, lcm
from .expsums import CompositeChar, exotic_gauss_product
from .fields import FieldError, orbit_degree
from .glq import (ConjClassLabel, MatrixGL, bmatmul, classify_batch, class_representative,
                  class_size, enumerate_classes, gl_order, label_index, norm_histogram,
                  tower_for, unipotent_batch)
from .symfunc import as_partition, basis_convert, partitions, schur, transition, z_of

ZERO_TOL = 1e-13


# class functions

@lru_cache(maxsize=None)
def class_sizes(q, n):
    return np.array([class_size(lab, q, n) for lab in enumerate_classes(q, n)], dtype=float)


class ClassFunction:
    def __init__(self, q, n, values):
        self.q, self.n = q, n
        self.labels = enumerate_classes(q, n)
        self.values = np.asarray(values, dtype=complex)
        if self.values.shape != (len(self.labels),):
            raise ValueError(f"expected {len(self.labels)} values")

    @classmethod
    def from_dict(cls, q, n, d):
        idx = label_index(q, n)
        v = np.zeros(len(idx), dtype=complex)
        for lab, x in d.items():
            if lab not in idx:
                raise FieldError(f"{lab} is not a class of GL_{n}(F_{q})")
            v[idx[lab]] = x
        return cls(q, n, v)

    def __call__(self, label):
        return complex(self.values[label_index(self.q, self.n)[label]])

    def at(self, labels):
        idx = label_index(self.q, self.n)
        return self.values[[idx[x] for x in labels]]

    def _same(self, other):
        if (self.q, self.n) != (other.q, other.n):
            raise ValueError("class functions on different groups")

    def __add__(self, other):
        self._same(other)
        return ClassFunction(self.q, self.n, self.values + other.values)

    def __sub__(self, other):
        self._same(other)
        return ClassFunction(self.q, self.n, self.values - other.values)

    def __mul__(self, other):
        if isinstance(other, ClassFunction):
            self._same(other)
            return ClassFunction(self.q, self.n, self.values * other.values)
        return ClassFunction(self.q, self.n, self.values * other)

    __rmul__ = __mul__

    def conj(self):
        return ClassFunction(self.q, self.n, self.values.conj())

    def inner(self, other):
        """(1/|G|) sum_g f(g) conj(h(g))."""
        self._same(other)
        w = class_sizes(self.q, self.n) / gl_order(self.n, self.q)
        return complex(np.sum(w * self.values * other.values.conj()))

    def as_dict(self):
        return dict(zip(self.labels, self.values))


def delta(q, n, label):
    return ClassFunction.from_dict(q, n, {label: 1})


def identity_label(n):
    return ConjClassLabel((((1, 0), (1,) * n),))


def scalar_label(q, n, log):
    return ConjClassLabel((((1, log % (q - 1)), (1,) * n),))


def minus_one_log(q):
    return 0 if q % 2 == 0 else (q - 1) // 2


# power-sum polynomials: {sorted tuple of (orbit, part): coefficient}

def _ps_mul(A, B):
    out = {}
    for ka, va in A.items():
        for kb, vb in B.items():
            key = tuple(sorted(ka + kb))
            out[key] = out.get(key, 0) + va * vb
    return out


def _ps_add(acc, A, c=1):
    for k, v in A.items():
        acc[k] = acc.get(k, 0) + c * v
    return acc


def _ps_prune(A):
    if not A:
        return A
    scale = max(abs(v) for v in A.values()) or 1
    return {k: v for k, v in A.items() if abs(v) > ZERO_TOL * scale}


def _ps_degree(key):
    return sum(o[0] * r for o, r in key)


def _group(key):
    by = {}
    for orb, r in key:
        by.setdefault(orb, []).append(r)
    return {o: as_partition(rs) for o, rs in sorted(by.items())}


@lru_cache(maxsize=None)
def _trans(d, src, dst, t):
    P = partitions(d)
    T = transition(d, src, dst, ts=t if src in ("ptilde", "hhat") else None,
                   tt=t if dst in ("ptilde", "hhat") else None)
    return P, {lam: i for i, lam in enumerate(P)}, np.array([[float(x) for x in row] for row in T])


def _ps_to_labels(q, A):
    """Coefficients in the P-tilde product basis of a geometric power-sum polynomial."""
    out = {}
    for key, c in A.items():
        options = []
        for (a, j), rho in _group(key).items():
            P, idx, T = _trans(sum(rho), "powersum", "ptilde", q ** a)
            row = T[idx[rho]]
            options.append([(((a, j), mu), row[i]) for i, mu in enumerate(P) if row[i] != 0])
        for combo in itertools.product(*options):
            lab = ConjClassLabel(tuple(b for b, _ in combo))
            out[lab] = out.get(lab, 0) + c * prod(w for _, w in combo)
    return out


def _labels_to_ps(q, coeffs):
    out = {}
    for lab, c in coeffs.items():
        if c == 0:
            continue
        options = []
        for (a, j), mu in lab.blocks:
            P, idx, T = _trans(sum(mu), "ptilde", "powersum", q ** a)
            row = T[idx[mu]]
            options.append([(tuple(((a, j), r) for r in rho), row[i]) for i, rho in enumerate(P) if row[i] != 0])
        if not options:
            out[()] = out.get((), 0) + c
            continue
        for combo in itertools.product(*options):
            key = tuple(sorted(sum((k for k, _ in combo), ())))
            out[key] = out.get(key, 0) + c * prod(w for _, w in combo)
    return out


def _ps_weight(q, key):
    """<p_key, p_key> in Lambda^F: z_rho prod 1/(Q^{rho_i} - 1) per orbit, Q = q^deg."""
    w = 1.0
    for (a, _), rho in _group(key).items():
        Q = q ** a
        w *= z_of(rho) / prod(Q ** r - 1 for r in rho)
    return w


# the ring Lambda^F

@dataclass
class LambdaFElement:
    q: int
    n: int
    coeffs: dict  # ConjClassLabel -> complex, P-tilde product basis

    def to_powersum(self):
        return _labels_to_ps(self.q, self.coeffs)

    def __mul__(self, other):
        if self.q != other.q:
            raise ValueError("different base fields")
        ps = _ps_mul(self.to_powersum(), other.to_powersum())
        return LambdaFElement(self.q, self.n + other.n, _ps_to_labels(self.q, ps))

    def __add__(self, other):
        if (self.q, self.n) != (other.q, other.n):
            raise ValueError("degree mismatch")
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return LambdaFElement(self.q, self.n, out)

    def to_class_function(self):
        return ClassFunction.from_dict(self.q, self.n, {k: v for k, v in self.coeffs.items() if v != 0})


def lambdaf_from_powersum(q, n, A):
    return LambdaFElement(q, n, _ps_to_labels(q, A))


def charmap(f):
    return LambdaFElement(f.q, f.n, {lab: complex(v) for lab, v in zip(f.labels, f.values) if v != 0})


def lambda_inner(u, v):
    if (u.q, u.n) != (v.q, v.n):
        return 0j
    a, b = u.to_powersum(), v.to_powersum()
    return complex(sum(x * np.conj(b[k]) * _ps_weight(u.q, k) for k, x in a.items() if k in b))


# parabolic induction

def parabolic_induce(f1, f2, path="charmap", budget=10 ** 7):
    if f1.q != f2.q:
        raise ValueError("different base fields")
    if path == "charmap":
        return (charmap(f1) * charmap(f2)).to_class_function()
    if path == "brute":
        return _induce_brute(f1, f2, budget)
    raise ValueError(f"unknown path {path!r}")


def _all_matrices(q, shape):
    cnt = shape[0] * shape[1]
    codes = np.arange(q ** cnt, dtype=np.int64)
    digits = np.stack([(codes // q ** i) % q for i in range(cnt)], axis=1)
    return digits.reshape(-1, *shape)


def _induce_brute(f1, f2, budget):
    """Sum of f1(y11) f2(y22) over the parabolic P, sorted by the class of y."""
    from .glq import group_batches
    q, n1, n2 = f1.q, f1.n, f2.n
    n = n1 + n2
    size = gl_order(n1, q) * gl_order(n2, q) * q ** (n1 * n2)
    if size > budget:
        raise BudgetError(size, budget)
    tower = tower_for(q)
    A1 = np.concatenate(list(group_batches(tower, n1, 1)))
    A2 = np.concatenate(list(group_batches(tower, n2, 1)))
    v1 = f1.at(classify_batch(tower, 1, A1))
    v2 = f2.at(classify_batch(tower, 1, A2))
    X = _all_matrices(q, (n1, n2))
    idx = label_index(q, n)
    S = np.zeros(len(idx), dtype=complex)
    nx = len(X)
    for a, w1 in zip(A1, v1):
        if w1 == 0:
            continue
        Y = np.zeros((len(A2) * nx, n, n), dtype=np.int64)
        Y[:, :n1, :n1] = a
        Y[:, :n1, n1:] = np.tile(X, (len(A2), 1, 1))
        Y[:, n1:, n1:] = np.repeat(A2, nx, axis=0)
        w = w1 * np.repeat(v2, nx)
        labs = classify_batch(tower, 1, Y)
        np.add.at(S, [idx[x] for x in labs], w)
    Psize = gl_order(n1, q) * gl_order(n2, q) * q ** (n1 * n2)
    vals = gl_order(n, q) * S / (Psize * class_sizes(q, n))
    return ClassFunction(q, n, vals)


# Green parameters and the character side

@dataclass(frozen=True, order=True)
class GreenParameter:
    """Frobenius orbits (d, j) of regular characters of F_{q^d}^x, each with a partition."""
    q: int
    blocks: tuple  # sorted ((d, j), mu)

    def __post_init__(self):
        seen = set()
        blocks = []
        for (d, j), mu in self.blocks:
            if orbit_degree(j, self.q, d) != d:
                raise FieldError(f"character {d}:{j} is not regular")
            o = (d, orbit_rep(j, self.q, d))
            if o in seen:
                raise FieldError(f"orbit {o} repeated")
            seen.add(o)
            blocks.append((o, as_partition(mu)))
        object.__setattr__(self, "blocks", tuple(sorted(blocks)))

    @property
    def n(self):
        return sum(d * sum(mu) for (d, _), mu in self.blocks)

    def __str__(self):
        return ";".join(f"{d}:{j}:[{','.join(map(str, mu))}]" for (d, j), mu in self.blocks)

    def cuspidal_support(self):
        """Multiset of orbits (d, j), each repeated |mu| times."""
        return [o for o, mu in self.blocks for _ in range(sum(mu))]

    def contragredient(self):
        return GreenParameter(self.q, tuple(((d, -j), mu) for (d, j), mu in self.blocks))


def parse_green(spec, q):
    blocks = []
    for part in str(spec).split(";"):
        part = part.strip()
        if not part:
            continue
        try:
            d, j, mu = part.split(":", 2)
            mu = [int(x) for x in mu.strip().strip("[]").split(",") if x.strip()]
            blocks.append(((int(d), int(j)), mu))
        except ValueError as exc:
            raise FieldError(f"bad parameter block {part!r}") from exc
    return GreenParameter(q, tuple(blocks))


def cuspidal_parameter(chi, mult=1):
    return GreenParameter(chi.tower.q, (((chi.level, chi.index), (mult,)),))


def generic_parameter(alpha, rows=1):
    """Parameter of the generic representation with cuspidal support given by the
    parts of a CompositeChar (or a single MultChar); rows=c gives Speh(tau, c)."""
    chars = alpha.chars if isinstance(alpha, CompositeChar) else (alpha,)
    q = chars[0].tower.q
    mult = {}
    for a in chars:
        o = (a.level, orbit_rep(a.index, q, a.level))
        mult[o] = mult.get(o, 0) + 1
    return GreenParameter(q, tuple((o, (m,) * rows) for o, m in mult.items()))


def speh_parameter(alpha, c):
    return generic_parameter(alpha, rows=c)


def is_generic(phi):
    return all(len(mu) == 1 for _, mu in phi.blocks)


@lru_cache(maxsize=None)
def green_parameters(q, n):
    """All parameters of total size n; same combinatorics as the classes."""
    return tuple(GreenParameter(q, lab.blocks) for lab in enumerate_classes(q, n))


@lru_cache(maxsize=None)
def _forward(q, d, j, r):
    """Image of p_r^{[theta]}, theta = (d, j), in geometric power sums."""
    K = r * d
    Nk = q ** K - 1
    Nd = q ** d - 1
    out = {}
    sgn = -1 if (K - 1) % 2 else 1
    for t in range(Nk):
        e = orbit_degree(t, q, K)
        s = t // (Nk // (q ** e - 1))
        key = (((e, orbit_rep(s, q, e)), K // e),)
        out[key] = out.get(key, 0) + sgn * np.exp(TWO_PI_I * ((j * t) % Nd) / Nd)
    return _ps_prune(out)


@lru_cache(maxsize=None)
def _inverse(q, a, j, r):
    """Image of p_r^{[xi]}, xi = (a, j), in character-side power sums."""
    K = r * a
    Nk = q ** K - 1
    tk = j * (Nk // (q ** a - 1))
    out = {}
    c = (-1 if (K - 1) % 2 else 1) / Nk
    for i in range(Nk):
        e = orbit_degree(i, q, K)
        s = i // (Nk // (q ** e - 1))
        key = (((e, orbit_rep(s, q, e)), K // e),)
        out[key] = out.get(key, 0) + c * np.exp(-TWO_PI_I * ((i * tk) % Nk) / Nk)
    return _ps_prune(out)


def chhat_p_transition(orbit, k, q, direction="forward"):
    """Image of the generator p_k of the given orbit: forward sends a character
    orbit to geometric power sums, inverse goes back."""
    d, j = orbit
    f = _forward if direction == "forward" else _inverse
    return dict(f(q, d, j, k))


def apply_forward(q, A):
    """Push a character-side power-sum polynomial to the geometric side."""
    out = {}
    for key, c in A.items():
        term = {(): c}
        for (d, j), r in key:
            term = _ps_mul(term, _forward(q, d, j, r))
        _ps_add(out, term)
    return _ps_prune(out)


def apply_inverse(q, A):
    out = {}
    for key, c in A.items():
        term = {(): c}
        for (a, j), r in key:
            term = _ps_mul(term, _inverse(q, a, j, r))
        _ps_add(out, term)
    return _ps_prune(out)


def roundtrip_error(q, orbit, k):
    back = apply_inverse(q, chhat_p_transition(orbit, k, q))
    target = {((orbit, k),): 1}
    keys = set(back) | set(target)
    return max(abs(back.get(x, 0) - target.get(x, 0)) for x in keys)


@lru_cache(maxsize=None)
def _schur_ps(mu):
    s = basis_convert(schur(mu, max(sum(mu), 1)), "powersum")
    return tuple((rho, float(c)) for rho, c in s.coeffs.items())


def character_powersum(phi):
    """prod_theta s_{phi(theta)}^{[theta]} in character-side power sums."""
    A = {(): 1.0}
    for o, mu in phi.blocks:
        S = {}
        for rho, c in _schur_ps(mu):
            key = tuple(sorted((o, r) for r in rho))
            S[key] = S.get(key, 0) + c
        A = _ps_mul(A, S)
    return A


_CHAR_CACHE = {}


def irreducible_character(phi, q=None):
    q = phi.q if q is None else q
    key = (q, phi)
    if key not in _CHAR_CACHE:
        geo = apply_forward(q, character_powersum(phi))
        _CHAR_CACHE[key] = lambdaf_from_powersum(q, phi.n, geo).to_class_function()
    return _CHAR_CACHE[key]


@lru_cache(maxsize=None)
def character_table(q, n):
    """(parameters, matrix) with one row per irreducible character."""
    params = green_parameters(q, n)
    return params, np.array([irreducible_character(p).values for p in params])


def dimension(phi):
    """Phi_n(q) prod s_mu(q^{-d}, q^{-2d}, ...), exact via the hook formula."""
    q = phi.q
    val = Fraction(prod(q ** i - 1 for i in range(1, phi.n + 1)))
    for (d, _), mu in phi.blocks:
        t = Fraction(1, q ** d)
        nmu = sum(i * x for i, x in enumerate(mu))
        hooks = []
        mt = [sum(1 for x in mu if x > j) for j in range(mu[0])]
        for i, row in enumerate(mu):
            for j in range(row):
                hooks.append(row - j + mt[j] - i - 1)
        val *= t ** (sum(mu) + nmu) / prod(1 - t ** h for h in hooks)
    if val.denominator != 1:
        raise ArithmeticError("non-integral dimension")
    return int(val)


def central_sign(phi, chi_values=None):
    """omega_pi(-1) = trace pi(-I) / dim pi."""
    q, n = phi.q, phi.n
    ch = irreducible_character(phi) if chi_values is None else chi_values
    return ch(scalar_label(q, n, minus_one_log(q))) / ch(identity_label(n))


# Speh characters from Jordan-block supported functions

def _jordan_supported(alpha, m):
    q, k = alpha.tower.q, alpha.level
    n = k * m
    vals = []
    for lab in enumerate_classes(q, n):
        if len(lab.blocks) != 1:
            vals.append(0)
            continue
        (a, j), mu = lab.blocks[0]
        ell = len(mu)
        coef = (-1) ** (ell - 1) * prod(q ** (a * i) - 1 for i in range(1, ell))
        t = j * ((q ** n - 1) // (q ** a - 1))
        vals.append(coef * sum(alpha.value_at_log(t * q ** i) for i in range(a)))
    return ClassFunction(q, n, vals)


def speh_character(alpha, c, path="appendix"):
    if orbit_degree(alpha.index, alpha.tower.q, alpha.level) != alpha.level:
        raise FieldError("alpha is not regular")
    if path == "green":
        return irreducible_character(speh_parameter(alpha, c))
    k, q = alpha.level, alpha.tower.q
    total = None
    for lam in partitions(c):
        f = None
        for part in lam:
            g = _jordan_supported(alpha, part)
            f = g if f is None else parabolic_induce(f, g)
        term = f * (1.0 / z_of(lam))
        total = term if total is None else total + term
    return total * ((-1) ** ((k - 1) * c))


def appendix_table(alpha, c):
    """Rows (class label, value) of the Speh character on its support."""
    ch = speh_character(alpha, c)
    return [(lab, v) for lab, v in zip(ch.labels, ch.values) if abs(v) > 1e-9]


# Bessel functions

def _psi1(q):
    return psi_values(tower_for(q), 1)


def _twisted_average(chi, g, U, weights):
    """|U|^{-1} sum_u weights(u) chi(u g) for a class function chi on GL_n."""
    tower = tower_for(chi.q)
    L = tower.level(1)
    prodm = bmatmul(L, U, np.broadcast_to(g, U.shape))
    vals = chi.at(classify_batch(tower, 1, prodm))
    return complex(np.sum(weights * vals) / len(U))


@lru_cache(maxsize=None)
def _whittaker_data(q, n, k, c):
    tower = tower_for(q)
    U = unipotent_batch(tower, n, (c,) * k)
    psi = _psi1(q)
    w = np.ones(len(U), dtype=complex)
    for b in range(k - 1):
        for i in range(c):
            w *= psi[U[:, b * c + i, (b + 1) * c + i]]
    return U, w.conj()


def bessel(phi, g, chi=None):
    """Bessel function of a generic representation: |U|^{-1} sum psi^{-1}(u) trace pi(u g)."""
    if not is_generic(phi):
        raise FieldError("representation is not generic")
    n = phi.n
    chi = irreducible_character(phi) if chi is None else chi
    U, w = _whittaker_data(phi.q, n, n, 1)
    raw = g.raw if isinstance(g, MatrixGL) else np.asarray(g, dtype=np.int64)
    return _twisted_average(chi, raw, U, w)


def antidiagonal(h, k):
    """[[0, I_{(k-1)c}], [h, 0]] for h in GL_c."""
    c = h.shape[0]
    n = k * c
    g = np.zeros((n, n), dtype=np.int64)
    g[:(k - 1) * c, c:] = np.eye((k - 1) * c, dtype=np.int64)
    g[(k - 1) * c:, :c] = h
    return g


def _as_tau(alpha):
    if isinstance(alpha, MultChar):
        return CompositeChar((alpha.level,), (alpha,))
    return alpha


def speh_of(alpha, c, path=None):
    """Character of Speh(tau, c) for tau generic with the cuspidal support of alpha."""
    tau = _as_tau(alpha)
    if path is None:
        path = "appendix" if tau.s == 1 else "green"
    if path == "appendix":
        return speh_character(tau.chars[0], c)
    return irreducible_character(speh_parameter(tau, c))


def bessel_speh_value(alpha, c, h, path=None, speh=None):
    """B_tau(h) for h in GL_c(F_q) (raw array or MatrixGL)."""
    tau = _as_tau(alpha)
    q, k = tau.tower.q, tau.k
    h = h.raw if isinstance(h, MatrixGL) else np.asarray(h, dtype=np.int64)
    if k == 1:
        tower = tau.tower
        L = tower.level(1)
        from .glq import bdet, binv, btrace
        d = int(bdet(L, h[None])[0])
        tr = int(btrace(L, binv(L, h[None]))[0])
        return complex(tau.chars[0].value_at_raw(d) * _psi1(q)[tr])
    speh = speh_of(tau, c, path) if speh is None else speh
    U, w = _whittaker_data(q, k * c, k, c)
    return _twisted_average(speh, antidiagonal(h, k), U, w)


def bessel_speh_function(alpha, c, path=None):
    """B_tau as a class function on GL_c(F_q)."""
    tau = _as_tau(alpha)
    q = tau.tower.q
    speh = speh_of(tau, c, path) if tau.k > 1 else None
    vals = [bessel_speh_value(tau, c, class_representative(lab, q).raw, path, speh)
            for lab in enumerate_classes(q, c)]
    return ClassFunction(q, c, vals)


# Kondo Gauss sums, epsilon factors, gamma factors

def _as_chars(chi):
    return chi.chars if isinstance(chi, CompositeChar) else (chi,)


def kondo_scalar(phi, chi, path="brute", budget=None):
    """G(pi, chi, psi) for pi with parameter phi on GL_c and chi a MultChar or
    CompositeChar.  path='brute' is the trace sum over GL_c(F_{q^k});
    path='closed' is the product of exotic Gauss sums over the cuspidal support;
    path='kondo' uses plain Gauss sums (level-1 characters only)."""
    q, c = phi.q, phi.n
    chars = _as_chars(chi)
    if path == "closed":
        k = sum(a.level for a in chars)
        tower = chars[0].tower
        val = q ** (-k * c / 2) * (-1) ** (c * len(chars))
        for a in chars:
            for d, j in phi.cuspidal_support():
                val *= exotic_gauss_product(d, a.level, MultChar(tower, d, j), a)
        return complex(val)
    if path == "kondo":
        tower = chars[0].tower
        val = 1
        for a in chars:
            if a.level != 1:
                raise FieldError("Kondo's formula needs level-1 characters")
            g = q ** (-c / 2) * (-1) ** c
            for d, j in phi.cuspidal_support():
                r = (q ** d - 1) // (q - 1)
                g *= gauss_sum(MultChar(tower, d, j + a.index * r))
            val *= g
        return complex(val)
    if path != "brute":
        raise ValueError(f"unknown path {path!r}")
    ch = irreducible_character(phi)
    dim = ch(identity_label(c)).real
    val = 1
    for a in chars:
        H = norm_histogram(q, c, a.level, budget)
        val *= _histogram_pairing(H, ch.values, a) * q ** (-a.level * c * c / 2) / dim
    return complex(val)


def _histogram_pairing(H, class_values, a):
    p = a.tower.p
    psi = np.exp(TWO_PI_I * np.arange(p) / p)
    return complex(np.einsum("ltr,l,t,r->", H, class_values, a.values(), psi))


def _tau_ck(beta, alpha):
    return exotic_gauss_product(beta.level, alpha.level, beta, alpha)


def epsilon0(phi_pi, phi_tau):
    """epsilon_0(pi x tau, psi) as the product over both cuspidal supports."""
    if not is_generic(phi_tau):
        raise FieldError("tau is not generic")
    q = phi_pi.q
    tower = tower_for(q)
    val = 1
    for c, b in phi_pi.cuspidal_support():
        for k, a in phi_tau.cuspidal_support():
            g = _tau_ck(MultChar(tower, c, -b), MultChar(tower, k, -a))
            val *= (-1) ** (k * c) * q ** (-k * c / 2) * g
    return complex(val)


def gamma_GK(phi_pi, alpha, path=None, B=None):
    """omega_pi(-1)^{k-1} times the scalar q^{(k-2)c^2/2} sum_h B_tau(h) pi(h)."""
    tau = _as_tau(alpha)
    q, c, k = phi_pi.q, phi_pi.n, tau.k
    phi_tau = generic_parameter(tau)
    if not is_generic(phi_tau):
        raise FieldError("tau is not generic")
    B = bessel_speh_function(tau, c, path) if B is None else B
    ch = irreducible_character(phi_pi)
    dim = ch(identity_label(c)).real
    pre = q ** ((k - 2) * c * c / 2) * np.sum(class_sizes(q, c) * B.values * ch.values) / dim
    return complex(central_sign(phi_pi, ch) ** (k - 1) * pre)


# Shintani lifts and the Whittaker transform

def shintani_lift_cuspidal_support(beta, k):
    """Frob^k-orbits (size, level-l index) of beta^{q^i} o N_{l/c}, l = lcm(c, k)."""
    q, c = beta.tower.q, beta.level
    l = lcm(c, k)
    Nl = q ** l - 1
    r = Nl // (q ** c - 1)
    out = []
    for i in range(gcd(c, k)):
        idx = (beta.index * pow(q, i, Nl) * r) % Nl
        orbit = {(idx * pow(q, k * j, Nl)) % Nl for j in range(l // k)}
        out.append((len(orbit), min(orbit)))
    return sorted(out)


def f_transform(alpha, c, h):
    """The sum over generic pi of GL_c of dim, central sign, epsilon and Bessel values."""
    tau = _as_tau(alpha)
    q, k = tau.tower.q, tau.k
    phi_tau = generic_parameter(tau)
    h = h.raw if isinstance(h, MatrixGL) else np.asarray(h, dtype=np.int64)
    U_size = q ** (c * (c - 1) // 2)
    total = 0
    for phi in green_parameters(q, c):
        if not is_generic(phi):
            continue
        ch = irreducible_character(phi)
        dim = ch(identity_label(c)).real
        eps = epsilon0(phi.contragredient(), phi_tau)
        total += dim * central_sign(phi, ch) ** (k - 1) * eps * bessel(phi, h, ch)
    return complex(q ** (-c * (k - c - 1) / 2) * U_size / gl_order(c, q) * total)
