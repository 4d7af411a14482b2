"""Finite-field towers F_{q^m} built from discrete-log tables.

Every level stores its elements as "raw" integers: 0 is zero and
1 + t stands for g_m^t.  Generators are normalized so that the norm
of g_n down to level m is g_m, which makes embeddings and norms pure
index arithmetic.
"""

import itertools
from dataclasses import dataclass, field
from math import gcd

import numpy as np

TABLE_CAP = 2 ** 26


class FieldError(ValueError):
    pass


def is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


# polynomials over F_p as coefficient lists, constant term first

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def poly_mulmod(a, b, mod, p):
    n = len(mod) - 1
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                res[i + j] = (res[i + j] + x * y) % p
    inv = pow(mod[-1], p - 2, p)
    for i in range(len(res) - 1, n - 1, -1):
        c = res[i] * inv % p
        if c:
            for j in range(n + 1):
                res[i - n + j] = (res[i - n + j] - c * mod[j]) % p
    return _trim(res[:n])


def poly_powmod(a, e, mod, p):
    result = [1]
    base = list(a)
    while e:
        if e & 1:
            result = poly_mulmod(result, base, mod, p)
        base = poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def poly_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        inv = pow(b[-1], p - 2, p)
        while len(a) >= len(b) and a:
            c = a[-1] * inv % p
            shift = len(a) - len(b)
            for j in range(len(b)):
                a[shift + j] = (a[shift + j] - c * b[j]) % p
            _trim(a)
        a, b = b, a
    return a


def is_irreducible(f, p):
    """Rabin's test for a monic f over F_p."""
    n = len(f) - 1
    if n == 1:
        return True
    x = [0, 1]
    if poly_powmod(x, p ** n, f, p) != _trim([0, 1]):
        return False
    for r in prime_factors(n):
        h = poly_powmod(x, p ** (n // r), f, p)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(poly_gcd(f, _trim(h), p)) > 1:
            return False
    return True


def smallest_irreducible(p, n):
    """Lexicographically smallest monic irreducible of degree n, constant term first."""
    first = range(p) if n == 1 else range(1, p)
    for c0 in first:
        for rest in itertools.product(range(p), repeat=n - 1):
            f = [c0, *rest, 1]
            if is_irreducible(f, p):
                return f
    raise FieldError(f"no irreducible polynomial of degree {n} over F_{p}")


def _digits(values, p, n):
    values = np.asarray(values, dtype=np.int64)
    out = np.empty(values.shape + (n,), dtype=np.int64)
    v = values.copy()
    for i in range(n):
        out[..., i] = v % p
        v //= p
    return out


def _undigits(digits, p):
    n = digits.shape[-1]
    w = p ** np.arange(n, dtype=np.int64)
    return digits @ w


def rank_to_int(ranks, p, n):
    """Element codes in lexicographic order, constant coefficient most significant."""
    d = _digits(ranks, p, n)[..., ::-1]
    return _undigits(np.ascontiguousarray(d), p)


class Level:
    """One field F_{q^m}: tables indexed by raw value or discrete log."""

    def __init__(self, tower, m, modulus, exp_int, gen_int):
        self.tower = tower
        self.m = m
        self.deg = tower.f * m
        self.order = tower.p ** self.deg
        self.N = self.order - 1
        self.modulus = modulus
        self.gen = gen_int
        p, n, N = tower.p, self.deg, self.N
        self.exp = exp_int.astype(np.int64)
        self.log = np.full(self.order, -1, dtype=np.int64)
        self.log[self.exp] = np.arange(N, dtype=np.int64)
        tr_powers = self._trace_of_powers()
        self.zech = np.empty(N, dtype=np.int64)
        # trace down to F_p of every element, indexed by raw value
        self.trp = np.zeros(self.order, dtype=np.int64)
        chunk = 1 << 18
        for a in range(0, N, chunk):
            b = min(N, a + chunk)
            d = _digits(self.exp[a:b], p, n)
            self.trp[1 + a:1 + b] = (d @ tr_powers) % p
            d[:, 0] = (d[:, 0] + 1) % p
            self.zech[a:b] = self.log[_undigits(d, p)] + 1
        self.half = N // 2 if p != 2 else 0

    def _trace_of_powers(self):
        # Tr(x^i) for the modulus root x, via Newton's identities
        p, n = self.tower.p, self.deg
        c = self.modulus
        e = [0] * (n + 1)
        e[0] = 1
        for i in range(1, n + 1):
            e[i] = ((-1) ** i * c[n - i]) % p
        s = [n % p]
        for k in range(1, n):
            acc = 0
            for i in range(1, k):
                acc += (-1) ** (i - 1) * e[i] * s[k - i]
            acc += (-1) ** (k - 1) * k * e[k]
            s.append(acc % p)
        return np.array(s, dtype=np.int64)

    # scalar arithmetic on raw values

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return 1 + (a + b - 2) % self.N

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 + (-(a - 1)) % self.N

    def neg(self, a):
        if a == 0 or self.tower.p == 2:
            return a
        return 1 + (a - 1 + self.half) % self.N

    def add(self, a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        z = int(self.zech[(b - a) % self.N])
        if z == 0:
            return 0
        return 1 + (a - 1 + z - 1) % self.N

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def pow(self, a, e):
        if a == 0:
            if e <= 0:
                raise ZeroDivisionError("zero to a non-positive power")
            return 0
        return 1 + ((a - 1) * e) % self.N

    def frob(self, a, j=1):
        if a == 0:
            return 0
        q = self.tower.q
        return 1 + ((a - 1) * pow(q, j % self.m, self.N)) % self.N

    # vectorized versions on integer arrays

    def vmul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = 1 + (a + b - 2) % self.N
        return np.where((a == 0) | (b == 0), 0, r)

    def vneg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.tower.p == 2:
            return a
        return np.where(a == 0, 0, 1 + (a - 1 + self.half) % self.N)

    def vinv(self, a):
        a = np.asarray(a, dtype=np.int64)
        return np.where(a == 0, 0, 1 + (-(a - 1)) % self.N)

    def vadd(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        z = self.zech[(b - a) % self.N]
        r = np.where(z == 0, 0, 1 + (a - 1 + z - 1) % self.N)
        r = np.where(a == 0, b, np.where(b == 0, a, r))
        return r

    def vfrob(self, a, j=1):
        a = np.asarray(a, dtype=np.int64)
        s = pow(self.tower.q, j % self.m, self.N)
        return np.where(a == 0, 0, 1 + ((a - 1) * s) % self.N)

    def raw_of_int(self, code):
        return int(self.log[code]) + 1

    def int_of_raw(self, raw):
        return 0 if raw == 0 else int(self.exp[raw - 1])

    def prime_field_raw(self, c):
        """Raw value of the integer c viewed in F_p."""
        return self.raw_of_int(c % self.tower.p)


class FieldTower:
    """Compatible family F_{q^m}, m <= max_deg, built lazily per level."""

    def __init__(self, p, f=1, max_deg=1, cap=TABLE_CAP):
        if not is_prime(p):
            raise FieldError(f"{p} is not prime")
        if f < 1 or max_deg < 1:
            raise FieldError("degrees must be positive")
        if p ** (f * max_deg) > cap:
            raise FieldError(f"field of order {p ** (f * max_deg)} exceeds table cap {cap}")
        self.p, self.f, self.max_deg, self.cap = p, f, max_deg, cap
        self.q = p ** f
        self._levels = {}

    def level(self, m):
        if m < 1 or m > self.max_deg:
            raise FieldError(f"level {m} outside 1..{self.max_deg}")
        if m not in self._levels:
            for d in divisors(m)[:-1]:
                self.level(d)
            self._levels[m] = self._build(m)
        return self._levels[m]

    def order(self, m):
        return self.q ** m

    def _build(self, m):
        p, n = self.p, self.f * m
        mod = smallest_irreducible(p, n)
        N = p ** n - 1
        h = self._first_primitive(mod, N)
        exp_h = _power_table(h, mod, p, N)
        log_h = np.full(N + 1, -1, dtype=np.int64)
        log_h[exp_h] = np.arange(N, dtype=np.int64)
        # allowed residues of log_h(g) modulo N_d for each proper divisor d
        constraints = []
        for d in divisors(m)[:-1]:
            low = self._levels[d]
            Nd = low.N
            root_logs = self._minpoly_root_logs(low, mod, exp_h, log_h, N)
            allowed = np.zeros(Nd, dtype=bool)
            allowed[(root_logs // (N // Nd)) % Nd] = True
            constraints.append((Nd, allowed))
        chunk = 1 << 16
        for start in range(0, N + 1, chunk):
            ranks = np.arange(start, min(start + chunk, N + 1), dtype=np.int64)
            codes = rank_to_int(ranks, p, n)
            e = log_h[codes]
            ok = e >= 0
            ok &= np.gcd(e, N) == 1
            for Nd, allowed in constraints:
                ok &= allowed[np.where(e >= 0, e, 0) % Nd]
            hits = np.nonzero(ok)[0]
            if len(hits):
                g = int(codes[hits[0]])
                e0 = int(e[hits[0]])
                t = np.arange(N, dtype=np.int64)
                exp_g = exp_h[(t * e0) % N]
                return Level(self, m, mod, exp_g, g)
        raise FieldError(f"no compatible generator at level {m}")

    def _first_primitive(self, mod, N):
        p, n = self.p, len(mod) - 1
        ps = prime_factors(N)
        for r in itertools.count(1):
            code = int(rank_to_int(np.array([r]), p, n)[0])
            poly = _trim([int(c) for c in _digits(np.array([code]), p, n)[0]])
            if not poly:
                continue
            if poly_powmod(poly, N, mod, p) != [1]:
                continue
            if all(poly_powmod(poly, N // r_, mod, p) != [1] for r_ in ps):
                return poly

    def _minpoly_root_logs(self, low, mod, exp_h, log_h, N):
        """Logs (base h) of the roots in the new level of the minimal polynomial of g_low."""
        p, n_low = self.p, low.deg
        # minimal polynomial of g_low over F_p from its conjugates, evaluated in low
        coeffs = [1]
        g = 2  # raw value of g_low
        for i in range(n_low):
            root = low.pow(g, p ** i)
            new = [0] * (len(coeffs) + 1)
            for j, c in enumerate(coeffs):
                new[j + 1] = low.add(new[j + 1], c)
                new[j] = low.add(new[j], low.neg(low.mul(c, root)))
            coeffs = new
        minpoly = []
        for c in coeffs:
            code = low.int_of_raw(c)
            if code >= p:
                raise FieldError("minimal polynomial not over the prime field")
            minpoly.append(code)
        # roots live in the subgroup of order N_low: candidates h^{(N/N_low) s}
        Nl = low.N
        step = N // Nl
        s = np.arange(Nl, dtype=np.int64)
        cand = (s * step) % N
        n = len(mod) - 1
        # Horner in coefficient-vector form
        digits = np.zeros((Nl, n), dtype=np.int64)
        for c in reversed(minpoly):
            prod_codes = _mul_codes(_undigits(digits, p), exp_h[cand], exp_h, log_h, N)
            digits = _digits(prod_codes, p, n)
            digits[:, 0] = (digits[:, 0] + c) % p
        zero = np.all(digits == 0, axis=1)
        return cand[zero]

    def element(self, m, value):
        self.level(m)
        return FieldElement(self, m, int(value))

    def gen(self, m):
        return self.element(m, 1 + 1 % self.level(m).N)

    def zero(self, m):
        return self.element(m, 0)

    def one(self, m):
        return self.element(m, 1)

    def from_log(self, m, t):
        return self.element(m, 1 + t % self.level(m).N)

    def from_int(self, m, code):
        return self.element(m, self.level(m).raw_of_int(code))

    def elements(self, m):
        for v in range(self.order(m)):
            yield FieldElement(self, m, v)

    def units(self, m):
        for v in range(1, self.order(m)):
            yield FieldElement(self, m, v)

    # maps between levels on raw values

    def embed_raw(self, raw, m, n):
        if n % m:
            raise FieldError(f"{m} does not divide {n}")
        if raw == 0:
            return 0
        return 1 + (raw - 1) * ((self.q ** n - 1) // (self.q ** m - 1))

    def restrict_raw(self, raw, n, m):
        """Inverse of embed_raw; raises if the element is not in the subfield."""
        if raw == 0:
            return 0
        r = (self.q ** n - 1) // (self.q ** m - 1)
        if (raw - 1) % r:
            raise FieldError("element does not lie in the subfield")
        return 1 + (raw - 1) // r

    def norm_raw(self, raw, n, m):
        if n % m:
            raise FieldError(f"{m} does not divide {n}")
        if raw == 0:
            return 0
        return 1 + (raw - 1) % (self.q ** m - 1)

    def trace_raw(self, raw, n, m):
        if n % m:
            raise FieldError(f"{m} does not divide {n}")
        L = self.level(n)
        acc = 0
        for j in range(n // m):
            acc = L.add(acc, L.frob(raw, j * m))
        return self.restrict_raw(acc, n, m)

    def embedding_root(self, m, n):
        """Image of the level-m modulus variable x inside level n, as an int code."""
        low = self.level(m)
        x_raw = low.raw_of_int(self.p) if low.deg > 1 else None
        if x_raw is None:
            # degree-one modulus x + c has root -c
            x_raw = low.raw_of_int((-low.modulus[0]) % self.p)
        return self.level(n).int_of_raw(self.embed_raw(x_raw, m, n))

    def info(self):
        out = {"p": self.p, "f": self.f, "q": self.q, "max_deg": self.max_deg, "levels": []}
        for m in range(1, self.max_deg + 1):
            L = self.level(m)
            roots = {str(n): self.embedding_root(m, n) for n in range(2 * m, self.max_deg + 1, m)}
            out["levels"].append({
                "m": m,
                "order": L.order,
                "modulus": list(L.modulus),
                "generator": [int(c) for c in _digits(np.array([L.gen]), self.p, L.deg)[0]],
                "embedding_roots": roots,
            })
        return out


def _mul_codes(a, b, exp, log, N):
    la, lb = log[a], log[b]
    r = exp[(la + lb) % N]
    return np.where((la < 0) | (lb < 0), 0, r)


def _power_table(h, mod, p, N):
    """Integer codes of h^t for t = 0..N-1, by blocked matrix powers over F_p."""
    n = len(mod) - 1
    # matrix of multiplication by h
    M = np.zeros((n, n), dtype=np.int64)
    for j in range(n):
        col = poly_mulmod([0] * j + [1], h, mod, p)
        for i, c in enumerate(col):
            M[i, j] = c
    B = min(N, 1 << 12)
    V = np.zeros((n, B), dtype=np.int64)
    v = np.zeros(n, dtype=np.int64)
    v[0] = 1
    for t in range(B):
        V[:, t] = v
        v = (M @ v) % p
    MB = np.eye(n, dtype=np.int64)
    base, e = M.copy(), B
    while e:
        if e & 1:
            MB = (MB @ base) % p
        base = (base @ base) % p
        e >>= 1
    out = np.empty(N, dtype=np.int64)
    w = p ** np.arange(n, dtype=np.int64)
    for start in range(0, N, B):
        cnt = min(B, N - start)
        out[start:start + cnt] = (w @ V[:, :cnt])
        V = (MB @ V) % p
    return out


@dataclass(frozen=True)
class FieldElement:
    tower: FieldTower = field(compare=False, repr=False)
    level: int
    value: int

    @property
    def L(self):
        return self.tower.level(self.level)

    def is_zero(self):
        return self.value == 0

    def dlog(self):
        if self.value == 0:
            raise ZeroDivisionError("discrete log of zero")
        return self.value - 1

    def _wrap(self, v):
        return FieldElement(self.tower, self.level, v)

    def _check(self, other):
        if not isinstance(other, FieldElement) or other.level != self.level:
            raise FieldError("level mismatch")

    def __add__(self, other):
        self._check(other)
        return self._wrap(self.L.add(self.value, other.value))

    def __sub__(self, other):
        self._check(other)
        return self._wrap(self.L.sub(self.value, other.value))

    def __neg__(self):
        return self._wrap(self.L.neg(self.value))

    def __mul__(self, other):
        self._check(other)
        return self._wrap(self.L.mul(self.value, other.value))

    def __truediv__(self, other):
        self._check(other)
        return self._wrap(self.L.mul(self.value, self.L.inv(other.value)))

    def __pow__(self, e):
        return self._wrap(self.L.pow(self.value, e))

    def to_int(self):
        return self.L.int_of_raw(self.value)

    def coeffs(self):
        return [int(c) for c in _digits(np.array([self.to_int()]), self.tower.p, self.L.deg)[0]]


def build_tower(p, f=1, max_deg=1, cap=TABLE_CAP):
    return FieldTower(p, f, max_deg, cap)


def _as_elem(x):
    if not isinstance(x, FieldElement):
        raise FieldError("expected a FieldElement")
    return x


def norm(x, m):
    x = _as_elem(x)
    n = x.level
    return FieldElement(x.tower, m, x.tower.norm_raw(x.value, n, m))


def trace(x, m):
    x = _as_elem(x)
    n = x.level
    return FieldElement(x.tower, m, x.tower.trace_raw(x.value, n, m))


def frobenius(x, j=1):
    x = _as_elem(x)
    return FieldElement(x.tower, x.level, x.L.frob(x.value, j))


def embed(x, n):
    x = _as_elem(x)
    return FieldElement(x.tower, n, x.tower.embed_raw(x.value, x.level, n))


def degree_of(x):
    """Size of the Frobenius orbit of x over F_q."""
    x = _as_elem(x)
    if x.value == 0:
        return 1
    return orbit_degree(x.value - 1, x.tower.q, x.level)


def orbit_degree(t, q, m):
    N = q ** m - 1
    for d in divisors(m):
        if (t * (q ** d - 1)) % N == 0:
            return d
    return m


def orbit_of(t, q, m):
    N = q ** m - 1
    out, cur = [], t % N
    while cur not in out:
        out.append(cur)
        cur = (cur * q) % N
    return out


def factorize(n):
    """Prime factors of n; trial division, then sympy for large cofactors."""
    if n < 10 ** 12:
        return prime_factors(n)
    from sympy import factorint
    return sorted(factorint(n))


class BigField:
    """F_{q^l} in a polynomial basis, without tables.

    The generator g is chosen so that g^{(q^l-1)/(q^d-1)} is the image of the
    tower generator g_d for every d in `anchors`; norms to those levels are then
    discrete logs reduced mod q^d - 1, exactly as inside the tower.
    """

    def __init__(self, tower, l, anchors):
        self.tower, self.l = tower, l
        p, self.p = tower.p, tower.p
        self.n = tower.f * l
        self.modulus = smallest_irreducible(p, self.n)
        self.N = p ** self.n - 1
        self.anchors = sorted(set(anchors))
        for d in self.anchors:
            if l % d:
                raise FieldError(f"anchor {d} does not divide {l}")
        ps = factorize(self.N)
        h = self._first_primitive(ps)
        e = self._compatible_exponent(h)
        self.g = self.pow(h, e)
        self.trace_coeffs = self._trace_of_powers()

    def mul(self, a, b):
        return poly_mulmod(a, b, self.modulus, self.p)

    def pow(self, a, e):
        return poly_powmod(a, e, self.modulus, self.p)

    def vec(self, a):
        v = np.zeros(self.n, dtype=np.int64)
        v[:len(a)] = a
        return v

    def mul_matrix(self, a):
        M = np.zeros((self.n, self.n), dtype=np.int64)
        for j in range(self.n):
            col = self.mul([0] * j + [1], a)
            M[:len(col), j] = col
        return M

    def _first_primitive(self, ps):
        p, n, N = self.p, self.n, self.N
        for r in itertools.count(1):
            code = int(rank_to_int(np.array([r]), p, n)[0])
            poly = _trim([int(c) for c in _digits(np.array([code]), p, n)[0]])
            if not poly:
                continue
            if self.pow(poly, N) != [1]:
                continue
            if all(self.pow(poly, N // r_) != [1] for r_ in ps):
                return poly

    def _minpoly(self, u, deg):
        # prod over Frobenius conjugates, coefficients land in F_p
        coeffs = [[1]]
        root = u
        for _ in range(deg):
            new = [[] for _ in range(len(coeffs) + 1)]
            for j, c in enumerate(coeffs):
                new[j + 1] = _poly_add(new[j + 1], c, self.p)
                new[j] = _poly_add(new[j], [(-x) % self.p for x in self.mul(c, root)], self.p)
            coeffs = new
            root = self.pow(root, self.p)
        out = []
        for c in coeffs:
            if len(c) > 1:
                raise FieldError("minimal polynomial not over F_p")
            out.append(c[0] if c else 0)
        return out

    def _compatible_exponent(self, h):
        tower, p, N = self.tower, self.p, self.N
        allowed = []
        for d in self.anchors:
            low = tower.level(d)
            Nd = low.N
            u = self.pow(h, N // Nd)
            P = self._minpoly(u, low.deg)
            # roots of P among g_d^s, evaluated with the level-d tables
            s = np.arange(Nd, dtype=np.int64)
            acc = np.zeros(Nd, dtype=np.int64)
            for c in reversed(P):
                acc = low.vmul(acc, 1 + s)
                acc = low.vadd(acc, low.prime_field_raw(c))
            roots = s[acc == 0]
            allowed.append((Nd, sorted({pow(int(r), -1, Nd) for r in roots})))
        best = None
        for combo in itertools.product(*[a for _, a in allowed]) if allowed else [()]:
            e0, mod = 0, 1
            ok = True
            for (Nd, _), r in zip(allowed, combo):
                e0, mod = _crt(e0, mod, r, Nd)
                if e0 is None:
                    ok = False
                    break
            if not ok:
                continue
            e = e0 if e0 > 0 else mod
            while gcd(e, N) != 1:
                e += mod
            if best is None or e < best:
                best = e
        if best is None:
            raise FieldError("no compatible generator")
        return best

    def _trace_of_powers(self):
        p, n = self.p, self.n
        c = self.modulus
        e = [0] * (n + 1)
        e[0] = 1
        for i in range(1, n + 1):
            e[i] = ((-1) ** i * c[n - i]) % p
        s = [n % p]
        for k in range(1, n):
            acc = 0
            for i in range(1, k):
                acc += (-1) ** (i - 1) * e[i] * s[k - i]
            acc += (-1) ** (k - 1) * k * e[k]
            s.append(acc % p)
        return np.array(s, dtype=np.int64)

    def trace_prime(self, a):
        return int(self.vec(a) @ self.trace_coeffs) % self.p


def _poly_add(a, b, p):
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] = x
    for i, x in enumerate(b):
        out[i] = (out[i] + x) % p
    return _trim(out)


def _crt(a1, m1, a2, m2):
    g = gcd(m1, m2)
    if (a2 - a1) % g:
        return None, None
    l = m1 // g * m2
    t = ((a2 - a1) // g * pow(m1 // g, -1, m2 // g)) % (m2 // g) if m2 // g > 1 else 0
    return (a1 + m1 * t) % l, l
