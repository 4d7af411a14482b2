"""Matrices over the tower levels, conjugacy classes of GL_n(F_q), Shintani norms.

Matrices are int arrays of raw field values.  Batched routines take arrays of
shape (G, n, n) so whole groups can be classified at once: characteristic
polynomials from principal minors, irreducible factors as Frobenius orbits of
roots inside the tower, and Jordan types from ranks of f(A)^j.
"""

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import prod

import numpy as np

from .chars import orbit_rep
from .etale import BudgetError, resolve_budget
from .fields import TABLE_CAP, FieldError, build_tower, orbit_degree, prime_factors
from .symfunc import as_partition, partitions, transpose

MAX_RANK = 6
TOWER_DEG = 12


@lru_cache(maxsize=None)
def tower_for(q):
    ps = prime_factors(q)
    if len(ps) != 1:
        raise FieldError(f"{q} is not a prime power")
    p = ps[0]
    f = 0
    while p ** f < q:
        f += 1
    if p ** f != q:
        raise FieldError(f"{q} is not a prime power")
    deg = TOWER_DEG
    while q ** deg > TABLE_CAP:
        deg -= 1
    return build_tower(p, f, deg)


def gl_order(n, Q):
    return prod(Q ** n - Q ** i for i in range(n))


# class labels

@dataclass(frozen=True, order=True)
class ConjClassLabel:
    blocks: tuple  # sorted tuple of ((a, j), mu)

    @property
    def n(self):
        return sum(a * sum(mu) for (a, _), mu in self.blocks)

    def __str__(self):
        return ";".join(f"{a}:{j}:[{','.join(map(str, mu))}]" for (a, j), mu in self.blocks)

    def orbits(self):
        return [o for o, _ in self.blocks]


def make_label(blocks):
    merged = {}
    for (a, j), mu in blocks:
        key = (a, j)
        if key in merged:
            raise FieldError(f"orbit {key} repeated")
        merged[key] = as_partition(mu)
    return ConjClassLabel(tuple(sorted(merged.items())))


def parse_class(spec, q):
    """'a:j:[m1,m2];...' with xi = g_a^j of degree a."""
    blocks = []
    for part in str(spec).split(";"):
        part = part.strip()
        if not part:
            continue
        try:
            a, j, mu = part.split(":", 2)
            a, j = int(a), int(j)
            mu = [int(x) for x in mu.strip().strip("[]").split(",") if x.strip()]
        except ValueError as exc:
            raise FieldError(f"bad class block {part!r}") from exc
        if not 0 <= j < q ** a - 1:
            raise FieldError(f"index {j} out of range for level {a}")
        if orbit_degree(j, q, a) != a:
            raise FieldError(f"g_{a}^{j} does not have degree {a}")
        blocks.append(((a, orbit_rep(j, q, a)), mu))
    return make_label(blocks)


@lru_cache(maxsize=None)
def orbits_of_degree(q, a):
    """Canonical labels (a, j) of Frobenius orbits of degree exactly a in F_{q^a}^x."""
    N = q ** a - 1
    out = []
    for j in range(N):
        if orbit_degree(j, q, a) == a and orbit_rep(j, q, a) == j:
            out.append((a, j))
    return out


@lru_cache(maxsize=None)
def enumerate_classes(q, n):
    if n > MAX_RANK:
        raise FieldError(f"n = {n} above {MAX_RANK}")
    orbs = [o for a in range(1, n + 1) for o in orbits_of_degree(q, a)]
    out = []

    def rec(i, rem, acc):
        if rem == 0:
            out.append(ConjClassLabel(tuple(sorted(acc))))
            return
        if i == len(orbs):
            return
        a = orbs[i][0]
        rec(i + 1, rem, acc)
        for size in range(1, rem // a + 1):
            for mu in partitions(size):
                acc.append((orbs[i], mu))
                rec(i + 1, rem - a * size, acc)
                acc.pop()

    rec(0, n, [])
    return tuple(sorted(out))


def centralizer_order(label, q):
    tot = 1
    for (a, _), mu in label.blocks:
        Q = q ** a
        mt = transpose(mu)
        mult = {}
        for x in mu:
            mult[x] = mult.get(x, 0) + 1
        # exact integer form: Q^{sum mu'^2} prod_i prod_{j<=m_i} (1 - Q^{-j})
        num = Q ** sum(x * x for x in mt)
        den = 1
        for m in mult.values():
            for j in range(1, m + 1):
                num *= Q ** j - 1
                den *= Q ** j
        tot *= num // den
    return tot


def class_size(label, q, n=None):
    n = label.n if n is None else n
    return gl_order(n, q) // centralizer_order(label, q)


# matrices

@dataclass(frozen=True)
class MatrixGL:
    tower: object
    level: int
    raw: np.ndarray

    @property
    def n(self):
        return self.raw.shape[0]

    @property
    def L(self):
        return self.tower.level(self.level)

    def __matmul__(self, other):
        return MatrixGL(self.tower, self.level, bmatmul(self.L, self.raw[None], other.raw[None])[0])

    def det(self):
        return int(bdet(self.L, self.raw[None])[0])

    def trace(self):
        return int(btrace(self.L, self.raw[None])[0])

    def inverse(self):
        return MatrixGL(self.tower, self.level, binv(self.L, self.raw[None])[0])

    def frob(self, j=1):
        return MatrixGL(self.tower, self.level, self.L.vfrob(self.raw, j))

    def is_invertible(self):
        return self.det() != 0

    def to_ints(self):
        return [[self.L.int_of_raw(int(x)) for x in row] for row in self.raw]

    def embed(self, level):
        f = np.vectorize(lambda x: self.tower.embed_raw(int(x), self.level, level))
        return MatrixGL(self.tower, level, f(self.raw).astype(np.int64))


def matrix_from_ints(tower, level, rows):
    L = tower.level(level)
    raw = np.array([[L.raw_of_int(int(x)) for x in r] for r in rows], dtype=np.int64)
    return MatrixGL(tower, level, raw)


def identity(tower, level, n):
    return MatrixGL(tower, level, np.eye(n, dtype=np.int64))


def bmatmul(L, A, B):
    G, n, k = A.shape
    m = B.shape[2]
    out = np.zeros((G, n, m), dtype=np.int64)
    for i in range(n):
        for j in range(m):
            acc = np.zeros(G, dtype=np.int64)
            for t in range(k):
                acc = L.vadd(acc, L.vmul(A[:, i, t], B[:, t, j]))
            out[:, i, j] = acc
    return out


def btrace(L, A):
    acc = np.zeros(A.shape[0], dtype=np.int64)
    for i in range(A.shape[1]):
        acc = L.vadd(acc, A[:, i, i])
    return acc


@lru_cache(maxsize=None)
def _perms(n):
    out = []
    for p in itertools.permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        out.append((p, inv % 2))
    return out


def bdet(L, A):
    G, n, _ = A.shape
    if n == 0:
        return np.ones(G, dtype=np.int64)
    acc = np.zeros(G, dtype=np.int64)
    for p, odd in _perms(n):
        term = np.ones(G, dtype=np.int64)
        for i in range(n):
            term = L.vmul(term, A[:, i, p[i]])
        acc = L.vadd(acc, L.vneg(term) if odd else term)
    return acc


def bcharpoly(L, A):
    """Coefficients c_0..c_n (constant first, monic) of det(X - A), raw values."""
    G, n, _ = A.shape
    coeffs = np.zeros((G, n + 1), dtype=np.int64)
    coeffs[:, n] = 1
    for r in range(1, n + 1):
        e = np.zeros(G, dtype=np.int64)
        for idx in itertools.combinations(range(n), r):
            sub = A[:, idx][:, :, idx]
            e = L.vadd(e, bdet(L, sub))
        coeffs[:, n - r] = L.vneg(e) if r % 2 else e
    return coeffs


def brank(L, A):
    """Ranks of a batch of matrices by masked Gaussian elimination."""
    A = A.copy()
    G, n, m = A.shape
    rank = np.zeros(G, dtype=np.int64)
    rows = np.arange(G)
    for col in range(m):
        # pivot: first row >= rank with nonzero entry in this column
        cand = np.full(G, -1, dtype=np.int64)
        for r in range(n - 1, -1, -1):
            ok = (A[:, r, col] != 0) & (r >= rank)
            cand = np.where(ok, r, cand)
        has = cand >= 0
        if not has.any():
            continue
        g = rows[has]
        piv_r = cand[has]
        tgt = rank[has]
        # swap pivot row into position `rank`
        tmp = A[g, tgt].copy()
        A[g, tgt] = A[g, piv_r]
        A[g, piv_r] = tmp
        pv = A[g, tgt, col]
        inv = L.vinv(pv)
        for r in range(n):
            below = r > tgt
            if not below.any():
                continue
            gg = g[below]
            f = L.vmul(A[gg, r, col], inv[below])
            sub = L.vmul(f[:, None], A[gg, tgt[below]])
            A[gg, r] = L.vadd(A[gg, r], L.vneg(sub))
        rank[has] += 1
    return rank


def binv(L, A):
    """Inverses of a batch of invertible matrices by batched Gauss-Jordan."""
    G, n, _ = A.shape
    M = np.concatenate([A, np.broadcast_to(np.eye(n, dtype=np.int64), (G, n, n))], axis=2).copy()
    rows = np.arange(G)
    for c in range(n):
        piv = np.full(G, -1, dtype=np.int64)
        for r in range(n - 1, c - 1, -1):
            piv = np.where(M[:, r, c] != 0, r, piv)
        if (piv < 0).any():
            raise FieldError("singular matrix")
        tmp = M[rows, piv].copy()
        M[rows, piv] = M[:, c]
        M[:, c] = tmp
        M[:, c] = L.vmul(M[:, c], L.vinv(M[:, c, c])[:, None])
        for r in range(n):
            if r != c:
                f = M[:, r, c]
                M[:, r] = L.vadd(M[:, r], L.vneg(L.vmul(f[:, None], M[:, c])))
    return M[:, :, n:]


def bpoly_eval(L, coeffs, A):
    """f(A) for scalar coefficients (raw, constant first) and a batch A."""
    G, n, _ = A.shape
    acc = np.zeros_like(A)
    for c in reversed(coeffs):
        acc = bmatmul(L, acc, A)
        acc[:, np.arange(n), np.arange(n)] = L.vadd(acc[:, np.arange(n), np.arange(n)], np.full((G, n), c))
    return acc


# scalar polynomial helpers over a level (raw values, constant first)

def _poly_eval_all(L, coeffs):
    """Values of the polynomial at every unit g^t, t = 0..N-1."""
    t = np.arange(L.N, dtype=np.int64)
    x = 1 + t
    acc = np.zeros(L.N, dtype=np.int64)
    for c in reversed(coeffs):
        acc = L.vadd(L.vmul(acc, x), np.full(L.N, c))
    return acc


def _synthetic_div(L, coeffs, root):
    """Divide by (X - root); returns (quotient, remainder)."""
    n = len(coeffs) - 1
    out = [0] * n
    acc = 0
    for i in range(n, 0, -1):
        acc = L.add(L.mul(acc, root), coeffs[i])
        out[i - 1] = acc
    rem = L.add(L.mul(acc, root), coeffs[0])
    return out, rem


def minimal_polynomial(tower, a, j):
    """Minimal polynomial over F_q of g_a^j, coefficients as level-1 raw values."""
    L = tower.level(a)
    root = 1 + j % L.N
    poly = [1]
    r = root
    for _ in range(orbit_degree(j, tower.q, a)):
        # multiply by (X - r)
        new = [0] * (len(poly) + 1)
        for i, c in enumerate(poly):
            new[i + 1] = L.add(new[i + 1], c)
            new[i] = L.sub(new[i], L.mul(c, r))
        poly = new
        r = L.frob(r, 1)
    return [tower.restrict_raw(c, a, 1) for c in poly]


def factor_charpoly(tower, coeffs1, n):
    """Irreducible factorization of a monic polynomial over F_q (level-1 raw coefficients,
    nonzero constant term) as [((a, j), multiplicity)], by locating roots in levels 1..n."""
    q = tower.q
    out = []
    remaining = n
    for a in range(1, n + 1):
        if remaining == 0:
            break
        if remaining < a:
            continue
        L = tower.level(a)
        ca = [tower.embed_raw(c, 1, a) for c in coeffs1]
        vals = _poly_eval_all(L, ca)
        roots = np.nonzero(vals == 0)[0]
        seen = set()
        for t in roots.tolist():
            if orbit_degree(t, q, a) != a:
                continue
            rep = orbit_rep(t, q, a)
            if rep in seen:
                continue
            seen.add(rep)
            mult = 0
            poly = ca
            while True:
                quo, rem = _synthetic_div(L, poly, 1 + t)
                if rem != 0:
                    break
                mult += 1
                poly = quo
            out.append(((a, rep), mult))
            remaining -= a * mult
    if remaining != 0:
        raise FieldError("characteristic polynomial did not split over the tower")
    return out


def classify_batch(tower, level, A):
    """Conjugacy-class labels (in GL_n(F_q)) of a batch of matrices over F_{q^level}
    whose characteristic polynomials are F_q-rational."""
    L = tower.level(level)
    G, n, _ = A.shape
    cp = bcharpoly(L, A)
    # map to level-1 raw values, checking rationality
    r1 = np.vectorize(lambda x: tower.restrict_raw(int(x), level, 1), otypes=[np.int64])
    if level == 1:
        cp1 = cp
    else:
        back = np.vectorize(lambda x: tower.embed_raw(int(x), 1, level), otypes=[np.int64])
        uniq = np.unique(cp)
        table = {int(u): int(r1(u)) for u in uniq}
        cp1 = np.vectorize(table.get, otypes=[np.int64])(cp)
        if not np.array_equal(back(cp1), cp) if cp.size else False:
            raise FieldError("characteristic polynomial is not F_q-rational")
    keys, inv = np.unique(cp1, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    labels = np.empty(G, dtype=object)
    for ki, key in enumerate(keys):
        sel = np.nonzero(inv == ki)[0]
        fac = factor_charpoly(tower, [int(x) for x in key], n)
        simple = [((a, j), e) for (a, j), e in fac if e == 1]
        multi = [((a, j), e) for (a, j), e in fac if e > 1]
        if not multi:
            lab = ConjClassLabel(tuple(sorted(((a, j), (1,)) for (a, j), _ in fac)))
            labels[sel] = [lab] * len(sel)
            continue
        # Jordan types via nullities of f(A)^j
        sub = A[sel]
        types = []
        for (a, j), e in multi:
            f1 = minimal_polynomial(tower, a, j)
            fl = [tower.embed_raw(c, 1, level) for c in f1]
            FA = bpoly_eval(L, fl, sub)
            P = FA.copy()
            nulls = [np.zeros(len(sel), dtype=np.int64)]
            for _ in range(e):
                nulls.append(n - brank(L, P))
                if len(nulls) <= e:
                    P = bmatmul(L, P, FA)
            nulls = np.stack(nulls, axis=1)  # (len(sel), e+1)
            types.append(((a, j), e, nulls))
        codes = np.concatenate([t[2] for t in types], axis=1)
        ukeys, uinv = np.unique(codes, axis=0, return_inverse=True)
        uinv = uinv.reshape(-1)
        for ui, ukey in enumerate(ukeys):
            blocks = [((a, j), (1,)) for (a, j), _ in simple]
            pos = 0
            for (a, j), e, _ in types:
                nl = ukey[pos:pos + e + 1]
                pos += e + 1
                cols = [(nl[i] - nl[i - 1]) // a for i in range(1, e + 1)]
                mu = transpose(tuple(c for c in cols if c > 0))
                if sum(mu) != e:
                    raise FieldError("inconsistent nullity sequence")
                blocks.append(((a, j), mu))
            lab = ConjClassLabel(tuple(sorted(blocks)))
            idx = sel[uinv == ui]
            labels[idx] = [lab] * len(idx)
    return labels


def identify_class(A, q=None):
    if q is not None and q != A.tower.q:
        raise FieldError("base field mismatch")
    return classify_batch(A.tower, A.level, A.raw[None])[0]


def companion(tower, a, j):
    """Companion matrix of the minimal polynomial of g_a^j: ones below the diagonal,
    last column minus the coefficients."""
    f = minimal_polynomial(tower, a, j)
    L = tower.level(1)
    C = np.zeros((a, a), dtype=np.int64)
    for i in range(a - 1):
        C[i + 1, i] = 1
    for i in range(a):
        C[i, a - 1] = L.neg(f[i])
    return C


def jordan_block(tower, a, j, m):
    h = companion(tower, a, j)
    J = np.zeros((a * m, a * m), dtype=np.int64)
    for b in range(m):
        J[a * b:a * b + a, a * b:a * b + a] = h
        if b + 1 < m:
            J[a * b:a * b + a, a * (b + 1):a * (b + 1) + a] = np.eye(a, dtype=np.int64)
    return J


def class_representative(label, q=None, tower=None):
    tower = tower or tower_for(q)
    blocks = []
    for (a, j), mu in label.blocks:
        for m in mu:
            blocks.append(jordan_block(tower, a, j, m))
    n = sum(b.shape[0] for b in blocks)
    out = np.zeros((n, n), dtype=np.int64)
    pos = 0
    for b in blocks:
        s = b.shape[0]
        out[pos:pos + s, pos:pos + s] = b
        pos += s
    return MatrixGL(tower, 1, out)


# enumeration

def group_batches(tower, n, level, budget=None, chunk=1 << 16):
    """All of GL_n(F_{q^level}) as raw arrays (G, n, n), in code order."""
    budget = resolve_budget(budget)
    Q = tower.q ** level
    size = gl_order(n, Q)
    if size > budget:
        raise BudgetError(size, budget)
    L = tower.level(level)
    total = Q ** (n * n)
    for start in range(0, total, chunk):
        codes = np.arange(start, min(total, start + chunk), dtype=np.int64)
        digits = np.stack([(codes // Q ** i) % Q for i in range(n * n - 1, -1, -1)], axis=1)
        A = digits.reshape(-1, n, n)
        d = bdet(L, A)
        yield A[d != 0]


def group_iter(q, n, level=1, budget=None, tower=None):
    tower = tower or tower_for(q)
    for A in group_batches(tower, n, level, budget):
        for M in A:
            yield MatrixGL(tower, level, M)


def shintani_norm_batch(tower, level, A):
    """Frob^{k-1}(x) ... Frob(x) x for a batch, k = level."""
    L = tower.level(level)
    acc = A
    for i in range(1, level):
        acc = bmatmul(L, L.vfrob(A, i), acc)
    return acc


def shintani_norm_class(h):
    N = shintani_norm_batch(h.tower, h.level, h.raw[None])
    return classify_batch(h.tower, h.level, N)[0]


def label_index(q, n):
    return {lab: i for i, lab in enumerate(enumerate_classes(q, n))}


def norm_histogram(q, c, k, budget=None):
    """Counts over x in GL_c(F_{q^k}) by (class of N(x) in GL_c(F_q), log det x, Tr x in F_p).

    Axis 0 follows enumerate_classes(q, c).  Cached per (q, c, k).
    """
    budget = resolve_budget(budget)
    size = gl_order(c, q ** k)
    if size > budget:
        raise BudgetError(size, budget)
    key = (q, c, k)
    if key in _HIST:
        return _HIST[key]
    tower = tower_for(q)
    L = tower.level(k)
    index = label_index(q, c)
    H = np.zeros((len(index), q ** k - 1, tower.p), dtype=np.int64)
    for A in group_batches(tower, c, k, budget):
        labs = classify_batch(tower, k, shintani_norm_batch(tower, k, A))
        li = np.fromiter((index[x] for x in labs), dtype=np.int64, count=len(labs))
        d = bdet(L, A) - 1
        tr = L.trp[btrace(L, A)]
        np.add.at(H, (li, d, tr), 1)
    _HIST[key] = H
    return H


_HIST = {}


def unipotent_batch(tower, n, blocks=None):
    """All block upper unitriangular matrices over F_q for the composition `blocks`
    of n (default: ones, the full upper unitriangular group)."""
    blocks = blocks or (1,) * n
    owner = np.repeat(np.arange(len(blocks)), blocks)
    free = [(i, j) for i in range(n) for j in range(n) if owner[i] < owner[j]]
    q = tower.q
    total = q ** len(free)
    codes = np.arange(total, dtype=np.int64)
    U = np.broadcast_to(np.eye(n, dtype=np.int64), (total, n, n)).copy()
    for pos, (i, j) in enumerate(free):
        U[:, i, j] = (codes // q ** pos) % q
    return U
