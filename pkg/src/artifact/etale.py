"""Etale algebras F_lam = prod F_{k_i} tensored with F_m.

Each factor F_k (x) F_m is identified with F_l^d (l = lcm, d = gcd) by
x (x) y -> (x * y^{q^{-i}})_{i<d}.  In these coordinates the two norms and
the trace are index arithmetic on discrete logs plus one Zech sum.
"""

import itertools
import os
from dataclasses import dataclass
from math import gcd, prod

import numpy as np

from .fields import FieldElement, FieldError

ENUM_BUDGET = 10 ** 8


def resolve_budget(budget=None):
    """Explicit budget, else $ARTIFACT_BUDGET, else ENUM_BUDGET."""
    return int(os.environ.get("ARTIFACT_BUDGET", ENUM_BUDGET)) if budget is None else budget


class BudgetError(RuntimeError):
    def __init__(self, size, budget):
        super().__init__(f"enumeration of {size} items exceeds budget {budget}")
        self.size = size
        self.budget = budget


def lcm(a, b):
    return a * b // gcd(a, b)


def parse_partition(spec):
    parts = [int(x) for x in str(spec).replace(",", "+").split("+") if x.strip()]
    if not parts or any(x <= 0 for x in parts):
        raise ValueError(f"bad partition spec {spec!r}")
    return tuple(parts)


@dataclass(frozen=True)
class EtaleAlgebra:
    tower: object
    parts: tuple

    def __post_init__(self):
        object.__setattr__(self, "parts", tuple(self.parts))
        if any(k > self.tower.max_deg for k in self.parts):
            raise FieldError("part exceeds tower max_deg")

    @property
    def k(self):
        return sum(self.parts)

    @property
    def s(self):
        return len(self.parts)

    def shape(self, m):
        """(l_i, d_i) per component of F_lam (x) F_m."""
        return [(lcm(k, m), gcd(k, m)) for k in self.parts]

    def unit_count(self, m):
        q = self.tower.q
        return prod((q ** l - 1) ** d for l, d in self.shape(m))


@dataclass(frozen=True)
class TensorElement:
    algebra: EtaleAlgebra
    m: int
    comps: tuple  # per component, a tuple of raw values at level l_i

    def is_unit(self):
        return all(v != 0 for c in self.comps for v in c)

    def __mul__(self, other):
        out = []
        for (l, d), a, b in zip(self.algebra.shape(self.m), self.comps, other.comps):
            L = self.algebra.tower.level(l)
            out.append(tuple(L.mul(x, y) for x, y in zip(a, b)))
        return TensorElement(self.algebra, self.m, tuple(out))

    def __add__(self, other):
        out = []
        for (l, d), a, b in zip(self.algebra.shape(self.m), self.comps, other.comps):
            L = self.algebra.tower.level(l)
            out.append(tuple(L.add(x, y) for x, y in zip(a, b)))
        return TensorElement(self.algebra, self.m, tuple(out))


def one(algebra, m):
    return TensorElement(algebra, m, tuple((1,) * d for l, d in algebra.shape(m)))


def pure_tensor(algebra, m, xs, y):
    """Image of (x_1 (x) y, ..., x_s (x) y) with x_i at level k_i and y at level m."""
    tower = algebra.tower
    comps = []
    for (l, d), k, x in zip(algebra.shape(m), algebra.parts, xs):
        L = tower.level(l)
        ex = tower.embed_raw(x.value, k, l)
        ey = tower.embed_raw(y.value, m, l)
        coords = []
        for i in range(d):
            coords.append(L.mul(ex, L.frob(ey, l - (i % l))))
        comps.append(tuple(coords))
    return TensorElement(algebra, m, tuple(comps))


def _norm1_log(logs, q, k):
    return sum(logs) % (q ** k - 1)


def _norm2_log(logs, q, m):
    N = q ** m - 1
    return sum(e * pow(q, i, N) for i, e in enumerate(logs)) % N


def norm1(z):
    """Tuple of FieldElements, component i at level k_i."""
    tower = z.algebra.tower
    out = []
    for k, c in zip(z.algebra.parts, z.comps):
        if any(v == 0 for v in c):
            out.append(FieldElement(tower, k, 0))
        else:
            out.append(FieldElement(tower, k, 1 + _norm1_log([v - 1 for v in c], tower.q, k)))
    return tuple(out)


def norm2(z):
    tower = z.algebra.tower
    m = z.m
    if not z.is_unit():
        return FieldElement(tower, m, 0)
    e = 0
    for c in z.comps:
        e += _norm2_log([v - 1 for v in c], tower.q, m)
    return FieldElement(tower, m, 1 + e % (tower.q ** m - 1))


def tensor_trace(z, base=1):
    """Trace down to F_{q^base}; base must divide m and every l_i."""
    tower = z.algebra.tower
    L1 = tower.level(base)
    acc = 0
    for (l, d), c in zip(z.algebra.shape(z.m), z.comps):
        L = tower.level(l)
        s = 0
        for v in c:
            s = L.add(s, v)
        acc = L1.add(acc, tower.trace_raw(s, l, base))
    return FieldElement(tower, base, acc)


def trace_prime(z):
    """Trace down to F_p, as an integer mod p."""
    tower = z.algebra.tower
    acc = 0
    for (l, d), c in zip(z.algebra.shape(z.m), z.comps):
        L = tower.level(l)
        s = 0
        for v in c:
            s = L.add(s, v)
        acc += int(L.trp[s])
    return acc % tower.p


def units(algebra, m, budget=ENUM_BUDGET):
    size = algebra.unit_count(m)
    if size > budget:
        raise BudgetError(size, budget)
    tower = algebra.tower
    ranges = []
    for l, d in algebra.shape(m):
        ranges.extend([range(1, tower.q ** l)] * d)
    shape = algebra.shape(m)
    for flat in itertools.product(*ranges):
        comps, pos = [], 0
        for l, d in shape:
            comps.append(tuple(flat[pos:pos + d]))
            pos += d
        yield TensorElement(algebra, m, tuple(comps))


def unit_log_arrays(algebra, m, budget=ENUM_BUDGET):
    """All units as one flat int array of discrete logs per coordinate (column-major order
    matches itertools.product order of units())."""
    size = algebra.unit_count(m)
    if size > budget:
        raise BudgetError(size, budget)
    tower = algebra.tower
    sizes = []
    for l, d in algebra.shape(m):
        sizes.extend([tower.q ** l - 1] * d)
    grids = np.indices(sizes, dtype=np.int64).reshape(len(sizes), -1)
    return grids


def frobenius_twist(z, j=1):
    """Action of Frob^j (x) 1 on F_k (x) F_m in coordinates."""
    tower = z.algebra.tower
    out = []
    for (l, d), c in zip(z.algebra.shape(z.m), z.comps):
        L = tower.level(l)
        out.append(tuple(L.frob(v, j) for v in c))
    return TensorElement(z.algebra, z.m, tuple(out))


def relative_norm(z, a):
    """Norm from F_lam (x) F_{am} down to F_lam (x) F_a, with z.m = a*m."""
    M = z.m
    if M % a:
        raise FieldError(f"{a} does not divide {M}")
    tower, q = z.algebra.tower, z.algebra.tower.q
    target = []
    for k, (l, d), c in zip(z.algebra.parts, z.algebra.shape(M), z.comps):
        l2, d2 = lcm(k, a), gcd(k, a)
        N2 = q ** l2 - 1
        if any(v == 0 for v in c):
            target.append((0,) * d2)
            continue
        acc = [0] * d2
        for i, v in enumerate(c):
            j = i % d2
            s = _crt_shift(k, a, j - i, l2)
            e = (v - 1) % N2
            acc[j] = (acc[j] + e * pow(q, (-s) % l2, N2)) % N2
        target.append(tuple(1 + e for e in acc))
    return TensorElement(EtaleAlgebra(tower, z.algebra.parts), a, tuple(target))


def _crt_shift(k, a, r, l2):
    """s mod l2 with s = 0 mod k and s = r mod a."""
    for s in range(0, l2, k):
        if (s - r) % a == 0:
            return s
    raise FieldError("no Frobenius shift")
