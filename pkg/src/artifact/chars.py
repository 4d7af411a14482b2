"""Multiplicative and additive characters of the tower levels, and Gauss sums."""

from dataclasses import dataclass, field

import numpy as np

from .fields import FieldElement, FieldError, divisors

TWO_PI_I = 2j * np.pi


def root_of_unity(r, n):
    return np.exp(TWO_PI_I * (r % n) / n)


def _cache(tower):
    c = getattr(tower, "_char_cache", None)
    if c is None:
        c = {}
        tower._char_cache = c
    return c


@dataclass(frozen=True)
class MultChar:
    tower: object = field(compare=False, repr=False)
    level: int
    index: int

    def __post_init__(self):
        N = self.tower.q ** self.level - 1
        object.__setattr__(self, "index", self.index % N)

    @property
    def N(self):
        return self.tower.q ** self.level - 1

    def __call__(self, x):
        return eval_mult(self, x)

    def __mul__(self, other):
        if other.level != self.level:
            raise FieldError("level mismatch")
        return MultChar(self.tower, self.level, self.index + other.index)

    def __pow__(self, e):
        return MultChar(self.tower, self.level, self.index * e)

    def inverse(self):
        return MultChar(self.tower, self.level, -self.index)

    def conj_frob(self, j=1):
        """chi^{q^j}."""
        return MultChar(self.tower, self.level, self.index * pow(self.tower.q, j, self.N))

    def value_at_log(self, t):
        return root_of_unity(self.index * t, self.N)

    def value_at_raw(self, raw):
        if raw == 0:
            raise ZeroDivisionError("multiplicative character at zero")
        return root_of_unity(self.index * (raw - 1), self.N)

    def values(self):
        """Values on g^t for t = 0..N-1."""
        N = self.N
        t = np.arange(N, dtype=np.int64)
        return np.exp(TWO_PI_I * ((self.index * t) % N) / N)


def mult_char(tower, m, j):
    tower.level(m)
    return MultChar(tower, m, j)


def all_chars(tower, m):
    N = tower.q ** m - 1
    return [MultChar(tower, m, j) for j in range(N)]


def eval_mult(chi, x):
    if not isinstance(x, FieldElement):
        raise FieldError("expected a FieldElement")
    if x.level != chi.level:
        raise FieldError("level mismatch")
    if x.value == 0:
        raise ZeroDivisionError("multiplicative character at zero")
    return chi.value_at_raw(x.value)


def char_degree(chi):
    q, m, N = chi.tower.q, chi.level, chi.N
    for d in divisors(m):
        if ((q ** d - 1) * chi.index) % N == 0:
            return d
    return m


def is_regular(chi):
    return char_degree(chi) == chi.level


def frobenius_orbit(chi):
    q, N = chi.tower.q, chi.N
    seen, j = [], chi.index
    while j not in seen:
        seen.append(j)
        j = (j * q) % N
    return {MultChar(chi.tower, chi.level, i) for i in seen}


def orbit_rep(j, q, m):
    """Smallest index in the Frobenius orbit of j at level m."""
    N = q ** m - 1
    best, cur = j % N, j % N
    for _ in range(m):
        cur = (cur * q) % N
        best = min(best, cur)
    return best


def inflate(chi, target):
    """chi composed with the norm from level target down to chi.level."""
    m = chi.level
    if target % m:
        raise FieldError(f"level {m} does not divide {target}")
    if target > chi.tower.max_deg:
        raise FieldError(f"level {target} above max_deg")
    q = chi.tower.q
    r = (q ** target - 1) // (q ** m - 1)
    return MultChar(chi.tower, target, chi.index * r)


def descend(chi, d):
    """The character chi' at level d with chi = chi' o N, if it exists."""
    m = chi.level
    q = chi.tower.q
    r = (q ** m - 1) // (q ** d - 1)
    if m % d or chi.index % r:
        raise FieldError("character does not factor through the norm")
    return MultChar(chi.tower, d, chi.index // r)


def psi_values(tower, m):
    """psi_m(x) for every raw value x, psi_m = psi o Tr down to F_p."""
    key = ("psi", m)
    c = _cache(tower)
    if key not in c:
        L = tower.level(m)
        c[key] = np.exp(TWO_PI_I * L.trp / tower.p)
    return c[key]


def eval_add(x):
    return complex(psi_values(x.tower, x.level)[x.value])


def gauss_sums(tower, m):
    """tau(chi_j, psi_m) for every index j at level m, one FFT over discrete logs."""
    key = ("gauss", m)
    c = _cache(tower)
    if key not in c:
        w = psi_values(tower, m)[1:]
        N = len(w)
        c[key] = -N * np.fft.ifft(w)
    return c[key]


def gauss_sum(chi):
    return complex(gauss_sums(chi.tower, chi.level)[chi.index])


def gauss_sum_direct(chi):
    """The defining sum, term by term; slow reference."""
    psi = psi_values(chi.tower, chi.level)
    return -complex(np.sum(chi.values() * psi[1:]))


def parse_char(tower, spec):
    """Parse 'm:j'."""
    try:
        m, j = spec.split(":")
        return mult_char(tower, int(m), int(j))
    except ValueError as exc:
        raise FieldError(f"bad character spec {spec!r}") from exc
