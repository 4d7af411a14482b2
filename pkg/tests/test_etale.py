import pytest

from artifact.etale import (BudgetError, EtaleAlgebra, norm1, norm2, one, parse_partition,
                            pure_tensor, trace_prime, units)
from artifact.fields import trace
from artifact.glq import tower_for


def test_parse_partition():
    assert parse_partition("2+1") == (2, 1)
    assert parse_partition("3") == (3,)
    with pytest.raises(ValueError):
        parse_partition("2+0")


def test_shape_and_counts():
    A = EtaleAlgebra(tower_for(2), (2, 1))
    assert A.k == 3 and A.s == 2
    assert A.shape(2) == [(2, 2), (2, 1)]
    assert A.unit_count(2) == 3 ** 2 * 3
    assert sum(1 for _ in units(A, 2)) == 27
    with pytest.raises(BudgetError) as exc:
        list(units(A, 2, budget=10))
    assert exc.value.size == 27


@pytest.mark.parametrize("q,k,m", [(2, 2, 2), (2, 2, 3), (3, 2, 1), (3, 1, 2), (2, 3, 2)])
def test_pure_tensor_norms_and_trace(q, k, m):
    tower = tower_for(q)
    A = EtaleAlgebra(tower, (k,))
    Nk, Nm = q ** k - 1, q ** m - 1
    for a in range(0, Nk, max(1, Nk // 4)):
        for b in range(0, Nm, max(1, Nm // 4)):
            x, y = tower.from_log(k, a), tower.from_log(m, b)
            z = pure_tensor(A, m, [x], y)
            # N1(x (x) y) = x^m N(y), N2(x (x) y) = N(x) y^k, in compatible logs
            assert norm1(z)[0].dlog() == (a * m + b * (Nk // (q - 1))) % Nk
            assert norm2(z).dlog() == (a * (Nm // (q - 1)) + b * k) % Nm
            tr = trace(x, 1) * trace(y, 1)
            assert trace_prime(z) == tr.to_int() % q


def test_identity_element():
    A = EtaleAlgebra(tower_for(3), (2, 1))
    e = one(A, 2)
    assert e.is_unit()
    assert all(x.dlog() == 0 for x in norm1(e))
    assert norm2(e).dlog() == 0
