import numpy as np
import pytest

from artifact.chars import (MultChar, all_chars, char_degree, descend, eval_add, frobenius_orbit,
                            gauss_sum, gauss_sum_direct, inflate, is_regular, orbit_rep,
                            parse_char)
from artifact.fields import FieldError, norm
from artifact.glq import tower_for

import oracles


@pytest.mark.parametrize("q,m", [(2, 2), (3, 2), (4, 1), (5, 1)])
def test_orthogonality(q, m):
    tower = tower_for(q)
    V = np.array([chi.values() for chi in all_chars(tower, m)])
    N = q ** m - 1
    assert np.allclose(V @ V.conj().T, N * np.eye(N))


def test_evaluation_multiplicative():
    tower = tower_for(3)
    chi = MultChar(tower, 2, 3)
    x, y = tower.from_log(2, 2), tower.from_log(2, 7)
    assert chi(x * y) == pytest.approx(chi(x) * chi(y))
    with pytest.raises(ZeroDivisionError):
        chi(tower.zero(2))
    with pytest.raises(FieldError):
        chi(tower.from_log(1, 1))


def test_degree_and_orbits():
    tower = tower_for(2)
    assert char_degree(MultChar(tower, 4, 5)) == 2
    assert is_regular(MultChar(tower, 4, 1))
    assert not is_regular(MultChar(tower, 4, 0))
    assert {c.index for c in frobenius_orbit(MultChar(tower, 3, 1))} == {1, 2, 4}
    assert orbit_rep(6, 2, 3) == 3


def test_inflate_is_composition_with_norm():
    tower = tower_for(3)
    chi = MultChar(tower, 1, 1)
    big = inflate(chi, 2)
    for t in range(8):
        x = tower.from_log(2, t)
        assert big(x) == pytest.approx(chi(norm(x, 1)))
    assert descend(big, 1) == chi
    with pytest.raises(FieldError):
        descend(MultChar(tower, 2, 1), 1)


def test_parse_char():
    tower = tower_for(2)
    assert parse_char(tower, "2:1") == MultChar(tower, 2, 1)
    with pytest.raises(FieldError):
        parse_char(tower, "2-1")


@pytest.mark.parametrize("q,m", [(2, 1), (2, 2), (3, 1), (3, 2), (4, 1)])
def test_gauss_sum_matches_naive_field(q, m):
    # the package normalizes tau(chi) = -sum chi(x) psi(x)
    tower = tower_for(q)
    F = oracles.naive_field(tower, m)
    for chi in all_chars(tower, m):
        ref = -oracles.gauss_sum(F, chi.index)
        assert gauss_sum(chi) == pytest.approx(ref, abs=1e-9)
        assert gauss_sum_direct(chi) == pytest.approx(ref, abs=1e-9)


def test_gauss_sum_values():
    tower = tower_for(3)
    assert gauss_sum(MultChar(tower, 1, 0)) == pytest.approx(1)
    # quadratic Gauss sum over F_3 with the sign convention above
    assert gauss_sum(MultChar(tower, 1, 1)) == pytest.approx(-1j * np.sqrt(3))


def test_additive_character():
    tower = tower_for(3)
    assert eval_add(tower.zero(2)) == pytest.approx(1)
    total = sum(eval_add(x) for x in tower.elements(2))
    assert abs(total) < 1e-9
