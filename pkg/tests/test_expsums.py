import numpy as np
import pytest

from artifact.chars import MultChar, gauss_sum, inflate
from artifact.etale import BudgetError
from artifact.expsums import (CompositeChar, composite_char, composite_exotic_gauss, exotic_gauss,
                              exotic_gauss_product, kloosterman, kloosterman_log,
                              kloosterman_normalized, kloosterman_table, lpolynomial,
                              lpolynomial_residuals, parse_composite, sign)
from artifact.fields import FieldError
from artifact.glq import tower_for

import oracles


def test_sign():
    assert sign(1, 1, 1) == -1
    assert sign(2, 1, 2) == 1
    assert sign(2, 2, 1) == 1
    assert sign(3, 1, 2) == -1


@pytest.mark.parametrize("q,m", [(2, 2), (3, 2), (2, 3)])
def test_level_one_exotic_gauss_is_twisted_gauss(q, m):
    """tau_{1,m}(alpha, chi) = -sum alpha(N x) chi(x) psi(x), checked on the naive field."""
    tower = tower_for(q)
    F = oracles.naive_field(tower, m)
    for a in range(q - 1):
        for j in range(0, q ** m - 1, 2):
            ref = -oracles.twisted_gauss_level1(F, q, a, j)
            val = exotic_gauss(1, m, MultChar(tower, 1, a), MultChar(tower, m, j))
            assert val == pytest.approx(ref, abs=1e-9)


def test_level_one_factorizes():
    tower = tower_for(3)
    a, chi = MultChar(tower, 1, 1), MultChar(tower, 2, 3)
    assert exotic_gauss_product(1, 2, a, chi) == pytest.approx(gauss_sum(inflate(a, 2) * chi))


@pytest.mark.parametrize("q,k,m", [(2, 2, 2), (2, 2, 1), (3, 2, 2), (2, 3, 2)])
def test_direct_equals_product(q, k, m):
    tower = tower_for(q)
    for a in range(0, q ** k - 1, 2):
        for j in range(q ** m - 1):
            alpha, chi = MultChar(tower, k, a), MultChar(tower, m, j)
            assert exotic_gauss(k, m, alpha, chi) == pytest.approx(
                exotic_gauss_product(k, m, alpha, chi), abs=1e-8)


def test_composite_paths_agree():
    tower = tower_for(2)
    alpha = composite_char(tower, (2, 1), (1, 0))
    for j in range(3):
        chi = MultChar(tower, 2, j)
        assert composite_exotic_gauss(alpha, 2, chi, "direct") == pytest.approx(
            composite_exotic_gauss(alpha, 2, chi), abs=1e-9)


def test_level_mismatch():
    tower = tower_for(2)
    with pytest.raises(FieldError):
        exotic_gauss(2, 2, MultChar(tower, 1, 0), MultChar(tower, 2, 0))
    with pytest.raises(FieldError):
        composite_exotic_gauss(composite_char(tower, (2,), (1,)), 2, MultChar(tower, 1, 0))


def test_composite_parsing():
    tower = tower_for(3)
    a = parse_composite(tower, "2+1", "2:3,1:1")
    assert a.parts == (2, 1) and a.indices == (3, 1) and a.k == 3 and a.s == 2
    assert a.inverse().indices == (5, 1)
    assert parse_composite(tower, "1+1", "").indices == (0, 0)
    with pytest.raises(FieldError):
        parse_composite(tower, "2+1", "1:1,1:1")
    with pytest.raises(FieldError):
        CompositeChar((2,), (MultChar(tower, 1, 0),))


@pytest.mark.parametrize("q,M", [(2, 2), (3, 1), (3, 2)])
def test_classical_kloosterman(q, M):
    tower = tower_for(q)
    F = oracles.naive_field(tower, M)
    alpha = composite_char(tower, (1, 1), (0, 0))
    for t in range(q ** M - 1):
        assert kloosterman_log(alpha, M, t) == pytest.approx(oracles.classical_kloosterman(F, t), abs=1e-9)


def test_norm_one_kloosterman():
    tower = tower_for(3)
    F = oracles.naive_field(tower, 2)
    for j in range(8):
        alpha = composite_char(tower, (2,), (j,))
        for t in range(2):
            assert kloosterman_log(alpha, 1, t) == pytest.approx(
                oracles.norm_one_kloosterman(F, 3, j, t), abs=1e-9)


def test_kloosterman_value_frozen():
    # classical Kl over F_3 at xi = 1: psi(2) + psi(1) = -1
    tower = tower_for(3)
    alpha = composite_char(tower, (1, 1), (0, 0))
    assert kloosterman_log(alpha, 1, 0) == pytest.approx(-1)
    assert kloosterman(alpha, 1, 1, tower.one(1)) == pytest.approx(-1)
    assert kloosterman_normalized(alpha, 1, 1, tower.one(1)) == pytest.approx(-1 / np.sqrt(3))


def test_kloosterman_paths():
    tower = tower_for(2)
    alpha = composite_char(tower, (3,), (1,))
    brute = kloosterman_table(alpha, 2, "brute")
    fourier = kloosterman_table(alpha, 2, "fourier")
    assert np.allclose(brute, fourier, atol=1e-9)
    for t in range(3):
        assert kloosterman_log(alpha, 2, t, path="fiber") == pytest.approx(brute[t], abs=1e-9)


def test_kloosterman_argument_checks():
    tower = tower_for(2)
    alpha = composite_char(tower, (2,), (1,))
    with pytest.raises(FieldError):
        kloosterman(alpha, 1, 1, tower.zero(1))
    with pytest.raises(FieldError):
        kloosterman(alpha, 1, 1, tower.one(2))
    with pytest.raises(BudgetError):
        kloosterman_log(composite_char(tower, (2, 1), (1, 0)), 2, 0, path="brute", budget=2)
    # the Fourier route needs no enumeration, so auto falls back to it
    assert kloosterman_log(composite_char(tower, (2, 1), (1, 0)), 2, 0, budget=2) == pytest.approx(
        kloosterman_log(composite_char(tower, (2, 1), (1, 0)), 2, 0, path="fourier"))


def test_classical_lpolynomial():
    # L*(T) = 1 + Kl* T + T^2 for the classical Kloosterman sum
    tower = tower_for(3)
    lp = lpolynomial(composite_char(tower, (1, 1), (0, 0)), 1, tower.one(1))
    assert lp.k == 2
    assert np.allclose(lp.coeffs, [1, -1 / np.sqrt(3), 1])
    assert lp(0) == pytest.approx(1)
    tail, mism, pur = lpolynomial_residuals(lp)
    assert tail < 1e-9 and mism < 1e-9 and pur < 1e-9


@pytest.mark.parametrize("lam,idx", [((2,), (1,)), ((3,), (1,)), ((2, 1), (1, 0))])
def test_lpolynomial_purity(lam, idx):
    tower = tower_for(2)
    alpha = composite_char(tower, lam, idx)
    for t in range(3):
        lp = lpolynomial(alpha, 2, tower.from_log(2, t))
        assert lp.k == sum(lam)
        tail, _, pur = lpolynomial_residuals(lp)
        assert tail < 1e-6 and pur < 1e-4


def test_budget_holds_after_caching(monkeypatch):
    tower = tower_for(2)
    alpha = composite_char(tower, (2, 1), (1, 0))
    kloosterman_log(alpha, 2, 0, path="brute")
    with pytest.raises(BudgetError):
        kloosterman_log(alpha, 2, 0, path="brute", budget=2)
    chi = MultChar(tower, 2, 1)
    composite_exotic_gauss(alpha, 2, chi, "direct")
    with pytest.raises(BudgetError):
        composite_exotic_gauss(alpha, 2, chi, "direct", budget=2)
    monkeypatch.setenv("ARTIFACT_BUDGET", "2")
    with pytest.raises(BudgetError) as exc:
        composite_exotic_gauss(alpha, 2, chi, "direct")
    assert exc.value.budget == 2
