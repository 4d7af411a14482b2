import numpy as np
import pytest

from artifact import mks, repth
from artifact.chars import MultChar
from artifact.etale import BudgetError
from artifact.expsums import composite_char, kloosterman_log
from artifact.fields import FieldError
from artifact.glq import class_representative, enumerate_classes, parse_class, tower_for

import oracles

# K(alpha, psi, h) on GL_2(F_2) for alpha = g_2^1 at level 2, from the naive matrix oracle
FROZEN_GL2_F2 = {"1:0:[1,1]": 12, "1:0:[2]": 4, "2:1:[1]": -4}


def _invariants(lab, q):
    M = class_representative(lab, q).to_ints()
    tr, det = (M[0][0] + M[1][1]) % q, (M[0][0] * M[1][1] - M[0][1] * M[1][0]) % q
    return (tr,), (det,), M[0][1] == M[1][0] == 0 and M[0][0] == M[1][1]


def test_frozen_values():
    tower = tower_for(2)
    alpha = composite_char(tower, (2,), (1,))
    for spec, val in FROZEN_GL2_F2.items():
        q = mks.MKSQuery(alpha, parse_class(spec, 2))
        assert mks.mks_hl(q) == pytest.approx(val, abs=1e-9)
        assert mks.mks_bruteforce(alpha, q.label) == pytest.approx(val, abs=1e-9)


@pytest.mark.parametrize("q,j", [(2, 1), (3, 1), (3, 2), (3, 4)])
def test_against_naive_matrix_sum(q, j):
    tower = tower_for(q)
    ref = oracles.mks_gl2_k2(oracles.naive_field(tower, 1), oracles.naive_field(tower, 2), q, j)
    alpha = composite_char(tower, (2,), (j,))
    brute = mks.mks_brute_function(MultChar(tower, 2, j), 2)
    conv = mks.mks_convolve_function(alpha, 2)
    for lab in enumerate_classes(q, 2):
        r = ref[_invariants(lab, q)]
        assert brute(lab) == pytest.approx(r, abs=1e-9)
        assert conv(lab) == pytest.approx(r, abs=1e-9)
        assert mks.mks_hl(mks.MKSQuery(alpha, lab)) == pytest.approx(r, abs=1e-9)


@pytest.mark.parametrize("q,k", [(2, 2), (2, 3), (3, 2)])
def test_rank_one_is_kloosterman(q, k):
    tower = tower_for(q)
    for j in range(0, q ** k - 1, 3):
        alpha = composite_char(tower, (k,), (j,))
        for t in range(q - 1):
            lab = parse_class(f"1:{t}:[1]", q)
            kl = kloosterman_log(alpha, 1, t)
            assert mks.mks_bruteforce(alpha, lab) == pytest.approx(kl, abs=1e-9)
            assert mks.mks_hl(mks.MKSQuery(alpha, lab)) == pytest.approx(kl, abs=1e-9)


def test_paths_agree_composite():
    tower = tower_for(2)
    alpha = composite_char(tower, (2, 1), (1, 0))
    for lab in enumerate_classes(2, 2):
        query = mks.MKSQuery(alpha, lab)
        assert query.q == 2 and query.c == 2 and query.k == 3
        assert mks.mks_normalized(query, "conv") == pytest.approx(
            mks.mks_normalized(query, "hl"), abs=1e-9)
    with pytest.raises(FieldError):
        mks.mks_bruteforce(alpha, enumerate_classes(2, 2)[0])


def test_budget_is_enforced():
    alpha = MultChar(tower_for(2), 3, 1)
    with pytest.raises(BudgetError) as exc:
        mks.mks_bruteforce(alpha, parse_class("1:0:[1,1,1]", 2), budget=1000)
    assert exc.value.size == 115379712


def test_bessel_speh_explicit_formula():
    tower = tower_for(2)
    alpha = MultChar(tower, 2, 1)
    B = repth.bessel_speh_function(alpha, 2)
    assert np.allclose(B.values, [0.75, 0.25, -0.25])
    for lab in enumerate_classes(2, 2):
        assert 2 ** 2 * B(lab) == pytest.approx(mks.bessel_speh_hl(alpha, lab), abs=1e-9)


def test_bessel_kloosterman_bridge():
    tower = tower_for(3)
    alpha = composite_char(tower, (2,), (1,))
    B, R = mks.bessel_kloosterman(alpha, 2)
    assert np.allclose(B, R, atol=1e-9)


def test_flag_bounds():
    tower = tower_for(2)
    alpha = composite_char(tower, (2, 1), (1, 0))
    for lab in enumerate_classes(2, 3):
        v = abs(mks.mks_normalized(mks.MKSQuery(alpha, lab), "hl"))
        assert v <= mks.flag_bound(lab, 3, 2) + 1e-9
    reg = parse_class("1:0:[1];2:1:[1]", 2)
    assert mks.flag_bound(reg, 3, 2) == mks.regular_bound(reg, 3) == 9


def test_regular_classes_use_cycle_formula():
    tower = tower_for(3)
    alpha = composite_char(tower, (2,), (1,))
    for lab in enumerate_classes(3, 2):
        if all(len(mu) == 1 for _, mu in lab.blocks):
            assert mks.cycle_kstar(alpha, lab) == pytest.approx(
                mks.mks_normalized(mks.MKSQuery(alpha, lab)), abs=1e-9)


def test_reduction_to_lower_level():
    tower = tower_for(2)
    r = mks.mks_reduce_nonregular(MultChar(tower, 2, 0), 1, 2)
    assert np.max(r["abs_err"]) < 1e-9


def test_global_truncation():
    tower = tower_for(2)
    alpha = composite_char(tower, (2,), (1,))
    for n in (1, 2):
        r = mks.global_truncation(alpha, n)
        assert np.allclose(r["charmap"], r["geometric"], atol=1e-9)
        assert np.allclose(r["charmap"], r["character"], atol=1e-9)


def test_multiplicativity():
    tower = tower_for(3)
    alpha = composite_char(tower, (2,), (1,))
    for l1, l2, avg, block, rhs in mks.mks_multiplicativity(alpha, 1, 1):
        assert avg == pytest.approx(rhs, abs=1e-8)
        if not set(l1.orbits()) & set(l2.orbits()):
            assert block == pytest.approx(rhs, abs=1e-8)


def test_whittaker_and_series():
    tower = tower_for(2)
    alpha = composite_char(tower, (2,), (1,))
    for _, w, f in mks.whittaker_check(alpha, 2):
        assert w == pytest.approx(f, abs=1e-9)
    g = mks.generating_series(alpha, 0, order=3)
    assert np.allclose(g["inverse"], g["bessel_speh"], atol=1e-9)
