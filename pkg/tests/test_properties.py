from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact import mks, repth
from artifact.chars import MultChar, gauss_sum, inflate
from artifact.expsums import (composite_char, composite_exotic_gauss, lpolynomial,
                              lpolynomial_residuals)
from artifact.fields import embed, frobenius, norm, trace
from artifact.glq import (bmatmul, binv, class_representative, classify_batch, enumerate_classes,
                          group_batches, tower_for)
from artifact.symfunc import basis_convert, hall_inner_t, hl_p, hl_q, partitions, schur

SETTINGS = settings(max_examples=40, deadline=None)

fields = st.sampled_from([(2, 3), (3, 2), (4, 2), (5, 2), (7, 1), (2, 4)])


@st.composite
def elements(draw, n=2):
    q, m = draw(fields)
    tower = tower_for(q)
    N = q ** m - 1
    vals = [draw(st.integers(0, N)) for _ in range(n)]  # 0 is zero, 1+t is g^t
    return tower, m, [tower.element(m, v) for v in vals]


@SETTINGS
@given(elements(3))
def test_field_axioms(data):
    tower, m, (x, y, z) = data
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)
    assert x + y == y + x
    assert x - y + y == x
    assert frobenius(x + y) == frobenius(x) + frobenius(y)
    assert frobenius(x * y) == frobenius(x) * frobenius(y)
    assert frobenius(x, m) == x
    assert trace(x + y, 1) == trace(x, 1) + trace(y, 1)
    assert norm(x * y, 1) == norm(x, 1) * norm(y, 1)


@SETTINGS
@given(elements(2))
def test_norm_is_product_of_conjugates(data):
    tower, m, (x, _) = data
    acc = tower.one(m)
    for j in range(m):
        acc = acc * frobenius(x, j)
    assert acc == embed(norm(x, 1), m)


@SETTINGS
@given(elements(2), st.integers(0, 10 ** 6))
def test_characters_are_homomorphisms(data, j):
    tower, m, (x, y) = data
    if x.is_zero() or y.is_zero():
        return
    chi = MultChar(tower, m, j)
    assert chi(x * y) == pytest.approx(chi(x) * chi(y))
    small = MultChar(tower, 1, j)
    assert inflate(small, m)(x) == pytest.approx(small(norm(x, 1)))


@SETTINGS
@given(fields, st.integers(0, 10 ** 6), st.integers(1, 2))
def test_gauss_sum_identities(qm, j, b):
    q, m = qm
    m = min(m, 2)
    tower = tower_for(q)
    if b * m > tower.max_deg:
        return
    chi = MultChar(tower, m, j)
    g = gauss_sum(chi)
    minus_one = tower.element(m, tower.level(m).neg(1))
    if chi.index:
        assert abs(g) == pytest.approx(q ** (m / 2))
        assert g * gauss_sum(chi.inverse()) == pytest.approx(chi(minus_one) * q ** m)
    assert gauss_sum(inflate(chi, b * m)) == pytest.approx(g ** b)


@SETTINGS
@given(st.sampled_from([(2, (2, 1), 2), (2, (3,), 1), (3, (2,), 2), (3, (1, 1), 1), (4, (2,), 1)]),
       st.data())
def test_exotic_gauss_dual_path(case, data):
    q, lam, m = case
    tower = tower_for(q)
    idx = [data.draw(st.integers(0, q ** k - 2)) for k in lam]
    alpha = composite_char(tower, lam, idx)
    chi = MultChar(tower, m, data.draw(st.integers(0, q ** m - 2)))
    assert composite_exotic_gauss(alpha, m, chi, "direct") == pytest.approx(
        composite_exotic_gauss(alpha, m, chi), abs=1e-8)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([(2, (2,)), (2, (3,)), (3, (2,)), (2, (2, 1)), (3, (1, 1))]), st.data())
def test_lpolynomial_is_pure(case, data):
    q, lam = case
    tower = tower_for(q)
    alpha = composite_char(tower, lam, [data.draw(st.integers(0, q ** k - 2)) for k in lam])
    a = data.draw(st.integers(1, 2))
    xi = tower.from_log(a, data.draw(st.integers(0, q ** a - 2)))
    tail, mism, pur = lpolynomial_residuals(lpolynomial(alpha, a, xi))
    assert tail < 1e-6 and mism < 1e-6 and pur < 1e-4


@settings(max_examples=15, deadline=None)
@given(st.integers(2, 4), st.data())
def test_hall_littlewood_duality(d, data):
    t = Fraction(data.draw(st.integers(-5, 5)), data.draw(st.integers(7, 11)))
    P = partitions(d)
    lam, mu = data.draw(st.sampled_from(P)), data.draw(st.sampled_from(P))
    val = hall_inner_t(hl_p(lam, d, t), hl_q(mu, d, t), t)
    assert val == (1 if lam == mu else 0)
    s = schur(lam, d)
    assert basis_convert(basis_convert(s, "hl_p", t), "schur") == s


@SETTINGS
@given(st.sampled_from([(2, 3), (3, 2), (4, 2)]), st.data())
def test_classification_is_conjugation_invariant(qn, data):
    q, n = qn
    tower = tower_for(q)
    L = tower.level(1)
    G = np.concatenate(list(group_batches(tower, n, 1)))
    a = G[data.draw(st.integers(0, len(G) - 1))]
    g = G[data.draw(st.integers(0, len(G) - 1))]
    conj = bmatmul(L, bmatmul(L, g[None], a[None]), binv(L, g[None]))
    assert classify_batch(tower, 1, conj)[0] == classify_batch(tower, 1, a[None])[0]


@SETTINGS
@given(st.sampled_from([(2, 2), (3, 2), (2, 3)]), st.data())
def test_charmap_isometry_random(qn, data):
    q, n = qn
    k = len(enumerate_classes(q, n))
    vals = lambda: np.array([complex(data.draw(st.integers(-3, 3)), data.draw(st.integers(-3, 3)))
                             for _ in range(k)])
    f, g = repth.ClassFunction(q, n, vals()), repth.ClassFunction(q, n, vals())
    assert repth.lambda_inner(repth.charmap(f), repth.charmap(g)) == pytest.approx(f.inner(g), abs=1e-9)
    back = repth.charmap(f).to_class_function()
    assert np.allclose(back.values, f.values)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([(2, (2,), 2), (3, (2,), 2), (2, (2, 1), 2), (2, (1, 1), 3), (2, (3,), 2)]),
       st.data())
def test_mks_bounded_by_flag_count(case, data):
    q, lam, c = case
    tower = tower_for(q)
    alpha = composite_char(tower, lam, [data.draw(st.integers(0, q ** k - 2)) for k in lam])
    lab = data.draw(st.sampled_from(enumerate_classes(q, c)))
    v = mks.mks_normalized(mks.MKSQuery(alpha, lab), "hl")
    assert abs(v) <= mks.flag_bound(lab, alpha.k, q) + 1e-9


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([(2, (2,)), (2, (1, 1)), (3, (2,)), (2, (2, 1))]), st.data())
def test_mks_convolution_matches_hall_littlewood(case, data):
    q, lam = case
    tower = tower_for(q)
    alpha = composite_char(tower, lam, [data.draw(st.integers(0, q ** k - 2)) for k in lam])
    lab = data.draw(st.sampled_from(enumerate_classes(q, 2)))
    query = mks.MKSQuery(alpha, lab)
    assert mks.mks_normalized(query, "conv") == pytest.approx(mks.mks_normalized(query, "hl"), abs=1e-9)


@SETTINGS
@given(st.sampled_from([(2, 3), (3, 2), (2, 4)]), st.data())
def test_representative_round_trip(qn, data):
    q, n = qn
    lab = data.draw(st.sampled_from(enumerate_classes(q, n)))
    rep = class_representative(lab, q)
    assert classify_batch(rep.tower, 1, rep.raw[None])[0] == lab
