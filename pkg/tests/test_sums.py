import math

import numpy as np
import pytest

from banachlab.catalog import build_absolute, parse_catalog
from banachlab.moduli import delta_uacs
from banachlab.normcore import DimensionError, DomainError, dual_norm
from banachlab.sums import (
    build_sum,
    e_prime,
    lift_witness,
    min_component_uacs,
    parse_sum,
    sum_delta_uacs,
    u_plus_violation,
)

L2 = build_absolute("lp", 2, 2.0)
L1 = build_absolute("lp", 2, 1.0)


def test_sum_norm_value():
    S = parse_sum("sum(E=catalog:lp(2,2); catalog:lp(2,1), catalog:lp(2,inf))")
    # ||(1,2)||_1 = 3, ||(1,5)||_inf = 5
    assert S.norm([1, 2, 1, 5]) == pytest.approx(math.sqrt(34), abs=1e-12)
    S2 = parse_sum("sum(E=catalog:lp(2,2); catalog:lp(2,2), catalog:lp(2,2))")
    assert S2.norm([3, 4, 0, 1]) == pytest.approx(math.sqrt(26), abs=1e-12)


def test_euclid_sum_matches_l2_r4():
    S = parse_sum("sum(E=catalog:lp(2,2); catalog:lp(2,2), catalog:lp(2,2))")
    R4 = parse_catalog("lp(4,2)")
    rng = np.random.default_rng(3)
    V = rng.normal(size=(50, 4))
    assert np.allclose(S.norms(V), R4.norms(V), atol=1e-12)


def test_sum_accepts_only_lp_outer():
    with pytest.raises(DomainError):
        parse_sum("sum(E=catalog:arc2d(ex61); catalog:lp(2,2), catalog:lp(2,2))")
    with pytest.raises(DimensionError):
        parse_sum("sum(E=catalog:lp(3,2); catalog:lp(2,2), catalog:lp(2,2))")


def test_lifted_witness_from_linf_component():
    S = parse_sum("sum(E=catalog:lp(2,2); catalog:lp(2,2), catalog:lp(2,inf))")
    est = sum_delta_uacs(S, 1.0, 256)
    assert est.hi < 1e-12
    assert est.notes.get("lifted_from") == 1
    x, y = est.witness.x, est.witness.y
    assert S.norm(x) == pytest.approx(1.0, abs=1e-12)
    assert S.norm(y) == pytest.approx(1.0, abs=1e-12)
    assert 1 - 0.5 * S.norm(x + y) == pytest.approx(est.hi, abs=1e-12)
    assert np.all(x[:2] == 0)


def test_lift_witness_roundtrip():
    X = parse_catalog("lp(2,1)")
    S = build_sum([parse_catalog("lp(2,2)"), X], L2)
    est = delta_uacs(X, 0.5, 256)
    lifted = lift_witness(S, 1, est)
    assert lifted.hi == pytest.approx(est.hi, abs=1e-12)


def test_min_component_dominates_sum():
    comps = [parse_catalog("lp(2,2)"), parse_catalog("arc2d(ex61)")]
    S = build_sum(comps, L2)
    m = min_component_uacs(comps, 1.0, 256)
    s = sum_delta_uacs(S, 1.0, 256)
    # the sum can be no more convex than its worst component
    assert s.lo <= m.hi + 1e-12


@pytest.mark.parametrize("p,q", [(2.0, 2.0), (1.0, math.inf), (math.inf, 1.0), (3.0, 1.5)])
def test_e_prime_is_holder_dual(p, q):
    Ep = e_prime(build_absolute("lp", 2, p), 2048)
    Q = build_absolute("lp", 2, q)
    rng = np.random.default_rng(7)
    A = np.abs(rng.normal(size=(40, 2)))
    assert np.allclose(Ep.norms(A), Q.norms(A), rtol=2e-3)


def test_e_prime_is_dual_norm_on_orthant():
    Ep = e_prime(build_absolute("lp", 2, 3.0), 2048)
    E = build_absolute("lp", 2, 3.0).as_space()
    for a in ([1.0, 0.3], [0.2, 0.9], [1.0, 1.0]):
        d = dual_norm(E, np.array(a))
        assert d.lo - 2e-3 <= float(Ep.norms(np.array(a))) <= d.hi + 2e-3


def test_u_plus_l2_decreases():
    vals = [u_plus_violation(L2, d, 0.5).value for d in (0.1, 0.01, 0.001)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 0.1


def test_u_plus_l1_stays_large():
    r = u_plus_violation(L1, 0.01, 0.5)
    assert r.value >= 1.0
    assert not r.within_eps
    a, b, c = r.a, r.b, r.c
    assert float(L1.norms(a)) == pytest.approx(1, abs=1e-9) and float(L1.norms(b)) == pytest.approx(1, abs=1e-9)
    assert float(L1.norms(a + b)) >= 2 * (1 - 0.01) - 1e-12
    assert float(np.sum(np.abs(c) * np.abs(a - b))) == pytest.approx(r.value, abs=1e-12)


def test_u_plus_domain():
    with pytest.raises(DomainError):
        u_plus_violation(L2, 0.0, 0.5)
