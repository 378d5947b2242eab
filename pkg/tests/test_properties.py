import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from banachlab.catalog import parse_catalog
from banachlab.moduli import (
    delta_convexity,
    delta_uacs,
    grid_oracle_2d,
    rho_smoothness,
    rho_uacs,
)
from banachlab.normcore import dual_norm, norming_functional
from banachlab.verify import check_delta_rho, check_delta_tilde_rho, check_dual_inequalities

SPECS = ["lp(2,2)", "lp(2,1)", "lp(2,inf)", "lp(2,3)", "arc2d(ex61)", "arc2d(fig5)"]
SPACES = {s: parse_catalog(s) for s in SPECS}
RES = 256

space_st = st.sampled_from(SPECS).map(SPACES.get)
coord = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
vec = st.tuples(coord, coord).map(np.array)
eps_st = st.floats(0.05, 1.95)
tau_st = st.floats(0.01, 2.0)


@given(space_st, vec, vec)
def test_triangle_inequality(X, u, v):
    assert X.norm(u + v) <= X.norm(u) + X.norm(v) + 1e-12 * (1 + X.norm(u) + X.norm(v))


@given(space_st, vec, st.floats(-5, 5))
def test_absolute_homogeneity(X, u, c):
    assert X.norm(c * u) == pytest.approx(abs(c) * X.norm(u), rel=1e-12, abs=1e-12)


@given(space_st, eps_st, eps_st)
@settings(max_examples=15)
def test_delta_monotone_in_eps(X, a, b):
    a, b = sorted((a, b))
    for fn in (delta_convexity, delta_uacs):
        assert fn(X, a, RES).lo <= fn(X, b, RES).hi + 1e-12


@given(space_st, tau_st)
@settings(max_examples=15)
def test_rho_at_most_tau(X, tau):
    # rho(tau) <= tau by the triangle inequality, and rho >= 0
    for fn in (rho_smoothness, rho_uacs):
        est = fn(X, tau, RES)
        assert est.lo <= tau + 1e-12
        assert est.hi >= -1e-12


@given(space_st, eps_st)
@settings(max_examples=15)
def test_enclosure_meets_oracle(X, eps):
    est = delta_convexity(X, eps, RES)
    orc = grid_oracle_2d(X, "delta_X", eps, 128)
    assert est.lo <= orc.hi + 1e-12 and orc.lo <= est.hi + 1e-12


@given(space_st, eps_st)
@settings(max_examples=15)
def test_witness_side(X, eps):
    est = delta_convexity(X, eps, RES)
    x, y = est.witness.x, est.witness.y
    assert X.norm(x - y) >= eps - 1e-9
    assert 1 - 0.5 * X.norm(x + y) <= est.hi + 1e-9


@given(space_st, vec)
def test_norming_functional_pairs(X, u):
    if np.linalg.norm(u) < 1e-6:
        return
    f = norming_functional(X, u)
    assert f(u) == pytest.approx(X.norm(u), rel=1e-9)
    d = dual_norm(X, f.coords)
    assert d.lo - 1e-9 <= 1.0 <= d.hi + 1e-9


@given(space_st, vec, vec)
@settings(max_examples=20)
def test_dual_norm_pairing(X, f, u):
    if np.linalg.norm(u) < 1e-6:
        return
    # |f(u)| <= ||f||* ||u||
    assert abs(float(f @ u)) <= dual_norm(X, f).hi * X.norm(u) * (1 + 1e-9) + 1e-12


@given(space_st, eps_st, st.floats(0.01, 0.5))
@settings(max_examples=10)
def test_harness_inequalities_at_random_args(X, eps, tau):
    for rep in (check_delta_rho(X, [eps], [tau], RES), check_delta_tilde_rho(X, [eps], RES),
                *check_dual_inequalities(X, [eps], [tau], RES).values()):
        assert not rep.violated, rep.to_dict()
