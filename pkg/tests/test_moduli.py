import math

import numpy as np
import pytest

from banachlab import kernels
from banachlab.catalog import parse_catalog
from banachlab.moduli import (
    curve,
    delta_convexity,
    delta_uacs,
    delta_uacs_tilde,
    delta_uacsed,
    estimate,
    grid_oracle_2d,
    nonsquareness,
    read_csv,
    rho_smoothness,
    rho_uacs,
    rho_uacs_ball,
    to_csv,
    witnesses_json,
)
from banachlab.moduli.planar import WITNESS_TOL
from banachlab.normcore import DomainError, dual_norm

RES = 512


def hilbert_delta(eps):
    return 1.0 - math.sqrt(1.0 - eps * eps / 4.0)


@pytest.mark.parametrize("eps", [0.25, 1.0, 1.75])
def test_euclid_delta_x_closed_form(euclid, eps):
    assert delta_convexity(euclid, eps, RES).contains(hilbert_delta(eps), 1e-12)


@pytest.mark.parametrize("tau", [0.1, 1.0, 1.5])
def test_euclid_rho_closed_form(euclid, tau):
    assert rho_smoothness(euclid, tau, RES).contains(math.sqrt(1 + tau * tau) - 1, 1e-12)


def test_euclid_uacs_and_nonsquareness(euclid):
    # in a Hilbert space the functional constraint f(y) <= 1 - eps is |x - y|^2 >= 2 eps
    eps = 1.0
    assert delta_uacs(euclid, eps, RES).contains(1 - math.sqrt(1 - eps / 2), 1e-12)
    assert nonsquareness(euclid, RES).contains(math.sqrt(0.5), 1e-12)


@pytest.mark.parametrize("spec", ["lp(2,1)", "lp(2,inf)"])
@pytest.mark.parametrize("eps", [0.5, 1.0, 1.5])
def test_degenerate_uacs_witness(spec, eps):
    X = parse_catalog(spec)
    est = delta_uacs(X, eps, RES)
    assert est.hi < 1e-9
    w = est.witness
    assert abs(X.norm(w.x) - 1) < 1e-9 and abs(X.norm(w.y) - 1) < 1e-9
    assert float(w.f @ w.x) == pytest.approx(1.0, abs=1e-9)
    assert float(w.f @ w.y) <= 1 - eps + WITNESS_TOL
    assert dual_norm(X, w.f).hi <= 1 + 1e-9
    assert 1 - 0.5 * X.norm(w.x + w.y) == pytest.approx(est.hi, abs=1e-9)


@pytest.mark.parametrize("spec", ["lp(2,2)", "lp(2,1)", "arc2d(ex61)", "arc2d(fig5)"])
def test_enclosures_agree_with_grid_oracle(spec):
    X = parse_catalog(spec)
    for kind, arg in (("delta_X", 1.0), ("rho_X", 0.5), ("rho_uacs", 0.5), ("nonsquareness", None),
                      ("delta_uacs", 0.5)):
        est = estimate(X, kind, arg, RES)
        orc = grid_oracle_2d(X, kind, arg, 256)
        assert est.lo <= orc.hi + 1e-12 and orc.lo <= est.hi + 1e-12, (kind, est, orc)


def test_oracle_rejects_unhandled(euclid):
    with pytest.raises(DomainError):
        grid_oracle_2d(euclid, "delta_uacsed", 1.0)
    with pytest.raises(DomainError):
        grid_oracle_2d(parse_catalog("lp(3,2)"), "delta_X", 1.0)


def test_domain_errors(euclid):
    with pytest.raises(DomainError):
        delta_uacs(euclid, 0.0)
    with pytest.raises(DomainError):
        delta_uacs(euclid, 2.5)
    with pytest.raises(DomainError):
        rho_uacs(euclid, -1.0)
    with pytest.raises(DomainError):
        delta_convexity(euclid, 1.0, 16)
    with pytest.raises(DomainError):
        estimate(euclid, "delta_uacsed", 1.0)
    with pytest.raises(DomainError):
        delta_uacsed(euclid, [0.0, 0.0], 1.0)


def test_modulus_orderings(planar_spaces):
    for X in planar_spaces.values():
        for eps in (0.5, 1.0):
            assert delta_convexity(X, eps, RES).lo <= delta_uacs(X, eps, RES).hi + 1e-12
        for tau in (0.25, 1.0):
            ru = rho_uacs(X, tau, RES)
            assert ru.lo <= rho_smoothness(X, tau, RES).hi + 1e-12
            assert ru.lo <= rho_uacs_ball(X, tau, 256).hi + 1e-12


def test_uacsed_dominates_uacs(planar_spaces):
    for X in planar_spaces.values():
        for z in ([1.0, 0.0], [1.0, 1.0], [0.3, -1.0]):
            assert delta_uacsed(X, z, 1.0, RES).hi >= delta_uacs(X, 1.0, RES).lo - 1e-12


def test_witnesses_reevaluate(planar_spaces):
    for X in planar_spaces.values():
        for kind, arg in (("delta_X", 1.0), ("delta_uacs", 1.0), ("nonsquareness", None)):
            est = estimate(X, kind, arg, RES)
            x, y = est.witness.x, est.witness.y
            if kind == "nonsquareness":
                val = 0.5 * min(X.norm(x + y), X.norm(x - y))
                assert val == pytest.approx(est.lo, abs=1e-9)
            else:
                assert 1 - 0.5 * X.norm(x + y) == pytest.approx(est.hi, abs=1e-9)


def test_isometry_invariance():
    a = parse_catalog("lp(3,1)")
    from banachlab.normcore import NormedSpace

    perm = NormedSpace(dim=3, evaluator=lambda V: a.norms(V[..., [2, 0, 1]] * np.array([1, -1, 1])),
                       label="perm", equiv=a.equiv, meta={"spec": "perm"})
    for eps in (0.5, 1.0):
        e1 = delta_uacs(a, eps, 256)
        e2 = delta_uacs(perm, eps, 256)
        assert e1.lo <= e2.hi + 1e-9 and e2.lo <= e1.hi + 1e-9


def test_tilde_is_heuristic_but_ordered(euclid):
    t = delta_uacs_tilde(euclid, 1.0)
    d = delta_uacs(euclid, 1.0, RES)
    # tilde delta is a max with 1 - f(x) over a larger set of functionals
    assert t.lo <= t.hi <= d.hi + 1e-9


def test_curve_csv_round_trip(euclid):
    c = curve(euclid, "delta_X", [0.5, 1.0, 1.5], 256)
    text = to_csv(c)
    assert text.splitlines()[0] == "kind,arg,lo,hi,certified"
    rows = read_csv(text)
    assert [r[1] for r in rows] == [0.5, 1.0, 1.5]
    assert all(r[4] for r in rows)
    assert c.monotone_violations() == []
    assert '"witnesses"' in witnesses_json(c)


def test_higher_dimension_sections():
    X = parse_catalog("lp(3,2)")
    est = delta_convexity(X, 1.0, 256)
    assert est.contains(hilbert_delta(1.0), 1e-9)


def test_kernel_backends_identical(ex61):
    from banachlab.moduli import planar

    if kernels.BACKEND != "cython":
        pytest.skip("compiled kernels not built")
    out = {}
    for b in ("python", "cython"):
        kernels.use(b)
        est = planar.delta_uacs(ex61, 0.7, 256)
        r = planar.rho(ex61, 0.3, 256, True)
        out[b] = (est.lo, est.hi, tuple(est.witness.x), r.lo, r.hi)
    kernels.use("cython")
    assert out["python"] == out["cython"]
