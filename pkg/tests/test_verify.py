import json
import math

import pytest

from banachlab.catalog import parse_catalog
from banachlab.normcore import DomainError
from banachlab.verify import (
    INCONCLUSIVE,
    VERIFIED,
    VIOLATED,
    Interval,
    check_acs_characterizations,
    check_delta_rho,
    check_delta_tilde_rho,
    check_dual_inequalities,
    check_lipschitz_delta_uacs,
    check_quotient_acs,
    check_sum_theorems,
    check_superreflexivity_criterion,
    compare,
    harness_summary,
    involution_error,
    replay_example,
    run_inequalities,
    summarize_replays,
    vacuous,
)

EPS = (0.5, 1.0)
TAU = (0.1, 0.5)
RES = 512


def test_compare_rule():
    assert compare({}, Interval(1.0, 2.0), Interval(0.5, 1.0)).status == VERIFIED
    assert compare({}, Interval(0.1, 0.2), Interval(0.5, 1.0)).status == VIOLATED
    assert compare({}, Interval(0.4, 0.7), Interval(0.5, 0.6)).status == INCONCLUSIVE
    # rounding-level overlap still verifies
    assert compare({}, Interval(1.0 - 1e-13, 1.0), Interval(1.0, 1.0)).status == VERIFIED


def test_vacuous_points_are_labelled():
    p = vacuous({"eps": 1.0}, "rho is zero")
    assert p.status == INCONCLUSIVE and p.note.startswith("vacuous:")


@pytest.mark.parametrize("spec", ["lp(2,2)", "lp(2,1)", "arc2d(ex61)"])
def test_planar_inequalities_never_violated(spec):
    X = parse_catalog(spec)
    reports = [
        check_delta_rho(X, EPS, TAU, RES),
        check_delta_tilde_rho(X, EPS, RES),
        check_lipschitz_delta_uacs(X, (0.25, 0.5, 1.0), RES),
        *check_dual_inequalities(X, EPS, TAU, RES).values(),
        check_superreflexivity_criterion(X, TAU, RES),
    ]
    for r in reports:
        assert r.violated is False, r.inequality
        json.dumps(r.to_dict(), allow_nan=False)


def test_euclid_mostly_strong(euclid):
    s = harness_summary(run_inequalities(euclid, EPS, TAU, RES))
    assert s[VIOLATED] == 0
    assert s["strong_rate"] >= 0.8


def test_unknown_inequality(euclid):
    with pytest.raises(DomainError):
        run_inequalities(euclid, EPS, TAU, RES, which=("nope",))


def test_replay_62_equalities():
    reps = replay_example(62, 16)
    assert [r.n for r in reps] == list(range(1, 17))
    for r in reps:
        assert r.quantities["norm_x_plus_y"] == 2.0
        assert r.quantities["f_y"] == 0.0
        assert r.quantities["norm_x_sq"] == pytest.approx((2 * r.n + 2) / (2 * r.n + 1), abs=1e-12)
        assert r.quantities["f_x"] == pytest.approx(2 * r.n / math.sqrt(4 * r.n ** 2 + 2 * r.n), abs=1e-12)
    s = summarize_replays(reps)
    assert s["claims"]["f"]["ok"]
    assert s["claims"]["f"]["checked_at"] == [1, 2, 4, 8, 16]


@pytest.mark.parametrize("example", [63, 64, 65])
def test_replay_equalities_hold(example):
    s = summarize_replays(replay_example(example, 16))
    for name, c in s["claims"].items():
        if c["kind"] in ("equality", "float_check", "dual_norm_bound"):
            assert c["ok"], (example, name, c)
        if c["kind"] == "limit":
            assert c["monotone"], (example, name)


def test_replay_domain():
    with pytest.raises(DomainError):
        replay_example(66)
    with pytest.raises(DomainError):
        replay_example(62, 0)
    with pytest.raises(DomainError):
        replay_example(62, 10 ** 6)
    with pytest.raises(DomainError):
        summarize_replays([])


def test_quotients_of_l1():
    rep = check_quotient_acs(parse_catalog("lp(3,1)"), sample_count=3)
    assert rep.notes["dual_acs"] == "fails"
    assert rep.notes["quotient_failure_found"]
    assert rep.violated is False


def test_quotients_of_euclid():
    rep = check_quotient_acs(parse_catalog("lp(3,2)"), sample_count=4)
    assert rep.notes["dual_acs"] == "holds"
    assert all(p.status == VERIFIED for p in rep.points)


def test_quotient_needs_dimension(euclid):
    with pytest.raises(DomainError):
        check_quotient_acs(euclid)


def test_sum_theorem_points():
    rep = check_sum_theorems("sum(E=catalog:lp(2,2); catalog:lp(2,2), catalog:lp(2,inf))", (0.5, 1.0), 256)
    assert rep.counts()[VERIFIED] == 2
    with pytest.raises(DomainError):
        check_sum_theorems(parse_catalog("lp(2,2)"), (1.0,))


def test_acs_characterizations(ex61, fig5, l1):
    assert not check_acs_characterizations(ex61, resolution=RES).violated
    assert all(p.status == VERIFIED for p in check_acs_characterizations(ex61, resolution=RES).points)
    for X in (fig5, l1):
        pts = check_acs_characterizations(X, resolution=RES).points
        assert len(pts) == 1 and pts[0].status == VERIFIED


@pytest.mark.parametrize("spec", ["lp(2,2)", "lp(2,1)", "lp(2,inf)", "arc2d(ex61)", "arc2d(fig5)"])
def test_involution(spec):
    assert involution_error(parse_catalog(spec), 20)["max_rel_error"] < 2e-3
