import numpy as np
import pytest

from banachlab.catalog import parse_catalog
from banachlab.classify import (
    COLLAPSE,
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    check_acs_triple,
    check_lau_quadruple,
    classify,
    flat_segments_2d,
    lau_condition,
    recheck,
)
from banachlab.normcore import NormedSpace

TOL = 1e-4

MATRIX = {
    "lp(2,2)": {"rotund": HOLDS, "smooth": HOLDS, "acs": HOLDS},
    "lp(2,1)": {"rotund": FAILS, "smooth": FAILS, "acs": FAILS},
    "lp(2,inf)": {"rotund": FAILS, "smooth": FAILS, "acs": FAILS},
    "arc2d(ex61)": {"rotund": FAILS, "smooth": FAILS, "acs": HOLDS},
    "arc2d(fig5)": {"acs": FAILS, "lau_condition": HOLDS},
}


@pytest.fixture(scope="module")
def reports():
    return {spec: classify(parse_catalog(spec), TOL) for spec in MATRIX}


@pytest.mark.parametrize("spec", list(MATRIX))
def test_classifier_matrix(reports, spec):
    rep = reports[spec]
    for name, want in MATRIX[spec].items():
        assert rep.status(name) == want, (spec, name, rep.verdicts[name])


@pytest.mark.parametrize("spec", list(MATRIX))
def test_failure_witnesses_recheck(reports, spec):
    X = parse_catalog(spec)
    for v in reports[spec].verdicts.values():
        if v.status == FAILS:
            assert v.witness
            assert recheck(X, v, TOL), v.name


@pytest.mark.parametrize("spec", list(MATRIX))
def test_implication_lattice(reports, spec):
    rep = reports[spec]
    if HOLDS in (rep.status("rotund"), rep.status("smooth")):
        assert rep.status("acs") != FAILS
    if rep.status("acs") == FAILS:
        assert rep.status("rotund") != HOLDS and rep.status("smooth") != HOLDS


def test_collapse_follows_key_property(reports):
    d = reports["arc2d(ex61)"].to_dict()
    for key, names in COLLAPSE.items():
        for nm in names:
            assert d["finite_dimensional_collapse"][nm]["status"] == d["verdicts"][key]["status"]


def test_ex61_flats_are_smooth_at_ends():
    segs = flat_segments_2d(parse_catalog("arc2d(ex61)"))
    assert len(segs) == 2
    for s in segs:
        assert s["start_smooth"] and s["end_smooth"]


def test_fig5_has_a_corner_ended_flat():
    segs = flat_segments_2d(parse_catalog("arc2d(fig5)"))
    assert segs
    assert any(not (s["start_smooth"] and s["end_smooth"]) for s in segs)


def test_euclid_has_no_flats(euclid):
    assert flat_segments_2d(euclid) == []
    assert lau_condition(euclid).evidence.get("vacuous")


def test_bogus_witness_rejected(euclid):
    x = np.array([1.0, 0.0])
    assert not check_acs_triple(euclid, x, np.array([0.0, 1.0]), np.array([1.0, 0.0]), TOL)


def test_permutation_invariance():
    X = parse_catalog("arc2d(ex61)")
    swapped = NormedSpace(dim=2, evaluator=lambda V: X.norms(V[..., ::-1]), label="swapped",
                          equiv=X.equiv, meta={"spec": "swapped"})
    a, b = classify(X, TOL), classify(swapped, TOL)
    # without exact support cones the copy may drop to inconclusive, never to the opposite verdict
    for name in ("rotund", "smooth", "acs"):
        assert {a.status(name), b.status(name)} != {HOLDS, FAILS}
    ea, eb = a.verdicts["acs"].evidence, b.verdicts["acs"].evidence
    assert ea["delta_uacs_hi"] == pytest.approx(eb["delta_uacs_hi"], rel=1e-3)


def test_three_dimensional_l1():
    rep = classify(parse_catalog("lp(3,1)"), TOL, 256)
    assert rep.status("rotund") == FAILS
    assert rep.status("lau_condition") == INCONCLUSIVE


def test_report_dict_is_plain(reports):
    import json

    for rep in reports.values():
        json.dumps(rep.to_dict(), allow_nan=False)


def test_linf_segments_have_corner_ends(linf):
    segs = flat_segments_2d(linf)
    assert len(segs) == 4
    assert not any(s["start_smooth"] or s["end_smooth"] for s in segs)


def test_linf_lau_condition_fails_with_checked_witness(linf):
    # x=(1,-1), y=(1,1): f=(0,-1) norms x, g=(0,1) norms y, and f+g=0
    v = lau_condition(linf, TOL)
    assert v.status == FAILS
    assert recheck(linf, v, TOL)
    assert check_lau_quadruple(linf, [1, -1], [1, 1], [0, -1], [0, 1], TOL)
