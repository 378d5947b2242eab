import math

import numpy as np
import pytest

from banachlab.catalog import PLANAR_CATALOG, parse_catalog
from banachlab.normcore import (
    DimensionError,
    DomainError,
    Functional,
    NormedSpace,
    as_vec,
    dual_norm,
    dual_space,
    equivalence_constants,
    norming_functional,
    quotient_space,
    smoothness_gap,
    subdifferential,
)

ALL = PLANAR_CATALOG + ("lp(3,1)", "lp(3,2)", "lp(4,inf)", "ex62(5)", "ex63(4)", "ex64(4)", "ex65(4)")


@pytest.mark.parametrize("spec", ALL)
def test_triangle_inequality_on_random_pairs(spec, rng):
    X = parse_catalog(spec)
    U = rng.standard_normal((1000, X.dim))
    V = rng.standard_normal((1000, X.dim))
    nu, nv, nw = X.norms(U), X.norms(V), X.norms(U + V)
    assert np.all(nw <= nu + nv + 1e-12 * (nu + nv))


@pytest.mark.parametrize("spec", ALL)
def test_homogeneity_and_symmetry(spec, rng):
    X = parse_catalog(spec)
    U = rng.standard_normal((200, X.dim))
    n = X.norms(U)
    assert np.allclose(X.norms(-U), n, rtol=1e-13, atol=0)
    assert np.allclose(X.norms(2.5 * U), 2.5 * n, rtol=1e-12, atol=0)
    assert X.norm(np.zeros(X.dim)) == 0.0


def test_as_vec_rejects_bad_input():
    with pytest.raises(DomainError):
        as_vec([1.0, float("nan")])
    with pytest.raises(DimensionError):
        as_vec([1.0, 2.0], 3)


def test_dimension_mismatch(euclid):
    with pytest.raises(DimensionError):
        euclid.norm([1.0, 2.0, 3.0])
    with pytest.raises(DimensionError):
        NormedSpace(dim=0, evaluator=lambda V: V)


def test_functional_pairing():
    f = Functional([1.0, -2.0])
    assert f([3.0, 1.0]) == 1.0
    assert f.tolist() == [1.0, -2.0]


@pytest.mark.parametrize("p,q", [(1.0, math.inf), (2.0, 2.0), (math.inf, 1.0), (3.0, 1.5)])
def test_dual_norm_matches_conjugate_exponent(p, q):
    X = parse_catalog(f"lp(2,{p})")
    f = np.array([0.7, -1.3])
    exact = float(np.linalg.norm(f, q))
    est = dual_norm(X, f)
    assert est.lo - 1e-12 <= exact <= est.hi + 1e-12


def test_dual_norm_planar_ring_encloses(ex61, fig5):
    for X in (ex61, fig5):
        est = dual_norm(X, [0.3, 0.4], 4096)
        # direct check against a fine sweep of the sphere
        th = np.linspace(0, 2 * np.pi, 200001)
        P = np.stack([np.cos(th), np.sin(th)], -1)
        best = float(np.max(P @ np.array([0.3, 0.4]) / X.norms(P)))
        assert est.lo - 1e-9 <= best <= est.hi + 1e-9
        assert est.certified


@pytest.mark.parametrize("spec", PLANAR_CATALOG + ("lp(3,2)", "ex62(4)", "ex65(3)"))
def test_norming_functional_pairs_consistently(spec, rng):
    X = parse_catalog(spec)
    for x in rng.standard_normal((10, X.dim)):
        f = norming_functional(X, x)
        nx = X.norm(x)
        assert f(x) == pytest.approx(nx, rel=1e-6)
        assert f(x) <= dual_norm(X, f.coords).hi * nx + 1e-9


def test_norming_functional_rejects_zero(euclid):
    with pytest.raises(DomainError):
        norming_functional(euclid, [0.0, 0.0])


def test_subdifferential_at_corner(l1, linf):
    sd = subdifferential(linf, [1.0, 1.0])
    coords = sorted(tuple(np.round(f.coords, 9)) for f in sd)
    assert coords == [(0.0, 1.0), (1.0, 0.0)]
    assert len(subdifferential(l1, [1.0, 0.0])) == 2
    with pytest.raises(DomainError):
        subdifferential(l1, [2.0, 0.0])


def test_smoothness_gap(euclid, linf):
    assert smoothness_gap(euclid, [1.0, 0.0], [0.0, 1.0]) == pytest.approx(0.0, abs=1e-4)
    assert smoothness_gap(linf, [1.0, 1.0], [1.0, -1.0]) == pytest.approx(2.0, abs=1e-6)
    assert smoothness_gap(linf, [1.0, 1.0], [1.0, 1.0]) == 0.0


def test_smoothness_gap_nonnegative(planar_spaces, rng):
    for X in planar_spaces.values():
        for _ in range(20):
            x, y = rng.standard_normal((2, 2))
            x, y = x / X.norm(x), y / X.norm(y)
            assert smoothness_gap(X, x, y) >= 0.0


@pytest.mark.parametrize("spec", ["lp(2,1)", "lp(2,inf)", "lp(3,2)"])
def test_equivalence_constants(spec):
    X = parse_catalog(spec)
    c, C = equivalence_constants(X)
    th = np.random.default_rng(0).standard_normal((5000, X.dim))
    r = X.norms(th) / np.linalg.norm(th, axis=1)
    assert c <= r.min() + 1e-12 and r.max() <= C + 1e-12


@pytest.mark.parametrize("spec", PLANAR_CATALOG)
def test_bidual_agrees(spec, rng):
    X = parse_catalog(spec)
    B = dual_space(dual_space(X))
    V = rng.standard_normal((100, 2))
    assert np.max(np.abs(B.norms(V) / X.norms(V) - 1.0)) < 2e-3


def test_dual_of_l1_is_linf():
    X = parse_catalog("lp(3,1)")
    D = dual_space(X)
    assert D.norm([1.0, -2.0, 0.5]) == 2.0


def test_quotient_by_axis_is_coordinate_norm(rng):
    X = parse_catalog("lp(3,1)")
    Q = quotient_space(X, [[0.0, 0.0, 1.0]])
    W = Q.meta["complement"]
    for v in rng.standard_normal((10, 2)):
        x = W @ v
        assert Q.norm(v) == pytest.approx(abs(x[0]) + abs(x[1]), abs=1e-9)


def test_quotient_norm_bounds(rng):
    X = parse_catalog("ex64(3)")
    Q = quotient_space(X, [[0.2, -0.4, 1.0]])
    W = Q.meta["complement"]
    V = rng.standard_normal((30, 2))
    nq = Q.norms(V)
    assert np.all(nq <= X.norms(V @ W.T) + 1e-12)
    A, B = V[:15], V[15:]
    assert np.all(Q.norms(A + B) <= Q.norms(A) + Q.norms(B) + 1e-9)


def test_quotient_errors(euclid):
    X = parse_catalog("lp(3,2)")
    with pytest.raises(DomainError):
        quotient_space(X, [[1.0, 0, 0], [2.0, 0, 0]])
    with pytest.raises(DomainError):
        quotient_space(X, [[1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0]])
