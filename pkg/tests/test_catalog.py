import math

import numpy as np
import pytest

from banachlab.catalog import (
    PLANAR_CATALOG,
    build_absolute,
    build_arc2d,
    build_example_62,
    build_example_63,
    build_lp,
    catalog_entries,
    parse_catalog,
)
from banachlab.normcore import DomainError


def test_lp_values():
    assert build_lp(2, 1).norm([3.0, -4.0]) == 7.0
    assert build_lp(2, 2).norm([3.0, -4.0]) == 5.0
    assert build_lp(2, math.inf).norm([3.0, -4.0]) == 4.0
    with pytest.raises(DomainError):
        build_lp(2, 0.5)


def test_parse_catalog_round_trip():
    for s in PLANAR_CATALOG:
        X = parse_catalog("catalog:" + s)
        assert X.dim == 2
        assert X.meta["spec"] == s
    with pytest.raises(DomainError):
        parse_catalog("catalog:nothing(1)")
    with pytest.raises(DomainError):
        parse_catalog("lp(2)")
    assert len(catalog_entries()) >= 7


def test_example_62_functional_is_exact():
    for n in (1, 2, 5, 17):
        X = build_example_62(2 * n)
        beta = 2.0 / math.sqrt(4 * n * n + 2 * n)
        x = np.zeros(2 * n)
        x[0::2] = beta
        y = np.roll(x, 1)
        f = np.zeros(2 * n)
        f[0::2] = 1.0
        assert float(f @ y) == 0.0
        assert float(f @ x) == pytest.approx(2 * n / math.sqrt(4 * n * n + 2 * n), abs=1e-12)
        assert X.norm(x + y) == pytest.approx(2.0, abs=1e-12)


def test_example_63_weights_validated():
    with pytest.raises(DomainError):
        build_example_63(3, [1.0, 0.5, 0.7])
    with pytest.raises(DomainError):
        build_example_63(3, [0.9, 0.5, 0.2])


def test_arc2d_presets_are_reproducible(rng):
    V = rng.standard_normal((500, 2))
    for name in ("ex61", "fig5"):
        a, b = build_arc2d(name).norms(V), build_arc2d(name).norms(V)
        assert np.array_equal(a, b)


def test_ex61_shape(ex61):
    # flat top from (-1.5, 1.5) to (1.5, 1.5), intercepts at +-3
    assert ex61.norm([0.0, 1.5]) == pytest.approx(1.0, abs=1e-12)
    assert ex61.norm([1.5, 1.5]) == pytest.approx(1.0, abs=1e-12)
    assert ex61.norm([3.0, 0.0]) == pytest.approx(1.0, abs=1e-12)


def test_fig5_shape(fig5):
    assert fig5.norm([2.0, 0.0]) == pytest.approx(1.0, abs=1e-12)


def test_absolute_norm_certification():
    E = build_absolute("lp", 3, 2.0)
    assert E.certified
    assert E([3.0, 4.0, 0.0]) == 5.0
    bad = build_absolute("custom", 2, evaluator=lambda A: np.abs(A[..., 0]) + 2 * np.abs(A[..., 1]))
    assert not bad.certified
