import math

import pytest

import moebius_geom as mg


def test_group_and_gauge():
    h = mg.Heisenberg(2)
    x = h.encode([1 + 0j], 0.0)
    y = h.encode([1j], 0.0)
    xy = h.mul(x, y)
    assert xy == pytest.approx([1.0, 1.0, 0.5])
    assert h.mul(xy, h.inverse(xy)) == pytest.approx([0.0, 0.0, 0.0])
    assert h.gauge(h.encode([0j], 0.25)) == pytest.approx(1.0)


def test_fiber_distance():
    h = mg.Heisenberg(2)
    a = h.encode([0.3 - 0.2j], 1.0)
    b = h.encode([0.3 - 0.2j], 3.25)
    assert h.dist(a, b) == pytest.approx(2 * math.sqrt(2.25), rel=1e-14)


def test_infinity_and_inversion():
    h = mg.Heisenberg(2)
    assert h.koranyi_inversion(None) == [0.0, 0.0, 0.0]
    assert h.koranyi_inversion([0.0, 0.0, 0.0]) is None
    x = h.encode([0.4 + 0.1j], -0.7)
    assert h.koranyi_inversion(h.koranyi_inversion(x)) == pytest.approx(x, abs=1e-15)


def test_cross_ratio_classes():
    a, b, c = mg.euclidean_cross_ratio(2, [[1, 0], [0, 1], [-1, 0], [0, -1]])
    assert mg.classify(a, b, c)[0] == "boundary"
    h = mg.Heisenberg(2)
    q = [h.encode([0.1 + 0.3j], 0.2), h.encode([1j], -1.0), h.encode([-0.5 + 0j], 0.4), None]
    tag, slack = mg.classify(*h.cross_ratio(q))
    assert tag in ("interior", "boundary")
    assert slack >= -1e-12


def test_lifting_constant_and_j():
    h = mg.Heisenberg(2)
    rects = [([0.1 * i, -0.2 * i], 0.5 + 0.1 * i, 1.0) for i in range(20)]
    assert h.lifting_constant([1, 0], [0, 1], rects) == pytest.approx(2.0, abs=1e-6)
    direction, value = h.recover_J([1, 0])
    assert direction == pytest.approx([0.0, 1.0], abs=1e-4)
    assert value == pytest.approx(4.0, abs=1e-4)


def test_errors_are_exceptions():
    with pytest.raises(mg.MoebiusError):
        mg.Heisenberg(1)
    with pytest.raises(mg.MoebiusError):
        mg.run_suite("lem:nonexistent")


def test_suites():
    tags = {s["tag"] for s in mg.list_suites()}
    assert "prop:lift_const_2" in tags
    report = mg.run_suite("prop:lift_const_2")
    assert report["pass"]
    summary = mg.run_all(tags=["eq:koranyi_gauge", "lem:mean_geometric"])
    assert summary["failed"] == 0
    assert summary == mg.run_all(tags=["eq:koranyi_gauge", "lem:mean_geometric"], threads=1)
