from __future__ import annotations

from fractions import Fraction

import pytest

from sparkdet import casestudies as cs


def test_scaler_exact_mean_is_200():
    data = cs.scaler_data(5)
    assert len(data) == 15
    assert cs.exact_sum(data) / len(data) == Fraction(200)


def test_scaler_chaotic_means_vary():
    res = cs.standard_scaler(n=5, partitions=20, trials=100, tree=False)
    assert res.exact == 200 and res.distinct >= 2
    # every observed mean is a multiple of 600/15 between 0 and the full 600*5/15
    assert all(m in {0.0, 40.0, 80.0, 120.0, 160.0, 200.0} for m in res.outputs)


def test_odd_power_terms_cancel_exactly():
    terms = cs.odd_power_terms(101)
    assert cs.exact_sum(terms) == 0
    assert terms[:3] == [-t for t in terms[::-1][:3]]


@pytest.mark.parametrize("points,lo,hi", [(1, -2, 2), (10, -1, 2)])
def test_odd_power_terms_rejects(points, lo, hi):
    with pytest.raises(ValueError):
        cs.odd_power_terms(points, lo=lo, hi=hi)


def test_odd_integral_small():
    res = cs.odd_integral(points=2001, partitions=8, trials=20)
    assert res.exact == 0
    assert res.reference == cs.odd_integral(points=2001, partitions=8, trials=1, seed=99).reference


def test_subgradients():
    assert cs.subgradients(1) == [5e19, 300.0, -5e19]
    res = cs.gradient_sum(n=5, partitions=5, trials=40)
    assert res.exact == 1500 and res.distinct >= 2


@pytest.mark.parametrize("name", ["triangle", "components", "indegrees"])
def test_graph_studies_agree(name):
    res = cs.STUDIES[name](trials=5)
    assert res.agrees is True and res.distinct == 1


def test_cfl_study_proper():
    res = cs.cfl_study(trials=5)
    assert res.agrees is True and res.params["k"] == cs.max_degree(cs.bundled_graph("triangles")) + 1
