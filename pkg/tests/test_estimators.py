import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from wafomnet import LinearScrambleSearch, SearchConfig, points_real, scramble, scramble_search, t_value, wafom


def test_params_round_trip():
    est = LinearScrambleSearch(n_candidates=7, q=4, seed=3)
    params = est.get_params()
    assert params == {"n_candidates": 7, "q": 4, "seed": 3, "include_identity": True,
                      "objective": "minimize", "n_jobs": None}
    est.set_params(objective="maximize")
    assert est.objective == "maximize"
    twin = clone(est)
    assert twin.get_params() == est.get_params() and twin is not est


def test_fit_matches_search(sobol):
    net = sobol(3, 7)
    est = LinearScrambleSearch(n_candidates=25, seed=5).fit(net)
    res = scramble_search(net, SearchConfig(M=25, seed=5))
    assert est.candidate_index_ == res.candidate_index
    assert est.wafom_ == res.best_wafom
    assert est.best_net_ == res.best_net
    assert est.trace_ == res.trace
    assert est.t_value_ == t_value(net)


def test_transform_and_sample(sobol):
    net = sobol(3, 7)
    est = LinearScrambleSearch(n_candidates=10, seed=1)
    out = est.fit_transform(net)
    assert out == est.best_net_
    other = sobol(3, 5)
    assert est.transform(other) == scramble(other, est.best_scramble_)
    assert np.array_equal(est.sample(), points_real(est.best_net_))
    assert est.score(net) == -wafom(out)


def test_not_fitted_and_bad_input(sobol):
    est = LinearScrambleSearch(n_candidates=2)
    with pytest.raises(NotFittedError):
        est.transform(sobol(2, 3))
    with pytest.raises(TypeError):
        est.fit(np.zeros((4, 2)))
    est.fit(sobol(2, 3))
    with pytest.raises(ValueError):
        est.transform(sobol(3, 3))


def test_invalid_params_raise_on_fit(sobol):
    with pytest.raises(ValueError):
        LinearScrambleSearch(n_candidates=0).fit(sobol(2, 3))
    with pytest.raises(ValueError):
        LinearScrambleSearch(objective="median").fit(sobol(2, 3))
