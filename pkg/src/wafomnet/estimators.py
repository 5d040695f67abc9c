"""scikit-learn style wrapper around the scrambling search."""

from __future__ import annotations

from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .net import points_real, scramble
from .quality import t_value, wafom
from .search import SearchConfig, scramble_search
from .validation import check_net, check_scramble_set


class LinearScrambleSearch(TransformerMixin, BaseEstimator):
    """Pick the linear scrambling of a digital net with extremal WAFOM.

    ``fit`` takes a :class:`~wafomnet.net.DigitalNet` in place of a data
    matrix and searches ``n_candidates`` random unit lower-triangular
    scramblings; ``transform`` applies the selected scrambling to any net of
    the same dimension and precision.

    Parameters
    ----------
    n_candidates : int, default=1000
        Number of random scramble sets drawn.
    q : {2, 4}, default=2
        WAFOM base.
    seed : int, default=0
        Seed of the candidate streams.
    include_identity : bool, default=True
        Also consider the unscrambled net (candidate 0).
    objective : {"minimize", "maximize"}, default="minimize"
        Keep the smallest or the largest WAFOM.
    n_jobs : int or None, default=None
        Worker threads; does not change the result.

    Attributes
    ----------
    best_scramble_ : ScrambleSet
    best_net_ : DigitalNet
    wafom_ : float
        WAFOM of ``best_net_``.
    candidate_index_ : int
    trace_ : list of (int, float)
        Improvements in candidate order.
    t_value_ : int
        t-value of the fitted net (shared by every scrambling).
    """

    def __init__(self, n_candidates=1000, q=2, seed=0, include_identity=True,
                 objective="minimize", n_jobs=None):
        self.n_candidates = n_candidates
        self.q = q
        self.seed = seed
        self.include_identity = include_identity
        self.objective = objective
        self.n_jobs = n_jobs

    def fit(self, X, y=None):
        net = check_net(X, need_m_le_n=True, need_points=True)
        cfg = SearchConfig(
            M=self.n_candidates, seed=self.seed, q=self.q,
            include_identity=self.include_identity, objective=self.objective,
        )
        res = scramble_search(net, cfg, threads=self.n_jobs)
        self.best_scramble_ = res.best_scramble
        self.best_net_ = res.best_net
        self.wafom_ = res.best_wafom
        self.candidate_index_ = res.candidate_index
        self.trace_ = res.trace
        self.t_value_ = t_value(net)
        return self

    def transform(self, X):
        check_is_fitted(self, "best_scramble_")
        net = check_net(X)
        check_scramble_set(self.best_scramble_, net)
        return scramble(net, self.best_scramble_)

    def sample(self):
        """Points of the selected net in (0, 1)^s, shape (2**m, s)."""
        check_is_fitted(self, "best_net_")
        return points_real(self.best_net_)

    def score(self, X, y=None):
        """Negative WAFOM of the transformed net (larger is better)."""
        return -wafom(self.transform(X), self.q)
