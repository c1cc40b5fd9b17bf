"""scikit-learn style wrappers around the generators and the localizer.

Generators are fitted on a :class:`SutModel` and expose ``array_`` and
``report_``; ``transform`` returns the array as an integer matrix of value
indices. :class:`FaultLocalizer` is fitted on a test array and predicts the
flagged interactions for an outcome.
"""

from __future__ import annotations

import time

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .cca import generate_cca
from .cda_heuristic import generate_heuristic_cda
from .cda_sat import generate_min_cda
from .localize import Outcome, annotate, identify
from .model import SutModel, TestArray
from .report import GenerationReport


def _check_model(model):
    if not isinstance(model, SutModel):
        raise TypeError(f"expected a SutModel, got {type(model).__name__}")
    return model


def _check_dt(model, d, t):
    if not isinstance(d, (int, np.integer)) or d < 0:
        raise ValueError(f"d must be a non-negative integer, got {d!r}")
    if not isinstance(t, (int, np.integer)) or t < 1:
        raise ValueError(f"t must be a positive integer, got {t!r}")
    if d + t > model.k:
        raise ValueError(f"d + t = {d + t} exceeds the number of parameters ({model.k})")


class _ArrayGenerator(BaseEstimator):
    def transform(self, X=None):
        check_is_fitted(self, "array_")
        return np.array(self.array_.rows, dtype=np.int64).reshape(len(self.array_), -1)

    def fit_transform(self, X, y=None):
        return self.fit(X).transform()


class CCAGenerator(_ArrayGenerator):
    """Constrained covering array of the given strength."""

    def __init__(self, strength=2, random_state=0):
        self.strength = strength
        self.random_state = random_state

    def fit(self, X, y=None):
        model = _check_model(X)
        _check_dt(model, 0, self.strength)
        t0 = time.perf_counter()
        self.array_ = generate_cca(model, self.strength, self.random_state)
        self.report_ = GenerationReport(
            model.name, "cca", 0, self.strength, self.array_, self.random_state,
            (time.perf_counter() - t0) * 1000,
        )
        return self


class HeuristicCDAGenerator(_ArrayGenerator):
    """Row-removal heuristic seeded with a (d+t)-CCA."""

    def __init__(self, d=1, t=2, random_state=0):
        self.d = d
        self.t = t
        self.random_state = random_state

    def fit(self, X, y=None):
        model = _check_model(X)
        _check_dt(model, self.d, self.t)
        self.report_ = generate_heuristic_cda(model, self.d, self.t, seed=self.random_state)
        self.array_ = self.report_.array
        self.trace_ = self.report_.trace
        return self


class SatCDAGenerator(_ArrayGenerator):
    """Minimum-size search by satisfiability; ``budget_ms=None`` is unbounded."""

    def __init__(self, d=1, t=2, budget_ms=None, random_state=0):
        self.d = d
        self.t = t
        self.budget_ms = budget_ms
        self.random_state = random_state

    def fit(self, X, y=None):
        model = _check_model(X)
        _check_dt(model, self.d, self.t)
        self.report_ = generate_min_cda(model, self.d, self.t, seed=self.random_state,
                                        budget_ms=self.budget_ms)
        self.array_ = self.report_.array
        self.optimal_ = self.report_.optimal
        return self


class FaultLocalizer(BaseEstimator):
    """Flags interactions that appear only in failed rows."""

    def __init__(self, t=2, at_most_t=False, minimal=False):
        self.t = t
        self.at_most_t = at_most_t
        self.minimal = minimal

    def fit(self, X, y=None):
        if not isinstance(X, TestArray):
            raise TypeError(f"expected a TestArray, got {type(X).__name__}")
        if not 0 <= self.t <= X.model.k:
            raise ValueError(f"t must be in 0..{X.model.k}")
        self.array_ = X
        return self

    def predict(self, outcome, assumed_faulty=None):
        check_is_fitted(self, "array_")
        if not isinstance(outcome, Outcome):
            failed = np.asarray(outcome, dtype=bool)
            if failed.shape != (len(self.array_),):
                raise ValueError(f"outcome must have one entry per row ({len(self.array_)})")
            outcome = Outcome.from_failed(len(failed), np.flatnonzero(failed).tolist())
        diag = identify(self.array_, outcome, self.t, self.at_most_t, self.minimal)
        if assumed_faulty is not None:
            diag = annotate(self.array_.model, diag, assumed_faulty)
        return diag
