"""scikit-learn style wrappers.

``PowerLawRegressor`` fits ``v ~ c k^a`` with the refined exponent and plugs
into pipelines and model selection.  ``DensityTransformer`` fixes a model,
action, level and component at ``fit`` time and maps points to densities.
Points are real feature rows ``(t_1, phase_1, ..., t_n, phase_n)`` with
``t = |z1|^2`` on each factor.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted, check_X_y

from ebk import asymptotics, kernels, sections
from ebk.models import ActionSpec, ModelManifold


def check_levels(k) -> np.ndarray:
    """Validate a column of levels: positive integers, strictly increasing."""
    k = check_array(np.asarray(k).reshape(-1, 1), dtype=None, ensure_min_samples=1)[:, 0]
    if not np.all(np.equal(np.mod(k, 1), 0)) or np.any(k <= 0):
        raise ValueError("levels must be positive integers")
    k = k.astype(np.int64)
    if np.any(np.diff(k) <= 0):
        raise ValueError("levels must be strictly increasing")
    return k


def check_points(X, n_factors: int) -> np.ndarray:
    """Validate ``(n_samples, 2 n_factors)`` rows of ``(t, phase)`` pairs and
    return unit-norm homogeneous coordinates ``(n_samples, n_factors, 2)``."""
    X = check_array(X, dtype=np.float64)
    if X.shape[1] != 2 * n_factors:
        raise ValueError(f"expected {2 * n_factors} features (t, phase per factor), got {X.shape[1]}")
    t = X[:, 0::2]
    if np.any((t < 0) | (t > 1)):
        raise ValueError("t = |z1|^2 must lie in [0, 1]")
    ph = X[:, 1::2]
    return np.stack([np.sqrt(1 - t).astype(complex), np.sqrt(t) * np.exp(1j * ph)], axis=-1)


class PowerLawRegressor(RegressorMixin, BaseEstimator):
    """Power-law fit of a level series.

    Parameters
    ----------
    window_fraction : float, default=0.5
        Fraction of the largest levels used for the refined exponent.

    Attributes
    ----------
    exponent_ : float
        Refined (extrapolated) exponent, used by ``predict``.
    coefficient_ : float
    lsq_exponent_ : float
    fit_ : AsymptoticFit
    """

    def __init__(self, window_fraction=0.5):
        self.window_fraction = window_fraction

    def fit(self, X, y):
        X, y = check_X_y(np.asarray(X, dtype=float).reshape(len(X), -1), y, y_numeric=True)
        if X.shape[1] != 1:
            raise ValueError("X must be a single column of levels")
        k = check_levels(X[:, 0])
        if not 0 < self.window_fraction <= 1:
            raise ValueError("window_fraction must be in (0, 1]")
        self.fit_ = asymptotics.fit_power_law(asymptotics.SeriesSample(k, y), self.window_fraction)
        self.exponent_ = self.fit_.richardson_exponent
        self.lsq_exponent_ = self.fit_.exponent
        self.coefficient_ = self.fit_.coefficient
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "fit_")
        X = check_array(np.asarray(X, dtype=float).reshape(len(X), -1))
        return self.coefficient_ * X[:, 0] ** self.exponent_


class DensityTransformer(TransformerMixin, BaseEstimator):
    """Density of an isotypic component (or a ladder) at sample points.

    Parameters
    ----------
    polarization : tuple of int
        ``(a,)`` for ``P^1`` or ``(a, b)`` for ``P^1 x P^1``.
    group : {"su2", "circle", "torus"}
    weights, shift
        Torus weight matrix and linearization shift (ignored for SU(2)).
    level : int
    weight : int or tuple, optional
        Isotypic component; ``None`` with ``ladder=None`` means the whole space.
    ladder : int or tuple, optional
        Generator of a ladder; overrides ``weight``.
    """

    def __init__(self, polarization=(2, 1), group="su2", weights=None, shift=None, level=1,
                 weight=None, ladder=None):
        self.polarization = polarization
        self.group = group
        self.weights = weights
        self.shift = shift
        self.level = level
        self.weight = weight
        self.ladder = ladder

    def _action(self):
        if self.group == "su2":
            return ActionSpec.su2_diagonal()
        if self.weights is None:
            raise ValueError("torus actions need weights")
        W = np.atleast_2d(self.weights).tolist()
        if self.group == "circle":
            return ActionSpec.circle(W[0], 0 if self.shift is None else np.atleast_1d(self.shift)[0])
        return ActionSpec.torus(W, self.shift)

    def fit(self, X=None, y=None):
        model = ModelManifold(tuple(self.polarization))
        action = self._action()
        space = sections.build_space(model, self.level, action)
        if self.ladder is not None:
            comp = sections.ladder_subspace(space, self.ladder)
        elif self.weight is not None:
            found = sections.isotypic_decompose(space, weights=[self.weight])
            comp = found[0] if found else sections.empty_component(space, self.weight)
        else:
            comp = sections.full_component(space)
        self.model_, self.action_, self.space_, self.component_ = model, action, space, comp
        self.n_features_in_ = 2 * model.n
        return self

    def transform(self, X):
        check_is_fitted(self, "component_")
        coords = check_points(X, self.model_.n)
        return kernels.density_values(self.space_, self.component_, coords)[:, None]
