import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.model_selection import cross_val_score
from sklearn.pipeline import make_pipeline
from sklearn.preprocessing import FunctionTransformer

from ebk import kernels, sections
from ebk.estimators import DensityTransformer, PowerLawRegressor, check_levels, check_points
from ebk.models import ActionSpec, ModelManifold, Point


def test_check_levels():
    np.testing.assert_array_equal(check_levels([1, 2, 5]), [1, 2, 5])
    for bad in ([1, 1], [0, 1], [1.5, 2], []):
        with pytest.raises(ValueError):
            check_levels(bad)


def test_check_points():
    X = np.array([[0.25, 0.0], [1.0, 1.0]])
    c = check_points(X, 1)
    assert c.shape == (2, 1, 2)
    np.testing.assert_allclose(np.abs(c[:, 0, 1]) ** 2, [0.25, 1.0])
    with pytest.raises(ValueError):
        check_points(X, 2)
    with pytest.raises(ValueError):
        check_points([[1.5, 0.0]], 1)


def test_power_law_regressor():
    k = np.arange(10, 210, 10)
    y = 0.7 * k**1.5
    reg = PowerLawRegressor().fit(k.reshape(-1, 1), y)
    assert reg.exponent_ == pytest.approx(1.5) and reg.coefficient_ == pytest.approx(0.7)
    np.testing.assert_allclose(reg.predict(np.array([[300]])), [0.7 * 300**1.5])
    assert reg.score(k.reshape(-1, 1), y) == pytest.approx(1.0)
    assert reg.get_params() == {"window_fraction": 0.5}
    assert clone(reg).set_params(window_fraction=0.25).window_fraction == 0.25


def test_power_law_regressor_validation():
    with pytest.raises(ValueError):
        PowerLawRegressor(window_fraction=0).fit([[1], [2], [3], [4]], [1, 2, 3, 4])
    with pytest.raises(ValueError):
        PowerLawRegressor().fit([[1, 2], [2, 3], [3, 4], [4, 5]], [1, 2, 3, 4])
    with pytest.raises(Exception):
        PowerLawRegressor().predict([[1]])


def test_power_law_in_model_selection():
    k = np.arange(10, 410, 10).reshape(-1, 1)
    y = 2.0 * k[:, 0] ** 0.5
    pipe = make_pipeline(FunctionTransformer(), PowerLawRegressor())
    scores = cross_val_score(pipe, k, y, cv=2)
    assert np.all(scores > 0.99)


def test_density_transformer_matches_kernels():
    X = np.array([[0.3, 0.7, 0.8, 2.1], [0.1, 0.0, 0.9, 1.0]])
    tr = DensityTransformer(polarization=(2, 1), group="su2", level=3, weight=5).fit()
    out = tr.transform(X)
    assert out.shape == (2, 1)
    space = sections.build_space(ModelManifold((2, 1)), 3, ActionSpec.su2_diagonal())
    comp = sections.isotypic_decompose(space, weights=[5])[0]
    p = Point.from_t(0.3, 0.8, phases=(0.7, 2.1))
    assert out[0, 0] == pytest.approx(kernels.density(space, comp, p).value)


def test_density_transformer_variants():
    X = np.array([[0.5, 0.0]])
    full = DensityTransformer(polarization=(1,), group="circle", weights=[1], shift="1/2", level=4).fit_transform(X)
    assert full[0, 0] == pytest.approx(5)
    iso = DensityTransformer(polarization=(1,), group="circle", weights=[1], shift="1/2", level=4, weight=0)
    assert iso.fit_transform(X)[0, 0] == pytest.approx(5 * math.comb(4, 2) / 16)
    absent = DensityTransformer(polarization=(1,), group="circle", weights=[1], shift="1/2", level=4, weight=7)
    assert absent.fit_transform(X)[0, 0] == 0
    lad = DensityTransformer(polarization=(2, 1), level=3, ladder=3).fit()
    assert lad.component_.ncols == 14
    with pytest.raises(ValueError):
        DensityTransformer(group="circle").fit()
    with pytest.raises(ValueError):
        DensityTransformer(polarization=(1,), group="circle", weights=[1], shift="1/2", level=3).fit()


def test_density_transformer_clone_and_params():
    tr = DensityTransformer(level=2, weight=4)
    params = tr.get_params()
    assert params["level"] == 2 and params["weight"] == 4
    assert clone(tr).get_params() == params
