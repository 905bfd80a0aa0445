import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from raa_nullsteer.analysis import analyze
from raa_nullsteer.beamform import NullSteerProblem
from raa_nullsteer.estimator import RotatableArrayNullSteerer, make_pattern
from raa_nullsteer.steering import Cosine, Isotropic

deg = np.deg2rad
FAST = dict(q_grid=72, rounds=2, gs_iters=10)


def test_make_pattern():
    assert isinstance(make_pattern("iso"), Isotropic)
    assert make_pattern("cos", 2.0) == Cosine(2.0)
    with pytest.raises(ValueError):
        make_pattern("dipole")
    with pytest.raises(ValueError):
        make_pattern("cos", 0.0)


def test_fit_predict_nulls(fig3_interferers):
    est = RotatableArrayNullSteerer(desired=deg(45), **FAST).fit(np.array(fig3_interferers)[:, None])
    assert est.gain_ >= est.foa_gain_
    nulls = est.predict(fig3_interferers)
    assert nulls.shape == (4,) and np.all(nulls < 1e-10 * 8)
    assert est.predict([deg(45)])[0] == pytest.approx(est.gain_, rel=1e-9)
    assert est.predict_foa([deg(45)])[0] == pytest.approx(est.foa_gain_, rel=1e-9)
    assert 0 < est.score() <= 1
    assert est.n_evaluations_ == 2 * (3 * 72 + 10 * 36) + 2


def test_directional_fit_reaches_analysis_gain():
    est = RotatableArrayNullSteerer(desired=deg(45), pattern="cos", p=0.5).fit([deg(30)])
    rep = analyze(est.array_, NullSteerProblem.from_degrees(45, [30]))
    assert est.gain_ == pytest.approx(rep.achieved_gain, rel=1e-2)


def test_params_and_clone():
    est = RotatableArrayNullSteerer(n_elements=4, random_state=7)
    params = est.get_params()
    assert params["n_elements"] == 4 and params["random_state"] == 7
    twin = clone(est).set_params(spacing=0.25)
    assert twin.spacing == 0.25 and est.spacing == 0.5


def test_not_fitted():
    with pytest.raises(NotFittedError):
        RotatableArrayNullSteerer().predict([0.0])


@pytest.mark.parametrize(
    "kwargs", [dict(n_elements=0), dict(spacing=-1.0), dict(q_grid=1), dict(mu=0.0), dict(pattern="x")]
)
def test_invalid_params(kwargs):
    with pytest.raises(ValueError):
        RotatableArrayNullSteerer(**kwargs).fit([0.3])


def test_rejects_non_finite():
    with pytest.raises(ValueError):
        RotatableArrayNullSteerer(**FAST).fit([np.nan])


def test_no_interferers():
    est = RotatableArrayNullSteerer(**FAST).fit([])
    assert est.gain_ == 8.0 and est.score() == 1.0
