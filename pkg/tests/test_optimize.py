import numpy as np
import pytest
from scipy.optimize import minimize, rosen

from densecode.optimize import OptimizationWarning, OptimizerConfig, nelder_mead_batch, warn_unconverged


def batched(fun):
    return lambda points, rows: np.array([fun(p) for p in points])


def test_quadratic_minimum_per_row():
    centers = np.array([[1.0, -2.0], [0.5, 0.5], [-3.0, 4.0]])

    def f(points, rows):
        return ((points - centers[rows]) ** 2).sum(axis=1)

    res = nelder_mead_batch(f, np.zeros((3, 2)), 0.5, 1e-9, 1e-14, 2000)
    assert res.converged.all()
    assert np.allclose(res.x, centers, atol=1e-7)


def test_rosenbrock_matches_scipy():
    x0 = np.array([[-1.2, 1.0], [0.0, 0.0]])
    res = nelder_mead_batch(batched(rosen), x0, 0.5, 1e-10, 1e-14, 5000)
    for start, x in zip(x0, res.x):
        ref = minimize(rosen, start, method="Nelder-Mead",
                       options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 5000})
        assert np.allclose(x, ref.x, atol=1e-6)
        assert np.allclose(x, [1, 1], atol=1e-6)


def test_iteration_cap_reports_unconverged():
    res = nelder_mead_batch(batched(rosen), np.array([[-1.2, 1.0]]), 0.5, 1e-12, 1e-16, 5)
    assert not res.converged[0]
    assert res.nit[0] == 5
    with pytest.warns(OptimizationWarning):
        warn_unconverged(res, "test")


def test_config_validation():
    with pytest.raises(ValueError):
        OptimizerConfig(restarts=-1)
    with pytest.raises(ValueError):
        OptimizerConfig(max_iters=0)
