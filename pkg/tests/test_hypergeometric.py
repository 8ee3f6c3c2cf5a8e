import math

import numpy as np
import pytest

from heunkit.errors import PoleParameter, SlowConvergence
from heunkit.hypergeometric import (confluent_1f1, contiguous_residual,
                                    gauss_2f1, gauss_2f1_derivative)
from heunkit.ode import LinearODE, ode_residual


def test_binomial_identity():
    a, z = 0.5, 0.3
    val = gauss_2f1(a, 0.9, 0.9, z)
    assert abs(val - (1 - z) ** (-a)) <= 1e-12


def test_logarithm_identity():
    z = 0.5
    val = gauss_2f1(1.0, 1.0, 2.0, z)
    assert abs(val - (-math.log(1 - z) / z)) <= 1e-12


def test_gauss_ode_residual():
    rng = np.random.default_rng(17)
    count = 0
    while count < 100:
        a, b = (complex(x, y) for x, y in rng.normal(0, 0.7, (2, 2)))
        c = complex(*rng.normal(0, 0.7, 2)) + 1.5
        if abs(c.imag) < 1e-3 and abs(c.real - round(c.real)) < 1e-3:
            continue
        z = complex(*rng.normal(0, 0.25, 2))
        if abs(z) > 0.8:
            continue
        ode = LinearODE.from_polynomials([0, 1, -1], [c, -(1 + a + b)],
                                         [-a * b])
        w = gauss_2f1(a, b, c, z)
        dw = gauss_2f1_derivative(a, b, c, z)
        ddw = gauss_2f1_derivative(a, b, c, z, order=2)
        if min(abs(z), abs(z - 1)) < 1e-3:
            continue
        assert ode_residual(ode, [(z, w, dw, ddw)]) <= 1e-10
        count += 1


def test_kummer_exponential_identity():
    val = confluent_1f1(0.7, 0.7, 1.0)
    assert abs(val - math.e) <= 1e-13


def test_kummer_elementary_identity():
    z = 0.4
    val = confluent_1f1(1.0, 2.0, 2 * z)
    assert abs(val - (math.exp(2 * z) - 1) / (2 * z)) <= 1e-12


def test_kummer_ode_residual():
    rng = np.random.default_rng(23)
    count = 0
    while count < 100:
        a = complex(*rng.normal(0, 0.7, 2))
        c = complex(*rng.normal(0, 0.7, 2)) + 1.5
        if abs(c.imag) < 1e-3 and abs(c.real - round(c.real)) < 1e-3:
            continue
        z = complex(*rng.normal(0, 0.8, 2))
        if abs(z) < 1e-3:
            continue
        # z w'' + (c - z) w' - a w = 0
        ode = LinearODE.from_polynomials([0, 1], [c, -1], [-a])
        w = confluent_1f1(a, c, z)
        dw = (a / c) * confluent_1f1(a + 1, c + 1, z)
        ddw = (a * (a + 1) / (c * (c + 1))) * confluent_1f1(a + 2, c + 2, z)
        assert ode_residual(ode, [(z, w, dw, ddw)]) <= 1e-10
        count += 1


def test_contiguous_relation():
    rng = np.random.default_rng(29)
    for _ in range(20):
        a, b = (complex(x, y) for x, y in rng.normal(0, 0.6, (2, 2)))
        c = complex(*rng.normal(0, 0.5, 2)) + 1.7
        z = complex(*rng.normal(0, 0.2, 2))
        if abs(z) > 0.7:
            continue
        assert contiguous_residual(a, b, c, z) <= 1e-10


def test_pole_parameter():
    with pytest.raises(PoleParameter):
        gauss_2f1(0.3, 0.7, 0.0, 0.2)
    with pytest.raises(PoleParameter):
        gauss_2f1(0.3, 0.7, -2.0, 0.2)
    with pytest.raises(PoleParameter):
        confluent_1f1(0.3, -1.0, 0.2)


def test_slow_convergence_near_unit_circle():
    with pytest.raises(SlowConvergence):
        gauss_2f1(0.3, 0.7, 1.1, 0.995)
    with pytest.raises(ValueError):
        gauss_2f1(0.3, 0.7, 1.1, 1.2)


def test_gauss_matches_scipy_special():
    from scipy.special import hyp2f1

    rng = np.random.default_rng(31)
    for _ in range(30):
        a, b = rng.normal(0, 1.0, 2)
        c = rng.normal(0, 1.0) + 1.6
        if abs(c - round(c)) < 1e-2 and round(c) <= 0:
            continue
        z = rng.uniform(-0.8, 0.8)
        assert abs(gauss_2f1(a, b, c, z) - hyp2f1(a, b, c, z)) <= \
            1e-11 * max(1.0, abs(hyp2f1(a, b, c, z)))
