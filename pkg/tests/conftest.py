import numpy as np
import pytest

import tailbounds as tb

CATALOG_SPECS = ("gamma:8,1", "gamma:3,2", "exp:1", "normal:0,1", "poisson:4")


@pytest.fixture(scope="session")
def gamma81():
    return tb.make_model(tb.parse_spec("gamma:8,1"))


@pytest.fixture(scope="session")
def gamma32():
    return tb.make_model(tb.parse_spec("gamma:3,2"))


@pytest.fixture(scope="session")
def exp1():
    return tb.make_model(tb.parse_spec("exp:1"))


@pytest.fixture(scope="session")
def std_normal():
    return tb.make_model(tb.parse_spec("normal:0,1"))


@pytest.fixture(scope="session")
def poisson4():
    return tb.make_model(tb.parse_spec("poisson:4"))


@pytest.fixture(scope="session")
def catalog():
    return {text: tb.make_model(tb.parse_spec(text)) for text in CATALOG_SPECS}


def tail_grid(model, points=40):
    """y grid spanning just-above-mean to deep tail.

    Multiplicative (1.05*mean, 5*mean] for positive means; the zero-mean
    normal gets the same shape in units of its standard deviation.
    """
    if model.mean > 0:
        return np.linspace(1.05 * model.mean, 5.0 * model.mean, points + 1)[1:]
    sigma = np.sqrt(model.K2(0.0))
    return model.mean + np.linspace(0.05 * sigma, 5.0 * sigma, points + 1)[1:]
