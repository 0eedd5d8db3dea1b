import numpy as np
import pytest

from dampex import Box, Gaussian, GaussianMonomial, Shifted


def catalog_1d():
    return [
        Gaussian(dimension=1, scale=1.0),
        Gaussian(dimension=1, scale=0.25, amplitude=1.5),
        Box(dimension=1, half_width=1.0),
        GaussianMonomial(dimension=1, exponents=(1,), scale=1.0),
        GaussianMonomial(dimension=1, exponents=(2,), scale=0.5),
        Shifted(base=Gaussian(dimension=1, scale=1.0), center=(0.6,), dilation=1.0),
        Shifted(base=Box(dimension=1, half_width=1.0), center=(0.5,), dilation=2.0),
    ]


def catalog_2d():
    return [
        Gaussian(dimension=2, scale=1.0),
        Gaussian(dimension=2, scale=0.25),
        Box(dimension=2, half_width=1.0),
        GaussianMonomial(dimension=2, exponents=(1, 1), scale=1.0),
        Shifted(base=Gaussian(dimension=2, scale=1.0), center=(0.4, -0.3),
                dilation=1.0),
    ]


def catalog_3d():
    return [
        Gaussian(dimension=3, scale=1.0),
        Gaussian(dimension=3, scale=0.25),
        Shifted(base=Gaussian(dimension=3, scale=1.0), center=(0.4, -0.3, 0.2),
                dilation=1.0),
    ]


def catalog_all():
    return catalog_1d() + catalog_2d() + catalog_3d()


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20250810)


@pytest.fixture(scope="session")
def gaussian_1d():
    return Gaussian(dimension=1, scale=1.0)
