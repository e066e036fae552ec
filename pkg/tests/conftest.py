import numpy as np
import pytest

from paretofolio import CostSpec, PortfolioProblem, build_market_model, simple_returns
from paretofolio.fixtures import make_synthetic_prices
from paretofolio.market_data import MarketModel


@pytest.fixture(scope="session")
def synthetic_prices():
    return make_synthetic_prices(seed=0)


@pytest.fixture(scope="session")
def synthetic_problem(synthetic_prices):
    model = build_market_model(simple_returns(synthetic_prices))
    return PortfolioProblem(model, CostSpec())


@pytest.fixture(scope="session")
def two_asset_model():
    return MarketModel(
        mu=np.array([0.05, 0.12]),
        sigma=np.array([[0.04, 0.006], [0.006, 0.09]]),
        shrinkage_alpha=0.0,
        rf=0.0,
    )


@pytest.fixture(scope="session")
def two_asset_problem(two_asset_model):
    return PortfolioProblem(two_asset_model, CostSpec(gamma_t=0.0, gamma_h=0.0))
