import pathlib

import pytest

from narrachart.wire import load_table

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> str:
    return str(FIXTURES / name)


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text()


@pytest.fixture
def gdp_table():
    return load_table(fixture_path("gdp_table.csv"))


@pytest.fixture
def hedge_table():
    return load_table(fixture_path("hedge_table.csv"))


@pytest.fixture
def power_table():
    return load_table(fixture_path("power_table.csv"))


@pytest.fixture
def power_article():
    return fixture_text("power_article.txt")


@pytest.fixture
def appendix_gdp_doc():
    return fixture_text("appendix_gdp_response.txt")


@pytest.fixture
def appendix_hedge_doc():
    return fixture_text("appendix_hedge_response.txt")
