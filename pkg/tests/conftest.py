from __future__ import annotations

import pytest

from ssrank.ffmat import GF2, PrimeField


@pytest.fixture(scope="session")
def gf2() -> PrimeField:
    return GF2


@pytest.fixture(scope="session")
def gf3() -> PrimeField:
    return PrimeField(3)
