from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np
import pytest

from siegel_volume.forms import calibrate_e6_signs
from siegel_volume.numerics import PrecisionConfig

if TYPE_CHECKING:
    from siegel_volume.forms import TripleSystem


@pytest.fixture(scope="session")
def cfg() -> PrecisionConfig:
    return PrecisionConfig(working_digits=30, series_tolerance=1e-27, quadrature_tolerance=1e-8)


@pytest.fixture(scope="session")
def triples(cfg: PrecisionConfig) -> TripleSystem:
    return calibrate_e6_signs(cfg)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(7)
