import sys
from pathlib import Path

import numpy as np
import pytest
from hypothesis import settings, strategies as st

sys.path.append(str(Path(__file__).resolve().parents[1] / "src"))

from alpha_fidelity.optimize import ball_points  # noqa: E402
from alpha_fidelity.qmath import BlochVector  # noqa: E402

settings.register_profile("alpha-fid", deadline=None, derandomize=True, max_examples=500)
settings.load_profile("alpha-fid")

unit_floats = st.floats(min_value=0.0, max_value=1.0, exclude_max=True, allow_nan=False)


def bloch_vectors(radius: float = 1.0):
    """Bloch vectors spread uniformly over the ball of the given radius."""

    return st.tuples(unit_floats, unit_floats, unit_floats).map(
        lambda u: BlochVector.from_array(radius * ball_points(np.array(u))[0])
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
