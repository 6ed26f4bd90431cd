import numpy as np
import pytest

from boxmetrics import OrientedBox


@pytest.fixture
def unit_box():
    return OrientedBox([0.0, 0.0, 0.0], np.eye(3), [1.0, 1.0, 1.0])


def unit_cube_at(x, y=0.0, z=0.0):
    return OrientedBox([x, y, z], np.eye(3), [1.0, 1.0, 1.0])
