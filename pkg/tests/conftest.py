"""Shared committed builtin instances.

The blend ("memorizer") layouts below are fixed by design, not arbitrary:

* anchors sit on a line so the perpendicular latent direction is exactly
  collapsed (singular value 0 at on-axis points), giving a genuine
  below-threshold direction to probe;
* anchor gaps around 0.6 keep the plateau Jacobian well above the
  float64 noise floor at sharpness 50 (gap d contributes ~ exp(-50 d^2)
  to the plateau signal), so anchor points stay rank-1 rather than
  underflowing to rank 0;
* the tighter 0.35-gap instance keeps third derivatives small enough for
  the central-difference error budget of the Jacobian oracle check.
"""
import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from gendensity import memorizer, smooth_interpolator

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")

# scoring instance: 4 collinear anchors, centers stretched 2x and offset
ANCHOR_X4 = np.array([0.0, 0.6, 1.25, 1.95])
ANCHORS4 = np.stack([ANCHOR_X4, np.zeros(4)], axis=1)
CENTERS4 = np.stack([2.0 + 2.0 * ANCHOR_X4, np.zeros(4)], axis=1)

# two-center instance for dip/collapse demonstrations
ANCHORS2 = np.array([[0.0, 0.0], [0.6, 0.0]])
CENTERS2 = np.array([[2.0, 0.0], [3.2, 0.0]])

# tight-gap instance for finite-difference accuracy checks
ANCHOR_XFD = np.array([0.0, 0.35, 0.7, 1.05])
ANCHORS_FD = np.stack([ANCHOR_XFD, np.zeros(4)], axis=1)
CENTERS_FD = np.stack([2.0 + ANCHOR_XFD, np.zeros(4)], axis=1)

SHARPNESS = 50.0


@pytest.fixture(scope="session")
def mem4():
    return memorizer(ANCHORS4, CENTERS4, SHARPNESS)


@pytest.fixture(scope="session")
def smooth4():
    return smooth_interpolator(ANCHORS4, CENTERS4)


@pytest.fixture(scope="session")
def mem2():
    return memorizer(ANCHORS2, CENTERS2, SHARPNESS)


@pytest.fixture(scope="session")
def smooth2():
    return smooth_interpolator(ANCHORS2, CENTERS2)


@pytest.fixture(scope="session")
def mem_fd():
    return memorizer(ANCHORS_FD, CENTERS_FD, SHARPNESS)


def fixture_path(name: str) -> str:
    return os.path.join(FIXTURES, name)
