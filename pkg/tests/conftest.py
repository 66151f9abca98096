import numpy as np
import pytest

from fbrs import QpProblem


@pytest.fixture
def qp_1d():
    """min 0.5 z^2 - z  s.t.  z <= 0.5; optimum z* = 0.5, v* = 0.5."""
    return QpProblem([[1.0]], [-1.0], [[1.0]], [0.5])


@pytest.fixture
def qp_box_2d():
    """min 0.5||z||^2 - 2.1'z  s.t.  z <= (1, 1); optimum z* = (1, 1), v* = (1, 1)."""
    return QpProblem(np.eye(2), [-2.0, -2.0], np.eye(2), [1.0, 1.0])


@pytest.fixture
def qp_interior():
    """min 0.5 z^2  s.t.  z <= 1; unconstrained optimum z* = 0, v* = 0."""
    return QpProblem([[1.0]], [0.0], [[1.0]], [1.0])
