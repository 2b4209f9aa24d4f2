import textwrap

import numpy as np
import pytest

from sparse_mkr.kernels import Exponential


@pytest.fixture
def laplace():
    """exp(-|r|), the alpha = 1 exponential kernel in one dimension."""
    return Exponential(alpha=1.0, gamma=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def write_file(tmp_path):
    def write(name: str, text: str):
        path = tmp_path / name
        path.write_text(textwrap.dedent(text).lstrip())
        return path

    return write
