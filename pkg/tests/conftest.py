import pytest

from camkit.geometry import FrameConventions
from camkit.labeler import LabelerThresholds
from camkit.taxonomy import build_matrix


@pytest.fixture(scope="session")
def base_matrix():
    return build_matrix("base")


@pytest.fixture(scope="session")
def zoom_matrix():
    return build_matrix("zoom")


@pytest.fixture(scope="session")
def conv():
    return FrameConventions()


@pytest.fixture(scope="session")
def th():
    return LabelerThresholds()
