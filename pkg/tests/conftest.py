import pytest

from enmi_loc import CameraConfig, build_grid
from enmi_loc import reference


@pytest.fixture(scope="session")
def ref_cam():
    return CameraConfig.from_json_dict(reference.REFERENCE_CAMERA)


@pytest.fixture(scope="session")
def ref_grid(ref_cam):
    return build_grid(ref_cam, reference.REFERENCE_SIDE_CM)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
