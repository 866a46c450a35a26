import os
import shutil

import pytest


@pytest.fixture(scope="session")
def cli():
    path = os.environ.get("COMMOT_CLI") or shutil.which("commot")
    if not path:
        pytest.skip("commot executable not found; set COMMOT_CLI")
    return path
