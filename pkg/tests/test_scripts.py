import subprocess
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent


def test_frozen_oracles_are_up_to_date():
    pytest.importorskip("sympy")
    res = subprocess.run(
        [sys.executable, str(ROOT / "scripts" / "freeze_oracles.py"), "--check"],
        capture_output=True,
        text=True,
        timeout=600,
    )
    assert res.returncode == 0, res.stdout + res.stderr
