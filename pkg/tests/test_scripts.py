import subprocess
import sys
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


@pytest.mark.parametrize("name, args, expect", [
    ("calibrate_ratio.py", ["--max-n", "40"], "N0 = 4"),
    ("kpr_fraction.py", ["--max-n", "5"], "94/97"),
    ("bag_statistics.py", ["--sizes", "10"], "0.471893"),
    ("one_hom_fraction.py", ["--max-n", "4"], "50/87"),
    ("mixture_weights.py", ["--exact-n", "3", "--sizes", "8", "--trials", "20"], "csp weights: 1/4 3/4"),
])
def test_script_runs(name, args, expect):
    r = subprocess.run([sys.executable, str(SCRIPTS / name), *args], capture_output=True, text=True, check=True)
    assert expect in r.stdout
