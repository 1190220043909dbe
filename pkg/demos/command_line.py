"""
Running from a config file
==========================

The ``esdg`` command reads a key = value config, writes field snapshots and a
diagnostics CSV, and prints the final range. Equivalent shell call:

    esdg --config demos/kpp_es1fs.cfg --out kpp_out
"""

import csv
import sys
from pathlib import Path

from esdg.cli import main

here = Path(__file__).parent
out = Path("kpp_out")
code = main(["--config", str(here / "kpp_es1fs.cfg"), "--out", str(out)])
print("exit code", code)
with open(out / "diagnostics.csv") as fh:
    rows = list(csv.DictReader(fh))
print("steps", len(rows) - 1, "final max", rows[-1]["max"], "files", sorted(p.name for p in out.iterdir())[:4])
sys.exit(code)
