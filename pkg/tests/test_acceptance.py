import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

import _acceptance as acc

LINES = []
DUMPS = {}


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} {detail}"
    LINES.append(line)
    print(line)


@pytest.mark.parametrize("n", sorted(acc.BUILDERS))
def test_criterion(n):
    rep, ok, detail = acc.BUILDERS[n]()
    DUMPS[n] = acc.dump(rep)
    report(n, ok, detail)
    assert ok, detail


def test_criterion_8_determinism():
    here = Path(__file__).resolve().parent
    env = {**os.environ, "PYTHONPATH": os.pathsep.join([str(here), os.environ.get("PYTHONPATH", "")])}
    proc = subprocess.run([sys.executable, str(here / "_acceptance.py")], capture_output=True, text=True,
                          env=env, check=True, timeout=1200)
    again = {int(k): v for k, v in json.loads(proc.stdout).items()}
    for n in acc.BUILDERS:
        if n not in DUMPS:
            DUMPS[n] = acc.dump(acc.BUILDERS[n]()[0])
    differ = [n for n in acc.BUILDERS if again[n] != DUMPS[n]]
    ok = not differ
    report(8, ok, "criteria 1-7 byte-identical in a fresh process" if ok else f"reports differ for {differ}")
    assert ok
