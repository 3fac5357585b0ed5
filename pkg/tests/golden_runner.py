"""Runs the command-line golden cases in fresh interpreters.

Each case in ``golden/cases.json`` is executed from ``golden/inputs`` so file
arguments stay relative.  The recorded transcript holds the exit code,
stdout and stderr.  Set ``POISSON_FORGE_REGEN_GOLDEN=1`` to rewrite the
expected transcripts instead of comparing against them.
"""

from __future__ import annotations

import json
import os
import subprocess
import sys
from pathlib import Path

GOLDEN = Path(__file__).parent / "golden"
INPUTS = GOLDEN / "inputs"
EXPECTED = GOLDEN / "expected"
REGEN_ENV = "POISSON_FORGE_REGEN_GOLDEN"


def load_cases() -> list[dict]:
    return json.loads((GOLDEN / "cases.json").read_text())


def run_case(case: dict, hash_seed: str = "0") -> str:
    env = dict(os.environ, PYTHONHASHSEED=hash_seed)
    env.pop("POISSON_FORGE_DEGREE_CAP", None)
    proc = subprocess.run([sys.executable, "-m", "poisson_forge.cli", *case["argv"]], cwd=INPUTS,
                          capture_output=True, text=True, env=env, timeout=120)
    return f"exit: {proc.returncode}\n--- stdout ---\n{proc.stdout}--- stderr ---\n{proc.stderr}"


def expected_path(case: dict) -> Path:
    return EXPECTED / f"{case['name']}.txt"


def regenerating() -> bool:
    return os.environ.get(REGEN_ENV) == "1"
