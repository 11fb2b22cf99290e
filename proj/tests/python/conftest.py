import json
import os
import subprocess
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[2]


def _cli_path():
    env = os.environ.get("MBINV_CLI")
    if env:
        return env
    candidate = ROOT / "build" / "mbinv"
    return str(candidate) if candidate.exists() else None


@pytest.fixture(scope="session")
def schema():
    path = os.environ.get("MBINV_SCHEMA", str(ROOT / "schemas" / "mbinv-output.schema.json"))
    with open(path) as f:
        return json.load(f)


@pytest.fixture(scope="session")
def cli():
    path = _cli_path()
    if path is None:
        pytest.skip("mbinv executable not found; set MBINV_CLI")

    def run(*args, cwd=None):
        proc = subprocess.run([path, *map(str, args)], cwd=cwd, capture_output=True, text=True)
        doc = json.loads(proc.stdout) if proc.stdout.strip().startswith("{") else None
        return proc.returncode, doc, proc.stderr

    run.path = path
    return run
