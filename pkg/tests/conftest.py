from __future__ import annotations

import json

import pytest
from hypothesis import settings

import spanone
from spanone.ideals import load_ideal
from spanone.multisum import load_profile
from spanone.prover import load_system_spec

settings.register_profile("suite", deadline=None)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def rr_ideal():
    return load_ideal(spanone.fixture_path("rr.json"))


@pytest.fixture(scope="session")
def kr_ideal():
    return load_ideal(spanone.fixture_path("kr_i1.json"))


@pytest.fixture(scope="session")
def ex1_profile():
    return load_profile(spanone.fixture_path("ex1_profile.json"))


@pytest.fixture(scope="session")
def kr_profile():
    return load_profile(spanone.fixture_path("kr_profile.json"))


@pytest.fixture(scope="session")
def ex3_profile():
    return load_profile(spanone.fixture_path("ex3_profile.json"))


@pytest.fixture(scope="session")
def ex1_system():
    return load_system_spec(spanone.fixture_path("ex1_system.json"))


@pytest.fixture(scope="session")
def kr_system():
    return load_system_spec(spanone.fixture_path("kr_system.json"))


@pytest.fixture(scope="session")
def ex3_system():
    return load_system_spec(spanone.fixture_path("ex3_system.json"))


@pytest.fixture()
def run_cli(capsys):
    """Invoke the CLI in-process; returns (exit_code, stdout, trailing json)."""
    from spanone.cli import main

    def run(argv):
        code = main(argv)
        out = capsys.readouterr().out
        payload = None
        lines = [ln for ln in out.splitlines() if ln.strip()]
        if lines:
            try:
                payload = json.loads(lines[-1])
            except json.JSONDecodeError:
                payload = None
        return code, out, payload

    return run
