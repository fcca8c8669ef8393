import warnings

import numpy as np
import pytest
from hypothesis import settings, strategies as st

from orthospeed.chain import ChainParams, ParameterWarning

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

SITE_COUNTS = (3, 7, 13, 27)


@st.composite
def chain_params(draw, dm=None, sites=SITE_COUNTS, convention="exact"):
    return ChainParams(
        n_sites=draw(st.sampled_from(sites)),
        anisotropy=draw(st.floats(0.0, 1.0)),
        field=draw(st.floats(0.0, 1.5)),
        dm=draw(st.floats(-1.0, 1.0)) if dm is None else dm,
        coupling=draw(st.floats(0.0, 0.5)),
        time_convention=convention,
    )


def random_params(rng, dm=None, sites=SITE_COUNTS):
    return ChainParams(
        n_sites=int(rng.choice(sites)),
        anisotropy=float(rng.uniform(0, 1)),
        field=float(rng.uniform(0, 1.5)),
        dm=float(rng.uniform(-1, 1)) if dm is None else dm,
        coupling=float(rng.uniform(0, 0.5)),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True)
def _quiet_parameter_warnings():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ParameterWarning)
        yield


# acceptance outcomes, keyed by criterion number; printed once at the end of the run
ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE.setdefault(criterion, []).append((bool(ok), detail))


def acceptance_lines() -> list[str]:
    lines = []
    for n in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[n]
        ok = all(p[0] for p in parts)
        detail = "; ".join(p[1] for p in parts) if len(parts) <= 4 else (
            f"{sum(p[0] for p in parts)}/{len(parts)} sub-checks pass"
            + "".join(f"; FAIL {p[1]}" for p in parts if not p[0])
        )
        lines.append(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
    return lines


def pytest_terminal_summary(terminalreporter):
    lines = acceptance_lines()
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
