"""Test configuration and fixtures for the simulator and the fluid toolkit.

Fixtures: short scenarios, normalized fluid systems, seeded streams.
Receipts are silenced for every test; tests that inspect them capture
them explicitly.
"""
import io
import json

import pytest

from qausim.core.receipt import set_receipt_sink
from qausim.engine import RngStream, Simulator
from qausim.fluid import FluidSystem
from qausim.topology import Algorithm, build_dumbbell

SHORT_RUN_NS = 5_000_000


@pytest.fixture(autouse=True)
def silence_receipts():
    """Receipts default to stderr; keep test output clean."""
    set_receipt_sink(None)
    yield
    set_receipt_sink(None)


@pytest.fixture
def receipts():
    """Capture receipts as parsed dicts: receipts() returns those emitted so far."""
    buf = io.StringIO()
    set_receipt_sink(buf)

    def collected() -> list[dict]:
        return [json.loads(line) for line in buf.getvalue().splitlines() if line]

    yield collected
    set_receipt_sink(None)


@pytest.fixture
def sim() -> Simulator:
    return Simulator()


@pytest.fixture
def rng() -> RngStream:
    return RngStream(42, "test")


@pytest.fixture
def normalized_system() -> FluidSystem:
    """w=2, N=1, p=1, C=1 with a- = 0, b- = 1, a+ = 1, b+ = 0."""
    return FluidSystem(n=1, C=1.0, p=1.0, w=2.0,
                       a_plus=1.0, a_minus=0.0, b_plus=0.0, b_minus=1.0)


@pytest.fixture
def short_dumbbell():
    """Three 500 Mbps ASM flows into 1 Gbps for 5 ms."""
    return build_dumbbell(3, duration_ns=SHORT_RUN_NS)


@pytest.fixture
def short_dumbbell_qcn():
    return build_dumbbell(3, algorithm=Algorithm.QCN, duration_ns=SHORT_RUN_NS)
