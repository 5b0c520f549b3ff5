"""Packet-level network assembly and single-scenario runs."""
from .fabric import Network
from .run import RunResult, build_network, run_scenario, stoprule_drain
from .sources import AsmSource, FlowSource, QcnSource, Sink

__all__ = [
    "Network",
    "RunResult",
    "build_network",
    "run_scenario",
    "stoprule_drain",
    "AsmSource",
    "FlowSource",
    "QcnSource",
    "Sink",
]
