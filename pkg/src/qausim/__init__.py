"""
qausim - packet-level and fluid-model study of ASM and QCN congestion control.

Packet simulator (engine, topology, cp, rp, network, trace), fluid analysis
(fluid) and experiment suites (experiments). Every run is receipted: trace
bytes are dual-hashed so re-runs can be compared with one string.
"""

__version__ = "0.1.0"

try:
    from qausim.core.receipt import StopRule, dual_hash, emit_receipt, merkle
    from qausim.core.schemas import RECEIPT_SCHEMAS, validate_receipt

    __all__ = [
        "dual_hash",
        "emit_receipt",
        "merkle",
        "StopRule",
        "validate_receipt",
        "RECEIPT_SCHEMAS",
        "__version__",
    ]
except ImportError:
    # During installation, submodules may not exist yet
    __all__ = ["__version__"]
