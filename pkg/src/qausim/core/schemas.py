"""Receipt schema definitions and validation.

Constants:
    RECEIPT_SCHEMAS: Schema dicts keyed by receipt_type
    REQUIRED_FIELDS: Fields required in all receipts

Functions:
    validate_receipt: Validate receipt against schema
"""
from .receipt import StopRule


REQUIRED_FIELDS = ["receipt_type", "ts", "tenant_id", "payload_hash"]

_NUM = (int, float)

RECEIPT_SCHEMAS = {
    "scenario_load": {
        "scenario": str,
        "algorithm": str,
        "n_flows": int,
        "n_links": int,
        "seed": int,
    },
    "run": {
        "scenario": str,
        "algorithm": str,
        "seed": int,
        "events": int,
        "sim_time_ns": int,
        "wall_ms": _NUM,
        "trace_hash": str,
    },
    "metrics": {
        "scenario": str,
        "response_time_s": _NUM,
        "max_amplitude_pkts": _NUM,
        "avg_q_pkts": _NUM,
        "drain_count": int,
        "throughput_ratio": _NUM,
        "drop_count": int,
    },
    "suite": {
        "suite": str,
        "n_points": int,
        "excluded": list,
        "merkle_root": str,
    },
    "analysis": {
        "kind": str,
        "rows": int,
    },
    "anomaly": {
        "metric": str,
        "baseline": _NUM,
        "delta": _NUM,
        "classification": str,
        "action": str,
    },
}


def validate_receipt(receipt: dict) -> bool:
    """Validate receipt has required fields and matches schema.

    Raises:
        StopRule: missing field, wrong type or unknown receipt_type
    """
    if not isinstance(receipt, dict):
        raise StopRule("Receipt must be a dict")

    for field in REQUIRED_FIELDS:
        if field not in receipt:
            raise StopRule(f"Missing required field: {field}")

    receipt_type = receipt["receipt_type"]
    if receipt_type not in RECEIPT_SCHEMAS:
        raise StopRule(f"Unknown receipt_type: {receipt_type}")

    for field, expected in RECEIPT_SCHEMAS[receipt_type].items():
        if field not in receipt:
            raise StopRule(f"{receipt_type} receipt missing field: {field}")
        value = receipt[field]
        if isinstance(value, bool) and expected is not bool:
            raise StopRule(f"{receipt_type}.{field} must not be bool")
        if not isinstance(value, expected):
            raise StopRule(f"{receipt_type}.{field} has type {type(value).__name__}")

    return True
