"""Core subpackage: receipts, schemas and constants."""
from .receipt import (
    StopRule,
    dual_hash,
    emit_receipt,
    get_receipt_sink,
    merkle,
    set_receipt_sink,
    stable_int,
)
from .schemas import RECEIPT_SCHEMAS, REQUIRED_FIELDS, validate_receipt

__all__ = [
    "StopRule",
    "dual_hash",
    "emit_receipt",
    "get_receipt_sink",
    "merkle",
    "set_receipt_sink",
    "stable_int",
    "RECEIPT_SCHEMAS",
    "REQUIRED_FIELDS",
    "validate_receipt",
]
