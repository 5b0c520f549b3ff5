"""Receipt primitives shared by every qausim module.

Functions:
    dual_hash: SHA256:BLAKE3 dual-hash format
    emit_receipt: Emit a receipt line to the receipt sink
    set_receipt_sink: Redirect (or silence) receipt output
    merkle: Compute Merkle root from item list
    StopRule: Exception for fatal logic violations
"""
import hashlib
import json
import sys
from datetime import datetime, timezone
from typing import TextIO

try:
    import blake3
    HAS_BLAKE3 = True
except ImportError:
    HAS_BLAKE3 = False


class StopRule(Exception):
    """Raised when a stoprule triggers. Never catch silently."""
    pass


_UNSET = object()
_sink: TextIO | None | object = _UNSET


def set_receipt_sink(stream: TextIO | None) -> None:
    """Send receipts to `stream`; None silences them."""
    global _sink
    _sink = stream


def get_receipt_sink() -> TextIO | None:
    """Current sink. Defaults to stderr so stdout stays free for CSV."""
    if _sink is _UNSET:
        return sys.stderr
    return _sink  # type: ignore[return-value]


def dual_hash(data: bytes | str | dict) -> str:
    """Compute dual hash in format 'sha256hex:blake3hex'.

    If blake3 unavailable, returns 'sha256hex:sha256hex'.

    Args:
        data: Bytes, string, or dict to hash

    Returns:
        String in format 'sha256hex:blake3hex' (both 64 hex chars)
    """
    if isinstance(data, dict):
        data = json.dumps(data, sort_keys=True, separators=(",", ":"))
    if isinstance(data, str):
        data = data.encode("utf-8")

    sha256_hex = hashlib.sha256(data).hexdigest()

    if HAS_BLAKE3:
        blake3_hex = blake3.blake3(data).hexdigest()
    else:
        blake3_hex = sha256_hex

    return f"{sha256_hex}:{blake3_hex}"


def stable_int(name: str, bits: int = 32) -> int:
    """Platform-independent integer derived from a name (for RNG stream keys)."""
    return int(dual_hash(name)[: bits // 4], 16)


def emit_receipt(receipt_type: str, data: dict, tenant_id: str = "qausim") -> dict:
    """Emit a receipt with standard required fields.

    Writes one sorted-key JSON line to the receipt sink and flushes.

    Args:
        receipt_type: scenario_load, run, metrics, suite, analysis, anomaly
        data: Receipt payload data (JSON-serializable)
        tenant_id: Tenant identifier

    Returns:
        Complete receipt dict with receipt_type, ts, tenant_id, payload_hash
    """
    tenant_id = data.get("tenant_id", tenant_id)

    payload_bytes = json.dumps(data, sort_keys=True, default=str).encode("utf-8")
    payload_hash = dual_hash(payload_bytes)

    receipt = {
        "receipt_type": receipt_type,
        "ts": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
        "tenant_id": tenant_id,
        "payload_hash": payload_hash,
        **data
    }

    sink = get_receipt_sink()
    if sink is not None:
        print(json.dumps(receipt, sort_keys=True, default=str), file=sink, flush=True)

    return receipt


def merkle(items: list) -> str:
    """Compute Merkle root from list of items.

    - Empty list: return dual_hash(b"empty")
    - Strings are hashed as-is, other items as sorted-key JSON
    - Odd count: duplicate last hash
    - Pairwise combine until single root
    """
    if not items:
        return dual_hash(b"empty")

    hashes = [
        dual_hash(item if isinstance(item, str) else json.dumps(item, sort_keys=True))
        for item in items
    ]

    while len(hashes) > 1:
        if len(hashes) % 2 == 1:
            hashes.append(hashes[-1])

        hashes = [
            dual_hash((hashes[i] + hashes[i + 1]).encode("utf-8"))
            for i in range(0, len(hashes), 2)
        ]

    return hashes[0]
