"""Unit tests for receipt primitives and schemas.

Functions tested: dual_hash, stable_int, merkle, emit_receipt,
set_receipt_sink, validate_receipt
"""
import hashlib
import io
import json

import pytest

from qausim.core import (
    StopRule,
    dual_hash,
    emit_receipt,
    get_receipt_sink,
    merkle,
    set_receipt_sink,
    stable_int,
    validate_receipt,
)
from qausim.network import run_scenario


class TestDualHash:
    """sha256:blake3 strings."""

    def test_format(self):
        h = dual_hash(b"trace")
        left, right = h.split(":")
        assert len(left) == 64 and len(right) == 64
        assert left == hashlib.sha256(b"trace").hexdigest()

    def test_str_and_bytes_agree(self):
        assert dual_hash("t_s,A_bps\n") == dual_hash(b"t_s,A_bps\n")

    def test_dict_key_order(self):
        assert dual_hash({"a": 1, "b": 2}) == dual_hash({"b": 2, "a": 1})

    def test_stable_int(self):
        assert stable_int("cp.sw1->d1") == stable_int("cp.sw1->d1")
        assert stable_int("cp.sw1->d1") != stable_int("cp.sw1->s1")
        assert 0 <= stable_int("x", bits=16) < 2 ** 16


class TestMerkle:
    """Roots over trace hashes."""

    def test_empty(self):
        assert merkle([]) == dual_hash(b"empty")

    def test_single(self):
        assert merkle(["abc"]) == dual_hash("abc")

    def test_order_matters(self):
        assert merkle(["a", "b", "c"]) != merkle(["c", "b", "a"])

    def test_odd_count_duplicates_last(self):
        assert merkle(["a", "b", "c"]) == merkle(["a", "b", "c", "c"])


class TestEmit:
    """Receipt lines and the sink."""

    def test_line_written(self):
        buf = io.StringIO()
        set_receipt_sink(buf)
        receipt = emit_receipt("analysis", {"kind": "eigen", "rows": 2})
        line = json.loads(buf.getvalue())
        assert line == receipt
        assert line["tenant_id"] == "qausim"
        assert validate_receipt(line)

    def test_silenced(self):
        set_receipt_sink(None)
        assert get_receipt_sink() is None
        assert emit_receipt("analysis", {"kind": "h0", "rows": 1})["kind"] == "h0"


class TestSchemas:
    """Receipts carry the fields their type declares."""

    def test_run_receipts_validate(self, short_dumbbell, receipts):
        run_scenario(short_dumbbell)
        emitted = receipts()
        assert {r["receipt_type"] for r in emitted} >= {"run", "metrics"}
        for r in emitted:
            assert validate_receipt(r)

    def test_missing_required(self):
        with pytest.raises(StopRule):
            validate_receipt({"receipt_type": "run"})

    def test_unknown_type(self):
        receipt = emit_receipt("analysis", {"kind": "x", "rows": 0})
        receipt["receipt_type"] = "bogus"
        with pytest.raises(StopRule):
            validate_receipt(receipt)

    def test_wrong_type(self):
        receipt = emit_receipt("analysis", {"kind": "x", "rows": "many"})
        with pytest.raises(StopRule):
            validate_receipt(receipt)

    def test_bool_is_not_a_count(self):
        receipt = emit_receipt("analysis", {"kind": "x", "rows": True})
        with pytest.raises(StopRule):
            validate_receipt(receipt)
