"""Feedback frames, congestion measures and quantization.

Wire layout (network byte order, 11 bytes):
    cpid   uint32
    dst    uint32
    type   uint8    1 = ASM, 2 = QCN
    payload 2 bytes ASM: qf int8, dq int8 / QCN: |fb| uint8, pad
"""
import math
import struct
from dataclasses import dataclass
from enum import IntEnum

from qausim.core.constants import QCN_FB_MAX_CODE, QUANT_MAX_CODE, QUANT_MIN_CODE

_WIRE_ASM = struct.Struct(">IIBbb")
_WIRE_QCN = struct.Struct(">IIBBx")
WIRE_SIZE = _WIRE_ASM.size


class FrameType(IntEnum):
    ASM = 1
    QCN = 2


class MalformedFrame(ValueError):
    """Frame bytes or fields outside the documented layout."""


@dataclass(frozen=True)
class AsmFeedback:
    qf_code: int
    dq_code: int


@dataclass(frozen=True)
class QcnFeedback:
    fb_code: int  # magnitude of negative F_b, 1..63


@dataclass(frozen=True)
class FeedbackFrame:
    cpid: int
    dst: int
    payload: AsmFeedback | QcnFeedback

    @property
    def frame_type(self) -> FrameType:
        return FrameType.ASM if isinstance(self.payload, AsmFeedback) else FrameType.QCN


def compute_fb(qf: float, dq: float, w: float) -> float:
    """F_b = -Q_f - w*dQ. Negative means congested."""
    return -qf - w * dq


def quantize(value: float, scale: float) -> int:
    """Round value/scale half-up and saturate into the signed 8-bit range."""
    if scale <= 0:
        raise ValueError(f"quantization scale must be positive, got {scale}")
    code = math.floor(value / scale + 0.5)
    return max(QUANT_MIN_CODE, min(QUANT_MAX_CODE, code))


def dequantize(code: int, scale: float) -> float:
    return code * scale


def quantize_fb_magnitude(fb: float, scale: float) -> int:
    """6-bit magnitude code for a negative F_b, never 0 for a congested sample."""
    if scale <= 0:
        raise ValueError(f"quantization scale must be positive, got {scale}")
    code = math.floor(abs(fb) / scale + 0.5)
    return max(1, min(QCN_FB_MAX_CODE, code))


def qf_scale_for(buffer_bytes: int, packet_size: int) -> float:
    """Packets per Q_f code: 1 until the buffer holds more than 127 packets."""
    max_packets = buffer_bytes / packet_size
    return float(max(1, math.ceil(max_packets / QUANT_MAX_CODE)))


def qcn_fb_scale_for(q0_packets: float, w: float) -> float:
    """Packets per |F_b| code so that q0*(1+2w) spans the 6-bit range."""
    return max(1.0, q0_packets * (2 * w + 1) / QCN_FB_MAX_CODE)


def encode_frame(frame: FeedbackFrame) -> bytes:
    payload = frame.payload
    if isinstance(payload, AsmFeedback):
        return _WIRE_ASM.pack(frame.cpid, frame.dst, FrameType.ASM, payload.qf_code, payload.dq_code)
    return _WIRE_QCN.pack(frame.cpid, frame.dst, FrameType.QCN, payload.fb_code)


def decode_frame(data: bytes) -> FeedbackFrame:
    """Inverse of encode_frame.

    Raises:
        MalformedFrame: wrong length, unknown type or out-of-range |F_b|
    """
    if len(data) != WIRE_SIZE:
        raise MalformedFrame(f"frame must be {WIRE_SIZE} bytes, got {len(data)}")
    frame_type = data[8]
    if frame_type == FrameType.ASM:
        cpid, dst, _, qf, dq = _WIRE_ASM.unpack(data)
        return FeedbackFrame(cpid, dst, AsmFeedback(qf, dq))
    if frame_type == FrameType.QCN:
        cpid, dst, _, fb = _WIRE_QCN.unpack(data)
        if not 1 <= fb <= QCN_FB_MAX_CODE:
            raise MalformedFrame(f"QCN |F_b| code {fb} outside 1..{QCN_FB_MAX_CODE}")
        return FeedbackFrame(cpid, dst, QcnFeedback(fb))
    raise MalformedFrame(f"unknown frame type {frame_type}")
