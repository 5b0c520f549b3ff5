"""Congestion point: switch ports and feedback frames."""
from .feedback import (
    WIRE_SIZE,
    AsmFeedback,
    FeedbackFrame,
    FrameType,
    MalformedFrame,
    QcnFeedback,
    compute_fb,
    decode_frame,
    dequantize,
    encode_frame,
    qcn_fb_scale_for,
    qf_scale_for,
    quantize,
    quantize_fb_magnitude,
)
from .port import CpMode, EnqueueResult, Packet, SwitchPort

__all__ = [
    "WIRE_SIZE",
    "AsmFeedback",
    "FeedbackFrame",
    "FrameType",
    "MalformedFrame",
    "QcnFeedback",
    "compute_fb",
    "decode_frame",
    "dequantize",
    "encode_frame",
    "qcn_fb_scale_for",
    "qf_scale_for",
    "quantize",
    "quantize_fb_magnitude",
    "CpMode",
    "EnqueueResult",
    "Packet",
    "SwitchPort",
]
