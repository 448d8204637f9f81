"""Web geometry: adapted frame, Chern connection scalar and curvature ladder."""

from .web_chart import (
    CurvLadder, FrameField, WebChart, check_general_position, curvature,
    evaluate_ladder, frame_derive, ladder,
)

__all__ = [
    "CurvLadder", "FrameField", "WebChart", "check_general_position",
    "curvature", "evaluate_ladder", "frame_derive", "ladder",
]
