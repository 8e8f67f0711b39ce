from .palette import Palette, StyledChart, apply_palette, desaturate, load_palette
from .place import (
    ArrowLine,
    Circle,
    HLine,
    PlacedOverlay,
    PlacementOverrides,
    Style,
    TargetNotInLayout,
    TextBox,
    VLine,
    place_overlays,
)
from .specs import OverlayKind, OverlaySpec, assign_overlay_ids, correspondence, overlays_for

__all__ = [
    "ArrowLine",
    "Circle",
    "HLine",
    "OverlayKind",
    "OverlaySpec",
    "Palette",
    "PlacedOverlay",
    "PlacementOverrides",
    "Style",
    "StyledChart",
    "TargetNotInLayout",
    "TextBox",
    "VLine",
    "apply_palette",
    "assign_overlay_ids",
    "correspondence",
    "desaturate",
    "load_palette",
    "overlays_for",
    "place_overlays",
]
