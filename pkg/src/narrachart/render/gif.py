"""Animated GIF export: one frame per layered chart, looping forever."""

from __future__ import annotations

import io
from typing import Sequence

from PIL import Image

DEFAULT_FRAME_MS = 2000


class EmptyFrameList(ValueError):
    pass


class DimensionMismatch(ValueError):
    pass


def export_gif(frames: Sequence[bytes], frame_duration_ms: int = DEFAULT_FRAME_MS) -> bytes:
    """Encode PNG frames as a GIF89a with an infinite loop."""
    if not frames:
        raise EmptyFrameList("no frames to export")
    images = [Image.open(io.BytesIO(png)).convert("RGBA") for png in frames]
    sizes = {im.size for im in images}
    if len(sizes) > 1:
        raise DimensionMismatch(f"frame sizes differ: {sorted(sizes)}")
    quantized = [im.convert("P", palette=Image.ADAPTIVE) for im in images]
    buf = io.BytesIO()
    quantized[0].save(
        buf,
        format="GIF",
        save_all=True,
        append_images=quantized[1:],
        duration=frame_duration_ms,
        loop=0,
        disposal=2,
    )
    return buf.getvalue()
