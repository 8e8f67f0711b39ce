"""Rasterize the SVG subset this package emits into PNG bytes.

Only the primitives ``render_svg`` produces are supported (rect, line,
polyline, polygon, circle, text); that keeps the renderer honest without
pulling in a full SVG engine. Text is approximated with Pillow's bundled
font.
"""

from __future__ import annotations

import io
import re
import xml.etree.ElementTree as ET

from PIL import Image, ImageDraw, ImageFont

_SVG_NS = "{http://www.w3.org/2000/svg}"


def _strip_ns(tag: str) -> str:
    return tag.split("}", 1)[1] if tag.startswith("{") else tag


_NAMED = {"white": "#ffffff", "black": "#000000", "none": None}


def _color(value, opacity: float = 1.0):
    if value is None:
        return None
    value = value.strip()
    if value in _NAMED:
        value = _NAMED[value]
        if value is None:
            return None
    c = value.lstrip("#")
    if len(c) == 3:
        c = "".join(ch * 2 for ch in c)
    r, g, b = (int(c[i : i + 2], 16) for i in (0, 2, 4))
    return (r, g, b, max(0, min(255, round(opacity * 255))))


def _font(size: int):
    try:
        return ImageFont.load_default(size=size)
    except TypeError:  # older Pillow
        return ImageFont.load_default()


def _dash_segments(x1, y1, x2, y2, on=5.0, off=4.0):
    import math

    length = math.hypot(x2 - x1, y2 - y1)
    if length == 0:
        return []
    ux, uy = (x2 - x1) / length, (y2 - y1) / length
    segments = []
    pos = 0.0
    while pos < length:
        end = min(pos + on, length)
        segments.append((x1 + ux * pos, y1 + uy * pos, x1 + ux * end, y1 + uy * end))
        pos = end + off
    return segments


def render_png(svg: str, scale: float = 1.0) -> bytes:
    """Rasterize an SVG document produced by :func:`render_svg`."""
    root = ET.fromstring(svg)
    width = float(root.get("width", "800"))
    height = float(root.get("height", "450"))
    size = (max(1, round(width * scale)), max(1, round(height * scale)))
    img = Image.new("RGBA", size, (255, 255, 255, 255))
    draw = ImageDraw.Draw(img, "RGBA")

    def s(v: float) -> float:
        return v * scale

    def walk(el):
        for child in el:
            tag = _strip_ns(child.tag)
            opacity = float(child.get("opacity", "1"))
            stroke = _color(child.get("stroke"), opacity)
            fill = _color(child.get("fill"), opacity)
            sw = max(1, round(float(child.get("stroke-width", "1")) * scale))
            if tag == "rect":
                x, y = s(float(child.get("x", "0"))), s(float(child.get("y", "0")))
                w, h = s(float(child.get("width", "0"))), s(float(child.get("height", "0")))
                if w >= 0 and h >= 0:
                    draw.rectangle(
                        [x, y, x + max(w, 0), y + max(h, 0)],
                        fill=fill,
                        outline=stroke,
                        width=sw if stroke else 1,
                    )
            elif tag == "line":
                x1, y1 = s(float(child.get("x1"))), s(float(child.get("y1")))
                x2, y2 = s(float(child.get("x2"))), s(float(child.get("y2")))
                if child.get("stroke-dasharray") and stroke:
                    for seg in _dash_segments(x1, y1, x2, y2, 5 * scale, 4 * scale):
                        draw.line(seg, fill=stroke, width=sw)
                elif stroke:
                    draw.line([x1, y1, x2, y2], fill=stroke, width=sw)
            elif tag == "polyline":
                pts = [
                    (s(float(a)), s(float(b)))
                    for a, b in (p.split(",") for p in child.get("points", "").split())
                ]
                if len(pts) >= 2 and stroke:
                    draw.line(pts, fill=stroke, width=sw, joint="curve")
            elif tag == "polygon":
                pts = [
                    (s(float(a)), s(float(b)))
                    for a, b in (p.split(",") for p in child.get("points", "").split())
                ]
                if len(pts) >= 3:
                    draw.polygon(pts, fill=fill, outline=stroke)
            elif tag == "circle":
                cx, cy = s(float(child.get("cx"))), s(float(child.get("cy")))
                r = s(float(child.get("r")))
                draw.ellipse(
                    [cx - r, cy - r, cx + r, cy + r], fill=fill, outline=stroke
                )
            elif tag == "text":
                content = "".join(child.itertext())
                px = s(float(child.get("x", "0")))
                py = s(float(child.get("y", "0")))
                fs = round(float(child.get("font-size", "12")) * scale)
                font = _font(max(fs, 6))
                anchor = child.get("text-anchor", "start")
                tw = draw.textlength(content, font=font)
                if anchor == "middle":
                    px -= tw / 2
                elif anchor == "end":
                    px -= tw
                color = fill or (0, 0, 0, 255)
                draw.text((px, py - fs * 0.85), content, font=font, fill=color)
            else:
                walk(child)

    walk(root)
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()
