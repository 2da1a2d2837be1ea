from __future__ import annotations

import math


def float_to_str(f: float) -> str:
    """Stringify a float for a filename."""
    f = float(f)
    text = str(int(f)) if f.is_integer() else str(f).replace(".", "p")
    return text.replace("-", "m")


def format_float(f: float) -> str:
    """Format a float with 17 significant digits, the sweep table precision."""
    if f is None or (isinstance(f, float) and math.isnan(f)):
        return ""
    return f"{float(f):.17g}"


def linspace(start: float, stop: float, steps: int) -> list[float]:
    """Evenly spaced values including both endpoints.

    Computed as ``start + i * step`` so that repeated runs give bitwise equal
    sweeps independent of numpy version.
    """
    if steps == 1:
        return [float(start)]
    step = (stop - start) / (steps - 1)
    values = [start + i * step for i in range(steps - 1)]
    values.append(float(stop))
    return values
