"""
This module renders a forecast CSV as a standalone SVG line chart.

The chart has a fixed 960x480 viewport, one polyline per series (actual and
predicted), labeled axes and a legend. Output depends only on the input
values, so identical input yields byte-identical SVG.
"""

import logging
import xml.etree.ElementTree as ET
from typing import List, Sequence, Tuple

import numpy as np
import pandas as pd

from utils.exceptions import DataError
from utils.file_io import atomic_write_text

WIDTH = 960
HEIGHT = 480
MARGIN_LEFT = 80
MARGIN_RIGHT = 30
MARGIN_TOP = 50
MARGIN_BOTTOM = 60

SERIES = (("actual_kwh", "actual", "#1f77b4"), ("predicted_kwh", "predicted", "#d62728"))
FORECAST_COLUMNS = ["timestamp", "actual_kwh", "predicted_kwh"]


def read_forecast_csv(path: str) -> pd.DataFrame:
    """
    Read a forecast CSV written by the forecast or eval-annual commands.

    Raises:
        DataError: If the file is unreadable, has another header or holds no rows.
    """
    try:
        frame = pd.read_csv(path, dtype={"timestamp": str})
    except pd.errors.EmptyDataError:
        raise DataError(f"{path}: forecast CSV is empty") from None
    except (OSError, pd.errors.ParserError) as e:
        raise DataError(f"cannot read forecast CSV {path}: {e}") from e
    if list(frame.columns) != FORECAST_COLUMNS:
        raise DataError(
            f"{path}: expected header {','.join(FORECAST_COLUMNS)}, got {','.join(map(str, frame.columns))}"
        )
    if frame.empty:
        raise DataError(f"{path}: forecast CSV has no data rows")
    values = frame[["actual_kwh", "predicted_kwh"]].to_numpy(dtype=np.float64)
    if not np.isfinite(values).all():
        raise DataError(f"{path}: forecast CSV holds non-finite values")
    return frame


def _fmt(value: float) -> str:
    return f"{value:.2f}"


def _scales(n: int, values: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float, float]:
    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM
    low, high = float(values.min()), float(values.max())
    if high - low < 1e-12:
        low, high = low - 0.5, high + 0.5
    xs = MARGIN_LEFT + (np.arange(n) * plot_w / (n - 1) if n > 1 else np.full(n, plot_w / 2))
    ys = MARGIN_TOP + plot_h * (high - values) / (high - low)
    return xs, ys, low, high


def _text(parent: ET.Element, x: float, y: float, label: str, anchor: str = "middle", **extra: str) -> None:
    node = ET.SubElement(parent, "text", {"x": _fmt(x), "y": _fmt(y), "text-anchor": anchor, **extra})
    node.text = label


def render_svg(frame: pd.DataFrame) -> str:
    """
    Build the SVG document for a forecast frame.

    Args:
        frame: Rows of timestamp, actual_kwh and predicted_kwh.

    Returns:
        The SVG text.
    """
    n = len(frame)
    if n == 0:
        raise DataError("cannot plot a forecast with no points")
    values = frame[["actual_kwh", "predicted_kwh"]].to_numpy(dtype=np.float64).T
    xs, ys, low, high = _scales(n, values)
    bottom = HEIGHT - MARGIN_BOTTOM
    right = WIDTH - MARGIN_RIGHT

    svg = ET.Element(
        "svg",
        {
            "xmlns": "http://www.w3.org/2000/svg",
            "width": str(WIDTH),
            "height": str(HEIGHT),
            "viewBox": f"0 0 {WIDTH} {HEIGHT}",
            "font-family": "sans-serif",
            "font-size": "12",
        },
    )
    ET.SubElement(svg, "rect", {"x": "0", "y": "0", "width": str(WIDTH), "height": str(HEIGHT), "fill": "white"})

    axes = ET.SubElement(svg, "g", {"stroke": "black", "stroke-width": "1"})
    ET.SubElement(axes, "line", {"x1": str(MARGIN_LEFT), "y1": str(bottom), "x2": str(right), "y2": str(bottom)})
    ET.SubElement(
        axes, "line", {"x1": str(MARGIN_LEFT), "y1": str(MARGIN_TOP), "x2": str(MARGIN_LEFT), "y2": str(bottom)}
    )

    labels = ET.SubElement(svg, "g", {"fill": "black"})
    _text(labels, (MARGIN_LEFT + right) / 2, HEIGHT - 15, "time")
    _text(labels, 20, (MARGIN_TOP + bottom) / 2, "kWh", transform=f"rotate(-90 20 {_fmt((MARGIN_TOP + bottom) / 2)})")
    _text(labels, MARGIN_LEFT - 8, bottom + 4, f"{low:.3f}", anchor="end")
    _text(labels, MARGIN_LEFT - 8, MARGIN_TOP + 4, f"{high:.3f}", anchor="end")
    timestamps: Sequence[str] = frame["timestamp"].astype(str).tolist()
    _text(labels, float(xs[0]), bottom + 20, timestamps[0], anchor="start" if n > 1 else "middle")
    if n > 1:
        _text(labels, float(xs[-1]), bottom + 20, timestamps[-1], anchor="end")

    for (_, name, colour), series_y in zip(SERIES, ys):
        if n > 1:
            points = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in zip(xs, series_y))
            ET.SubElement(
                svg,
                "polyline",
                {"points": points, "fill": "none", "stroke": colour, "stroke-width": "1.5", "class": name},
            )
        else:
            ET.SubElement(
                svg,
                "circle",
                {"cx": _fmt(xs[0]), "cy": _fmt(series_y[0]), "r": "4", "fill": colour, "class": name},
            )

    legend = ET.SubElement(svg, "g", {"class": "legend"})
    for row, (_, name, colour) in enumerate(SERIES):
        y = MARGIN_TOP - 30 + row * 16
        ET.SubElement(
            legend,
            "line",
            {
                "x1": str(right - 120),
                "y1": str(y),
                "x2": str(right - 95),
                "y2": str(y),
                "stroke": colour,
                "stroke-width": "3",
            },
        )
        _text(legend, right - 88, y + 4, name, anchor="start")

    return ET.tostring(svg, encoding="unicode") + "\n"


def plot(forecast_csv: str, out_svg: str) -> List[str]:
    """
    Render a forecast CSV to an SVG file.

    Args:
        forecast_csv: Input CSV with header timestamp,actual_kwh,predicted_kwh.
        out_svg: Destination SVG path.

    Returns:
        The written paths.
    """
    frame = read_forecast_csv(forecast_csv)
    atomic_write_text(out_svg, render_svg(frame))
    logging.info(f"Plotted {len(frame)} forecast points to {out_svg}")
    return [out_svg]
