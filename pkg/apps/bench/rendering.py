"""
Dibujos del escenario (obstáculos, metas, guía y trayectoria) y de las curvas
de costo, con reportlab.graphics. La extensión de la salida elige el formato:
``.pdf`` usa renderPDF y cualquier otra renderSVG.
"""
from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from reportlab.graphics import renderPDF, renderSVG
from reportlab.graphics.shapes import Circle, Drawing, Line, PolyLine, Polygon, Rect, String
from reportlab.lib import colors

from apps.core.exceptions import ErrorCode, PlanningError, ValidationError

logger = logging.getLogger(__name__)

SCALE = 50.0
MARGIN = 20.0
PLANNER_COLORS = {'lg': colors.HexColor('#1f77b4'), 'baseline': colors.HexColor('#d62728')}
PLANNER_LABELS = {'lg': 'LG-SST-STL', 'baseline': 'SST-STL'}
LAYER_COLORS = (colors.orange, colors.darkcyan, colors.purple, colors.brown, colors.olive, colors.teal)


def _save(drawing: Drawing, output: Union[str, Path]) -> Path:
    output = Path(output)
    try:
        output.parent.mkdir(parents=True, exist_ok=True)
        if output.suffix.lower() == '.pdf':
            renderPDF.drawToFile(drawing, str(output))
        else:
            renderSVG.drawToFile(drawing, str(output))
    except OSError as exc:
        raise PlanningError(ErrorCode.OUTPUT_IO, f"No se pudo escribir {output}: {exc}") from exc
    logger.info(f"Dibujo escrito en {output}")
    return output


def scenario_drawing(scenario, trajectory=None, lead=None) -> Drawing:
    """Construye el dibujo en coordenadas del mundo escaladas por SCALE."""
    x_min, x_max, y_min, y_max = scenario.workspace.bounds
    width = (x_max - x_min) * SCALE + 2 * MARGIN
    height = (y_max - y_min) * SCALE + 2 * MARGIN
    drawing = Drawing(width, height)

    def px(point):
        return MARGIN + (point[0] - x_min) * SCALE, MARGIN + (point[1] - y_min) * SCALE

    drawing.add(Rect(MARGIN, MARGIN, width - 2 * MARGIN, height - 2 * MARGIN,
                     strokeColor=colors.black, fillColor=None))

    for polygon in scenario.workspace.obstacles:
        points = [c for p in polygon for c in px(p)]
        drawing.add(Polygon(points, fillColor=colors.grey, strokeColor=colors.black, strokeWidth=0.5))

    for i, region in enumerate(scenario.goals):
        cx, cy = px(region.center)
        drawing.add(Circle(cx, cy, region.radius * SCALE, fillColor=colors.HexColor('#b7e4c7'),
                           strokeColor=colors.darkgreen))
        label = f"g{i}"
        if region.interval.bounded:
            label += f" [{region.interval.a:g},{region.interval.b:g}]"
        drawing.add(String(cx + region.radius * SCALE + 2, cy, label, fontSize=8))

    if lead is not None and len(lead.polyline) > 1:
        # cada sub-camino con su color; las regiones son un solo waypoint
        for span in lead.layer_spans:
            if span.is_region:
                continue
            points = [c for p in lead.polyline[span.first:span.last + 1] for c in px(p)]
            if len(points) >= 4:
                color = LAYER_COLORS[(span.layer // 2) % len(LAYER_COLORS)]
                drawing.add(PolyLine(points, strokeColor=color, strokeWidth=1, strokeDashArray=[3, 2]))

    if trajectory and len(trajectory) > 1:
        t_end = trajectory[-1].t or 1.0
        for row, following in zip(trajectory, trajectory[1:]):
            (x0, y0), (x1, y1) = px(row.state), px(following.state)
            shade = colors.linearlyInterpolatedColor(colors.blue, colors.magenta, 0.0, t_end, row.t)
            drawing.add(Line(x0, y0, x1, y1, strokeColor=shade, strokeWidth=1.5))

    sx, sy = px(scenario.start)
    drawing.add(Circle(sx, sy, 3, fillColor=colors.red, strokeColor=colors.red))
    heading = scenario.start[2]
    drawing.add(Line(sx, sy, sx + 12 * math.cos(heading), sy + 12 * math.sin(heading),
                     strokeColor=colors.red))
    drawing.add(String(MARGIN, height - MARGIN / 2 - 4, scenario.name, fontSize=10))
    return drawing


def render(scenario, output: Union[str, Path], trajectory=None, lead=None) -> Path:
    """Escribe el escenario, y opcionalmente la guía y la trayectoria."""
    return _save(scenario_drawing(scenario, trajectory=trajectory, lead=lead), output)


def _finite(value) -> bool:
    return value is not None and math.isfinite(value)


def _steps(points: Sequence[Tuple[float, float]]) -> List[float]:
    """Coordenadas planas de una función escalón por la izquierda."""
    flat: List[float] = []
    for x, y in points:
        if flat:
            flat.extend([x, flat[-1]])
        flat.extend([x, y])
    return flat


def plot_cost_curves(curves: Dict[str, Dict[str, Sequence[Optional[float]]]], output: Union[str, Path],
                     title: str = '', width: float = 480.0, height: float = 300.0) -> Path:
    """
    Media del mejor costo en el tiempo por planificador, con banda mínimo/máximo.

    Args:
        curves: {planificador: {'time', 'mean', 'min', 'max'}} como en
            summary.json; los costos infinitos o None no se dibujan
        output: Archivo .svg o .pdf
    """
    if not curves:
        raise ValidationError(ErrorCode.VALIDATION_ERROR, "No hay curvas para graficar")
    drawing = Drawing(width, height)
    left, bottom, right, top = 50.0, 35.0, width - 15.0, height - 25.0
    finite = [
        v for curve in curves.values() for key in ('mean', 'max') for v in curve.get(key, []) if _finite(v)
    ]
    times = [t for curve in curves.values() for t in curve.get('time', [])]
    t_max = max(times) if times else 1.0
    c_max = max(finite) if finite else 1.0
    c_max = c_max if c_max > 0 else 1.0

    def px(t, c):
        return left + (right - left) * t / (t_max or 1.0), bottom + (top - bottom) * c / c_max

    drawing.add(Line(left, bottom, right, bottom, strokeColor=colors.black))
    drawing.add(Line(left, bottom, left, top, strokeColor=colors.black))
    drawing.add(String((left + right) / 2, 8, 'tiempo [s]', fontSize=9, textAnchor='middle'))
    drawing.add(String(left, top + 8, f"costo (máx {c_max:.3g})", fontSize=9))
    if title:
        drawing.add(String(right, top + 8, title, fontSize=9, textAnchor='end'))

    for k, (planner, curve) in enumerate(sorted(curves.items())):
        color = PLANNER_COLORS.get(planner, colors.black)
        time = curve.get('time', [])
        band = [
            (px(t, lo), px(t, hi))
            for t, lo, hi in zip(time, curve.get('min', []), curve.get('max', []))
            if _finite(lo) and _finite(hi)
        ]
        if len(band) > 1:
            upper = _steps([hi for _, hi in band])
            lower = _steps([lo for lo, _ in band])
            pairs = list(zip(lower[::2], lower[1::2]))
            outline = upper + [c for x, y in reversed(pairs) for c in (x, y)]
            drawing.add(Polygon(outline, fillColor=color, fillOpacity=0.2, strokeColor=None, strokeWidth=0))
        mean = [px(t, c) for t, c in zip(time, curve.get('mean', [])) if _finite(c)]
        if len(mean) > 1:
            drawing.add(PolyLine(_steps(mean), strokeColor=color, strokeWidth=1.5))
        drawing.add(String(right - 90, top - 12 * (k + 1), PLANNER_LABELS.get(planner, planner),
                           fontSize=8, fillColor=color))
    return _save(drawing, output)


def plot_summary(summary: Dict, output_dir: Union[str, Path]) -> Iterable[Path]:
    """Una figura de curvas por escenario a partir de summary.json."""
    written = []
    for scenario, planners in sorted(summary.get('results', {}).items()):
        curves = {planner: data['curves'] for planner, data in planners.items()}
        written.append(plot_cost_curves(curves, Path(output_dir) / f"{scenario}__cost.svg", title=scenario))
    return written
