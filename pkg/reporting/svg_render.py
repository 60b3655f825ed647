# reporting/svg_render.py
"""
Статические SVG-рисунки: двумерные разбиения, осевые сечения трёхмерных и
частичные замощения. Вывод детерминирован: координаты печатаются с
фиксированной точностью, порядок элементов совпадает с порядком кусков.
"""

import logging
from typing import Iterable, List, Optional, Sequence, Tuple

from jinja2 import Environment

from geometry.errors import DomainError
from geometry.partitions import LocalPartition, slice_partition
from geometry.rects import HalfRect
from templates import (FILL_CORNER_TILE, FILL_HIGHLIGHT, FILL_PLAIN, FILL_REQUIRED, FILL_TILE, SVG_MARGIN,
                       SVG_PARTITION, SVG_PIXELS_PER_UNIT, SVG_TILING)

logger = logging.getLogger(__name__)

_env = Environment(autoescape=True, keep_trailing_newline=True)
_partition_template = _env.from_string(SVG_PARTITION)
_tiling_template = _env.from_string(SVG_TILING)


def _fmt(value: float) -> str:
    return f'{value:.3f}'.rstrip('0').rstrip('.')


class _Canvas:
    """Перевод полуединиц окна в пиксели; ось y направлена вверх."""

    def __init__(self, window: HalfRect):
        self.window = window
        self.scale = SVG_PIXELS_PER_UNIT / 2
        self.width = 2 * SVG_MARGIN + window.sides[0] * self.scale
        self.height = 2 * SVG_MARGIN + window.sides[1] * self.scale

    def x(self, v: float) -> float:
        return SVG_MARGIN + (v - self.window.lo[0]) * self.scale

    def y(self, v: float) -> float:
        return SVG_MARGIN + (self.window.hi[1] - v) * self.scale

    def rect(self, r: HalfRect, fill: str) -> dict:
        return {'x': _fmt(self.x(r.lo[0])), 'y': _fmt(self.y(r.hi[1])),
                'w': _fmt(r.sides[0] * self.scale), 'h': _fmt(r.sides[1] * self.scale), 'fill': fill}


def slice_indexed(partition: LocalPartition, axis: int, level: int) -> Tuple[LocalPartition, List[int]]:
    """Сечение вместе с номерами исходных кусков, попавших в него."""
    sliced = slice_partition(partition, axis, level)
    kept = [i for i, p in enumerate(partition.pieces) if p.lo[axis] < level < p.hi[axis]]
    return sliced, kept


def render_svg(partition: LocalPartition, axis: Optional[int] = None, level: Optional[int] = None,
               highlight: Iterable[int] = (), required: Iterable[int] = (),
               points: Sequence[Sequence[int]] = (), title: str = '') -> str:
    """
    SVG разбиения. Для n = 3 нужно сечение (axis, level) на высоте, не
    являющейся уровнем; highlight и required - номера исходных кусков,
    points - точки в полуединицах исходного пространства.
    """
    if partition.n == 3:
        if axis is None or level is None:
            raise DomainError("render_svg: для трёхмерного разбиения нужно сечение axis/level")
        flat, kept = slice_indexed(partition, axis, level)
        points = [tuple(c for i, c in enumerate(p) if i != axis) for p in points if p[axis] == level]
    elif partition.n == 2:
        if axis is not None or level is not None:
            raise DomainError("render_svg: двумерное разбиение не режется")
        flat, kept = partition, list(range(len(partition.pieces)))
    else:
        raise DomainError(f"render_svg: поддерживаются n = 2 и n = 3, получено n = {partition.n}")

    highlight, required = set(highlight), set(required)
    canvas = _Canvas(flat.window)
    rects = []
    for index, piece in zip(kept, flat.pieces):
        fill = FILL_HIGHLIGHT if index in highlight else FILL_REQUIRED if index in required else FILL_PLAIN
        rects.append(canvas.rect(piece, fill))
    window = canvas.rect(flat.window, 'none')
    dots = [{'x': _fmt(canvas.x(p[0])), 'y': _fmt(canvas.y(p[1]))} for p in points]
    svg = _partition_template.render(width=_fmt(canvas.width), height=_fmt(canvas.height), title=title,
                                     stroke=1, rects=rects, window=window, points=dots,
                                     radius=_fmt(canvas.scale / 2))
    logger.debug(f"SVG: {len(rects)} прямоугольников, {len(dots)} точек")
    return svg


def render_tiling(tiling, title: str = '') -> str:
    """Плоское частичное замощение; угловые плитки выделены."""
    if tiling.dim != 2:
        raise DomainError("render_tiling: рисуются только плоские замощения")
    rects = [tiling.tile_rect(c) for c in tiling.centers]
    window = HalfRect((min(r.lo[0] for r in rects), min(r.lo[1] for r in rects)),
                      (max(r.hi[0] for r in rects), max(r.hi[1] for r in rects)))
    canvas = _Canvas(window)
    corners = {c for c in tiling.centers if all(abs(v) == tiling.reach for v in c)}
    tiles = [canvas.rect(r, FILL_CORNER_TILE if c in corners else FILL_TILE) for c, r in zip(tiling.centers, rects)]
    origin = {'x': _fmt(canvas.x(0)), 'y': _fmt(canvas.y(0))}
    return _tiling_template.render(width=_fmt(canvas.width), height=_fmt(canvas.height), title=title,
                                   stroke=0.5, origin=origin, tiles=tiles)


# --- Встроенные рисунки ---

FIXTURES = ('obstruction', 'extend2d-example', 't2')


def render_fixture(name: str) -> str:
    """Рисунки для проверки вывода: сечение препятствия, пример продолжения, T2 при s = 1."""
    from services.extension import example_instance_2d, extend_2d, obstruction_instance
    from services.gadgets import tiling_t2

    if name == 'obstruction':
        instance = obstruction_instance(3)
        partition = LocalPartition(instance.window, instance.required)
        # x_3 = 1/2
        return render_svg(partition, axis=2, level=1, required=range(len(instance.required)),
                          title='obstruction, x3 = 1/2')
    if name == 'extend2d-example':
        instance = example_instance_2d()
        partition = extend_2d(instance)
        required = [i for i, p in enumerate(partition.pieces) if p in instance.required]
        return render_svg(partition, required=required, title='extend2d example')
    if name == 't2':
        return render_tiling(tiling_t2(1), title='T2, s = 1')
    raise DomainError(f"render_fixture: неизвестный рисунок {name!r}, доступны {', '.join(FIXTURES)}")
