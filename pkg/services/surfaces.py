# services/surfaces.py
"""
Максимальные и виртуальные максимальные поверхности локального разбиения,
рост цепочки поверхностей, проверка «прямоугольности» области и поиск
отрезка на гранях разбиения.

Уровни берутся по оси axis (по умолчанию последней). Поверхности хранятся
в координатах проекции, из которой ось axis выброшена.
"""

import asyncio
import logging
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from scipy import ndimage

from geometry.errors import DomainError, OracleFailure
from geometry.partitions import (LocalPartition, cell_axes, cell_points, coverage_grid,
                                 stats_at_points, union_equal)
from geometry.rects import GridPoint, HalfRect, bounding_box
from reporting.manifest import SuiteReport

# Настраиваем логирование
logging.basicConfig(level=logging.INFO, format='%(asctime)s - %(levelname)s - %(message)s')


class Config:
    """Конфигурация службы поверхностей."""
    # Размерности перечисленных минимальных разбиений для проверки поверхностей
    ENUMERATED_DIMENSIONS = (3, 4)
    # Окна периодических разбиений (полуединицы)
    PERIODIC_WINDOWS = {3: 24, 4: 12}
    # Окна для поиска отрезка: b = 32 и b = 64 вещественных, d = 2
    SEGMENT_WINDOWS = (64, 128)
    SEGMENT_D = 4
    # До какого числа кусков сверять найденный отрезок с полным перебором
    SCAN_MAX_PIECES = 400
    MAX_CHAIN_STEPS = 10_000


def _axis(partition: LocalPartition, axis: Optional[int]) -> int:
    axis = partition.n - 1 if axis is None else axis
    if not 0 <= axis < partition.n:
        raise DomainError(f"Ось уровней {axis} вне 0..{partition.n - 1}")
    if partition.n < 2:
        raise DomainError("Поверхности определены для n ≥ 2")
    return axis


def _original_axis(axis: int, projected: int) -> int:
    """Номер исходной оси для оси проекции (ось axis выброшена)."""
    return projected if projected < axis else projected + 1


# --- Уровни ---

def levels(partition: LocalPartition, axis: Optional[int] = None) -> List[int]:
    """Верхние уровни кусков строго внутри окна."""
    axis = _axis(partition, axis)
    lo, hi = partition.window.lo[axis], partition.window.hi[axis]
    return sorted({p.hi[axis] for p in partition.pieces if lo < p.hi[axis] < hi})


def lower_levels(partition: LocalPartition, axis: Optional[int] = None) -> List[int]:
    axis = _axis(partition, axis)
    lo, hi = partition.window.lo[axis], partition.window.hi[axis]
    return sorted({p.lo[axis] for p in partition.pieces if lo < p.lo[axis] < hi})


def pieces_below(partition: LocalPartition, d: int, axis: int) -> List[HalfRect]:
    """P_{d,-}: куски с верхним уровнем d."""
    return [p for p in partition.pieces if p.hi[axis] == d]


def pieces_above(partition: LocalPartition, d: int, axis: int) -> List[HalfRect]:
    """P_{d,+}: куски с нижним уровнем d."""
    return [p for p in partition.pieces if p.lo[axis] == d]


@dataclass(frozen=True)
class Surface:
    level: int
    region: Tuple[HalfRect, ...]
    kind: str = 'maximal'
    d1: Optional[int] = None
    d2: Optional[int] = None

    @property
    def rect(self) -> Optional[HalfRect]:
        return is_box_like(self.region)[1]

    def to_json(self) -> Dict:
        data = {'level': self.level, 'kind': self.kind, 'region': [b.to_json() for b in self.region]}
        if self.d1 is not None:
            data.update(d1=self.d1, d2=self.d2)
        return data


def _share_face(a: HalfRect, b: HalfRect) -> bool:
    """Прямоугольники примыкают по куску грани коразмерности 1 (или перекрываются)."""
    if a.interiors_overlap(b):
        return True
    for i in range(a.n):
        if a.hi[i] == b.lo[i] or b.hi[i] == a.lo[i]:
            if all(max(a.lo[k], b.lo[k]) < min(a.hi[k], b.hi[k]) for k in range(a.n) if k != i):
                return True
    return False


def _components(boxes: Sequence[HalfRect]) -> List[Tuple[HalfRect, ...]]:
    graph = nx.Graph()
    graph.add_nodes_from(range(len(boxes)))
    for i in range(len(boxes)):
        for k in range(i + 1, len(boxes)):
            if _share_face(boxes[i], boxes[k]):
                graph.add_edge(i, k)
    components = [tuple(sorted(boxes[i] for i in c)) for c in nx.connected_components(graph)]
    return sorted(components)


def maximal_surfaces(partition: LocalPartition, d: int, axis: Optional[int] = None) -> List[Surface]:
    """Компоненты объединения π(P_{d,-}) со связной внутренностью."""
    axis = _axis(partition, axis)
    if d not in levels(partition, axis):
        raise DomainError(f"maximal_surfaces: {d} не является уровнем")
    footprints = [p.project(axis) for p in pieces_below(partition, d, axis)]
    return [Surface(d, region) for region in _components(footprints)]


# --- Прямоугольность области ---

def is_box_like(region: Sequence[HalfRect]) -> Tuple[bool, Optional[HalfRect]]:
    """
    Локальный критерий: в окрестности каждой вершины решётки область
    выглядит как произведение полуинтервалов; плюс связность внутренности.
    При успехе возвращает сам прямоугольник.
    """
    boxes = [b for b in region if b.is_full]
    if not boxes:
        return False, None
    k = boxes[0].n
    coords = [np.array(sorted({v for b in boxes for v in (b.lo[i], b.hi[i])}), dtype=np.int64) for i in range(k)]
    covered = coverage_grid(boxes, coords)
    padded = np.pad(covered, 1, constant_values=False)
    windows = sliding_window_view(padded, (2,) * k)
    pattern = np.ones(windows.shape, dtype=bool)
    for i in range(k):
        others = tuple(k + a for a in range(k) if a != i)
        pattern = pattern & windows.any(axis=others, keepdims=True)
    if not np.array_equal(pattern, windows):
        return False, None
    _, count = ndimage.label(covered)
    if count != 1:
        return False, None
    return True, bounding_box(boxes)


# --- Виртуальные поверхности ---

def _open_meets_boundary(footprint: HalfRect, m: HalfRect) -> bool:
    """Открытый ящик Int(footprint) пересекает ∂M."""
    overlap = all(a < e and b > c for a, b, c, e in zip(footprint.lo, footprint.hi, m.lo, m.hi))
    inside = all(c <= a and b <= e for a, b, c, e in zip(footprint.lo, footprint.hi, m.lo, m.hi))
    return overlap and not inside


def _check_rect(partition: LocalPartition, m: HalfRect, axis: int):
    if m.n != partition.n - 1 or not m.is_full:
        raise DomainError(f"Поверхность {m} не является полноразмерным прямоугольником R^{partition.n - 1}")


def respects(partition: LocalPartition, m: HalfRect, d1: int, d2: int, axis: Optional[int] = None) -> bool:
    """∂M × [d1, d2] ⊆ ⋃∂P."""
    axis = _axis(partition, axis)
    _check_rect(partition, m, axis)
    return not any(p.lo[axis] < d2 and p.hi[axis] > d1 and _open_meets_boundary(p.project(axis), m)
                   for p in partition.pieces)


def virtual_span(partition: LocalPartition, m: HalfRect, d1: int, axis: Optional[int] = None) -> int:
    """Наибольшее d2, при котором разбиение уважает M от d1 до d2."""
    axis = _axis(partition, axis)
    _check_rect(partition, m, axis)
    bottom, top = partition.window.lo[axis], partition.window.hi[axis]
    if not bottom <= d1 < top:
        raise DomainError(f"virtual_span: уровень {d1} вне [{bottom}, {top})")
    blocking = [p for p in partition.pieces if p.hi[axis] > d1 and _open_meets_boundary(p.project(axis), m)]
    if any(p.lo[axis] < d1 for p in blocking):
        raise DomainError(f"virtual_span: разбиение не уважает {m} на уровне {d1}")
    d2 = min((p.lo[axis] for p in blocking), default=top)
    if d2 == d1:
        raise DomainError(f"virtual_span: {m} не уважается выше уровня {d1}")
    return d2


def virtual_span_down(partition: LocalPartition, m: HalfRect, d2: int, axis: Optional[int] = None) -> int:
    """Наименьшее d1, при котором разбиение уважает M от d1 до d2."""
    axis = _axis(partition, axis)
    _check_rect(partition, m, axis)
    bottom, top = partition.window.lo[axis], partition.window.hi[axis]
    if not bottom < d2 <= top:
        raise DomainError(f"virtual_span_down: уровень {d2} вне ({bottom}, {top}]")
    blocking = [p for p in partition.pieces if p.lo[axis] < d2 and _open_meets_boundary(p.project(axis), m)]
    if any(p.hi[axis] > d2 for p in blocking):
        raise DomainError(f"virtual_span_down: разбиение не уважает {m} на уровне {d2}")
    d1 = max((p.hi[axis] for p in blocking), default=bottom)
    if d1 == d2:
        raise DomainError(f"virtual_span_down: {m} не уважается ниже уровня {d2}")
    return d1


def vms_interval(partition: LocalPartition, surface: Surface, axis: Optional[int] = None) -> Tuple[int, int]:
    """(d1, d2) для максимальной поверхности-прямоугольника; d1 < level < d2."""
    rect = surface.rect
    if rect is None:
        raise DomainError(f"vms_interval: поверхность на уровне {surface.level} не прямоугольник")
    return (virtual_span_down(partition, rect, surface.level, axis),
            virtual_span(partition, rect, surface.level, axis))


# --- Рост поверхностей ---

@dataclass(frozen=True)
class GrowthStep:
    case: str                # 'maximal' или 'virtual'
    before: HalfRect
    after: HalfRect
    level: int               # d2
    span: Optional[int]      # d3 для случая (ii)
    grown_axes: Tuple[int, ...]


def _grown_axes(before: HalfRect, after: HalfRect) -> Tuple[int, ...]:
    return tuple(i for i in range(before.n) if (before.lo[i], before.hi[i]) != (after.lo[i], after.hi[i]))


def _region_contains(region: Sequence[HalfRect], rect: HalfRect) -> bool:
    return union_equal(tuple(region) + (rect,), tuple(region))


def grow_surface(partition: LocalPartition, m1: HalfRect, d1: int, d2: int,
                 axis: Optional[int] = None) -> GrowthStep:
    """Следующая поверхность цепочки: максимальная на уровне d2 либо виртуальная от d2 до d3."""
    axis = _axis(partition, axis)
    if virtual_span(partition, m1, d1, axis) != d2:
        raise DomainError(f"grow_surface: {d2} не наибольший уровень для {m1} от {d1}")
    if d2 >= partition.window.hi[axis]:
        raise DomainError("grow_surface: поверхность уже доходит до верха окна")

    surfaces = maximal_surfaces(partition, d2, axis)
    containing = [s for s in surfaces if _region_contains(s.region, m1) and not union_equal(s.region, (m1,))]
    if len(containing) > 1:
        raise OracleFailure(f"grow_surface: несколько максимальных поверхностей содержат {m1}")
    if containing:
        ok, rect = is_box_like(containing[0].region)
        if not ok:
            raise OracleFailure(f"grow_surface: максимальная поверхность на уровне {d2} не прямоугольник")
        return GrowthStep('maximal', m1, rect, d2, None, _grown_axes(m1, rect))

    meeting = [s for s in surfaces if any(b.interiors_overlap(m1) for b in s.region)]
    region = (m1,) + tuple(b for s in meeting for b in s.region)
    ok, rect = is_box_like(region)
    if not ok or rect == m1:
        raise OracleFailure(f"grow_surface: на уровне {d2} нет продолжения {m1}")
    grown = _grown_axes(m1, rect)
    if len(grown) != 1:
        raise OracleFailure(f"grow_surface: {m1} → {rect} растёт по осям {grown}")
    try:
        d3 = virtual_span(partition, rect, d2, axis)
    except DomainError as e:
        raise OracleFailure(f"grow_surface: {rect} не уважается выше {d2}: {e}")
    return GrowthStep('virtual', m1, rect, d2, d3, grown)


@dataclass(frozen=True)
class ChainStep:
    rect: HalfRect
    d1: int
    d2: int
    case: str = 'start'

    def to_json(self) -> Dict:
        return {'level': self.d1, 'd1': self.d1, 'd2': self.d2, 'rect': self.rect.to_json(), 'case': self.case}


@dataclass
class SurfaceChain:
    axis: int
    steps: List[ChainStep] = field(default_factory=list)

    def to_json(self) -> List[Dict]:
        return [s.to_json() for s in self.steps]

    def increases(self) -> List[Tuple[int, ...]]:
        """Приросты длин сторон между соседними поверхностями."""
        return [tuple(b - a for a, b in zip(prev.rect.sides, nxt.rect.sides))
                for prev, nxt in zip(self.steps, self.steps[1:])]

    def is_monotone(self) -> bool:
        levels_ok = all(a.d1 < b.d1 for a, b in zip(self.steps, self.steps[1:]))
        growth_ok = all(a.rect != b.rect and b.rect.contains_rect(a.rect) for a, b in zip(self.steps, self.steps[1:]))
        return levels_ok and growth_ok


def surface_chain(partition: LocalPartition, start: HalfRect, d1: int, axis: Optional[int] = None,
                  max_steps: int = Config.MAX_CHAIN_STEPS) -> SurfaceChain:
    """Цепочка M_1 ⊊ M_2 ⊊ … до верха окна."""
    axis = _axis(partition, axis)
    top = partition.window.hi[axis]
    chain = SurfaceChain(axis)
    rect, low, case = start, d1, 'start'
    for _ in range(max_steps):
        high = virtual_span(partition, rect, low, axis)
        chain.steps.append(ChainStep(rect, low, high, case))
        if high >= top:
            return chain
        step = grow_surface(partition, rect, low, high, axis)
        rect, low, case = step.after, high, step.case
    raise OracleFailure(f"surface_chain: цепочка не завершилась за {max_steps} шагов")


# --- Отрезки на гранях ---

@dataclass(frozen=True)
class Segment:
    """Отрезок [start, start + length·e_axis] на гранях с нормалью e_face_axis."""
    start: GridPoint
    axis: int
    length: int
    face_axis: int
    source: str = 'scan'

    @property
    def end(self) -> GridPoint:
        return tuple(c + self.length if i == self.axis else c for i, c in enumerate(self.start))

    def to_json(self) -> Dict:
        return {'start': list(self.start), 'axis': self.axis, 'length': self.length,
                'face_axis': self.face_axis, 'source': self.source}


def segment_bound_holds(length: int, b: int, d: int, n: int) -> bool:
    """length ≥ √(bd)/(n-1) без извлечения корня (все величины в полуединицах)."""
    return length * length * (n - 1) ** 2 >= b * d


def segment_on_faces(partition: LocalPartition, segment: Segment) -> bool:
    """Каждая точка отрезка лежит на грани с нормалью e_face_axis некоторого куска."""
    j, i = segment.axis, segment.face_axis
    if i == j:
        raise DomainError("segment_on_faces: направление и нормаль совпадают")
    window = partition.window
    if not (window.contains(segment.start) and window.contains(segment.end)):
        return False
    a, b = segment.start[j], segment.end[j]
    values = np.array(sorted({c for p in partition.pieces for c in (p.lo[j], p.hi[j]) if a <= c <= b} | {a, b}),
                      dtype=np.int64)
    along = np.unique(np.concatenate([2 * values, values[:-1] + values[1:]]))
    points = np.tile(2 * np.array(segment.start, dtype=np.int64), (len(along), 1))
    points[:, j] = along
    _, _, axes = stats_at_points(partition.pieces, points)
    return bool(axes[:, i].all())


def _longest_run(mask: np.ndarray) -> Tuple[int, int, int]:
    """(длина, начало, конец) самой длинной серии True в одномерном массиве."""
    best = (0, -1, -1)
    start = None
    for k, value in enumerate(list(mask) + [False]):
        if value and start is None:
            start = k
        elif not value and start is not None:
            if k - start > best[0]:
                best = (k - start, start, k - 1)
            start = None
    return best


def scan_segments(partition: LocalPartition) -> List[Segment]:
    """Полный перебор: самый длинный отрезок для каждой пары (направление, нормаль)."""
    window, pieces = partition.window, partition.pieces
    reps = cell_axes(window, pieces, interior=False)
    shape = tuple(len(r) for r in reps)
    points = cell_points(window, pieces, interior=False)
    _, _, axes = stats_at_points(pieces, points)
    found = []
    for i in range(partition.n):
        on_face = axes[:, i].reshape(shape)
        for j in range(partition.n):
            if j == i:
                continue
            best: Optional[Segment] = None
            moved = np.moveaxis(on_face, j, -1)
            other_axes = [k for k in range(partition.n) if k != j]
            for index in np.ndindex(moved.shape[:-1]):
                position = dict(zip(other_axes, index))
                # Плоскость грани - значение координаты строго внутри окна
                if position[i] % 2 == 1 or position[i] in (0, shape[i] - 1):
                    continue
                run, a, b = _longest_run(moved[index])
                if run == 0:
                    continue
                a = a if a % 2 == 0 else a - 1
                b = b if b % 2 == 0 else b + 1
                length = int(reps[j][b] - reps[j][a]) // 2
                if best is not None and length <= best.length:
                    continue
                start = []
                for k in range(partition.n):
                    idx = a if k == j else position[k] - position[k] % 2
                    start.append(int(reps[k][idx]) // 2)
                best = Segment(tuple(start), j, length, i, 'scan')
            if best is not None and best.length > 0:
                found.append(best)
    return sorted(found, key=lambda s: (-s.length, s.start, s.axis, s.face_axis))


def _trivial_segments(partition: LocalPartition, long_enough) -> List[Segment]:
    window = partition.window
    result = []
    for piece in sorted(partition.pieces):
        for j in range(partition.n):
            if not long_enough(piece.sides[j]):
                continue
            for i in range(partition.n):
                if i == j:
                    continue
                # Сначала грани внутри окна
                for value in sorted((piece.lo[i], piece.hi[i]), key=lambda v: v in (window.lo[i], window.hi[i])):
                    start = piece.lo[:i] + (value,) + piece.lo[i + 1:]
                    result.append(Segment(start, j, piece.sides[j], i, 'trivial'))
    return result


def _chain_segments(partition: LocalPartition, chain: SurfaceChain, long_enough) -> List[Segment]:
    axis = chain.axis
    result = []
    for step in chain.steps:
        m = step.rect
        if long_enough(step.d2 - step.d1):
            for k in range(m.n):
                for value in (m.lo[k], m.hi[k]):
                    start = m.lo[:k] + (value,) + m.lo[k + 1:]
                    point = start[:axis] + (step.d1,) + start[axis:]
                    result.append(Segment(point, axis, step.d2 - step.d1, _original_axis(axis, k), 'chain'))
        for k in range(m.n):
            if not long_enough(m.sides[k]):
                continue
            others = [a for a in range(m.n) if a != k]
            for corner in product(*((m.lo[a], m.hi[a]) for a in others)):
                start = list(m.lo)
                for a, value in zip(others, corner):
                    start[a] = value
                for level in (step.d1, step.d2):
                    point = tuple(start[:axis]) + (level,) + tuple(start[axis:])
                    result.append(Segment(point, _original_axis(axis, k), m.sides[k], axis, 'chain'))
    return result


def find_respected_segment(partition: LocalPartition, d: int, b: Optional[int] = None,
                           axis: Optional[int] = None) -> Segment:
    """
    Отрезок длины ≥ √(bd)/(n-1), параллельный e_j и лежащий на гранях с нормалью e_i ≠ e_j.

    Сначала куски с длинной стороной, затем рост цепочки поверхностей от
    нижнего уровня, затем полный перебор.
    """
    axis = _axis(partition, axis)
    n = partition.n
    if len(partition.pieces) <= 1:
        raise DomainError("find_respected_segment: тривиальное разбиение без внутренних граней")
    b = min(partition.window.sides) if b is None else b
    if not b > d > 0:
        raise DomainError(f"find_respected_segment: требуется b > d > 0, получено b={b}, d={d}")

    def long_enough(length: int) -> bool:
        return segment_bound_holds(length, b, d, n)

    for segment in _trivial_segments(partition, long_enough):
        if segment_on_faces(partition, segment):
            return segment

    chain = segment_chain(partition, axis)
    if chain is not None:
        for segment in _chain_segments(partition, chain, long_enough):
            if segment_on_faces(partition, segment):
                return segment

    logging.info("Surfaces: переход к полному перебору отрезков")
    for segment in scan_segments(partition):
        if long_enough(segment.length):
            return segment
    raise OracleFailure(f"find_respected_segment: нет отрезка длины √({b}·{d})/{n - 1}")


def segment_chain(partition: LocalPartition, axis: Optional[int] = None) -> Optional[SurfaceChain]:
    """Цепочка от первой прямоугольной максимальной поверхности нижнего уровня."""
    axis = _axis(partition, axis)
    found = levels(partition, axis)
    if not found:
        return None
    for surface in maximal_surfaces(partition, found[0], axis):
        rect = surface.rect
        if rect is not None:
            return surface_chain(partition, rect, found[0], axis)
    return None


def example_towers() -> LocalPartition:
    """Две башни разной высоты; над низкой - крышка."""
    window = HalfRect((0, 0, 0), (8, 4, 8))
    return LocalPartition(window, (HalfRect((0, 0, 0), (4, 4, 4)), HalfRect((0, 0, 4), (4, 4, 8)),
                                   HalfRect((4, 0, 0), (8, 4, 8))))


def example_staircase() -> LocalPartition:
    """Ступенька: поверхность [0,4]×[0,4] на уровне 2 дорастает до [0,8]×[0,4] на уровне 4."""
    window = HalfRect((0, 0, 0), (8, 4, 8))
    return LocalPartition(window, (HalfRect((0, 0, 0), (4, 4, 2)), HalfRect((0, 0, 2), (4, 4, 4)),
                                   HalfRect((4, 0, 0), (8, 4, 4)), HalfRect((0, 0, 4), (8, 4, 8))))


def example_growing_chain() -> LocalPartition:
    """
    Плоское разбиение [0,20]^2 со сторонами кусков ≤ 8: длинных граней нет,
    цепочка растёт [0,4] → [0,8] → [0,12] → [0,20] на уровнях 4, 8, 12, 16.
    """
    window = HalfRect((0, 0), (20, 20))
    boxes = (((0, 0), (4, 4)), ((0, 4), (4, 8)), ((4, 0), (8, 8)), ((8, 0), (12, 4)), ((8, 4), (12, 12)),
             ((12, 0), (20, 8)), ((0, 8), (8, 12)), ((12, 8), (20, 16)), ((0, 12), (4, 16)), ((4, 12), (12, 16)),
             ((0, 16), (8, 20)), ((8, 16), (16, 20)), ((16, 16), (20, 20)))
    return LocalPartition(window, tuple(HalfRect(lo, hi) for lo, hi in boxes))


class SurfacesService:
    """Служба проверки поверхностей на минимальных разбиениях."""

    def __init__(self, dimensions: Sequence[int] = Config.ENUMERATED_DIMENSIONS):
        self.dimensions = tuple(dimensions)
        logging.info(f"Surfaces: Служба инициализирована (n ∈ {self.dimensions}).")

    def _check_examples(self, report: SuiteReport):
        window = HalfRect.cube(3, 0, 8)
        report.add('levels-window', levels(LocalPartition(window, (window,))) == [], '{window} без уровней')
        split = LocalPartition(window, (window.with_interval(2, 0, 4), window.with_interval(2, 4, 8)))
        report.add('levels-split', levels(split) == [4], f'{levels(split)}')
        whole = maximal_surfaces(split, 4)
        report.add('surface-split', len(whole) == 1 and whole[0].rect == window.project(2), f'{whole}')
        report.add('span-full', virtual_span(split, window.project(2), 4) == 8, 'полное сечение до верха окна')

        towers = example_towers()
        surfaces = maximal_surfaces(towers, 4)
        report.add('towers', [s.rect for s in surfaces] == [HalfRect((0, 0), (4, 4))], f'{surfaces}')
        staircase = example_staircase()
        m1 = HalfRect((0, 0), (4, 4))
        d2 = virtual_span(staircase, m1, 2)
        step = grow_surface(staircase, m1, 2, d2)
        report.add('staircase', step.case == 'maximal' and step.after == HalfRect((0, 0), (8, 4)), f'{step}')

        l_shape = (HalfRect((0, 0), (4, 2)), HalfRect((0, 2), (2, 4)))
        report.add('l-shape', not is_box_like(l_shape)[0], 'L-образная область не прямоугольник')
        cross = (HalfRect((0, 2, 2), (6, 4, 4)), HalfRect((2, 0, 2), (4, 6, 4)), HalfRect((2, 2, 0), (4, 4, 6)))
        report.add('cross', not is_box_like(cross)[0], 'трёхмерный крест не прямоугольник')

    def _check_partition(self, partition: LocalPartition, failures: List[str]):
        top = partition.window.hi[partition.n - 1]
        for level in levels(partition):
            for surface in maximal_surfaces(partition, level):
                rect = surface.rect
                if rect is None:
                    failures.append(f'поверхность на уровне {level} не прямоугольник')
                    continue
                d1, d2 = vms_interval(partition, surface)
                if not d1 < level < d2:
                    failures.append(f'vms на уровне {level}: ({d1}, {d2})')
                if d2 < top:
                    step = grow_surface(partition, rect, level, d2)
                    if step.case == 'virtual' and len(step.grown_axes) != 1:
                        failures.append(f'рост {step} не по одной оси')
                chain = surface_chain(partition, rect, level)
                if not chain.is_monotone():
                    failures.append(f'цепочка от уровня {level} не монотонна')

    def _check_enumerated(self, report: SuiteReport):
        from services.minimal_local import enumerate_minimal_about

        for n in self.dimensions:
            failures: List[str] = []
            count = 0
            for k in range(n + 1):
                for about in enumerate_minimal_about(n, k):
                    count += 1
                    self._check_partition(about.base, failures)
            report.add(f'enumerated-n{n}', not failures, f'{count} разбиений' + ('; ' + failures[0] if failures else ''))

    def _check_periodic(self, report: SuiteReport):
        from services.global_partitions import orthogonal_minimal_pair

        for n, side in Config.PERIODIC_WINDOWS.items():
            for name, partition in zip('PQ', orthogonal_minimal_pair(n)):
                local = partition.window(HalfRect.cube(n, 1, 1 + side))
                failures: List[str] = []
                self._check_partition(local, failures)
                report.add(f'periodic-n{n}-{name}', not failures,
                           f'{len(local.pieces)} кусков' + ('; ' + failures[0] if failures else ''))

    def _check_segments(self, report: SuiteReport):
        from services.global_partitions import orthogonal_minimal_pair

        first, _ = orthogonal_minimal_pair(3)
        for side in Config.SEGMENT_WINDOWS:
            local = first.window(HalfRect.cube(3, 0, side))
            segment = find_respected_segment(local, Config.SEGMENT_D)
            ok = segment_bound_holds(segment.length, side, Config.SEGMENT_D, 3)
            report.add(f'segment-b{side // 2}-d{Config.SEGMENT_D // 2}', ok and segment_on_faces(local, segment),
                       f'{segment}')

        growing = example_growing_chain()
        segment = find_respected_segment(growing, Config.SEGMENT_D)
        chain = segment_chain(growing)
        steps = [max(grown) for grown in chain.increases()]
        report.add('segment-chain', segment.source == 'chain' and segment_on_faces(growing, segment)
                   and all(step >= Config.SEGMENT_D for step in steps), f'{segment}, приросты {steps}')

        small = first.window(HalfRect.cube(3, 1, 25))
        if len(small.pieces) <= Config.SCAN_MAX_PIECES:
            found = find_respected_segment(small, Config.SEGMENT_D)
            best = scan_segments(small)
            report.add('segment-scan', bool(best) and best[0].length >= found.length and segment_on_faces(small, found),
                       f'найден {found.length}, перебор {best[0].length if best else 0}')

    def run(self) -> SuiteReport:
        report = SuiteReport('surfaces')
        started = time.monotonic()
        checks = (('examples', self._check_examples), ('enumerated', self._check_enumerated),
                  ('periodic', self._check_periodic), ('segments', self._check_segments))
        for name, check in checks:
            try:
                check(report)
            except Exception as e:
                logging.error(f"Surfaces: ❌ Ошибка в проверке {name}: {e}")
                report.add(name, False, f'исключение: {e}')
        report.elapsed = time.monotonic() - started
        return report


async def main() -> SuiteReport:
    """Точка входа для набора поверхностей."""
    service = SurfacesService()
    return await asyncio.get_running_loop().run_in_executor(None, service.run)


if __name__ == "__main__":
    asyncio.run(main())
