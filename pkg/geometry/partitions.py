# geometry/partitions.py
"""
Локальные разбиения окна на прямоугольники и их проверка.

Все «сканирования» выполняются по ячейкам решётки, порождённой координатами
кусков: значениям координат и серединам интервалов между ними. Чтобы середины
оставались целыми, точки сканирования хранятся в удвоенных полуединицах.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import FrozenSet, List, Optional, Sequence, Tuple, Union

import numpy as np

from geometry.errors import DomainError
from geometry.geometry_config import GeometryConfig
from geometry.rects import GridPoint, HalfRect

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class LocalPartition:
    """Конечный набор полноразмерных прямоугольников внутри окна."""
    window: HalfRect
    pieces: Tuple[HalfRect, ...]

    def __post_init__(self):
        if not self.window.is_full:
            raise DomainError(f"LocalPartition: окно {self.window} вырождено")
        object.__setattr__(self, 'pieces', tuple(self.pieces))
        for piece in self.pieces:
            if piece.n != self.window.n:
                raise DomainError(f"LocalPartition: кусок {piece} другой размерности")

    @property
    def n(self) -> int:
        return self.window.n

    def sorted_pieces(self) -> Tuple[HalfRect, ...]:
        return tuple(sorted(self.pieces))

    def same_pieces(self, other: 'LocalPartition') -> bool:
        return self.window == other.window and self.sorted_pieces() == other.sorted_pieces()


@dataclass(frozen=True)
class AboutPartition:
    """Локальное разбиение «около x»: все внутренние грани проходят через x."""
    base: LocalPartition
    x: GridPoint

    def __post_init__(self):
        object.__setattr__(self, 'x', tuple(int(c) for c in self.x))
        if len(self.x) != self.base.n:
            raise DomainError(f"AboutPartition: точка {self.x} не из R^{self.base.n}")

    @property
    def window(self) -> HalfRect:
        return self.base.window

    @property
    def pieces(self) -> Tuple[HalfRect, ...]:
        return self.base.pieces

    @property
    def n(self) -> int:
        return self.base.n

    @classmethod
    def of(cls, window: HalfRect, pieces: Sequence[HalfRect], x: Sequence[int]) -> 'AboutPartition':
        return cls(LocalPartition(window, tuple(pieces)), tuple(x))


@dataclass(frozen=True)
class ValidationReport:
    """Результат validate_local_partition; при неудаче содержит свидетеля."""
    valid: bool
    degenerate_piece: Optional[int] = None
    outside_piece: Optional[int] = None
    overlap: Optional[Tuple[int, int]] = None
    uncovered_cell: Optional[HalfRect] = None
    about: Optional[bool] = None
    about_violation: Optional[Tuple[int, int]] = None

    @property
    def valid_about(self) -> bool:
        return self.valid and bool(self.about)


@dataclass(frozen=True)
class PointStats:
    nu: int
    beta: int
    vectors: FrozenSet[int]  # оси j, для которых e_j - граничный вектор


@dataclass(frozen=True)
class Localization:
    about: AboutPartition
    scale: int  # 1 - полуединицы, 2 - четверти единицы


PartitionLike = Union[LocalPartition, AboutPartition, Sequence[HalfRect]]


def _pieces_of(partition: PartitionLike) -> Tuple[HalfRect, ...]:
    if isinstance(partition, AboutPartition):
        return partition.pieces
    if isinstance(partition, LocalPartition):
        return partition.pieces
    return tuple(partition)


def _bounds(pieces: Sequence[HalfRect]) -> Tuple[np.ndarray, np.ndarray]:
    lo = np.array([p.lo for p in pieces], dtype=np.int64)
    hi = np.array([p.hi for p in pieces], dtype=np.int64)
    return lo, hi


def axis_coordinates(window: HalfRect, pieces: Sequence[HalfRect]) -> List[np.ndarray]:
    """Отсортированные координаты кусков и окна по каждой оси (внутри окна)."""
    coords = []
    for axis in range(window.n):
        values = {window.lo[axis], window.hi[axis]}
        for piece in pieces:
            values.update((piece.lo[axis], piece.hi[axis]))
        values = [v for v in values if window.lo[axis] <= v <= window.hi[axis]]
        coords.append(np.array(sorted(values), dtype=np.int64))
    return coords


def cell_axes(window: HalfRect, pieces: Sequence[HalfRect], interior: bool = True) -> List[np.ndarray]:
    """
    Представители ячеек по каждой оси в удвоенных полуединицах.

    Берутся значения координат и середины соседних интервалов; при
    interior=False значения и середины чередуются, начиная со значения.
    При interior=True точки на границе окна отбрасываются.
    """
    per_axis = []
    for axis, values in enumerate(axis_coordinates(window, pieces)):
        doubled = set((2 * values).tolist())
        doubled.update((values[:-1] + values[1:]).tolist())
        if interior:
            doubled.discard(2 * window.lo[axis])
            doubled.discard(2 * window.hi[axis])
        per_axis.append(np.array(sorted(doubled), dtype=np.int64))
    return per_axis


def cell_points(window: HalfRect, pieces: Sequence[HalfRect], interior: bool = True) -> np.ndarray:
    """Все представители ячеек решётки (удвоенные полуединицы), N×n."""
    per_axis = cell_axes(window, pieces, interior)
    if any(len(v) == 0 for v in per_axis):
        return np.zeros((0, window.n), dtype=np.int64)
    mesh = np.meshgrid(*per_axis, indexing='ij')
    return np.stack([m.ravel() for m in mesh], axis=1)


def stats_at_points(pieces: Sequence[HalfRect], points2: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    ν, β и маска граничных осей в точках (удвоенные полуединицы).

    Возвращает (nu[N], beta[N], axes[N, n]).
    """
    lo, hi = _bounds(pieces)
    return stats_from_bounds(lo, hi, points2)


def stats_from_bounds(lo: np.ndarray, hi: np.ndarray, points2: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """То же по массивам углов lo[M, n], hi[M, n] в полуединицах."""
    lo2, hi2 = 2 * lo, 2 * hi
    total = points2.shape[0]
    n = points2.shape[1] if points2.ndim == 2 else lo2.shape[1]
    nu = np.zeros(total, dtype=np.int64)
    axes = np.zeros((total, n), dtype=bool)
    chunk = max(1, GeometryConfig.SCAN_CHUNK)
    for start in range(0, total, chunk):
        pts = points2[start:start + chunk, None, :]
        inside = np.all((lo2[None] <= pts) & (pts <= hi2[None]), axis=2)
        on_face = ((pts == lo2[None]) | (pts == hi2[None])) & inside[:, :, None]
        nu[start:start + chunk] = inside.sum(axis=1)
        axes[start:start + chunk] = on_face.any(axis=1)
    return nu, axes.sum(axis=1), axes


def _first_overlap(pieces: Sequence[HalfRect]) -> Optional[Tuple[int, int]]:
    if len(pieces) < 2:
        return None
    lo, hi = _bounds(pieces)
    overlap = np.all(np.maximum(lo[:, None, :], lo[None, :, :]) < np.minimum(hi[:, None, :], hi[None, :, :]), axis=2)
    overlap = np.triu(overlap, k=1)
    found = np.argwhere(overlap)
    if len(found) == 0:
        return None
    return int(found[0][0]), int(found[0][1])


def _first_uncovered(window: HalfRect, pieces: Sequence[HalfRect]) -> Optional[HalfRect]:
    coords = axis_coordinates(window, pieces)
    covered = coverage_grid(pieces, coords)
    missing = np.argwhere(~covered)
    if len(missing) == 0:
        return None
    cell = missing[0]
    return HalfRect(tuple(int(coords[i][k]) for i, k in enumerate(cell)),
                    tuple(int(coords[i][k + 1]) for i, k in enumerate(cell)))


def about_violation(window: HalfRect, pieces: Sequence[HalfRect], x: Sequence[int]) -> Optional[Tuple[int, int]]:
    """(кусок, ось) первой грани, которая не проходит через x и не лежит на грани окна; (кусок, -1) если x ∉ кусок."""
    for index, piece in enumerate(pieces):
        if not piece.contains(x):
            return index, -1
        for axis in range(window.n):
            if piece.lo[axis] not in (window.lo[axis], x[axis]) or piece.hi[axis] not in (window.hi[axis], x[axis]):
                return index, axis
    return None


def validate_local_partition(pieces: Sequence[HalfRect], window: HalfRect,
                             x: Optional[Sequence[int]] = None) -> ValidationReport:
    """Проверяет покрытие окна, непересечение внутренностей и (опционально) свойство «около x»."""
    pieces = tuple(pieces)
    about = None
    violation = None
    if x is not None:
        x = tuple(x)
        violation = about_violation(window, pieces, x) if window.interior_contains(x) else (-1, -1)
        about = violation is None

    for index, piece in enumerate(pieces):
        if piece.n != window.n or not piece.is_full:
            return ValidationReport(False, degenerate_piece=index, about=about, about_violation=violation)
    for index, piece in enumerate(pieces):
        if not window.contains_rect(piece):
            return ValidationReport(False, outside_piece=index, about=about, about_violation=violation)
    overlap = _first_overlap(pieces)
    if overlap is not None:
        return ValidationReport(False, overlap=overlap, about=about, about_violation=violation)
    if sum(p.volume for p in pieces) != window.volume:
        uncovered = _first_uncovered(window, pieces)
        return ValidationReport(False, uncovered_cell=uncovered, about=about, about_violation=violation)
    return ValidationReport(True, about=about, about_violation=violation)


def point_stats(partition: Union[LocalPartition, AboutPartition], x: Sequence[int]) -> PointStats:
    """ν - число кусков, содержащих x; β - число различных граничных векторов."""
    base = partition.base if isinstance(partition, AboutPartition) else partition
    x = tuple(x)
    if len(x) != base.n or not base.window.interior_contains(x):
        raise DomainError(f"point_stats: точка {x} не внутри окна {base.window}")
    nu, beta, axes = stats_at_points(base.pieces, 2 * np.array([x], dtype=np.int64))
    vectors = frozenset(int(j) for j in np.flatnonzero(axes[0]))
    return PointStats(int(nu[0]), int(beta[0]), vectors)


def restrict_to_window(partition: PartitionLike, rect: HalfRect) -> LocalPartition:
    """{P ∩ R : P ∩ R полноразмерно}."""
    if not rect.is_full:
        raise DomainError(f"restrict_to_window: окно {rect} вырождено")
    if isinstance(partition, (LocalPartition, AboutPartition)):
        window = partition.window
        if not window.contains_rect(rect):
            raise DomainError(f"restrict_to_window: {rect} не лежит в {window}")
    result = []
    for piece in _pieces_of(partition):
        part = piece.intersect(rect)
        if part is not None and part.is_full:
            result.append(part)
    return LocalPartition(rect, tuple(result))


def localize_about(partition: LocalPartition, x: Sequence[int], shrink: bool = True) -> Localization:
    """
    Окно R_x вокруг x, в котором индуцированное разбиение «около x».

    По каждой оси c- и c+ - ближайшие координаты кусков (или окна) слева и
    справа от x_i. По умолчанию берётся наибольший ящик сетки внутри
    открытого (c-, c+); если x_i отстоит от c± ровно на 1, все координаты
    удваиваются (четверти единицы). С shrink=False R_x = Π[c-, c+].
    """
    x = tuple(x)
    window = partition.window
    if len(x) != window.n or not window.interior_contains(x):
        raise DomainError(f"localize_about: точка {x} не внутри окна {window}")

    coords = axis_coordinates(window, partition.pieces)
    below = [int(c[c < v].max()) for c, v in zip(coords, x)]
    above = [int(c[c > v].min()) for c, v in zip(coords, x)]

    scale = 1
    pieces = partition.pieces
    if shrink:
        if any(v - a == 1 or b - v == 1 for a, v, b in zip(below, x, above)):
            scale = GeometryConfig.REFINEMENT_FACTOR
            logger.info(f"localize_about: переход к четвертям единицы около {x}")
        x = tuple(v * scale for v in x)
        below = [a * scale + 1 for a in below]
        above = [b * scale - 1 for b in above]
        pieces = tuple(p.scaled(scale) for p in pieces)

    rect = HalfRect(tuple(below), tuple(above))
    local = restrict_to_window(LocalPartition(window.scaled(scale), pieces), rect)
    return Localization(AboutPartition(local, x), scale)


def slice_partition(partition: LocalPartition, axis: int, level: int) -> LocalPartition:
    """Сечение на высоте level, не являющейся уровнем: (n-1)-мерное разбиение."""
    window = partition.window
    if not window.lo[axis] < level < window.hi[axis]:
        raise DomainError(f"slice_partition: высота {level} вне окна по оси {axis}")
    if any(level in (p.lo[axis], p.hi[axis]) for p in partition.pieces):
        raise DomainError(f"slice_partition: высота {level} является уровнем")
    pieces = tuple(p.project(axis) for p in partition.pieces if p.lo[axis] < level < p.hi[axis])
    return LocalPartition(window.project(axis), pieces)


def is_about(partition: AboutPartition) -> bool:
    return validate_local_partition(partition.pieces, partition.window, partition.x).valid_about


def coverage_grid(boxes: Sequence[HalfRect], coords: List[np.ndarray]) -> np.ndarray:
    covered = np.zeros([max(len(c) - 1, 0) for c in coords], dtype=bool)
    for box in boxes:
        index = tuple(slice(int(np.searchsorted(c, box.lo[i])), int(np.searchsorted(c, box.hi[i])))
                      for i, c in enumerate(coords))
        covered[index] = True
    return covered


def union_equal(first: Sequence[HalfRect], second: Sequence[HalfRect]) -> bool:
    """Совпадают ли объединения двух наборов полноразмерных прямоугольников."""
    first, second = tuple(first), tuple(second)
    if not first or not second:
        return not first and not second
    n = first[0].n
    coords = [np.array(sorted({v for b in first + second for v in (b.lo[i], b.hi[i])}), dtype=np.int64)
              for i in range(n)]
    return bool(np.array_equal(coverage_grid(first, coords), coverage_grid(second, coords)))
